"""
Mining parallel sentences from comparable documents
===================================================

Two document collections talk about the same things without being
translations of each other line by line. The miner scores candidate
sentence pairs with dual cross-entropy and keeps the ones both
directions of the lexicon agree on.
"""

import random

from corpusforge import (
    FilterConfig,
    Sentence,
    SentencePair,
    mine_corpus,
    train_model1,
)

rng = random.Random(12)

# A 30-entry bijective toy lexicon stands in for the real seed corpus.
src_words = [f"src{i:02d}" for i in range(30)]
tgt_words = [f"tgt{i:02d}" for i in range(30)]
mapping = list(range(30))
rng.shuffle(mapping)

# Seed corpus: shuffled full passes over the lexicon, five words per
# row, so every word is seen several times in random company.
stream = []
for _ in range(4):
    block = list(range(30))
    rng.shuffle(block)
    stream += block
seed = []
for r in range(len(stream) // 5):
    idx = stream[r * 5 : (r + 1) * 5]
    seed.append(SentencePair(
        Sentence.make("seed", r, " ".join(src_words[i] for i in idx), "xx"),
        Sentence.make("seed", r, " ".join(tgt_words[mapping[i]] for i in idx), "yy"),
        "seed",
    ))
fwd = train_model1(seed, 10)
rev = train_model1([SentencePair(p.tgt, p.src, "seed") for p in seed], 10)

# Build two "documents" that share 10 true pairs, drowned in unrelated
# sentences on both sides.
true_pairs = []
src_doc, tgt_doc = [], []
for k in range(10):
    i = k * 3
    src_doc.append(src_words[i])
    tgt_doc.append(tgt_words[mapping[i]])
    true_pairs.append((src_words[i], tgt_words[mapping[i]]))
    src_doc.append(f"noise-a-{k}")
    tgt_doc.append(f"noise-b-{k}")
docs = [(
    [Sentence.make("da", j, t, "xx") for j, t in enumerate(src_doc)],
    [Sentence.make("db", j, t, "yy") for j, t in enumerate(tgt_doc)],
)]

mined = mine_corpus(docs, fwd, rev, FilterConfig())
print(f"mined {len(mined)} pairs (10 planted):")
for p in mined:
    marker = "true" if (p.src.text, p.tgt.text) in true_pairs else "FALSE"
    print(f"  {p.score:.3f}  {p.src.text} ||| {p.tgt.text}  [{marker}]")

recovered = {(p.src.text, p.tgt.text) for p in mined}
print(f"\nrecall: {len(recovered & set(true_pairs))}/10, "
      f"false positives: {len(recovered - set(true_pairs))}")
