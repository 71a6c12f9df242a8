"""
A translation lexicon from aligned sentences
============================================

IBM Model 1 learns word-translation probabilities t(f|e) from nothing
but sentence pairs, by expectation-maximization. This demo trains on a
four-sentence toy corpus and watches the table sharpen.
"""

from corpusforge import (
    SentencePair,
    Sentence,
    corpus_log_likelihood,
    cross_entropy,
    train_model1,
)


def pair(i, src, tgt):
    return SentencePair(
        Sentence.make("demo", i, src, "de"),
        Sentence.make("demo", i, tgt, "en"),
        "seed",
    )


corpus = [
    pair(0, "das haus", "the house"),
    pair(1, "das buch", "the book"),
    pair(2, "ein buch", "a book"),
    pair(3, "ein haus", "a house"),
]

# After one iteration the model has only co-occurrence counts; "das"
# still hesitates between "the" and "house".
for iterations in (1, 5, 20):
    table = train_model1(corpus, iterations)
    ll = corpus_log_likelihood(corpus, table)
    t = table.t["das"]
    print(
        f"iter {iterations:2d}  log-likelihood {ll:8.4f}  "
        f"t(the|das)={t.get('the', 0):.3f}  t(house|das)={t.get('house', 0):.3f}"
    )
print()

# EM guarantees the likelihood never drops from one iteration to the
# next; the prints above show it climbing.

# Cross-entropy per target word is the miner's raw material: low for a
# sentence pair the table can explain, high for a mismatched one.
table = train_model1(corpus, 20)
good = pair(90, "das haus", "the house")
bad = pair(91, "das haus", "a book")
print(f"H(good pair) = {cross_entropy(good.src, good.tgt, table):.3f}")
print(f"H(bad pair)  = {cross_entropy(bad.src, bad.tgt, table):.3f}")
