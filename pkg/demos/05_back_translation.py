"""
Stretching a small corpus with back-translation
===============================================

Monolingual target-language text is cheap. Translating it backwards
with the reverse lexicon yields synthetic source sides; merging them
under a cap keeps the synthetic share from swamping the mined data.
"""

from corpusforge import (
    NaiveTranslator,
    Sentence,
    SentencePair,
    back_translate,
    merge_corpora,
    train_model1,
)


def pair(i, src, tgt):
    return SentencePair(
        Sentence.make("mined", i, src, "am"),
        Sentence.make("mined", i, tgt, "en"),
        "mined",
    )


# A mined corpus of six pairs and a reverse (en -> am) lexicon trained
# from its swapped form.
mined = [
    pair(0, "ውሃ ጠጣ", "drink water"),
    pair(1, "ዳቦ በላ", "eat bread"),
    pair(2, "ቡና ጠጣ", "drink coffee"),
    pair(3, "ቤት ገባ", "enter the house"),
    pair(4, "ውሻ ሮጠ", "the dog ran"),
    pair(5, "ድመት ተኛ", "the cat slept"),
]
reverse_table = train_model1(
    [SentencePair(p.tgt, p.src, "seed") for p in mined], 15
)

# Fresh monolingual English, including one sentence the lexicon has
# never seen a word of.
mono = [
    Sentence.make("news", 0, "drink bread", "en"),
    Sentence.make("news", 1, "the cat ran", "en"),
    Sentence.make("news", 2, "eat the coffee", "en"),
    Sentence.make("news", 3, "quantum entanglement", "en"),
]
synthetic = back_translate(mono, NaiveTranslator(reverse_table), src_lang="am")
print("synthetic pairs (source side is machine output):")
for p in synthetic:
    print(f"  {p.src.text!r:30} <- {p.tgt.text!r}")
print()

# merge_corpora keeps every mined pair and appends synthetic pairs up
# to floor(cap_ratio * mined). With six mined pairs and a 0.5 ratio,
# only three synthetic pairs fit.
merged = merge_corpora(mined, synthetic, cap_ratio=0.5)
print(f"merged corpus: {merged.counts}")
for p in merged.pairs:
    print(f"  [{p.origin:9}] {p.src.text} ||| {p.tgt.text}")
