"""Lexical translation tables and sentence cross-entropies.

The two inverse translation models used for pair filtering are IBM
Model 1 tables trained by EM, without a NULL source token. They give
closed-form hand-checkable updates and real length-normalized
cross-entropies, which is all the dual filter needs. The same tables
drive the naive word-by-word translator used as the back-translation
stand-in.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .textprep import Sentence

log = logging.getLogger(__name__)

ORIGINS = ("mined", "seed", "synthetic")

DEFAULT_FLOOR = 1e-9


@dataclass(frozen=True)
class SentencePair:
    """A source/target sentence pair with its provenance.

    ``score`` is the dual cross-entropy score for mined pairs and None
    for seed and synthetic pairs.
    """

    src: Sentence
    tgt: Sentence
    origin: str
    score: float | None = None

    def __post_init__(self):
        if self.origin not in ORIGINS:
            raise ValueError(f"origin must be one of {ORIGINS}, got {self.origin!r}")


@dataclass
class LexTable:
    """Word translation table t(tgt_word | src_word) for one direction.

    Every row (fixed src_word) sums to 1 within 1e-9 after training.
    """

    src_lang: str
    tgt_lang: str
    t: dict[str, dict[str, float]]
    src_vocab: set[str]
    tgt_vocab: set[str]

    def prob(self, src_word: str, tgt_word: str) -> float:
        return self.t.get(src_word, {}).get(tgt_word, 0.0)


def tokens(text: str) -> list[str]:
    """Whitespace tokens of normalized text."""
    return text.split()


def _usable_pairs(pairs: Iterable[SentencePair]) -> tuple[list[tuple[list[str], list[str]]], int]:
    usable = []
    skipped = 0
    for pair in pairs:
        src_toks = tokens(pair.src.text)
        tgt_toks = tokens(pair.tgt.text)
        if not src_toks or not tgt_toks:
            skipped += 1
            continue
        usable.append((src_toks, tgt_toks))
    return usable, skipped


def train_model1(pairs: Sequence[SentencePair], iterations: int) -> LexTable:
    """Train a Model 1 table by EM.

    t(f|e) starts uniform over the target words observed co-occurring
    with e; each sweep accumulates fractional counts
    c(f|e) += t(f|e) / sum over the source sentence of t(f|e') and
    renormalizes per source word. Runs exactly ``iterations`` sweeps,
    deterministically. Pairs with an empty side are skipped and counted.
    """
    if not pairs:
        raise ValueError("cannot train on an empty pair list")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    tokenized, skipped = _usable_pairs(pairs)
    if skipped:
        log.warning("train_model1 skipped %d pairs with an empty side", skipped)
    if not tokenized:
        raise ValueError("no usable pairs after skipping empty sides")

    src_lang = pairs[0].src.lang
    tgt_lang = pairs[0].tgt.lang

    cooc: dict[str, set[str]] = defaultdict(set)
    src_vocab: set[str] = set()
    tgt_vocab: set[str] = set()
    for src_toks, tgt_toks in tokenized:
        src_vocab.update(src_toks)
        tgt_vocab.update(tgt_toks)
        for e in set(src_toks):
            cooc[e].update(tgt_toks)

    t: dict[str, dict[str, float]] = {
        e: {f: 1.0 / len(fs) for f in sorted(fs)} for e, fs in sorted(cooc.items())
    }

    for _ in range(iterations):
        counts: dict[str, dict[str, float]] = {e: defaultdict(float) for e in t}
        for src_toks, tgt_toks in tokenized:
            rows = [t[e] for e in src_toks]
            for f in tgt_toks:
                denom = sum(row.get(f, 0.0) for row in rows)
                if denom <= 0.0:
                    continue
                for e, row in zip(src_toks, rows):
                    p = row.get(f, 0.0)
                    if p:
                        counts[e][f] += p / denom
        for e, row_counts in counts.items():
            total = sum(row_counts.values())
            if total > 0.0:
                t[e] = {f: c / total for f, c in sorted(row_counts.items())}

    return LexTable(src_lang, tgt_lang, t, src_vocab, tgt_vocab)


def sentence_log_prob(
    src_tokens: Sequence[str],
    tgt_tokens: Sequence[str],
    table: LexTable,
    floor: float | None = None,
) -> float:
    """ln p(tgt|src) under Model 1 with uniform alignment, no NULL.

    Each target word contributes ln[(1/l_src) * sum_i t(f|e_i)], with the
    inner sum floored when ``floor`` is given. Unfloored OOV words make
    the result -inf.
    """
    l_src = len(src_tokens)
    lp = 0.0
    for f in tgt_tokens:
        s = sum(table.prob(e, f) for e in src_tokens)
        if floor is not None:
            s = max(s, floor)
        if s <= 0.0:
            return float("-inf")
        lp += math.log(s / l_src)
    return lp


def cross_entropy(
    src: Sentence, tgt: Sentence, table: LexTable, floor: float = DEFAULT_FLOOR
) -> float:
    """Length-normalized cross-entropy, nats per target word.

    H = -ln p(tgt|src) / l_tgt, with each target word's inner probability
    sum floored at ``floor`` so OOV words cap out near -ln(floor) instead
    of infinity.
    """
    if floor <= 0:
        raise ValueError(f"floor must be > 0, got {floor}")
    if (src.lang, tgt.lang) != (table.src_lang, table.tgt_lang):
        raise ValueError(
            f"table direction {table.src_lang}->{table.tgt_lang} does not match "
            f"sentence pair {src.lang}->{tgt.lang}"
        )
    src_toks = tokens(src.text)
    tgt_toks = tokens(tgt.text)
    if not src_toks or not tgt_toks:
        raise ValueError("zero-length sentence")
    lp = sentence_log_prob(src_toks, tgt_toks, table, floor)
    return -lp / len(tgt_toks)


def corpus_log_likelihood(pairs: Iterable[SentencePair], table: LexTable) -> float:
    """Unfloored training objective: sum of ln p(tgt|src) over usable pairs."""
    tokenized, _ = _usable_pairs(pairs)
    return sum(sentence_log_prob(s, t, table) for s, t in tokenized)


def translate_text(text: str, table: LexTable) -> str:
    """Word-by-word argmax translation; OOV words copy through unchanged.

    Probability ties break on the lexicographically smallest target word.
    """
    out = []
    for e in tokens(text):
        row = table.t.get(e)
        if not row:
            out.append(e)
            continue
        best_p = max(row.values())
        out.append(min(f for f, p in row.items() if p == best_p))
    return " ".join(out)


def translate_naive(src: Sentence, table: LexTable) -> str:
    """Naive lexical translation of a sentence (see :func:`translate_text`)."""
    if src.lang != table.src_lang:
        raise ValueError(
            f"table translates {table.src_lang}, sentence is {src.lang}"
        )
    return translate_text(src.text, table)


# ---------------------------------------------------------------------------
# Table serialization: header line, then src_word \t tgt_word \t probability


def write_table(path: str | Path, table: LexTable) -> None:
    """Write a table as TSV with 12-significant-digit probabilities."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            f"{table.src_lang}\t{table.tgt_lang}\t{len(table.src_vocab)}\t{len(table.tgt_vocab)}\n"
        )
        for e in sorted(table.t):
            for f in sorted(table.t[e]):
                fh.write(f"{e}\t{f}\t{table.t[e][f]:.12g}\n")


def read_table(path: str | Path) -> LexTable:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if len(header) != 4:
            raise ValueError(f"malformed table header in {path}")
        src_lang, tgt_lang = header[0], header[1]
        t: dict[str, dict[str, float]] = {}
        src_vocab: set[str] = set()
        tgt_vocab: set[str] = set()
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            e, f, p = line.split("\t")
            t.setdefault(e, {})[f] = float(p)
            src_vocab.add(e)
            tgt_vocab.add(f)
    return LexTable(src_lang, tgt_lang, t, src_vocab, tgt_vocab)
