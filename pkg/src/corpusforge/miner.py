"""Candidate pair generation and dual cross-entropy filtering.

Comparable document pairs are scanned with a position window and length
ratio gate to produce candidate sentence pairs; each candidate is scored
with cross-entropies from the two inverse lexical models and kept when
score = exp(-(weighted mean + |disagreement|)) clears the threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .lexmodel import DEFAULT_FLOOR, LexTable, SentencePair, cross_entropy
from .textprep import Sentence, hash64


@dataclass(frozen=True)
class FilterConfig:
    """Knobs of the mining filter.

    w weights the forward model in the entropy mean; threshold is the
    minimum score to accept; window bounds |i - j * len_scale| for
    candidate positions; ratio_bounds bound src/tgt character ratio.
    """

    w: float = 0.5
    threshold: float = 0.5
    window: int = 5
    ratio_bounds: tuple[float, float] = (0.5, 2.0)

    def __post_init__(self):
        if not 0.0 <= self.w <= 1.0:
            raise ValueError(f"w must be in [0, 1], got {self.w}")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must be in (0, 1), got {self.threshold}")
        if self.window < 0:
            raise ValueError(f"window must be >= 0, got {self.window}")
        lo, hi = self.ratio_bounds
        if not 0 < lo < hi:
            raise ValueError(
                f"ratio_bounds must satisfy 0 < lo < hi, got {self.ratio_bounds}"
            )


@dataclass(frozen=True)
class CandidatePair:
    src: Sentence
    tgt: Sentence
    pos_src: int
    pos_tgt: int
    len_ratio: float


@dataclass(frozen=True)
class ScoredPair:
    pair: CandidatePair
    h_fwd: float
    h_rev: float
    score: float
    accepted: bool


def generate_candidates(
    src_doc: Sequence[Sentence],
    tgt_doc: Sequence[Sentence],
    cfg: FilterConfig,
) -> list[CandidatePair]:
    """Position-window candidate generation.

    Emits (i, j) iff |i - j * (len(src_doc) / len(tgt_doc))| <= window and
    the character-length ratio lies inside ratio_bounds; ordered by (i, j).
    """
    if not src_doc or not tgt_doc:
        raise ValueError("documents must be non-empty")
    scale = len(src_doc) / len(tgt_doc)
    lo, hi = cfg.ratio_bounds
    out = []
    for i, src in enumerate(src_doc):
        for j, tgt in enumerate(tgt_doc):
            if abs(i - j * scale) > cfg.window:
                continue
            ratio = len(src.text) / len(tgt.text)
            if not lo <= ratio <= hi:
                continue
            out.append(CandidatePair(src, tgt, i, j, ratio))
    return out


def dual_score_value(h_fwd: float, h_rev: float, w: float = 0.5) -> float:
    """score = exp(-(w*h_fwd + (1-w)*h_rev + |h_fwd - h_rev|)).

    1 at perfect agreement with zero entropy, decaying with both the
    weighted entropy mean and the cross-direction disagreement.
    """
    mean = w * h_fwd + (1.0 - w) * h_rev
    disagreement = abs(h_fwd - h_rev)
    return math.exp(-(mean + disagreement))


def dual_score(
    pair: CandidatePair,
    fwd: LexTable,
    rev: LexTable,
    cfg: FilterConfig,
    floor: float = DEFAULT_FLOOR,
) -> ScoredPair:
    """Score one candidate with both model directions."""
    h_fwd = cross_entropy(pair.src, pair.tgt, fwd, floor)
    h_rev = cross_entropy(pair.tgt, pair.src, rev, floor)
    score = dual_score_value(h_fwd, h_rev, cfg.w)
    return ScoredPair(pair, h_fwd, h_rev, score, score >= cfg.threshold)


def mine_corpus(
    doc_pairs: Iterable[tuple[Sequence[Sentence], Sequence[Sentence]]],
    fwd: LexTable,
    rev: LexTable,
    cfg: FilterConfig,
    floor: float = DEFAULT_FLOOR,
) -> list[SentencePair]:
    """Mine accepted pairs from comparable document pairs.

    Greedy one-to-one by source sentence: scored candidates are walked in
    descending score order (ties by doc ids, then positions) and a source
    sentence is paired at most once. Result sorted by descending score.
    """
    accepted: list[ScoredPair] = []
    for src_doc, tgt_doc in doc_pairs:
        for cand in generate_candidates(src_doc, tgt_doc, cfg):
            scored = dual_score(cand, fwd, rev, cfg, floor)
            if scored.accepted:
                accepted.append(scored)
    accepted.sort(
        key=lambda s: (
            -s.score,
            s.pair.src.doc_id,
            s.pair.tgt.doc_id,
            s.pair.pos_src,
            s.pair.pos_tgt,
        )
    )
    taken: set[tuple[str, int]] = set()
    out: list[SentencePair] = []
    for s in accepted:
        key = (s.pair.src.doc_id, s.pair.src.index)
        if key in taken:
            continue
        taken.add(key)
        out.append(SentencePair(s.pair.src, s.pair.tgt, "mined", score=s.score))
    return out


# ---------------------------------------------------------------------------
# Corpus file format: score, src_lang, tgt_lang, src_text, tgt_text
# with an optional trailing origin column (used by the augment stage).


def write_corpus(
    path: str | Path, pairs: Iterable[SentencePair], include_origin: bool = False
) -> int:
    rows = 0
    with open(path, "w", encoding="utf-8") as fh:
        for p in pairs:
            score = "" if p.score is None else f"{p.score:.6f}"
            cols = [score, p.src.lang, p.tgt.lang, p.src.text, p.tgt.text]
            if include_origin:
                cols.append(p.origin)
            fh.write("\t".join(cols) + "\n")
            rows += 1
    return rows


def read_corpus(path: str | Path) -> list[SentencePair]:
    """Read a 5- or 6-column corpus file back into pairs.

    Sentence doc ids are synthesized from the file name; the text, langs,
    score, and origin round-trip exactly.
    """
    stem = Path(path).stem
    out = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) == 5:
                score_s, src_lang, tgt_lang, src_text, tgt_text = cols
                origin = "mined"
            elif len(cols) == 6:
                score_s, src_lang, tgt_lang, src_text, tgt_text, origin = cols
            else:
                raise ValueError(f"{path}:{i + 1}: expected 5 or 6 columns, got {len(cols)}")
            score = float(score_s) if score_s else None
            src = Sentence(f"{stem}:src", i, src_text, src_lang, hash64(src_text))
            tgt = Sentence(f"{stem}:tgt", i, tgt_text, tgt_lang, hash64(tgt_text))
            out.append(SentencePair(src, tgt, origin, score=score))
    return out
