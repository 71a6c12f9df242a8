"""Text normalization, sentence splitting, and deduplication.

Covers the cleanup stages between raw documents and minable sentences:
canonical whitespace/Unicode normalization, Ethiopic- and Latin-aware
sentence boundary detection, exact dedup, and MinHash near-dedup.
"""

from __future__ import annotations

import hashlib
import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .langid import (  # noqa: F401  (re-exported: language ID is a textprep stage)
    LangPrediction,
    LangProfile,
    LanguageIdentifier,
    detect_language,
    script_census,
)

if TYPE_CHECKING:
    from .ingest import Document

# Ethiopic punctuation. U+1361 is a word separator, never a terminator.
ETHIOPIC_WORD_SEPARATOR = "፡"  # ፡
SENTENCE_TERMINATORS = "።፧፨.!?"  # ። ፧ ፨ . ! ?

SHINGLE_SIZE = 5
MINHASH_PERMUTATIONS = 64
DEFAULT_MINHASH_SEED = 1

_WS_RUN = re.compile(r"\s+")
_HAS_LINEBREAK = re.compile(r"[\n\r  ]")


def collapse_whitespace(text: str) -> str:
    """Collapse each whitespace run to a single character.

    Runs containing a line break become one newline so that line structure
    survives for sentence splitting; all other runs become one space.
    """
    return _WS_RUN.sub(
        lambda m: "\n" if _HAS_LINEBREAK.search(m.group()) else " ", text
    )


def normalize(text: str) -> str:
    """Canonicalize text for hashing, alignment, and TSV output.

    NFC composition, removal of control characters other than line breaks,
    whitespace runs collapsed (horizontal runs to one space, runs with a
    line break to one newline), and outer whitespace stripped. Tabs never
    survive, which is what keeps the tab-separated corpus files lossless.
    """
    # controls go first: removing one later could expose a new
    # composable pair and break idempotence
    text = "".join(
        ch
        for ch in text
        if unicodedata.category(ch) != "Cc" or ch in "\t\n\r\x0b\x0c"
    )
    text = unicodedata.normalize("NFC", text)
    return collapse_whitespace(text).strip()


def hash64(text: str) -> int:
    """Stable 64-bit content hash (unlike ``hash()``, not process-salted)."""
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class Sentence:
    """A normalized, language-tagged sentence unit.

    ``index`` is the ordinal within the source document and is strictly
    increasing there; ``content_hash`` is a pure function of the normalized
    text (see :func:`hash64`).
    """

    doc_id: str
    index: int
    text: str
    lang: str  # am | ti | en | unknown
    content_hash: int

    @classmethod
    def make(cls, doc_id: str, index: int, text: str, lang: str) -> "Sentence":
        text = normalize(text)
        if not text:
            raise ValueError("sentence text is empty after normalization")
        return cls(doc_id, index, text, lang, hash64(text))


# ---------------------------------------------------------------------------
# Sentence splitting


def _load_abbreviations() -> frozenset[str]:
    data = resources.files("corpusforge.data").joinpath("abbreviations_en.txt")
    lines = data.read_text(encoding="utf-8").splitlines()
    return frozenset(
        ln.strip().lower() for ln in lines if ln.strip() and not ln.startswith("#")
    )


_EN_ABBREVIATIONS: frozenset[str] | None = None


def english_abbreviations() -> frozenset[str]:
    """Bundled English abbreviation list (lowercased, trailing dot kept)."""
    global _EN_ABBREVIATIONS
    if _EN_ABBREVIATIONS is None:
        _EN_ABBREVIATIONS = _load_abbreviations()
    return _EN_ABBREVIATIONS


_TOKEN_LEADING_PUNCT = "([{\"'“‘«"
_CLOSERS = ")]}\"'”’»"


def _ends_with_abbreviation(line: str, dot_index: int, abbrevs: frozenset[str]) -> bool:
    start = dot_index
    while start > 0 and not line[start - 1].isspace():
        start -= 1
    token = line[start : dot_index + 1].lstrip(_TOKEN_LEADING_PUNCT)
    return token.lower() in abbrevs


def split_text(text: str, lang: str) -> list[str]:
    """Split normalized text into sentence strings.

    A sentence ends after any terminator in ። ፧ ፨ . ! ? that is followed,
    optionally through closing quotes or brackets, by whitespace or end of
    line; the terminator and closers stay attached. Newlines always
    terminate. For ``lang == "en"`` a dot is not a boundary when the token
    it closes is a known abbreviation (Mr., Dr., U.S., No., ...). Empty
    segments are dropped.
    """
    abbrevs = english_abbreviations() if lang == "en" else frozenset()
    out: list[str] = []
    for line in text.split("\n"):
        start = 0
        for i, ch in enumerate(line):
            if ch not in SENTENCE_TERMINATORS:
                continue
            end = i + 1
            while end < len(line) and line[end] in _CLOSERS:
                end += 1
            if end < len(line) and not line[end].isspace():
                continue
            if ch == "." and abbrevs and _ends_with_abbreviation(line, i, abbrevs):
                continue
            out.append(line[start:end])
            start = end
        if start < len(line):
            out.append(line[start:])
    return [s for s in (seg.strip() for seg in out) if s]


def split_sentences(doc: "Document", lang: str) -> list[Sentence]:
    """Split a document (text already normalized) into Sentence records."""
    sentences = []
    for idx, text in enumerate(split_text(doc.text, lang)):
        sentences.append(Sentence(doc.id, idx, text, lang, hash64(text)))
    return sentences


# ---------------------------------------------------------------------------
# Deduplication


def dedup_exact(sentences: Iterable[Sentence]) -> list[Sentence]:
    """Drop later sentences whose normalized text was already seen.

    First occurrence wins (stable). Hash equality alone is not trusted:
    a collision is resolved by comparing the full text.
    """
    seen: dict[int, list[str]] = {}
    kept: list[Sentence] = []
    for sent in sentences:
        texts = seen.setdefault(sent.content_hash, [])
        if sent.text in texts:
            continue
        texts.append(sent.text)
        kept.append(sent)
    return kept


def shingles(text: str, size: int = SHINGLE_SIZE) -> set[str]:
    """Character shingle set; empty for text shorter than ``size``."""
    return {text[i : i + size] for i in range(len(text) - size + 1)}


def jaccard(a: set[str], b: set[str]) -> float:
    """Exact Jaccard similarity of two shingle sets (brute force)."""
    if not a and not b:
        return 1.0
    union = len(a | b)
    return len(a & b) / union if union else 0.0


_MERSENNE = np.uint64((1 << 61) - 1)


def _shingle_base_hash(shingle: str) -> int:
    return int.from_bytes(
        hashlib.blake2b(shingle.encode("utf-8"), digest_size=4).digest(), "big"
    )


class MinHasher:
    """MinHash signatures over character shingles.

    Permutations are (a*x + b) mod p with p = 2^61 - 1, a < 2^31 and the
    base shingle hash x < 2^32, so products stay inside uint64. Identical
    strings always receive identical signatures for a fixed seed.
    """

    def __init__(
        self,
        num_permutations: int = MINHASH_PERMUTATIONS,
        seed: int = DEFAULT_MINHASH_SEED,
        shingle_size: int = SHINGLE_SIZE,
    ):
        rng = np.random.default_rng(seed)
        self.num_permutations = num_permutations
        self.shingle_size = shingle_size
        self._a = rng.integers(1, 1 << 31, size=num_permutations, dtype=np.uint64)
        self._b = rng.integers(0, int(_MERSENNE), size=num_permutations, dtype=np.uint64)

    def signature(self, text: str) -> np.ndarray:
        """uint64 signature of length ``num_permutations``.

        Raises ValueError when the text yields no shingles.
        """
        grams = shingles(text, self.shingle_size)
        if not grams:
            raise ValueError(f"text shorter than shingle size {self.shingle_size}")
        xs = np.fromiter(
            (_shingle_base_hash(g) for g in grams), dtype=np.uint64, count=len(grams)
        )
        hashed = (self._a[:, None] * xs[None, :] + self._b[:, None]) % _MERSENNE
        return hashed.min(axis=1)

    @staticmethod
    def estimate(sig_a: np.ndarray, sig_b: np.ndarray) -> float:
        """Estimated Jaccard similarity: fraction of agreeing components."""
        return float(np.mean(sig_a == sig_b))


def dedup_near(
    sentences: Sequence[Sentence],
    threshold: float,
    hasher: MinHasher | None = None,
) -> list[Sentence]:
    """Drop sentences whose estimated Jaccard against any retained sentence
    reaches ``threshold``; scan is stable (input order).

    Sentences shorter than the shingle size carry no signature and are
    exempt: they are kept unless they exactly duplicate a retained text.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    hasher = hasher or MinHasher()
    kept: list[Sentence] = []
    kept_texts: set[str] = set()
    sigs = np.empty((len(sentences), hasher.num_permutations), dtype=np.uint64)
    n_sigs = 0
    for sent in sentences:
        if len(sent.text) < hasher.shingle_size:
            if sent.text in kept_texts:
                continue
        else:
            sig = hasher.signature(sent.text)
            if n_sigs:
                sims = np.mean(sigs[:n_sigs] == sig, axis=1)
                if float(sims.max()) >= threshold:
                    continue
            sigs[n_sigs] = sig
            n_sigs += 1
        kept.append(sent)
        kept_texts.add(sent.text)
    return kept


# ---------------------------------------------------------------------------
# Sentence file format: TSV with columns doc_id, index, lang, text


def write_sentences(path: str | Path, sentences: Iterable[Sentence]) -> int:
    """Write sentences as TSV; returns the row count.

    Normalized text is tab- and newline-free, so the format round-trips.
    """
    rows = 0
    with open(path, "w", encoding="utf-8") as fh:
        for s in sentences:
            if "\t" in s.text or "\n" in s.text:
                raise ValueError(f"unnormalized sentence text: {s.text!r}")
            fh.write(f"{s.doc_id}\t{s.index}\t{s.lang}\t{s.text}\n")
            rows += 1
    return rows


def read_sentences(path: str | Path) -> list[Sentence]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            doc_id, index, lang, text = line.split("\t")
            out.append(Sentence(doc_id, int(index), text, lang, hash64(text)))
    return out
