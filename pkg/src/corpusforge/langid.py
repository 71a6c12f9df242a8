"""Character n-gram language identification for Amharic, Tigrinya, English.

Amharic and Tigrinya share the Ethiopic script, so script detection alone
cannot separate them; per-language character n-gram models (orders 1..3,
add-one smoothing) break the tie. Script detection still prunes the
candidate set: mostly-Ethiopic text is scored only against am/ti and
mostly-Latin text only against en.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

LANGUAGES = ("am", "ti", "en")
UNKNOWN = "unknown"

NGRAM_ORDERS = (1, 2, 3)
ETHIOPIC_RANGE = (0x1200, 0x137F)
SCRIPT_MAJORITY = 0.5

_PAD_START = "\x02"
_PAD_END = "\x03"


def _grams(text: str, order: int) -> Iterable[str]:
    padded = f"{_PAD_START}{text}{_PAD_END}"
    for i in range(len(padded) - order + 1):
        yield padded[i : i + order]


@dataclass(frozen=True)
class LangPrediction:
    """Outcome of language detection on one text."""

    lang: str
    confidence: float
    script: str  # ethiopic | latin | mixed | other


@dataclass
class LangProfile:
    """Add-one-smoothed character n-gram model for one language.

    Raw counts plus per-order token totals are kept instead of precomputed
    log-probabilities so unseen grams can still be scored:
    P(g) = (count(g) + 1) / (order_totals[len(g)] + vocab_size),
    where vocab_size is the number of distinct grams across all orders.
    """

    lang: str
    counts: dict[str, int] = field(default_factory=dict)
    order_totals: dict[int, int] = field(default_factory=dict)
    vocab_size: int = 0

    @classmethod
    def train(cls, lang: str, texts: Iterable[str]) -> "LangProfile":
        counts: Counter[str] = Counter()
        totals: dict[int, int] = {n: 0 for n in NGRAM_ORDERS}
        for text in texts:
            for n in NGRAM_ORDERS:
                for g in _grams(text, n):
                    counts[g] += 1
                    totals[n] += 1
        return cls(lang, dict(counts), totals, len(counts))

    def log_likelihood(self, text: str) -> float:
        """Summed log-probability of the text under all n-gram orders."""
        ll = 0.0
        for n in NGRAM_ORDERS:
            denom = self.order_totals.get(n, 0) + self.vocab_size
            if denom == 0:
                continue
            for g in _grams(text, n):
                ll += math.log((self.counts.get(g, 0) + 1) / denom)
        return ll

    def save(self, path: str | Path) -> None:
        """Write as line-delimited records: header line, then one gram per line."""
        with open(path, "w", encoding="utf-8") as fh:
            header = {
                "lang": self.lang,
                "vocab_size": self.vocab_size,
                "order_totals": {str(k): v for k, v in sorted(self.order_totals.items())},
            }
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for g in sorted(self.counts):
                fh.write(json.dumps({"g": g, "c": self.counts[g]}, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "LangProfile":
        with open(path, encoding="utf-8") as fh:
            header = json.loads(fh.readline())
            counts = {}
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    counts[rec["g"]] = rec["c"]
        return cls(
            header["lang"],
            counts,
            {int(k): v for k, v in header["order_totals"].items()},
            header["vocab_size"],
        )


def script_census(text: str) -> str:
    """Classify text by letter majority.

    "ethiopic" or "latin" when at least half the letters fall in that
    script, "mixed" when letters exist but neither dominates, "other"
    when the text has no letters at all.
    """
    ethiopic = latin = letters = 0
    for ch in text:
        if not ch.isalpha():
            continue
        letters += 1
        cp = ord(ch)
        if ETHIOPIC_RANGE[0] <= cp <= ETHIOPIC_RANGE[1]:
            ethiopic += 1
        elif cp < 0x300:
            latin += 1
    if letters == 0:
        return "other"
    if ethiopic / letters >= SCRIPT_MAJORITY:
        return "ethiopic"
    if latin / letters >= SCRIPT_MAJORITY:
        return "latin"
    return "mixed"


_CANDIDATES = {"ethiopic": ("am", "ti"), "latin": ("en",), "mixed": LANGUAGES}


class LanguageIdentifier:
    """Scores text against trained profiles and returns a LangPrediction."""

    def __init__(self, profiles: dict[str, LangProfile]):
        missing = set(LANGUAGES) - set(profiles)
        if missing:
            raise ValueError(f"missing language profiles for: {sorted(missing)}")
        self.profiles = profiles

    @classmethod
    def bundled(cls) -> "LanguageIdentifier":
        """Identifier trained on the seed corpora shipped with the package."""
        profiles = {}
        data = resources.files("corpusforge.data").joinpath("langid")
        for lang in LANGUAGES:
            text = data.joinpath(f"{lang}.txt").read_text(encoding="utf-8")
            lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
            profiles[lang] = LangProfile.train(lang, lines)
        return cls(profiles)

    def detect(self, text: str) -> LangPrediction:
        """Most likely language with softmax confidence over the candidates.

        Letterless text cannot be attributed to any language and comes
        back as ("unknown", 0.0, "other"). Empty input is an error.
        """
        if not text.strip():
            raise ValueError("empty input")
        census = script_census(text)
        if census == "other":
            return LangPrediction(UNKNOWN, 0.0, census)
        candidates = _CANDIDATES[census]
        if len(candidates) == 1:
            return LangPrediction(candidates[0], 1.0, census)
        scores = {lang: self.profiles[lang].log_likelihood(text) for lang in candidates}
        best = max(scores, key=lambda k: (scores[k], k))
        # Softmax stabilized by the max; the winner's term is exp(0) = 1.
        total = sum(math.exp(s - scores[best]) for s in scores.values())
        return LangPrediction(best, 1.0 / total, census)

    def save(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for lang, profile in sorted(self.profiles.items()):
            profile.save(directory / f"{lang}.jsonl")

    @classmethod
    def load(cls, directory: str | Path) -> "LanguageIdentifier":
        directory = Path(directory)
        profiles = {}
        for path in sorted(directory.glob("*.jsonl")):
            profile = LangProfile.load(path)
            profiles[profile.lang] = profile
        return cls(profiles)


_BUNDLED: LanguageIdentifier | None = None


def bundled_identifier() -> LanguageIdentifier:
    """The identifier over bundled seed profiles, built once per process."""
    global _BUNDLED
    if _BUNDLED is None:
        _BUNDLED = LanguageIdentifier.bundled()
    return _BUNDLED


def detect_language(
    text: str, profiles: Iterable[LangProfile] | None = None
) -> LangPrediction:
    """Detect the language of ``text``.

    ``profiles`` must cover am/ti/en when given; when omitted the bundled
    seed profiles are used.
    """
    if profiles is None:
        identifier = bundled_identifier()
    else:
        table = {p.lang: p for p in profiles}
        if not table:
            raise ValueError("no language profiles given")
        identifier = LanguageIdentifier(table)
    return identifier.detect(text)
