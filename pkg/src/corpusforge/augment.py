"""Back-translation orchestration and corpus merging.

Monolingual target-side sentences become synthetic parallel pairs by
running a reverse translator over them; the synthetic pairs are merged
with mined data under a cap so synthetic text never swamps real text.
"""

from __future__ import annotations

import logging
import math
import subprocess
from dataclasses import dataclass
from typing import Iterable, Protocol, Sequence

from .lexmodel import LexTable, SentencePair, translate_text
from .textprep import Sentence

log = logging.getLogger(__name__)


class Translator(Protocol):
    """Anything that can translate one sentence string between two languages."""

    def translate(self, sentence: str, src_lang: str, tgt_lang: str) -> str: ...


@dataclass
class NaiveTranslator:
    """Word-by-word lexical translator over a single-direction table."""

    table: LexTable

    def translate(self, sentence: str, src_lang: str, tgt_lang: str) -> str:
        if (src_lang, tgt_lang) != (self.table.src_lang, self.table.tgt_lang):
            raise ValueError(
                f"table translates {self.table.src_lang}->{self.table.tgt_lang}, "
                f"requested {src_lang}->{tgt_lang}"
            )
        return translate_text(sentence, self.table)


@dataclass
class CommandTranslator:
    """Adapter for an external translator process.

    The command receives source sentences on standard input, one per
    line, and must print exactly one translation per line on standard
    output. Language codes are appended as the final two arguments.
    """

    command: list[str]
    timeout: float = 300.0

    def translate_batch(
        self, sentences: Sequence[str], src_lang: str, tgt_lang: str
    ) -> list[str]:
        proc = subprocess.run(
            [*self.command, src_lang, tgt_lang],
            input="\n".join(sentences) + "\n",
            capture_output=True,
            text=True,
            timeout=self.timeout,
        )
        if proc.returncode != 0:
            raise RuntimeError(
                f"translator command failed with status {proc.returncode}: "
                f"{proc.stderr.strip()}"
            )
        lines = proc.stdout.splitlines()
        if len(lines) != len(sentences):
            raise RuntimeError(
                f"translator returned {len(lines)} lines for {len(sentences)} inputs"
            )
        return lines

    def translate(self, sentence: str, src_lang: str, tgt_lang: str) -> str:
        return self.translate_batch([sentence], src_lang, tgt_lang)[0]


@dataclass
class AugmentedCorpus:
    """Merged corpus with per-origin counts matching the pair partition."""

    pairs: list[SentencePair]
    counts: dict[str, int]


def back_translate(
    mono_tgt: Sequence[Sentence],
    reverse: Translator,
    src_lang: str,
) -> list[SentencePair]:
    """Synthesize (source, target) pairs from monolingual target sentences.

    ``reverse`` translates the target language into ``src_lang``; each
    target sentence is preserved verbatim as the pair's target side. A
    sentence the translator fails on (exception or empty output) is
    skipped and counted.
    """
    out: list[SentencePair] = []
    failures = 0
    for y in mono_tgt:
        try:
            synthetic = reverse.translate(y.text, y.lang, src_lang)
        except Exception as exc:
            log.warning("back-translation failed on %r: %s", y.text, exc)
            failures += 1
            continue
        if not synthetic.strip():
            log.warning("back-translation produced empty output for %r", y.text)
            failures += 1
            continue
        src = Sentence.make(f"bt:{y.doc_id}", y.index, synthetic, src_lang)
        out.append(SentencePair(src, y, "synthetic"))
    if failures:
        log.warning("back_translate skipped %d sentences", failures)
    return out


def merge_corpora(
    mined: Iterable[SentencePair],
    synthetic: Iterable[SentencePair],
    cap_ratio: float = 1.0,
) -> AugmentedCorpus:
    """Merge mined and synthetic pairs under a synthetic:mined cap.

    All mined pairs are kept (first occurrence of duplicate text wins);
    synthetic pairs are appended in order until the cap
    floor(cap_ratio * |mined|) is reached, skipping any (src, tgt) text
    already present.
    """
    if cap_ratio <= 0:
        raise ValueError(f"cap_ratio must be > 0, got {cap_ratio}")
    kept: list[SentencePair] = []
    seen: set[tuple[str, str]] = set()
    for p in mined:
        key = (p.src.text, p.tgt.text)
        if key in seen:
            continue
        seen.add(key)
        kept.append(p)
    cap = math.floor(cap_ratio * len(kept) + 1e-12)
    taken = 0
    for p in synthetic:
        if taken >= cap:
            break
        key = (p.src.text, p.tgt.text)
        if key in seen:
            continue
        seen.add(key)
        kept.append(p)
        taken += 1
    counts = {"mined": 0, "seed": 0, "synthetic": 0}
    for p in kept:
        counts[p.origin] += 1
    return AugmentedCorpus(kept, counts)
