"""Blind human-evaluation protocol: sessions, scores, unblinded reports.

System outputs are shown to evaluators in a per-item shuffled order so
that no output can be attributed to a system. The shuffle is a pure
function of (session seed, item id), kept server-side; client payloads
carry only anonymous position-ordered texts. Scores are 0-4 Likert
values; aggregation unblinds through the stored permutations and reports
mean ± population standard deviation per (direction, system).
"""

from __future__ import annotations

import hashlib
import json
import math
import threading
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

ARCHIVE_FORMAT = "corpusforge-eval"
ARCHIVE_VERSION = 1

GRANULARITIES = ("sentence", "story")
LIKERT_MIN = 0
LIKERT_MAX = 4

_SECTIONS = ("item", "session", "score", "audit")


# ---------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class EvalItem:
    """One evaluation unit: a source text and competing system outputs."""

    item_id: str
    direction: tuple[str, str]
    granularity: str
    genre: str
    source_text: str
    outputs: tuple[tuple[str, str], ...]  # (system_id, text), order fixed

    def __post_init__(self):
        if self.granularity not in GRANULARITIES:
            raise ValueError(
                f"granularity must be one of {GRANULARITIES}, got {self.granularity!r}"
            )
        ids = [s for s, _ in self.outputs]
        if len(ids) != len(set(ids)):
            raise ValueError(f"item {self.item_id!r} has duplicate system ids")


@dataclass(frozen=True)
class BlindItem:
    """Client-visible form of an item: permuted texts, no system ids."""

    item_id: str
    source_text: str
    outputs: tuple[str, ...]


@dataclass
class BlindSession:
    """One evaluator's blinded pass over the items.

    ``permutations`` maps item_id to the applied permutation (display
    position -> original output index). It never leaves the server;
    :meth:`client_payload` is the only client-facing serialization.
    """

    session_id: str
    evaluator_id: str
    seed: int
    items: list[BlindItem]
    permutations: dict[str, tuple[int, ...]]

    def client_payload(self) -> dict:
        return {
            "session_id": self.session_id,
            "evaluator_id": self.evaluator_id,
            "items": [
                {
                    "item_id": it.item_id,
                    "source_text": it.source_text,
                    "outputs": list(it.outputs),
                }
                for it in self.items
            ],
        }


@dataclass(frozen=True)
class ScoreRecord:
    """One Likert judgment for one displayed output position."""

    evaluator_id: str
    item_id: str
    position: int
    value: int
    timestamp: float = field(default_factory=time.time)

    def __post_init__(self):
        if not isinstance(self.value, int) or isinstance(self.value, bool):
            raise ValueError(f"invalid Likert value: {self.value!r}")
        if not LIKERT_MIN <= self.value <= LIKERT_MAX:
            raise ValueError(
                f"invalid Likert value: {self.value} (must be {LIKERT_MIN}-{LIKERT_MAX})"
            )


@dataclass(frozen=True)
class ReportCell:
    direction: tuple[str, str]
    system_id: str
    granularity: str
    mean: float
    std: float
    n: int


# ---------------------------------------------------------------------------
# Deterministic per-item shuffling


def _seed_key(seed: int) -> bytes:
    return (seed & ((1 << 64) - 1)).to_bytes(8, "big")


class _HashStream:
    """Uniform integers from a keyed blake2b counter stream.

    Platform- and version-stable, unlike random.Random, so permutations
    derived from (seed, item_id) are reproducible anywhere.
    """

    def __init__(self, seed: int, label: str):
        self._key = _seed_key(seed)
        self._label = label.encode("utf-8")
        self._counter = 0
        self._buf = b""

    def _word(self) -> int:
        if len(self._buf) < 4:
            block = hashlib.blake2b(
                self._label + b"\x00" + self._counter.to_bytes(8, "big"),
                key=self._key,
            ).digest()
            self._counter += 1
            self._buf += block
        word, self._buf = self._buf[:4], self._buf[4:]
        return int.from_bytes(word, "big")

    def randbelow(self, n: int) -> int:
        # Rejection sampling keeps the draw exactly uniform.
        limit = (1 << 32) - ((1 << 32) % n)
        while True:
            v = self._word()
            if v < limit:
                return v % n


def permutation_for(seed: int, item_id: str, k: int) -> tuple[int, ...]:
    """Fisher-Yates permutation of range(k), pure in (seed, item_id, k)."""
    stream = _HashStream(seed, item_id)
    perm = list(range(k))
    for j in range(k - 1, 0, -1):
        r = stream.randbelow(j + 1)
        perm[j], perm[r] = perm[r], perm[j]
    return tuple(perm)


def create_session(
    items: Sequence[EvalItem], evaluator_id: str, seed: int
) -> BlindSession:
    """Build a blind session over the items for one evaluator.

    Output order per item is ``item.outputs[perm[pos]]`` where perm is
    the deterministic permutation for (seed, item_id).
    """
    if not items:
        raise ValueError("cannot create a session with no items")
    blind: list[BlindItem] = []
    perms: dict[str, tuple[int, ...]] = {}
    digest = hashlib.blake2b(_seed_key(seed), digest_size=8)
    digest.update(evaluator_id.encode("utf-8"))
    for item in items:
        k = len(item.outputs)
        if k < 2:
            raise ValueError(f"item {item.item_id!r} has fewer than 2 outputs")
        perm = permutation_for(seed, item.item_id, k)
        perms[item.item_id] = perm
        blind.append(
            BlindItem(
                item.item_id,
                item.source_text,
                tuple(item.outputs[p][1] for p in perm),
            )
        )
        digest.update(item.item_id.encode("utf-8"))
    session_id = f"s{digest.hexdigest()}"
    return BlindSession(session_id, evaluator_id, seed & ((1 << 64) - 1), blind, perms)


# ---------------------------------------------------------------------------
# Score storage


class EvalStore:
    """In-memory store of items, sessions, and scores.

    Mutations are serialized by a lock so the HTTP service can write from
    concurrent requests. Last write per (evaluator, item, position) wins;
    every write is also appended to an audit log.
    """

    def __init__(self):
        self.items: dict[str, EvalItem] = {}
        self.sessions: dict[str, BlindSession] = {}
        self.scores: dict[tuple[str, str, int], ScoreRecord] = {}
        self.audit: list[ScoreRecord] = []
        self.lock = threading.Lock()

    def add_items(self, items: Iterable[EvalItem]) -> None:
        with self.lock:
            for item in items:
                if item.item_id in self.items:
                    raise ValueError(f"duplicate item id {item.item_id!r}")
                self.items[item.item_id] = item

    def add_session(self, session: BlindSession) -> None:
        with self.lock:
            self.sessions[session.session_id] = session

    def session_for(self, evaluator_id: str) -> BlindSession | None:
        for session in self.sessions.values():
            if session.evaluator_id == evaluator_id:
                return session
        return None

    def record_score(self, session: BlindSession, rec: ScoreRecord) -> ScoreRecord:
        """Validate and store one score; returns the stored record."""
        perm = session.permutations.get(rec.item_id)
        if perm is None:
            raise KeyError(f"unknown item {rec.item_id!r} in session {session.session_id}")
        if not 0 <= rec.position < len(perm):
            raise ValueError(
                f"position {rec.position} out of range for item {rec.item_id!r}"
            )
        with self.lock:
            self.scores[(rec.evaluator_id, rec.item_id, rec.position)] = rec
            self.audit.append(rec)
        return rec

    def item_scores(self, evaluator_id: str, item_id: str) -> dict[int, int]:
        """Positions already scored by this evaluator on this item."""
        return {
            pos: rec.value
            for (ev, it, pos), rec in self.scores.items()
            if ev == evaluator_id and it == item_id
        }

    def next_unscored(self, session: BlindSession) -> BlindItem | None:
        """First item of the session not yet fully scored, or None."""
        for blind in session.items:
            k = len(blind.outputs)
            if len(self.item_scores(session.evaluator_id, blind.item_id)) < k:
                return blind
        return None

    def scored_item_count(self, session: BlindSession) -> int:
        done = 0
        for blind in session.items:
            k = len(blind.outputs)
            if len(self.item_scores(session.evaluator_id, blind.item_id)) >= k:
                done += 1
        return done


# ---------------------------------------------------------------------------
# Unblinding and aggregation


def unblind_and_aggregate(
    scores: Iterable[ScoreRecord],
    sessions: Iterable[BlindSession],
    items: Iterable[EvalItem],
    diagnostics: dict | None = None,
) -> list[ReportCell]:
    """Map scores back to systems through session permutations and aggregate.

    Produces one cell per (direction, system, granularity) with the
    arithmetic mean and population standard deviation on the raw 0-4
    scale. Cells are ordered by granularity, direction, then descending
    mean. Scores that cannot be attributed (missing session or item, or
    stale position) are excluded and tallied in ``diagnostics``.
    """
    item_map = {i.item_id: i for i in items}
    by_evaluator: dict[str, list[BlindSession]] = {}
    for s in sessions:
        by_evaluator.setdefault(s.evaluator_id, []).append(s)

    buckets: dict[tuple[tuple[str, str], str, str], list[int]] = {}
    excluded = 0
    for rec in scores:
        item = item_map.get(rec.item_id)
        session = next(
            (
                s
                for s in by_evaluator.get(rec.evaluator_id, [])
                if rec.item_id in s.permutations
            ),
            None,
        )
        if item is None or session is None:
            excluded += 1
            continue
        perm = session.permutations[rec.item_id]
        if not 0 <= rec.position < len(perm) or perm[rec.position] >= len(item.outputs):
            excluded += 1
            continue
        system_id = item.outputs[perm[rec.position]][0]
        key = (item.direction, system_id, item.granularity)
        buckets.setdefault(key, []).append(rec.value)
    if diagnostics is not None:
        diagnostics["excluded"] = excluded

    cells = []
    for (direction, system_id, granularity), values in buckets.items():
        n = len(values)
        mean = sum(values) / n
        std = math.sqrt(sum((v - mean) ** 2 for v in values) / n)
        cells.append(ReportCell(direction, system_id, granularity, mean, std, n))
    cells.sort(key=lambda c: (c.granularity, c.direction, -c.mean, c.system_id))
    return cells


def format_cell(mean: float, std: float) -> str:
    return f"{mean:.2f} ± {std:.2f}"


def render_report(cells: Sequence[ReportCell], normalized: bool = False) -> str:
    """Plain-text report table with `mean ± std` cells.

    ``normalized`` divides the 0-4 scale by 4 so cells land in [0, 1].
    """
    scale = 4.0 if normalized else 1.0
    header = [
        "# std: population (divide by n)",
        f"# scale: {'normalized 0-1' if normalized else 'raw 0-4'}",
    ]
    rows = [("direction", "system", "granularity", "n", "score")]
    for c in cells:
        rows.append(
            (
                f"{c.direction[0]}->{c.direction[1]}",
                c.system_id,
                c.granularity,
                str(c.n),
                format_cell(c.mean / scale, c.std / scale),
            )
        )
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = header + [
        "  ".join(col.ljust(w) for col, w in zip(row, widths)).rstrip()
        for row in rows
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Archive: line-delimited records under a versioned manifest


def _cjson(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def item_to_dict(item: EvalItem) -> dict:
    return {
        "kind": "item",
        "item_id": item.item_id,
        "direction": list(item.direction),
        "granularity": item.granularity,
        "genre": item.genre,
        "source_text": item.source_text,
        "outputs": [[s, t] for s, t in item.outputs],
    }


def item_from_dict(d: dict) -> EvalItem:
    return EvalItem(
        d["item_id"],
        tuple(d["direction"]),
        d["granularity"],
        d["genre"],
        d["source_text"],
        tuple((s, t) for s, t in d["outputs"]),
    )


def session_to_dict(session: BlindSession) -> dict:
    return {
        "kind": "session",
        "session_id": session.session_id,
        "evaluator_id": session.evaluator_id,
        "seed": session.seed,
        "items": [
            {
                "item_id": it.item_id,
                "source_text": it.source_text,
                "outputs": list(it.outputs),
            }
            for it in session.items
        ],
        "permutations": {k: list(v) for k, v in session.permutations.items()},
    }


def session_from_dict(d: dict) -> BlindSession:
    return BlindSession(
        d["session_id"],
        d["evaluator_id"],
        d["seed"],
        [BlindItem(i["item_id"], i["source_text"], tuple(i["outputs"])) for i in d["items"]],
        {k: tuple(v) for k, v in d["permutations"].items()},
    )


def score_to_dict(rec: ScoreRecord, kind: str) -> dict:
    return {
        "kind": kind,
        "evaluator_id": rec.evaluator_id,
        "item_id": rec.item_id,
        "position": rec.position,
        "value": rec.value,
        "timestamp": rec.timestamp,
    }


def score_from_dict(d: dict) -> ScoreRecord:
    return ScoreRecord(
        d["evaluator_id"], d["item_id"], d["position"], d["value"], d["timestamp"]
    )


def export_eval_dataset(store: EvalStore) -> str:
    """Serialize the whole store as a versioned line-delimited archive.

    Deterministic: records are sorted within each section (audit keeps
    arrival order), so export/import/export round-trips byte-identically.
    """
    lines = []
    items = [item for _, item in sorted(store.items.items())]
    sessions = [s for _, s in sorted(store.sessions.items())]
    scores = [store.scores[k] for k in sorted(store.scores)]
    manifest = {
        "format": ARCHIVE_FORMAT,
        "version": ARCHIVE_VERSION,
        "counts": {
            "item": len(items),
            "session": len(sessions),
            "score": len(scores),
            "audit": len(store.audit),
        },
    }
    lines.append(_cjson(manifest))
    for item in items:
        lines.append(_cjson(item_to_dict(item)))
    for session in sessions:
        lines.append(_cjson(session_to_dict(session)))
    for rec in scores:
        lines.append(_cjson(score_to_dict(rec, "score")))
    for rec in store.audit:
        lines.append(_cjson(score_to_dict(rec, "audit")))
    return "\n".join(lines) + "\n"


def import_eval_dataset(archive: str) -> EvalStore:
    """Parse an archive back into a store; inverse of export_eval_dataset."""
    lines = [ln for ln in archive.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty archive: missing manifest")
    manifest = json.loads(lines[0])
    if manifest.get("format") != ARCHIVE_FORMAT:
        raise ValueError(f"not a {ARCHIVE_FORMAT} archive")
    version = manifest.get("version")
    if version != ARCHIVE_VERSION:
        raise ValueError(f"unsupported version {version}")
    counts = manifest.get("counts", {})

    store = EvalStore()
    found = {kind: 0 for kind in _SECTIONS}
    for line in lines[1:]:
        d = json.loads(line)
        kind = d.get("kind")
        if kind == "item":
            item = item_from_dict(d)
            store.items[item.item_id] = item
        elif kind == "session":
            session = session_from_dict(d)
            store.sessions[session.session_id] = session
        elif kind == "score":
            rec = score_from_dict(d)
            store.scores[(rec.evaluator_id, rec.item_id, rec.position)] = rec
        elif kind == "audit":
            store.audit.append(score_from_dict(d))
        else:
            raise ValueError(f"unknown record kind {kind!r}")
        found[kind] += 1
    for kind in _SECTIONS:
        expected = counts.get(kind, 0)
        if found[kind] != expected:
            raise ValueError(
                f"archive truncated: section {kind!r} has {found[kind]} of "
                f"{expected} records"
            )
    return store
