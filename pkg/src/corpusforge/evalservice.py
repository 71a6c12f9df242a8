"""HTTP service around the evaluation store.

Endpoints:
  GET  /api/session/{evaluator}/next   next unscored blind item or done marker
  POST /api/score                      record one Likert judgment
  GET  /api/report?granularity=...     unblinded aggregate cells
  GET  /api/export                     full dataset archive
  POST /api/import                     replace state from an archive

State lives in a data directory: items.jsonl (the evaluation items,
required), meta.json (service seed), sessions.jsonl (created sessions),
scores.log (append-only audit, replayed on startup).
"""

from __future__ import annotations

import hashlib
import json
import os
import secrets
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import PlainTextResponse

from .evalkit import (
    EvalStore,
    GRANULARITIES,
    LIKERT_MAX,
    LIKERT_MIN,
    ScoreRecord,
    create_session,
    export_eval_dataset,
    format_cell,
    import_eval_dataset,
    item_from_dict,
    item_to_dict,
    render_report,
    score_to_dict,
    score_from_dict,
    session_from_dict,
    session_to_dict,
    unblind_and_aggregate,
)

ITEMS_FILE = "items.jsonl"
META_FILE = "meta.json"
SESSIONS_FILE = "sessions.jsonl"
SCORES_FILE = "scores.log"


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


class EvalService:
    """Store plus on-disk persistence for one data directory."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        items_path = self.data_dir / ITEMS_FILE
        if not items_path.is_file():
            raise FileNotFoundError(f"{ITEMS_FILE} not found in {self.data_dir}")
        self._lock = threading.Lock()
        self.store = EvalStore()
        with open(items_path, encoding="utf-8") as fh:
            self.store.add_items(
                item_from_dict(json.loads(ln)) for ln in fh if ln.strip()
            )
        self.seed = self._load_or_create_seed()
        sessions_path = self.data_dir / SESSIONS_FILE
        if sessions_path.is_file():
            with open(sessions_path, encoding="utf-8") as fh:
                for ln in fh:
                    if ln.strip():
                        self.store.add_session(session_from_dict(json.loads(ln)))
        scores_path = self.data_dir / SCORES_FILE
        if scores_path.is_file():
            with open(scores_path, encoding="utf-8") as fh:
                for ln in fh:
                    if not ln.strip():
                        continue
                    rec = score_from_dict(json.loads(ln))
                    self.store.scores[(rec.evaluator_id, rec.item_id, rec.position)] = rec
                    self.store.audit.append(rec)

    def _load_or_create_seed(self) -> int:
        meta_path = self.data_dir / META_FILE
        if meta_path.is_file():
            return json.loads(meta_path.read_text(encoding="utf-8"))["seed"]
        seed = secrets.randbits(64)
        _atomic_write(meta_path, json.dumps({"seed": seed}) + "\n")
        return seed

    def _evaluator_seed(self, evaluator_id: str) -> int:
        h = hashlib.blake2b(
            evaluator_id.encode("utf-8"),
            key=(self.seed & ((1 << 64) - 1)).to_bytes(8, "big"),
            digest_size=8,
        )
        return int.from_bytes(h.digest(), "big")

    def get_or_create_session(self, evaluator_id: str):
        with self._lock:
            session = self.store.session_for(evaluator_id)
            if session is not None:
                return session
            session = create_session(
                list(self.store.items.values()),
                evaluator_id,
                self._evaluator_seed(evaluator_id),
            )
            self.store.add_session(session)
            with open(self.data_dir / SESSIONS_FILE, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(session_to_dict(session), ensure_ascii=False) + "\n")
            return session

    def record(self, session_id: str, item_id: str, position: int, value: int) -> ScoreRecord:
        with self._lock:
            session = self.store.sessions.get(session_id)
            if session is None:
                raise KeyError(f"unknown session {session_id!r}")
            rec = ScoreRecord(session.evaluator_id, item_id, position, value)
            self.store.record_score(session, rec)
            with open(self.data_dir / SCORES_FILE, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(score_to_dict(rec, "audit"), ensure_ascii=False) + "\n")
            return rec

    def import_archive(self, archive: str) -> dict:
        store = import_eval_dataset(archive)
        with self._lock:
            _atomic_write(
                self.data_dir / ITEMS_FILE,
                "".join(
                    json.dumps(item_to_dict(i), ensure_ascii=False) + "\n"
                    for i in store.items.values()
                ),
            )
            _atomic_write(
                self.data_dir / SESSIONS_FILE,
                "".join(
                    json.dumps(session_to_dict(s), ensure_ascii=False) + "\n"
                    for s in store.sessions.values()
                ),
            )
            _atomic_write(
                self.data_dir / SCORES_FILE,
                "".join(
                    json.dumps(score_to_dict(r, "audit"), ensure_ascii=False) + "\n"
                    for r in store.audit
                ),
            )
            self.store = store
        return {
            "items": len(store.items),
            "sessions": len(store.sessions),
            "scores": len(store.scores),
        }


def create_app(service: EvalService, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="corpusforge evaluation service")

    @app.get("/api/session/{evaluator}/next")
    def next_item(evaluator: str):
        session = service.get_or_create_session(evaluator)
        store = service.store
        blind = store.next_unscored(session)
        done = store.scored_item_count(session)
        total = len(session.items)
        if blind is None:
            return {
                "done": True,
                "session_id": session.session_id,
                "scored": done,
                "total": total,
            }
        return {
            "done": False,
            "session_id": session.session_id,
            "item_id": blind.item_id,
            "source_text": blind.source_text,
            "outputs": list(blind.outputs),
            "scored": done,
            "total": total,
            "positions_scored": {
                str(pos): value
                for pos, value in sorted(
                    store.item_scores(session.evaluator_id, blind.item_id).items()
                )
            },
        }

    @app.post("/api/score")
    async def post_score(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise HTTPException(status_code=422, detail="body must be a JSON object")
        if not isinstance(body, dict):
            raise HTTPException(status_code=422, detail="body must be a JSON object")
        for field in ("session_id", "item_id", "position", "value"):
            if field not in body:
                raise HTTPException(status_code=422, detail=f"missing field {field!r}")
        value = body["value"]
        if not isinstance(value, int) or isinstance(value, bool) or not (
            LIKERT_MIN <= value <= LIKERT_MAX
        ):
            raise HTTPException(status_code=422, detail=f"invalid Likert value: {value!r}")
        position = body["position"]
        if not isinstance(position, int) or isinstance(position, bool):
            raise HTTPException(status_code=422, detail=f"invalid position: {position!r}")
        try:
            rec = service.record(str(body["session_id"]), str(body["item_id"]), position, value)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc.args[0]))
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "ok": True,
            "item_id": rec.item_id,
            "position": rec.position,
            "value": rec.value,
        }

    @app.get("/api/report")
    def report(granularity: str = "sentence", normalized: bool = False):
        if granularity not in GRANULARITIES:
            raise HTTPException(
                status_code=422,
                detail=f"granularity must be one of {list(GRANULARITIES)}",
            )
        store = service.store
        cells = unblind_and_aggregate(
            store.scores.values(), store.sessions.values(), store.items.values()
        )
        cells = [c for c in cells if c.granularity == granularity]
        scale = 4.0 if normalized else 1.0
        return {
            "granularity": granularity,
            "normalized": normalized,
            "cells": [
                {
                    "direction": list(c.direction),
                    "system_id": c.system_id,
                    "granularity": c.granularity,
                    "mean": c.mean / scale,
                    "std": c.std / scale,
                    "n": c.n,
                    "cell": format_cell(c.mean / scale, c.std / scale),
                }
                for c in cells
            ],
            "table": render_report(cells, normalized=normalized),
        }

    @app.get("/api/export", response_class=PlainTextResponse)
    def export():
        return export_eval_dataset(service.store)

    @app.post("/api/import")
    async def import_(request: Request):
        archive = (await request.body()).decode("utf-8", errors="replace")
        try:
            counts = service.import_archive(archive)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"ok": True, "counts": counts}

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    else:

        @app.get("/")
        def root():
            return {
                "service": "corpusforge evaluation service",
                "endpoints": [
                    "/api/session/{evaluator}/next",
                    "/api/score",
                    "/api/report",
                    "/api/export",
                    "/api/import",
                ],
            }

    return app
