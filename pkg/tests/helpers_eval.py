"""Helpers for building evaluation data directories in tests."""

import json

from corpusforge.evalkit import EvalItem, item_to_dict
from corpusforge.evalservice import EvalService


def write_items(data_dir, n=4, n_systems=3, granularity="sentence"):
    items = [
        EvalItem(
            item_id=f"item{i:03d}",
            direction=("am", "en"),
            granularity=granularity,
            genre="news",
            source_text=f"ምንጭ {i}",
            outputs=tuple((f"sys{k}", f"candidate {i}.{k}") for k in range(n_systems)),
        )
        for i in range(n)
    ]
    data_dir.mkdir(parents=True, exist_ok=True)
    with open(data_dir / "items.jsonl", "w", encoding="utf-8") as fh:
        for item in items:
            fh.write(json.dumps(item_to_dict(item), ensure_ascii=False) + "\n")
    return items


def seed_eval_dir(data_dir, n_items=3):
    """Create a data dir with one fully scored session."""
    write_items(data_dir, n=n_items)
    service = EvalService(data_dir)
    session = service.get_or_create_session("ev1")
    for item in session.items:
        for pos in range(len(item.outputs)):
            service.record(session.session_id, item.item_id, pos, (pos + 2) % 5)
    return data_dir
