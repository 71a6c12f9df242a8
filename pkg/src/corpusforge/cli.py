"""Pipeline command line: one executable, one subcommand per stage.

    corpusforge <stage> --config path [--set section.key=value]... [--jobs N]

Stages: ingest, prep, train, mine, augment, eval-serve, eval-report.
Every stage writes its outputs atomically and drops a manifest with
input hashes, the config hash, and row counts, so re-runs are traceable
and byte-identical for unchanged inputs.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import logging
import os
import sys
from pathlib import Path

from . import augment as augment_mod
from . import evalkit, ingest, lexmodel, miner, textprep
from .config import ConfigError, PipelineConfig, load_config

log = logging.getLogger(__name__)

STAGE_ORDER = ("ingest", "prep", "train", "mine", "augment", "eval-serve", "eval-report")

DOCUMENTS_SRC = "documents_src.jsonl"
DOCUMENTS_TGT = "documents_tgt.jsonl"
SENTENCES_SRC = "sentences_src.tsv"
SENTENCES_TGT = "sentences_tgt.tsv"
TABLE_FWD = "table_fwd.tsv"
TABLE_REV = "table_rev.tsv"
MINED = "mined.tsv"
AUGMENTED = "augmented.tsv"


class DependencyError(Exception):
    def __init__(self, stage: str, required: str):
        super().__init__(f"stage {stage} requires output of stage {required}")


def _hash_file(path: Path) -> str:
    h = hashlib.blake2b(digest_size=16)
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _hash_tree(path: Path) -> str:
    if path.is_file():
        return _hash_file(path)
    h = hashlib.blake2b(digest_size=16)
    for p in sorted(q for q in path.rglob("*") if q.is_file()):
        h.update(p.relative_to(path).as_posix().encode("utf-8"))
        h.update(b"\x00")
        h.update(bytes.fromhex(_hash_file(p)))
        h.update(b"\x00")
    return h.hexdigest()


def _atomic(path: Path, write_fn) -> None:
    """Run write_fn against a temp path, then rename over the target."""
    tmp = path.with_name(path.name + ".tmp")
    write_fn(tmp)
    os.replace(tmp, path)


def _require_artifact(cfg: PipelineConfig, name: str, stage: str, produced_by: str) -> Path:
    path = cfg.output_dir / name
    if not path.is_file():
        raise DependencyError(stage, produced_by)
    return path


def _write_manifest(
    cfg: PipelineConfig,
    stage: str,
    inputs: dict[str, Path],
    outputs: dict[str, tuple[Path, int]],
    extra: dict | None = None,
) -> None:
    manifest = {
        "stage": stage,
        "config_hash": cfg.config_hash(),
        "inputs": {name: _hash_tree(p) for name, p in sorted(inputs.items())},
        "outputs": {
            name: {"rows": rows, "hash": _hash_file(p)}
            for name, (p, rows) in sorted(outputs.items())
        },
    }
    if extra:
        manifest.update(extra)
    path = cfg.output_dir / f"manifest_{stage}.json"
    _atomic(
        path,
        lambda tmp: tmp.write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        ),
    )


# ---------------------------------------------------------------------------
# Stages


def stage_ingest(cfg: PipelineConfig) -> int:
    src_root = cfg.require("src_root", "ingest")
    tgt_root = cfg.require("tgt_root", "ingest")
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    outputs = {}
    for name, root, hint in (
        (DOCUMENTS_SRC, src_root, cfg.src_lang),
        (DOCUMENTS_TGT, tgt_root, cfg.tgt_lang),
    ):
        docs = ingest.load_corpus(root, cfg.source_kind, lang_hint=hint)
        out_path = cfg.output_dir / name
        _atomic(out_path, lambda tmp, docs=docs: ingest.write_documents(tmp, docs))
        outputs[name] = (out_path, len(docs))
        log.info("ingested %d documents from %s", len(docs), root)
    _write_manifest(
        cfg, "ingest", {"src_root": src_root, "tgt_root": tgt_root}, outputs
    )
    return 0


def _prep_side(
    cfg: PipelineConfig, docs_path: Path, lang: str, identifier
) -> list[textprep.Sentence]:
    sentences: list[textprep.Sentence] = []
    for doc in ingest.read_documents(docs_path):
        text = textprep.normalize(doc.text)
        if not text:
            continue
        if doc.lang_hint:
            doc_lang = doc.lang_hint
        else:
            pred = identifier.detect(text)
            doc_lang = pred.lang
        if doc_lang != lang:
            log.info("dropping %s (detected %s, expected %s)", doc.uri, doc_lang, lang)
            continue
        doc = dataclasses.replace(doc, text=text)
        sentences.extend(textprep.split_sentences(doc, lang))
    sentences = textprep.dedup_exact(sentences)
    return textprep.dedup_near(sentences, cfg.dedup_threshold)


def stage_prep(cfg: PipelineConfig) -> int:
    docs_src = _require_artifact(cfg, DOCUMENTS_SRC, "prep", "ingest")
    docs_tgt = _require_artifact(cfg, DOCUMENTS_TGT, "prep", "ingest")
    src_lang = cfg.require("src_lang", "prep")
    tgt_lang = cfg.require("tgt_lang", "prep")
    if cfg.profiles_dir is not None:
        identifier = textprep.LanguageIdentifier.load(cfg.profiles_dir)
    else:
        identifier = textprep.LanguageIdentifier.bundled()
    outputs = {}
    for name, docs_path, lang in (
        (SENTENCES_SRC, docs_src, src_lang),
        (SENTENCES_TGT, docs_tgt, tgt_lang),
    ):
        sentences = _prep_side(cfg, docs_path, lang, identifier)
        out_path = cfg.output_dir / name
        _atomic(out_path, lambda tmp, s=sentences: textprep.write_sentences(tmp, s))
        outputs[name] = (out_path, len(sentences))
        log.info("kept %d %s sentences", len(sentences), lang)
    _write_manifest(
        cfg, "prep", {DOCUMENTS_SRC: docs_src, DOCUMENTS_TGT: docs_tgt}, outputs
    )
    return 0


def _read_seed_pairs(path: Path, src_lang: str, tgt_lang: str) -> list[lexmodel.SentencePair]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise ConfigError(
                    "paths.seed_corpus",
                    f"{path}:{i + 1}: expected 2 tab-separated columns, got {len(cols)}",
                )
            src = textprep.Sentence.make("seed", i, cols[0], src_lang)
            tgt = textprep.Sentence.make("seed", i, cols[1], tgt_lang)
            pairs.append(lexmodel.SentencePair(src, tgt, "seed"))
    return pairs


def _swap_pairs(pairs: list[lexmodel.SentencePair]) -> list[lexmodel.SentencePair]:
    return [lexmodel.SentencePair(p.tgt, p.src, p.origin) for p in pairs]


def stage_train(cfg: PipelineConfig) -> int:
    seed_path = cfg.require("seed_corpus", "train")
    src_lang = cfg.require("src_lang", "train")
    tgt_lang = cfg.require("tgt_lang", "train")
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    pairs = _read_seed_pairs(seed_path, src_lang, tgt_lang)
    inputs = {"seed_corpus": seed_path}
    if cfg.include_mined:
        mined_path = cfg.output_dir / MINED
        if mined_path.is_file():
            pairs = pairs + miner.read_corpus(mined_path)
            inputs[MINED] = mined_path
    fwd = lexmodel.train_model1(pairs, cfg.iterations)
    rev = lexmodel.train_model1(_swap_pairs(pairs), cfg.iterations)
    outputs = {}
    for name, table in ((TABLE_FWD, fwd), (TABLE_REV, rev)):
        out_path = cfg.output_dir / name
        _atomic(out_path, lambda tmp, t=table: lexmodel.write_table(tmp, t))
        outputs[name] = (out_path, sum(len(row) for row in table.t.values()))
    _write_manifest(cfg, "train", inputs, outputs, {"pairs": len(pairs)})
    return 0


def _doc_groups(sentences: list[textprep.Sentence]) -> dict[str, list[textprep.Sentence]]:
    groups: dict[str, list[textprep.Sentence]] = {}
    for s in sentences:
        groups.setdefault(s.doc_id, []).append(s)
    for group in groups.values():
        group.sort(key=lambda s: s.index)
    return groups


def stage_mine(cfg: PipelineConfig) -> int:
    sent_src = _require_artifact(cfg, SENTENCES_SRC, "mine", "prep")
    sent_tgt = _require_artifact(cfg, SENTENCES_TGT, "mine", "prep")
    table_fwd = _require_artifact(cfg, TABLE_FWD, "mine", "train")
    table_rev = _require_artifact(cfg, TABLE_REV, "mine", "train")
    docs_src = _require_artifact(cfg, DOCUMENTS_SRC, "mine", "ingest")
    docs_tgt = _require_artifact(cfg, DOCUMENTS_TGT, "mine", "ingest")

    fwd = lexmodel.read_table(table_fwd)
    rev = lexmodel.read_table(table_rev)
    src_groups = _doc_groups(textprep.read_sentences(sent_src))
    tgt_groups = _doc_groups(textprep.read_sentences(sent_tgt))
    src_uri = {d.id: d.uri for d in ingest.read_documents(docs_src)}
    tgt_by_uri = {d.uri: d.id for d in ingest.read_documents(docs_tgt)}

    # Documents pair up when both roots hold the same relative path.
    doc_pairs = []
    for doc_id, uri in sorted(src_uri.items(), key=lambda kv: kv[1]):
        tgt_id = tgt_by_uri.get(uri)
        if tgt_id is None or doc_id not in src_groups or tgt_id not in tgt_groups:
            continue
        doc_pairs.append((src_groups[doc_id], tgt_groups[tgt_id]))
    log.info("mining %d paired documents", len(doc_pairs))

    mined = miner.mine_corpus(doc_pairs, fwd, rev, cfg.filter, cfg.floor)
    out_path = cfg.output_dir / MINED
    _atomic(out_path, lambda tmp: miner.write_corpus(tmp, mined))
    _write_manifest(
        cfg,
        "mine",
        {
            SENTENCES_SRC: sent_src,
            SENTENCES_TGT: sent_tgt,
            TABLE_FWD: table_fwd,
            TABLE_REV: table_rev,
        },
        {MINED: (out_path, len(mined))},
        {"doc_pairs": len(doc_pairs)},
    )
    return 0


def stage_augment(cfg: PipelineConfig) -> int:
    mined_path = _require_artifact(cfg, MINED, "augment", "mine")
    table_rev = _require_artifact(cfg, TABLE_REV, "augment", "train")
    src_lang = cfg.require("src_lang", "augment")
    tgt_lang = cfg.require("tgt_lang", "augment")

    mined = miner.read_corpus(mined_path)
    rev = lexmodel.read_table(table_rev)
    inputs = {MINED: mined_path, TABLE_REV: table_rev}

    if cfg.mono_tgt is not None:
        mono = []
        with open(cfg.mono_tgt, encoding="utf-8") as fh:
            for i, line in enumerate(fh):
                text = textprep.normalize(line)
                if text:
                    mono.append(textprep.Sentence.make("mono", i, text, tgt_lang))
        inputs["mono_tgt"] = cfg.mono_tgt
    else:
        sent_tgt = _require_artifact(cfg, SENTENCES_TGT, "augment", "prep")
        mono = textprep.read_sentences(sent_tgt)
        inputs[SENTENCES_TGT] = sent_tgt

    reverse = augment_mod.NaiveTranslator(rev)
    synthetic: list[lexmodel.SentencePair] = []
    for _ in range(cfg.rounds):
        synthetic.extend(augment_mod.back_translate(mono, reverse, src_lang))
    merged = augment_mod.merge_corpora(mined, synthetic, cfg.cap_ratio)

    out_path = cfg.output_dir / AUGMENTED
    _atomic(
        out_path,
        lambda tmp: miner.write_corpus(tmp, merged.pairs, include_origin=True),
    )
    _write_manifest(
        cfg,
        "augment",
        inputs,
        {AUGMENTED: (out_path, len(merged.pairs))},
        {"counts": merged.counts},
    )
    return 0


# ---------------------------------------------------------------------------
# Evaluation service commands


def _eval_data_dir(args, cfg: PipelineConfig | None) -> Path:
    if args.data:
        return Path(args.data)
    if cfg is not None and cfg.eval_data is not None:
        return cfg.eval_data
    raise ConfigError("eval.data_dir", "required (pass --data or set it in the config)")


def cmd_eval_serve(args, cfg: PipelineConfig | None) -> int:
    import uvicorn

    from .evalservice import EvalService, create_app

    data_dir = _eval_data_dir(args, cfg)
    bind = args.bind or (cfg.bind if cfg else "127.0.0.1:8040")
    host, sep, port_s = bind.rpartition(":")
    if not sep or not host or not port_s.isdigit():
        raise ConfigError("eval.bind", f"expected host:port, got {bind!r}")
    service = EvalService(data_dir)
    ui_dir = cfg.ui_dir if cfg else None
    app = create_app(service, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=int(port_s), log_level="info")
    return 0


def cmd_eval_report(args, cfg: PipelineConfig | None) -> int:
    from .evalservice import EvalService

    data_dir = _eval_data_dir(args, cfg)
    service = EvalService(data_dir)
    store = service.store
    cells = evalkit.unblind_and_aggregate(
        store.scores.values(), store.sessions.values(), store.items.values()
    )
    cells = [c for c in cells if c.granularity == args.granularity]
    sys.stdout.write(evalkit.render_report(cells, normalized=args.normalized))
    return 0


# ---------------------------------------------------------------------------
# Entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corpusforge",
        description="Parallel-corpus mining pipeline with a blind evaluation service.",
    )
    sub = parser.add_subparsers(dest="stage", required=True)

    def common(sp, config_required=True):
        sp.add_argument(
            "--config", required=config_required, help="path to the pipeline config file"
        )
        sp.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            dest="overrides",
            help="override one config value",
        )
        sp.add_argument(
            "--jobs",
            type=int,
            default=1,
            help="worker cap for parallel stages (stages currently run single-threaded)",
        )

    for stage in ("ingest", "prep", "train", "mine", "augment"):
        common(sub.add_parser(stage, help=f"run the {stage} stage"))

    serve = sub.add_parser("eval-serve", help="run the evaluation HTTP service")
    common(serve, config_required=False)
    serve.add_argument("--bind", default=None, metavar="HOST:PORT")
    serve.add_argument("--data", default=None, help="evaluation data directory")

    report = sub.add_parser("eval-report", help="print the unblinded report table")
    common(report, config_required=False)
    report.add_argument(
        "--granularity", required=True, choices=list(evalkit.GRANULARITIES)
    )
    report.add_argument("--normalized", action="store_true")
    report.add_argument("--data", default=None, help="evaluation data directory")
    return parser


_STAGE_FUNCS = {
    "ingest": stage_ingest,
    "prep": stage_prep,
    "train": stage_train,
    "mine": stage_mine,
    "augment": stage_augment,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        if args.jobs < 1:
            raise ConfigError("--jobs", f"must be >= 1, got {args.jobs}")
        cfg = load_config(args.config, args.overrides) if args.config else None
        if args.stage in _STAGE_FUNCS:
            assert cfg is not None  # --config is required for pipeline stages
            return _STAGE_FUNCS[args.stage](cfg)
        if args.stage == "eval-serve":
            return cmd_eval_serve(args, cfg)
        if args.stage == "eval-report":
            return cmd_eval_report(args, cfg)
        raise ValueError(f"unknown stage {args.stage!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DependencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
