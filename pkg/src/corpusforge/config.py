"""Pipeline configuration.

Plain INI sections with dotted ``--set section.key=value`` overrides.
Relative paths resolve against the config file's directory. Validation
errors carry the offending field path (e.g. "filter.threshold").
"""

from __future__ import annotations

import configparser
import hashlib
import json
import os.path
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .ingest import SOURCE_KINDS
from .miner import FilterConfig

LANG_CODES = ("am", "ti", "en")


class ConfigError(Exception):
    """Invalid or missing configuration; message starts with the field path."""

    def __init__(self, field_path: str, message: str):
        super().__init__(f"{field_path}: {message}")
        self.field_path = field_path


@dataclass
class PipelineConfig:
    config_path: Path
    output_dir: Path
    src_root: Path | None = None
    tgt_root: Path | None = None
    source_kind: str = "plain"
    seed_corpus: Path | None = None
    mono_tgt: Path | None = None
    src_lang: str | None = None
    tgt_lang: str | None = None
    dedup_threshold: float = 0.8
    profiles_dir: Path | None = None
    iterations: int = 10
    floor: float = 1e-9
    include_mined: bool = False
    filter: FilterConfig = field(default_factory=FilterConfig)
    cap_ratio: float = 1.0
    rounds: int = 1
    bind: str = "127.0.0.1:8040"
    eval_data: Path | None = None
    ui_dir: Path | None = None

    def require(self, name: str, stage: str):
        """Fetch a field that a stage cannot run without."""
        value = getattr(self, name)
        if value is None:
            raise ConfigError(_FIELD_PATHS[name], f"required for stage {stage}")
        return value

    def config_hash(self) -> str:
        """Stable hash of the resolved settings, for run manifests."""
        resolved = {
            name: str(getattr(self, name)) for name in _FIELD_PATHS
        }
        resolved["filter"] = (
            f"{self.filter.w}|{self.filter.threshold}|{self.filter.window}"
            f"|{self.filter.ratio_bounds[0]}|{self.filter.ratio_bounds[1]}"
        )
        blob = json.dumps(resolved, sort_keys=True).encode("utf-8")
        return hashlib.blake2b(blob, digest_size=16).hexdigest()


_FIELD_PATHS = {
    "output_dir": "paths.output_dir",
    "src_root": "paths.src_root",
    "tgt_root": "paths.tgt_root",
    "source_kind": "paths.source_kind",
    "seed_corpus": "paths.seed_corpus",
    "mono_tgt": "paths.mono_tgt",
    "src_lang": "languages.src",
    "tgt_lang": "languages.tgt",
    "dedup_threshold": "textprep.dedup_threshold",
    "profiles_dir": "textprep.profiles_dir",
    "iterations": "lexmodel.iterations",
    "floor": "lexmodel.floor",
    "include_mined": "lexmodel.include_mined",
    "cap_ratio": "augment.cap_ratio",
    "rounds": "augment.rounds",
    "bind": "eval.bind",
    "eval_data": "eval.data_dir",
    "ui_dir": "eval.ui_dir",
}


class _Reader:
    def __init__(self, parser: configparser.ConfigParser, base: Path):
        self.parser = parser
        self.base = base

    def raw(self, section: str, key: str) -> str | None:
        if self.parser.has_option(section, key):
            return self.parser.get(section, key).strip()
        return None

    def path(self, section: str, key: str, must_exist: bool = True) -> Path | None:
        raw = self.raw(section, key)
        if raw is None or raw == "":
            return None
        p = Path(raw)
        if not p.is_absolute():
            p = self.base / p
        p = Path(os.path.normpath(p))
        if must_exist and not p.exists():
            raise ConfigError(f"{section}.{key}", f"path does not exist: {p}")
        return p

    def number(self, section: str, key: str, default: float, kind=float):
        raw = self.raw(section, key)
        if raw is None:
            return default
        try:
            return kind(raw)
        except ValueError:
            raise ConfigError(
                f"{section}.{key}",
                f"expected {'an integer' if kind is int else 'a number'}, got {raw!r}",
            )

    def flag(self, section: str, key: str, default: bool) -> bool:
        raw = self.raw(section, key)
        if raw is None:
            return default
        lowered = raw.lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{section}.{key}", f"expected a boolean, got {raw!r}")

    def choice(self, section: str, key: str, choices: Sequence[str], default=None):
        raw = self.raw(section, key)
        if raw is None:
            return default
        if raw not in choices:
            raise ConfigError(
                f"{section}.{key}", f"must be one of {list(choices)}, got {raw!r}"
            )
        return raw


_KNOWN_SETTINGS = {
    "paths": {"src_root", "tgt_root", "output_dir", "source_kind", "seed_corpus", "mono_tgt"},
    "languages": {"src", "tgt"},
    "textprep": {"dedup_threshold", "profiles_dir"},
    "lexmodel": {"iterations", "floor", "include_mined"},
    "filter": {"w", "threshold", "window", "ratio_lo", "ratio_hi"},
    "augment": {"cap_ratio", "rounds"},
    "eval": {"bind", "data_dir", "ui_dir"},
}


def load_config(path: str | Path, overrides: Sequence[str] = ()) -> PipelineConfig:
    """Load and validate a config file, applying --set overrides."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError("config", f"no such file: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError("config", f"cannot parse {path}: {exc}")
    for raw in overrides:
        key, sep, value = raw.partition("=")
        section, dot, option = key.partition(".")
        if not sep or not dot or not section or not option:
            raise ConfigError(
                "--set", f"override must look like section.key=value, got {raw!r}"
            )
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, option, value)

    for section in parser.sections():
        known = _KNOWN_SETTINGS.get(section)
        if known is None:
            raise ConfigError(section, "unknown section")
        for option in parser.options(section):
            if option not in known:
                raise ConfigError(f"{section}.{option}", "unknown setting")

    base = path.parent.resolve()
    r = _Reader(parser, base)

    src_lang = r.choice("languages", "src", LANG_CODES)
    tgt_lang = r.choice("languages", "tgt", LANG_CODES)
    if src_lang is not None and src_lang == tgt_lang:
        raise ConfigError("languages.tgt", "must differ from languages.src")

    dedup_threshold = r.number("textprep", "dedup_threshold", 0.8)
    if not 0.0 < dedup_threshold <= 1.0:
        raise ConfigError(
            "textprep.dedup_threshold", f"must be in (0, 1], got {dedup_threshold}"
        )
    iterations = r.number("lexmodel", "iterations", 10, int)
    if iterations < 1:
        raise ConfigError("lexmodel.iterations", f"must be >= 1, got {iterations}")
    floor = r.number("lexmodel", "floor", 1e-9)
    if floor <= 0:
        raise ConfigError("lexmodel.floor", f"must be > 0, got {floor}")

    w = r.number("filter", "w", 0.5)
    if not 0.0 <= w <= 1.0:
        raise ConfigError("filter.w", f"must be in [0, 1], got {w}")
    threshold = r.number("filter", "threshold", 0.5)
    if not 0.0 < threshold < 1.0:
        raise ConfigError("filter.threshold", f"must be in (0, 1), got {threshold}")
    window = r.number("filter", "window", 5, int)
    if window < 0:
        raise ConfigError("filter.window", f"must be >= 0, got {window}")
    ratio_lo = r.number("filter", "ratio_lo", 0.5)
    ratio_hi = r.number("filter", "ratio_hi", 2.0)
    if not ratio_lo < ratio_hi:
        raise ConfigError("filter.ratio_lo", f"must be < filter.ratio_hi, got {ratio_lo}")

    cap_ratio = r.number("augment", "cap_ratio", 1.0)
    if cap_ratio <= 0:
        raise ConfigError("augment.cap_ratio", f"must be > 0, got {cap_ratio}")
    rounds = r.number("augment", "rounds", 1, int)
    if rounds < 1:
        raise ConfigError("augment.rounds", f"must be >= 1, got {rounds}")

    bind = r.raw("eval", "bind") or "127.0.0.1:8040"
    host, sep, port = bind.rpartition(":")
    if not sep or not host or not port.isdigit():
        raise ConfigError("eval.bind", f"expected host:port, got {bind!r}")

    output_dir = r.path("paths", "output_dir", must_exist=False) or (base / "out")

    return PipelineConfig(
        config_path=path,
        output_dir=output_dir,
        src_root=r.path("paths", "src_root"),
        tgt_root=r.path("paths", "tgt_root"),
        source_kind=r.choice("paths", "source_kind", SOURCE_KINDS, "plain"),
        seed_corpus=r.path("paths", "seed_corpus"),
        mono_tgt=r.path("paths", "mono_tgt"),
        src_lang=src_lang,
        tgt_lang=tgt_lang,
        dedup_threshold=dedup_threshold,
        profiles_dir=r.path("textprep", "profiles_dir"),
        iterations=iterations,
        floor=floor,
        include_mined=r.flag("lexmodel", "include_mined", False),
        filter=FilterConfig(w, threshold, window, (ratio_lo, ratio_hi)),
        cap_ratio=cap_ratio,
        rounds=rounds,
        bind=bind,
        eval_data=r.path("eval", "data_dir", must_exist=False),
        ui_dir=r.path("eval", "ui_dir"),
    )
