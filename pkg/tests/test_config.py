import pytest

from corpusforge.config import ConfigError, load_config
from corpusforge.miner import FilterConfig


BASE = """\
[paths]
src_root = am
tgt_root = en
seed_corpus = seed.tsv

[languages]
src = am
tgt = en
"""


@pytest.fixture()
def cfg_dir(tmp_path):
    (tmp_path / "am").mkdir()
    (tmp_path / "en").mkdir()
    (tmp_path / "seed.tsv").write_text("ሀ\talpha\n", encoding="utf-8")
    return tmp_path


def write_cfg(cfg_dir, text=BASE, name="pipe.cfg"):
    path = cfg_dir / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadConfig:
    def test_minimal(self, cfg_dir):
        cfg = load_config(write_cfg(cfg_dir), [])
        assert cfg.src_lang == "am"
        assert cfg.tgt_lang == "en"
        assert cfg.src_root == cfg_dir / "am"
        assert cfg.output_dir == cfg_dir / "out"
        assert cfg.filter == FilterConfig()
        assert cfg.iterations == 10
        assert cfg.dedup_threshold == 0.8
        assert cfg.cap_ratio == 1.0

    def test_missing_file(self, cfg_dir):
        with pytest.raises(ConfigError):
            load_config(cfg_dir / "absent.cfg", [])

    def test_relative_paths_resolved_against_config(self, cfg_dir):
        nested = cfg_dir / "conf"
        nested.mkdir()
        text = BASE.replace("= am", "= ../am").replace("= en", "../xx", 0)
        text = BASE.replace("src_root = am", "src_root = ../am").replace(
            "tgt_root = en", "tgt_root = ../en"
        ).replace("seed_corpus = seed.tsv", "seed_corpus = ../seed.tsv")
        cfg = load_config(write_cfg(nested, text), [])
        assert cfg.src_root == cfg_dir / "am"

    def test_missing_path_flagged_with_field(self, cfg_dir):
        text = BASE.replace("src_root = am", "src_root = missing")
        with pytest.raises(ConfigError) as exc:
            load_config(write_cfg(cfg_dir, text), [])
        assert "paths.src_root" in str(exc.value)

    @pytest.mark.parametrize(
        "override,field",
        [
            ("languages.src=fr", "languages.src"),
            ("textprep.dedup_threshold=0", "textprep.dedup_threshold"),
            ("textprep.dedup_threshold=1.5", "textprep.dedup_threshold"),
            ("lexmodel.iterations=0", "lexmodel.iterations"),
            ("lexmodel.floor=0", "lexmodel.floor"),
            ("filter.w=2", "filter.w"),
            ("filter.threshold=1", "filter.threshold"),
            ("filter.window=-1", "filter.window"),
            ("augment.cap_ratio=0", "augment.cap_ratio"),
            ("augment.rounds=0", "augment.rounds"),
            ("eval.bind=nocolon", "eval.bind"),
        ],
    )
    def test_validation_errors_carry_field_path(self, cfg_dir, override, field):
        with pytest.raises(ConfigError) as exc:
            load_config(write_cfg(cfg_dir), [override])
        assert field in str(exc.value)

    def test_same_language_rejected(self, cfg_dir):
        with pytest.raises(ConfigError) as exc:
            load_config(write_cfg(cfg_dir), ["languages.tgt=am"])
        assert "languages.tgt" in str(exc.value)

    def test_ratio_bounds_cross_validation(self, cfg_dir):
        with pytest.raises(ConfigError):
            load_config(write_cfg(cfg_dir), ["filter.ratio_lo=3", "filter.ratio_hi=2"])

    def test_overrides_apply(self, cfg_dir):
        cfg = load_config(
            write_cfg(cfg_dir),
            ["lexmodel.iterations=4", "filter.threshold=0.3", "augment.cap_ratio=2.5"],
        )
        assert cfg.iterations == 4
        assert cfg.filter.threshold == 0.3
        assert cfg.cap_ratio == 2.5

    def test_malformed_override(self, cfg_dir):
        with pytest.raises(ConfigError) as exc:
            load_config(write_cfg(cfg_dir), ["no-equals-sign"])
        assert "--set" in str(exc.value)

    def test_unknown_override_key(self, cfg_dir):
        with pytest.raises(ConfigError):
            load_config(write_cfg(cfg_dir), ["nosuch.key=1"])


class TestConfigHash:
    def test_stable_for_same_settings(self, cfg_dir):
        cfg_a = load_config(write_cfg(cfg_dir), [])
        cfg_b = load_config(write_cfg(cfg_dir, name="other.cfg"), [])
        assert cfg_a.config_hash() == cfg_b.config_hash()

    def test_changes_with_settings(self, cfg_dir):
        cfg_a = load_config(write_cfg(cfg_dir), [])
        cfg_b = load_config(write_cfg(cfg_dir), ["lexmodel.iterations=3"])
        assert cfg_a.config_hash() != cfg_b.config_hash()


class TestRequire:
    def test_present_field(self, cfg_dir):
        cfg = load_config(write_cfg(cfg_dir), [])
        assert cfg.require("src_root", "ingest") == cfg_dir / "am"

    def test_missing_field_names_stage(self, cfg_dir):
        text = BASE.replace("seed_corpus = seed.tsv\n", "")
        cfg = load_config(write_cfg(cfg_dir, text), [])
        with pytest.raises(ConfigError) as exc:
            cfg.require("seed_corpus", "train")
        msg = str(exc.value)
        assert "paths.seed_corpus" in msg
        assert "train" in msg
