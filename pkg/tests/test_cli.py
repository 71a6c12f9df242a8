import json
import shutil

import pytest

import corpusforge
from corpusforge.cli import main
from corpusforge.miner import read_corpus


@pytest.fixture()
def toy(tmp_path):
    """Copy of the bundled toy corpus in a writable directory."""
    dest = tmp_path / "toy"
    shutil.copytree(corpusforge.toy_path(), dest)
    return dest


def run(toy, stage, *extra):
    return main([stage, "--config", str(toy / "toy.cfg"), *extra])


class TestPipeline:
    def test_full_run(self, toy, capsys):
        for stage in ("ingest", "prep", "train", "mine", "augment"):
            assert run(toy, stage) == 0, stage
        out = toy / "out"
        for name in (
            "documents_src.jsonl",
            "documents_tgt.jsonl",
            "sentences_src.tsv",
            "sentences_tgt.tsv",
            "table_fwd.tsv",
            "table_rev.tsv",
            "mined.tsv",
            "augmented.tsv",
        ):
            assert (out / name).is_file(), name
        mined = read_corpus(out / "mined.tsv")
        assert len(mined) == 40
        assert all(p.score is not None and p.score >= 0.4 for p in mined)
        # the two planted out-of-vocabulary lines never pair up
        texts = {(p.src.text, p.tgt.text) for p in mined}
        assert ("ፖለቲካ", "politics") not in texts
        augmented = read_corpus(out / "augmented.tsv")
        origins = {p.origin for p in augmented}
        assert origins == {"mined", "synthetic"}

    def test_manifests_written(self, toy):
        for stage in ("ingest", "prep", "train", "mine", "augment"):
            run(toy, stage)
        for stage in ("ingest", "prep", "train", "mine", "augment"):
            manifest = json.loads(
                (toy / "out" / f"manifest_{stage}.json").read_text()
            )
            assert manifest["stage"] == stage
            assert manifest["config_hash"]
            assert manifest["inputs"]
            for meta in manifest["outputs"].values():
                assert meta["rows"] >= 0
                assert len(meta["hash"]) == 32

    def test_rerun_is_deterministic(self, toy):
        for stage in ("ingest", "prep", "train", "mine"):
            run(toy, stage)
        first = (toy / "out" / "mined.tsv").read_bytes()
        first_manifest = (toy / "out" / "manifest_mine.json").read_bytes()
        for stage in ("ingest", "prep", "train", "mine"):
            run(toy, stage)
        assert (toy / "out" / "mined.tsv").read_bytes() == first
        assert (toy / "out" / "manifest_mine.json").read_bytes() == first_manifest

    def test_no_leftover_temp_files(self, toy):
        for stage in ("ingest", "prep", "train", "mine", "augment"):
            run(toy, stage)
        leftovers = list((toy / "out").glob("*.tmp"))
        assert leftovers == []


class TestStageOrdering:
    def test_prep_before_ingest_exits_2(self, toy, capsys):
        assert run(toy, "prep") == 2
        err = capsys.readouterr().err
        assert "stage prep requires output of stage ingest" in err

    def test_mine_before_train_exits_2(self, toy, capsys):
        run(toy, "ingest")
        run(toy, "prep")
        assert run(toy, "mine") == 2
        err = capsys.readouterr().err
        assert "stage mine requires output of stage train" in err

    def test_augment_before_mine_exits_2(self, toy, capsys):
        assert run(toy, "augment") == 2
        assert "requires output of stage" in capsys.readouterr().err


class TestErrorPaths:
    def test_invalid_config_exits_1(self, toy, capsys):
        code = run(toy, "ingest", "--set", "filter.threshold=2")
        assert code == 1
        err = capsys.readouterr().err
        assert err.startswith("error:")
        assert "filter.threshold" in err

    def test_missing_config_file_exits_1(self, tmp_path, capsys):
        code = main(["ingest", "--config", str(tmp_path / "nope.cfg")])
        assert code == 1

    def test_bad_override_exits_1(self, toy, capsys):
        assert run(toy, "ingest", "--set", "oops") == 1
        assert "--set" in capsys.readouterr().err

    def test_bad_jobs_exits_1(self, toy, capsys):
        assert run(toy, "ingest", "--jobs", "0") == 1

    def test_unknown_stage_rejected_by_argparse(self, capsys):
        with pytest.raises(SystemExit):
            main(["polish", "--config", "x"])


class TestMonoOverride:
    def test_augment_uses_mono_file(self, toy):
        for stage in ("ingest", "prep", "train", "mine"):
            run(toy, stage)
        mono = toy / "mono.txt"
        mono.write_text("water\nmoonbeam\n", encoding="utf-8")
        assert run(toy, "augment", "--set", f"paths.mono_tgt={mono}") == 0
        augmented = read_corpus(toy / "out" / "augmented.tsv")
        synth = [p for p in augmented if p.origin == "synthetic"]
        tgt_texts = {p.tgt.text for p in synth}
        assert tgt_texts <= {"water", "moonbeam"}
        # "water" translates through the table; "moonbeam" is copied verbatim
        by_tgt = {p.tgt.text: p.src.text for p in synth}
        if "water" in by_tgt:
            assert by_tgt["water"] == "ውሃ"


class TestEvalReportCommand:
    def test_report_prints_table(self, tmp_path, capsys):
        from helpers_eval import seed_eval_dir

        data = seed_eval_dir(tmp_path / "eval")
        code = main(
            ["eval-report", "--granularity", "sentence", "--data", str(data)]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "direction" in out
        assert "am->en" in out

    def test_report_requires_data_location(self, capsys):
        code = main(["eval-report", "--granularity", "sentence"])
        assert code == 1
        assert "eval.data_dir" in capsys.readouterr().err
