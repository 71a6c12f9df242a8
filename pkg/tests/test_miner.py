import math

import pytest

from corpusforge.lexmodel import SentencePair, train_model1
from corpusforge.miner import (
    FilterConfig,
    dual_score,
    dual_score_value,
    generate_candidates,
    mine_corpus,
    read_corpus,
    write_corpus,
)
from corpusforge.textprep import Sentence


def sent(doc, idx, text, lang):
    return Sentence.make(doc, idx, text, lang)


def seed_pairs(rows, src_lang="am", tgt_lang="en"):
    return [
        SentencePair(
            sent("seed", i, s, src_lang), sent("seed", i, t, tgt_lang), "seed"
        )
        for i, (s, t) in enumerate(rows)
    ]


class TestFilterConfig:
    def test_defaults(self):
        cfg = FilterConfig()
        assert cfg.w == 0.5
        assert cfg.threshold == 0.5
        assert cfg.window == 5
        assert cfg.ratio_bounds == (0.5, 2.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"w": -0.1},
            {"w": 1.1},
            {"threshold": 0.0},
            {"threshold": 1.0},
            {"window": -1},
            {"ratio_bounds": (2.0, 0.5)},
            {"ratio_bounds": (0.0, 2.0)},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            FilterConfig(**kwargs)


class TestDualScoreValue:
    def test_closed_forms(self):
        assert dual_score_value(0.0, 0.0) == pytest.approx(1.0)
        assert dual_score_value(1.0, 1.0, w=0.5) == pytest.approx(
            math.exp(-1.0), abs=1e-9
        )
        assert dual_score_value(2.0, 0.0, w=0.5) == pytest.approx(
            math.exp(-3.0), abs=1e-9
        )

    def test_symmetric_at_half(self):
        assert dual_score_value(1.3, 0.2) == pytest.approx(dual_score_value(0.2, 1.3))

    def test_decreasing_in_joint_increase(self):
        # raising both entropies together always lowers the score
        assert dual_score_value(1.0, 1.0) > dual_score_value(1.5, 1.5)

    def test_decreasing_in_max_side(self):
        # raising the larger entropy (disagreement grows too) lowers the score
        assert dual_score_value(1.0, 0.5) > dual_score_value(1.5, 0.5)

    def test_range(self):
        for hf, hr in [(0, 0), (0.1, 3.0), (5.0, 5.0), (20.7, 20.7)]:
            s = dual_score_value(hf, hr)
            assert 0.0 < s <= 1.0


class TestGenerateCandidates:
    def make_docs(self, n_src, n_tgt, src_word="ab cd", tgt_word="ab cd"):
        src = [sent("s", i, f"{src_word} {i}", "am") for i in range(n_src)]
        tgt = [sent("t", j, f"{tgt_word} {j}", "en") for j in range(n_tgt)]
        return src, tgt

    def test_empty_docs_raise(self):
        src, tgt = self.make_docs(2, 2)
        with pytest.raises(ValueError):
            generate_candidates([], tgt, FilterConfig())
        with pytest.raises(ValueError):
            generate_candidates(src, [], FilterConfig())

    def test_window_limits_positions(self):
        src, tgt = self.make_docs(20, 20)
        cfg = FilterConfig(window=2, ratio_bounds=(0.1, 10.0))
        cands = generate_candidates(src, tgt, cfg)
        assert all(abs(c.pos_src - c.pos_tgt) <= 2 for c in cands)
        assert any(c.pos_src != c.pos_tgt for c in cands)

    def test_window_scales_with_length_ratio(self):
        # 10 src sentences vs 20 tgt: tgt position j maps near j/2
        src = [sent("s", i, f"src {i}", "am") for i in range(10)]
        tgt = [sent("t", j, f"tgt {j}", "en") for j in range(20)]
        cfg = FilterConfig(window=1, ratio_bounds=(0.1, 10.0))
        cands = generate_candidates(src, tgt, cfg)
        scale = 10 / 20
        assert cands
        assert all(abs(c.pos_src - c.pos_tgt * scale) <= 1 for c in cands)

    def test_ratio_bounds_inclusive(self):
        src = [sent("s", 0, "ab", "am")]  # 2 chars
        tgt = [sent("t", 0, "abcd", "en")]  # 4 chars: ratio exactly 0.5
        cands = generate_candidates(src, tgt, FilterConfig(ratio_bounds=(0.5, 2.0)))
        assert len(cands) == 1
        assert cands[0].len_ratio == pytest.approx(0.5)

    def test_ratio_excludes_outside(self):
        src = [sent("s", 0, "a", "am")]  # 1 char vs 4: ratio 0.25
        tgt = [sent("t", 0, "abcd", "en")]
        assert generate_candidates(src, tgt, FilterConfig()) == []

    def test_ordered_by_positions(self):
        src, tgt = self.make_docs(4, 4)
        cfg = FilterConfig(window=4, ratio_bounds=(0.1, 10.0))
        cands = generate_candidates(src, tgt, cfg)
        keys = [(c.pos_src, c.pos_tgt) for c in cands]
        assert keys == sorted(keys)


class TestDualScore:
    def test_scored_pair_fields(self):
        table_pairs = [("ሀ", "alpha"), ("ለ", "beta")]
        fwd = train_model1(seed_pairs(table_pairs), 5)
        rev = train_model1(seed_pairs([(t, s) for s, t in table_pairs], "en", "am"), 5)
        src = [sent("s", 0, "ሀ", "am")]
        tgt = [sent("t", 0, "alpha", "en")]
        cfg = FilterConfig(threshold=0.5, ratio_bounds=(0.05, 20.0))
        (cand,) = generate_candidates(src, tgt, cfg)
        scored = dual_score(cand, fwd, rev, cfg)
        assert scored.h_fwd == pytest.approx(0.0, abs=1e-9)
        assert scored.h_rev == pytest.approx(0.0, abs=1e-9)
        assert scored.score == pytest.approx(1.0)
        assert scored.accepted

    def test_threshold_boundary_accepts_equal(self):
        # score exactly equal to the threshold counts as accepted
        table_pairs = [("ሀ ለ", "alpha beta"), ("ሀ", "alpha")]
        fwd = train_model1(seed_pairs(table_pairs), 5)
        rev = train_model1(seed_pairs([(t, s) for s, t in table_pairs], "en", "am"), 5)
        src = [sent("s", 0, "ለ", "am")]
        tgt = [sent("t", 0, "beta", "en")]
        cfg_loose = FilterConfig(threshold=0.01, ratio_bounds=(0.05, 20.0))
        (cand,) = generate_candidates(src, tgt, cfg_loose)
        probe = dual_score(cand, fwd, rev, cfg_loose)
        assert 0.01 < probe.score < 1.0
        cfg_exact = FilterConfig(threshold=probe.score, ratio_bounds=(0.05, 20.0))
        assert dual_score(cand, fwd, rev, cfg_exact).accepted


class TestMineCorpus:
    def setup_tables(self):
        rows = [("ሀ", "alpha"), ("ለ", "beta"), ("ሐ", "gamma"), ("መ", "delta")]
        cross = [
            ("ሀ ለ", "alpha beta"),
            ("ሐ መ", "gamma delta"),
            ("ሀ ሐ", "alpha gamma"),
            ("ለ መ", "beta delta"),
        ]
        fwd = train_model1(seed_pairs(rows + cross), 10)
        rev = train_model1(
            seed_pairs([(t, s) for s, t in rows + cross], "en", "am"), 10
        )
        return fwd, rev

    def test_diagonal_recovery(self):
        fwd, rev = self.setup_tables()
        src = [sent("sd", i, w, "am") for i, w in enumerate(["ሀ", "ለ", "ሐ", "መ"])]
        tgt = [
            sent("td", j, w, "en")
            for j, w in enumerate(["alpha", "beta", "gamma", "delta"])
        ]
        cfg = FilterConfig(threshold=0.5, ratio_bounds=(0.05, 20.0))
        mined = mine_corpus([(src, tgt)], fwd, rev, cfg)
        got = {(p.src.text, p.tgt.text) for p in mined}
        assert got == {("ሀ", "alpha"), ("ለ", "beta"), ("ሐ", "gamma"), ("መ", "delta")}
        assert all(p.origin == "mined" for p in mined)

    def test_src_appears_at_most_once(self):
        fwd, rev = self.setup_tables()
        src = [sent("sd", 0, "ሀ", "am")]
        # two identical-quality targets compete for one source
        tgt = [sent("td", 0, "alpha", "en"), sent("td", 1, "alpha alpha", "en")]
        cfg = FilterConfig(threshold=0.1, ratio_bounds=(0.01, 100.0))
        mined = mine_corpus([(src, tgt)], fwd, rev, cfg)
        assert len(mined) == 1

    def test_sorted_by_descending_score(self):
        fwd, rev = self.setup_tables()
        src = [sent("sd", i, w, "am") for i, w in enumerate(["ሀ", "ለ ሐ"])]
        tgt = [sent("td", j, w, "en") for j, w in enumerate(["alpha", "beta gamma"])]
        cfg = FilterConfig(threshold=0.05, ratio_bounds=(0.05, 20.0))
        mined = mine_corpus([(src, tgt)], fwd, rev, cfg)
        scores = [p.score for p in mined]
        assert scores == sorted(scores, reverse=True)

    def test_below_threshold_dropped(self):
        fwd, rev = self.setup_tables()
        src = [sent("sd", 0, "ዞ", "am")]  # OOV
        tgt = [sent("td", 0, "alpha", "en")]
        cfg = FilterConfig(threshold=0.5, ratio_bounds=(0.05, 20.0))
        assert mine_corpus([(src, tgt)], fwd, rev, cfg) == []

    def test_empty_doc_pairs_ok(self):
        fwd, rev = self.setup_tables()
        assert mine_corpus([], fwd, rev, FilterConfig()) == []


class TestCorpusIO:
    def make_mined(self):
        src = sent("sd", 0, "ሀ ለ", "am")
        tgt = sent("td", 0, "alpha beta", "en")
        return [SentencePair(src, tgt, "mined", score=0.875)]

    def test_round_trip_five_columns(self, tmp_path):
        path = tmp_path / "mined.tsv"
        write_corpus(path, self.make_mined())
        line = path.read_text(encoding="utf-8").splitlines()[0]
        assert line.split("\t") == ["0.875000", "am", "en", "ሀ ለ", "alpha beta"]
        loaded = read_corpus(path)
        assert loaded[0].src.text == "ሀ ለ"
        assert loaded[0].tgt.text == "alpha beta"
        assert loaded[0].origin == "mined"
        assert loaded[0].score == pytest.approx(0.875)

    def test_round_trip_with_origin_column(self, tmp_path):
        pairs = self.make_mined()
        pairs.append(
            SentencePair(
                sent("bt", 1, "ሐ", "am"), sent("mono", 1, "gamma", "en"), "synthetic"
            )
        )
        path = tmp_path / "aug.tsv"
        write_corpus(path, pairs, include_origin=True)
        loaded = read_corpus(path)
        assert [p.origin for p in loaded] == ["mined", "synthetic"]
        assert loaded[1].score is None

    def test_bad_column_count(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("a\tb\tc\n", encoding="utf-8")
        with pytest.raises(ValueError):
            read_corpus(path)
