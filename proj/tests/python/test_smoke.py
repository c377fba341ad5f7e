import pytest

import loglshd


def test_block_lines_share_one_template(tmp_path):
    log = tmp_path / "blocks.log"
    log.write_text("Found block rdd_42_20 locally\nFound block rdd_7_3 locally\n")
    cfg = loglshd.RunConfig()
    cfg.log_path = log
    cfg.output_dir = tmp_path / "out"
    result = loglshd.run_pipeline(cfg)
    assert [t[1] for t in result["templates"]] == ["Found block <*> locally"]
    assert [r[0] for r in result["rows"]] == [1, 2]
    assert result["report"] is None
    assert result["structured_path"].exists()


def test_synthetic_corpus_round_trip(tmp_path):
    files = loglshd.generate_synthetic(tmp_path / "data", n_templates=5, logs_per_template=40)
    cfg = loglshd.RunConfig()
    cfg.dataset = "synthetic"
    cfg.log_path = files["log"]
    cfg.log_format = files["log_format"]
    cfg.ground_truth = files["ground_truth"]
    cfg.output_dir = tmp_path / "out"
    report = loglshd.run_pipeline(cfg)["report"]
    assert report["ga"] == 1.0
    assert report["pa"] == 1.0
    assert report["n_logs"] == 200


def test_sweeps_return_one_row_per_setting(tmp_path):
    files = loglshd.generate_synthetic(tmp_path / "data", n_templates=3, logs_per_template=20)
    cfg = loglshd.RunConfig()
    cfg.log_path = files["log"]
    cfg.log_format = files["log_format"]
    cfg.output_dir = tmp_path / "sweep"
    assert len(loglshd.sweep_thresholds(cfg)) == 11
    rows = loglshd.sweep_strategies(cfg, ["base", "base+first+p25+p50"])
    assert [r["strategy"] for r in rows] == ["base", "base+first+p25+p50"]
    assert all(r["error"] is None for r in rows)


def test_metrics():
    truth = {1: "a <*>", 2: "a <*>", 3: "b"}
    assert loglshd.grouping_accuracy(truth, truth) == 1.0
    assert loglshd.parsing_accuracy({1: "a  <*>", 2: "a <*>", 3: "c"}, truth) == pytest.approx(2 / 3)
    report = loglshd.evaluate({1: "x", 2: "x", 3: "x"}, truth)
    assert report["ga"] == 0.0
    assert report["pa"] == 0.0


def test_minhash_and_bands():
    a = loglshd.shingles_of("Open file handle now 42")
    assert a == {"Open", "file", "handle", "now"}
    sig = loglshd.minhash(a, 50, 7)
    assert len(sig) == 50
    assert loglshd.estimate_jaccard(sig, sig) == 1.0
    assert loglshd.exact_jaccard({"a", "b", "c"}, {"a", "b", "d"}) == 0.5
    assert loglshd.optimize_bands(50, 0.9) == (2, 25)
    bands, rows = loglshd.optimize_bands(50, 0.5)
    assert loglshd.candidate_probability(1.0, bands, rows) == 1.0


def test_template_helpers():
    assert loglshd.dtw_cost("abc", "abc") == 0
    assert loglshd.common_skeleton(["Found block rdd_42_20 locally",
                                    "Found block rdd_7_3 locally"]) == "Found block <*> locally"
    assert loglshd.merge_placeholders("a <*> <*> b") == "a <*> b"
    assert loglshd.event_id_for("Found block <*> locally") == "d7f24216"


def test_invalid_settings_raise(tmp_path):
    cfg = loglshd.RunConfig()
    with pytest.raises(ValueError):
        cfg.strategy = "base+middle"
    cfg.jaccard_threshold = 0.0
    cfg.log_path = tmp_path / "missing.log"
    with pytest.raises(loglshd.PipelineError):
        loglshd.run_pipeline(cfg)
    with pytest.raises(ValueError):
        cfg.on_mismatch = "sometimes"
