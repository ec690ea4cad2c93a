import csv
import io
import json

import pytest

from mixgap.errors import ConfigInvalid
from mixgap.experiment import (COLUMNS, ExperimentConfig, emit_report, format_float,
                               least_squares, load_report_json, radius_for, report_csv,
                               report_json, run_experiment)

SMALL = dict(sizes=[120, 250], trials=100, hitting_trials=40, qi_sample_pairs=500)


@pytest.fixture(scope="module")
def small_report():
    return run_experiment(ExperimentConfig(**SMALL, seed=3))


def test_row_arithmetic(small_report):
    cfg = small_report.config
    for row in small_report.rows:
        assert row["error"] is None
        assert row["gn_vertices"] == 2 * row["n_h"] + row["a_size"] * (cfg.bridge_len - 1)
        assert row["gn_edges"] == 3 * row["n_h"] + row["a_size"] * cfg.bridge_len
        assert row["qi_violations"] == 0 and row["qi_near_surjective"]
        assert row["t_mix_g"] == max(row["t_mix_g_dense"], row["t_mix_g_root2"]) or \
            row["t_mix_g_dense"] <= row["t_mix_g"]
        assert row["t_mix_q"] > row["t_mix_g"]
        assert 0 <= row["meet_probability"] <= 1
        assert row["coupling_horizon"] == 20 * row["radius"]


def test_radius_rule_defaults():
    cfg = ExperimentConfig()
    assert [radius_for(n, cfg) for n in cfg.sizes] == [5, 6, 7, 8]
    assert radius_for(1000, ExperimentConfig(r=3)) == 3


def test_empty_a_set_becomes_row_error():
    cfg = ExperimentConfig(sizes=[60, 120], r=2, delta=0.0, depth_min=3, trials=10,
                           hitting_trials=10, qi_sample_pairs=100)
    rep = run_experiment(cfg)
    assert rep.has_errors
    assert all(r["error"].startswith("EmptyASet") for r in rep.rows)
    assert all(r["t_mix_g"] is None for r in rep.rows)
    lines = report_csv(rep).splitlines()
    assert len(lines) == 3


@pytest.mark.parametrize("bad", [
    {"d": 2}, {"sizes": []}, {"sizes": [200, 100]}, {"depth_min": 1}, {"bridge_len": 1},
    {"epsilon": 0}, {"laziness": 1.0}, {"method": "magic"}, {"delta": None},
    {"delta": None, "ratio_lo": 2.0, "ratio_hi": 3.0}, {"stretch": 1},
])
def test_config_validation(bad):
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_dict(bad)


def test_config_unknown_key_and_bad_json():
    with pytest.raises(ConfigInvalid, match="unknown config keys: colour"):
        ExperimentConfig.from_dict({"colour": 1})
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_json("{nope")
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_json("[1, 2]")


def test_config_roundtrip():
    cfg = ExperimentConfig(**SMALL)
    assert ExperimentConfig.from_json(json.dumps(cfg.to_dict())) == cfg


def test_csv_layout(small_report):
    text = report_csv(small_report)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == COLUMNS + ["config"]
    assert len(rows) == 3
    assert json.loads(rows[1][-1]) == small_report.config.to_dict()
    hdr_only = report_csv(type(small_report)(small_report.config, []))
    assert hdr_only.count("\n") == 1


def test_json_roundtrip_byte_identical(small_report):
    text = report_json(small_report)
    again = load_report_json(text)
    assert report_json(again) == text
    obj = json.loads(text)
    assert obj["columns"] == COLUMNS
    assert set(obj["summary"]) >= {"fit_t_mix_g_vs_log2_gn", "fit_t_mix_q_vs_gn_over_a"}


def test_same_seed_same_bytes(small_report):
    again = run_experiment(ExperimentConfig(**SMALL, seed=3))
    assert report_json(again) == report_json(small_report)
    assert report_csv(again) == report_csv(small_report)


def test_emit_report(tmp_path, small_report):
    p = tmp_path / "r.csv"
    text = emit_report(small_report, "csv", p)
    assert p.read_text() == text
    with pytest.raises(ValueError):
        emit_report(small_report, "xml")


def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(2.0) == "2.0"
    assert format_float(1e-20) == "9.9999999999999995e-21"
    assert format_float(float("nan")) == "NaN"


def test_least_squares_exact_line():
    fit = least_squares([1, 2, 3], [3, 5, 7])
    assert fit["slope"] == pytest.approx(2) and fit["intercept"] == pytest.approx(1)
    assert fit["r2"] == pytest.approx(1)
