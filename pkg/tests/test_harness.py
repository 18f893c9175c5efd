"""Suite orchestration, report files, determinism, and the CLI."""

import json
from pathlib import Path

import numpy as np
import pytest

from fqdist import InvalidConfig, make_field, sample_point_set, save_point_set
from fqdist.cli import main, parse_cli
from fqdist.harness import (
    SUITES,
    SuiteConfig,
    derived_seed,
    parallel_map,
    rng_stream,
    run_suite,
    write_csv,
    write_jsonl,
)

SMALL = dict(q_list=(7, 13), d_list=(2,), n_list=(2, 3), trials=2,
             figures=False)

DELIMITED = ("identity_checks.csv", "bound_checks.csv", "decay_reports.csv",
             "incidence_audits.csv", "coverage_summary.csv",
             "two_set_coverage.csv", "identities.jsonl",
             "decay_reports.jsonl", "incidence_audits.jsonl",
             "coverage.jsonl")


def test_suite_config_validation():
    SuiteConfig(suite="all").validate()
    for bad in (
            SuiteConfig(suite="nope"),
            SuiteConfig(suite="all", q_list=(9,)),
            SuiteConfig(suite="all", q_list=()),
            SuiteConfig(suite="all", d_list=()),
            SuiteConfig(suite="all", n_list=()),
            SuiteConfig(suite="all", d_list=(1,)),
            SuiteConfig(suite="all", n_list=(1,)),
            SuiteConfig(suite="all", C=0.0),
            SuiteConfig(suite="all", trials=-1),
            SuiteConfig(suite="all", seed=-1),
            SuiteConfig(suite="all", c_env=0.0),
            SuiteConfig(suite="all", jobs=0)):
        with pytest.raises(InvalidConfig):
            bad.validate()


def test_rng_stream_keying():
    a = rng_stream(0, "incidence", 7, 2, 2, 0)
    b = rng_stream(0, "incidence", 7, 2, 2, 0)
    c = rng_stream(0, "incidence", 7, 2, 2, 1)
    d = rng_stream(0, "coverage", 7, 2, 2, 0)
    va, vb, vc, vd = (g.integers(0, 2**31, size=4).tolist()
                      for g in (a, b, c, d))
    assert va == vb
    assert va != vc
    assert va != vd
    assert derived_seed(0, "x", 1) == derived_seed(0, "x", 1)
    assert derived_seed(0, "x", 1) != derived_seed(1, "x", 1)


def test_parallel_map_preserves_order():
    items = list(range(20))
    assert parallel_map(_square, items, 1) == [i * i for i in items]
    assert parallel_map(_square, items, 2) == [i * i for i in items]


def _square(x):
    return x * x


def test_write_csv_formatting(tmp_path):
    p = tmp_path / "t.csv"
    write_csv(p, ("a", "b", "c", "d"),
              [(1, 0.30000000000000004, True, None), (2, 1 / 3, False, "x")])
    lines = p.read_text().splitlines()
    assert lines[0] == "a,b,c,d"
    assert lines[1] == "1,0.3,True,"
    assert lines[2] == "2,0.333333333333,False,x"


def test_write_jsonl_sorted_keys(tmp_path):
    p = tmp_path / "t.jsonl"
    write_jsonl(p, [{"b": 1, "a": 2}])
    assert p.read_text() == '{"a": 2, "b": 1}\n'
    write_jsonl(p, [])
    assert p.read_text() == ""


def _run(tmp_path, name, **overrides):
    out = tmp_path / name
    params = dict(SMALL, out_dir=str(out))
    params.update(overrides)
    report = run_suite(SuiteConfig(suite="all", **params))
    return report, out


def test_run_suite_writes_all_reports(tmp_path):
    report, out = _run(tmp_path, "a")
    assert report.verdict
    assert report.rng_algorithm == "PCG64"
    assert set(report.suites_run) == set(SUITES)
    for fname in DELIMITED + ("report.json", "summary.txt"):
        assert (out / fname).exists(), fname
    doc = json.loads((out / "report.json").read_text())
    assert doc["verdict"] == "pass"
    assert doc["config"]["q_list"] == [7, 13]
    assert doc["rng_algorithm"] == "PCG64"
    assert set(doc["timings"]) == set(SUITES)
    summary = (out / "summary.txt").read_text()
    assert "verdict: pass" in summary


def test_run_suite_records_skips(tmp_path):
    report, out = _run(tmp_path, "a")
    reasons = {(s["q"], s["d"], s["n"]): s["reason"] for s in report.skipped}
    assert (7, 2, 2) in reasons  # coverage size exceeds the plane
    assert (7, 2, 3) in reasons  # cubes miss radii 3 and 4
    doc = json.loads((out / "report.json").read_text())
    assert len(doc["skipped"]) == len(report.skipped)


def test_outputs_byte_identical_across_runs_and_jobs(tmp_path):
    _, out_a = _run(tmp_path, "a")
    _, out_b = _run(tmp_path, "b")
    _, out_c = _run(tmp_path, "c", jobs=2)
    for fname in DELIMITED:
        a = (out_a / fname).read_bytes()
        assert a == (out_b / fname).read_bytes(), fname
        assert a == (out_c / fname).read_bytes(), fname


def test_outputs_depend_on_seed(tmp_path):
    _, out_a = _run(tmp_path, "a")
    _, out_d = _run(tmp_path, "d", seed=1)
    assert ((out_a / "incidence_audits.csv").read_bytes()
            != (out_d / "incidence_audits.csv").read_bytes())


def test_single_suite_run(tmp_path):
    out = tmp_path / "decay"
    report = run_suite(SuiteConfig(
        suite="sphere-decay", q_list=(7, 13), d_list=(2,), n_list=(3,),
        out_dir=str(out), figures=False))
    assert report.suites_run == ["sphere-decay"]
    assert report.verdict
    assert (out / "decay_reports.csv").exists()
    assert not (out / "identity_checks.csv").exists()
    rows = (out / "decay_reports.csv").read_text().splitlines()
    assert rows[0].startswith("q,d,n,j,")
    assert len(rows) == 1 + 6 + 12


def test_trials_zero_is_vacuous_pass(tmp_path):
    out = tmp_path / "z"
    report = run_suite(SuiteConfig(
        suite="coverage", q_list=(13,), d_list=(2,), n_list=(3,),
        trials=0, out_dir=str(out), figures=False))
    assert report.verdict
    rows = (out / "coverage_summary.csv").read_text().splitlines()
    assert len(rows) == 1


def test_figures_rendered_when_enabled(tmp_path):
    out = tmp_path / "figs"
    run_suite(SuiteConfig(
        suite="sphere-decay", q_list=(7,), d_list=(2,), n_list=(2,),
        out_dir=str(out), figures=True))
    pngs = sorted(p.name for p in out.glob("*.png"))
    assert pngs == ["decay_constants.png", "zero_mode_deviation.png"]
    out2 = tmp_path / "nofigs"
    run_suite(SuiteConfig(
        suite="sphere-decay", q_list=(7,), d_list=(2,), n_list=(2,),
        out_dir=str(out2), figures=False))
    assert list(out2.glob("*.png")) == []


def test_points_path_drives_incidence_and_coverage(tmp_path):
    fld = make_field(13)
    E = sample_point_set(fld, 2, 82, 11)
    pts = tmp_path / "pts.txt"
    save_point_set(E, pts)
    out = tmp_path / "out"
    report = run_suite(SuiteConfig(
        suite="incidence", q_list=(7,), d_list=(3,), n_list=(2, 3),
        points_path=str(pts), out_dir=str(out), figures=False))
    assert report.verdict
    rows = (out / "incidence_audits.csv").read_text().splitlines()
    # the file's ambient (q=13, d=2) wins over the configured grid
    assert len(rows) == 3
    assert rows[1].startswith("13,2,2,0,82,82,")
    report = run_suite(SuiteConfig(
        suite="coverage", q_list=(7,), d_list=(3,), n_list=(3,),
        points_path=str(pts), out_dir=str(out), figures=False))
    assert report.verdict


def test_parse_cli_defaults_and_flags(monkeypatch):
    cfg = parse_cli(["verify", "all"])
    assert cfg.q_list == (7, 13, 19, 31)
    assert cfg.d_list == (2, 3)
    assert cfg.n_list == (2, 3)
    assert cfg.C == 3.0 and cfg.trials == 50 and cfg.seed == 0
    assert cfg.c_env == 10.0
    assert cfg.out_dir == "fqdist-out"
    assert cfg.jobs == 1
    assert cfg.figures
    cfg = parse_cli(["verify", "incidence", "--q", "7,13", "--d", "2",
                     "--n", "3", "--trials", "9", "--seed", "4",
                     "--c-env", "8", "--out", "x", "--jobs", "3",
                     "--no-figures"])
    assert cfg.suite == "incidence"
    assert cfg.q_list == (7, 13) and cfg.d_list == (2,)
    assert cfg.trials == 9 and cfg.seed == 4 and cfg.c_env == 8.0
    assert cfg.out_dir == "x" and cfg.jobs == 3 and not cfg.figures
    monkeypatch.setenv("FQDIST_OUT", "env-dir")
    monkeypatch.setenv("FQDIST_JOBS", "5")
    cfg = parse_cli(["verify", "all"])
    assert cfg.out_dir == "env-dir" and cfg.jobs == 5
    cfg = parse_cli(["verify", "all", "--out", "flag-dir", "--jobs", "2"])
    assert cfg.out_dir == "flag-dir" and cfg.jobs == 2


def test_parse_cli_rejects_bad_input():
    with pytest.raises(InvalidConfig):
        parse_cli(["verify", "all", "--q", "9"])
    with pytest.raises(SystemExit) as exc:
        parse_cli(["verify", "unknown-suite"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        parse_cli(["verify", "all", "--q", "x,y"])
    assert exc.value.code == 2


def test_cli_exit_codes(tmp_path, capsys):
    code = main(["verify", "sphere-decay", "--q", "7,13", "--d", "2",
                 "--n", "2", "--out", str(tmp_path / "ok"), "--no-figures"])
    assert code == 0
    assert "verdict: pass" in capsys.readouterr().out
    # composite modulus is a configuration error
    code = main(["verify", "all", "--q", "9",
                 "--out", str(tmp_path / "bad")])
    assert code == 2
    assert "not prime" in capsys.readouterr().err
    # the sixth power family genuinely exceeds the envelope at q = 19
    code = main(["verify", "sphere-decay", "--q", "19", "--d", "2",
                 "--n", "6", "--out", str(tmp_path / "red"), "--no-figures"])
    assert code == 1
    assert "verdict: fail" in capsys.readouterr().out
    doc = json.loads((tmp_path / "red" / "report.json").read_text())
    assert doc["verdict"] == "fail"
    agg = doc["aggregates"]["sphere-decay"]
    assert agg["max_zero_mode_dev"] > 10.0
