"""Suite orchestration: configuration, deterministic RNG streams, sweep
execution, and report emission.

Each suite runs a parameter grid, collects serializable check results,
and writes CSV (tables), JSON lines (machines), and a plain-text summary
(humans) into the output directory. Output bytes depend only on the
configuration, including the seed and regardless of the parallelism
degree: every random trial owns an RNG stream keyed by (seed, suite,
parameters, trial), and merged results are ordered by parameter tuple.
"""

from __future__ import annotations

import json
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import distance, identities, spheres
from .errors import HypothesisViolated, InvalidConfig, SizeTooLarge
from .field import is_prime, make_field, mult_character
from .spheres import DECAY_CSV_COLUMNS
from .vectorspace import load_point_set, sample_point_set

SUITES = ("identities", "sphere-decay", "incidence", "coverage")

IDENTITY_CSV_COLUMNS = ("name", "params", "lhs_re", "lhs_im", "rhs_re",
                        "rhs_im", "residual", "tolerance", "pass")
BOUND_CSV_COLUMNS = ("name", "params", "magnitude", "envelope", "ratio")
INCIDENCE_CSV_COLUMNS = ("q", "d", "n", "trial", "size_e", "size_f",
                         "max_ratio", "all_exact", "passed", "hypothesis_ok")
TWO_SET_CSV_COLUMNS = ("q", "d", "n", "C", "size_e", "size_f", "trials",
                       "star_coverage_fraction", "min_coverage")


@dataclass
class SuiteConfig:
    """Parameters of one verification run."""

    suite: str
    q_list: tuple = (7, 13, 19, 31)
    d_list: tuple = (2, 3)
    n_list: tuple = (2, 3)
    C: float = 3.0
    trials: int = 50
    seed: int = 0
    c_env: float = 10.0
    out_dir: str = "fqdist-out"
    jobs: int = 1
    points_path: str | None = None
    figures: bool = True

    def validate(self) -> None:
        """Raise InvalidConfig naming the offending field."""
        if self.suite not in SUITES + ("all",):
            raise InvalidConfig(f"suite: unknown suite {self.suite!r}")
        for field in ("q_list", "d_list", "n_list"):
            if not getattr(self, field):
                raise InvalidConfig(f"{field}: must not be empty")
        for q in self.q_list:
            if not is_prime(int(q)):
                raise InvalidConfig(f"q_list: {q} is not prime")
        for d in self.d_list:
            if int(d) < 2:
                raise InvalidConfig(f"d_list: {d} is below the minimum 2")
        for n in self.n_list:
            if int(n) < 2:
                raise InvalidConfig(f"n_list: {n} is below the minimum 2")
        if self.C <= 0:
            raise InvalidConfig(f"C: must be positive, got {self.C}")
        if self.trials < 0:
            raise InvalidConfig(f"trials: must be >= 0, got {self.trials}")
        if self.seed < 0:
            raise InvalidConfig(f"seed: must be >= 0, got {self.seed}")
        if self.c_env <= 0:
            raise InvalidConfig(f"c_env: must be positive, got {self.c_env}")
        if self.jobs < 1:
            raise InvalidConfig(f"jobs: must be >= 1, got {self.jobs}")


@dataclass
class ExperimentReport:
    """Aggregate outcome of one run_suite call."""

    config: SuiteConfig
    suites_run: list
    aggregates: dict
    skipped: list
    timings: dict
    verdict: bool
    rng_algorithm: str = "PCG64"
    files: list = dc_field(default_factory=list)


def rng_stream(seed: int, *key) -> np.random.Generator:
    """A deterministic PCG64 stream keyed by (seed, *key).

    String key parts are folded to integers with crc32, so streams are
    independent of execution order and worker count.
    """
    parts = tuple(
        zlib.crc32(k.encode()) if isinstance(k, str) else int(k) for k in key)
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed), spawn_key=parts))


def derived_seed(seed: int, *key) -> int:
    """A child seed for APIs that take a plain integer seed."""
    parts = tuple(
        zlib.crc32(k.encode()) if isinstance(k, str) else int(k) for k in key)
    state = np.random.SeedSequence(
        entropy=int(seed), spawn_key=parts).generate_state(2)
    return int(state[0]) << 32 | int(state[1])


def parallel_map(fn, items, jobs: int) -> list:
    """Map preserving input order, optionally over a process pool."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return format(v, ".12g")
    if v is None:
        return ""
    return str(v)


def write_csv(path: Path, columns, rows) -> None:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_jsonl(path: Path, dicts) -> None:
    lines = [json.dumps(d, sort_keys=True) for d in dicts]
    path.write_text("\n".join(lines) + ("\n" if lines else ""),
                    encoding="utf-8")


def _params_str(parameters: dict) -> str:
    return " ".join(f"{k}={parameters[k]}" for k in sorted(parameters))


def _identity_row(c: identities.IdentityCheck) -> tuple:
    return (c.name, _params_str(c.parameters), c.lhs.real, c.lhs.imag,
            c.rhs.real, c.rhs.imag, c.residual, c.tolerance, c.passed)


def _bound_row(b: identities.BoundCheck) -> tuple:
    return (b.name, _params_str(b.parameters), b.magnitude, b.envelope,
            b.ratio)


# ---------------------------------------------------------------- identities

def _identities_for_q(args) -> tuple:
    q, n_list, seed, samples = args
    fld = make_field(q)
    checks: list = []
    bounds: list = []
    skipped: list = []
    cubic_ok = q % 3 == 1
    if cubic_ok:
        chars = [mult_character(fld, 3, 1), mult_character(fld, 3, 2)]
        for psi in chars:
            for a in range(1, q):
                checks.append(identities.check_duke_iwaniec(fld, a, psi))
        for psi in chars:
            for t in range(1, q):
                for l in (1, 2):
                    checks.append(
                        identities.check_cubic_power_expansion(fld, t, l, psi))
        rng = rng_stream(seed, "identities", "kloosterman", q)
        for t in range(1, q):
            for l in (1, 2):
                for _ in range(samples):
                    m_vec = tuple(int(m) for m in rng.integers(1, q, size=l))
                    for psi in chars:
                        checks.append(
                            identities.check_completed_kloosterman_form(
                                fld, t, m_vec, psi))
    else:
        skipped.append({"suite": "identities", "q": q,
                        "reason": "cubic identities need q = 1 mod 3"})
    for n in n_list:
        for t in range(1, q):
            for b in (0, 1):
                checks.append(identities.check_gauss_expansion(fld, t, b, n))
    if cubic_ok:
        rng = rng_stream(seed, "identities", "a_r", q)
        psi = mult_character(fld, 3, 1)
        for d in (2, 3):
            for l in (1, 2):
                if l > d:
                    continue
                for r in range(0, d - l + 1):
                    for j in (1, q - 1):
                        m_vec = tuple(
                            int(m) for m in rng.integers(1, q, size=l))
                        bounds.append(identities.compute_A_r(
                            fld, j, l, d, r, m_vec, psi))
    for n in n_list:
        for (m1, m2) in ((1, 2), (1, 0)):
            for j in (1, q - 1):
                bounds.append(
                    identities.check_cohomology_bound(fld, n, m1, m2, j))
    return checks, bounds, skipped


def _run_identities(config: SuiteConfig) -> dict:
    cells = [(q, tuple(sorted(config.n_list)), config.seed, 3)
             for q in sorted(config.q_list)]
    merged = parallel_map(_identities_for_q, cells, config.jobs)
    checks, bounds, skipped = [], [], []
    for ch, bo, sk in merged:
        checks.extend(ch)
        bounds.extend(bo)
        skipped.extend(sk)
    flat_bounds = []
    for b in bounds:
        flat_bounds.append(b)
        flat_bounds.extend(b.r_k_checks)
    max_residual: dict = {}
    for c in checks:
        max_residual[c.name] = max(max_residual.get(c.name, 0.0), c.residual)
    max_ratio: dict = {}
    for b in flat_bounds:
        max_ratio[b.name] = max(max_ratio.get(b.name, 0.0), b.ratio)
    passed = (all(c.passed for c in checks)
              and all(b.ratio <= config.c_env for b in flat_bounds))
    return {
        "name": "identities",
        "checks": checks,
        "bounds": flat_bounds,
        "skipped": skipped,
        "aggregates": {
            "identity_checks": len(checks),
            "bound_checks": len(flat_bounds),
            "max_residual_by_name": max_residual,
            "max_ratio_by_name": max_ratio,
        },
        "passed": passed,
    }


# --------------------------------------------------------------- sphere decay

def _decay_cell(args) -> list:
    n, d, q = args
    return spheres.constant_sweep(n, d, "all", [q])


def _run_sphere_decay(config: SuiteConfig) -> dict:
    cells = [(n, d, q)
             for n in sorted(config.n_list)
             for d in sorted(config.d_list)
             for q in sorted(config.q_list)]
    reports = [r for cell in parallel_map(_decay_cell, cells, config.jobs)
               for r in cell]
    asserted = [r for r in reports if r.hypothesis_ok]
    exploratory = [r for r in reports if not r.hypothesis_ok]
    agg_by_nd: dict = {}
    for r in asserted:
        key = f"n={r.spec.n} d={r.spec.d}"
        cur = agg_by_nd.setdefault(
            key, {"max_decay_constant": 0.0, "max_zero_mode_dev": 0.0})
        cur["max_decay_constant"] = max(cur["max_decay_constant"],
                                        r.decay_constant)
        cur["max_zero_mode_dev"] = max(cur["max_zero_mode_dev"],
                                       r.zero_mode_deviation)
    passed = all(r.decay_constant <= config.c_env
                 and r.zero_mode_deviation <= config.c_env for r in asserted)
    return {
        "name": "sphere-decay",
        "reports": reports,
        "skipped": [],
        "aggregates": {
            "reports": len(reports),
            "asserted": len(asserted),
            "exploratory": len(exploratory),
            "max_by_family": agg_by_nd,
            "max_decay_constant":
                max((r.decay_constant for r in asserted), default=0.0),
            "max_zero_mode_dev":
                max((r.zero_mode_deviation for r in asserted), default=0.0),
        },
        "passed": passed,
    }


# ----------------------------------------------------------------- incidence

def _incidence_cell(args):
    q, d, n, trial, seed, c_env = args
    fld = make_field(q)
    rng = rng_stream(seed, "incidence", q, d, n, trial)
    size_e = int(rng.integers(1, q**d + 1))
    size_f = int(rng.integers(1, q**d + 1))
    E = sample_point_set(fld, d, size_e, rng)
    F = sample_point_set(fld, d, size_f, rng)
    audit = distance.incidence_audit(E, F, n, c_env=c_env)
    return (q, d, n, trial), audit


def _run_incidence(config: SuiteConfig) -> dict:
    skipped: list = []
    cells = []
    if config.points_path:
        E = load_point_set(config.points_path)
        audits = []
        keys = []
        for n in sorted(config.n_list):
            if n == 3 and E.d >= 3 and E.field.q % 3 != 1:
                skipped.append({"suite": "incidence", "q": E.field.q,
                                "d": E.d, "n": n,
                                "reason": "needs q = 1 mod 3"})
                continue
            keys.append((E.field.q, E.d, n, 0))
            audits.append(
                distance.incidence_audit(E, E, n, c_env=config.c_env))
        keyed = list(zip(keys, audits))
    else:
        for q in sorted(config.q_list):
            for d in sorted(config.d_list):
                for n in sorted(config.n_list):
                    if n == 3 and d >= 3 and q % 3 != 1:
                        skipped.append({"suite": "incidence", "q": q, "d": d,
                                        "n": n, "reason": "needs q = 1 mod 3"})
                        continue
                    for trial in range(config.trials):
                        cells.append(
                            (q, d, n, trial, config.seed, config.c_env))
        keyed = parallel_map(_incidence_cell, cells, config.jobs)
    keyed.sort(key=lambda kv: kv[0])
    rows = [(k[0], k[1], k[2], k[3], a.size_e, a.size_f, a.max_ratio,
             a.all_exact, a.passed, a.hypothesis_ok) for k, a in keyed]
    audits = [a for _, a in keyed]
    claimed = [a for a in audits if a.hypothesis_ok]
    passed = (all(a.passed for a in claimed)
              and all(a.all_exact for a in audits))
    return {
        "name": "incidence",
        "rows": rows,
        "audits": audits,
        "skipped": skipped,
        "aggregates": {
            "audits": len(audits),
            "max_ratio": max((a.max_ratio for a in claimed), default=0.0),
            "all_exact": all(a.all_exact for a in audits),
        },
        "passed": passed,
    }


# ------------------------------------------------------------------ coverage

def _coverage_trial_cell(args):
    q, d, n, C, seed, trial = args
    return ((q, d, n, trial),
            distance.coverage_single_trial(q, d, n, C, seed, trial))


def _two_set_trial_cell(args):
    q, d, n, size, seed, trial = args
    fld = make_field(q)
    rng = rng_stream(seed, "two-set", q, d, n, trial)
    E = sample_point_set(fld, d, size, rng)
    F = sample_point_set(fld, d, size, rng)
    return (q, d, n, trial), distance.two_set_coverage(E, F, n)


def _run_coverage(config: SuiteConfig) -> dict:
    skipped: list = []
    summary_rows = []
    two_set_rows = []
    results_json = []
    if config.points_path:
        E = load_point_set(config.points_path)
        for n in sorted(config.n_list):
            res = distance.two_set_coverage(E, E, n)
            results_json.append(res.to_json_dict())
            summary_rows.append((E.field.q, E.d, n, None, E.size, 1,
                                 1.0 if res.full_coverage else 0.0,
                                 len(res.covered)))
        passed = True
        return {
            "name": "coverage", "summary_rows": summary_rows,
            "two_set_rows": two_set_rows, "results_json": results_json,
            "skipped": skipped,
            "aggregates": {"cells": len(summary_rows)},
            "passed": passed,
        }
    one_cells = []
    two_cells = []
    for q in sorted(config.q_list):
        for d in sorted(config.d_list):
            for n in sorted(config.n_list):
                if n == 3 and d >= 3 and q % 3 != 1:
                    skipped.append({"suite": "coverage", "q": q, "d": d,
                                    "n": n, "reason": "needs q = 1 mod 3"})
                    continue
                if not distance.norm_surjective(q, d, n):
                    skipped.append({
                        "suite": "coverage", "q": q, "d": d, "n": n,
                        "reason": "norm misses some radii on the whole space"})
                    continue
                try:
                    distance.coverage_set_size(q, d, config.C)
                except SizeTooLarge:
                    skipped.append({"suite": "coverage", "q": q, "d": d,
                                    "n": n,
                                    "reason": "size exceeds space at this C"})
                else:
                    cell_seed = derived_seed(config.seed, "coverage", q, d, n)
                    for t in range(config.trials):
                        one_cells.append((q, d, n, config.C, cell_seed, t))
                two_size = math.ceil(math.sqrt(config.C * q ** (d + 1)))
                if two_size <= q**d:
                    for t in range(config.trials):
                        two_cells.append((q, d, n, two_size, config.seed, t))
                else:
                    skipped.append({"suite": "coverage", "q": q, "d": d,
                                    "n": n,
                                    "reason": "two-set size exceeds space"})
    one_keyed = parallel_map(_coverage_trial_cell, one_cells, config.jobs)
    two_keyed = parallel_map(_two_set_trial_cell, two_cells, config.jobs)
    one_keyed.sort(key=lambda kv: kv[0])
    two_keyed.sort(key=lambda kv: kv[0])
    by_cell: dict = {}
    for (q, d, n, _t), res in one_keyed:
        by_cell.setdefault((q, d, n), []).append(res)
        results_json.append(res.to_json_dict())
    fractions = []
    for (q, d, n), results in sorted(by_cell.items()):
        summ = distance.coverage_summary(results)
        fractions.append(summ["full_coverage_fraction"])
        summary_rows.append((summ["q"], summ["d"], summ["n"], summ["C"],
                             summ["size"], summ["trials"],
                             summ["full_coverage_fraction"],
                             summ["min_coverage"]))
    two_by_cell: dict = {}
    for (q, d, n, _t), res in two_keyed:
        two_by_cell.setdefault((q, d, n), []).append(res)
    star_fractions = []
    for (q, d, n), results in sorted(two_by_cell.items()):
        frac = sum(r.full_coverage_star for r in results) / len(results)
        star_fractions.append(frac)
        two_set_rows.append((q, d, n, config.C, results[0].size_e,
                             results[0].size_f, len(results), frac,
                             min(len(r.covered) for r in results)))
    passed = (all(f >= 0.95 for f in fractions)
              and all(f >= 0.95 for f in star_fractions))
    return {
        "name": "coverage",
        "summary_rows": summary_rows,
        "two_set_rows": two_set_rows,
        "results_json": results_json,
        "skipped": skipped,
        "aggregates": {
            "cells": len(summary_rows),
            "min_full_coverage_fraction": min(fractions, default=1.0),
            "min_star_coverage_fraction": min(star_fractions, default=1.0),
        },
        "passed": passed,
    }


# ------------------------------------------------------------------- writing

def _write_identities(out: Path, payload: dict) -> list:
    files = []
    p = out / "identity_checks.csv"
    write_csv(p, IDENTITY_CSV_COLUMNS,
              [_identity_row(c) for c in payload["checks"]])
    files.append(p)
    p = out / "bound_checks.csv"
    write_csv(p, BOUND_CSV_COLUMNS,
              [_bound_row(b) for b in payload["bounds"]])
    files.append(p)
    p = out / "identities.jsonl"
    write_jsonl(p, [c.to_json_dict() for c in payload["checks"]]
                + [b.to_json_dict() for b in payload["bounds"]])
    files.append(p)
    return files


def _write_sphere_decay(out: Path, payload: dict) -> list:
    files = []
    p = out / "decay_reports.csv"
    write_csv(p, DECAY_CSV_COLUMNS,
              [r.to_csv_row() for r in payload["reports"]])
    files.append(p)
    p = out / "decay_reports.jsonl"
    write_jsonl(p, [r.to_json_dict() for r in payload["reports"]])
    files.append(p)
    return files


def _write_incidence(out: Path, payload: dict) -> list:
    files = []
    p = out / "incidence_audits.csv"
    write_csv(p, INCIDENCE_CSV_COLUMNS, payload["rows"])
    files.append(p)
    p = out / "incidence_audits.jsonl"
    write_jsonl(p, [a.to_json_dict() for a in payload["audits"]])
    files.append(p)
    return files


def _write_coverage(out: Path, payload: dict) -> list:
    files = []
    p = out / "coverage_summary.csv"
    write_csv(p, distance.COVERAGE_CSV_COLUMNS, payload["summary_rows"])
    files.append(p)
    p = out / "two_set_coverage.csv"
    write_csv(p, TWO_SET_CSV_COLUMNS, payload["two_set_rows"])
    files.append(p)
    p = out / "coverage.jsonl"
    write_jsonl(p, payload["results_json"])
    files.append(p)
    return files


_RUNNERS = {
    "identities": (_run_identities, _write_identities),
    "sphere-decay": (_run_sphere_decay, _write_sphere_decay),
    "incidence": (_run_incidence, _write_incidence),
    "coverage": (_run_coverage, _write_coverage),
}


def run_suite(config: SuiteConfig) -> ExperimentReport:
    """Execute the configured suite(s), write reports, return the aggregate.

    Raises InvalidConfig for bad configuration; the returned report's
    verdict is True only if every constituent check passed.
    """
    config.validate()
    names = list(SUITES) if config.suite == "all" else [config.suite]
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    aggregates: dict = {}
    skipped: list = []
    timings: dict = {}
    files: list = []
    payloads: dict = {}
    verdict = True
    for name in names:
        runner, writer = _RUNNERS[name]
        t0 = time.perf_counter()
        payload = runner(config)
        timings[name] = time.perf_counter() - t0
        payloads[name] = payload
        aggregates[name] = payload["aggregates"]
        aggregates[name]["passed"] = payload["passed"]
        skipped.extend(payload["skipped"])
        verdict = verdict and payload["passed"]
        files.extend(writer(out, payload))
    report = ExperimentReport(
        config=config, suites_run=names, aggregates=aggregates,
        skipped=skipped, timings=timings, verdict=verdict)
    if config.figures:
        from . import figures
        files.extend(figures.render_all(payloads, out, config.c_env))
    files.append(_write_report_json(out, report))
    files.append(_write_summary(out, report))
    report.files = [str(f) for f in files]
    return report


def _write_report_json(out: Path, report: ExperimentReport) -> Path:
    doc = {
        "config": asdict(report.config),
        "rng_algorithm": report.rng_algorithm,
        "suites_run": report.suites_run,
        "aggregates": report.aggregates,
        "skipped": report.skipped,
        "timings": {k: round(v, 3) for k, v in report.timings.items()},
        "verdict": "pass" if report.verdict else "fail",
    }
    p = out / "report.json"
    p.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                 encoding="utf-8")
    return p


def _write_summary(out: Path, report: ExperimentReport) -> Path:
    lines = []
    cfg = report.config
    lines.append(f"suite run: {', '.join(report.suites_run)}")
    lines.append(f"config: q={list(cfg.q_list)} d={list(cfg.d_list)} "
                 f"n={list(cfg.n_list)} C={cfg.C} trials={cfg.trials} "
                 f"seed={cfg.seed} c_env={cfg.c_env}")
    lines.append(f"rng: {report.rng_algorithm} with per-trial streams")
    for name in report.suites_run:
        agg = report.aggregates[name]
        status = "PASS" if agg["passed"] else "FAIL"
        detail = " ".join(
            f"{k}={v}" for k, v in agg.items()
            if not isinstance(v, dict) and k != "passed")
        lines.append(f"[{status}] {name}: {detail} "
                     f"({report.timings[name]:.2f}s)")
    for sk in report.skipped:
        lines.append(f"skipped: {sk}")
    lines.append(f"verdict: {'pass' if report.verdict else 'fail'}")
    p = out / "summary.txt"
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return p
