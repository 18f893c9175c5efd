"""Distance sets, pair counts by brute force and by the spectral
identity, incidence audits, and coverage experiments.

The central identity is
  #{(x, y) in E x F : ||x - y||_n = j}
    = q^{2d} sum_m conj(E_hat(m)) F_hat(m) S_j_hat(m) = I + II,
with I the zero-mode term #E #F S_j_hat(0) and II the rest. Brute-force
counts are exact integers; the audited bound is
  count <= #E #F / q + C_env q^{(d-1)/2} sqrt(#E #F).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (AmbientMismatch, EmptySet, HypothesisViolated,
                     SizeTooLarge)
from .field import FieldElement, PrimeField, make_field, _as_residue
from .spheres import _spectra_stack, decay_hypothesis_ok
from .vectorspace import PointSet, norm_table, sample_point_set

# switch from pairwise enumeration to the dense-grid path past this many
# elementary operations
PAIRWISE_OP_LIMIT = 10**8


def _check_ambient(E: PointSet, F: PointSet):
    if E.field.q != F.field.q or E.d != F.d:
        raise AmbientMismatch(
            f"(q={E.field.q}, d={E.d}) vs (q={F.field.q}, d={F.d})")


def _difference_counts(E: PointSet, F: PointSet) -> np.ndarray:
    """Exact integer grid D[v] = #{(x, y) in E x F : x - y = v}."""
    q, d = E.field.q, E.d
    shape = (q,) * d
    out = np.zeros(shape, dtype=np.int64)
    if E.size == 0 or F.size == 0:
        return out
    if E.size * F.size <= PAIRWISE_OP_LIMIT:
        flat = out.ravel()
        # histogram x - y over the smaller outer loop
        if E.size <= F.size:
            for x in E.points:
                idx = np.ravel_multi_index(((x - F.points) % q).T, shape)
                np.add.at(flat, idx, 1)
        else:
            for y in F.points:
                idx = np.ravel_multi_index(((E.points - y) % q).T, shape)
                np.add.at(flat, idx, 1)
        return out
    # dense path: shift the bigger set's grid once per point of the smaller
    axes = tuple(range(d))
    if F.size <= E.size:
        eg = E.grid.astype(np.int64)
        for y in F.points:
            out += np.roll(eg, shift=tuple(-y), axis=axes)
    else:
        # Frev[v] = F[-v]; rolling it by x gives F[x - v]
        frev = F.grid.astype(np.int64)
        for axis in range(d):
            frev = np.flip(frev, axis=axis)
            frev = np.roll(frev, 1, axis=axis)
        for x in E.points:
            out += np.roll(frev, shift=tuple(x), axis=axes)
    return out


def _counts_by_radius(E: PointSet, F: PointSet, n: int) -> np.ndarray:
    """Exact integer counts[j] = #{(x, y) in E x F : ||x - y||_n = j}."""
    q, d = E.field.q, E.d
    diffs = _difference_counts(E, F)
    counts = np.zeros(q, dtype=np.int64)
    np.add.at(counts, norm_table(q, d, n).ravel(), diffs.ravel())
    return counts


def _spectral_by_radius(E: PointSet, F: PointSet, n: int) -> np.ndarray:
    """Complex spectral count q^{2d} sum_m conj(E_hat) F_hat S_j_hat per j."""
    q, d = E.field.q, E.d
    ehat = np.fft.fftn(E.grid.astype(np.complex128)) / q**d
    fhat = np.fft.fftn(F.grid.astype(np.complex128)) / q**d
    weight = (np.conj(ehat) * fhat).ravel()
    stack = _spectra_stack(q, d, n).reshape(q, -1)
    return q ** (2 * d) * (stack @ weight)


@dataclass(frozen=True)
class PairCountResult:
    """Exact and spectral pair counts at one radius, with the audited bound."""

    q: int
    d: int
    n: int
    j: int
    size_e: int
    size_f: int
    brute: int
    spectral: float
    i_term: float
    ii_term: float
    bound_rhs: float

    @property
    def exact(self) -> bool:
        return (abs(self.spectral - self.brute) < 0.5
                and round(self.spectral) == self.brute)

    @property
    def within_bound(self) -> bool:
        return self.brute <= self.bound_rhs

    @property
    def bound_ratio(self) -> float:
        return self.brute / self.bound_rhs

    def to_json_dict(self) -> dict:
        return {
            "q": self.q, "d": self.d, "n": self.n, "j": self.j,
            "size_e": self.size_e, "size_f": self.size_f,
            "brute": self.brute, "spectral": self.spectral,
            "i_term": self.i_term, "ii_term": self.ii_term,
            "bound_rhs": self.bound_rhs, "exact": self.exact,
            "within_bound": self.within_bound,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _pair_results(E: PointSet, F: PointSet, n: int, j_values,
                  c_env: float) -> list[PairCountResult]:
    q, d = E.field.q, E.d
    counts = _counts_by_radius(E, F, n)
    spectral = _spectral_by_radius(E, F, n)
    stack = _spectra_stack(q, d, n)
    zero_modes = stack[(slice(None),) + (0,) * d]
    se, sf = E.size, F.size
    bound = se * sf / q + c_env * q ** ((d - 1) / 2) * math.sqrt(se * sf)
    out = []
    for j in j_values:
        i_term = (se * sf * zero_modes[j]).real
        total = spectral[j]
        out.append(PairCountResult(
            q=q, d=d, n=n, j=int(j), size_e=se, size_f=sf,
            brute=int(counts[j]), spectral=float(total.real),
            i_term=float(i_term), ii_term=float((total - i_term).real),
            bound_rhs=float(bound)))
    return out


def pair_count(E: PointSet, F: PointSet, n: int, j,
               c_env: float = 10.0) -> PairCountResult:
    """Count pairs at distance j by brute force and by the spectral identity.

    Requires matching ambient spaces and nonempty sets. The brute count is
    an exact integer; `spectral` should round to it.
    """
    _check_ambient(E, F)
    if E.size == 0 or F.size == 0:
        raise EmptySet("pair counting requires nonempty sets")
    jj = _as_residue(E.field, j)
    return _pair_results(E, F, n, [jj], c_env)[0]


def pair_count_all_radii(E: PointSet, F: PointSet, n: int,
                         c_env: float = 10.0) -> list[PairCountResult]:
    """pair_count for every j in F_q, sharing the heavy transforms."""
    _check_ambient(E, F)
    if E.size == 0 or F.size == 0:
        raise EmptySet("pair counting requires nonempty sets")
    return _pair_results(E, F, n, range(E.field.q), c_env)


@dataclass(frozen=True)
class IncidenceAudit:
    """Bound audit of pair counts over a grid of nonzero radii."""

    q: int
    d: int
    n: int
    size_e: int
    size_f: int
    c_env: float
    results: tuple
    max_ratio: float
    passed: bool
    all_exact: bool
    hypothesis_ok: bool

    def __iter__(self):
        return iter(self.results)

    def __len__(self):
        return len(self.results)

    def to_json_dict(self) -> dict:
        return {
            "q": self.q, "d": self.d, "n": self.n,
            "size_e": self.size_e, "size_f": self.size_f,
            "c_env": self.c_env, "max_ratio": self.max_ratio,
            "passed": self.passed, "all_exact": self.all_exact,
            "hypothesis_ok": self.hypothesis_ok,
            "results": [r.to_json_dict() for r in self.results],
        }


def incidence_audit(E: PointSet, F: PointSet, n: int, j_values=None,
                    c_env: float = 10.0) -> IncidenceAudit:
    """Audit count <= #E #F / q + C_env q^{(d-1)/2} sqrt(#E #F) over j != 0.

    j_values defaults to all nonzero radii. For n = 3 in dimension >= 3
    the audited bound needs q = 1 mod 3 (HypothesisViolated otherwise);
    regimes with no claim at all (n >= 4, d >= 3) are permitted but
    flagged hypothesis_ok = False.
    """
    _check_ambient(E, F)
    if E.size == 0 or F.size == 0:
        raise EmptySet("incidence audit requires nonempty sets")
    q, d = E.field.q, E.d
    if n == 3 and d >= 3 and q % 3 != 1:
        raise HypothesisViolated(
            f"n = 3, d = {d} requires q = 1 mod 3, got q = {q}")
    if j_values is None:
        j_values = range(1, q)
    jv = [_as_residue(E.field, j) for j in j_values]
    if any(j == 0 for j in jv):
        raise ValueError("incidence audits run over nonzero radii only")
    results = tuple(_pair_results(E, F, n, jv, c_env))
    return IncidenceAudit(
        q=q, d=d, n=n, size_e=E.size, size_f=F.size, c_env=c_env,
        results=results,
        max_ratio=max(r.bound_ratio for r in results),
        passed=all(r.within_bound for r in results),
        all_exact=all(r.exact for r in results),
        hypothesis_ok=decay_hypothesis_ok(q, d, n))


def _attained_mask(E: PointSet, F: PointSet, n: int) -> np.ndarray:
    """Boolean mask over F_q of values attained by ||x - y||_n, x in E, y in F."""
    q, d = E.field.q, E.d
    norms = norm_table(q, d, n)
    seen = np.zeros(q, dtype=bool)
    if E.size * F.size <= PAIRWISE_OP_LIMIT and E.size * F.size <= q ** (d + 1) * d:
        shape = (q,) * d
        if E.size <= F.size:
            for x in E.points:
                vals = norms[tuple(((x - F.points) % q).T)]
                seen[np.unique(vals)] = True
        else:
            for y in F.points:
                vals = norms[tuple(((E.points - y) % q).T)]
                seen[np.unique(vals)] = True
        return seen
    diffs = _difference_counts(E, F)
    seen[np.unique(norms[diffs > 0])] = True
    return seen


def distance_set(E: PointSet, n: int) -> set:
    """The exact distance set {||x - y||_n : x, y in E} as FieldElements.

    Raises EmptySet for an empty point set. Uses pairwise enumeration for
    small sets and the dense difference grid past the size threshold.
    """
    if E.size == 0:
        raise EmptySet("distance set of an empty set")
    mask = _attained_mask(E, E, n)
    return {FieldElement(E.field, v) for v in np.flatnonzero(mask)}


@dataclass(frozen=True)
class CoverageResult:
    """Coverage of F_q by the distances attained between two sets."""

    q: int
    d: int
    n: int
    C: float | None
    size_e: int
    size_f: int
    covered: frozenset
    missing: frozenset
    full_coverage: bool
    full_coverage_star: bool
    trial: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "q": self.q, "d": self.d, "n": self.n, "C": self.C,
            "size_e": self.size_e, "size_f": self.size_f,
            "covered_count": len(self.covered),
            "missing": sorted(self.missing),
            "full_coverage": self.full_coverage,
            "full_coverage_star": self.full_coverage_star,
            "trial": self.trial,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _coverage_from_mask(q, d, n, C, size_e, size_f, mask,
                        trial=None) -> CoverageResult:
    covered = frozenset(int(v) for v in np.flatnonzero(mask))
    missing = frozenset(range(q)) - covered
    return CoverageResult(
        q=q, d=d, n=n, C=C, size_e=size_e, size_f=size_f,
        covered=covered, missing=missing,
        full_coverage=len(covered) == q,
        full_coverage_star=all(v in covered for v in range(1, q)),
        trial=trial)


def two_set_coverage(E: PointSet, F: PointSet, n: int) -> CoverageResult:
    """Coverage of F_q by {||x - y||_n : x in E, y in F}.

    full_coverage_star records whether every nonzero value is attained;
    the zero distance is attained whenever E and F intersect.
    """
    _check_ambient(E, F)
    if E.size == 0 or F.size == 0:
        raise EmptySet("coverage requires nonempty sets")
    mask = _attained_mask(E, F, n)
    return _coverage_from_mask(E.field.q, E.d, n, None, E.size, F.size, mask)


def coverage_trial_rng(seed: int, trial: int) -> np.random.Generator:
    """The deterministic RNG stream owned by one coverage trial."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial),)))


def attainable_radii(q: int, d: int, n: int) -> frozenset:
    """Radii realized by the norm on the whole space F_q^d."""
    counts = np.bincount(norm_table(q, d, n).ravel(), minlength=q)
    return frozenset(int(j) for j in np.nonzero(counts)[0])


def norm_surjective(q: int, d: int, n: int) -> bool:
    """True when every radius in F_q has a nonempty sphere.

    At small q some power norms miss radii (for q = 7, d = 2 the cubes
    are {0, 1, 6}, so x^3 + y^3 never equals 3 or 4); no point set can
    cover a radius the whole space misses, so coverage experiments skip
    such cells.
    """
    return len(attainable_radii(q, d, n)) == q


def coverage_set_size(q: int, d: int, C: float) -> int:
    """The sample size ceil(C q^{(d+1)/2}) used by coverage experiments.

    Raises SizeTooLarge when it exceeds the q^d points available.
    """
    size = math.ceil(C * q ** ((d + 1) / 2))
    if size > q**d:
        raise SizeTooLarge(
            f"C = {C} needs {size} points but F_{q}^{d} has {q**d}")
    return size


def _validate_coverage(q: int, d: int, n: int, C: float):
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if C <= 0:
        raise ValueError(f"C must be > 0, got {C}")
    if n == 3 and d >= 3 and q % 3 != 1:
        raise HypothesisViolated(
            f"n = 3, d = {d} requires q = 1 mod 3, got q = {q}")


def coverage_single_trial(q: int, d: int, n: int, C: float, seed: int,
                          trial: int) -> CoverageResult:
    """One trial of coverage_experiment, addressable by its trial index."""
    fld = make_field(q)
    _validate_coverage(q, d, n, C)
    size = coverage_set_size(q, d, C)
    E = sample_point_set(fld, d, size, coverage_trial_rng(seed, trial))
    mask = _attained_mask(E, E, n)
    return _coverage_from_mask(q, d, n, C, size, size, mask, trial=trial)


def coverage_experiment(q: int, d: int, n: int, C: float, trials: int,
                        seed: int) -> list[CoverageResult]:
    """Sample `trials` random sets of size ceil(C q^{(d+1)/2}) and report
    the coverage of their distance sets.

    Raises SizeTooLarge when the requested size exceeds q^d, and
    HypothesisViolated for n = 3, d >= 3 with q not 1 mod 3. Each trial
    owns the RNG stream keyed (seed, trial), so results do not depend on
    execution order.
    """
    make_field(q)
    _validate_coverage(q, d, n, C)
    if trials < 0:
        raise ValueError(f"trials must be >= 0, got {trials}")
    coverage_set_size(q, d, C)
    return [coverage_single_trial(q, d, n, C, seed, t) for t in range(trials)]


COVERAGE_CSV_COLUMNS = ("q", "d", "n", "C", "size", "trials",
                        "full_coverage_fraction", "min_coverage")


def coverage_summary(results: list[CoverageResult]) -> dict:
    """Aggregate a coverage experiment into one CSV-ready summary row."""
    if not results:
        return {"q": None, "d": None, "n": None, "C": None, "size": 0,
                "trials": 0, "full_coverage_fraction": 1.0, "min_coverage": 0}
    first = results[0]
    return {
        "q": first.q, "d": first.d, "n": first.n, "C": first.C,
        "size": first.size_e, "trials": len(results),
        "full_coverage_fraction":
            sum(r.full_coverage for r in results) / len(results),
        "min_coverage": min(len(r.covered) for r in results),
    }
