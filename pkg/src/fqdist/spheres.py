"""Spheres S_j = {x in F_q^d : ||x||_n = j}, their spectra, and decay
measurements.

The two measured quantities mirror the estimates being verified: for
j != 0 the nonzero modes of S_j_hat should be O(q^{-(d+1)/2}), and the
zero mode should be q^{-1} + O(q^{-(d+1)/2}). Both are reported as
dimensionless constants after multiplying by q^{(d+1)/2}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ZeroRadius
from .field import PrimeField, make_field, _as_residue
from .vectorspace import (PointSet, SpectralFunction, norm_table)


@dataclass(frozen=True)
class SphereSpec:
    """Parameters (q, d, n, j) of one sphere."""

    field: PrimeField
    d: int
    n: int
    j: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")
        if self.n < 2:
            raise ValueError(f"norm exponent n must be >= 2, got {self.n}")
        object.__setattr__(self, "j", _as_residue(self.field, self.j))

    @property
    def q(self) -> int:
        return self.field.q


def sphere_points(spec: SphereSpec) -> PointSet:
    """Exact enumeration of {x : ||x||_n = j} as a PointSet."""
    q = spec.q
    norms = norm_table(q, spec.d, spec.n)
    flat = np.flatnonzero(norms.ravel() == spec.j)
    return PointSet(spec.field, spec.d, flat)


@lru_cache(maxsize=16)
def _spectra_stack(q: int, d: int, n: int) -> np.ndarray:
    """S_j_hat for every j at once: shape (q,) + (q,) * d, axis 0 indexed by j."""
    norms = norm_table(q, d, n)
    one_hot = np.zeros((q,) + (q,) * d, dtype=np.complex128)
    # one_hot[j, x] = 1 iff ||x||_n = j
    idx = (norms.ravel(), np.arange(q**d))
    one_hot.reshape(q, q**d)[idx] = 1.0
    axes = tuple(range(1, d + 1))
    stack = np.fft.fftn(one_hot, axes=axes) / q**d
    stack.setflags(write=False)
    return stack


def sphere_spectrum(spec: SphereSpec) -> SpectralFunction:
    """The full table of S_j_hat(m) = q^{-d} sum_{||x||_n = j} chi(-x . m)."""
    stack = _spectra_stack(spec.q, spec.d, spec.n)
    return SpectralFunction(spec.field, spec.d, stack[spec.j])


DECAY_CSV_COLUMNS = ("q", "d", "n", "j", "sphere_size", "zero_mode_re",
                     "zero_mode_dev", "max_nonzero_mode", "decay_constant",
                     "hypothesis_ok")


@dataclass(frozen=True)
class DecayReport:
    """Measured spectral-decay constants for one sphere.

    decay_constant = max_{m != 0} |S_j_hat(m)| * q^{(d+1)/2} and
    zero_mode_deviation = |S_j_hat(0) - q^{-1}| * q^{(d+1)/2} are the
    dimensionless analogues of the implicit constants in the estimates
    being verified. hypothesis_ok records whether the estimate's
    hypotheses hold for this (q, d, n): always for d = 2 or n = 2, and
    for n = 3, d >= 3 only when q = 1 mod 3.
    """

    spec: SphereSpec
    sphere_size: int
    zero_mode: complex
    zero_mode_deviation: float
    max_nonzero_mode: float
    decay_constant: float
    hypothesis_ok: bool

    def to_csv_row(self) -> tuple:
        s = self.spec
        return (s.q, s.d, s.n, s.j, self.sphere_size, self.zero_mode.real,
                self.zero_mode_deviation, self.max_nonzero_mode,
                self.decay_constant, self.hypothesis_ok)

    def to_json_dict(self) -> dict:
        s = self.spec
        return {
            "q": s.q, "d": s.d, "n": s.n, "j": s.j,
            "sphere_size": self.sphere_size,
            "zero_mode_re": self.zero_mode.real,
            "zero_mode_im": self.zero_mode.imag,
            "zero_mode_dev": self.zero_mode_deviation,
            "max_nonzero_mode": self.max_nonzero_mode,
            "decay_constant": self.decay_constant,
            "hypothesis_ok": self.hypothesis_ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def decay_hypothesis_ok(q: int, d: int, n: int) -> bool:
    """Whether the verified decay estimate applies to this (q, d, n)."""
    return d == 2 or n == 2 or (n == 3 and q % 3 == 1)


def decay_report(spec: SphereSpec) -> DecayReport:
    """Spectral decay measurements for one sphere with j != 0.

    Raises ZeroRadius for j = 0: the zero sphere's spectrum behaves
    differently and carries no decay claim (it remains constructible via
    sphere_points).
    """
    if spec.j == 0:
        raise ZeroRadius("decay reporting requires j != 0")
    q, d = spec.q, spec.d
    sf = sphere_spectrum(spec)
    scale = q ** ((d + 1) / 2)
    zero = sf.zero_mode
    size = int(round(zero.real * q**d))
    max_nz = sf.max_nonzero_mode
    return DecayReport(
        spec=spec,
        sphere_size=size,
        zero_mode=zero,
        zero_mode_deviation=abs(zero - 1 / q) * scale,
        max_nonzero_mode=max_nz,
        decay_constant=max_nz * scale,
        hypothesis_ok=decay_hypothesis_ok(q, d, spec.n),
    )


def _radii(q: int, radius_policy) -> list[int]:
    if radius_policy == "all":
        return list(range(1, q))
    count = int(radius_policy)
    if count < 1:
        raise ValueError(f"radius sample count must be >= 1, got {count}")
    if count >= q - 1:
        return list(range(1, q))
    # evenly spaced nonzero radii, deterministic
    return sorted({1 + (i * (q - 1)) // count for i in range(count)})


def constant_sweep(n: int, d: int, radius_policy, q_list) -> list[DecayReport]:
    """One DecayReport per (q, j) over the given field sizes.

    radius_policy is "all" (every j != 0) or an int (that many evenly
    spaced nonzero radii). Results are sorted by (q, j) for trend
    inspection. CompositeModulus propagates for non-prime entries.
    """
    reports = []
    for q in sorted(set(int(q) for q in q_list)):
        fld = make_field(q)
        for j in _radii(q, radius_policy):
            reports.append(decay_report(SphereSpec(fld, d, n, j)))
    return reports
