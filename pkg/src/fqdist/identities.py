"""Exact verification of character-sum identities and empirical
verification of the exponential-sum bounds they feed.

Identity checks compare both sides of an exact algebraic identity in
floating point, with a tolerance scaled to the magnitudes involved.
Bound checks evaluate a complete exponential sum and report its
magnitude against the predicted power-of-q envelope; at desk scale the
ratio is expected to stay below a small constant (10 in the default
suites), which is the empirical stand-in for the estimate's implicit
constant.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import (DimensionTooLarge, HypothesisViolated, ZeroCoefficient,
                     ZeroFrequency, ZeroRadius)
from .field import (CharacterTable, PrimeField, _as_residue, char_fourier,
                    gauss_sum, mult_character)
from .vectorspace import power_table


def identity_tolerance(lhs: complex, rhs: complex) -> float:
    """Residual tolerance scaled to the sizes of the compared values."""
    return 1e-10 * max(1.0, abs(lhs), abs(rhs))


@dataclass(frozen=True)
class IdentityCheck:
    """Both sides of one exact identity at one parameter point."""

    name: str
    parameters: dict
    lhs: complex
    rhs: complex
    residual: float
    tolerance: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "kind": "identity", "name": self.name,
            "parameters": self.parameters,
            "lhs_re": self.lhs.real, "lhs_im": self.lhs.imag,
            "rhs_re": self.rhs.real, "rhs_im": self.rhs.imag,
            "residual": self.residual, "tolerance": self.tolerance,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


@dataclass(frozen=True)
class BoundCheck:
    """Magnitude of one complete exponential sum against its envelope."""

    name: str
    parameters: dict
    magnitude: float
    envelope: float
    ratio: float
    r_k_checks: tuple = dc_field(default=())

    def to_json_dict(self) -> dict:
        out = {
            "kind": "bound", "name": self.name, "parameters": self.parameters,
            "magnitude": self.magnitude, "envelope": self.envelope,
            "ratio": self.ratio,
        }
        if self.r_k_checks:
            out["r_k"] = [c.to_json_dict() for c in self.r_k_checks]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _make_identity(name: str, parameters: dict, lhs: complex,
                   rhs: complex) -> IdentityCheck:
    lhs, rhs = complex(lhs), complex(rhs)
    residual = float(abs(lhs - rhs))
    tol = float(identity_tolerance(lhs, rhs))
    return IdentityCheck(name=name, parameters=parameters, lhs=lhs, rhs=rhs,
                         residual=residual, tolerance=tol,
                         passed=bool(residual < tol))


def _require_order3(field: PrimeField, psi: CharacterTable):
    if field.q % 3 != 1:
        raise HypothesisViolated(f"q = {field.q} is not 1 mod 3")
    if psi.field.q != field.q:
        raise HypothesisViolated("character belongs to a different field")
    if psi.exact_order != 3:
        raise HypothesisViolated(
            f"character has order {psi.exact_order}, need order 3")


def check_duke_iwaniec(field: PrimeField, a, psi: CharacterTable) -> IdentityCheck:
    """Cubic completing identity:
    sum_s chi(a s^3 + s) = sum_{s != 0} psi(s a^{-1}) chi(s - (27 a s)^{-1})
    for q = 1 mod 3, a != 0, and psi of order 3.
    """
    _require_order3(field, psi)
    q = field.q
    aa = _as_residue(field, a)
    if aa == 0:
        raise HypothesisViolated("a must be nonzero")
    chi = field.add_char
    s = np.arange(q)
    lhs = complex(np.sum(chi[(aa * power_table(q, 3) + s) % q]))
    sn = np.arange(1, q)
    ainv = int(field.inv[aa])
    inner = (sn - field.inv[(27 * aa % q) * sn % q]) % q
    rhs = complex(np.sum(psi.psi[sn * ainv % q] * chi[inner]))
    return _make_identity(
        "duke_iwaniec", {"q": q, "a": aa, "index": psi.index}, lhs, rhs)


def check_gauss_expansion(field: PrimeField, t, b, n: int,
                          include_constant_term: bool = False) -> IdentityCheck:
    """Gauss-sum expansion of a complete n-th power sum:
    sum_s chi(t s^n + b) = chi(b) sum_{k=1}^{h-1} psi^{-k}(t) G(psi^k, chi)
    with h = gcd(n, q - 1) and psi of order h.

    The k = 0 term is omitted: the s = 0 contribution of the left side
    cancels the trivial-character row exactly, which the q = 7 evaluation
    confirms. Setting include_constant_term=True adds the candidate
    chi(b) G(psi^0, chi) = -chi(b) term and demonstrably breaks the
    identity; the flag exists so the failed convention stays testable.
    """
    q = field.q
    tt = _as_residue(field, t)
    bb = _as_residue(field, b)
    if tt == 0:
        raise ZeroCoefficient("t must be nonzero")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    chi = field.add_char
    lhs = complex(np.sum(chi[(tt * power_table(q, n) + bb) % q]))
    h = math.gcd(n, q - 1)
    rhs = 0j
    if h > 1:
        psi = mult_character(field, h)
        for k in range(1, h):
            rhs += psi.power(-k).psi[tt] * gauss_sum(psi.power(k))
    if include_constant_term:
        rhs += -1.0
    rhs *= chi[bb]
    return _make_identity(
        "gauss_expansion",
        {"q": q, "t": tt, "b": bb, "n": n, "h": h,
         "include_constant_term": include_constant_term},
        lhs, rhs)


def check_cubic_power_expansion(field: PrimeField, t, l: int,
                                psi: CharacterTable) -> IdentityCheck:
    """Binomial expansion of the l-th power of a complete cubic sum:
    (sum_s chi(t s^3))^l =
      sum_{r=0}^{l} C(l, r) q^l psi^{-(l+r)}(t)
                    psi_hat(-1)^{l-r} (psi^2)_hat(-1)^r
    for q = 1 mod 3, t != 0, and psi of order 3. l = 0 gives 1 = 1.
    """
    _require_order3(field, psi)
    q = field.q
    tt = _as_residue(field, t)
    if tt == 0:
        raise HypothesisViolated("t must be nonzero")
    if l < 0:
        raise ValueError(f"l must be >= 0, got {l}")
    chi = field.add_char
    base = complex(np.sum(chi[tt * power_table(q, 3) % q]))
    lhs = base**l
    f1 = char_fourier(psi, q - 1)
    f2 = char_fourier(psi.power(2), q - 1)
    rhs = 0j
    for r in range(l + 1):
        rhs += (math.comb(l, r) * q**l * psi.power(-(l + r)).psi[tt]
                * f1 ** (l - r) * f2**r)
    return _make_identity(
        "cubic_power_expansion", {"q": q, "t": tt, "l": l, "index": psi.index},
        lhs, rhs)


def _star_grids(q: int, l: int):
    """Meshgrid over (F_q^*)^l, shape (q-1,) * l per axis."""
    axes = [np.arange(1, q, dtype=np.int64) for _ in range(l)]
    return np.meshgrid(*axes, indexing="ij")


def check_completed_kloosterman_form(field: PrimeField, t, m_vec,
                                     psi: CharacterTable) -> IdentityCheck:
    """Completion of a product of cubic sums into a Kloosterman-type sum:
    prod_i sum_s chi(-s m_i + s^3 t) =
      psi^{-l}(t) sum_{s in (F_q^*)^l}
        chi(s_1 + ... + s_l + M_1 t^{-1} s_1^{-1} + ... + M_l t^{-1} s_l^{-1})
        psi(s_1) ... psi(s_l)
    where M_i = 27^{-1} m_i^3 (the rescaling that the substitution
    s -> s / (3 t s') introduces). Requires q = 1 mod 3, t != 0, all
    m_i != 0, psi of order 3, and l = len(m_vec) <= 3.
    """
    _require_order3(field, psi)
    q = field.q
    tt = _as_residue(field, t)
    if tt == 0:
        raise HypothesisViolated("t must be nonzero")
    mm = tuple(_as_residue(field, m) for m in m_vec)
    l = len(mm)
    if l < 1:
        raise ValueError("m_vec must be nonempty")
    if l > 3:
        raise DimensionTooLarge(f"l = {l} exceeds the supported fold count 3")
    if any(m == 0 for m in mm):
        raise HypothesisViolated("all m_i must be nonzero")
    chi = field.add_char
    p3 = power_table(q, 3)
    s = np.arange(q)
    lhs = 1.0 + 0j
    for m in mm:
        lhs *= complex(np.sum(chi[(-m * s + p3 * tt) % q]))
    inv27 = int(field.inv[27 % q])
    rescaled = tuple(inv27 * pow(m, 3, q) % q for m in mm)
    tinv = int(field.inv[tt])
    grids = _star_grids(q, l)
    total = np.zeros(grids[0].shape, dtype=np.int64)
    amp = np.ones(grids[0].shape, dtype=complex)
    for i in range(l):
        si = grids[i]
        total = (total + si + rescaled[i] * tinv % q * field.inv[si]) % q
        amp = amp * psi.psi[si]
    rhs = psi.power(-l).psi[tt] * complex(np.sum(chi[total] * amp))
    return _make_identity(
        "completed_kloosterman_form",
        {"q": q, "t": tt, "m": mm, "rescaled_m": rescaled, "l": l,
         "index": psi.index},
        lhs, rhs)


def compute_A_r(field: PrimeField, j, l: int, d: int, r: int, m_vec,
                psi: CharacterTable) -> BoundCheck:
    """The twisted multi-variable Kloosterman-type sum
    A_r = sum_{t != 0} chi(-t j) psi^{-(d+r)}(t)
          sum_{s in (F_q^*)^l} chi(sum_i s_i + sum_i m_i^3 t^{-1} s_i^{-1})
                               prod_i psi(s_i)
    with envelope q^{(l+1)/2}. Requires q = 1 mod 3, j != 0, all m_i != 0,
    1 <= l <= 3, and 0 <= r <= d - l.
    """
    _require_order3(field, psi)
    q = field.q
    jj = _as_residue(field, j)
    if jj == 0:
        raise HypothesisViolated("j must be nonzero")
    mm = tuple(_as_residue(field, m) for m in m_vec)
    if len(mm) != l:
        raise ValueError(f"m_vec has length {len(mm)}, expected l = {l}")
    if l < 1:
        raise HypothesisViolated(f"l must be >= 1, got {l}")
    if l > 3:
        raise DimensionTooLarge(f"l = {l} exceeds the supported fold count 3")
    if any(m == 0 for m in mm):
        raise HypothesisViolated("all m_i must be nonzero")
    if r < 0 or r > d - l:
        raise HypothesisViolated(f"r = {r} outside 0..d-l = 0..{d - l}")
    chi = field.add_char
    grids = _star_grids(q, l)
    lin = np.zeros(grids[0].shape, dtype=np.int64)
    coef = np.zeros(grids[0].shape, dtype=np.int64)
    amp = np.ones(grids[0].shape, dtype=complex)
    for i in range(l):
        si = grids[i]
        lin = (lin + si) % q
        coef = (coef + pow(mm[i], 3, q) * field.inv[si]) % q
        amp = amp * psi.psi[si]
    twist = psi.power(-(d + r))
    total = 0j
    for t in range(1, q):
        tinv = int(field.inv[t])
        phase = (lin + tinv * coef) % q
        total += chi[-t * jj % q] * twist.psi[t] * complex(np.sum(chi[phase] * amp))
    envelope = q ** ((l + 1) / 2)
    mag = abs(total)
    return BoundCheck(
        name="a_r",
        parameters={"q": q, "j": jj, "l": l, "d": d, "r": r, "m": mm,
                    "index": psi.index},
        magnitude=mag, envelope=envelope, ratio=mag / envelope)


def _line_sum_table(field: PrimeField, n: int, m: int) -> np.ndarray:
    """A[t] = sum_x chi(t x^n - m x) for all t, as a length-q complex array."""
    q = field.q
    pn = power_table(q, n)
    t = np.arange(q)[:, None]
    x = np.arange(q)[None, :]
    return np.sum(field.add_char[(t * pn[None, :] - m * x) % q], axis=1)


def check_cohomology_bound(field: PrimeField, n: int, m1, m2, j,
                           d: int = 2) -> BoundCheck:
    """Magnitude of the full exponential sum
    sum_{(t, x1, x2) in F_q^3} chi(t x1^n + t x2^n - m1 x1 - m2 x2 - j t)
    against the envelope q^{3/2} (three ambient variables), for j != 0 and
    (m1, m2) != (0, 0).

    When exactly one of m1, m2 is zero, the degenerate direction is also
    resolved into the twisted sums
    R_k = sum_{t, x} psi^{-k}(t) chi(t x^n - m x - j t), k = 1..h-1,
    h = gcd(n, q - 1), each with envelope q, attached as r_k_checks.
    """
    if d != 2:
        raise DimensionTooLarge(f"only d = 2 is supported, got {d}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    q = field.q
    jj = _as_residue(field, j)
    mm1 = _as_residue(field, m1)
    mm2 = _as_residue(field, m2)
    if jj == 0:
        raise ZeroRadius("j must be nonzero")
    if mm1 == 0 and mm2 == 0:
        raise ZeroFrequency("(m1, m2) must be nonzero")
    chi = field.add_char
    a1 = _line_sum_table(field, n, mm1)
    a2 = a1 if mm2 == mm1 else _line_sum_table(field, n, mm2)
    t = np.arange(q)
    full = complex(np.sum(chi[-t * jj % q] * a1 * a2))
    envelope = q**1.5
    mag = abs(full)
    r_k = []
    if mm1 == 0 or mm2 == 0:
        m_nz = mm1 or mm2
        a_nz = a1 if mm1 else a2
        h = math.gcd(n, q - 1)
        if h > 1:
            psi = mult_character(field, h)
            phases = chi[-t * jj % q] * a_nz
            for k in range(1, h):
                val = abs(complex(np.sum(psi.power(-k).psi[t] * phases)))
                r_k.append(BoundCheck(
                    name="r_k",
                    parameters={"q": q, "n": n, "m": m_nz, "j": jj, "k": k,
                                "h": h},
                    magnitude=val, envelope=float(q), ratio=val / q))
    return BoundCheck(
        name="cohomology_sum",
        parameters={"q": q, "n": n, "m1": mm1, "m2": mm2, "j": jj},
        magnitude=mag, envelope=envelope, ratio=mag / envelope,
        r_k_checks=tuple(r_k))
