"""Vectors in F_q^d, n-th power norms, point sets, and the normalized
Fourier transform of complex functions on the grid.

Functions on F_q^d are stored as d-dimensional numpy arrays of shape
(q, ..., q) in row-major order, so coordinate x maps to flat index
sum_i x_i q^{d-1-i}. The forward transform uses the q^{-d} convention
f_hat(m) = q^{-d} sum_x chi(-x . m) f(x); the inverse multiplies by q^d.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, SizeTooLarge
from .field import FieldElement, PrimeField, make_field, _as_residue

FORWARD_NORMALIZATION = "forward-q^-d"


class Vector:
    """A d-tuple of residues tagged with its field.

    Supports +, -, and equality; coordinates are returned as FieldElement.
    """

    __slots__ = ("field", "coords")

    def __init__(self, field: PrimeField, coords):
        self.field = field
        self.coords = tuple(_as_residue(field, c) for c in coords)

    @property
    def d(self) -> int:
        return len(self.coords)

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(self.field,
                      (a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(self.field,
                      (a - b for a, b in zip(self.coords, other.coords)))

    def _check(self, other: "Vector"):
        if self.field.q != other.field.q or self.d != other.d:
            raise DimensionMismatch(
                f"({self.field.q},{self.d}) vs ({other.field.q},{other.d})")

    def __eq__(self, other):
        if isinstance(other, Vector):
            return self.field.q == other.field.q and self.coords == other.coords
        return self.coords == tuple(other)

    def __hash__(self):
        return hash(self.coords)

    def __iter__(self):
        return (FieldElement(self.field, c) for c in self.coords)

    def __getitem__(self, i) -> FieldElement:
        return FieldElement(self.field, self.coords[i])

    def __repr__(self):
        return f"Vector({self.coords} in F_{self.field.q}^{self.d})"


def norm_n(x, n: int, field: PrimeField | None = None) -> FieldElement:
    """The n-th power norm x_1^n + ... + x_d^n in F_q.

    `x` may be a Vector (field implied) or an iterable of residues with an
    explicit `field`.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if isinstance(x, Vector):
        field = x.field
        coords = x.coords
    else:
        if field is None:
            raise ValueError("field is required for raw coordinates")
        coords = [_as_residue(field, c) for c in x]
    q = field.q
    return field.element(sum(pow(c, n, q) for c in coords) % q)


@lru_cache(maxsize=64)
def power_table(q: int, n: int) -> np.ndarray:
    """Table of s^n mod q for s in 0..q-1."""
    s = np.arange(q, dtype=np.int64)
    out = np.ones(q, dtype=np.int64)
    base = s.copy()
    e = n
    while e:
        if e & 1:
            out = out * base % q
        base = base * base % q
        e >>= 1
    out.setflags(write=False)
    return out

@lru_cache(maxsize=32)
def norm_table(q: int, d: int, n: int) -> np.ndarray:
    """Dense grid of ||x||_n over all x in F_q^d, shape (q,) * d."""
    p = power_table(q, n)
    grid = np.zeros((q,) * d, dtype=np.int64)
    for axis in range(d):
        shape = [1] * d
        shape[axis] = q
        grid = (grid + p.reshape(shape)) % q
    grid.setflags(write=False)
    return grid


class PointSet:
    """A finite subset of F_q^d with dense-grid and coordinate-list views.

    Attributes:
        field, d: the ambient space.
        grid: boolean membership array of shape (q,) * d.
        points: int64 array of shape (size, d), sorted lexicographically.
        size: cardinality.

    The two views are kept consistent by construction; `check_consistent`
    re-verifies the invariant on demand.
    """

    __slots__ = ("field", "d", "grid", "points", "size")

    def __init__(self, field: PrimeField, d: int, flat_indices: np.ndarray):
        if d < 1:
            raise DimensionMismatch(f"d must be >= 1, got {d}")
        q = field.q
        idx = np.unique(np.asarray(flat_indices, dtype=np.int64))
        if idx.size and (idx[0] < 0 or idx[-1] >= q**d):
            raise DimensionMismatch("flat index outside F_q^d")
        grid = np.zeros((q,) * d, dtype=bool)
        grid.ravel()[idx] = True
        pts = np.stack(np.unravel_index(idx, (q,) * d), axis=-1) if idx.size \
            else np.zeros((0, d), dtype=np.int64)
        grid.setflags(write=False)
        pts.setflags(write=False)
        self.field = field
        self.d = d
        self.grid = grid
        self.points = pts
        self.size = int(idx.size)

    @classmethod
    def from_points(cls, field: PrimeField, d: int, points) -> "PointSet":
        """Build from an iterable of coordinate tuples (residues in 0..q-1)."""
        q = field.q
        rows = []
        for p in points:
            coords = p.coords if isinstance(p, Vector) else tuple(int(c) for c in p)
            if len(coords) != d:
                raise DimensionMismatch(
                    f"point of length {len(coords)}, expected {d}")
            if any(c < 0 or c >= q for c in coords):
                raise ValueError(f"residue out of range in point {coords}")
            rows.append(coords)
        if not rows:
            return cls(field, d, np.zeros(0, dtype=np.int64))
        arr = np.array(rows, dtype=np.int64)
        flat = np.ravel_multi_index(arr.T, (q,) * d)
        return cls(field, d, flat)

    @classmethod
    def full(cls, field: PrimeField, d: int) -> "PointSet":
        return cls(field, d, np.arange(field.q**d, dtype=np.int64))

    def indicator(self) -> np.ndarray:
        """Float indicator array (a writable copy)."""
        return self.grid.astype(np.float64)

    def check_consistent(self) -> bool:
        """Grid and list views agree element for element."""
        flat = np.flatnonzero(self.grid.ravel())
        if flat.size != self.size or self.points.shape != (self.size, self.d):
            return False
        from_list = np.ravel_multi_index(self.points.T, self.grid.shape) \
            if self.size else np.zeros(0, dtype=np.int64)
        return bool(np.array_equal(np.sort(from_list), flat))

    def __contains__(self, point) -> bool:
        coords = tuple(_as_residue(self.field, c) for c in point)
        if len(coords) != self.d:
            return False
        return bool(self.grid[coords])

    def __iter__(self):
        return (tuple(int(c) for c in row) for row in self.points)

    def __len__(self):
        return self.size

    def __eq__(self, other):
        return (isinstance(other, PointSet) and other.field.q == self.field.q
                and other.d == self.d and np.array_equal(other.grid, self.grid))

    def __repr__(self):
        return (f"PointSet(q={self.field.q}, d={self.d}, size={self.size})")

    def save(self, path) -> None:
        save_point_set(self, path)


def sample_point_set(field: PrimeField, d: int, size: int, rng_seed) -> "PointSet":
    """A uniformly random subset of exactly `size` distinct points.

    Deterministic given `rng_seed` (an int, SeedSequence, or Generator).
    Raises SizeTooLarge when size > q^d.
    """
    total = field.q**d
    if size < 0:
        raise ValueError(f"size must be >= 0, got {size}")
    if size > total:
        raise SizeTooLarge(f"size {size} exceeds q^d = {total}")
    rng = np.random.default_rng(rng_seed)
    idx = rng.choice(total, size=size, replace=False)
    return PointSet(field, d, idx)


_HEADER_RE = re.compile(r"^q=(\d+) d=(\d+)$")


def save_point_set(ps: PointSet, path) -> None:
    """Write the text format: header `q=<q> d=<d>`, one point per line."""
    lines = [f"q={ps.field.q} d={ps.d}"]
    lines.extend(",".join(str(c) for c in row) for row in ps.points)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_point_set(path) -> PointSet:
    """Parse the point-set text format; rejects malformed or out-of-range rows."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError(f"{path}: empty point-set file")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise ValueError(f"{path}: bad header {lines[0]!r}, expected 'q=<q> d=<d>'")
    q, d = int(m.group(1)), int(m.group(2))
    fld = make_field(q)
    points = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != d:
            raise ValueError(f"{path}: point {ln!r} has {len(parts)} coordinates, expected {d}")
        coords = tuple(int(p) for p in parts)
        if any(c < 0 or c >= q for c in coords):
            raise ValueError(f"{path}: residue out of range in {ln!r}")
        points.append(coords)
    return PointSet.from_points(fld, d, points)


@dataclass
class SpectralFunction:
    """A complex function on frequency space F_q^d with its normalization tag."""

    field: PrimeField
    d: int
    values: np.ndarray
    normalization: str = FORWARD_NORMALIZATION

    def __post_init__(self):
        q = self.field.q
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (q,) * self.d:
            raise DimensionMismatch(
                f"values shape {vals.shape}, expected {(q,) * self.d}")
        vals.setflags(write=False)
        self.values = vals

    @property
    def zero_mode(self) -> complex:
        return complex(self.values[(0,) * self.d])

    @property
    def max_nonzero_mode(self) -> float:
        """max over m != 0 of |values[m]|."""
        mags = np.abs(self.values).ravel()
        if mags.size == 1:
            return 0.0
        # flat index 0 is m = (0, ..., 0) in row-major order
        return float(np.max(mags[1:]))

    def __getitem__(self, m) -> complex:
        coords = tuple(_as_residue(self.field, c) for c in m)
        return complex(self.values[coords])


def _spatial_values(f, fld: PrimeField | None):
    if isinstance(f, PointSet):
        return f.field, f.d, f.grid.astype(np.complex128)
    arr = np.asarray(f)
    if fld is None:
        raise ValueError("field is required when f is a raw array")
    if arr.ndim < 1 or arr.shape != (fld.q,) * arr.ndim:
        raise DimensionMismatch(
            f"array of shape {arr.shape} is not a cube of side q={fld.q}")
    return fld, arr.ndim, arr.astype(np.complex128)


def fourier_transform(f, field: PrimeField | None = None) -> SpectralFunction:
    """f_hat(m) = q^{-d} sum_x chi(-x . m) f(x), computed axis-separably.

    `f` is a PointSet (its indicator is transformed) or a d-dimensional
    complex array of shape (q,) * d with `field` given.
    """
    fld, d, vals = _spatial_values(f, field)
    out = np.fft.fftn(vals) / fld.q**d
    return SpectralFunction(fld, d, out)


def inverse_transform(sf: SpectralFunction) -> np.ndarray:
    """f(x) = sum_m chi(x . m) f_hat(m); exact inverse of fourier_transform."""
    return np.fft.ifftn(sf.values) * sf.field.q**sf.d


def plancherel_residual(f, field: PrimeField | None = None) -> float:
    """| sum_m |f_hat(m)|^2 - q^{-d} sum_x |f(x)|^2 |, ideally ~ 0."""
    fld, d, vals = _spatial_values(f, field)
    hat = np.fft.fftn(vals) / fld.q**d
    lhs = float(np.sum(np.abs(hat) ** 2))
    rhs = float(np.sum(np.abs(vals) ** 2)) / fld.q**d
    return abs(lhs - rhs)
