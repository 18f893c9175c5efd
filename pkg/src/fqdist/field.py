"""Prime-field arithmetic, characters, and Gauss-sum primitives.

Everything downstream builds on the tables constructed here: discrete
logarithms for a fixed primitive root, the additive character
chi(t) = e^{2 pi i t / q}, and multiplicative characters of any order
dividing q - 1, extended by psi(0) = 0.
"""

from __future__ import annotations

import math
import warnings
from functools import lru_cache

import numpy as np

from .errors import CompositeModulus, OrderDoesNotDivide, TrivialCharacter


def is_prime(q: int) -> bool:
    """Deterministic trial-division primality test."""
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _smallest_primitive_root(q: int) -> int:
    if q == 2:
        return 1
    factors = _prime_factors(q - 1)
    for g in range(2, q):
        if all(pow(g, (q - 1) // p, q) != 1 for p in factors):
            return g
    raise CompositeModulus(f"no primitive root mod {q}; modulus is not prime")


class PrimeField:
    """The field F_q for prime q, with dense lookup tables.

    Attributes:
        q: the prime modulus.
        g: the smallest primitive root of F_q*.
        dlog: dlog[s] = k with g^k = s for s != 0; dlog[0] = -1 sentinel.
        exp: exp[k] = g^k mod q for 0 <= k <= q - 2.
        inv: inv[s] = s^{-1} mod q for s != 0; inv[0] = 0 sentinel.
        add_char: add_char[t] = e^{2 pi i t / q}.

    Instances are immutable after construction and hash/compare by q.
    """

    __slots__ = ("q", "g", "dlog", "exp", "inv", "add_char")

    def __init__(self, q: int):
        if not is_prime(q):
            raise CompositeModulus(f"q must be prime, got {q}")
        self.q = q
        self.g = _smallest_primitive_root(q)
        dlog = np.full(q, -1, dtype=np.int64)
        exp = np.zeros(max(q - 1, 1), dtype=np.int64)
        x = 1
        for k in range(q - 1):
            exp[k] = x
            dlog[x] = k
            x = x * self.g % q
        inv = np.zeros(q, dtype=np.int64)
        for s in range(1, q):
            inv[s] = pow(s, q - 2, q)
        add_char = np.exp(2j * np.pi * np.arange(q) / q)
        for arr in (dlog, exp, inv, add_char):
            arr.setflags(write=False)
        self.dlog = dlog
        self.exp = exp
        self.inv = inv
        self.add_char = add_char

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(("PrimeField", self.q))

    def __repr__(self):
        return f"PrimeField(q={self.q}, g={self.g})"


@lru_cache(maxsize=None)
def make_field(q: int) -> PrimeField:
    """Construct (and cache) the prime field F_q.

    Raises CompositeModulus if q is not prime.
    """
    return PrimeField(q)


class FieldElement:
    """A residue in 0..q-1 tagged with its parent field.

    Arithmetic operators accept another FieldElement of the same field or a
    plain integer, which is reduced mod q. Equality and hashing are
    int-compatible, so {FieldElement(f, 1)} == {1} holds.
    """

    __slots__ = ("field", "value")

    def __init__(self, field: PrimeField, value: int):
        self.field = field
        self.value = int(value) % field.q

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field.q != self.field.q:
                raise ValueError(
                    f"mixed fields: q={self.field.q} vs q={other.field.q}")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.field, self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.value - self._coerce(other))

    def __rsub__(self, other):
        return FieldElement(self.field, self._coerce(other) - self.value)

    def __mul__(self, other):
        return FieldElement(self.field, self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, -self.value)

    def __truediv__(self, other):
        divisor = FieldElement(self.field, self._coerce(other))
        return self * divisor.inv()

    def __rtruediv__(self, other):
        return FieldElement(self.field, self._coerce(other)) * self.inv()

    def __pow__(self, n: int):
        if self.value == 0 and n < 0:
            raise ZeroDivisionError("0 has no inverse")
        return FieldElement(self.field, pow(self.value, n, self.field.q))

    def inv(self) -> "FieldElement":
        return self ** -1

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return other.field.q == self.field.q and other.value == self.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value} mod {self.field.q})"


def _as_residue(field: PrimeField, x) -> int:
    if isinstance(x, FieldElement):
        if x.field.q != field.q:
            raise ValueError(f"element of F_{x.field.q} used in F_{field.q}")
        return x.value
    return int(x) % field.q


class CharacterTable:
    """A multiplicative character psi with its additive companion chi.

    Attributes:
        field: the ambient PrimeField.
        add_char: add_char[t] = chi(t) = e^{2 pi i t / q}.
        mult_order: the order h of the character family (h divides q - 1).
        index: which member of the family; psi(g) = e^{2 pi i index / h}.
        psi: psi[s] for all s, with the convention psi[0] = 0.

    The table of psi^k is produced exactly (same bit patterns for equal
    characters) by power(k).
    """

    __slots__ = ("field", "mult_order", "index", "psi", "add_char")

    def __init__(self, field: PrimeField, mult_order: int, index: int = 1):
        if mult_order < 1 or (field.q - 1) % mult_order != 0:
            raise OrderDoesNotDivide(
                f"order {mult_order} does not divide q-1 = {field.q - 1}")
        self.field = field
        self.mult_order = mult_order
        self.index = index % mult_order
        psi = np.zeros(field.q, dtype=complex)
        # angle reduced mod the order so equal characters get identical bits
        k = (self.index * field.dlog[1:]) % mult_order
        psi[1:] = np.exp(2j * np.pi * k / mult_order)
        psi.setflags(write=False)
        self.psi = psi
        self.add_char = field.add_char

    @property
    def is_trivial(self) -> bool:
        return self.index == 0

    @property
    def exact_order(self) -> int:
        """The true multiplicative order of this member of the family."""
        return self.mult_order // math.gcd(self.mult_order, self.index)

    def power(self, k: int) -> "CharacterTable":
        """The character psi^k (exact table, not a floating-point power)."""
        return CharacterTable(self.field, self.mult_order, self.index * k)

    def __call__(self, s) -> complex:
        return self.psi[_as_residue(self.field, s)]

    def __repr__(self):
        return (f"CharacterTable(q={self.field.q}, order={self.mult_order}, "
                f"index={self.index})")


def mult_character(field: PrimeField, order: int, index: int = 1) -> CharacterTable:
    """The multiplicative character psi(g^k) = e^{2 pi i k index / order}.

    `order` must divide q - 1 (OrderDoesNotDivide otherwise). `index` picks
    the member of the order-`order` family; index = 1 is the canonical
    choice and any index coprime to `order` has exact order `order`.
    """
    return CharacterTable(field, order, index)


def char_fourier(psi: CharacterTable, v) -> complex:
    """Normalized character transform q^{-1} sum_{s != 0} chi(-v s) psi(s).

    For nontrivial psi and v != 0 the modulus is exactly q^{-1/2}; for
    trivial psi and v != 0 the value is -1/q.
    """
    field = psi.field
    q = field.q
    vv = _as_residue(field, v)
    s = np.arange(1, q)
    return complex(np.sum(field.add_char[(-vv * s) % q] * psi.psi[1:]) / q)


def gauss_sum(psi: CharacterTable) -> complex:
    """The Gauss sum G(psi, chi) = sum_{s != 0} psi(s) chi(s).

    Has modulus sqrt(q) for nontrivial psi. For the trivial character the
    value q - 1 is returned and a TrivialCharacter warning is issued.
    """
    field = psi.field
    q = field.q
    if psi.is_trivial:
        warnings.warn("gauss_sum of the trivial character equals q - 1",
                      TrivialCharacter, stacklevel=2)
        return complex(q - 1)
    s = np.arange(1, q)
    return complex(np.sum(psi.psi[1:] * field.add_char[s]))


def nth_power_roots(field: PrimeField, n: int, c) -> list[FieldElement]:
    """All s in F_q with s^n = c, solved through the discrete-log table.

    For c != 0 this solves n k = dlog(c) (mod q-1): either gcd(n, q-1)
    solutions or none. c = 0 has the single root 0. Results are sorted by
    residue value; an empty list means c is not an n-th power.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    q = field.q
    cc = _as_residue(field, c)
    if cc == 0:
        return [field.element(0)]
    if q == 2:
        return [field.element(1)]
    target = int(field.dlog[cc])
    mod = q - 1
    g = math.gcd(n, mod)
    if target % g != 0:
        return []
    step = mod // g
    k0 = (target // g) * pow(n // g, -1, step) % step
    roots = sorted(int(field.exp[(k0 + t * step) % mod]) for t in range(g))
    return [field.element(r) for r in roots]
