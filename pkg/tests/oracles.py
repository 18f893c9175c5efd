"""Independent slow reference implementations used as test oracles.

Everything here is written in the most literal style possible (python
loops, cmath exponentials, no FFT, no vectorized index tricks) so that
agreement with the fast library paths is meaningful evidence.
"""

from __future__ import annotations

import cmath
import itertools


def additive_character(q: int, t: int) -> complex:
    return cmath.exp(2j * cmath.pi * (t % q) / q)


def slow_fourier(values, q: int, d: int):
    """f_hat(m) = q^{-d} sum_x f(x) e^{-2 pi i x.m / q}, as a nested dict
    keyed by the coordinate tuple m."""
    points = list(itertools.product(range(q), repeat=d))
    out = {}
    for m in points:
        acc = 0j
        for x in points:
            dot = sum(xi * mi for xi, mi in zip(x, m)) % q
            acc += values[x] * additive_character(q, -dot)
        out[m] = acc / q**d
    return out


def slow_sphere(q: int, d: int, n: int, j: int):
    """All points of {x : x_1^n + ... + x_d^n = j} by enumeration."""
    out = []
    for x in itertools.product(range(q), repeat=d):
        if sum(pow(xi, n, q) for xi in x) % q == j % q:
            out.append(x)
    return out


def slow_pair_count(points_e, points_f, q: int, n: int, j: int) -> int:
    """#{(x, y) in E x F : ||x - y||_n = j} by double loop."""
    count = 0
    for x in points_e:
        for y in points_f:
            norm = sum(pow(xi - yi, n, q) for xi, yi in zip(x, y)) % q
            if norm == j % q:
                count += 1
    return count


def slow_distance_set(points_e, q: int, n: int):
    """{||x - y||_n : x, y in E} by double loop."""
    out = set()
    for x in points_e:
        for y in points_e:
            out.add(sum(pow(xi - yi, n, q) for xi, yi in zip(x, y)) % q)
    return out


def slow_gauss_sum(q: int, g: int, order: int, index: int) -> complex:
    """sum_{s != 0} psi(s) chi(s) with psi(g^a) = e^{2 pi i a index / order}."""
    acc = 0j
    s = 1
    for a in range(q - 1):
        psi = cmath.exp(2j * cmath.pi * a * index / order)
        acc += psi * additive_character(q, s)
        s = s * g % q
    return acc
