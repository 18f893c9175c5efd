"""Character sum identities and exponential sum envelopes."""

import json
import math

import numpy as np
import pytest

from fqdist import (
    DimensionTooLarge,
    HypothesisViolated,
    SphereSpec,
    ZeroCoefficient,
    ZeroFrequency,
    ZeroRadius,
    check_cohomology_bound,
    check_completed_kloosterman_form,
    check_cubic_power_expansion,
    check_duke_iwaniec,
    check_gauss_expansion,
    compute_A_r,
    identity_tolerance,
    make_field,
    mult_character,
    sphere_spectrum,
)


def test_identity_tolerance_scales_with_magnitude():
    assert identity_tolerance(0.1, 0.2) == 1e-10
    assert identity_tolerance(100.0, 1.0) == 1e-8


@pytest.mark.parametrize("q", [7, 13])
def test_duke_iwaniec_exhaustive_small(q):
    fld = make_field(q)
    for index in (1, 2):
        psi = mult_character(fld, 3, index)
        for a in range(1, q):
            check = check_duke_iwaniec(fld, a, psi)
            assert check.passed, (q, index, a, check.residual)
            assert check.residual < 1e-10 * max(1, abs(check.lhs))
            assert check.parameters["a"] == a


def test_duke_iwaniec_hypotheses():
    fld = make_field(13)
    psi = mult_character(fld, 3, 1)
    with pytest.raises(HypothesisViolated):
        check_duke_iwaniec(fld, 0, psi)
    with pytest.raises(HypothesisViolated):
        check_duke_iwaniec(fld, 0, mult_character(fld, 3, 0))
    with pytest.raises(HypothesisViolated):
        check_duke_iwaniec(make_field(11), 2, mult_character(make_field(11), 2))
    with pytest.raises(HypothesisViolated):
        check_duke_iwaniec(fld, 2, mult_character(fld, 6, 1))


@pytest.mark.parametrize("q", [7, 13])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_gauss_expansion_exhaustive_small(q, n):
    fld = make_field(q)
    for t in range(1, q):
        for b in (0, 1):
            check = check_gauss_expansion(fld, t, b, n)
            assert check.passed, (q, n, t, b, check.residual)


def test_gauss_expansion_constant_term_convention():
    # the expansion is exact without a k = 0 term; forcing one in shifts
    # the right side by exactly -chi(b)
    fld = make_field(7)
    for t in (1, 3):
        for b in (0, 1):
            plain = check_gauss_expansion(fld, t, b, 3)
            shifted = check_gauss_expansion(fld, t, b, 3,
                                            include_constant_term=True)
            assert plain.passed
            chi_b = complex(fld.add_char[b])
            assert abs((shifted.rhs - plain.rhs) + chi_b) < 1e-10
            assert not shifted.passed


def test_gauss_expansion_rejects_zero_coefficient():
    fld = make_field(7)
    with pytest.raises(ZeroCoefficient):
        check_gauss_expansion(fld, 0, 1, 3)


@pytest.mark.parametrize("q", [7, 13])
def test_cubic_power_expansion_small(q):
    fld = make_field(q)
    for index in (1, 2):
        psi = mult_character(fld, 3, index)
        for t in range(1, q):
            for l in (1, 2, 3):
                check = check_cubic_power_expansion(fld, t, l, psi)
                assert check.passed, (q, index, t, l, check.residual)


def test_cubic_power_expansion_hypotheses():
    fld = make_field(13)
    psi = mult_character(fld, 3, 1)
    with pytest.raises(HypothesisViolated):
        check_cubic_power_expansion(fld, 0, 1, psi)
    with pytest.raises(HypothesisViolated):
        check_cubic_power_expansion(make_field(11), 1, 1,
                                    mult_character(make_field(11), 2))


@pytest.mark.parametrize("q", [7, 13])
def test_completed_kloosterman_form_small(q):
    fld = make_field(q)
    rng = np.random.default_rng(3)
    for index in (1, 2):
        psi = mult_character(fld, 3, index)
        for t in range(1, q):
            for l in (1, 2, 3):
                m_vec = tuple(int(m) for m in rng.integers(1, q, size=l))
                check = check_completed_kloosterman_form(fld, t, m_vec, psi)
                assert check.passed, (q, index, t, m_vec, check.residual)
                assert check.parameters["rescaled_m"] == tuple(
                    pow(27, q - 2, q) * pow(m, 3, q) % q for m in m_vec)


def test_completed_kloosterman_form_errors():
    fld = make_field(7)
    psi = mult_character(fld, 3, 1)
    with pytest.raises(DimensionTooLarge):
        check_completed_kloosterman_form(fld, 1, (1, 2, 3, 4), psi)
    with pytest.raises(HypothesisViolated):
        check_completed_kloosterman_form(fld, 0, (1,), psi)
    with pytest.raises(HypothesisViolated):
        check_completed_kloosterman_form(fld, 1, (0,), psi)


@pytest.mark.parametrize("q", [7, 13, 19])
def test_a_r_ratios_within_envelope(q):
    fld = make_field(q)
    psi = mult_character(fld, 3, 1)
    for d in (2, 3):
        for l in (1, 2):
            if l > d:
                continue
            for r in range(0, d - l + 1):
                for j in (1, q - 1):
                    m_vec = tuple(range(1, l + 1))
                    bound = compute_A_r(fld, j, l, d, r, m_vec, psi)
                    assert bound.envelope == q ** ((l + 1) / 2)
                    assert bound.ratio <= 10.0, bound.parameters
                    assert bound.magnitude <= bound.envelope * 10.0


def test_a_r_errors():
    fld = make_field(7)
    psi = mult_character(fld, 3, 1)
    with pytest.raises(HypothesisViolated):
        compute_A_r(fld, 0, 1, 2, 0, (1,), psi)
    with pytest.raises(HypothesisViolated):
        compute_A_r(fld, 1, 1, 2, 5, (1,), psi)
    with pytest.raises(HypothesisViolated):
        compute_A_r(fld, 1, 1, 2, 0, (0,), psi)
    with pytest.raises(HypothesisViolated):
        compute_A_r(fld, 1, 0, 2, 0, (), psi)


@pytest.mark.parametrize("q", [7, 13])
@pytest.mark.parametrize("n", [2, 3])
def test_cohomology_sum_equals_scaled_spectrum(q, n):
    # summing the t variable first collapses the full sum to
    # q * q^2 * S_j_hat(m), which ties the bound check to the spectrum
    fld = make_field(q)
    for (m1, m2) in ((1, 2), (1, 0), (0, 3)):
        for j in (1, q - 1):
            bound = check_cohomology_bound(fld, n, m1, m2, j)
            shat = sphere_spectrum(SphereSpec(fld, d=2, n=n, j=j))
            expected = q**3 * shat.values[m1 % q, m2 % q]
            assert abs(bound.magnitude - abs(expected)) < 1e-8
            assert bound.envelope == q**1.5
            assert bound.ratio <= 10.0


def test_cohomology_r_k_attachment():
    fld = make_field(13)
    with_deg = check_cohomology_bound(fld, 3, 1, 0, 2)
    assert len(with_deg.r_k_checks) == 2
    for rk in with_deg.r_k_checks:
        assert rk.name == "r_k"
        assert rk.envelope == 13.0
        assert rk.ratio <= 10.0
    no_deg = check_cohomology_bound(fld, 3, 1, 2, 2)
    assert no_deg.r_k_checks == ()
    # h = gcd(2, 12) = 2 leaves a single twisted sum
    quad = check_cohomology_bound(fld, 2, 0, 5, 1)
    assert len(quad.r_k_checks) == 1


def test_cohomology_errors():
    fld = make_field(7)
    with pytest.raises(ZeroRadius):
        check_cohomology_bound(fld, 3, 1, 2, 0)
    with pytest.raises(ZeroFrequency):
        check_cohomology_bound(fld, 3, 0, 0, 1)
    with pytest.raises(DimensionTooLarge):
        check_cohomology_bound(fld, 3, 1, 2, 1, d=3)


def test_check_serialization():
    fld = make_field(7)
    psi = mult_character(fld, 3, 1)
    check = check_duke_iwaniec(fld, 2, psi)
    doc = json.loads(check.to_json())
    assert doc["pass"] is True
    assert doc["name"] == "duke_iwaniec"
    assert doc["residual"] < 1e-8
    bound = compute_A_r(fld, 1, 1, 2, 0, (1,), psi)
    doc = json.loads(bound.to_json())
    assert doc["name"] == "a_r"
    assert doc["ratio"] == bound.ratio
