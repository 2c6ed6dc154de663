import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fibspec.charpoly import (
    CharPolynomial,
    Family,
    Regime,
    all_roots,
    dominant_root,
    evaluate,
    point_spectrum,
    rho_threshold,
    root_count_report,
)
from fibspec.errors import BoundaryWarning, DomainError, NonConvergence

from oracles import bisect, companion_roots, p_coeffs, q_coeffs

PHI = (1 + math.sqrt(5)) / 2


def P(n):
    return CharPolynomial.fibonacci(n)


def Q(n, rho):
    return CharPolynomial.fib_like(n, rho)


def same_multiset(a, b, tol):
    a, b = list(a), list(b)
    assert len(a) == len(b)
    for z in a:
        i = int(np.argmin([abs(z - w) for w in b]))
        assert abs(z - b[i]) <= tol, (z, b[i])
        b.pop(i)


# construction


def test_validation():
    with pytest.raises(DomainError):
        P(0)
    with pytest.raises(DomainError):
        Q(2, 0.0)
    with pytest.raises(DomainError):
        Q(2, -1.0)
    assert CharPolynomial(Family.FIBONACCI, 2, rho=1.0).rho is None
    with pytest.raises(DomainError):
        Q(2.5, 1.0)


def test_coefficients_match_definitions():
    for n in range(1, 7):
        assert np.allclose(P(n).coefficients, p_coeffs(n))
        assert np.allclose(Q(n, 0.7).coefficients, q_coeffs(n, 0.7))
        assert P(n).degree == n + 1 == Q(n, 0.7).degree


# evaluate


@pytest.mark.parametrize(
    "poly, z, expected",
    [(P(1), 1, -1.0), (P(3), 0, -1.0), (Q(5, 1.0), 1, -1.0)],
)
def test_evaluate_examples(poly, z, expected):
    assert evaluate(poly, z) == expected
    assert isinstance(evaluate(poly, float(z)), float)


def test_evaluate_complex_matches_polyval():
    z = 0.3 - 1.1j
    for poly, c in ((P(4), p_coeffs(4)), (Q(3, 2.5), q_coeffs(3, 2.5))):
        assert abs(evaluate(poly, z) - np.polyval(c, z)) < 1e-13


@given(
    n=st.integers(1, 10),
    rho=st.floats(1e-3, 1e3),
    lam=st.floats(0.0, 4.0),
)
def test_factored_and_monomial_forms_agree(n, rho, lam):
    poly = Q(n, rho)
    factored = evaluate(poly, lam)
    monomial = evaluate(poly, complex(lam, 0.0))
    scale = lam ** (n + 1) + 2 * lam ** n + lam ** (n - 1) + rho
    assert abs(factored - monomial.real) <= 1e-12 * scale
    assert monomial.imag == 0


def test_derivative_matches_finite_difference():
    for poly in (P(3), Q(4, 0.3)):
        for z in (1.3, 0.4 + 0.9j):
            h = 1e-6
            fd = (poly(z + h) - poly(z - h)) / (2 * h)
            assert abs(poly.derivative(z) - fd) < 1e-6


# dominant root


def test_golden_ratio():
    assert abs(dominant_root(P(1)) - PHI) <= 1e-12


def test_q2_dominant_example():
    assert abs(dominant_root(Q(1, 0.25)) - 1.5) <= 1e-12


def test_dominant_root_matches_bisection_oracle():
    ref = bisect(lambda x: x ** 3 - x ** 2 - 1, 1.0, 2.0, 1e-15)
    assert abs(dominant_root(P(2)) - ref) <= 1e-14


@pytest.mark.parametrize("n", range(1, 13))
def test_dominant_root_matches_companion_matrix(n):
    ref = max(companion_roots(p_coeffs(n)).real)
    assert abs(dominant_root(P(n)) - ref) <= 1e-10


@given(n=st.integers(1, 8), rho=st.floats(1e-6, 1e6))
@settings(max_examples=200)
def test_dominant_root_is_simple_positive_root(n, rho):
    poly = Q(n, rho)
    lam = dominant_root(poly)
    assert lam > 1
    assert abs(poly(lam)) <= 1e-12 * poly.scale(lam)
    assert poly.derivative(lam) > 0


@given(n=st.integers(1, 6), rho=st.floats(1e-4, 1e4), bump=st.floats(1.001, 3.0))
def test_dominant_root_increases_with_rho(n, rho, bump):
    assert dominant_root(Q(n, rho * bump)) > dominant_root(Q(n, rho))


@given(n=st.integers(1, 8), rho=st.floats(1e-3, 1e3), lam=st.floats(1.0, 10.0), dl=st.floats(1e-3, 1.0))
def test_q_increasing_beyond_one(n, rho, lam, dl):
    poly = Q(n, rho)
    assert poly(lam + dl) > poly(lam)


def test_dominant_root_nonconvergence_surfaces():
    with pytest.raises(NonConvergence):
        dominant_root(P(7), max_iter=1)
    with pytest.raises(DomainError):
        dominant_root(P(1), tol=0)


# all roots


def test_all_roots_golden_pair():
    rs = all_roots(P(1))
    assert abs(rs.dominant - PHI) < 1e-12
    assert len(rs.others) == 1
    assert abs(rs.others[0] - (1 - PHI)) < 1e-12
    assert abs(rs.dominant * rs.others[0] + 1) < 1e-12


@pytest.mark.parametrize("rho", [0.25, 1.0, 4.0, 9.0])
def test_q2_factorization(rho):
    rs = all_roots(Q(1, rho))
    same_multiset(rs.roots, [1 + math.sqrt(rho), 1 - math.sqrt(rho)], 1e-10)


def test_p5_against_companion_matrix():
    rs = all_roots(P(4))
    ref = companion_roots(p_coeffs(4))
    same_multiset(rs.roots, ref, 1e-9)
    delta = 1e-8
    assert sum(abs(z) > rs.dominant - delta for z in rs.roots) == 1


@pytest.mark.parametrize("n", [2, 3, 5, 8, 12])
def test_all_roots_match_companion_matrix_F(n):
    same_multiset(all_roots(P(n)).roots, companion_roots(p_coeffs(n)), 1e-8)


@pytest.mark.parametrize("n, rho", [(2, 0.05), (3, 0.5), (5, 1.0), (8, 20.0)])
def test_all_roots_match_companion_matrix_G(n, rho):
    same_multiset(all_roots(Q(n, rho)).roots, companion_roots(q_coeffs(n, rho)), 1e-7)


@given(n=st.integers(1, 12))
@settings(max_examples=12, deadline=None)
def test_residuals_within_bound(n):
    poly = P(n)
    rs = all_roots(poly)
    for z in rs.roots:
        assert abs(poly(z)) <= 1e-10 * poly.scale(z)
    assert rs.residual_bound <= 1e-10 * poly.scale(rs.dominant)


@pytest.mark.parametrize("n", range(1, 13))
def test_one_negative_real_root_for_odd_n(n):
    negatives = [z for z in companion_roots(p_coeffs(n)) if abs(z.imag) < 1e-9 and z.real < 0]
    found = [z for z in all_roots(P(n)).roots if abs(z.imag) < 1e-9 and z.real < 0]
    assert len(found) == len(negatives) == (1 if n % 2 == 1 else 0)


# point spectrum


def test_point_spectrum_examples():
    ps = point_spectrum(P(1))
    assert len(ps) == 1 and abs(ps[0] - PHI) < 1e-12
    ps = point_spectrum(Q(1, 0.25))
    assert len(ps) == 1 and abs(ps[0] - 1.5) < 1e-12


def test_point_spectrum_p7_filter():
    ref = [z for z in companion_roots(p_coeffs(6)) if abs(z) > 1]
    same_multiset(point_spectrum(P(6)), ref, 1e-9)


def test_unit_circle_roots_flagged():
    # p_5 = (l^2 - l + 1)(l^3 - l - 1) has exp(+-i pi/3) on the circle
    with pytest.warns(BoundaryWarning):
        ps = point_spectrum(P(4))
    assert all(abs(z) > 1 for z in ps)
    assert len(ps) == 1


def test_point_spectrum_silent_off_the_circle():
    with warnings.catch_warnings():
        warnings.simplefilter("error", BoundaryWarning)
        point_spectrum(P(3))


# root counting


def test_rho_threshold_n2():
    lam1, rho0 = rho_threshold(2)
    assert lam1 == pytest.approx(1 / 3)
    assert rho0 == pytest.approx(4 / 27)


def test_root_count_examples():
    assert root_count_report(Q(2, 0.5)).regime is Regime.NO_INTERIOR_ROOTS
    rep = root_count_report(Q(2, 4 / 27))
    assert rep.regime is Regime.ONE_DOUBLE_ROOT
    assert rep.interior_roots == pytest.approx((1 / 3,))
    rep = root_count_report(Q(2, 0.05))
    assert rep.regime is Regime.TWO_INTERIOR_ROOTS
    lo, hi = rep.interior_roots
    assert lo < 1 / 3 < hi < 1
    poly = Q(2, 0.05)
    for r, ref in zip(rep.interior_roots, (bisect(poly, 0.0, 1 / 3), bisect(poly, 1 / 3, 1.0))):
        assert abs(r - ref) < 1e-12


@pytest.mark.parametrize("n", range(2, 9))
def test_interior_roots_against_companion(n):
    _, rho0 = rho_threshold(n)
    poly = Q(n, rho0 / 3)
    rep = root_count_report(poly)
    ref = sorted(z.real for z in companion_roots(q_coeffs(n, rho0 / 3)) if abs(z.imag) < 1e-9 and 0 < z.real < 1)
    assert len(ref) == 2
    assert np.allclose(rep.interior_roots, ref, atol=1e-8)


def test_root_count_domain():
    with pytest.raises(DomainError):
        root_count_report(P(3))
    with pytest.raises(DomainError):
        root_count_report(Q(1, 0.1))
