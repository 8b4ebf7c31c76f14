import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pvilame.errors import (BlowupDetected, DegenerateLeadingCoefficient,
                            NotQuadratic, PoleEvaluation)
from pvilame.numcore import (OdeConfig, PlanePath, Poly, RatFun,
                             discriminant_in_w, integrate_path, poly_roots2)

X = Poly([0, 1])


def test_ratfun_common_denominator():
    # x/(x-1) + 1/(x-1) = (x+1)/(x-1)
    a = RatFun(X, X - 1)
    b = RatFun(Poly([1]), X - 1)
    s = a + b
    assert s == RatFun(X + 1, X - 1)


def test_poly_derivative():
    assert (X * X).deriv() == Poly([0, 2])


def test_removable_singularity():
    r_exact = RatFun(X * X - 1, X - F(1))
    assert r_exact(F(1)) == 2  # reduced in exact mode
    r_float = RatFun(Poly([-1.0, 0.0, 1.0]), Poly([-1.0, 1.0]))
    with pytest.raises(PoleEvaluation):
        r_float(1.0)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@given(st.lists(rationals, min_size=1, max_size=4),
       st.lists(rationals, min_size=1, max_size=4),
       st.lists(rationals, min_size=1, max_size=4))
@settings(max_examples=60, deadline=None)
def test_ratfun_ring_axioms(ca, cb, cc):
    a, b, c = (RatFun(Poly(cs), X - 7) for cs in (ca, cb, cc))
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)


def test_discriminant_trivial():
    # w^2 - x -> 4x
    assert discriminant_in_w([Poly([0, -1]), Poly([]), Poly([1])]) == Poly([0, 4])
    # x w^2 + 2x w + x -> 0 (perfect square)
    assert discriminant_in_w([X, 2 * X, X]).is_zero()
    with pytest.raises(NotQuadratic):
        discriminant_in_w([X, X])


def test_discriminant_fcross_value():
    from pvilame.lamecurve import conic_22, legendre_poly
    c, t = F(3), F(2)
    disc = discriminant_in_w(conic_22(c, t))
    assert disc == Poly([24]) * legendre_poly(t)


def test_poly_roots2():
    assert set(poly_roots2(1, 0, -1)) == {1, -1}
    assert poly_roots2(1, -2, 1) == (1, 1)
    assert set(poly_roots2(F(1), -F(5, 2), F(1))) == {F(2), F(1, 2)}
    with pytest.raises(DegenerateLeadingCoefficient):
        poly_roots2(0, 1, 1)


def test_integrate_constant_field():
    res = integrate_path(lambda s, y: 0 * y, [1.0 + 2.0j], PlanePath([0, 1j]))
    assert abs(res.final_state[0] - (1 + 2j)) < 1e-12


def test_integrate_exponential():
    cfg = OdeConfig(rel_tol=1e-11, abs_tol=1e-13)
    res = integrate_path(lambda s, y: y, [1.0], PlanePath([0, 1]), cfg)
    assert abs(res.final_state[0] - math.e) < 1e-9


def test_integrate_matrix_exponential():
    M = np.array([[0.3, -1.1], [0.7, 0.2]], dtype=complex)
    cfg = OdeConfig(rel_tol=1e-11, abs_tol=1e-13)

    def field(s, y):
        return (M @ y.reshape(2, 2)).reshape(4)

    res = integrate_path(field, np.eye(2, dtype=complex).reshape(4),
                         PlanePath([0, 1 + 0.5j]), cfg)
    from scipy.linalg import expm
    expected = expm(M * (1 + 0.5j))
    assert np.max(np.abs(res.final_state.reshape(2, 2) - expected)) < 1e-9


def test_integrate_path_reversal():
    cfg = OdeConfig(rel_tol=1e-11, abs_tol=1e-13)

    def field(x, y):
        return np.array([y[0] * np.sin(x) + 0.1 * y[1], -0.2 * y[0]])

    fwd = PlanePath([0, 0.7 + 0.2j, 1.3])
    res = integrate_path(field, [1.0, 0.5], fwd, cfg)
    back = integrate_path(field, res.final_state, fwd.reversed(), cfg)
    assert np.max(np.abs(back.final_state - np.array([1.0, 0.5]))) < 10 * cfg.rel_tol


def test_blowup_detection():
    cfg = OdeConfig(blowup_threshold=1e3)
    with pytest.raises(BlowupDetected):
        integrate_path(lambda s, y: y * y, [1.0], PlanePath([0, 2]), cfg)


def test_path_validation():
    with pytest.raises(ValueError):
        PlanePath([])
    with pytest.raises(ValueError):
        PlanePath([1, 1])
    p = PlanePath([0, 1j])
    assert p.length() == 1.0
