from fractions import Fraction as F

import pytest

from conftest import rational_kappa, rational_phase_point
from pvilame import pvi
from pvilame.errors import BoundaryPoint
from pvilame.numcore import OdeConfig, PlanePath


def test_make_params():
    assert pvi.make_params(0, 0, 0, 0).rho == F(1, 2)
    assert pvi.make_params(F(1, 2), F(1, 2), F(1, 2), F(1, 2)).rho == -F(1, 2)
    assert pvi.make_params(1, 0, 0, 0).rho == 0


def test_hamiltonian_values():
    P = pvi.make_params(F(0), F(0), F(0), F(0))
    assert pvi.hamiltonian(P, pvi.PhasePoint(F(2), F(3), F(0))) == F(1, 8)
    assert pvi.hamiltonian(P, pvi.PhasePoint(F(2), F(3), F(1))) == F(49, 8)
    P1 = pvi.make_params(F(1), F(0), F(0), F(0))
    assert pvi.hamiltonian(P1, pvi.PhasePoint(F(2), F(3), F(0))) == 0


def test_hamiltonian_boundary():
    P = pvi.make_params(0, 0, 0, 0)
    with pytest.raises(BoundaryPoint):
        pvi.hamiltonian(P, pvi.PhasePoint(F(2), F(2), F(1)))
    with pytest.raises(BoundaryPoint):
        pvi.hamiltonian(P, pvi.PhasePoint(F(1), F(3), F(1)))


def test_field_stationary_point():
    P = pvi.make_params(F(1, 3), F(1, 7), F(2, 5), F(1, 2))
    t, q = F(3), F(5)
    p = F(1, 2) * (P.k0 / q + P.k1 / (q - 1) + (P.kt - 1) / (q - t))
    dq, _ = pvi.hamiltonian_field(P, pvi.PhasePoint(t, q, p))
    assert dq == 0


def test_field_substitution_value():
    P = pvi.make_params(F(0), F(0), F(0), F(0))
    dq, _ = pvi.hamiltonian_field(P, pvi.PhasePoint(F(2), F(3), F(0)))
    assert dq == 3


def test_field_matches_finite_differences(rng):
    P = pvi.make_params(0.21, -0.34, 0.11, 0.45)
    h = 1e-6
    for _ in range(50):
        t = rng.uniform(0.2, 0.8)
        q = rng.uniform(1.5, 3.0) + 1j * rng.uniform(-1, 1)
        p = rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
        dq, dp = pvi.hamiltonian_field(P, pvi.PhasePoint(t, q, p))
        Hpp = (pvi.hamiltonian(P, pvi.PhasePoint(t, q, p + h))
               - pvi.hamiltonian(P, pvi.PhasePoint(t, q, p - h))) / (2 * h)
        Hqq = (pvi.hamiltonian(P, pvi.PhasePoint(t, q + h, p))
               - pvi.hamiltonian(P, pvi.PhasePoint(t, q - h, p))) / (2 * h)
        scale = max(1.0, abs(dq), abs(dp))
        assert abs(dq - Hpp) < 1e-8 * scale
        assert abs(dp + Hqq) < 1e-8 * scale


def test_second_derivatives_match_field_differences(rng):
    P = pvi.make_params(0.17, 0.23, -0.31, 0.41)
    h = 1e-6
    for _ in range(20):
        t = rng.uniform(0.3, 0.7)
        q = rng.uniform(1.5, 2.5)
        p = rng.uniform(0.2, 1.0)
        pt = pvi.PhasePoint(t, q, p)
        qdd, pdd = pvi.flow_second_derivatives(P, pt)

        def fields_at(tv):
            # follow the flow to first order to evaluate the total derivative
            dq, dp = pvi.hamiltonian_field(P, pt)
            qv = q + dq * (tv - t)
            pv = p + dp * (tv - t)
            return pvi.hamiltonian_field(P, pvi.PhasePoint(tv, qv, pv))

        (dq1, dp1), (dq2, dp2) = fields_at(t - h), fields_at(t + h)
        assert abs(qdd - (dq2 - dq1) / (2 * h)) < 1e-6 * max(1.0, abs(qdd))
        assert abs(pdd - (dp2 - dp1) / (2 * h)) < 1e-6 * max(1.0, abs(pdd))


def test_p_from_slope_values():
    P = pvi.make_params(F(0), F(0), F(0), F(0))
    assert pvi.p_from_slope(P, F(2), F(3), F(0)) == -F(1, 2)
    P2 = pvi.make_params(F(2), F(0), F(0), F(0))
    assert pvi.p_from_slope(P2, F(2), F(1, 2), F(0)) == F(7, 3)


def test_p_from_slope_inverts_field(rng):
    for _ in range(10):
        P = pvi.make_params(*rational_kappa(rng))
        pt = rational_phase_point(rng)
        dq, _ = pvi.hamiltonian_field(P, pt)
        assert pvi.p_from_slope(P, pt.t, pt.q, dq) == pt.p


def test_pvi_rhs_value():
    P = pvi.make_params(F(0), F(0), F(0), F(0))
    assert pvi.pvi_rhs(P, F(3), F(2), F(0)) == -F(1, 6)


def test_pvi_rhs_symmetry_under_01_swap(rng):
    # kappa0^2 = kappa1^2: residual magnitude invariant under
    # (lam, t) -> (1-lam, 1-t)
    P = pvi.make_params(F(2, 5), -F(2, 5), F(1, 3), F(1, 7))
    for _ in range(10):
        t = F(rng.randint(2, 9), 11)
        lam = F(rng.randint(10, 30), 7)
        ld = F(rng.randint(-5, 5), 3)
        a = pvi.pvi_rhs(P, t, lam, ld)
        b = pvi.pvi_rhs(P, 1 - t, 1 - lam, ld)
        assert a == -b  # lam'' flips sign with the chart flip


def test_fuchs_malmquist_elimination_exact(rng):
    # eliminating p through the Hamilton equations reproduces pvi_rhs exactly
    for _ in range(25):
        P = pvi.make_params(*rational_kappa(rng))
        pt = rational_phase_point(rng)
        qd, _ = pvi.hamiltonian_field(P, pt)
        qdd, _ = pvi.flow_second_derivatives(P, pt)
        assert qdd == pvi.pvi_rhs(P, pt.t, pt.q, qd)


def test_flow_zero_length_path():
    P = pvi.make_params(0, 0, 0, 0)
    start = pvi.PhasePoint(0.5, 2.0, 1 / 3)
    traj = pvi.flow(P, start, PlanePath([0.5]))
    assert len(traj.samples) == 1
    assert traj.samples[0] == start


def test_flow_reversal():
    P = pvi.make_params(0.11, -0.21, 0.31, 0.07)
    cfg = OdeConfig(rel_tol=1e-11, abs_tol=1e-13)
    start = pvi.PhasePoint(0.5, 2.0 + 0.3j, 0.4 - 0.2j)
    fwd = pvi.flow(P, start, PlanePath([0.5, 0.62]), cfg)
    end = fwd.samples[-1]
    back = pvi.flow(P, end, PlanePath([0.62, 0.5]), cfg)
    final = back.samples[-1]
    assert abs(complex(final.q) - complex(start.q)) < 10 * cfg.rel_tol * 10
    assert abs(complex(final.p) - complex(start.p)) < 10 * cfg.rel_tol * 10


def test_flow_residual_small():
    P = pvi.make_params(F(0), F(0), F(0), F(0))
    start = pvi.PhasePoint(0.5, 2.0, 1 / 3)
    traj = pvi.flow(P, start, PlanePath([0.5, 0.6]))
    assert pvi.pvi_residual(P, traj, pvi.exact_field_lift(P)) < 1e-6


def test_residual_detects_non_solutions():
    P = pvi.make_params(0.3, 0.2, 0.1, 0.4)
    start = pvi.PhasePoint(0.5, 2.2, 0.37)
    traj = pvi.flow(P, start, PlanePath([0.5, 0.6]))

    def bogus(pt):
        return 2.7, 0.0, 0.0

    assert pvi.pvi_residual(P, traj, bogus) > 0.1
