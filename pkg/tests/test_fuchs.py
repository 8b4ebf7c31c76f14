from fractions import Fraction as F

import pytest

from conftest import rational, rational_kappa, rational_phase_point
from pvilame import fuchs, mat2, pvi
from pvilame.errors import NonEigenline, QAtInfinity, ResonantInfinity
from pvilame.numcore import OdeConfig, PlanePath, Poly, RatFun


def _theta_index(lab):
    return {"0": 0, "1": 1, "t": 2, "inf": 3}[lab]


def test_system_invariants_exact(rng):
    for _ in range(15):
        P = pvi.make_params(*rational_kappa(rng))
        pt = rational_phase_point(rng)
        S = fuchs.system_from_pq(P, pt)
        for lab in ("0", "1", "t"):
            A = S.residue(lab)
            th = S.theta[_theta_index(lab)]
            assert mat2.mtrace(A) == 0
            assert mat2.mdet(A) == -th * th / 4
        Ainf = S.Ainf
        assert Ainf[0][1] == 0
        assert Ainf[0][0] == S.theta[3] / 2
        assert mat2.mtrace(Ainf) == 0


def test_b_coefficient_values():
    P = pvi.make_params(F(1, 2), F(1, 3), F(1, 5), F(1, 7))
    S = fuchs.system_from_pq(P, pvi.PhasePoint(F(2), F(3), F(1, 5)))
    assert (S.A0[0][1], S.A1[0][1], S.At[0][1]) == (-F(3, 2), F(2), -F(1, 2))


def test_pq_roundtrip_exact(rng):
    for _ in range(15):
        P = pvi.make_params(*rational_kappa(rng))
        pt = rational_phase_point(rng)
        S = fuchs.system_from_pq(P, pt)
        q, p, theta = fuchs.pq_from_system(S)
        assert q == pt.q and p == pt.p
        assert theta == S.theta


def test_q_from_b_values():
    # (b0, b1) = (-3/2, 2), t = 2 -> q = 3
    t, b0, b1 = F(2), -F(3, 2), F(2)
    assert t * b0 / (t * b0 + (t - 1) * b1) == 3


def test_q_invariant_under_diagonal_scaling(rng):
    P = pvi.make_params(*rational_kappa(rng))
    pt = rational_phase_point(rng)
    S = fuchs.system_from_pq(P, pt)
    s = F(3, 7)
    D = ((s, 0), (0, 1 / s))
    Dinv = ((1 / s, 0), (0, s))
    conj = lambda A: mat2.mmul(Dinv, mat2.mmul(A, D))
    S2 = fuchs.FuchsianSystem(S.t, conj(S.A0), conj(S.A1), conj(S.At), S.theta)
    q2, _, _ = fuchs.pq_from_system(S2)
    assert q2 == pt.q


def test_parabolic_lines_are_eigenlines(rng):
    for _ in range(10):
        P = pvi.make_params(*rational_kappa(rng))
        pt = rational_phase_point(rng)
        S = fuchs.system_from_pq(P, pt)
        L = fuchs.parabolic_lines(P, pt)
        for lab, line in (("0", L.l0), ("1", L.l1), ("t", L.lt), ("inf", L.linf)):
            A = S.residue(lab)
            th = S.theta[_theta_index(lab)]
            shifted = mat2.madd(A, mat2.mscale(th / 2, mat2.IDENT))
            assert mat2.mvec(shifted, line) == (0, 0)


def test_parabolic_lines_p_zero():
    P = pvi.make_params(F(1, 3), F(1, 5), F(1, 7), F(1, 11))
    pt = pvi.PhasePoint(F(3), F(5), F(0))
    L = fuchs.parabolic_lines(P, pt)
    assert L.l0 == (1, 0)
    assert L.l1 == (1, P.rho + P.kinf)
    assert L.linf == (0, 1)


def test_cross_ratio_normalized_quadruple():
    # l0=0, l1=1, lt=w, linf=inf -> c = w
    w = F(5, 3)
    L = fuchs.ParabolicData((1, 0), (1, 1), (1, w), (0, 1))
    num, den = fuchs.cross_ratio(L)
    assert num / den == w


def test_cross_ratio_closed_form(rng):
    for _ in range(20):
        P = pvi.make_params(*rational_kappa(rng))
        pt = rational_phase_point(rng)
        den_cf = (pt.q - pt.t) * pt.p + P.rho + P.kinf
        L = fuchs.parabolic_lines(P, pt)
        num, den = fuchs.cross_ratio(L)
        if den_cf == 0:
            assert den == 0
            continue
        cf = pt.t * ((pt.q - 1) * pt.p + P.rho + P.kinf) / den_cf
        assert num / den == cf


def test_cross_ratio_p_to_infinity_limit(rng):
    # homogeneous leading terms: c -> t(q-1)/(q-t)
    P = pvi.make_params(*rational_kappa(rng))
    t, q = F(7, 2), F(9, 4)
    big = F(10) ** 12
    L = fuchs.parabolic_lines(P, pvi.PhasePoint(t, q, big))
    num, den = fuchs.cross_ratio(L)
    limit = t * (q - 1) / (q - t)
    assert abs(num / den - limit) < F(1, 10) ** 10


def test_scalar_equation_residues(rng):
    for _ in range(10):
        P = pvi.make_params(*rational_kappa(rng))
        pt = rational_phase_point(rng)
        eq = fuchs.scalar_from_pq(P, pt)
        H = pvi.hamiltonian(P, pt)
        assert eq.g.residue_at(pt.q) == pt.p
        assert eq.g.residue_at(pt.t) == -H
        assert eq.f.residue_at(pt.q) == -1


def test_riccati_f2_table():
    P = pvi.make_params(F(1, 3), F(1, 5), F(2, 7), F(3, 11))
    pt = pvi.PhasePoint(F(5, 2), F(7, 3), F(3, 5))
    m = fuchs.riccati_model("F2", P, pt)
    bp = pt.q * (pt.q - 1) * (pt.q - pt.t) * pt.p
    assert m.sing_points["s0"] == (0, 0)
    assert m.sing_points["s0p"] == (0, pt.t * P.k0)
    assert m.sing_points["s1p"] == (1, (1 - pt.t) * P.k1)
    assert m.sing_points["stp"] == (pt.t, pt.t * (pt.t - 1) * P.kt)
    assert m.sing_points["sq"] == (pt.q, bp)
    assert m.sing_points["sinf"] == ("inf", -P.rho)
    assert m.sing_points["sinfp"] == ("inf", -P.rho - P.kinf)


def test_riccati_f1_table():
    P = pvi.make_params(F(1, 3), F(1, 5), F(2, 7), F(3, 11))
    pt = pvi.PhasePoint(F(5, 2), F(7, 3), F(3, 5))
    m = fuchs.riccati_model("F1", P, pt)
    bp = pt.q * (pt.q - 1) * (pt.q - pt.t) * pt.p
    assert m.sing_points["s0"] == (0, bp / pt.q)
    assert m.sing_points["s0p"] == (0, (bp - pt.t * P.k0) / pt.q)
    assert m.sing_points["st"] == (pt.t, bp / (pt.q - pt.t))


def test_riccati_f0_is_projectivization(rng):
    for _ in range(8):
        P = pvi.make_params(*rational_kappa(rng))
        if P.kinf == -1:
            continue
        pt = rational_phase_point(rng)
        S = fuchs.system_from_pq(P, pt)
        m = fuchs.riccati_model("F0", P, pt)

        def partial(entries):
            r = RatFun(Poly([0]))
            for vv, a in zip(entries, (0, 1, pt.t)):
                r = r + RatFun(Poly([vv]), Poly([-a, 1]))
            return r

        bx = partial([S.A0[0][1], S.A1[0][1], S.At[0][1]])
        ax = partial([S.A0[0][0], S.A1[0][0], S.At[0][0]])
        cx = partial([S.A0[1][0], S.A1[1][0], S.At[1][0]])
        assert m.coeff_y2 == -1 * bx
        assert m.coeff_y1 == -2 * ax
        assert m.coeff_y0 == cx
        # parabolic structure = s_i table
        L = fuchs.parabolic_lines(P, pt)
        assert m.sing_points["s0"][1] == L.l0[1] / L.l0[0]
        assert m.sing_points["s1"][1] == L.l1[1] / L.l1[0]
        assert m.sing_points["st"][1] == L.lt[1] / L.lt[0]
        # s'inf kills the infinity residue: equals -(c0+c1+ct)/theta_inf
        csum = S.A0[1][0] + S.A1[1][0] + S.At[1][0]
        assert m.sing_points["sinfp"][1] == -csum / S.theta[3]


def test_riccati_f0_resonant_infinity():
    P = pvi.make_params(F(1, 3), F(1, 5), F(2, 7), F(-1))
    pt = pvi.PhasePoint(F(5, 2), F(7, 3), F(3, 5))
    with pytest.raises(ResonantInfinity):
        fuchs.riccati_model("F0", P, pt)


def test_normal_form_roundtrip(rng):
    for _ in range(8):
        P = pvi.make_params(*rational_kappa(rng))
        pt = rational_phase_point(rng)
        m = fuchs.riccati_model("F1", P, pt)
        nf = fuchs.riccati_normal_form(m, pt.t)
        assert nf.q == pt.q
        bp = pt.q * (pt.q - 1) * (pt.q - pt.t) * pt.p
        b0 = -2 * bp + (pt.q - 1) * (pt.q - pt.t) * P.k0 \
            + pt.q * (pt.q - pt.t) * P.k1 + pt.q * (pt.q - 1) * P.kt
        assert nf.b0 == b0
        d0, d1, dt, dinf = nf.deltas(pt.t)
        assert d0 == P.k0 ** 2
        assert d1 == P.k1 ** 2
        assert dt == P.kt ** 2
        assert dinf == P.kinf ** 2


def test_normal_form_c0_example():
    # kappa0=1/2, t=2, q=3, b0=1 -> c0 = ((t k0)^2 - b0^2)/(4q) = 0
    k0, t, q, b0 = F(1, 2), F(2), F(3), F(1)
    c0 = ((t * k0) ** 2 - b0 ** 2) / (4 * q)
    assert c0 == 0


def test_normal_form_q_at_infinity():
    t = F(3)
    c2 = RatFun(Poly([1]), Poly([0, 1]) * Poly([-1, 1]) * Poly([-t, 1]))
    c1 = RatFun(Poly([0]))
    c0 = RatFun(Poly([0]))
    with pytest.raises(QAtInfinity):
        fuchs.riccati_normal_form((c2, c1, c0), t)


def test_elm_local_tables():
    from pvilame.fuchs import DiagonalLocal, JordanLocal, elm_local
    r = elm_local(((F(3, 10), 0), (0, -F(3, 10))), (0, 1), +1)
    assert (r.theta1, r.theta2) == (F(3, 10), F(7, 10))
    r = elm_local(((0, 0), (0, 0)), None, +1)
    assert (r.theta1, r.theta2) == (0, 1)
    r = elm_local(((0, 0), (0, 0)), None, -1)
    assert (r.theta1, r.theta2) == (-1, 0)
    # Jordan models shift exactly per the tables
    j = JordanLocal("upper", F(1, 3), 2)
    assert elm_local(j, sign=+1) == JordanLocal("upper", F(4, 3), 1)
    assert elm_local(j, sign=-1) == JordanLocal("upper", F(1, 3), 1)
    j = JordanLocal("lower", F(1, 5), 1)
    assert elm_local(j, sign=+1) == JordanLocal("lower", F(1, 5), 2)
    assert elm_local(j, sign=-1) == JordanLocal("lower", -F(4, 5), 2)
    # elm+ then elm- at the transformed line restores the eigenvalues
    d = DiagonalLocal(F(1, 4), -F(1, 4))
    up = elm_local(d, sign=+1)
    back = elm_local(DiagonalLocal(up.theta2, up.theta1), sign=-1)
    assert sorted((back.theta1, back.theta2)) == sorted((d.theta1, d.theta2))


def test_elm_local_non_eigenline():
    A = ((F(1, 2), F(1)), (F(0), -F(1, 2)))
    with pytest.raises(NonEigenline):
        fuchs.elm_local(A, (0, 1), +1)


def test_q_ode_residual_on_flow():
    P = pvi.make_params(0.12, -0.08, 0.21, 0.33)
    start = pvi.PhasePoint(0.45, 1.9 + 0.2j, 0.4 - 0.1j)
    cfg = OdeConfig(rel_tol=1e-11, abs_tol=1e-13)
    traj = pvi.flow(P, start, PlanePath([0.45, 0.55]), cfg)
    assert fuchs.q_ode_residual(P, traj) < 1e-6
    # single-sample trajectory is fine
    single = pvi.Trajectory(P, (start,), PlanePath([0.45]))
    assert fuchs.q_ode_residual(P, single) < 1e-6


def test_q_ode_residual_detects_non_solution():
    P = pvi.make_params(0.3, 0.2, 0.1, 0.4)
    pts = tuple(pvi.PhasePoint(0.4 + 0.01 * k, 2.3, 0.7) for k in range(5))
    traj = pvi.Trajectory(P, pts, PlanePath([0.4, 0.44]))
    assert fuchs.q_ode_residual(P, traj, measured=True) > 0.01


def test_lame_accessory():
    lam = F(7, 5)
    assert fuchs.lame_accessory(lam, F(2), F(9)) == 2 * lam
    assert fuchs.lame_accessory(lam, F(0), F(9)) == -2 * lam
    assert fuchs.lame_accessory(F(0), F(4), F(2)) == 6
