"""Painleve VI parameter bookkeeping, Hamiltonian flow, residual checkers.

Conventions: the exponent 4-tuple kappa = (k0, k1, kt, kinf) determines
rho through  k0 + k1 + kt + kinf + 2*rho = 1.  The theta-convention used by
the fuchsian side is theta_i = kappa_i for i in {0,1,t} and
theta_inf = kappa_inf + 1; it lives in `fuchs`, not here.

The Hamiltonian (q, p momenta at fixed t):

    H = q(q-1)(q-t)/(t(t-1)) * [ p^2 - (k0/q + k1/(q-1) + (kt-1)/(q-t)) p
                                 + rho(kinf+rho)/(q(q-1)) ]

and the flow is dq/dt = dH/dp, dp/dt = -dH/dq.  All partial derivatives
used by the flow and by the solution-transport lifts are closed forms, so
the Fuchs-Malmquist identity can be checked exactly in rational mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BlowupDetected, BoundaryPoint
from .numcore import OdeConfig, PlanePath, integrate_path, is_exact

BOUNDARY_EPS = 1e-10


@dataclass(frozen=True)
class PviParams:
    k0: object
    k1: object
    kt: object
    kinf: object
    rho: object

    @property
    def kappa(self):
        return (self.k0, self.k1, self.kt, self.kinf)


def make_params(k0, k1, kt, kinf) -> PviParams:
    if all(is_exact(k) for k in (k0, k1, kt, kinf)):
        rho = Fraction(1 - k0 - k1 - kt - kinf, 2)
    else:
        rho = (1 - k0 - k1 - kt - kinf) / 2
    return PviParams(k0, k1, kt, kinf, rho)


@dataclass(frozen=True)
class PhasePoint:
    t: object
    q: object
    p: object


@dataclass(frozen=True)
class Trajectory:
    params: PviParams
    samples: tuple          # ordered PhasePoints
    path: PlanePath


def _check_boundary(t, q=None):
    if _close(t, 0) or _close(t, 1):
        raise BoundaryPoint(f"t={t} is on the boundary set")
    if q is not None and (_close(q, 0) or _close(q, 1) or _close(q, t)):
        raise BoundaryPoint(f"q={q} is on the boundary set for t={t}")


def _close(a, b):
    if is_exact(a) and is_exact(b):
        return a == b
    scale = max(abs(complex(a)), abs(complex(b)), 1.0)
    return abs(complex(a) - complex(b)) < BOUNDARY_EPS * scale


def hamiltonian(P: PviParams, pt: PhasePoint):
    t, q, p = pt.t, pt.q, pt.p
    _check_boundary(t, q)
    W = q * (q - 1) * (q - t)
    T = t * (t - 1)
    S = P.k0 / q + P.k1 / (q - 1) + (P.kt - 1) / (q - t)
    R = P.rho * (P.kinf + P.rho)
    return (W / T) * (p * p - S * p + R / (q * (q - 1)))


def hamiltonian_field(P: PviParams, pt: PhasePoint):
    """(dH/dp, -dH/dq) in closed form."""
    t, q, p = pt.t, pt.q, pt.p
    _check_boundary(t, q)
    W = q * (q - 1) * (q - t)
    Wq = 3 * q * q - 2 * (1 + t) * q + t
    T = t * (t - 1)
    S = P.k0 / q + P.k1 / (q - 1) + (P.kt - 1) / (q - t)
    Sq = -P.k0 / q ** 2 - P.k1 / (q - 1) ** 2 - (P.kt - 1) / (q - t) ** 2
    R = P.rho * (P.kinf + P.rho)
    U = q * (q - 1)
    Uq = 2 * q - 1
    G = p * p - S * p + R / U
    dH_dp = (W / T) * (2 * p - S)
    dH_dq = (Wq / T) * G + (W / T) * (-Sq * p - R * Uq / U ** 2)
    return dH_dp, -dH_dq


def flow_second_derivatives(P: PviParams, pt: PhasePoint):
    """Total second derivatives (q'', p'') along the Hamiltonian flow.

    Everything is a closed form in (kappa, t, q, p); used by the residual
    checkers and the solution-transport lifts.
    """
    t, q, p = pt.t, pt.q, pt.p
    _check_boundary(t, q)
    W = q * (q - 1) * (q - t)
    Wq = 3 * q * q - 2 * (1 + t) * q + t
    Wqq = 6 * q - 2 * (1 + t)
    Wt = -q * (q - 1)
    Wqt = -(2 * q - 1)
    T = t * (t - 1)
    Tt = 2 * t - 1
    S = P.k0 / q + P.k1 / (q - 1) + (P.kt - 1) / (q - t)
    Sq = -P.k0 / q ** 2 - P.k1 / (q - 1) ** 2 - (P.kt - 1) / (q - t) ** 2
    Sqq = 2 * P.k0 / q ** 3 + 2 * P.k1 / (q - 1) ** 3 + 2 * (P.kt - 1) / (q - t) ** 3
    St = (P.kt - 1) / (q - t) ** 2
    Sqt = -2 * (P.kt - 1) / (q - t) ** 3
    R = P.rho * (P.kinf + P.rho)
    U = q * (q - 1)
    Uq = 2 * q - 1
    G = p * p - S * p + R / U
    Gq = -Sq * p - R * Uq / U ** 2
    Gqq = -Sqq * p - R * (2 * U - 2 * Uq * Uq) / U ** 3
    Gp = 2 * p - S
    Gqp = -Sq
    Gt = -St * p

    qd = (W / T) * Gp
    pd = -((Wq / T) * G + (W / T) * Gq)

    # d/dt of dH/dp at fixed (q,p), plus chain rule through (q,p)
    Hp_t = ((Wt * T - W * Tt) / T ** 2) * Gp + (W / T) * (-St)
    Hp_q = (Wq / T) * Gp + (W / T) * Gqp
    Hp_p = (W / T) * 2
    qdd = Hp_t + Hp_q * qd + Hp_p * pd

    Hq_t = ((Wqt * T - Wq * Tt) / T ** 2) * G + (Wq / T) * Gt \
        + ((Wt * T - W * Tt) / T ** 2) * Gq + (W / T) * (-Sqt * p)
    Hq_q = (Wqq / T) * G + 2 * (Wq / T) * Gq + (W / T) * Gqq
    Hq_p = (Wq / T) * Gp + (W / T) * Gqp
    pdd = -(Hq_t + Hq_q * qd + Hq_p * pd)
    return qdd, pdd


def p_from_slope(P: PviParams, t, q, qdot):
    _check_boundary(t, q)
    W = q * (q - 1) * (q - t)
    T = t * (t - 1)
    half = Fraction(1, 2) if is_exact(q) and is_exact(qdot) and is_exact(t) else 0.5
    return half * (T / W * qdot + P.k0 / q + P.k1 / (q - 1) + (P.kt - 1) / (q - t))


def pvi_rhs(P: PviParams, t, lam, lam_dot):
    """Second derivative lambda'' prescribed by the Painleve VI equation."""
    if _close(t, 0) or _close(t, 1):
        raise BoundaryPoint(f"t={t}")
    if _close(lam, 0) or _close(lam, 1) or _close(lam, t):
        raise BoundaryPoint(f"lambda={lam} off-domain for t={t}")
    half = Fraction(1, 2) if is_exact(lam) and is_exact(t) and is_exact(lam_dot) \
        and is_exact(P.k0) else 0.5
    A = half * (1 / lam + 1 / (lam - 1) + 1 / (lam - t)) * lam_dot ** 2
    B = (1 / t + 1 / (t - 1) + 1 / (lam - t)) * lam_dot
    C = (lam * (lam - 1) * (lam - t)) / (t ** 2 * (t - 1) ** 2) * (
        half * P.kinf ** 2
        - half * P.k0 ** 2 * t / lam ** 2
        + half * P.k1 ** 2 * (t - 1) / (lam - 1) ** 2
        + half * (1 - P.kt ** 2) * t * (t - 1) / (lam - t) ** 2
    )
    return A - B + C


def flow(P: PviParams, start: PhasePoint, path: PlanePath,
         cfg: OdeConfig = OdeConfig()) -> Trajectory:
    """Integrate the Hamiltonian field along a complex t-path."""
    if abs(complex(start.t) - path.start) > 1e-9 * max(1.0, abs(path.start)):
        raise ValueError("start.t must be the first waypoint of the path")
    _check_boundary(start.t, start.q)

    def field(t, y):
        q, p = y
        dq, dp = hamiltonian_field(P, PhasePoint(t, q, p))
        return (dq, dp)

    res = integrate_path(field, [complex(start.q), complex(start.p)], path, cfg)
    samples = tuple(PhasePoint(t, y[0], y[1])
                    for t, y in zip(res.points, res.states))
    return Trajectory(P, samples, path)


def flow_with_detours(P: PviParams, start: PhasePoint, t_end,
                      cfg: OdeConfig = OdeConfig(), max_detours: int = 8,
                      side: int = +1):
    """Flow from start.t to t_end along a straight segment, inserting a
    semicircular detour around any pole of the transcendent that the
    integrator runs into (signalled by BlowupDetected).

    Returns (trajectory, path_used).  The detour半circle radius follows the
    0.1*|t| rule; repeated blowups near the same point widen the arc.
    """
    t0 = complex(start.t)
    t1 = complex(t_end)
    detours = []  # list of (center, radius)
    for _ in range(max_detours + 1):
        path = _path_with_detours(t0, t1, detours, side)
        try:
            return flow(P, start, path, cfg), path
        except BlowupDetected as exc:
            bad = complex(exc.last_good)
            radius = 0.1 * max(abs(bad), 0.5)
            for i, (c, r) in enumerate(detours):
                if abs(c - bad) < 2 * r:
                    detours[i] = (c, 1.8 * r)
                    break
            else:
                detours.append((bad, radius))
    raise BlowupDetected(t_end, "path deformation failed to avoid poles")


def _path_with_detours(t0, t1, detours, side):
    if not detours:
        return PlanePath([t0, t1])
    direction = (t1 - t0) / abs(t1 - t0)
    pts = [t0]
    for center, radius in sorted(detours, key=lambda cr: abs(cr[0] - t0)):
        entry = center - radius * direction
        # half circle from entry to exit on the chosen side, as 6 chords
        for k in range(7):
            rot = complex(math.cos(math.pi * k / 6), side * math.sin(math.pi * k / 6))
            pts.append(center + (entry - center) * rot)
    pts.append(t1)
    # drop accidental duplicates
    cleaned = [pts[0]]
    for z in pts[1:]:
        if abs(z - cleaned[-1]) > 1e-13:
            cleaned.append(z)
    return PlanePath(cleaned)


def flow_grid(P: PviParams, start: PhasePoint, t_values,
              cfg: OdeConfig = OdeConfig()):
    """States of the flow at the prescribed complex t-values (sequentially)."""
    pts = [start]
    cur = start
    for t_next in t_values[1:]:
        seg = PlanePath([complex(cur.t), complex(t_next)])
        traj = flow(P, cur, seg, cfg)
        cur = traj.samples[-1]
        cur = PhasePoint(t_next, cur.q, cur.p)
        pts.append(cur)
    return pts


def exact_field_lift(P: PviParams):
    """Lift used in pvi_residual: (lam, lam', lam'') from the flow's own
    field, i.e. lam = q, lam' = dH/dp, lam'' = total derivative of dH/dp."""
    def lift(pt: PhasePoint):
        qd, _ = hamiltonian_field(P, pt)
        qdd, _ = flow_second_derivatives(P, pt)
        return pt.q, qd, qdd
    return lift


def pvi_residual(P: PviParams, traj: Trajectory, lift) -> float:
    """max over samples of |lam'' - pvi_rhs| / (1 + |lam''|)."""
    worst = 0.0
    for pt in traj.samples:
        lam, lam_dot, lam_ddot = lift(pt)
        rhs = pvi_rhs(P, pt.t, lam, lam_dot)
        r = abs(complex(lam_ddot) - complex(rhs)) / (1 + abs(complex(lam_ddot)))
        worst = max(worst, r)
    return worst
