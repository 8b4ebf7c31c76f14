"""Legendre-curve periods, Weierstrass uniformization, Picard solutions.

The curve y^2 = x(x-1)(x-t) is centered by x = X + (1+t)/3 so that
X = p(z), y = p'(z)/2 for the Weierstrass function of the lattice computed
by arithmetic-geometric means.  Half-period labeling convention: the
generators (h1, h2) are chosen so that p(h1) maps to x = 0 and p(h2) to
x = 1 (hence h1 + h2 to x = t), and Im(h2/h1) > 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import AtInfinity, DegenerateCurve, LatticePoint, NonConvergence

_AGM_TOL = 1e-15


def agm(a, b):
    """Optimal arithmetic-geometric mean for complex arguments.

    The square-root branch is the `right choice': the one minimizing
    |a_{n+1} - b_{n+1}|, with ties broken toward Im(b/a) > 0.
    """
    a, b = complex(a), complex(b)
    if a == 0 or b == 0:
        raise ValueError("agm of zero")
    for _ in range(64):
        if abs(a - b) <= _AGM_TOL * max(abs(a), abs(b)):
            return (a + b) / 2
        am = (a + b) / 2
        gm = cmath.sqrt(a * b)
        if abs(am - gm) > abs(am + gm) or (
                abs(am - gm) == abs(am + gm) and (gm / am).imag <= 0):
            gm = -gm
        a, b = am, gm
    raise NonConvergence("agm did not converge in 64 iterations")


@dataclass(frozen=True)
class WeierstrassData:
    e1: complex
    e2: complex
    e3: complex
    g2: complex
    g3: complex


def weierstrass_from_roots(r1, r2, r3):
    """Centered branch values and invariants for y^2 = (x-r1)(x-r2)(x-r3)."""
    s = (r1 + r2 + r3) / 3
    e = (r1 - s, r2 - s, r3 - s)
    g2 = -4 * (e[0] * e[1] + e[0] * e[2] + e[1] * e[2])
    g3 = 4 * e[0] * e[1] * e[2]
    return WeierstrassData(e[0], e[1], e[2], g2, g3)


@dataclass(frozen=True)
class HalfPeriods:
    """Half-periods of the Legendre curve.

    h1, h2 generate half the period lattice of z (full lattice 2*h1, 2*h2);
    P1, P2 = 2*h1, 2*h2 are the periods of dx/y.  p(h1) corresponds to
    x = 0 and p(h2) to x = 1.
    """
    t: complex
    h1: complex
    h2: complex
    wdata: WeierstrassData

    @property
    def P1(self):
        return 2 * self.h1

    @property
    def P2(self):
        return 2 * self.h2

    @property
    def tau(self):
        return self.P2 / self.P1

    @property
    def shift(self):
        return (1 + self.t) / 3


_PSERIES_N = 24


def _pseries_coeffs(g2, g3):
    c = [0j] * (_PSERIES_N + 1)
    c[1] = g2 / 20
    c[2] = g3 / 28
    for k in range(3, _PSERIES_N + 1):
        acc = sum(c[m] * c[k - 1 - m] for m in range(1, k - 1))
        c[k] = 3 * acc / ((2 * k + 3) * (k - 2))
    return c


def _p_small(z, coeffs):
    z2 = z * z
    p = 1 / z2
    dp = -2 / (z2 * z)
    zp = z2
    for k in range(1, _PSERIES_N + 1):
        p += coeffs[k] * zp
        dp += coeffs[k] * 2 * k * zp / z
        zp *= z2
    return p, dp


def _double_point(X, Y, g2):
    """Group-law doubling on Y^2 = 4X^3 - g2 X - g3."""
    m = (12 * X * X - g2) / (2 * Y)
    X2 = m * m / 4 - 2 * X
    Y2 = -(Y + m * (X2 - X))
    return X2, Y2


class _Lattice:
    def __init__(self, w1, w2):
        self.w1, self.w2 = w1, w2
        det = w1.real * w2.imag - w1.imag * w2.real
        if abs(det) < 1e-14 * (abs(w1) * abs(w2) + 1e-300):
            raise DegenerateCurve("degenerate period lattice")
        self._inv = (w2.imag / det, -w2.real / det, -w1.imag / det, w1.real / det)

    def reduce(self, z):
        a, b, c, d = self._inv
        al = a * z.real + b * z.imag
        be = c * z.real + d * z.imag
        return z - round(al) * self.w1 - round(be) * self.w2

    def min_norm(self):
        cands = [self.w1, self.w2, self.w1 + self.w2, self.w1 - self.w2]
        return min(abs(w) for w in cands)


def weierstrass_p(z, hp: HalfPeriods):
    """(p(z), p'(z)) by Laurent series near 0 plus group-law duplication."""
    z = complex(z)
    lat = _Lattice(2 * hp.h1, 2 * hp.h2)
    z = lat.reduce(z)
    rmin = lat.min_norm()
    if abs(z) < 1e-12 * rmin:
        raise LatticePoint(f"z={z} is a lattice point")
    g2, g3 = hp.wdata.g2, hp.wdata.g3
    coeffs = _pseries_coeffs(g2, g3)
    k = 0
    while abs(z) / 2 ** k > 0.35 * rmin:
        k += 1
    X, Y = _p_small(z / 2 ** k, coeffs)
    for _ in range(k):
        X, Y = _double_point(X, Y, g2)
    return X, Y


def half_periods(t) -> HalfPeriods:
    """Half-periods for y^2 = x(x-1)(x-t), labeled so that the 2-torsion
    images are exactly {0, 1, t} in that generator order, Im(tau) > 0."""
    t = complex(t)
    if t == 0 or t == 1:
        raise DegenerateCurve("t in {0,1}")
    wd = weierstrass_from_roots(0j, 1 + 0j, t)
    e = [wd.e1, wd.e2, wd.e3]

    def half_period_for(i):
        j, k = [m for m in range(3) if m != i]
        return cmath.pi / (2 * agm(cmath.sqrt(e[i] - e[j]), cmath.sqrt(e[i] - e[k])))

    h1 = half_period_for(0)   # p(h1) = e1  (x = 0)
    h2 = half_period_for(1)   # p(h2) = e2  (x = 1)
    if (h2 / h1).imag == 0:
        raise DegenerateCurve("real-degenerate lattice")
    if (h2 / h1).imag < 0:
        h2 = -h2
    hp = HalfPeriods(t, h1, h2, wd)
    # AGM can land on a lattice-equivalent representative whose label is off;
    # fix the labeling by direct evaluation.
    hp = _fix_labels(hp)
    return hp


def _fix_labels(hp: HalfPeriods) -> HalfPeriods:
    t, s = hp.t, hp.shift
    targets = (0, 1, t)
    reps = {}
    pairs = ((1, 0), (0, 1), (1, 1))
    for c1, c2 in pairs:
        z = c1 * hp.h1 + c2 * hp.h2
        x = weierstrass_p(z, hp)[0] + s
        best = min(range(3), key=lambda i: abs(x - targets[i]))
        if abs(x - targets[best]) > 1e-6 * max(1.0, abs(t)):
            raise NonConvergence("half-period labeling failed")
        reps[best] = (c1, c2)
    if sorted(reps) != [0, 1, 2]:
        raise NonConvergence("2-torsion images not distinct")
    m = (reps[0], reps[1])  # new generators in terms of old, rows (c1,c2)
    h1 = m[0][0] * hp.h1 + m[0][1] * hp.h2
    h2 = m[1][0] * hp.h1 + m[1][1] * hp.h2
    if (h2 / h1).imag < 0:
        h2 = -h2
    return HalfPeriods(t, h1, h2, hp.wdata)


def to_legendre(z, hp: HalfPeriods):
    """Map z to the affine Legendre curve: x = p(z) + (1+t)/3, y = p'(z)/2."""
    X, Y = weierstrass_p(z, hp)
    return X + hp.shift, Y / 2


@dataclass(frozen=True)
class PicardSeed:
    c0: complex
    c1: complex


def picard_solution(seed, t, hp=None):
    """x-coordinate of pi(c0*h1 + c1*h2) on the Legendre curve at t.

    This is Picard's solution of PVI(0,0,0,0); the labeling convention is
    h1 -> x=0, h2 -> x=1 (configurable by permuting seed coefficients).
    """
    if hp is None:
        hp = half_periods(t)
    c0, c1 = complex(seed.c0), complex(seed.c1)
    pair = _integer_pair_mod2(c0, c1)
    if pair is not None:
        # 2-torsion seeds land on the labeled branch points exactly
        value = {(1, 0): 0, (0, 1): 1, (1, 1): hp.t}.get(pair)
        if value is None:
            raise AtInfinity("seed lands on the lattice: x = infinity")
        return value
    z = c0 * hp.h1 + c1 * hp.h2
    lat = _Lattice(2 * hp.h1, 2 * hp.h2)
    if abs(lat.reduce(z)) < 1e-9 * lat.min_norm():
        raise AtInfinity("seed lands on the lattice: x = infinity")
    return to_legendre(z, hp)[0]


def _integer_pair_mod2(c0, c1, tol=1e-12):
    for c in (c0, c1):
        if abs(c.imag) > tol or abs(c.real - round(c.real)) > tol:
            return None
    return (round(c0.real) % 2, round(c1.real) % 2)


def picard_pvi_residual(seed, ts, h_rel=1e-3):
    """Finite-difference PVI(0,0,0,0) residual of t -> x(t) over a grid.

    Central differences with one Richardson extrapolation step; the
    default step is chosen for double-precision second derivatives.
    """
    from .pvi import make_params, pvi_rhs

    P0 = make_params(0, 0, 0, 0)
    worst = 0.0
    for t in ts:
        h = h_rel * abs(t)

        def x_of(tv):
            return picard_solution(seed, tv)

        def dd(hh):
            xm, x0, xp = x_of(t - hh), x_of(t), x_of(t + hh)
            d1 = (xp - xm) / (2 * hh)
            d2 = (xp - 2 * x0 + xm) / (hh * hh)
            return x0, d1, d2

        x0, d1a, d2a = dd(h)
        _, d1b, d2b = dd(h / 2)
        d1 = (4 * d1b - d1a) / 3
        d2 = (4 * d2b - d2a) / 3
        rhs = pvi_rhs(P0, t, x0, d1)
        worst = max(worst, abs(d2 - rhs) / (1 + abs(d2)))
    return worst
