"""Scalar and algebra substrate.

Scalars are plain Python numbers used in two modes:

* exact mode -- ``fractions.Fraction`` (and ``int``), where every identity
  in the pipeline is an equality.  Used by the reconstruction formulas and
  the whole elliptic pull-back.
* float mode -- ``complex`` / ``float``, used by flows and monodromy.

On top of that, dense univariate polynomials (``Poly``), rational functions
(``RatFun``), piecewise-linear complex paths (``PlanePath``) and an adaptive
embedded Runge-Kutta integrator for holomorphic fields along such paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    BlowupDetected,
    DegenerateLeadingCoefficient,
    DivisionByZero,
    NotQuadratic,
    PoleEvaluation,
    StepLimitExceeded,
)

EXACT_TYPES = (Fraction, int)


def is_exact(x):
    return isinstance(x, EXACT_TYPES)


def all_exact(*xs):
    return all(is_exact(x) for x in xs)


def rational_sqrt(x):
    """Square root of a Fraction when it is a perfect square, else None."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Dense univariate polynomial, coefficients in ascending degree.

    The zero polynomial has an empty coefficient list.  Exact coefficients
    stay exact; mixing in a float/complex coefficient silently moves the
    polynomial to float mode.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and _is_zero(c[-1]):
            c.pop()
        self.c = c

    @staticmethod
    def const(x):
        return Poly([x])

    @staticmethod
    def x():
        return Poly([0, 1])

    @property
    def degree(self):
        return len(self.c) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.c

    def leading(self):
        if not self.c:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.c[-1]

    def is_exact(self):
        return all(is_exact(a) for a in self.c)

    def __eq__(self, other):
        other = _as_poly(other)
        return self.c == other.c

    def __hash__(self):
        return hash(tuple(self.c))

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.c), len(other.c))
        return Poly([_get(self.c, i) + _get(other.c, i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-a for a in self.c])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.c or not other.c:
            return Poly()
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        r, b = Poly([1]), self
        for _ in range(n):
            r = r * b
        return r

    def divmod(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.c)
        quo = [0] * max(0, len(rem) - len(other.c) + 1)
        lead = other.c[-1]
        if is_exact(lead) and self.is_exact():
            lead = Fraction(lead)
        for k in range(len(rem) - len(other.c), -1, -1):
            q = rem[k + len(other.c) - 1] / lead
            quo[k] = q
            if not _is_zero(q):
                for j, b in enumerate(other.c):
                    rem[k + j] = rem[k + j] - q * b
        return Poly(quo), Poly(rem)

    def __call__(self, x):
        r = 0
        for a in reversed(self.c):
            r = r * x + a
        return r

    def deriv(self):
        return Poly([i * a for i, a in enumerate(self.c)][1:])

    def monic(self):
        if self.is_zero():
            return self
        lead = Fraction(self.c[-1]) if self.is_exact() else self.c[-1]
        return Poly([a / lead for a in self.c])

    def map(self, f):
        return Poly([f(a) for a in self.c])

    def __repr__(self):
        return f"Poly({self.c})"


def _is_zero(a):
    return a == 0


def _get(c, i):
    return c[i] if i < len(c) else 0


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    return Poly([x])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by Euclid's algorithm; exact coefficients only."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def poly_from_roots(roots):
    p = Poly([1])
    for r in roots:
        p = p * Poly([-r, 1])
    return p


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RatFun:
    """Quotient of two polynomials.

    In exact mode the representation is canonical: gcd(num, den) = 1 and the
    denominator is monic.  In float mode no cancellation is attempted.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=Poly([1]), reduce=True):
        num, den = _as_poly(num), _as_poly(den)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if reduce and num.is_exact() and den.is_exact():
            if not num.is_zero():
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num.divmod(g)[0]
                    den = den.divmod(g)[0]
            lead = Fraction(den.c[-1])
            num = num.map(lambda a: a / lead)
            den = den.map(lambda a: a / lead)
        self.num, self.den = num, den

    @staticmethod
    def const(x):
        return RatFun(Poly([x]))

    @staticmethod
    def x():
        return RatFun(Poly([0, 1]))

    def is_zero(self):
        return self.num.is_zero()

    def is_exact(self):
        return self.num.is_exact() and self.den.is_exact()

    def __eq__(self, other):
        other = _as_ratfun(other)
        return (self.num * other.den - other.num * self.den).is_zero()

    def __add__(self, other):
        other = _as_ratfun(other)
        return RatFun(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-_as_ratfun(other))

    def __rsub__(self, other):
        return _as_ratfun(other) + (-self)

    def __mul__(self, other):
        other = _as_ratfun(other)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfun(other)
        if other.is_zero():
            raise DivisionByZero("division by zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_ratfun(other) / self

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise PoleEvaluation(f"evaluation at pole x={x}")
        n = self.num(x)
        if is_exact(n) and is_exact(d):
            return Fraction(n, d) if isinstance(n, int) and isinstance(d, int) \
                else Fraction(n) / Fraction(d)
        return n / d

    def deriv(self):
        return RatFun(self.num.deriv() * self.den - self.num * self.den.deriv(),
                      self.den * self.den)

    def residue_at(self, a):
        """Residue at a simple pole x=a (exact when inputs are exact)."""
        dp = self.den.deriv()(a)
        if self.den(a) != 0 or dp == 0:
            raise PoleEvaluation(f"x={a} is not a simple pole")
        n = self.num(a)
        if is_exact(n) and is_exact(dp):
            return Fraction(n) / Fraction(dp)
        return n / dp

    def __repr__(self):
        return f"RatFun({self.num.c}, {self.den.c})"


def _as_ratfun(x):
    if isinstance(x, RatFun):
        return x
    if isinstance(x, Poly):
        return RatFun(x)
    return RatFun(Poly([x]))


def discriminant_in_w(w_coeffs):
    """b^2 - 4ac for a bivariate polynomial quadratic in w.

    `w_coeffs` is the list [C, B, A] of Poly coefficients of w^0, w^1, w^2.
    """
    if len(w_coeffs) != 3 or _as_poly(w_coeffs[2]).is_zero():
        raise NotQuadratic("expected degree exactly 2 in w")
    c, b, a = (_as_poly(p) for p in w_coeffs)
    return b * b - 4 * a * c


def poly_roots2(a, b, c):
    """Both roots of a*w^2 + b*w + c, exact when the discriminant is a
    rational perfect square, float-complex otherwise."""
    if a == 0:
        raise DegenerateLeadingCoefficient("leading coefficient is zero")
    disc = b * b - 4 * a * c
    if all_exact(a, b, c):
        r = rational_sqrt(disc)
        if r is not None:
            return ((-b + r) / (2 * a), (-b - r) / (2 * a))
    sq = complex(disc) ** 0.5
    # pick the root pairing that avoids cancellation
    if abs(-b + sq) >= abs(-b - sq):
        r1 = (-b + sq) / (2 * a)
    else:
        r1 = (-b - sq) / (2 * a)
    r2 = (c / a) / r1 if r1 != 0 else (-b / a)
    return (r1, r2)


# ---------------------------------------------------------------------------
# complex paths and the ODE integrator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlanePath:
    """Piecewise-linear path in the complex plane."""

    waypoints: tuple

    def __init__(self, waypoints):
        pts = tuple(complex(w) for w in waypoints)
        if not pts:
            raise ValueError("a path needs at least one waypoint")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise ValueError("consecutive waypoints must be distinct")
        object.__setattr__(self, "waypoints", pts)

    def reversed(self):
        return PlanePath(self.waypoints[::-1])

    @property
    def start(self):
        return self.waypoints[0]

    @property
    def end(self):
        return self.waypoints[-1]

    def length(self):
        return sum(abs(b - a) for a, b in zip(self.waypoints, self.waypoints[1:]))


@dataclass(frozen=True)
class OdeConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    max_steps: int = 200_000
    blowup_threshold: float = 1e8

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0 or self.max_step <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


# Dormand-Prince 5(4) pair
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
          187 / 2100, 1 / 40)


@dataclass
class PathResult:
    """Accepted-step samples of a path integration."""

    points: list = field(default_factory=list)   # path positions (complex)
    states: list = field(default_factory=list)   # state vectors (ndarray)

    @property
    def final_state(self):
        return self.states[-1]


def integrate_path(fieldfn, y0, path: PlanePath, cfg: OdeConfig = OdeConfig()):
    """Integrate dY/ds = fieldfn(s, Y) along a piecewise-linear complex path.

    Embedded Dormand-Prince 5(4) with PI step-size control.  Samples are the
    accepted step endpoints; the final state is reported at the last
    waypoint.  Raises `BlowupDetected` carrying the last good path point when
    any state magnitude exceeds cfg.blowup_threshold, and `StepLimitExceeded`
    when the step budget runs out.
    """
    y = np.asarray(y0, dtype=complex).copy()
    res = PathResult()
    res.points.append(path.waypoints[0])
    res.states.append(y.copy())
    steps_used = 0
    prev_err = 1.0

    for a, b in zip(path.waypoints, path.waypoints[1:]):
        seg = b - a
        seglen = abs(seg)

        def f(s, yv):
            return seg * np.asarray(fieldfn(a + s * seg, yv), dtype=complex)

        s = 0.0
        h = min(0.1, cfg.max_step / seglen)
        k = [None] * 7
        k[0] = f(s, y)
        while s < 1.0:
            if steps_used >= cfg.max_steps:
                raise StepLimitExceeded(f"exceeded {cfg.max_steps} steps")
            h = min(h, 1.0 - s)
            for i in range(1, 7):
                yi = y + h * sum(_DP_A[i][j] * k[j] for j in range(i))
                k[i] = f(s + _DP_C[i] * h, yi)
            y5 = y + h * sum(b5 * ki for b5, ki in zip(_DP_B5, k))
            y4 = y + h * sum(b4 * ki for b4, ki in zip(_DP_B4, k))
            steps_used += 1

            if not np.all(np.isfinite(y5.view(float))):
                raise BlowupDetected(a + s * seg)
            scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y5))
            err = math.sqrt(float(np.mean((np.abs(y5 - y4) / scale) ** 2)))

            if err <= 1.0:
                s += h
                y = y5
                k[0] = k[6]  # FSAL
                res.points.append(a + s * seg)
                res.states.append(y.copy())
                if np.max(np.abs(y)) > cfg.blowup_threshold:
                    raise BlowupDetected(a + s * seg)
                # PI controller (Gustafsson)
                fac = 0.9 * err ** -0.14 * prev_err ** 0.08 if err > 0 else 5.0
                prev_err = max(err, 1e-10)
            else:
                fac = max(0.2, 0.9 * err ** -0.2)
            h = min(h * min(5.0, fac), cfg.max_step / seglen)
            if h < 1e-14:
                raise StepLimitExceeded("step size underflow")
    return res
