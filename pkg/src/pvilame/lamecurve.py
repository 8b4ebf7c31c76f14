"""Exact function-field algebra on the Legendre curve and the elliptic
pull-back producing Lame connections.

Elements of the function field are f(x) + g(x)*y modulo y^2 = P(x) with
P = x(x-1)(x-t); everything here runs in exact rational arithmetic (the
holomorphy statements of the pull-back are equalities, not tolerances).

A `CurveConnection` stores the connection in a fixed meromorphic
trivialization: a matrix W of curve elements with Omega = W*dx, plus one
local frame per marked 2-torsion point recording the accumulated bundle
modifications (elementary transformations, square-root twist).  The honest
local data at a point is read through its frame:

    Omega_loc = F^-1 Omega F - F^-1 dF,   F = C * diag(s^k1, s^k2) * unit,

expanded as exact Laurent series in the local parameter s (s = y at the
finite branch points, s = x/y at infinity).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import mat2
from .errors import (
    DegenerateCrossRatio,
    ExactModeRequired,
    InvalidConfiguration,
    NonEigenline,
    NotLameSpecial,
    UnsupportedPoint,
    ZeroDivisor,
)
from .fuchs import FuchsianSystem, ParabolicData, parabolic_lines, system_from_pq
from .numcore import Poly, RatFun, is_exact, rational_sqrt
from .pvi import PhasePoint, PviParams

POINTS = ("w0", "w1", "wt", "winf")


def legendre_poly(t) -> Poly:
    return Poly([0, 1]) * Poly([-1, 1]) * Poly([-t, 1])


# ---------------------------------------------------------------------------
# function field elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveElement:
    """f(x) + g(x) * y on y^2 = x(x-1)(x-t)."""

    t: object
    f: RatFun
    g: RatFun

    @staticmethod
    def of(t, f=0, g=0):
        fr = f if isinstance(f, RatFun) else RatFun(Poly([f]) if not isinstance(f, Poly) else f)
        gr = g if isinstance(g, RatFun) else RatFun(Poly([g]) if not isinstance(g, Poly) else g)
        return CurveElement(t, fr, gr)

    @staticmethod
    def y(t):
        return CurveElement.of(t, 0, 1)

    @staticmethod
    def x(t):
        return CurveElement(t, RatFun.x(), RatFun(Poly([0])))

    def is_zero(self):
        return self.f.is_zero() and self.g.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        return CurveElement(self.t, self.f + other.f, self.g + other.g)

    __radd__ = __add__

    def __neg__(self):
        return CurveElement(self.t, -self.f, -self.g)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        Pq = RatFun(legendre_poly(self.t))
        f = self.f * other.f + self.g * other.g * Pq
        g = self.f * other.g + self.g * other.f
        return CurveElement(self.t, f, g)

    __rmul__ = __mul__

    def norm(self):
        """f^2 - g^2 P, the norm to the rational function field."""
        return self.f * self.f - self.g * self.g * RatFun(legendre_poly(self.t))

    def conj(self):
        return CurveElement(self.t, self.f, -self.g)

    def inv(self):
        n = self.norm()
        if n.is_zero():
            raise ZeroDivisor("element has zero norm")
        c = self.conj()
        return CurveElement(self.t, c.f / n, c.g / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __eq__(self, other):
        other = self._coerce(other)
        return self.f == other.f and self.g == other.g

    def deriv(self):
        """Coefficient of dx in d(f + g y); dy = P'/(2P) y dx."""
        Pq = legendre_poly(self.t)
        corr = RatFun(Pq.deriv()) / RatFun(2 * Pq)
        return CurveElement(self.t, self.f.deriv(), self.g.deriv() + self.g * corr)

    def _coerce(self, other):
        if isinstance(other, CurveElement):
            return other
        return CurveElement.of(self.t, other)


def curve_arith(op, u: CurveElement, v=None):
    """Dispatch wrapper kept for symmetry with the operator interface."""
    if op == "add":
        return u + v
    if op == "mul":
        return u * v
    if op == "inv":
        return u.inv()
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# exact Laurent series at the 2-torsion points
# ---------------------------------------------------------------------------

SERIES_TERMS = 14


class LSeries:
    """Truncated Laurent series sum c_k s^k, k from `off` to off+len-1."""

    __slots__ = ("off", "c")

    def __init__(self, off, coeffs):
        c = list(coeffs)
        while c and c[0] == 0:
            c.pop(0)
            off += 1
        self.off = off
        self.c = c

    @staticmethod
    def zero():
        return LSeries(0, [])

    @staticmethod
    def const(v, n=SERIES_TERMS):
        return LSeries(0, [v] + [0] * (n - 1))

    @staticmethod
    def param(n=SERIES_TERMS):
        return LSeries(1, [1] + [0] * (n - 1))

    def is_zero(self):
        return not self.c

    @property
    def order(self):
        """Valuation; None for the (truncated) zero series."""
        return self.off if self.c else None

    def coeff(self, k):
        if not self.c or k < self.off or k >= self.off + len(self.c):
            return 0
        return self.c[k - self.off]

    def truncate(self, n):
        if not self.c:
            return self
        return LSeries(self.off, self.c[:max(0, n - self.off)])

    def __add__(self, other):
        if not self.c:
            return other
        if not other.c:
            return self
        off = min(self.off, other.off)
        top = min(self.off + len(self.c), other.off + len(other.c))
        # truncation: keep up to the shortest reliable top
        n = top - off
        return LSeries(off, [self.coeff(off + k) + other.coeff(off + k)
                             for k in range(n)])

    def __neg__(self):
        return LSeries(self.off, [-a for a in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.c or not other.c:
            return LSeries.zero()
        n = min(len(self.c), len(other.c))
        out = [0] * n
        for i, a in enumerate(self.c[:n]):
            if a == 0:
                continue
            for j, b in enumerate(other.c[:n - i]):
                out[i + j] += a * b
        return LSeries(self.off + other.off, out)

    def scale(self, v):
        return LSeries(self.off, [v * a for a in self.c])

    def shift(self, k):
        return LSeries(self.off + k, list(self.c))

    def inv(self):
        if not self.c:
            raise ZeroDivisor("inverse of (truncated) zero series")
        n = len(self.c)
        a0 = self.c[0]
        out = [0] * n
        out[0] = 1 / a0 if not is_exact(a0) else Fraction(1, 1) / a0
        for k in range(1, n):
            s = sum(self.c[j] * out[k - j] for j in range(1, k + 1))
            out[k] = -s / a0
        return LSeries(-self.off, out)

    def deriv(self):
        return LSeries(self.off - 1,
                       [(self.off + k) * a for k, a in enumerate(self.c)])

    def sqrt_unit(self):
        """Square root of a series with constant term 1 (valuation 0)."""
        assert self.off == 0 and self.c and self.c[0] == 1
        n = len(self.c)
        out = [0] * n
        out[0] = Fraction(1) if is_exact(self.c[0]) else 1.0
        half = Fraction(1, 2) if is_exact(self.c[0]) else 0.5
        for k in range(1, n):
            s = sum(out[j] * out[k - j] for j in range(1, k))
            out[k] = half * (self.c[k] - s)
        return LSeries(0, out)

    def __repr__(self):
        return f"LSeries(off={self.off}, {self.c})"


def _poly_at_series(p: Poly, xs: LSeries):
    if p.is_zero():
        return LSeries.zero()
    r = LSeries.zero()
    for a in reversed(p.c):
        r = r * xs + LSeries.const(a)
    return r


def _ratfun_at_series(r: RatFun, xs: LSeries):
    num = _poly_at_series(r.num, xs)
    den = _poly_at_series(r.den, xs)
    if num.is_zero():
        return LSeries.zero()
    return num * den.inv()


@dataclass(frozen=True)
class PointChart:
    """Exact expansions of (x, y) in the local parameter at a marked point."""
    label: str
    xs: LSeries
    ys: LSeries

    def element(self, e: CurveElement) -> LSeries:
        out = _ratfun_at_series(e.f, self.xs)
        if not e.g.is_zero():
            out = out + _ratfun_at_series(e.g, self.xs) * self.ys
        return out

    @property
    def dx(self):
        return self.xs.deriv()


def point_chart(t, label, n=SERIES_TERMS) -> PointChart:
    """Local parameter: s = y at w0/w1/wt (x - i = even series), s = x/y at
    winf (x = s^-2 * unit, y = s^-3 * unit, unit -> 1)."""
    one = Fraction(1) if is_exact(t) else 1.0
    if label in ("w0", "w1", "wt"):
        a = {"w0": 0 * one, "w1": one, "wt": t}[label]
        # solve (a + xi)(a + xi - 1)(a + xi - t) = s^2 for xi(s)
        s2 = LSeries(2, [one] + [0] * (n + 3))
        xi = LSeries.zero()
        for _ in range(n // 2 + 2):
            u0 = _shifted_unit(a, 0, xi, one)
            u1 = _shifted_unit(a, 1, xi, one)
            ut = _shifted_unit(a, t, xi, one)
            prod = {"w0": u1 * ut, "w1": u0 * ut, "wt": u0 * u1}[label]
            xi = (s2 * prod.inv()).truncate(n + 2)
        xs = xi + LSeries.const(a, n + 2) if a != 0 else xi
        ys = LSeries(1, [one] + [0] * (n + 1))
        return PointChart(label, xs.truncate(n + 2), ys)
    if label != "winf":
        raise UnsupportedPoint(label)
    # w = 1 + (1+t) z^2 - t z^4 / w,  x = w/z^2, y = w/z^3
    w = LSeries.const(one, n + 4)
    corr = LSeries(2, [(1 + t) * one] + [0] * (n + 3))
    tz4 = LSeries(4, [t * one] + [0] * (n + 1))
    for _ in range(n // 2 + 3):
        w = (LSeries.const(one, n + 4) + corr - tz4 * w.inv()).truncate(n + 4)
    xs = w.shift(-2)
    ys = w.shift(-3)
    return PointChart("winf", xs.truncate(n + 2), ys.truncate(n + 2))


def _shifted_unit(a, root, xi, one):
    # series of (a + xi - root), constant part folded in
    base = LSeries.const(a - root, SERIES_TERMS + 2)
    return (base + xi) if not xi.is_zero() else base


def local_expand(e, t, label, order=SERIES_TERMS, as_form=False):
    """Exact Laurent expansion of a curve element (or of e*dx when
    `as_form`) at a marked point, in the local parameter."""
    ch = point_chart(t, label, order)
    s = ch.element(e if isinstance(e, CurveElement) else CurveElement.of(t, e))
    if as_form:
        s = s * ch.dx
    return s


# ---------------------------------------------------------------------------
# connections on the curve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalFrame:
    """Frame C * diag(s^k1, s^k2) * u^(unit_half/2) at a marked point
    (C constant with det 1, u the canonical unit y*s^3 at infinity).  The
    fractional unit power only ever appears at winf, where it makes the
    twisted determinant trivialization exactly flat."""
    C: tuple = mat2.IDENT
    k1: int = 0
    k2: int = 0
    unit_half: int = 0


@dataclass(frozen=True)
class CurveConnection:
    t: object
    W: tuple                 # 2x2 of CurveElement; Omega = W dx
    frames: dict = field(default_factory=dict)
    chart_label: str = "pullback trivialization"

    def frame(self, label) -> LocalFrame:
        return self.frames.get(label, LocalFrame())


@dataclass(frozen=True)
class LocalData:
    point: str
    pole_order: int
    residue: tuple | None            # residue matrix when pole_order <= 1
    residue_eigenvalues: tuple | None

    @property
    def residue_trace(self):
        return None if self.residue is None else mat2.mtrace(self.residue)


def pullback_connection(S: FuchsianSystem) -> CurveConnection:
    """Step 1: pull the fuchsian system back to the Legendre curve.

    The matrix W with Omega = W dx is A0/x + A1/(x-1) + At/(x-t) read on the
    curve; poles at the four 2-torsion points with doubled exponents."""
    t = S.t
    if not all(is_exact(x) for A in (S.A0, S.A1, S.At) for row in A for x in row):
        raise ExactModeRequired("the pull-back pipeline runs in exact mode")

    def entry(i, j):
        f = RatFun(Poly([0]))
        for A, a in ((S.A0, 0), (S.A1, 1), (S.At, t)):
            f = f + RatFun(Poly([A[i][j]]), Poly([-a, 1]))
        return CurveElement(t, f, RatFun(Poly([0])))

    W = ((entry(0, 0), entry(0, 1)), (entry(1, 0), entry(1, 1)))
    return CurveConnection(t, W, {}, "pullback trivialization")


def connection_local_series(C: CurveConnection, label, order=SERIES_TERMS):
    """Entries of the honest local connection matrix at a marked point, as
    Laurent series in the local parameter (coefficients of ds)."""
    ch = point_chart(C.t, label, order)
    fr = C.frame(label)
    Cm, Ci = fr.C, mat2.minv(fr.C)
    # M = C^-1 W C, as series (times dx/ds)
    Wser = [[ch.element(C.W[i][j]) for j in range(2)] for i in range(2)]
    M = [[LSeries.zero(), LSeries.zero()], [LSeries.zero(), LSeries.zero()]]
    for i in range(2):
        for j in range(2):
            acc = LSeries.zero()
            for r in range(2):
                for s in range(2):
                    if Ci[i][r] == 0 or Cm[s][j] == 0:
                        continue
                    acc = acc + Wser[r][s].scale(Ci[i][r] * Cm[s][j])
            M[i][j] = acc
    dx = ch.dx
    out = [[(M[i][j] * dx) for j in range(2)] for i in range(2)]
    # conjugation by diag(s^k1, s^k2): entry (i,j) scales by s^(kj - ki);
    # the derivative term subtracts diag(k1, k2) ds/s
    k = (fr.k1, fr.k2)
    for i in range(2):
        for j in range(2):
            out[i][j] = out[i][j].shift(k[j] - k[i])
    one = Fraction(1) if is_exact(C.t) else 1.0
    for i in range(2):
        out[i][i] = out[i][i] - LSeries(-1, [k[i] * one] + [0] * (order + 1))
    # scalar unit factor u^(unit_half/2): subtract (unit_half/2) d(log u) Id
    if fr.unit_half:
        u = ch.ys.shift(3) if label == "winf" else ch.ys.shift(-1)
        du_over_u = u.deriv() * u.inv()
        half = Fraction(1, 2) if is_exact(C.t) else 0.5
        for i in range(2):
            out[i][i] = out[i][i] - du_over_u.scale(fr.unit_half * half)
    return out


def local_data(C: CurveConnection, label, order=SERIES_TERMS) -> LocalData:
    ser = connection_local_series(C, label, order)
    orders = [s.order for row in ser for s in row if not s.is_zero()]
    if not orders:
        return LocalData(label, 0, mat2.ZERO, (0, 0))
    pole = max(0, -min(orders))
    if pole > 1:
        return LocalData(label, pole, None, None)
    res = tuple(tuple(ser[i][j].coeff(-1) for j in range(2)) for i in range(2))
    tr = mat2.mtrace(res)
    det = mat2.mdet(res)
    disc = tr * tr - 4 * det
    eig = None
    if is_exact(disc):
        r = rational_sqrt(disc)
        if r is not None:
            eig = ((tr + r) / 2, (tr - r) / 2)
    if eig is None:
        rr = complex(disc) ** 0.5
        eig = ((complex(tr) + rr) / 2, (complex(tr) - rr) / 2)
    return LocalData(label, pole, res, eig)


def residue_matrix(C: CurveConnection, label, order=SERIES_TERMS):
    ld = local_data(C, label, order)
    if ld.residue is None:
        raise UnsupportedPoint(f"pole order {ld.pole_order} > 1 at {label}")
    return ld.residue


def apply_elm_at(C: CurveConnection, label, line, sign=+1,
                 expected_eigenvalue=None) -> CurveConnection:
    """elm^+ at a marked point with respect to an eigenline of the residue.

    The line is given in the global trivialization; the frame at the point
    becomes Cm * diag(1, 1/s) with the line as second basis column.  The
    residue must annihilate (line) up to the stated eigenvalue, otherwise
    the transform would create a higher-order pole (NonEigenline)."""
    if sign != +1:
        raise ValueError("only elm^+ is used by the pull-back")
    if C.frame(label) != LocalFrame():
        raise InvalidConfiguration(f"elm already applied at {label}")
    R = residue_matrix(C, label)
    Rl = mat2.mvec(R, line)
    cross = Rl[0] * line[1] - Rl[1] * line[0]
    if cross != 0:
        raise NonEigenline(f"{line} is not an eigenline of the residue at {label}")
    if expected_eigenvalue is not None:
        got = Rl[0] / line[0] if line[0] != 0 else Rl[1] / line[1]
        if got != expected_eigenvalue:
            raise NonEigenline(
                f"eigenvalue mismatch at {label}: {got} != {expected_eigenvalue}")
    if line == (0, 1) or line == (0, Fraction(1)):
        Cm = mat2.IDENT
    else:
        # det-1 completion with the line as second column
        Cm = ((Fraction(0), line[0]), (Fraction(-1) / line[0], line[1])) \
            if line[0] != 0 else mat2.IDENT
    frames = dict(C.frames)
    frames[label] = LocalFrame(Cm, 0, -1)
    return replace(C, frames=frames)


def twist_by_zeta(C: CurveConnection) -> CurveConnection:
    """Step 3: twist by the inverse square root of the determinant twist.

    Subtracts the half-form P'(x)/(4P(x)) dx (residue 1/2 at each 2-torsion
    point in honest frames) from the diagonal and multiplies the infinity
    frame by s^2, the local trivialization of O(-2[winf])."""
    t = C.t
    Pq = legendre_poly(t)
    zeta_half = RatFun(Pq.deriv()) / RatFun(4 * Pq)
    zh = CurveElement(t, zeta_half, RatFun(Poly([0])))
    W = tuple(tuple(C.W[i][j] - zh if i == j else C.W[i][j] for j in range(2))
              for i in range(2))
    frames = dict(C.frames)
    fr = frames.get("winf", LocalFrame())
    frames["winf"] = LocalFrame(fr.C, fr.k1 + 2, fr.k2 + 2, fr.unit_half - 1)
    return CurveConnection(t, W, frames, C.chart_label + " (x) L^-1 section")


def lame_pullback(P: PviParams, pt: PhasePoint):
    """Steps 1-3 for Lame-special exponents theta = (1/2,1/2,1/2,(1+v)/2).

    Returns (CurveConnection, [LocalData at w0, w1, wt, winf]).  All
    statements are exact: zero pole order at the finite 2-torsion points,
    a single log pole at winf with residue eigenvalues +-v/2, trace zero.
    """
    if not all(is_exact(v) for v in (*P.kappa, pt.t, pt.q, pt.p)):
        raise ExactModeRequired("lame_pullback requires exact rational data")
    half = Fraction(1, 2)
    if (P.k0, P.k1, P.kt) != (half, half, half):
        raise NotLameSpecial("kappa must be (1/2, 1/2, 1/2, (v-1)/2)")
    v = 2 * Fraction(P.kinf) + 1
    S = system_from_pq(P, pt)
    L = parabolic_lines(P, pt)
    C = pullback_connection(S)
    theta = S.theta
    for label, line, th in (("w0", L.l0, theta[0]), ("w1", L.l1, theta[1]),
                            ("wt", L.lt, theta[2]), ("winf", L.linf, theta[3])):
        C = apply_elm_at(C, label, line, +1, expected_eigenvalue=-th)
    C = twist_by_zeta(C)
    data = [local_data(C, lab) for lab in POINTS]
    return C, data


# ---------------------------------------------------------------------------
# Tu invariant and bundle classification
# ---------------------------------------------------------------------------

INF = object()  # projective infinity marker


def tu_from_cross_ratio(c, t):
    """lambda = t(c-1)/(c-t); c may be the INF marker."""
    if c is INF:
        return t
    if c == t:
        return INF
    return t * (c - 1) / (c - t)


def tu_from_pq(P: PviParams, pt: PhasePoint):
    """lambda = q + (rho + kinf)/p; ZeroMomentum signals lambda = infinity
    (the trivial-or-E_infinity locus)."""
    from .errors import ZeroMomentum
    if pt.p == 0:
        raise ZeroMomentum("p = 0: lambda = infinity (Theta divisor)")
    return pt.q + (P.rho + P.kinf) / pt.p


@dataclass(frozen=True)
class TuClass:
    kind: str                 # "decomposable" | "undecomposable_E0" | "trivial"
    lam: object = None        # projective invariant when defined (INF allowed)


def classify_bundle(L_or_c, t, bundle_case="trivial") -> TuClass:
    """Bundle of the elliptic pull-back per the ruled-surface case analysis.

    `L_or_c` is either a ParabolicData (trivial-bundle case) or a cross-ratio
    value (INF allowed).  `bundle_case` selects the starting surface:
    "trivial" (P1 x P1) or "OminusOplus" (F2); in the latter case pass a
    boolean telling whether all four lines lie on a +2 section.
    """
    if bundle_case == "OminusOplus":
        on_plus2_section = bool(L_or_c)
        return TuClass("trivial" if on_plus2_section else "undecomposable_E0",
                       INF if on_plus2_section else None)

    if isinstance(L_or_c, ParabolicData):
        from .fuchs import coincident_pairs, cross_ratio
        pairs = coincident_pairs(L_or_c)
        if _three_coincide(pairs):
            raise InvalidConfiguration("three parabolic lines coincide")
        if len(pairs) == 2:
            # two coinciding pairs: the X x P1 case, an explicit decomposable
            return TuClass("trivial", INF)
        if len(pairs) == 1:
            return TuClass("undecomposable_E0")
        num, den = cross_ratio(L_or_c)
        c = INF if den == 0 else num / den
    else:
        c = L_or_c
    if c is INF:
        return TuClass("decomposable", t)
    if c == t:
        return TuClass("undecomposable_E0")
    if c == 0 or c == 1:
        # no coincidence report available: value alone cannot split the case
        return TuClass("undecomposable_E0")
    return TuClass("decomposable", tu_from_cross_ratio(c, t))


def _three_coincide(pairs):
    from collections import Counter
    cnt = Counter()
    for a, b in pairs:
        cnt[a] += 1
        cnt[b] += 1
    return any(v >= 2 for v in cnt.values())


def conic_22(c, t):
    """The bidegree (2,2) curve with double contact at the normalized
    parabolic points: w-coefficient list [C(x), B(x), A(x)] of

        F = ((c-t)x - t(c-1)) w^2 + 2(t-1)c x w - c x ((c-1)x - (c-t)).
    """
    if c == 0 or c == 1 or c == t:
        raise DegenerateCrossRatio(f"c={c} degenerate for t={t}")
    A = Poly([-t * (c - 1), c - t])
    B = Poly([0, 2 * (t - 1) * c])
    Cpoly = Poly([0, c * (c - t), -c * (c - 1)])
    return [Cpoly, B, A]
