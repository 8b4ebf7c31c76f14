"""Dictionary between (kappa, t, q, p) and rank-2 trace-free fuchsian systems.

A `FuchsianSystem` stores the residues A0, A1, At of

    dY/dx = (A0/x + A1/(x-1) + At/(x-t)) Y,

trace free, with A_inf := -(A0+A1+At) normalized lower-triangular with
diagonal (theta_inf/2, -theta_inf/2).  The theta-tuple satisfies
theta = (k0, k1, kt, kinf + 1).

The module also carries the scalar and Riccati models of the same object,
the degree-constrained normal form on the first Hirzebruch surface with its
discriminant invariants, local elementary-transformation tables, and the
trace-free "balanced" elementary transformation used to realize Schlesinger
shifts of the exponents as rational gauge transformations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import mat2
from .errors import (
    BoundaryPoint,
    DegenerateEigenline,
    DegenerateNormalization,
    NonEigenline,
    ResonantInfinity,
    QAtInfinity,
    UnstableInput,
)
from .numcore import Poly, RatFun, is_exact
from .pvi import PhasePoint, PviParams, hamiltonian, hamiltonian_field

POLE_LABELS = ("0", "1", "t", "inf")


def _half(*xs):
    return Fraction(1, 2) if all(is_exact(x) for x in xs) else 0.5


def _frac(x):
    return Fraction(x) if is_exact(x) else x


@dataclass(frozen=True)
class FuchsianSystem:
    t: object
    A0: tuple
    A1: tuple
    At: tuple
    theta: tuple  # (theta0, theta1, theta_t, theta_inf)

    @property
    def Ainf(self):
        return mat2.mneg(mat2.madd(mat2.madd(self.A0, self.A1), self.At))

    def residue(self, label):
        return {"0": self.A0, "1": self.A1, "t": self.At, "inf": self.Ainf}[label]

    def pole_position(self, label):
        return {"0": 0, "1": 1, "t": self.t}[label]

    def matrix_at(self, x):
        """B(x) = A0/x + A1/(x-1) + At/(x-t), float evaluation."""
        out = [[0j, 0j], [0j, 0j]]
        for A, a in ((self.A0, 0.0), (self.A1, 1.0), (self.At, complex(self.t))):
            d = x - a
            for i in range(2):
                for j in range(2):
                    out[i][j] += complex(A[i][j]) / d
        return out


def system_from_pq(P: PviParams, pt: PhasePoint) -> FuchsianSystem:
    """Reconstruct the normalized fuchsian system from Darboux coordinates."""
    t, q, p = _frac(pt.t), _frac(pt.q), _frac(pt.p)
    if q == 0 or q == 1 or q == t:
        raise BoundaryPoint(f"q={q} on the boundary set")
    if t == 0 or t == 1:
        raise BoundaryPoint(f"t={t}")
    k0, k1, kt, kinf = (_frac(k) for k in P.kappa)
    rho = _frac(P.rho)
    half = _half(t, q, p, k0)
    theta = (k0, k1, kt, kinf + 1)
    bp = q * (q - 1) * (q - t) * p

    a0 = bp / t - half * k0
    a1 = -bp / (t - 1) - (q - 1) * (rho + kinf) / (t - 1) - half * k1
    at = bp / (t * (t - 1)) + (q - t) * (rho + kinf) / (t - 1) - half * kt
    b0 = -q / t
    b1 = (q - 1) / (t - 1)
    bt = -(q - t) / (t * (t - 1))

    def mk(a, b, th):
        c = (th * th * half * half - a * a) / b
        return ((a, b), (c, -a))

    return FuchsianSystem(t, mk(a0, b0, theta[0]), mk(a1, b1, theta[1]),
                          mk(at, bt, theta[2]), theta)


def pq_from_system(S: FuchsianSystem):
    """(q, p, theta) from a normalized system (inverse of system_from_pq)."""
    t = S.t
    Ainf = S.Ainf
    exact = all(is_exact(x) for A in (S.A0, S.A1, S.At) for row in A for x in row)
    scale = max(abs(complex(x)) for A in (S.A0, S.A1, S.At) for row in A for x in row)
    if (Ainf[0][1] != 0) if exact else (abs(complex(Ainf[0][1])) > 1e-8 * max(scale, 1.0)):
        raise DegenerateNormalization("A_inf is not lower-triangular")
    b0, b1 = S.A0[0][1], S.A1[0][1]
    den = t * b0 + (t - 1) * b1
    if den == 0:
        raise DegenerateNormalization("t*b0 + (t-1)*b1 = 0")
    q = t * b0 / den
    half = _half(t, b0, b1)
    th = S.theta
    p = (S.A0[0][0] + half * th[0]) / q \
        + (S.A1[0][0] + half * th[1]) / (q - 1) \
        + (S.At[0][0] + half * th[2]) / (q - t)
    return q, p, th


@dataclass(frozen=True)
class ParabolicData:
    l0: tuple
    l1: tuple
    lt: tuple
    linf: tuple

    def lines(self):
        return {"0": self.l0, "1": self.l1, "t": self.lt, "inf": self.linf}


def parabolic_lines(P: PviParams, pt: PhasePoint) -> ParabolicData:
    """Eigenlines of the residues for the eigenvalue -theta_i/2, in the
    homogeneous coordinates fixed by the A_inf normalization."""
    t, q, p = _frac(pt.t), _frac(pt.q), _frac(pt.p)
    if q == 0 or q == 1 or q == t or t == 0 or t == 1:
        raise BoundaryPoint("boundary point")
    kinf = _frac(P.kinf)
    rho = _frac(P.rho)
    bp = q * (q - 1) * (q - t) * p
    return ParabolicData(
        l0=(1, bp / q),
        l1=(1, bp / (q - 1) + rho + kinf),
        lt=(1, bp / (q - t) + (rho + kinf) * t),
        linf=(0, 1),
    )


def _pair_det(la, lb):
    return la[1] * lb[0] - lb[1] * la[0]


def coincident_pairs(L: ParabolicData, tol=0):
    """Pairs of labels whose lines coincide projectively."""
    lines = L.lines()
    labels = list(lines)
    out = []
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            d = _pair_det(lines[a], lines[b])
            if (d == 0) if tol == 0 else (abs(complex(d)) <= tol):
                out.append((a, b))
    return out


def cross_ratio(L: ParabolicData):
    """Cross-ratio c = (lt-l0)(l1-linf) / ((l1-l0)(lt-linf)), projectively.

    Returns (num, den); the affine value is num/den, infinity when den = 0.
    Raises NonEigenline-free errors only for the genuinely undefined 0/0
    case, reporting the coincident pair.
    """
    num = _pair_det(L.lt, L.l0) * _pair_det(L.l1, L.linf)
    den = _pair_det(L.l1, L.l0) * _pair_det(L.lt, L.linf)
    if num == 0 and den == 0:
        from .errors import CoincidentLines
        raise CoincidentLines(coincident_pairs(L))
    return num, den


def cross_ratio_value(L: ParabolicData):
    num, den = cross_ratio(L)
    if den == 0:
        return None  # infinity
    return num / den


@dataclass(frozen=True)
class ScalarEquation:
    f: RatFun
    g: RatFun


def scalar_from_pq(P: PviParams, pt: PhasePoint) -> ScalarEquation:
    """Coefficients of u'' + f u' + g u = 0 with the extra apparent point
    at x = q; Res_{x=q} g = p and Res_{x=t} g = -H hold exactly."""
    t, q, p = _frac(pt.t), _frac(pt.q), _frac(pt.p)
    if q == 0 or q == 1 or q == t or t == 0 or t == 1:
        raise BoundaryPoint("boundary point")
    k0, k1, kt, kinf = (_frac(k) for k in P.kappa)
    rho = _frac(P.rho)
    H = hamiltonian(P, PhasePoint(t, q, p))

    def simple(c, a):
        return RatFun(Poly([c]), Poly([-a, 1]))

    f = simple(1 - k0, 0) + simple(1 - k1, 1) + simple(1 - kt, t) - simple(1, q)
    gnum = simple(-t * (t - 1) * H, t) + simple(q * (q - 1) * p, q) \
        + RatFun(Poly([rho * (kinf + rho)]))
    g = gnum / RatFun(Poly([0, -1, 1]))  # divide by x(x-1)
    return ScalarEquation(f, g)


# ---------------------------------------------------------------------------
# Riccati models on the Hirzebruch surfaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RiccatiModel:
    level: str                  # "F2" | "F1" | "F0"
    coeff_y2: RatFun
    coeff_y1: RatFun
    coeff_y0: RatFun
    sing_points: dict           # label -> (x, value) or ("inf", value)


def riccati_model(level: str, P: PviParams, pt: PhasePoint) -> RiccatiModel:
    t, q, p = _frac(pt.t), _frac(pt.q), _frac(pt.p)
    if q == 0 or q == 1 or q == t or t == 0 or t == 1:
        raise BoundaryPoint("boundary point")
    k0, k1, kt, kinf = (_frac(k) for k in P.kappa)
    rho = _frac(P.rho)
    bp = q * (q - 1) * (q - t) * p

    def over(c, a):  # c/(x-a)
        return RatFun(Poly([c]), Poly([-a, 1]))

    if level == "F2":
        H = hamiltonian(P, PhasePoint(t, q, p))
        c2 = RatFun(Poly([-1]), Poly([0, 1]) * Poly([-1, 1]) * Poly([-t, 1]))
        c1 = over(k0, 0) + over(k1, 1) + over(kt, t) + over(1, q)
        c0 = -over(bp, q) + RatFun(Poly([-q * (q - 1) * p + t * (t - 1) * H])) \
            - RatFun(Poly([-t, 1])) * (rho * (kinf + rho))
        sing = {
            "s0": (0, 0), "s0p": (0, t * k0),
            "s1": (1, 0), "s1p": (1, (1 - t) * k1),
            "st": (t, 0), "stp": (t, t * (t - 1) * kt),
            "sq": (q, bp), "sqp": (q, None),
            "sinf": ("inf", -rho), "sinfp": ("inf", -rho - kinf),
        }
        return RiccatiModel("F2", c2, c1, c0, sing)

    # the three quadratic terms shared by F1 and F0:
    #   (alpha*y - bp)(alpha*y - bp + beta) / (gamma * (x - pole)),
    # with a per-term shift of y for F0.
    terms = (
        (q, t * k0, t * q, 0, 1),
        (q - 1, (1 - t) * k1, (t - 1) * (q - 1), 1, -1),
        (q - t, t * (t - 1) * kt, t * (t - 1) * (q - t), t, 1),
    )
    shifts = {"F1": (0, 0, 0), "F0": (0, rho + kinf, t * (kinf + rho))}[level]
    c2 = RatFun(Poly([0]))
    c1 = RatFun(Poly([0]))
    c0 = RatFun(Poly([0]))
    for (alpha, beta, gamma, pole, sign), sh in zip(terms, shifts):
        A = sign * alpha * alpha
        B = sign * alpha * (-2 * bp + beta)
        C = sign * bp * (bp - beta)
        # substitute y -> y - sh
        B2 = B - 2 * A * sh
        C2 = C - B * sh + A * sh * sh
        c2 = c2 + over(A / gamma, pole)
        c1 = c1 + over(B2 / gamma, pole)
        c0 = c0 + over(C2 / gamma, pole)
    if level == "F1":
        c0 = c0 - RatFun(Poly([rho * (kinf + rho)]))
        sing = {
            "s0": (0, bp / q), "s0p": (0, (bp - t * k0) / q),
            "s1": (1, bp / (q - 1)), "s1p": (1, (bp - (1 - t) * k1) / (q - 1)),
            "st": (t, bp / (q - t)), "stp": (t, (bp - t * (t - 1) * kt) / (q - t)),
            "sinf": ("inf", -rho), "sinfp": ("inf", -rho - kinf),
        }
        return RiccatiModel("F1", c2, c1, c0, sing)

    # F0: singular points carry the parabolic structure of the system
    if kinf == -1:
        raise ResonantInfinity("kappa_inf = -1 at level F0")
    sinfp = (-bp * (bp - t * k0) / (t * q * (kinf + 1))
             + bp * (bp - (1 - t) * k1) / ((t - 1) * (q - 1) * (kinf + 1))
             - bp * (bp - t * (t - 1) * kt) / (t * (t - 1) * (q - t) * (kinf + 1))
             - (kinf + rho) / (kinf + 1)
             * ((kinf + rho) * (q - t - 1) - k1 - t * kt))
    sing = {
        "s0": (0, bp / q),
        "s1": (1, bp / (q - 1) + rho + kinf),
        "st": (t, bp / (q - t) + (rho + kinf) * t),
        "sinf": ("inf", None),
        "s0p": (0, (bp - t * k0) / q),
        "s1p": (1, (bp - (1 - t) * k1) / (q - 1) + rho + kinf),
        "stp": (t, (bp - t * (t - 1) * kt) / (q - t) + (rho + kinf) * t),
        "sinfp": ("inf", sinfp),
    }
    return RiccatiModel("F0", c2, c1, c0, sing)


@dataclass(frozen=True)
class NormalFormF1:
    q: object
    b0: object
    c0: object
    c1: object
    ct: object
    cinf: object

    def deltas(self, t):
        d0 = (self.b0 ** 2 + 4 * self.q * self.c0) / t ** 2
        d1 = (self.b0 ** 2 + 4 * (self.q - 1) * self.c1) / (t - 1) ** 2
        dt = (self.b0 ** 2 + 4 * (self.q - t) * self.ct) / (t ** 2 * (t - 1) ** 2)
        dinf = 1 - 4 * self.cinf
        return d0, d1, dt, dinf


def riccati_normal_form(model, t) -> NormalFormF1:
    """Unique normal form of a degree-constrained Riccati on F1 under the
    bundle automorphisms y -> a*y + b*x + c.

    `model` is a RiccatiModel of level F1 or a (coeff_y2, coeff_y1, coeff_y0)
    triple of RatFun over x with poles among {0, 1, t}.
    """
    if isinstance(model, RiccatiModel):
        c2, c1, c0 = model.coeff_y2, model.coeff_y1, model.coeff_y0
    else:
        c2, c1, c0 = model
    D = Poly([0, 1]) * Poly([-1, 1]) * Poly([-t, 1])

    def numerator_over_D(r, max_deg):
        prod = r * RatFun(D)
        num, rem = prod.num.divmod(prod.den)
        if not rem.is_zero() or num.degree > max_deg:
            raise UnstableInput("coefficient is not of the constrained degree")
        return num

    N2 = numerator_over_D(c2, 1)
    if N2.is_zero():
        raise UnstableInput("negative section is invariant (y^2 term vanishes)")
    if N2.degree < 1:
        raise QAtInfinity("tangency at x = infinity: alternate chart not computed")
    a1 = N2.c[1]
    q = -N2.c[0] / a1

    # y := y/a1 makes the y^2 numerator monic: (x - q)
    c2n = c2 * (1 / _frac(a1) if is_exact(a1) else 1.0 / a1)
    c1n = c1
    c0n = c0 * a1

    # y := y - (b*x + c) kills the x^2 and x coefficients of the y-numerator
    N1 = numerator_over_D(c1n, 2)
    B2, B1, B0 = (N1.c[2] if N1.degree >= 2 else 0,
                  N1.c[1] if N1.degree >= 1 else 0,
                  N1.c[0] if N1.degree >= 0 else 0)
    half = _half(B2, B1, q)
    b = half * B2
    c = half * B1 + q * b
    u = Poly([c, b])
    b0 = B0 + 2 * q * c

    c0f = c0n - c1n * RatFun(u) + c2n * RatFun(u * u) + RatFun(u.deriv())
    quo, rem = c0f.num.divmod(c0f.den)
    if quo.degree > 0:
        raise UnstableInput("constant term not of the constrained degree")
    cinf = quo.c[0] if not quo.is_zero() else 0
    proper = RatFun(rem, c0f.den)
    r0 = proper.residue_at(0)
    r1 = proper.residue_at(1)
    rt = proper.residue_at(t)
    return NormalFormF1(q, b0, t * r0, (1 - t) * r1, t * (t - 1) * rt, cinf)


# ---------------------------------------------------------------------------
# local elementary transformations (the eigenvalue-shift tables)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagonalLocal:
    """Residue eigenvalue data at a logarithmic (or regular) point; the
    distinguished line carries `theta2`, the other eigenvalue is `theta1`."""
    theta1: object
    theta2: object


@dataclass(frozen=True)
class JordanLocal:
    """Poincare-Dulac resonant model with off-diagonal monomial x^n."""
    kind: str      # "upper" | "lower"
    theta: object
    n: int


def elm_local(A, l=None, sign=+1):
    """Apply elm^+/elm^- at a point with parabolic line l.

    `A` is a constant 2x2 residue matrix (l must be one of its eigenlines; a
    regular point is the zero matrix with any l), or a DiagonalLocal /
    JordanLocal model.  Returns the transformed local model; for matrix
    input the result is a DiagonalLocal whose new distinguished line carries
    the untouched eigenvalue theta1.
    """
    if isinstance(A, DiagonalLocal):
        if sign > 0:
            return DiagonalLocal(A.theta1, A.theta2 + 1)
        return DiagonalLocal(A.theta1 - 1, A.theta2)
    if isinstance(A, JordanLocal):
        if A.kind == "upper":
            if A.n < 1:
                raise NonEigenline("upper resonant model needs n > 0")
            if sign > 0:
                return JordanLocal("upper", A.theta + 1, A.n - 1)
            return JordanLocal("upper", A.theta, A.n - 1)
        if sign > 0:
            return JordanLocal("lower", A.theta, A.n + 1)
        return JordanLocal("lower", A.theta - 1, A.n + 1)

    if mat2.mis_zero(A):
        return DiagonalLocal(0, 1) if sign > 0 else DiagonalLocal(-1, 0)
    if l is None:
        raise NonEigenline("a parabolic line is required at a pole")
    Av = mat2.mvec(A, l)
    cross = Av[0] * l[1] - Av[1] * l[0]
    exact = all(is_exact(x) for x in (*l, *A[0], *A[1]))
    if (cross != 0) if exact else (abs(complex(cross)) > 1e-9):
        raise NonEigenline("line is not an eigenline: pole order would grow")
    theta2 = Av[0] / l[0] if l[0] != 0 else Av[1] / l[1]
    theta1 = mat2.mtrace(A) - theta2
    return elm_local(DiagonalLocal(theta1, theta2), sign=sign)


def lame_accessory(lam, v, t):
    """Accessory parameter of the Lame equation in Legendre form, n = v/2."""
    half = _half(lam, v, t)
    return 2 * lam * (v - 1) + (t + 1) * (half * v) * (half * v - 1)


def q_ode_residual(P: PviParams, traj, measured=False) -> float:
    """Isomonodromy check through the q-equation of the fuchsian system.

    dq/dt is taken from the flow field (the exact slope of a genuine flow
    trajectory); with `measured` it is estimated from the samples instead,
    which turns the residual into a detector for non-solutions."""
    samples = list(traj.samples)
    slopes = []
    if measured and len(samples) > 1:
        for i, pt in enumerate(samples):
            j0 = max(0, i - 1)
            j1 = min(len(samples) - 1, i + 1)
            dt = complex(samples[j1].t) - complex(samples[j0].t)
            slopes.append((complex(samples[j1].q) - complex(samples[j0].q)) / dt)
    else:
        for pt in samples:
            qd, _ = hamiltonian_field(P, pt)
            slopes.append(qd)
    worst = 0.0
    for pt, qd in zip(samples, slopes):
        t, q = pt.t, pt.q
        S = system_from_pq(P, pt)
        a0, a1 = S.A0[0][0], S.A1[0][0]
        thinf = S.theta[3]
        rhs = -2 * a0 * (q - 1) / (t - 1) - 2 * a1 * q / t \
            + (1 - thinf) * q * (q - 1) / (t * (t - 1))
        worst = max(worst, abs(complex(qd) - complex(rhs)))
    return worst


# ---------------------------------------------------------------------------
# balanced (trace-free, determinant-neutral) elementary transformation steps
# ---------------------------------------------------------------------------

def elm_unit_step(S: FuchsianSystem, label: str, d_finite: int, d_inf: int,
                  parabolic=None) -> FuchsianSystem:
    """One Schlesinger unit: shift theta at a finite pole by -d_finite and at
    infinity by -d_inf, through a single rational gauge transformation that
    keeps the system fuchsian and trace-free.

    The gauge is conjugation by C = [l | w] followed by the ramified factor
    diag((x-a)^(-1/2), (x-a)^(1/2)); the half-integer scalar twist cancels
    inside the composed action, which is rational.  `l` is the eigenline of
    the residue at the pole (eigenvalue -theta/2 for d_finite=+1, +theta/2
    for -1) and `w` the eigenvector of A_inf (eigenvalue -theta_inf/2 for
    d_inf=+1, +theta_inf/2 for -1).
    """
    if d_finite not in (1, -1) or d_inf not in (1, -1):
        raise ValueError("unit step directions must be +1 or -1")
    a = S.pole_position(label)
    idx = {"0": 0, "1": 1, "t": 2}[label]
    th = list(S.theta)
    A_a = S.residue(label)
    half = _half(*(x for row in A_a for x in row))

    def eigvec(M, lam, fallback):
        shifted = ((M[0][0] - lam, M[0][1]), (M[1][0], M[1][1] - lam))
        if mat2.mis_zero(shifted):
            if fallback is not None:
                return fallback
            raise DegenerateEigenline(
                "eigenline ambiguous (zero residue): supply a parabolic choice")
        return mat2.kernel_vector(shifted)

    lam_a = -half * th[idx] if d_finite == 1 else half * th[idx]
    l = eigvec(A_a, lam_a, None if parabolic is None else parabolic.get(label))
    Ainf = S.Ainf
    lam_inf = -half * th[3] if d_inf == 1 else half * th[3]
    w = eigvec(Ainf, lam_inf, None if parabolic is None else parabolic.get("inf"))

    d = l[0] * w[1] - l[1] * w[0]
    if d == 0:
        raise DegenerateEigenline("pole eigenline meets the infinity eigenvector")
    w = (w[0] / d, w[1] / d)
    C = mat2.columns(l, w)
    Cinv = ((w[1], -w[0]), (-l[1], l[0]))

    poles = [("0", 0), ("1", 1), ("t", S.t)]
    M = {lab: mat2.mmul(Cinv, mat2.mmul(S.residue(lab), C)) for lab, _ in poles}

    s21 = sum(M[lab][1][0] / (pos - a) for lab, pos in poles if lab != label)
    new = {}
    for lab, pos in poles:
        if lab == label:
            new[lab] = ((M[lab][0][0] + half, 0),
                        (-s21, M[lab][1][1] - half))
        else:
            new[lab] = ((M[lab][0][0], M[lab][0][1] * (pos - a)),
                        (M[lab][1][0] / (pos - a), M[lab][1][1]))
    back = {lab: mat2.mmul(C, mat2.mmul(new[lab], Cinv)) for lab, _ in poles}
    th[idx] -= d_finite
    th[3] -= d_inf
    return FuchsianSystem(S.t, back["0"], back["1"], back["t"], tuple(th))


def normalize_infinity(S: FuchsianSystem) -> FuchsianSystem:
    """Constant SL2 conjugation bringing A_inf to lower-triangular form with
    diagonal (theta_inf/2, -theta_inf/2)."""
    Ainf = S.Ainf
    thinf = S.theta[3]
    half = _half(thinf, *(x for row in Ainf for x in row))
    if mat2.mis_zero(Ainf):
        raise DegenerateNormalization("A_inf = 0: regular at infinity")
    if thinf == 0:
        k2 = mat2.kernel_vector(Ainf)
        k1 = (1, 0) if k2[1] != 0 else (0, 1)
        d = k1[0] * k2[1] - k1[1] * k2[0]
        k1 = (k1[0] / d, k1[1] / d)
    else:
        k1 = mat2.eigenline(Ainf, half * thinf)
        k2 = mat2.eigenline(Ainf, -half * thinf)
        d = k1[0] * k2[1] - k1[1] * k2[0]
        if d == 0:
            raise DegenerateNormalization("A_inf not diagonalizable")
        k2 = (k2[0] / d, k2[1] / d)
    K = mat2.columns(k1, k2)
    Kinv = mat2.minv(K)
    conj = lambda A: mat2.mmul(Kinv, mat2.mmul(A, K))
    return FuchsianSystem(S.t, conj(S.A0), conj(S.A1), conj(S.At), S.theta)
