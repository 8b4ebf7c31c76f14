"""Numerical monodromy of fuchsian systems and SL2 trace coordinates.

Loop convention (frozen for reproducibility): base point x* = -i*max(1,|t|);
the lasso for a finite pole goes straight toward it, traverses a regular
32-gon of radius min(0.1, half the distance to the nearest other pole)
counterclockwise, and returns.  Lassos are first built in the angular order
seen from the base point (which makes their ordered product the boundary
loop) and then Hurwitz braid moves re-order the quadruple so that the
presentation relation reads

    Minf * Mt * M1 * M0 = Id.

Fricke coordinates (a, b, c) = (tr A, tr B, tr AB) for the once-punctured
torus, the normal-form pair, the explicit trace-zero involution matrix, and
the pull-back/descent dictionary A = M0 M1, B = M1 Mt live here too.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInvolution, LoopTooClose
from .fuchs import FuchsianSystem
from .numcore import OdeConfig, PlanePath, integrate_path, is_exact, poly_roots2

NGON = 32


def transport(S: FuchsianSystem, loop: PlanePath, cfg: OdeConfig = None) -> np.ndarray:
    """Fundamental-matrix transport Y' = (A0/x + A1/(x-1) + At/(x-t)) Y
    around a closed loop, Y(start) = Id."""
    if cfg is None:
        cfg = OdeConfig(rel_tol=1e-11, abs_tol=1e-13)
    if abs(loop.start - loop.end) > 1e-12:
        raise ValueError("loop must be closed")
    poles = (0.0, 1.0, complex(S.t))
    for w in loop.waypoints:
        if min(abs(w - p) for p in poles) < 1e-3 - 1e-12:
            raise LoopTooClose(f"waypoint {w} too close to a pole")
    A = [np.array([[complex(S.residue(lab)[i][j]) for j in range(2)]
                   for i in range(2)]) for lab in ("0", "1", "t")]

    def field(x, y):
        Y = y.reshape(2, 2)
        B = A[0] / x + A[1] / (x - 1) + A[2] / (x - poles[2])
        return (B @ Y).reshape(4)

    res = integrate_path(field, np.eye(2, dtype=complex).reshape(4), loop, cfg)
    return res.final_state.reshape(2, 2)


def _lasso(base, pole, others):
    d = min(abs(pole - o) for o in others)
    r = min(0.1, d / 2)
    u = (pole - base) / abs(pole - base)
    approach = pole - r * u
    pts = [base, approach]
    ang0 = cmath.phase(approach - pole)
    for k in range(1, NGON + 1):
        pts.append(pole + r * cmath.exp(1j * (ang0 + 2 * math.pi * k / NGON)))
    pts.append(base)
    return PlanePath(pts)


@dataclass(frozen=True)
class MonodromyQuadruple:
    M0: np.ndarray
    M1: np.ndarray
    Mt: np.ndarray
    Minf: np.ndarray
    base_point: complex
    loop_convention: str = "straight-lasso-32gon, relation Minf*Mt*M1*M0=Id"

    def matrices(self):
        return {"0": self.M0, "1": self.M1, "t": self.Mt, "inf": self.Minf}


def monodromy_quadruple(S: FuchsianSystem, base=None, cfg=None) -> MonodromyQuadruple:
    t = complex(S.t)
    if base is None:
        base = -1j * max(1.0, abs(t))
    poles = {"0": 0.0, "1": 1.0, "t": t}
    # angular order, counterclockwise as seen from the base point, makes the
    # ordered product of the lassos the boundary of a disk containing all poles
    order = sorted(poles, key=lambda k: cmath.phase(poles[k] - base))
    N = {}
    for lab in order:
        others = [poles[o] for o in poles if o != lab]
        M = transport(S, _lasso(base, poles[lab], others), cfg)
        # the system is trace free, so det = 1 exactly; project the drift out
        N[lab] = M / np.sqrt(np.linalg.det(M))
    # product N[order[2]] @ N[order[1]] @ N[order[0]] is the full circuit
    # (first-to-last composition); braid the labels into the (0, 1, t) slots.
    M = _braid_to_order(N, order, ("0", "1", "t"))
    Minf = np.linalg.inv(M["t"] @ M["1"] @ M["0"])
    return MonodromyQuadruple(M["0"], M["1"], M["t"], Minf, base)


def _braid_to_order(N, order, target):
    """Hurwitz moves turning the relation prod(reversed(order)) into
    prod(reversed(target)) while keeping each matrix a conjugate of the loop
    around its own pole."""
    seq = list(order)
    mats = [N[lab] for lab in seq]
    # bubble the sequence into target order; adjacent swap (..., X_i, X_{i+1}, ...)
    # with words composed first-to-last uses X_i' = X_i X_{i+1} X_i^{-1}:
    # (X_i X_{i+1}) = (X_i X_{i+1} X_i^{-1}) X_i  as path words.
    want = list(target)
    for i in range(len(want)):
        j = seq.index(want[i])
        while j > i:
            a, b = mats[j - 1], mats[j]
            # adjacent swap keeping the ordered product: with path words
            # composed first-to-last, (a then b) = (a^-1 b a  then  a)
            mats[j - 1], mats[j] = np.linalg.inv(a) @ b @ a, a
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            j -= 1
    return dict(zip(seq, mats))


def isomonodromy_traces(Q: MonodromyQuadruple):
    """The six trace coordinates constant under isomonodromic deformation."""
    M0, M1, Mt = Q.M0, Q.M1, Q.Mt
    return (np.trace(M0), np.trace(M1), np.trace(Mt),
            np.trace(M0 @ M1), np.trace(M1 @ Mt), np.trace(M0 @ Mt))


def pullback_rep(Q: MonodromyQuadruple):
    """Monodromy (A, B) = (M0 M1, M1 Mt) of the elliptic pull-back."""
    return Q.M0 @ Q.M1, Q.M1 @ Q.Mt


@dataclass(frozen=True)
class FrickeTriple:
    a: complex
    b: complex
    c: complex

    @property
    def d(self):
        return self.a ** 2 + self.b ** 2 + self.c ** 2 - self.a * self.b * self.c - 2


def fricke(A, B) -> FrickeTriple:
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    return FrickeTriple(np.trace(A), np.trace(B), np.trace(A @ B))


def fricke_exact(A, B) -> FrickeTriple:
    """Trace coordinates without complex coercion (for exact matrices)."""
    a = A[0][0] + A[1][1]
    b = B[0][0] + B[1][1]
    c = (A[0][0] * B[0][0] + A[0][1] * B[1][0]
         + A[1][0] * B[0][1] + A[1][1] * B[1][1])
    return FrickeTriple(a, b, c)


def normal_form_from_fricke(a, b, c, gamma_choice="plus"):
    """Representative (A, B) of the conjugacy class with trace data (a,b,c):
    A = [[a,-1],[1,0]], B = [[0,1/gamma],[-gamma,b]], gamma + 1/gamma = c."""
    g1, g2 = poly_roots2(1, -c, 1)
    gamma = g1 if gamma_choice == "plus" else g2
    A = ((a, -1), (1, 0))
    B = ((0, 1 / gamma), (-gamma, b))
    return A, B, gamma


def involution_matrix(a, b, gamma, normalize=True):
    """The trace-zero matrix conjugating the normal form (A, B) to their
    inverses; rescaled by 1/sqrt(det) so that M^2 = -Id when requested."""
    m00 = (gamma * gamma - 1) / (2 * gamma)
    m01 = (a - b * gamma) / (2 * gamma)
    m10 = (a * gamma - b) / 2
    M = ((m00, m01), (m10, -m00))
    if not normalize:
        return M
    det = -m00 * m00 - m01 * m10
    if det == 0:
        raise InvalidInvolution("involution matrix is singular")
    if is_exact(det):
        from .numcore import rational_sqrt
        r = rational_sqrt(det)
        s = r if r is not None else cmath.sqrt(complex(det))
    else:
        s = cmath.sqrt(complex(det))
    return ((m00 / s, m01 / s), (m10 / s, -m00 / s))


def descend_rep(A, B, M):
    """Quadruple (M0, M1, Mt, Minf) = (-AM, M, -MB, B^-1 M A^-1) whose
    elliptic pull-back is (A, B).  Requires M^2 = -Id.

    When M conjugates (A, B) to their inverses, the output satisfies
    M0 M1 Mt Minf = Id (generators marked in the opposite cyclic order from
    the transport convention) and (M0)^2 = (M1)^2 = (Mt)^2 = -Id."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    M = np.asarray(M, dtype=complex)
    if np.max(np.abs(M @ M + np.eye(2))) > 1e-7:
        raise InvalidInvolution("M^2 != -Id")
    M0 = -A @ M
    M1 = M
    Mt = -M @ B
    Minf = np.linalg.inv(B) @ M @ np.linalg.inv(A)
    return MonodromyQuadruple(M0, M1, Mt, Minf, base_point=0j,
                              loop_convention="descent of a sigma-invariant pair")


S2_SINGULAR = ((2, 2, 2), (2, -2, -2), (-2, 2, -2), (-2, -2, 2))


@dataclass(frozen=True)
class RepClassification:
    reducible: bool
    surface_label: str
    singular_point: bool


def classify_representation(F: FrickeTriple, tol=1e-9) -> RepClassification:
    d = F.d
    exact = all(is_exact(v) for v in (F.a, F.b, F.c))
    red = (d == 2) if exact else (abs(complex(d) - 2) < tol)

    def near(u, v):
        return (u == v) if exact else (abs(complex(u) - complex(v)) < tol)

    singular = False
    if near(d, -2) and all(near(v, 0) for v in (F.a, F.b, F.c)):
        singular = True
    if near(d, 2):
        for s in S2_SINGULAR:
            if all(near(v, sv) for v, sv in zip((F.a, F.b, F.c), s)):
                singular = True
    label = f"S_{complex(d).real:g}" if not exact else f"S_{d}"
    return RepClassification(red, label, singular)
