"""Tiny 2x2 matrix algebra over generic scalars (Fraction or complex).

Matrices are tuples of row tuples ((a, b), (c, d)); vectors are pairs.
numpy is deliberately not used here so that exact rational entries survive
every operation.
"""

from .errors import DegenerateEigenline, DivisionByZero

ZERO = ((0, 0), (0, 0))
IDENT = ((1, 0), (0, 1))


def madd(A, B):
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def msub(A, B):
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mneg(A):
    return tuple(tuple(-a for a in row) for row in A)


def mscale(s, A):
    return tuple(tuple(s * a for a in row) for row in A)


def mmul(A, B):
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def mvec(A, v):
    return (A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1])


def mtrace(A):
    return A[0][0] + A[1][1]


def mdet(A):
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def minv(A):
    d = mdet(A)
    if d == 0:
        raise DivisionByZero("singular 2x2 matrix")
    if isinstance(d, int):
        from fractions import Fraction
        d = Fraction(d)
    return ((A[1][1] / d, -A[0][1] / d), (-A[1][0] / d, A[0][0] / d))


def mis_zero(A, tol=0):
    if tol == 0:
        return all(a == 0 for row in A for a in row)
    return all(abs(complex(a)) <= tol for row in A for a in row)


def kernel_vector(M, tol=0):
    """A nonzero kernel vector of a singular 2x2 matrix."""
    rows_zero = mis_zero(M, tol)
    if rows_zero:
        raise DegenerateEigenline("zero matrix: every line is an eigenline")
    a, b = M[0]
    c, d = M[1]
    if tol == 0:
        if a != 0 or b != 0:
            return (b, -a)
        return (d, -c)
    if max(abs(complex(a)), abs(complex(b))) >= max(abs(complex(c)), abs(complex(d))):
        return (b, -a)
    return (d, -c)


def eigenline(A, eigenvalue, tol=0):
    """Eigenline of A for the given eigenvalue, as a projective pair."""
    M = ((A[0][0] - eigenvalue, A[0][1]), (A[1][0], A[1][1] - eigenvalue))
    return kernel_vector(M, tol)


def columns(v1, v2):
    return ((v1[0], v2[0]), (v1[1], v2[1]))
