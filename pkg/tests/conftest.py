import random
from fractions import Fraction

import pytest


@pytest.fixture
def rng():
    return random.Random(20240613)


def rational(rng, lo=-8, hi=8, den=9, exclude=()):
    """Random nonzero-ish rational avoiding the given values."""
    while True:
        v = Fraction(rng.randint(lo, hi), rng.randint(1, den))
        if v not in exclude:
            return v


def rational_phase_point(rng):
    """(t, q, p) rational, off the boundary set, p != 0."""
    from pvilame.pvi import PhasePoint
    while True:
        t = rational(rng, exclude=(0, 1))
        q = rational(rng, exclude=(0, 1))
        p = rational(rng, exclude=(0,))
        if q != t:
            return PhasePoint(t, q, p)


def rational_kappa(rng):
    return tuple(rational(rng, -6, 6, 7) for _ in range(4))
