"""Exception hierarchy shared by all modules.

Two broad families matter to callers (and to the CLI exit codes):
`NumericalError` for failures of a numeric process (step limits, blowups,
non-convergence) and `DomainError` for inputs off the admissible set
(boundary points, degenerate configurations).
"""


class PviLameError(Exception):
    pass


class NumericalError(PviLameError):
    pass


class DomainError(PviLameError):
    pass


# --- numcore ---------------------------------------------------------------

class DivisionByZero(DomainError):
    pass


class PoleEvaluation(DomainError):
    pass


class NotQuadratic(DomainError):
    pass


class DegenerateLeadingCoefficient(DomainError):
    pass


class StepLimitExceeded(NumericalError):
    pass


class BlowupDetected(NumericalError):
    """Raised when a state component exceeds the blowup threshold.

    Carries the last path point that was reached with a finite state, so the
    caller can deform the path around the suspected pole.
    """

    def __init__(self, last_good, message="state blew up"):
        super().__init__(f"{message} (last good point {last_good})")
        self.last_good = last_good


# --- elliptic --------------------------------------------------------------

class NonConvergence(NumericalError):
    pass


class DegenerateCurve(DomainError):
    pass


class LatticePoint(DomainError):
    pass


class AtInfinity(DomainError):
    pass


# --- pvi / okamoto / fuchs -------------------------------------------------

class BoundaryPoint(DomainError):
    pass


class ZeroMomentum(DomainError):
    pass


class DegenerateEigenline(DomainError):
    pass


class DegenerateNormalization(DomainError):
    pass


class CoincidentLines(DomainError):
    def __init__(self, pair, message="parabolic lines coincide"):
        super().__init__(f"{message}: {pair}")
        self.pair = pair


class QAtInfinity(DomainError):
    pass


class UnstableInput(DomainError):
    pass


class ResonantInfinity(DomainError):
    pass


class NonEigenline(DomainError):
    pass


# --- monodromy -------------------------------------------------------------

class LoopTooClose(DomainError):
    pass


class InvalidInvolution(DomainError):
    pass


# --- lamecurve -------------------------------------------------------------

class ZeroDivisor(DomainError):
    pass


class UnsupportedPoint(DomainError):
    pass


class NotLameSpecial(DomainError):
    pass


class InvalidConfiguration(DomainError):
    pass


class DegenerateCrossRatio(DomainError):
    pass


class ExactModeRequired(DomainError):
    pass
