"""Painleve VI Hamiltonian flows, rank-2 fuchsian systems and their
monodromy, Okamoto symmetries, and the exact elliptic pull-back to Lame
connections with the Tu bundle invariant."""

from .numcore import OdeConfig, PlanePath, Poly, RatFun, integrate_path
from .pvi import (PhasePoint, PviParams, Trajectory, flow, flow_with_detours,
                  hamiltonian, hamiltonian_field, make_params, p_from_slope,
                  pvi_residual, pvi_rhs)
from .fuchs import (FuchsianSystem, ParabolicData, cross_ratio,
                    parabolic_lines, pq_from_system, system_from_pq)
from .okamoto import apply_word, parse_word
from .monodromy import (FrickeTriple, MonodromyQuadruple, fricke,
                        monodromy_quadruple, pullback_rep, transport)
from .elliptic import HalfPeriods, PicardSeed, half_periods, picard_solution
from .lamecurve import (CurveConnection, CurveElement, TuClass, lame_pullback,
                        tu_from_cross_ratio, tu_from_pq)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
