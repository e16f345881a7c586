"""High-precision solutions of the Falkner-Skan boundary-layer equation.

The solver expands ``f`` in Taylor series generated by recurrence, sums
each series with the Wynn epsilon algorithm, restarts the series at every
grid point (analytical continuation), and shoots on the wall shear
``alpha = f''(0)`` until ``f'`` tends to one.

>>> from falkner_skan import FlowParams, solve_alpha
>>> round(solve_alpha(FlowParams(1.0, 0.0), tol=1e-10).alpha, 9)
0.469599988
"""

from .accel import AccelResult, EpsilonTableau, NonConvergence, StateTriple, accelerated_triple, epsilon_limit
from .continuation import (
    Classification,
    NoPlateau,
    SolverConfig,
    StepFailure,
    Trajectory,
    displacement_limit,
    evaluate_at,
    march,
    residual_scan,
)
from .reference import load_reference, sweep, verify
from .series import CoeffBlock, FlowParams, InitialTriple, coefficients, partial_sums, third_derivative_sum
from .shooting import (
    BETA_MIN,
    Branch,
    BracketFailure,
    MaxIterations,
    NotReached,
    ShootResult,
    Verdict,
    bracket,
    classify,
    eta_infinity,
    solve_alpha,
)
from .tiers import EXTENDED, STANDARD, Tier, get_tier

__all__ = [
    "AccelResult",
    "EpsilonTableau",
    "NonConvergence",
    "StateTriple",
    "accelerated_triple",
    "epsilon_limit",
    "Classification",
    "NoPlateau",
    "SolverConfig",
    "StepFailure",
    "Trajectory",
    "displacement_limit",
    "evaluate_at",
    "march",
    "residual_scan",
    "load_reference",
    "sweep",
    "verify",
    "CoeffBlock",
    "FlowParams",
    "InitialTriple",
    "coefficients",
    "partial_sums",
    "third_derivative_sum",
    "BETA_MIN",
    "Branch",
    "BracketFailure",
    "MaxIterations",
    "NotReached",
    "ShootResult",
    "Verdict",
    "bracket",
    "classify",
    "eta_infinity",
    "solve_alpha",
    "EXTENDED",
    "STANDARD",
    "Tier",
    "get_tier",
]

__version__ = "0.1.0"
