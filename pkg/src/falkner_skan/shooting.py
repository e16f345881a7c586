"""Shooting for the wall shear ``alpha = f''(0)``.

Trajectories are sorted into *too high* (the velocity overshoots unity) and
*too low* (it peaks below unity, or creeps toward a far-field value below
unity).  The root is bracketed, narrowed by bisection, and finished with a
safeguarded secant step on ``f'(eta_c) - 1``.

On the reverse branch the overshooting side lies at more negative angles,
so ``alpha_high`` of a reverse bracket is numerically smaller than
``alpha_low``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .continuation import (
    Classification,
    SolverConfig,
    StepFailure,
    Trajectory,
    evaluate_at,
    march,
)
from .series import FlowParams
from .tiers import Tier

__all__ = [
    "Branch",
    "Verdict",
    "ShootResult",
    "BracketFailure",
    "MaxIterations",
    "NotReached",
    "classify",
    "bracket",
    "solve_alpha",
    "eta_infinity",
    "default_alpha_init",
    "BETA_MIN",
]

BETA_MIN = -0.198837735
ETA_INF_RESOLUTION = 0.01


class Branch(str, enum.Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


class Verdict(str, enum.Enum):
    TOO_HIGH = "too_high"
    TOO_LOW = "too_low"
    UNDECIDED = "undecided"


class BracketFailure(ArithmeticError):
    pass


class MaxIterations(ArithmeticError):
    pass


class NotReached(ArithmeticError):
    pass


@dataclass(frozen=True)
class ShootResult:
    alpha: object
    iterations: int
    tol_achieved: float
    eta_inf: tuple | None
    branch: Branch
    tier: Tier
    params: FlowParams | None = None


def classify(traj: Trajectory) -> Verdict:
    if traj.classification is Classification.OVERSHOOT:
        return Verdict.TOO_HIGH
    if traj.classification is Classification.UNDERSHOOT:
        return Verdict.TOO_LOW
    return Verdict.UNDECIDED


def default_alpha_init(params: FlowParams, branch: Branch) -> float:
    if branch is Branch.REVERSE:
        return -1e-2
    return 2.0 * math.sqrt(1.0 + abs(float(params.beta)))


class _Shooter:
    """Runs marches for one (params, branch, cfg) and keeps the bookkeeping."""

    def __init__(self, params: FlowParams, branch: Branch, cfg: SolverConfig):
        self.params = params
        self.branch = branch
        self.cfg = cfg.resolved(params)
        self.tier = self.cfg.tier
        self.marches = 0

    def side(self, alpha):
        """Return ``(verdict, residual)`` with Undecided resolved by the far-field sign."""
        self.marches += 1
        try:
            traj = march(self.params, alpha, self.cfg)
        except StepFailure:
            # a blow-up only happens far out on the overshooting side
            return Verdict.TOO_HIGH, math.inf
        v = classify(traj)
        r = traj.last.fp - 1
        if v is Verdict.UNDECIDED:
            v = Verdict.TOO_HIGH if r > 0 else Verdict.TOO_LOW
        return v, r


def bracket(params: FlowParams, branch: Branch, alpha_init=None, cfg: SolverConfig | None = None, *, _shooter=None):
    """Find ``(alpha_low, alpha_high)`` straddling the far-field condition.

    Forward: from ``alpha_init`` double while too low, halve while too high.
    Reverse: step from ``alpha_init`` (near ``0-``) toward more negative
    values, doubling, until the trajectory overshoots; a start that already
    overshoots is halved toward zero instead.

    Raises
    ------
    BracketFailure
        No sign change within the search caps.
    """
    branch = Branch(branch)
    cfg = cfg or SolverConfig()
    sh = _shooter or _Shooter(params, branch, cfg)
    if branch is Branch.REVERSE and params.beta >= 0:
        raise ValueError("the reverse branch exists only for beta < 0")
    if alpha_init is None:
        alpha_init = default_alpha_init(params, branch)
    tier = sh.tier
    with tier.context():
        a = tier.num(alpha_init)
        if branch is Branch.FORWARD:
            if not a > 0:
                raise ValueError("forward shooting needs alpha_init > 0")
            v, r = sh.side(a)
            lo = hi = None
            lo_r = hi_r = None
            if v is Verdict.TOO_LOW:
                lo, lo_r = a, r
                for _ in range(60):
                    a = a * 2
                    v, r = sh.side(a)
                    if v is Verdict.TOO_HIGH:
                        hi, hi_r = a, r
                        break
                    lo, lo_r = a, r
            else:
                hi, hi_r = a, r
                # halving toward zero: 2**-60 of alpha_init is far below any physical root
                for _ in range(60):
                    a = a / 2
                    v, r = sh.side(a)
                    if v is Verdict.TOO_LOW:
                        lo, lo_r = a, r
                        break
                    hi, hi_r = a, r
        else:
            if not a < 0:
                raise ValueError("reverse shooting needs alpha_init < 0")
            v, r = sh.side(a)
            lo = hi = lo_r = hi_r = None
            if v is Verdict.TOO_LOW:
                lo, lo_r = a, r
                for _ in range(60):
                    a = a * 2
                    v, r = sh.side(a)
                    if v is Verdict.TOO_HIGH:
                        hi, hi_r = a, r
                        break
                    lo, lo_r = a, r
            else:
                # near beta_min the reverse root sits closer to zero than the default start
                hi, hi_r = a, r
                for _ in range(60):
                    a = a / 2
                    v, r = sh.side(a)
                    if v is Verdict.TOO_LOW:
                        lo, lo_r = a, r
                        break
                    hi, hi_r = a, r
        if lo is None or hi is None:
            raise BracketFailure(
                f"no bracket for beta0={params.beta0}, beta={params.beta} on the {branch.value} branch"
            )
    if _shooter is not None:
        return lo, hi, lo_r, hi_r
    return lo, hi


def solve_alpha(
    params: FlowParams,
    branch: Branch = Branch.FORWARD,
    tol: float = 1e-12,
    cfg: SolverConfig | None = None,
    *,
    alpha_init=None,
    max_iterations: int = 200,
    tau_inf: float | None = None,
    on_step=None,
) -> ShootResult:
    """Shooting angle ``f''(0)`` that sends ``f'`` to unity.

    Bisection narrows the bracket until it is within ``10 * tol`` (relative
    to ``max(1, |alpha|)``); secant steps on ``r(alpha) = f'(eta_c) - 1``
    then finish it, falling back to bisection whenever a secant iterate
    leaves the bracket or fails to halve it.  The run stops when the
    bracket is narrower than ``tol * max(1, |alpha|)`` or ``r`` is exactly
    zero.  A small but nonzero ``r`` is not accepted as convergence: near
    ``beta_min`` the far-field mismatch is almost flat in ``alpha`` and
    stopping on it leaves errors far above ``tol``.

    ``tol`` below ten ulps of the tier is raised to that floor.  With
    ``tau_inf`` the free-boundary bracket is computed for the result.
    ``on_step(alpha_low, alpha_high)`` is called after every update.

    Raises
    ------
    BracketFailure, MaxIterations
    """
    branch = Branch(branch)
    cfg = cfg or SolverConfig()
    sh = _Shooter(params, branch, cfg)
    tier = sh.tier
    tol = max(float(tol), 10 * tier.ulp)
    lo, hi, lo_r, hi_r = bracket(params, branch, alpha_init, cfg, _shooter=sh)

    with tier.context():
        tol_t = tier.num(tol)

        def width():
            return abs(hi - lo)

        def scale(a):
            return max(1, abs(a))

        alpha = (lo + hi) / 2
        last_r = None
        prev_width = width()
        use_secant = False
        while True:
            if on_step is not None:
                on_step(lo, hi)
            w = width()
            if w <= tol_t * scale(alpha) or last_r == 0:
                break
            if sh.marches >= max_iterations:
                raise MaxIterations(
                    f"no convergence after {sh.marches} marches (bracket width {float(w):.3g})"
                )
            candidate = None
            if use_secant and _finite(lo_r) and _finite(hi_r) and hi_r != lo_r:
                candidate = hi - hi_r * (hi - lo) / (hi_r - lo_r)
                inside = min(lo, hi) < candidate < max(lo, hi)
                if not inside or w > prev_width / 2:
                    candidate = None
            if candidate is None:
                candidate = (lo + hi) / 2
                if candidate == lo or candidate == hi:
                    break  # bracket exhausted at this precision
            prev_width = w
            alpha = candidate
            v, r = sh.side(alpha)
            last_r = r
            if v is Verdict.TOO_HIGH:
                hi, hi_r = alpha, r
            else:
                lo, lo_r = alpha, r
            if not use_secant and width() < 10 * tol_t * scale(alpha):
                use_secant = True
                prev_width = 2 * width()

        eta_inf = None
        if tau_inf is not None:
            eta_inf = eta_infinity(params, alpha, cfg, tau_inf)
        return ShootResult(
            alpha=alpha,
            iterations=sh.marches,
            tol_achieved=float(width()),
            eta_inf=eta_inf,
            branch=branch,
            tier=tier,
            params=params,
        )


def _finite(x) -> bool:
    return x is not None and x == x and abs(x) != math.inf


def eta_infinity(params: FlowParams, alpha, cfg: SolverConfig | None = None, tau: float = 5e-7):
    """Free-boundary bracket ``(lo, lo + 0.01)``.

    ``f'`` is sampled every 0.01; ``hi`` is the first sample with
    ``|1 - f'| < tau`` that stays below ``tau`` for the following ten
    samples, and ``lo`` the sample before it.

    Raises
    ------
    NotReached
        If the condition is not met before the horizon, or before the
        march stops on a step failure.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    cfg = (cfg or SolverConfig()).resolved(params)
    traj = march(params, alpha, cfg, early_stop=False, keep_partial=True)
    return scan_eta_infinity(traj, tau)


def scan_eta_infinity(traj: Trajectory, tau: float, resolution: float = ETA_INF_RESOLUTION):
    cfg = traj.config
    tier = cfg.tier
    n_max = int(round(float(traj.points[-1].eta) / resolution))
    run_start = None
    run = 0
    with tier.context():
        for n in range(n_max + 1):
            # grid values are formed from integers so 6.07 prints as 6.07
            eta = tier.num(n) / tier.num(round(1 / resolution))
            fp = evaluate_at(traj, eta).fp
            if abs(1 - fp) < tau:
                if run == 0:
                    run_start = n
                run += 1
                if run == 11:
                    lo = max(run_start - 1, 0)
                    return (round(lo * resolution, 10), round((lo + 1) * resolution, 10))
            else:
                run = 0
    raise NotReached(f"|1 - f'| < {tau:g} not sustained before eta={float(traj.points[-1].eta):g}")
