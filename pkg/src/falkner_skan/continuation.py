"""Marching by continuous analytical continuation.

A trajectory is built interval by interval: the accelerated endpoint of one
Taylor block seeds the coefficients of the next, so only the three values
``(f, f', f'')`` travel across a junction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from .accel import NonConvergence, StateTriple, accelerated_limit, accelerated_triple, _skip_zero_terms
from .series import DEFAULT_TERMS, FlowParams, InitialTriple, coefficients, series_terms
from .tiers import STANDARD, Tier, get_tier

__all__ = [
    "Classification",
    "SolverConfig",
    "StepFailure",
    "NoPlateau",
    "Trajectory",
    "march",
    "displacement_limit",
    "residual_scan",
    "evaluate_at",
]


class StepFailure(ArithmeticError):
    """Acceleration failed on an interval even after repeated step halving."""

    def __init__(self, message, eta=None, cause=None):
        super().__init__(message)
        self.eta = eta
        self.cause = cause


class NoPlateau(ArithmeticError):
    pass


class Classification(str, enum.Enum):
    OVERSHOOT = "overshoot"
    UNDERSHOOT = "undershoot"
    UNDECIDED = "undecided"


def _default_tol(tier: Tier) -> float:
    return 1e-14 if tier.name == "standard" else 1e-31


@dataclass(frozen=True)
class SolverConfig:
    """Marching and acceleration settings shared by one solver run.

    ``eta_max=None`` picks the horizon from the flow: 20 for ``beta >= 0``
    and 30 otherwise, both stretched by half on the extended tier.  The
    decaying and growing far-field modes balance where the angle error is
    about ``exp(-2 * sqrt(2 * beta) * eta_max)`` (for ``beta0 = 0``), so a
    20-unit horizon limits the angle to roughly 24 digits.  ``h=None`` uses 1, shortened by powers of two once
    ``sqrt(|beta|) > 4`` since the layer thins like ``1/sqrt(beta)``.
    ``tol=None`` picks a tier-appropriate acceleration tolerance.
    """

    h: float | None = None
    eta_max: float | None = None
    K: int = DEFAULT_TERMS
    tol: float | None = None
    tier: Tier = STANDARD
    max_halvings: int = 6

    def __post_init__(self):
        object.__setattr__(self, "tier", get_tier(self.tier))
        if self.h is not None and not self.h > 0:
            raise ValueError("step h must be positive")
        if self.h is not None and self.eta_max is not None and self.eta_max < self.h:
            raise ValueError("eta_max must be at least one step h")
        if self.tol is not None and self.tol < 4 * self.tier.ulp:
            raise ValueError(f"tol {self.tol:g} is below 4 ulps of the {self.tier.name} tier")
        if self.K < 3:
            raise ValueError("K must be >= 3")
        if self.max_halvings < 0:
            raise ValueError("max_halvings must be >= 0")

    @property
    def accel_tol(self) -> float:
        return self.tol if self.tol is not None else _default_tol(self.tier)

    def horizon(self, params: FlowParams) -> float:
        if self.eta_max is not None:
            return self.eta_max
        base = 20.0 if params.beta >= 0 else 30.0
        return base if self.tier.name == "standard" else 1.5 * base

    def step(self, params: FlowParams) -> float:
        if self.h is not None:
            return self.h
        ratio = math.sqrt(abs(float(params.beta))) / 4
        if ratio <= 1:
            return 1.0
        return 0.5 ** math.ceil(math.log2(ratio))

    def resolved(self, params: FlowParams) -> "SolverConfig":
        return replace(self, h=self.step(params), eta_max=self.horizon(params), tol=self.accel_tol)


@dataclass
class Trajectory:
    params: FlowParams
    alpha: object
    points: list
    classification: Classification
    stop_eta: object
    config: SolverConfig = field(repr=False, default_factory=SolverConfig)

    @property
    def last(self) -> StateTriple:
        return self.points[-1]

    def residual(self) -> float:
        """``f'(stop_eta) - 1``, the far-field mismatch at the last point."""
        return float(self.last.fp - 1)


def _step(params, state: StateTriple, dh, cfg: SolverConfig, depth: int, observe=None) -> StateTriple:
    tier = cfg.tier
    block = coefficients(
        params, InitialTriple(state.f, state.fp, state.fpp), cfg.K, eta0=state.eta, tier=tier
    )
    try:
        return accelerated_triple(block, dh, cfg.accel_tol)
    except NonConvergence as exc:
        if depth >= cfg.max_halvings:
            raise StepFailure(
                f"acceleration failed near eta={float(state.eta):.6g} after {depth} halvings: {exc}",
                eta=state.eta,
                cause=exc,
            ) from exc
    half = dh / 2
    mid = _step(params, state, half, cfg, depth + 1, observe)
    if observe is not None:
        observe(mid)
    return _step(params, mid, dh - half, cfg, depth + 1, observe)


class _Verdict(Exception):
    def __init__(self, cls, state):
        self.cls = cls
        self.state = state


class _Watcher:
    """Applies the overshoot/undershoot tests to every state the march produces."""

    def __init__(self, tier: Tier, start: StateTriple, tol):
        self.one = tier.num(1)
        self.over = self.one + tier.num(4 * tier.ulp)
        self.rose = start.fpp > 0
        self.flat = abs(start.fpp) < tol
        self.tol = tol

    def verdict(self, s: StateTriple) -> Classification:
        if s.fp > self.over:
            return Classification.OVERSHOOT
        if self.rose and s.fpp < 0 and s.fp < self.one:
            return Classification.UNDERSHOOT
        return Classification.UNDECIDED

    def see(self, s: StateTriple) -> Classification:
        cls = self.verdict(s)
        self.rose = self.rose or s.fpp > 0
        return cls

    def see_grid(self, s: StateTriple) -> Classification:
        self.flat = self.flat and abs(s.fpp) < self.tol and s.fp < 0.5
        return self.see(s)

    def early(self, s: StateTriple) -> None:
        cls = self.see(s)
        if cls is not Classification.UNDECIDED:
            raise _Verdict(cls, s)


def march(
    params: FlowParams,
    alpha,
    cfg: SolverConfig | None = None,
    *,
    early_stop: bool = True,
    keep_partial: bool = False,
) -> Trajectory:
    """March ``(f, f', f'')`` from the wall with ``f''(0) = alpha``.

    Points are retained on the grid ``0, h, 2h, ...`` up to the horizon.
    With ``early_stop`` the march ends at the first state that classifies
    the angle:

    * overshoot: ``f' > 1`` (beyond 4 ulps);
    * undershoot: ``f'' < 0`` while ``f' < 1``, after ``f''`` has been
      positive at an earlier point, i.e. the velocity peaked below unity;
    * at the horizon, a trajectory that never rose above ``f' = 0.5`` and
      kept ``|f''| < tol`` counts as undershoot (the zero solution).

    Intermediate states of a halved interval are tested too; when one of
    them decides the angle it becomes the final point of the trajectory.

    With ``keep_partial`` a step failure ends the march instead of raising,
    and the trajectory holds the points computed before it.  At a converged
    angle the far field eventually amplifies the residual angle error until
    the series blow up; callers that only need the near field use this.

    Raises
    ------
    StepFailure
        When an interval does not converge even after ``max_halvings``.
    """
    cfg = (cfg or SolverConfig()).resolved(params)
    tier = cfg.tier
    with tier.context():
        h = tier.num(cfg.h)
        eta_max = tier.num(cfg.eta_max)
        zero = tier.num(0)
        state = StateTriple(zero, zero, zero, tier.num(alpha))
        points = [state]
        watch = _Watcher(tier, state, cfg.accel_tol)
        observe = watch.early if early_stop else None
        cls = Classification.UNDECIDED
        n_steps = int(math.ceil(float(eta_max / h) - 1e-9))
        for i in range(1, n_steps + 1):
            target = min(i * h, eta_max)
            try:
                state = _step(params, state, target - state.eta, cfg, 0, observe)
            except _Verdict as v:
                points.append(v.state)
                cls = v.cls
                state = v.state
                break
            except StepFailure:
                if not keep_partial:
                    raise
                break
            # pin the grid coordinate so eta does not drift with accumulated additions
            state = StateTriple(target, state.f, state.fp, state.fpp)
            points.append(state)
            cls = watch.see_grid(state)
            if early_stop and cls is not Classification.UNDECIDED:
                break
        if not early_stop:
            cls = _classify_points(points, tier, cfg.accel_tol)
        elif cls is Classification.UNDECIDED and watch.flat:
            cls = Classification.UNDERSHOOT
        return Trajectory(params, tier.num(alpha), points, cls, state.eta, cfg)


def _classify_points(points, tier, tol) -> Classification:
    watch = _Watcher(tier, points[0], tol)
    for p in points[1:]:
        cls = watch.see_grid(p)
        if cls is not Classification.UNDECIDED:
            return cls
    return Classification.UNDERSHOOT if watch.flat else Classification.UNDECIDED


def evaluate_at(traj: Trajectory, eta) -> StateTriple:
    """Accelerated state at an arbitrary ``eta`` by re-expanding about the
    nearest retained grid point at or below it."""
    cfg = traj.config
    tier = cfg.tier
    with tier.context():
        eta = tier.num(eta)
        pts = traj.points
        idx = 0
        for j, p in enumerate(pts):
            if p.eta <= eta:
                idx = j
            else:
                break
        base = pts[idx]
        d = eta - base.eta
        if d == 0:
            return base
        return _step(traj.params, base, d, cfg, 0)


def displacement_limit(params: FlowParams, alpha, cfg: SolverConfig | None = None, tol=None):
    """Plateau value of ``eta - f(eta)``.

    Marches the full horizon and returns the first grid value of
    ``eta - f`` that agrees with its predecessor to ``tol`` (relative to
    ``max(1, |value|)``).

    Raises
    ------
    NoPlateau
    """
    cfg = (cfg or SolverConfig()).resolved(params)
    tol = cfg.accel_tol * 10 if tol is None else tol
    traj = march(params, alpha, cfg, early_stop=False)
    return plateau(traj.points, tol)


def plateau(points, tol):
    prev = None
    for p in points:
        v = p.eta - p.f
        if prev is not None and abs(v - prev) <= tol * max(1, abs(v)):
            return v
        prev = v
    raise NoPlateau(f"eta - f did not settle to {tol:g} before eta={float(points[-1].eta):g}")


def residual_scan(params: FlowParams, traj: Trajectory, samples: int = 5) -> float:
    """Largest ``|f''' + beta0 f f'' + beta (1 - f'^2)|`` over interior samples.

    Each retained interval is re-expanded about its left end and sampled at
    ``samples`` equally spaced interior points; all four series are
    accelerated.
    """
    cfg = traj.config
    tier = cfg.tier
    worst = 0.0
    with tier.context():
        beta0 = tier.num(params.beta0)
        beta = tier.num(params.beta)
        for left, right in zip(traj.points[:-1], traj.points[1:]):
            block = coefficients(
                params, InitialTriple(left.f, left.fp, left.fpp), cfg.K, eta0=left.eta, tier=tier
            )
            width = right.eta - left.eta
            for j in range(1, samples + 1):
                d = width * j / (samples + 1)
                vals = [
                    accelerated_limit(_skip_zero_terms(t), cfg.accel_tol, tier).value
                    for t in series_terms(block, d)
                ]
                fppp = accelerated_limit(_skip_zero_terms(_third_terms(block, d)), cfg.accel_tol, tier).value
                f, fp, fpp = vals
                r = fppp + beta0 * f * fpp + beta * (1 - fp * fp)
                worst = max(worst, abs(float(r)))
    return worst


def _third_terms(block, d):
    a = block.coeffs
    return [(k + 1) * (k + 2) * (k + 3) * a[k + 3] * d**k for k in range(len(a) - 3)]
