"""Acceptance criteria, one test each.

Every test prints a single ``PASS criterion N: ...`` or ``FAIL criterion N:
...`` line with the measured figure and then asserts.  Run this file as a
script to get the twelve lines without pytest::

    python tests/test_acceptance.py
"""

import contextlib
import io
import math
import random
import sys
import time
from decimal import Decimal

import pytest

from falkner_skan.accel import EpsilonTableau, accelerated_triple
from falkner_skan.cli import run as cli_run
from falkner_skan.continuation import SolverConfig, march, residual_scan
from falkner_skan.reference import (
    load_reference,
    matching_digits,
    verify,
    verify_profile,
)
from falkner_skan.series import FlowParams, InitialTriple, coefficients
from falkner_skan.shooting import Branch, Verdict, classify, solve_alpha
from falkner_skan.tiers import EXTENDED

BLASIUS_HALF = FlowParams(0.5, 0.0)


def _case(cid):
    cases, _ = load_reference()
    return next(c for c in cases if c.id == cid)


def _min_digits(report):
    return min(o.digits for o in report.outcomes)


# ---------------------------------------------------------------------------
# one check per criterion; each returns (passed, detail)


def criterion_1():
    t0 = time.perf_counter()
    res = solve_alpha(BLASIUS_HALF, tol=1e-16)
    dt = time.perf_counter() - t0
    d = matching_digits(res.alpha, "0.33205733621519630")
    return d >= 14 and dt < 5, f"alpha={res.alpha!r}, {d} digits (need 14), {dt:.2f} s (limit 5 s)"


def criterion_2():
    a1 = solve_alpha(FlowParams(1.0, 0.0), tol=1e-16).alpha
    ah = solve_alpha(BLASIUS_HALF, tol=1e-16).alpha
    d = matching_digits(a1, "0.469599988361")
    rel = abs(ah - a1 / math.sqrt(2)) / ah
    return d >= 11 and rel < 1e-12, f"alpha={a1!r}, {d} digits (need 11); scaling rel error {rel:.2e} (limit 1e-12)"


def criterion_3():
    res = solve_alpha(FlowParams(2.0, 1.0), tol=1e-12)
    printed = Decimal("1.31193769392")
    diff = abs(Decimal(res.alpha) - printed)
    ulp = Decimal("1e-11")
    return diff <= ulp, f"alpha={res.alpha!r}, |alpha - 1.31193769392| = {float(diff):.2e} (limit 1e-11)"


def criterion_4():
    res = solve_alpha(FlowParams(0.0, 1.0), tol=1e-16)
    exact = 2 / Decimal(3).sqrt()
    d = matching_digits(res.alpha, str(exact))
    d_printed = matching_digits(res.alpha, "1.154700538379252")
    return d >= 15 and d_printed >= 15, f"alpha={res.alpha!r}, {d} digits against 2/sqrt(3) (need 15)"


def criterion_5():
    report = verify("positive-beta")
    rows = report.outcomes
    alpha_ok = [o for o in rows if o.digits >= 10]
    eta_ok = [o for o in rows if o.eta_inf_match]
    ok = len(alpha_ok) == len(rows) and len(eta_ok) >= 7
    misses = [f"{o.id}: {o.eta_inf} vs {o.expected_eta_inf}" for o in rows if not o.eta_inf_match]
    return ok, (
        f"{len(alpha_ok)}/{len(rows)} angles at >= 10 digits (min {_min_digits(report)}); "
        f"eta_inf {len(eta_ok)}/{len(rows)} brackets match (need 7)"
        + (f"; mismatched {', '.join(misses)}" if misses else "")
    )


def criterion_6():
    t0 = time.perf_counter()
    report = verify("katagiri")
    dt = time.perf_counter() - t0
    rows = report.outcomes
    good = [o for o in rows if o.digits >= 11]
    ok = len(rows) == 40 and len(good) == 40 and dt < 300
    return ok, f"{len(good)}/{len(rows)} rows at >= 11 digits (min {_min_digits(report)}), {dt:.1f} s (limit 300 s)"


def criterion_7():
    rev = verify("reverse-beta-*")
    ck = [o for o in verify("cebeci-keller").outcomes if o.status != "skipped"]
    good_rev = [o for o in rev.outcomes if o.digits >= 9]
    good_ck = [o for o in ck if o.digits >= 9]
    ok = len(rev.outcomes) == 19 and len(good_rev) == 19 and len(ck) == 11 and len(good_ck) == 11
    return ok, (
        f"reverse sweep {len(good_rev)}/{len(rev.outcomes)} at >= 9 digits (min {_min_digits(rev)}); "
        f"second reverse set {len(good_ck)}/{len(ck)} (min {min(o.digits for o in ck)})"
    )


def criterion_8():
    _, profile = load_reference()
    out = verify_profile(profile, SolverConfig())
    good = [p for p in out if p.digits >= 9]
    worst = min(out, key=lambda p: p.digits)
    ok = len(out) == 135 and len(good) == 135
    return ok, f"{len(good)}/{len(out)} values at >= 9 digits (fewest: {worst.digits} at eta={worst.eta} {worst.column})"


def criterion_9():
    report = verify("blasius-displacement")
    (o,) = report.outcomes
    return o.digits >= 12, f"limit of eta - f = {o.computed!r}, {o.digits} digits (need 12)"


def criterion_10():
    alpha = solve_alpha(BLASIUS_HALF, tol=1e-16).alpha
    cfg = SolverConfig(h=1.0, eta_max=125.0, tol=1e-10)
    traj = march(BLASIUS_HALF, alpha, cfg, early_stop=False)
    err = abs(traj.last.fp - 1)
    return traj.last.eta == 125 and err < 1e-8, f"|f'({traj.last.eta:g}) - 1| = {err:.2e} (limit 1e-8)"


def criterion_11():
    cfg = SolverConfig(tier=EXTENDED)
    pohl = solve_alpha(FlowParams(0, 1), tol=1e-32, cfg=cfg)
    d_pohl = matching_digits(pohl.alpha, _case("pohlhausen-qp").expected_alpha)
    homann = solve_alpha(FlowParams(2, 1), tol=1e-32, cfg=cfg)
    d_homann = matching_digits(homann.alpha, _case("homann-qp").expected_alpha)
    ok = d_pohl >= 28 and d_homann >= 26
    return ok, f"extended tier: Pohlhausen {d_pohl} digits (need 28), Homann {d_homann} digits (need 26)"


def _residuals():
    worst = 0.0
    for params, branch in (
        (BLASIUS_HALF, Branch.FORWARD),
        (FlowParams(2.0, 1.0), Branch.FORWARD),
        (FlowParams(1.0, 2.0), Branch.FORWARD),
        (FlowParams(1.0, -0.15), Branch.FORWARD),
        (FlowParams(1.0, -0.15), Branch.REVERSE),
    ):
        alpha = solve_alpha(params, branch, tol=1e-14).alpha
        traj = march(params, alpha, SolverConfig(eta_max=10.0), early_stop=False)
        worst = max(worst, residual_scan(params, traj))
    return worst


def _geometric_worst_ulps():
    worst = 0.0
    for c, r in ((1.0, 0.5), (3.0, -0.7), (-2.0, 0.25), (0.7, -0.95)):
        tab = EpsilonTableau()
        for n in range(8):
            tab.push(c * (1 - r ** (n + 1)) / (1 - r))
        limit = c / (1 - r)
        value = tab.exact[0] if tab.frozen else tab.cols[2][-1]
        worst = max(worst, abs(value - limit) / math.ulp(limit))
    return worst


def _quasi_linearity_worst(tier=None):
    """Largest ``|E_k(a s + b) - (a E_k(s) + b)|`` over even columns ``k <= 2m``.

    ``m`` is the number of geometric modes in the sequence.  In binary64
    the entries near the exactness column scatter by about 1e-10 for close
    ratios, so the identity is checked at the extended tier and the
    standard-tier figure is reported alongside.
    """
    rng = random.Random(20240601)
    num = float if tier is None else tier.num
    worst = 0.0
    for _ in range(50):
        m = rng.randint(1, 3)
        coefs = [rng.uniform(0.2, 2.0) for _ in range(m)]
        ratios = rng.sample([-0.7, -0.45, -0.2, 0.15, 0.35, 0.6, 0.8], m)
        a, b = rng.choice([-1, 1]) * rng.uniform(0.5, 4), rng.uniform(-3, 3)
        if tier is None:
            t1, t2 = EpsilonTableau(), EpsilonTableau()
            ctx = contextlib.nullcontext()
        else:
            t1, t2 = EpsilonTableau(tier), EpsilonTableau(tier)
            ctx = tier.context()
        with ctx:
            coefs, ratios = [num(c) for c in coefs], [num(r) for r in ratios]
            a, b = num(a), num(b)
            seq, acc = [], num(0)
            for l in range(10):
                acc += sum(cf * rt**l for cf, rt in zip(coefs, ratios))
                seq.append(acc)
            for s in seq:
                t1.push(s)
                t2.push(a * s + b)
            if t1.frozen or t2.frozen:
                continue
            depth = min(len(t1.cols), len(t2.cols), 2 * m + 1)
            for k in range(0, depth, 2):
                for x, y in zip(t1.cols[k], t2.cols[k]):
                    if x is not None and y is not None:
                        worst = max(worst, float(abs(y - (a * x + b)) / max(1, abs(y))))
    return worst


def _bracket_invariant_violations():
    params = FlowParams(1.0, 0.3)
    bad = []

    def check(lo, hi):
        if classify(march(params, lo)) is Verdict.TOO_HIGH or classify(march(params, hi)) is Verdict.TOO_LOW:
            bad.append((lo, hi))

    solve_alpha(params, tol=1e-12, on_step=check)
    return len(bad)


def _junction_mismatches():
    cfg = SolverConfig(h=1.0, eta_max=10.0)
    alpha = solve_alpha(BLASIUS_HALF, tol=1e-16).alpha
    traj = march(BLASIUS_HALF, alpha, cfg, early_stop=False)
    bad = 0
    for left, right in zip(traj.points[:-1], traj.points[1:]):
        block = coefficients(BLASIUS_HALF, InitialTriple(left.f, left.fp, left.fpp), cfg.K, eta0=left.eta)
        nxt = accelerated_triple(block, right.eta - left.eta, cfg.accel_tol)
        bad += (nxt.f, nxt.fp, nxt.fpp) != (right.f, right.fp, right.fpp)
    return bad


def _deterministic():
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        cli_run(["profile", "--beta0", "0.5", "--grid", "0:8:0.5", "--format", "csv"], buf)
        outs.append(buf.getvalue().encode())
    return outs[0] == outs[1]


def criterion_12():
    res = _residuals()
    geo = _geometric_worst_ulps()
    quasi = _quasi_linearity_worst(EXTENDED)
    quasi_std = _quasi_linearity_worst()
    bracket_bad = _bracket_invariant_violations()
    junction_bad = _junction_mismatches()
    same = _deterministic()
    ok = res < 1e-9 and geo <= 10 and quasi < 1e-12 and bracket_bad == 0 and junction_bad == 0 and same
    return ok, (
        f"residual {res:.1e} (limit 1e-9); geometric {geo:.0f} ulps (limit 10); "
        f"quasi-linearity {quasi:.1e} extended tier (limit 1e-12, binary64 {quasi_std:.1e}); bracket violations {bracket_bad}; "
        f"junction mismatches {junction_bad}; byte-identical reruns {same}"
    )


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12,
]


def _line(n, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"


@pytest.mark.parametrize("n", range(1, 13))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        print("\n" + _line(n, ok, detail))
    assert ok, detail


def main() -> int:
    failures = 0
    for n, check in enumerate(CRITERIA, start=1):
        ok, detail = check()
        failures += not ok
        print(_line(n, ok, detail), flush=True)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
