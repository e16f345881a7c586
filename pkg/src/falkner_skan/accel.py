"""Wynn-epsilon acceleration of partial-sum sequences.

The tableau is stored column by column: ``cols[k][l]`` holds
``eps_k^(l)`` for ``k = 0, 1, ...``; column ``-1`` is implicitly zero.
Each new sequence term appends one anti-diagonal::

    eps_{k+1}^(l) = eps_{k-1}^(l+1) + 1 / (eps_k^(l+1) - eps_k^(l))

Even columns estimate the limit.  Convergence is judged on the last entry
of each even column against the entry two rows above it (one row when the
column is still too short), relative to the larger of that entry, the
first sequence term and an optional caller-supplied scale.
"""

from __future__ import annotations

from dataclasses import dataclass

from .series import CoeffBlock, series_terms
from .tiers import STANDARD, Tier

__all__ = [
    "AccelResult",
    "EpsilonTableau",
    "NonConvergence",
    "StateTriple",
    "epsilon_limit",
    "accelerated_triple",
    "accelerated_limit",
]


class NonConvergence(ArithmeticError):
    """Raised when an accelerated sequence does not meet its tolerance."""

    def __init__(self, message, component=None, best_error=None, eta=None):
        super().__init__(message)
        self.component = component
        self.best_error = best_error
        self.eta = eta


@dataclass(frozen=True)
class AccelResult:
    value: object
    err_estimate: float
    converged: bool
    column_used: int
    terms_consumed: int


@dataclass(frozen=True)
class StateTriple:
    eta: object
    f: object
    fp: object
    fpp: object


class EpsilonTableau:
    """Incrementally built epsilon tableau.

    Feed terms with :meth:`push`.  A difference in column ``k`` that is
    exactly zero cannot be inverted; for an even ``k`` the column is taken as
    exactly converged and the tableau stops growing, for an odd ``k`` the
    anti-diagonal is cut off at that depth.  A reciprocal that overflows
    (underflowing difference) also cuts the anti-diagonal.

    Only exact zeros trigger the breakdown: treating differences of a few
    ulps as zero stops the partial sums while their tail is still
    contributing, and that error compounds across continuation steps.
    """

    def __init__(self, tier: Tier = STANDARD, scale=0):
        self.tier = tier
        self.scale = abs(scale)
        self.cols: list[list] = []
        self.depth: list[int] = []  # deepest column reached by each anti-diagonal
        self.exact = None  # (value, column) after an even-column breakdown
        self._n = 0

    @property
    def L(self) -> int:
        return self._n - 1

    @property
    def frozen(self) -> bool:
        return self.exact is not None

    def push(self, s) -> None:
        if self.frozen:
            self._n += 1
            return
        cols = self.cols
        if not cols:
            cols.append([])
        cols[0].append(s)
        n = len(cols[0]) - 1  # index of the new term
        self._n = n + 1
        reach = 0 if n == 0 else self.depth[-1] + 1
        reached = 0
        tier = self.tier
        for k in range(0, min(reach, n)):
            # new entry eps_{k+1}^(n-k-1)
            l = n - k - 1
            hi = cols[k][l + 1]
            diff = hi - cols[k][l]
            if diff == 0:
                if k % 2 == 0:
                    self.exact = (hi, k)
                break
            prev = cols[k - 1][l + 1] if k >= 1 else 0
            try:
                val = prev + 1 / diff
            except (ZeroDivisionError, ArithmeticError):
                break
            if not tier.isfinite(val):
                break
            if len(cols) <= k + 1:
                cols.append([])
            col = cols[k + 1]
            # a cut-off diagonal leaves holes; pad so indices stay aligned
            while len(col) < l:
                col.append(None)
            col.append(val)
            reached = k + 1
        self.depth.append(reached)

    def _entry(self, k, l):
        col = self.cols[k] if k < len(self.cols) else []
        if 0 <= l < len(col):
            return col[l]
        return None

    def estimates(self):
        """Yield ``(column, value, e_we)`` for every even column that can be judged."""
        L = self.L
        for i in range(0, len(self.cols), 2):
            last_l = L - i
            a = self._entry(i, last_l)
            if a is None:
                continue
            b = self._entry(i, last_l - 2)
            if b is None:
                b = self._entry(i, last_l - 1)
            if b is None:
                continue
            yield i, a, self._relative(a, b)

    def _relative(self, a, b):
        denom = max(abs(a), abs(self.cols[0][0]), self.scale)
        d = abs(a - b)
        if denom == 0:
            return 0.0 if d == 0 else float("inf")
        return float(d / denom)

    def result(self, tol) -> AccelResult:
        if self.exact is not None:
            value, col = self.exact
            return AccelResult(value, 0.0, True, col, self._n)
        best = None
        chosen = None
        for i, value, err in self.estimates():
            if err < tol:
                chosen = (i, value, err)  # deeper columns override shallower ones
            if best is None or err <= best[2]:
                best = (i, value, err)
        if chosen is not None:
            i, value, err = chosen
            return AccelResult(value, err, True, i, self._n)
        if best is None:
            # a single judged entry was never available
            return AccelResult(self.cols[0][-1], float("inf"), False, 0, self._n)
        i, value, err = best
        return AccelResult(value, err, False, i, self._n)


def epsilon_limit(seq, tol, *, tier: Tier = STANDARD, scale=0) -> AccelResult:
    """Estimate the limit of ``seq`` with the epsilon algorithm.

    Parameters
    ----------
    seq : sequence of reals
        At least three terms, typically partial sums.
    tol : float
        Relative tolerance on the even-column convergence test.
    scale : real, optional
        Floor for the magnitude that changes are measured against.  Use it
        when the limit itself may be far smaller than the quantities it is
        compared with.

    Returns
    -------
    AccelResult
        The deepest even column meeting ``tol``; otherwise the estimate with
        the smallest error and ``converged=False``.
    """
    seq = list(seq)
    if len(seq) < 3:
        raise ValueError("epsilon_limit needs at least 3 terms")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if all(v != v for v in seq):
        raise ValueError("sequence contains only NaN")
    with tier.context():
        tab = EpsilonTableau(tier, scale)
        for s in seq:
            tab.push(s)
        return tab.result(tol)


def accelerated_limit(seq, tol, tier: Tier = STANDARD, scale=0):
    """Accelerated limit of ``seq``; constant-length-1 or -2 inputs pass through."""
    if len(seq) < 3:
        return AccelResult(seq[-1], 0.0, True, 0, len(seq))
    return epsilon_limit(seq, tol, tier=tier, scale=scale)


def accelerated_triple(block: CoeffBlock, dEta, tol) -> StateTriple:
    """Accelerated ``(f, f', f'')`` at ``block.eta0 + dEta``.

    Changes in ``f'`` and ``f''`` are measured against at least the larger of
    ``|f'|`` and ``|f''|`` at the block origin.  In the far field ``f''``
    decays exponentially while ``f'`` sits at one, and a purely relative
    test on ``f''`` would demand accuracy far below what the state needs.

    Raises
    ------
    NonConvergence
        If any of the three sums misses ``tol``.
    """
    tier = block.tier
    with tier.context():
        d = tier.num(dEta)
        a = block.coeffs
        velocity = max(abs(a[1]), abs(2 * a[2]))
        out = []
        for name, terms in zip(("f", "fp", "fpp"), series_terms(block, d)):
            scale = 0 if name == "f" else velocity
            res = accelerated_limit(_skip_zero_terms(terms), tol, tier, scale)
            if not res.converged:
                raise NonConvergence(
                    f"{name} partial sums did not converge at eta={block.eta0 + d} "
                    f"(best relative change {res.err_estimate:.3g}, tol {tol:.3g})",
                    component=name,
                    best_error=res.err_estimate,
                    eta=block.eta0 + d,
                )
            out.append(res.value)
        return StateTriple(block.eta0 + d, *out)


def _skip_zero_terms(terms):
    # Exactly-zero terms (lacunary series at the wall, underflowed far-field
    # blocks) would repeat a partial sum and fake a converged column.
    sums = [terms[0]]
    for t in terms[1:]:
        if t != 0:
            sums.append(sums[-1] + t)
    return sums
