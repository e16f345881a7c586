"""Taylor coefficients of the Falkner-Skan function and their partial sums.

The flow family is

    f''' + beta0 * f * f'' + beta * (1 - f'**2) = 0.

Writing ``f(eta0 + d) = sum_k a_k d**k`` with ``a_k = f^(k)(eta0) / k!`` and
differentiating the equation ``k`` times (Leibniz rule on both products)
gives, after dividing by ``(k + 3)!``,

    (k+1)(k+2)(k+3) a_{k+3} =   beta  * sum_{l=0..k} (l+1)(k-l+1) a_{l+1} a_{k-l+1}
                              - beta0 * sum_{l=0..k} (l+1)(l+2)   a_{l+2} a_{k-l}
                              - beta  * [k == 0]

Three seed values ``a_0 = f``, ``a_1 = f'`` and ``a_2 = f''/2`` at the
expansion point fix the whole block.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tiers import STANDARD, Tier

__all__ = [
    "FlowParams",
    "InitialTriple",
    "CoeffBlock",
    "coefficients",
    "partial_sums",
    "series_terms",
    "third_derivative_sum",
    "DEFAULT_TERMS",
]

DEFAULT_TERMS = 30


@dataclass(frozen=True)
class FlowParams:
    """Coefficients ``(beta0, beta)`` of the flow family."""

    beta0: float
    beta: float

    def __post_init__(self):
        for name in ("beta0", "beta"):
            v = getattr(self, name)
            try:
                ok = v == v and abs(v) != float("inf")
            except TypeError:
                ok = False
            if not ok:
                raise ValueError(f"{name} must be a finite real, got {v!r}")


@dataclass(frozen=True)
class InitialTriple:
    """Values ``(f, f', f'')`` at an expansion point."""

    f0: float
    fp0: float
    fpp0: float


@dataclass(frozen=True)
class CoeffBlock:
    eta0: float
    coeffs: tuple
    params: FlowParams
    tier: Tier = STANDARD

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


def coefficients(
    params: FlowParams,
    init: InitialTriple,
    K: int = DEFAULT_TERMS,
    *,
    eta0=0.0,
    tier: Tier = STANDARD,
) -> CoeffBlock:
    """Taylor coefficients ``a_0 .. a_K`` of ``f`` about ``eta0``.

    Parameters
    ----------
    params : FlowParams
    init : InitialTriple
        ``(f, f', f'')`` at ``eta0``.
    K : int
        Truncation order, at least 3.
    tier : Tier
        Arithmetic used for every coefficient.

    Returns
    -------
    CoeffBlock
    """
    if int(K) != K or K < 3:
        raise ValueError(f"truncation order must be an integer >= 3, got {K!r}")
    K = int(K)
    vals = (init.f0, init.fp0, init.fpp0, params.beta0, params.beta, eta0)
    if not all(tier.isfinite(tier.num(v)) for v in vals):
        raise ValueError("coefficients() requires finite inputs")

    with tier.context():
        beta0 = tier.num(params.beta0)
        beta = tier.num(params.beta)
        zero = tier.num(0)
        a = [zero] * (K + 1)
        a[0] = tier.num(init.f0)
        a[1] = tier.num(init.fp0)
        a[2] = tier.num(init.fpp0) / 2
        # Products are accumulated in ascending l so the block is bit-reproducible.
        for k in range(K - 2):
            conv_fp = zero
            conv_ffpp = zero
            for l in range(k + 1):
                conv_fp += (l + 1) * (k - l + 1) * (a[l + 1] * a[k - l + 1])
                conv_ffpp += (l + 1) * (l + 2) * (a[l + 2] * a[k - l])
            rhs = beta * conv_fp - beta0 * conv_ffpp
            if k == 0:
                rhs -= beta
            a[k + 3] = rhs / ((k + 1) * (k + 2) * (k + 3))
        return CoeffBlock(tier.num(eta0), tuple(a), params, tier)


def _sums(terms) -> list:
    out = []
    acc = None
    for t in terms:
        acc = t if acc is None else acc + t
        out.append(acc)
    return out


def series_terms(block: CoeffBlock, dEta):
    """Individual terms of the ``f``, ``f'`` and ``f''`` series at ``eta0 + dEta``."""
    tier = block.tier
    with tier.context():
        d = tier.num(dEta)
        if not tier.isfinite(d):
            raise ValueError("dEta must be finite")
        a = block.coeffs
        K = len(a) - 1
        powers = [tier.num(1)] * (K + 1)
        for k in range(1, K + 1):
            powers[k] = powers[k - 1] * d
        f_terms = [a[k] * powers[k] for k in range(K + 1)]
        fp_terms = [(k + 1) * a[k + 1] * powers[k] for k in range(K)]
        fpp_terms = [(k + 1) * (k + 2) * a[k + 2] * powers[k] for k in range(K - 1)]
        return f_terms, fp_terms, fpp_terms


def partial_sums(block: CoeffBlock, dEta):
    """Partial sums of ``f``, ``f'`` and ``f''`` at ``eta0 + dEta``.

    Element ``l`` of each returned list is the truncation after the
    ``d**l`` term of the respective series, summed in ascending order.
    A block of order ``K`` yields ``K + 1``, ``K`` and ``K - 1`` sums.
    """
    with block.tier.context():
        return tuple(_sums(t) for t in series_terms(block, dEta))


def third_derivative_sum(block: CoeffBlock, dEta) -> list:
    """Partial sums of ``f'''`` at ``eta0 + dEta`` (length ``K - 2``)."""
    tier = block.tier
    with tier.context():
        d = tier.num(dEta)
        a = block.coeffs
        K = len(a) - 1
        terms = []
        p = tier.num(1)
        for k in range(K - 2):
            terms.append((k + 1) * (k + 2) * (k + 3) * a[k + 3] * p)
            p = p * d
        return _sums(terms)
