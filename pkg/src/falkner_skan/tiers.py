"""Precision tiers.

Every solver run uses exactly one tier.  ``standard`` computes with Python
floats (binary64); ``extended`` computes with :class:`decimal.Decimal` under a
34-digit context, which is the decimal counterpart of IEEE quadruple
precision.  The numerical kernels are written against plain arithmetic
operators, so the same code serves both tiers; the tier only decides how
inputs are converted and which context is active.
"""

from __future__ import annotations

import contextlib
import decimal
import math
import os
from dataclasses import dataclass
from typing import Any, Iterator

__all__ = ["Tier", "STANDARD", "EXTENDED", "get_tier", "default_tier_name"]

Real = Any  # float or decimal.Decimal, depending on the tier


@dataclass(frozen=True)
class Tier:
    name: str
    digits: int
    unit_roundoff: float

    @property
    def ulp(self) -> float:
        # spacing of numbers near 1
        return 2.0 * self.unit_roundoff

    def num(self, x) -> Real:
        if self.name == "standard":
            return float(x)
        if isinstance(x, decimal.Decimal):
            return +x
        if isinstance(x, float):
            # repr keeps the decimal literal the user typed (0.1, not 0.1000000000000000055...)
            return decimal.Decimal(repr(x))
        return decimal.Decimal(x)

    def isfinite(self, x) -> bool:
        if isinstance(x, decimal.Decimal):
            return x.is_finite()
        return math.isfinite(x)

    @contextlib.contextmanager
    def context(self) -> Iterator[None]:
        if self.name == "standard":
            yield
            return
        with decimal.localcontext() as ctx:
            ctx.prec = self.digits
            ctx.Emin = -999999
            ctx.Emax = 999999
            ctx.traps[decimal.DivisionByZero] = True
            ctx.traps[decimal.InvalidOperation] = True
            yield

    def sqrt(self, x) -> Real:
        if isinstance(x, decimal.Decimal):
            return x.sqrt()
        return math.sqrt(x)

    def format(self, x) -> str:
        """Scientific notation carrying the tier's full digit count."""
        return f"{x:.{self.sig_digits - 1}e}"

    @property
    def sig_digits(self) -> int:
        return 17 if self.name == "standard" else 33


STANDARD = Tier("standard", 16, 2.0**-53)
EXTENDED = Tier("extended", 34, 0.5 * 10.0**-33)

_TIERS = {t.name: t for t in (STANDARD, EXTENDED)}


def get_tier(name: str | Tier | None = None) -> Tier:
    if isinstance(name, Tier):
        return name
    if name is None:
        name = default_tier_name()
    try:
        return _TIERS[name]
    except KeyError:
        raise ValueError(f"unknown precision tier {name!r}; expected one of {sorted(_TIERS)}") from None


def default_tier_name() -> str:
    return os.environ.get("FS_TIER", "standard")
