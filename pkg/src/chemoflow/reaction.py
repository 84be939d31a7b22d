"""Reaction term variants and boundedness-regime classification.

The growth term comes in three flavors: off (classical Keller-Segel),
local logistic ``mu*u*(1 - u^alpha)``, and the nonlocal logistic
``u^alpha * (1 - integral(u^beta))`` whose dampening couples every point to
the global state.  The classifier evaluates the two exponent conditions
under which global boundedness is proved:

    case 1:  2 <= alpha < 1 + 2*beta/n
    case 2:  alpha < 2  and  (n+2)/n * (2-alpha) < 1 + 2*beta/n - alpha

A tuple outside both cases is reported as "theorem silent", never as a
blow-up prediction: whether solutions blow up for beta <= n/2 is open.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .grid import Field


class ReactionVariant(enum.Enum):
    OFF = "off"
    LOCAL_LOGISTIC = "local_logistic"
    NONLOCAL_LOGISTIC = "nonlocal_logistic"


@dataclass(frozen=True)
class ReactionSpec:
    """Reaction term parameters; which fields matter depends on the variant."""

    variant: ReactionVariant
    alpha: float = 2.0
    beta: float = 2.0
    mu: float = 1.0

    def __post_init__(self):
        if self.variant is ReactionVariant.OFF:
            return
        if self.alpha < 1:
            raise ValueError(f"reaction exponent alpha must be >= 1, got {self.alpha}")
        if self.variant is ReactionVariant.NONLOCAL_LOGISTIC and self.beta <= 1:
            raise ValueError(f"nonlocal exponent beta must be > 1, got {self.beta}")
        if self.variant is ReactionVariant.LOCAL_LOGISTIC and self.mu <= 0:
            raise ValueError(f"logistic rate mu must be > 0, got {self.mu}")

    @classmethod
    def off(cls) -> "ReactionSpec":
        return cls(ReactionVariant.OFF)

    @classmethod
    def local_logistic(cls, alpha: float, mu: float = 1.0) -> "ReactionSpec":
        return cls(ReactionVariant.LOCAL_LOGISTIC, alpha=alpha, mu=mu)

    @classmethod
    def nonlocal_logistic(cls, alpha: float, beta: float) -> "ReactionSpec":
        return cls(ReactionVariant.NONLOCAL_LOGISTIC, alpha=alpha, beta=beta)


def nonlocal_integral(u: Field, spec: ReactionSpec) -> float:
    """The global dampening functional ``integral(u^beta)`` (0 for other variants)."""
    if spec.variant is not ReactionVariant.NONLOCAL_LOGISTIC:
        return 0.0
    uv = np.clip(u.values, 0.0, None)
    return float(u.grid.cell_volume * (uv**spec.beta).sum())


def eval_reaction(u: Field, spec: ReactionSpec) -> Field:
    """Evaluate the growth term pointwise on a nonnegative density field.

    Powers of the density use the real power of nonnegative values with
    ``0^alpha = 0``; negative inputs beyond a rounding guard are rejected.
    """
    umax = float(np.abs(u.values).max()) if u.values.size else 0.0
    if float(u.values.min()) < -1e-12 * max(1.0, umax):
        raise ValueError("reaction evaluated on a field with negative entries")
    if spec.variant is ReactionVariant.OFF:
        return Field.zeros(u.grid)
    uv = np.clip(u.values, 0.0, None)
    if spec.variant is ReactionVariant.LOCAL_LOGISTIC:
        return Field(u.grid, spec.mu * uv * (1.0 - uv**spec.alpha))
    total = float(u.grid.cell_volume * (uv**spec.beta).sum())
    return Field(u.grid, uv**spec.alpha * (1.0 - total))


class Verdict(enum.Enum):
    COVERED_CASE1 = "CoveredCase1"
    COVERED_CASE2 = "CoveredCase2"
    NOT_COVERED = "NotCovered"


@dataclass(frozen=True)
class RegimeVerdict:
    """Classification plus the two sides of the governing inequality."""

    verdict: Verdict
    lhs: float
    rhs: float

    @property
    def covered(self) -> bool:
        return self.verdict is not Verdict.NOT_COVERED


def _check_hypotheses(n: int, alpha: float, beta: float) -> None:
    if int(n) != n or n < 3:
        raise ValueError(f"classification needs integer dimension n >= 3, got {n}")
    if alpha < 1:
        raise ValueError(f"classification needs alpha >= 1, got {alpha}")
    if beta <= 1:
        raise ValueError(f"classification needs beta > 1, got {beta}")


def classify_regime(n: int, alpha: float, beta: float) -> RegimeVerdict:
    """Test (n, alpha, beta) against the two boundedness conditions.

    Inequalities are strict exactly where the conditions are strict, and are
    decided in exact rational arithmetic on the given values (floats are
    rationals), so boundary tuples like alpha = 1 + 2*beta/n land on the
    NOT_COVERED side without rounding ambiguity.  The alpha >= 2 / alpha < 2
    split makes the two cases mutually exclusive; NOT_COVERED means only
    that no claim is made for the tuple.
    """
    _check_hypotheses(n, alpha, beta)
    a = Fraction(alpha)
    growth_cap = 1 + 2 * Fraction(beta) / int(n)
    if a >= 2:
        verdict = Verdict.COVERED_CASE1 if a < growth_cap else Verdict.NOT_COVERED
        return RegimeVerdict(verdict, lhs=alpha, rhs=float(growth_cap))
    lhs = Fraction(int(n) + 2, int(n)) * (2 - a)
    rhs = growth_cap - a
    verdict = Verdict.COVERED_CASE2 if lhs < rhs else Verdict.NOT_COVERED
    return RegimeVerdict(verdict, lhs=float(lhs), rhs=float(rhs))


def classify_sublinear(n: int, xi: float, beta: float) -> bool:
    """Boundedness condition for sub-linear chemical production ``u^xi``, xi < 1.

    True when ``1 + xi < 1 + 2*beta/n`` (strictly), i.e. ``xi < 2*beta/n``.
    """
    _check_hypotheses(n, 1.0, beta)
    if not 0.0 < xi < 1.0:
        raise ValueError(f"sublinear check needs 0 < xi < 1 (use classify_regime for xi = 1), got {xi}")
    return Fraction(xi) < 2 * Fraction(beta) / int(n)


def collapse_threshold_hint(n: int, beta: float) -> bool:
    """Headline threshold: True iff beta > n/2 (strict), the regime in which
    the nonlocal dampening can prevent chemotactic collapse."""
    _check_hypotheses(n, 1.0, beta)
    return Fraction(beta) > Fraction(int(n), 2)
