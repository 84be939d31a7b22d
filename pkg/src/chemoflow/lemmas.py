"""Desk-scale numerical verification of the two workhorse inequalities.

`check_interpolation` audits the Gagliardo-Nirenberg-type bound

    ||v||_q^q <= C(n) (C0^-e + C1^-e) ||v||_r^gamma
                 + C0 ||grad v||_2^2 + C1 ||v||_2^2,
    e = lam*q / (2 - lam*q),

by computing every ingredient with grid quadrature and reporting the
smallest constant C(n) that makes the bound hold for a given field.  The
theory never quantifies C(n), so the oracle reports empirical distributions
of the required constant instead of asserting a fixed value.

`check_iteration_bound` integrates the recursive ODE chain

    y_k' = -y_k + a_k (y_{k-1}^g1 + y_{k-1}^g2),   a_k = a_bar * b^(r0 k),

with *equality* (the extremal trajectory dominating every admissible
sub-solution) from y_k(0) = K^(b^k), and compares the running sup against
the closed-form envelope in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .diagnostics import log_moser_bound
from .grid import Field, Grid, gradient_sq_integral, lk_norm, random_band_limited


def sobolev_exponent(n: int) -> float:
    """Critical embedding exponent ``p = 2n/(n-2)`` for n >= 3."""
    if int(n) != n or n < 3:
        raise ValueError(f"Sobolev exponent needs integer n >= 3, got {n}")
    return 2.0 * n / (n - 2.0)


@dataclass(frozen=True)
class InterpolationCase:
    """Exponent bundle for the interpolation inequality.

    Validity demands 1 <= r < q < p and the admissibility condition
    ``q/r < 2/r + 1 - 2/p`` (equivalently ``lam*q < 2``); violations raise
    with the failed inequality spelled out.
    """

    n: int
    r: float
    q: float
    C0: float = 1.0
    C1: float = 1.0

    def __post_init__(self):
        p = sobolev_exponent(self.n)
        if self.C0 <= 0 or self.C1 <= 0:
            raise ValueError(f"C0 and C1 must be positive, got ({self.C0}, {self.C1})")
        if not 1 <= self.r < self.q < p:
            raise ValueError(
                f"exponents must satisfy 1 <= r < q < p = {p:g}, got r = {self.r}, q = {self.q}"
            )
        bound = 2.0 / self.r + 1.0 - 2.0 / p
        if not self.q / self.r < bound:
            raise ValueError(
                f"inadmissible exponents: q/r = {self.q / self.r:g} must be < "
                f"2/r + 1 - 2/p = {bound:g}"
            )

    @property
    def p(self) -> float:
        return sobolev_exponent(self.n)

    @property
    def lam(self) -> float:
        return (1.0 / self.r - 1.0 / self.q) / (1.0 / self.r - 1.0 / self.p)

    @property
    def gamma(self) -> float:
        return 2.0 * (1.0 - self.lam) * self.q / (2.0 - self.lam * self.q)

    @property
    def constant_exponent(self) -> float:
        """The exponent e = lam*q/(2 - lam*q) weighting C0, C1 in the bound."""
        return self.lam * self.q / (2.0 - self.lam * self.q)


@dataclass(frozen=True)
class InterpolationCheck:
    lhs: float
    rhs_without_cn: float
    required_cn: float


def check_interpolation(case: InterpolationCase, v: Field) -> InterpolationCheck:
    """Evaluate both sides of the inequality for one field.

    ``required_cn`` is the smallest constant making the bound hold for this
    field (zero when the gradient and L2 terms already dominate).  Direct
    field checks need a 3-d grid matching ``case.n = 3``; higher n is exponent
    arithmetic only.
    """
    if case.n != 3 or v.grid.dim != 3:
        raise ValueError(
            f"direct field checks need case.n = grid.dim = 3, got n = {case.n}, dim = {v.grid.dim}"
        )
    if float(np.abs(v.values).max()) == 0.0:
        raise ValueError("interpolation check needs a field that is not identically zero")
    lhs = lk_norm(v, case.q) ** case.q
    grad2 = gradient_sq_integral(v)
    l2sq = lk_norm(v, 2.0) ** 2
    lr_gamma = lk_norm(v, case.r) ** case.gamma
    e = case.constant_exponent
    weight = (case.C0**-e + case.C1**-e) * lr_gamma
    rhs_without_cn = weight + case.C0 * grad2 + case.C1 * l2sq
    required = max(0.0, (lhs - case.C0 * grad2 - case.C1 * l2sq) / weight)
    return InterpolationCheck(lhs=lhs, rhs_without_cn=rhs_without_cn, required_cn=required)


def interpolation_batch(
    case: InterpolationCase,
    grid: Grid,
    n_fields: int,
    seed: int = 0,
    scales: tuple[float, ...] = (0.1, 1.0, 10.0),
) -> list[float]:
    """Required constants over a batch of band-limited random fields.

    The inequality is not scale-invariant (the terms carry different
    homogeneities), so every field is probed at several amplitudes and each
    probe contributes one entry.  Seeds ``seed .. seed+n_fields-1`` pick the
    fields, so batches are reproducible and grid-refinement studies reuse
    the same continuum samples.
    """
    out = []
    for i in range(n_fields):
        base = random_band_limited(grid, seed + i)
        for s in scales:
            scaled = Field(grid, s * base.values)
            out.append(check_interpolation(case, scaled).required_cn)
    return out


@dataclass(frozen=True)
class IterationCase:
    """Data for one extremal integration of the recursive ODE chain.

    ``y0_kind`` selects the driving level-0 trajectory: ``constant`` keeps
    y0 = K; ``decaying`` uses 1 + (K-1) e^(-rate t), which starts at the
    allowed sup K and relaxes to 1.  Levels k = 1..k_max start at K^(b^k).
    """

    a_bar: float
    r0: float
    b: float
    gamma1: float
    gamma2: float
    K: float
    k_max: int
    y0_kind: str = "constant"
    y0_rate: float = 1.0

    def __post_init__(self):
        if self.a_bar <= 1:
            raise ValueError(f"a_bar must exceed 1, got {self.a_bar}")
        if self.r0 < 0:
            raise ValueError(f"r0 must be >= 0, got {self.r0}")
        if self.b <= 1:
            raise ValueError(f"b must exceed 1, got {self.b}")
        if not 0 < self.gamma2 < self.gamma1 <= self.b:
            raise ValueError(
                f"need 0 < gamma2 < gamma1 <= b (strictly ordered), got "
                f"gamma1 = {self.gamma1}, gamma2 = {self.gamma2}, b = {self.b}"
            )
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if not 0 <= self.k_max <= 6:
            raise ValueError(f"k_max must lie in 0..6 (envelope exponents reach b^k), got {self.k_max}")
        if self.y0_kind not in ("constant", "decaying"):
            raise ValueError(f"unknown y0_kind {self.y0_kind!r}")
        if self.y0_rate <= 0:
            raise ValueError(f"y0_rate must be positive, got {self.y0_rate}")

    def a_k(self, k: int) -> float:
        return self.a_bar * self.b ** (self.r0 * k)

    def log_y0(self, t: np.ndarray | float):
        if self.y0_kind == "constant":
            return np.log(self.K) * np.ones_like(np.asarray(t, dtype=float))
        return np.log1p((self.K - 1.0) * np.exp(-self.y0_rate * np.asarray(t, dtype=float)))


@dataclass(frozen=True)
class IterationCheck:
    max_ratio: float
    level_ratios: tuple[float, ...]


def check_iteration_bound(case: IterationCase, t_end: float = 30.0) -> IterationCheck:
    """Integrate the equality chain in log space and compare against the
    closed-form envelope; the theory predicts every ratio <= 1.

    Log space is mandatory: level-k magnitudes scale like (2 a_bar)^(b^k),
    which overflows linear-space floats well inside k_max = 6.
    """
    logK = math.log(case.K)
    log_bounds = [
        log_moser_bound(case.a_bar, case.r0, case.b, case.K, case.K, k) for k in range(case.k_max + 1)
    ]
    # Level 0 is the driving profile itself: sup over time is K by construction.
    level_ratios = [math.exp(logK - log_bounds[0])]
    if case.k_max == 0:
        return IterationCheck(max_ratio=max(level_ratios), level_ratios=tuple(level_ratios))

    a = [case.a_k(k) for k in range(case.k_max + 1)]

    def rhs(t, z):
        dz = np.empty_like(z)
        prev = float(case.log_y0(t))
        for k in range(1, case.k_max + 1):
            zk = z[k - 1]
            dz[k - 1] = -1.0 + a[k] * (
                math.exp(case.gamma1 * prev - zk) + math.exp(case.gamma2 * prev - zk)
            )
            prev = zk
        return dz

    z0 = np.array([case.b**k * logK for k in range(1, case.k_max + 1)])
    sol = solve_ivp(rhs, (0.0, t_end), z0, method="LSODA", rtol=1e-9, atol=1e-12, dense_output=True)
    if not sol.success:
        raise ArithmeticError(f"iteration-chain integration failed: {sol.message}")
    t_samples = np.union1d(np.linspace(0.0, t_end, 8001), sol.t)
    z_path = sol.sol(t_samples)
    for k in range(1, case.k_max + 1):
        sup_log = float(z_path[k - 1].max())
        level_ratios.append(math.exp(sup_log - log_bounds[k]))
    return IterationCheck(max_ratio=max(level_ratios), level_ratios=tuple(level_ratios))


def random_iteration_case(rng: np.random.Generator, k_max: int = 6) -> IterationCase:
    """Admissible random case in the ranges the verification report sweeps:
    a_bar in [1.1, 10], b = 2, r0 in [0, 3], gamma2 < gamma1 <= 2, K in [1, 5]."""
    gamma1 = rng.uniform(0.3, 2.0)
    gamma2 = rng.uniform(0.05, 0.95) * gamma1
    return IterationCase(
        a_bar=rng.uniform(1.1, 10.0),
        r0=rng.uniform(0.0, 3.0),
        b=2.0,
        gamma1=gamma1,
        gamma2=gamma2,
        K=rng.uniform(1.0, 5.0),
        k_max=k_max,
        y0_kind="constant" if rng.random() < 0.5 else "decaying",
    )


def iteration_batch(n_cases: int, seed: int = 0, t_end: float = 30.0, k_max: int = 6):
    """Extremal-trajectory audits for a reproducible batch of random cases."""
    rng = np.random.default_rng(seed)
    results = []
    for _ in range(n_cases):
        case = random_iteration_case(rng, k_max=k_max)
        results.append((case, check_iteration_bound(case, t_end=t_end)))
    return results
