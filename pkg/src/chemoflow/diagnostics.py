"""Run diagnostics: norm channels, the L^k energy-budget audit, and the
iterated-norm certificate machinery.

The energy audit evaluates the exact per-step balance

    d/dt I[u^k]  +  4(k-1)/k * I[|grad u^(k/2)|^2]
        - k * I[u^(k-1) f(u)]  +  k*chi * I[u^(k-1) div(u^sigma grad c)]

with the time derivative replaced by the step difference quotient and each
spatial term evaluated with the same discrete operators the stepper uses, so
the residual measures splitting and truncation error only.  For the nonlocal
reaction the f-term expands into the growth and global-dampening integrals
of the continuum identity.

Certificate arithmetic (`moser_bound`, `linf_certificate`) runs in log space:
the exponents grow like b^k and overflow linear-space floats by k near 10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Field, advective_divergence, gradient_sq_integral, integrate, lk_norm
from .reaction import ReactionSpec, ReactionVariant, eval_reaction, nonlocal_integral


def format_k(k: float) -> str:
    """Column-name rendering of a norm exponent: ``2`` not ``2.0``, else repr."""
    k = float(k)
    if k.is_integer() and abs(k) < 1e15:
        return str(int(k))
    return repr(k)


@dataclass(frozen=True)
class DiagnosticsSpec:
    """What to record and how often.

    ``norm_k_list = None`` resolves to {1, 2} plus, for the nonlocal
    reaction, the iteration base exponent ``beta + alpha`` and its double.
    ``snapshot_every = 0`` disables snapshots.
    """

    cadence_steps: int = 10
    norm_k_list: tuple[float, ...] | None = None
    snapshot_every: int = 0

    def __post_init__(self):
        if self.cadence_steps < 1:
            raise ValueError(f"cadence_steps must be >= 1, got {self.cadence_steps}")
        if self.snapshot_every < 0:
            raise ValueError(f"snapshot_every must be >= 0, got {self.snapshot_every}")
        if self.norm_k_list is not None:
            ks = tuple(float(k) for k in self.norm_k_list)
            if any(k < 1 for k in ks):
                raise ValueError(f"norm exponents must be >= 1, got {ks}")
            object.__setattr__(self, "norm_k_list", ks)

    def resolved_k_list(self, reaction: ReactionSpec) -> tuple[float, ...]:
        if self.norm_k_list is not None:
            return tuple(sorted(set(self.norm_k_list)))
        ks = {1.0, 2.0}
        if reaction.variant is ReactionVariant.NONLOCAL_LOGISTIC:
            q0 = reaction.beta + reaction.alpha
            ks.update((q0, 2.0 * q0))
        return tuple(sorted(ks))


class DiagnosticSeries:
    """Row-per-emission time series with a fixed, ordered column schema.

    Columns: t, dt, mass, one ``Lk_<k>`` per configured exponent, linf,
    nonlocal_integral, clipped_mass_cum, then per-exponent ``gradsq_<k>``
    and ``energy_resid_<k>``.
    """

    def __init__(self, k_list: tuple[float, ...]):
        self.k_list = tuple(k_list)
        names = ["t", "dt", "mass"]
        names += [f"Lk_{format_k(k)}" for k in self.k_list]
        names += ["linf", "nonlocal_integral", "clipped_mass_cum"]
        names += [f"gradsq_{format_k(k)}" for k in self.k_list]
        names += [f"energy_resid_{format_k(k)}" for k in self.k_list]
        self.columns = names
        self.rows: list[list[float]] = []

    def append(self, row: list[float]) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} entries, schema has {len(self.columns)}")
        self.rows.append([float(x) for x in row])

    def column(self, name: str) -> np.ndarray:
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise KeyError(f"no diagnostic column named {name!r}") from None
        return np.array([r[idx] for r in self.rows])

    @property
    def t(self) -> np.ndarray:
        return self.column("t")

    @property
    def linf(self) -> np.ndarray:
        return self.column("linf")

    def __len__(self) -> int:
        return len(self.rows)

    def to_csv_text(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(repr(x) for x in row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv_text())


def energy_budget_residual(
    u_prev: Field,
    u_next: Field,
    c: Field,
    dt: float,
    k: float,
    chi: float = 1.0,
    sigma: float = 1.0,
    reaction: ReactionSpec | None = None,
) -> float:
    """Signed residual of the discrete L^k energy balance across one step.

    All spatial terms are evaluated at the ``u_prev`` time level with the
    same stencils the stepper uses; only the difference quotient looks at
    ``u_next``.  The result is normalized by ``max(1, integral(u_prev^k))``.
    Vanishes to rounding at the homogeneous steady state and decays at the
    splitting order O(dt) (plus stencil truncation) on smooth runs.
    """
    if k <= 1:
        raise ValueError(f"energy budget needs k > 1, got {k}")
    if dt <= 0:
        raise ValueError(f"energy budget needs dt > 0, got {dt}")
    reaction = reaction if reaction is not None else ReactionSpec.off()
    grid = u_prev.grid
    up = np.clip(u_prev.values, 0.0, None)
    vol = grid.cell_volume

    int_uk_prev = vol * float((up**k).sum())
    int_uk_next = vol * float((np.clip(u_next.values, 0.0, None) ** k).sum())
    ddt = (int_uk_next - int_uk_prev) / dt

    dissipation = (4.0 * (k - 1.0) / k) * gradient_sq_integral(Field(grid, up ** (k / 2.0)))

    f_vals = eval_reaction(u_prev, reaction).values
    growth = k * vol * float((up ** (k - 1.0) * f_vals).sum())

    drift = 0.0
    if chi != 0.0:
        adv = advective_divergence(u_prev, c, sigma=sigma).values
        drift = k * chi * vol * float((up ** (k - 1.0) * adv).sum())

    residual = ddt + dissipation - growth + drift
    return residual / max(1.0, int_uk_prev)


def diagnostic_row(
    t: float,
    dt: float,
    u: Field,
    k_list: tuple[float, ...],
    reaction: ReactionSpec,
    clipped_mass_cum: float,
    u_prev: Field | None = None,
    c_step: Field | None = None,
    chi: float = 1.0,
    sigma: float = 1.0,
) -> list[float]:
    """Assemble one series row; the energy residuals need the previous state
    and the chemical field the step actually used (zero on the initial row)."""
    row = [t, dt, lk_norm(u, 1.0)]
    row += [lk_norm(u, k) for k in k_list]
    row += [lk_norm(u, math.inf), nonlocal_integral(u, reaction), clipped_mass_cum]
    uv = np.clip(u.values, 0.0, None)
    row += [gradient_sq_integral(Field(u.grid, uv ** (k / 2.0))) for k in k_list]
    for k in k_list:
        if u_prev is None or c_step is None or dt <= 0 or k <= 1:
            row.append(0.0)
        else:
            row.append(
                energy_budget_residual(u_prev, u, c_step, dt, k, chi=chi, sigma=sigma, reaction=reaction)
            )
    return row


@dataclass(frozen=True)
class MoserSchedule:
    """Exponent ladder ``q_k = 2^k + beta + alpha - 1`` for the norm iteration.

    The ladder starts at ``q_0 = beta + alpha`` and satisfies the midpoint
    identity ``q_{k-1} = (q_k + beta + alpha - 1)/2``.
    """

    alpha: float
    beta: float
    k_max: int

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError(f"schedule needs alpha >= 1, got {self.alpha}")
        if self.beta <= 1:
            raise ValueError(f"schedule needs beta > 1, got {self.beta}")
        if self.k_max < 0:
            raise ValueError(f"schedule needs k_max >= 0, got {self.k_max}")

    def q(self, k: int) -> float:
        if not 0 <= k <= self.k_max:
            raise ValueError(f"ladder index {k} outside [0, {self.k_max}]")
        return 2.0**k + self.beta + self.alpha - 1.0

    @property
    def exponents(self) -> tuple[float, ...]:
        return tuple(self.q(k) for k in range(self.k_max + 1))


def log_moser_bound(a_bar: float, r0: float, b: float, K: float, sup_y0: float, k: int) -> float:
    """Natural log of the closed-form iteration envelope at level ``k``:

        (2a)^((b^k-1)/(b-1)) * b^(r0*(b(b^k-1)/(b-1)^2 - k/(b-1)))
            * max(sup_y0, K)^(b^k)
    """
    if b <= 1:
        raise ValueError(f"iteration base b must exceed 1, got {b}")
    if a_bar < 1:
        raise ValueError(f"envelope constant a_bar must be >= 1, got {a_bar}")
    if K < 1:
        raise ValueError(f"initial-data constant K must be >= 1, got {K}")
    if r0 < 0:
        raise ValueError(f"exponent rate r0 must be >= 0, got {r0}")
    if k < 0 or int(k) != k:
        raise ValueError(f"level k must be a nonnegative integer, got {k}")
    if sup_y0 < 0:
        raise ValueError(f"sup_y0 must be nonnegative, got {sup_y0}")
    bk = b ** float(k)
    geom = (bk - 1.0) / (b - 1.0)
    out = geom * math.log(2.0 * a_bar)
    out += r0 * (b * (bk - 1.0) / (b - 1.0) ** 2 - k / (b - 1.0)) * math.log(b)
    out += bk * math.log(max(sup_y0, K))
    return out


def moser_bound(schedule: MoserSchedule, a_bar: float, r0: float, b: float, K: float, sup_y0: float, k: int) -> float:
    """Linear-space value of the iteration envelope (may overflow to inf for
    large ``k``; use `log_moser_bound` for slope studies)."""
    if k > schedule.k_max:
        raise ValueError(f"level {k} exceeds the schedule's k_max = {schedule.k_max}")
    return math.exp(log_moser_bound(a_bar, r0, b, K, sup_y0, k))


def linf_certificate(series: DiagnosticSeries, schedule: MoserSchedule, a_bar: float, r0: float) -> float:
    """Illustrative sup-norm certificate 2a * 2^(2 r0) * max(sup_t I[u^q0], K0).

    ``K0`` is read off the first row as max of the L^q0 and sup norms of the
    initial data.  The constants ``a_bar`` and ``r0`` absorb embedding
    constants that the theory leaves unquantified, so this is a reporting
    aid (certificate vs. observed sup norm), not a proof artifact.
    """
    if a_bar < 1 or r0 < 0:
        raise ValueError("certificate needs a_bar >= 1 and r0 >= 0")
    if not series.rows:
        raise ValueError("certificate needs a non-empty diagnostic series")
    q0 = schedule.q(0)
    col = f"Lk_{format_k(q0)}"
    if col not in series.columns:
        raise KeyError(
            f"series lacks the {col} channel required by the certificate; "
            f"configure norm_k_list to include {format_k(q0)}"
        )
    lq0 = series.column(col)
    sup_integral = float((lq0**q0).max())
    k0 = max(float(lq0[0]), float(series.column("linf")[0]))
    return 2.0 * a_bar * 2.0 ** (2.0 * r0) * max(sup_integral, k0)
