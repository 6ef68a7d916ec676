"""Norms, discrete inner products and convergence-rate measurement.

Fields are piecewise linear on a uniform grid and pinned to zero at the
far end. L2 and H1 quantities are computed from closed-form per-element
integrals, never by sampling, so convergence tables carry no quadrature
noise. The discrete inner products are the uniform-weight and
trapezoid-weight sums whose mismatch with the exact L2 product is the
quadrature error of the lumped schemes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace as dc_replace

import numpy as np

from .analytic import ContinuousModeShape, build_continuous_mode, build_discrete_mode
from .fem import (
    ElongationField,
    MassVariant,
    UniformGrid,
    assemble,
    harmonic_state,
    solve_transient,
)
from .model import Forcing, SwimmerParams


@dataclass(frozen=True)
class ErrorRecord:
    """Errors of one run against the continuous profile, at one grid size."""

    n: int
    l2_error: float
    h1_error: float

    def __post_init__(self) -> None:
        for name in ("l2_error", "h1_error"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and non-negative, got {value!r}")


@dataclass(frozen=True)
class RateEstimate:
    """Least-squares power law error ~ C*h^slope from a log-log fit.

    When the fit over all points is poor (r_squared < 0.99) the coarsest
    point is dropped and the refit attached; both fits stay available.
    """

    slope: float
    intercept: float
    r_squared: float
    n_points: int
    refit: "RateEstimate | None" = None


def l2_norm(field: ElongationField) -> float:
    """Exact L2 norm of the piecewise-linear interpolant."""
    u = field.values
    h = field.grid.spacing
    left, right = u[:-1], u[1:]
    return math.sqrt((h / 3.0) * float(np.sum(left * left + left * right + right * right)))


def h1_seminorm(field: ElongationField) -> float:
    """Exact H1 seminorm; the derivative is piecewise constant."""
    du = np.diff(field.values)
    return math.sqrt(float(np.sum(du * du)) / field.grid.spacing)


def l2_inner(u: ElongationField, v: ElongationField) -> float:
    """Exact L2 inner product of two piecewise-linear fields on one grid."""
    if u.grid != v.grid:
        raise ValueError("fields live on different grids")
    h = u.grid.spacing
    ul, ur = u.values[:-1], u.values[1:]
    vl, vr = v.values[:-1], v.values[1:]
    return (h / 6.0) * float(np.sum(2.0 * ul * vl + ul * vr + ur * vl + 2.0 * ur * vr))


def discrete_inner_products(u: ElongationField, v: ElongationField) -> tuple[float, float, float]:
    """Uniform-weight product, trapezoid-weight product and quadrature defect.

    Returns (u,v)_h = h * sum_{j=1..n} u_j v_j, the trapezoid variant with
    half weight on the driven end, and delta_h = (u,v)_h - (u,v) where
    (u,v) is exact. The pinned node contributes to none of them.
    """
    if u.grid != v.grid:
        raise ValueError("fields live on different grids")
    h = u.grid.spacing
    products = u.values[:-1] * v.values[:-1]
    paren_h = h * float(np.sum(products))
    angle_h = paren_h - 0.5 * h * products[0]
    return paren_h, angle_h, paren_h - l2_inner(u, v)


@dataclass(frozen=True)
class NormEquivalence:
    """Outcome of the norm-equivalence inequalities for one field."""

    lower_ok: bool  # (1/6)(v,v)_h <= (v,v)
    upper_ok: bool  # (v,v) <= (v,v)_h
    endpoint_lower_ok: bool  # h*v(y_1)^2 <= (v,v)_h
    endpoint_upper_ok: bool  # (v,v)_h <= 6*(v,v)

    @property
    def all_ok(self) -> bool:
        return self.lower_ok and self.upper_ok and self.endpoint_lower_ok and self.endpoint_upper_ok


def _leq(a: float, b: float) -> bool:
    # equality cases (zero field, single-hat field) must pass despite roundoff
    return a <= b + 1e-12 * (abs(a) + abs(b))


def norm_equivalence_check(v: ElongationField) -> NormEquivalence:
    """Check the uniform-product/L2 norm equivalence chain on one field."""
    paren_h, _, _ = discrete_inner_products(v, v)
    exact = l2_inner(v, v)
    first = v.grid.spacing * float(v.values[0]) ** 2
    return NormEquivalence(
        lower_ok=_leq(paren_h / 6.0, exact),
        upper_ok=_leq(exact, paren_h),
        endpoint_lower_ok=_leq(first, paren_h),
        endpoint_upper_ok=_leq(paren_h, 6.0 * exact),
    )


def error_vs_analytic(numeric: ElongationField, mode: ContinuousModeShape, t: float) -> ErrorRecord:
    """L2 and H1 errors of a nodal field against the continuous profile at time t.

    The continuous solution is interpolated at the nodes first, so this
    measures the distance between two piecewise-linear functions.
    """
    exact = mode.values(numeric.grid.nodes, t)
    exact[-1] = 0.0  # pinned analytically; clear roundoff so the field stays valid
    diff = ElongationField(numeric.grid, numeric.values - exact)
    return ErrorRecord(n=numeric.grid.n, l2_error=l2_norm(diff), h1_error=h1_seminorm(diff))


def max_error_over_period(numeric_at, mode: ContinuousModeShape, samples: int = 16) -> ErrorRecord:
    """Worst-case errors over equispaced times in one period.

    numeric_at(t) must return the ElongationField of the numeric solution
    at time t; the L2 and H1 maxima may occur at different times.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    period = 2.0 * math.pi / mode.omega
    worst_l2 = worst_h1 = 0.0
    n = None
    for k in range(samples):
        record = error_vs_analytic(numeric_at(k * period / samples), mode, k * period / samples)
        worst_l2 = max(worst_l2, record.l2_error)
        worst_h1 = max(worst_h1, record.h1_error)
        n = record.n
    return ErrorRecord(n=n, l2_error=worst_l2, h1_error=worst_h1)


def fit_rate(records: list[ErrorRecord], which: str) -> RateEstimate:
    """Fit log(error) against log(1/n) by least squares.

    which selects the error column, "l2" or "h1". The slope equals the
    order in h on a fixed domain; the intercept is the extrapolated
    log-error at n = 1.
    """
    key = which.lower()
    if key not in ("l2", "h1"):
        raise ValueError(f"which must be 'l2' or 'h1', got {which!r}")
    if len(records) < 3:
        raise ValueError("rate fit needs at least 3 records")
    ns = np.array([record.n for record in records], dtype=float)
    if len(set(ns.tolist())) != len(records):
        raise ValueError("rate fit needs distinct grid sizes")
    errors = np.array(
        [record.l2_error if key == "l2" else record.h1_error for record in records]
    )
    if np.any(errors <= 0.0):
        raise ValueError("errors must be strictly positive for a log-log fit")

    log_h = -np.log(ns)
    log_e = np.log(errors)
    slope, intercept = np.polyfit(log_h, log_e, 1)
    residual = log_e - (slope * log_h + intercept)
    total = log_e - np.mean(log_e)
    ss_tot = float(np.sum(total * total))
    ss_res = float(np.sum(residual * residual))
    r_squared = 1.0 if ss_tot == 0.0 and ss_res == 0.0 else 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 0.0
    estimate = RateEstimate(
        slope=float(slope), intercept=float(intercept), r_squared=r_squared, n_points=len(records)
    )
    if estimate.r_squared < 0.99 and len(records) >= 4:
        coarsest = min(records, key=lambda record: record.n)
        kept = [record for record in records if record is not coarsest]
        refit = fit_rate(kept, which)
        estimate = dc_replace(estimate, refit=refit)
    return estimate


def convergence_study(
    params: SwimmerParams,
    forcing: Forcing,
    variant: MassVariant,
    n_list: list[int],
    steps_per_period: int = 16384,
    sample_time: float | None = None,
) -> list[ErrorRecord]:
    """Errors of the chosen scheme against the continuous profile over a grid sweep.

    The nspring scheme is evaluated through its closed-form periodic mode.
    The lumped and galerkin schemes start on their own semi-discrete
    periodic orbit and are stepped through one period with Crank-Nicolson,
    so the reported error is spatial up to the O(dt^2) stepping error;
    steps_per_period is chosen large enough that halving dt moves the
    finest-grid errors by well under 1%.
    """
    if len(n_list) < 1:
        raise ValueError("n_list must not be empty")
    mode = build_continuous_mode(params, forcing)
    t_report = 2.0 * math.pi / forcing.omega if sample_time is None else sample_time
    records = []
    for n in n_list:
        refined = dc_replace(params, n_springs=int(n))
        if variant is MassVariant.NSPRING:
            discrete = build_discrete_mode(refined, forcing)
            grid = UniformGrid(n=refined.n_springs, spacing=refined.h, length=refined.Lambda)
            field = ElongationField(grid=grid, values=discrete.node_values(t_report))
        else:
            field = _stepped_period_state(refined, forcing, variant, steps_per_period, t_report)
        records.append(error_vs_analytic(field, mode, t_report))
    return records


def _stepped_period_state(
    params: SwimmerParams,
    forcing: Forcing,
    variant: MassVariant,
    steps_per_period: int,
    t_report: float,
) -> ElongationField:
    system = assemble(params, forcing, variant)
    amplitudes = harmonic_state(system)
    initial = ElongationField(
        system.grid, np.concatenate([np.real(amplitudes), [0.0]])
    )
    dt = (2.0 * math.pi / forcing.omega) / steps_per_period
    nsteps = round(t_report / dt)
    if abs(nsteps * dt - t_report) > 1e-9 * t_report:
        raise ValueError("sample_time must be a whole number of steps")
    trajectory = solve_transient(system, initial, t_report, dt, sample_every=nsteps)
    return ElongationField(system.grid, trajectory.values[-1])
