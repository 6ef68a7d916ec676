"""Net stroke displacement of the head sphere, sweeps and optimization.

Over one forcing period most terms of the head velocity average to zero;
the net drift comes from the hydrodynamic coupling between the tail
elongations and the instantaneous arm lengths. Both the bead-chain
formula and its continuous-tail limit are integrated here with periodic
trapezoid quadrature, which is spectrally accurate for these smooth
periodic integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace as dc_replace

import numpy as np

from .analytic import (
    ContinuousModeShape,
    DiscreteModeShape,
    build_continuous_mode,
    build_discrete_mode,
)
from .model import Forcing, SwimmerParams, derive_groups, params_for_k_omega

SWEEP_AXES = ("eps_tilde", "k_omega")


@dataclass(frozen=True)
class StrokeResult:
    """Net head displacement over one period and the parameters that produced it."""

    displacement: float
    eps_tilde: float
    k_omega: float
    omega: float
    n: int
    quadrature_points: int

    def __post_init__(self) -> None:
        if not math.isfinite(self.displacement):
            raise ValueError(f"displacement must be finite, got {self.displacement!r}")


@dataclass(frozen=True)
class SweepTable:
    """Displacements along one parameter axis; failed points carry a message."""

    axis: str
    values: tuple[float, ...]
    results: tuple[StrokeResult | None, ...]
    failures: tuple[str | None, ...]

    def __post_init__(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if not (len(self.values) == len(self.results) == len(self.failures)):
            raise ValueError("values, results and failures must align")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("sweep values must be strictly increasing")

    def displacements(self) -> np.ndarray:
        """Displacement per point, NaN where the point failed."""
        return np.array(
            [math.nan if result is None else result.displacement for result in self.results]
        )

    def argbest(self) -> int:
        """Index of the largest displacement magnitude among successful points."""
        magnitudes = np.abs(self.displacements())
        if np.all(np.isnan(magnitudes)):
            raise ValueError("sweep produced no successful points")
        return int(np.nanargmax(magnitudes))


@dataclass(frozen=True)
class OptimizeResult:
    """Converged optimum of |displacement| over k_omega."""

    k_omega_opt: float
    k_tilde_equiv: float
    displacement: float
    iterations: int


def instantaneous_v1(params: SwimmerParams, forcing: Forcing, state: np.ndarray, t: float) -> float:
    """Velocity of the head sphere given the tail elongations at time t.

    state holds the n+1 node elongations (last entry the pinned zero).
    The terms are the prescribed arm-rate share, the direct spring pull,
    the head-driver interaction, and the tail interaction sum over
    cumulative arm lengths.
    """
    n = params.n_springs
    ell = np.asarray(state, dtype=float)
    if ell.shape != (n + 1,):
        raise ValueError(f"state must have {n + 1} entries, got shape {ell.shape}")
    k = params.relaxation_rate
    arm = float(forcing.arm_length(t))
    arm_rate = float(forcing.arm_velocity(t))
    cums = arm + np.cumsum(ell[:n] / n + params.h)
    if arm <= 0.0 or np.any(cums <= 0.0):
        raise ValueError("unphysical state: non-positive cumulative arm length")
    tail = 1.5 * params.a_tilde * k * float(np.sum((ell[:n] - ell[1:]) / cums))
    return (
        0.5 * arm_rate
        - (params.a_tilde / (2.0 * params.a1)) * k * ell[0]
        - 0.75 * params.a1 * arm_rate / arm
        - 0.75 * k * params.a_tilde * ell[0] / arm
        + tail
    )


def _check_discrete(params: SwimmerParams, forcing: Forcing, mode: DiscreteModeShape) -> None:
    if mode.n != params.n_springs:
        raise ValueError(f"mode was built for n={mode.n}, params have n={params.n_springs}")
    if not math.isclose(mode.omega, forcing.omega, rel_tol=1e-12):
        raise ValueError("mode and forcing disagree on omega")


def stroke_displacement_discrete(
    params: SwimmerParams,
    forcing: Forcing,
    mode: DiscreteModeShape,
    m_quad: int = 256,
) -> StrokeResult:
    """Net displacement over one period from the bead-chain periodic mode.

    Only the two velocity terms with nonzero time average survive the
    period integral; they are sampled at m_quad equispaced times and
    integrated with the periodic trapezoid rule (equal weights).
    """
    if m_quad < 64:
        raise ValueError(f"m_quad must be >= 64, got {m_quad}")
    _check_discrete(params, forcing, mode)
    n = params.n_springs
    k = params.relaxation_rate
    period = forcing.period
    times = period * np.arange(m_quad) / m_quad

    ell = np.real(mode.node_amplitudes()[:, None] * np.exp(1j * forcing.omega * times))
    arm = np.asarray(forcing.arm_length(times))
    cums = arm[None, :] + np.cumsum(ell[:n] / n + params.h, axis=0)
    if np.any(cums <= 0.0):
        raise ValueError("unphysical state: non-positive cumulative arm length")
    head = -0.75 * k * params.a_tilde * ell[0] / arm
    tail = 1.5 * params.a_tilde * k * np.sum((ell[:n] - ell[1:]) / cums, axis=0)
    displacement = period * float(np.mean(head + tail))
    return StrokeResult(
        displacement=displacement,
        eps_tilde=forcing.eps_tilde,
        k_omega=derive_groups(params, forcing).k_omega,
        omega=forcing.omega,
        n=n,
        quadrature_points=m_quad,
    )


def stroke_displacement_continuous(
    params: SwimmerParams,
    forcing: Forcing,
    mode: ContinuousModeShape,
    m_quad: int = 256,
    m_space: int = 1024,
) -> StrokeResult:
    """Net displacement over one period in the continuous-tail limit.

    The tail term becomes a double integral of the elongation gradient
    against the reciprocal cumulative length chi(y, t); chi's inner
    integral and the spatial integral use composite trapezoid on m_space
    intervals, the time integral the periodic trapezoid rule.
    """
    if m_quad < 64:
        raise ValueError(f"m_quad must be >= 64, got {m_quad}")
    if m_space < 128:
        raise ValueError(f"m_space must be >= 128, got {m_space}")
    if not math.isclose(mode.length, params.Lambda, rel_tol=1e-12):
        raise ValueError("mode and params disagree on the tail length")
    if not math.isclose(mode.omega, forcing.omega, rel_tol=1e-12):
        raise ValueError("mode and forcing disagree on omega")
    lam = params.Lambda
    k = params.relaxation_rate
    period = forcing.period
    times = period * np.arange(m_quad) / m_quad
    y = np.linspace(0.0, lam, m_space + 1)
    dy = lam / m_space

    phase = np.exp(1j * forcing.omega * times)
    ell = np.real(mode.profile(y)[:, None] * phase)
    grad = np.real(mode.profile_gradient(y)[:, None] * phase)
    arm = np.asarray(forcing.arm_length(times))

    # inner cumulative integral of ell/Lambda from 0 to y, trapezoid per slab
    slabs = 0.5 * dy * (ell[:-1] + ell[1:]) / lam
    cumint = np.vstack([np.zeros(m_quad), np.cumsum(slabs, axis=0)])
    denom = arm[None, :] + y[:, None] + cumint
    if np.any(denom <= 0.0):
        raise ValueError("unphysical state: chi denominator non-positive")
    chi = 1.0 / denom

    integrand = -1.5 * k * params.a_tilde * grad * chi
    weights = np.full(m_space + 1, dy)
    weights[0] = weights[-1] = 0.5 * dy
    tail_of_t = weights @ integrand
    head_of_t = -0.75 * k * params.a_tilde * ell[0] / arm
    displacement = period * float(np.mean(tail_of_t + head_of_t))
    return StrokeResult(
        displacement=displacement,
        eps_tilde=forcing.eps_tilde,
        k_omega=mode.k_omega,
        omega=forcing.omega,
        n=params.n_springs,
        quadrature_points=m_quad,
    )


def chi_bounds(params: SwimmerParams, forcing: Forcing) -> tuple[float, float]:
    """Valid range (0, 1/(L(1-eps_tilde))] for the reciprocal cumulative length."""
    return 0.0, 1.0 / (forcing.L_ref * (1.0 - forcing.eps_tilde))


def sweep(
    params: SwimmerParams,
    forcing: Forcing,
    axis: str,
    values,
    m_quad: int = 256,
) -> SweepTable:
    """Stroke displacement along one parameter axis.

    axis "eps_tilde" varies the drive amplitude; axis "k_omega" retunes
    the spring constant at fixed omega. Points that fail numerically are
    recorded and the sweep continues.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    values = tuple(float(v) for v in values)
    for v in values:
        if axis == "eps_tilde" and not 0.0 <= v < 1.0:
            raise ValueError(f"eps_tilde value {v!r} outside [0, 1)")
        if axis == "k_omega" and not v > 0.0:
            raise ValueError(f"k_omega value {v!r} must be positive")

    results: list[StrokeResult | None] = []
    failures: list[str | None] = []
    for v in values:
        if axis == "eps_tilde":
            point_params, point_forcing = params, dc_replace(forcing, eps_tilde=v)
        else:
            point_params, point_forcing = params_for_k_omega(params, forcing, v), forcing
        try:
            mode = build_discrete_mode(point_params, point_forcing)
            results.append(
                stroke_displacement_discrete(point_params, point_forcing, mode, m_quad)
            )
            failures.append(None)
        except (ValueError, FloatingPointError) as exc:
            results.append(None)
            failures.append(str(exc))
    return SweepTable(axis=axis, values=values, results=tuple(results), failures=tuple(failures))


def optimize_k_omega(
    params: SwimmerParams,
    forcing: Forcing,
    bracket: tuple[float, float] = (1e-2, 1e2),
    rel_tol: float = 1e-4,
    m_quad: int = 256,
) -> OptimizeResult:
    """Golden-section maximization of |displacement| over log k_omega.

    The bracket must contain an interior maximum of the magnitude;
    convergence at a bracket edge is reported as an error. rel_tol is the
    final bracket width in log coordinates, i.e. the relative uncertainty
    of the returned k_omega.
    """
    lo, hi = bracket
    if not (0.0 < lo < hi):
        raise ValueError(f"bracket must satisfy 0 < lo < hi, got {bracket!r}")
    if not rel_tol > 0.0:
        raise ValueError(f"rel_tol must be positive, got {rel_tol!r}")

    def objective(u: float) -> float:
        point = params_for_k_omega(params, forcing, math.exp(u))
        mode = build_discrete_mode(point, forcing)
        return abs(stroke_displacement_discrete(point, forcing, mode, m_quad).displacement)

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = objective(c), objective(d)
    iterations = 0
    while b - a > rel_tol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = objective(d)
        else:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = objective(c)
        iterations += 1

    u_opt = 0.5 * (a + b)
    if u_opt - math.log(lo) < 2.0 * rel_tol or math.log(hi) - u_opt < 2.0 * rel_tol:
        raise ValueError("no interior extremum: optimizer converged at a bracket edge")
    k_omega_opt = math.exp(u_opt)
    best = params_for_k_omega(params, forcing, k_omega_opt)
    mode = build_discrete_mode(best, forcing)
    result = stroke_displacement_discrete(best, forcing, mode, m_quad)
    return OptimizeResult(
        k_omega_opt=k_omega_opt,
        k_tilde_equiv=best.k_tilde,
        displacement=result.displacement,
        iterations=iterations,
    )
