"""Exact eigenstates in position space, momentum-space transforms, and
probability densities.

Every state handled here has the chirped Gaussian-Hermite shape

    psi_n(x, t) = exp(i phase) exp(i c x^2) w^{1/4} phi_n(sqrt(w) x)

where phi_n are the orthonormal Hermite functions, w(t) sets the inverse
squared width and c(t) the quadratic chirp. The three named scenarios
differ only in (w, c, phase); the general form takes them from an
auxiliary-amplitude solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridTooSmall, UnsupportedScenario
from .ermakov import RhoSolution, analytic_rho
from .model import (Scenario, ScenarioKind, SpatialGrid, ensure_valid_time,
                    frequency_at, mass_at)

N_MAX = 64
DEFAULT_N_POINTS = 4096
# Relative density the state may carry at the grid edge before the
# discrete momentum transform is considered aliased.
EDGE_DECAY = 1e-12


def hermite(n: int, u: float) -> float:
    """Physicists' Hermite polynomial H_n(u) by the three-term recurrence
    H_{k+1} = 2 u H_k - 2 k H_{k-1}.

    Supported range n <= 64; raises OverflowError if the unnormalized
    recurrence leaves double range (large n together with large |u|).
    """
    if not isinstance(n, (int, np.integer)) or n < 0 or n > N_MAX:
        raise ValueError(f"n must be an integer in [0, {N_MAX}], got {n!r}")
    u = float(u)
    h_prev, h = 1.0, 2.0 * u
    if n == 0:
        return 1.0
    for k in range(1, n):
        h_prev, h = h, 2.0 * u * h - 2.0 * k * h_prev
    if not math.isfinite(h):
        raise OverflowError(f"H_{n}({u}) exceeds double range")
    return h


def hermite_functions(n_max: int, u: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite functions phi_0..phi_n_max sampled at u.

    phi_n(u) = H_n(u) exp(-u^2/2) / sqrt(2^n n! sqrt(pi)), evaluated with
    the normalized recurrence so intermediates never overflow.
    """
    if n_max < 0 or n_max > N_MAX:
        raise ValueError(f"n_max must lie in [0, {N_MAX}]")
    u = np.asarray(u, dtype=float)
    out = np.empty((n_max + 1,) + u.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * u * u)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * u * out[0]
    for k in range(1, n_max):
        out[k + 1] = (math.sqrt(2.0 / (k + 1)) * u * out[k]
                      - math.sqrt(k / (k + 1.0)) * out[k - 1])
    return out


def _chirped_state(n, w, chirp, phase, x):
    """Assemble exp(i phase) exp(i chirp x^2) w^{1/4} phi_n(sqrt(w) x)."""
    x = np.asarray(x, dtype=float)
    u = math.sqrt(w) * x
    phi = hermite_functions(n, u)[n]
    return np.exp(1j * (phase + chirp * x * x)) * (w ** 0.25) * phi


def psi_static(n: int, s: Scenario, t: float, x) -> np.ndarray:
    """Stationary eigenstate of the constant-coefficient oscillator with
    phase exp(-i (n + 1/2) omega0 t)."""
    w = s.m0 * s.omega0 / s.hbar
    return _chirped_state(n, w, 0.0, -(n + 0.5) * s.omega0 * t, x)


def psi_pulsating(n: int, s: Scenario, t: float, x) -> np.ndarray:
    """Eigenstate for the pulsating-mass profile m(t) = m0 cos^2(nu t):

      psi_n = e^{-i(n+1/2) Omega t} [m(t) Omega / (pi hbar)]^{1/4} (2^n n!)^{-1/2}
              exp[(i m(t) / 2 hbar)(nu tan(nu t) + i Omega) x^2]
              H_n(sqrt(m(t) Omega / hbar) x)

    with Omega^2 = omega0^2 + nu^2. For nu -> 0 this reduces to the
    stationary eigenstate.
    """
    if s.kind is not ScenarioKind.PULSATING_MASS:
        raise UnsupportedScenario("psi_pulsating needs a pulsating-mass scenario")
    m_t = mass_at(s, t)  # raises inside the singular guard
    omega_eff = s.omega_eff
    w = m_t * omega_eff / s.hbar
    chirp = m_t * s.nu * math.tan(s.nu * t) / (2.0 * s.hbar)
    return _chirped_state(n, w, chirp, -(n + 0.5) * omega_eff * t, x)


def psi_inverse_square(n: int, s: Scenario, t: float, x) -> np.ndarray:
    """Eigenstate for the w(t) = omega0 / t^2 profile:

      psi_n = (2^n n! t)^{-1/2} (m omega0 / pi hbar)^{1/4}
              e^{i (n+1/2) omega0 / t}
              exp[(i m / 2 hbar t)(1 + i omega0 / t) x^2]
              H_n(sqrt(m omega0 / hbar) x / t)

    At t = 1 (where w = omega0) the density coincides with the
    stationary oscillator density.
    """
    if s.kind is not ScenarioKind.INVERSE_SQUARE_FREQUENCY:
        raise UnsupportedScenario("psi_inverse_square needs an inverse-square scenario")
    ensure_valid_time(s, t)
    w = s.m0 * s.omega0 / (s.hbar * t * t)
    chirp = s.m0 / (2.0 * s.hbar * t)
    return _chirped_state(n, w, chirp, (n + 0.5) * s.omega0 / t, x)


def psi_general(n: int, s: Scenario, rho: RhoSolution, t: float, x) -> np.ndarray:
    """Eigenstate built from an auxiliary-amplitude solution:

      psi_n = e^{i alpha_n} [pi^{1/2} hbar^{1/2} n! 2^n rho]^{-1/2}
              exp[(i m / 2 hbar)(rho'/rho + i/(m rho^2)) x^2]
              H_n(x / (hbar^{1/2} rho))

    alpha_n = -(n + 1/2) gamma(t) with gamma anchored at the solution's
    first grid time, so comparisons against the scenario-specific closed
    forms are meaningful only up to a global phase.
    """
    ensure_valid_time(s, t)
    r = rho.rho_at(t)
    r_dot = rho.rho_dot_at(t)
    m_t = mass_at(s, t)
    w = 1.0 / (s.hbar * r * r)
    chirp = m_t * r_dot / (2.0 * s.hbar * r)
    phase = -(n + 0.5) * rho.gamma_at(t)
    return _chirped_state(n, w, chirp, phase, x)


def _inverse_width_sq(s: Scenario, t: float) -> float:
    """w(t): ground-state density is proportional to exp(-w x^2)."""
    r, _ = analytic_rho(s, t)
    return 1.0 / (s.hbar * r * r)


def sigma_x_sq(s: Scenario, t: float, n: int = 0) -> float:
    """Position variance of eigenstate n; (2n+1) times the ground-state
    value hbar rho^2 / 2, as for any Gaussian-Hermite ladder."""
    r, _ = analytic_rho(s, t)
    return (2 * n + 1) * 0.5 * s.hbar * r * r


def sigma_p_sq(s: Scenario, t: float, n: int = 0) -> float:
    """Momentum variance of eigenstate n.

    Ground-state value (hbar/2)(1/rho^2 + m^2 rho'^2), obtained by
    Fourier-transforming the chirped Gaussian; the chirp contributes the
    m^2 rho'^2 term, so the uncertainty product exceeds hbar/2 whenever
    rho' is nonzero.
    """
    r, r_dot = analytic_rho(s, t)
    m_t = mass_at(s, t)
    return (2 * n + 1) * 0.5 * s.hbar * (1.0 / (r * r) + (m_t * r_dot) ** 2)


def default_grid(n: int, s: Scenario, t: float,
                 n_points: int = DEFAULT_N_POINTS) -> SpatialGrid:
    """Symmetric grid spanning +-10 standard deviations of eigenstate n.

    Gaussian tails are below 1e-21 at the edges, which kills aliasing in
    the discrete momentum transform.
    """
    half_width = 10.0 * math.sqrt(sigma_x_sq(s, t, n))
    return SpatialGrid(-half_width, half_width, n_points)


@dataclass
class WaveState:
    """Complex amplitudes of eigenstate n on a spatial grid at fixed t."""

    n: int
    t: float
    grid: SpatialGrid
    amplitudes: np.ndarray
    scenario: Scenario

    @property
    def x(self) -> np.ndarray:
        return self.grid.points


@dataclass
class MomentumState:
    """Momentum-space amplitudes on the FFT-conjugate grid, ascending p."""

    n: int
    t: float
    p: np.ndarray
    amplitudes: np.ndarray
    scenario: Scenario


def eigenstate(n: int, s: Scenario, t: float, grid: SpatialGrid = None,
               rho: RhoSolution = None) -> WaveState:
    """Sample eigenstate n on a grid (default: auto-sized for (n, s, t)).

    Named scenario kinds use their closed forms; custom scenarios need an
    explicit auxiliary-amplitude solution.
    """
    if n < 0 or n > N_MAX:
        raise ValueError(f"n must lie in [0, {N_MAX}]")
    if grid is None:
        if rho is not None:
            # size from the supplied amplitude; custom profiles have no closed form
            half_width = 10.0 * math.sqrt((2 * n + 1) * 0.5 * s.hbar) * rho.rho_at(t)
            grid = SpatialGrid(-half_width, half_width, DEFAULT_N_POINTS)
        else:
            grid = default_grid(n, s, t)
    x = grid.points
    if rho is not None:
        amps = psi_general(n, s, rho, t, x)
    elif s.kind is ScenarioKind.STATIC:
        amps = psi_static(n, s, t, x)
    elif s.kind is ScenarioKind.PULSATING_MASS:
        amps = psi_pulsating(n, s, t, x)
    elif s.kind is ScenarioKind.INVERSE_SQUARE_FREQUENCY:
        amps = psi_inverse_square(n, s, t, x)
    else:
        raise UnsupportedScenario("custom scenarios need an explicit rho solution")
    return WaveState(n=n, t=t, grid=grid, amplitudes=amps, scenario=s)


def momentum_transform(w: WaveState) -> MomentumState:
    """Discrete approximation of psi~(p) = (2 pi hbar)^{-1/2} integral
    dx e^{-i p x / hbar} psi(x).

    The FFT convention matches the transform's sign, and the returned
    rectangle sums satisfy Parseval exactly: sum |psi~|^2 dp = sum |psi|^2 dx.
    """
    psi = w.amplitudes
    dens = np.abs(psi) ** 2
    peak = dens.max()
    if peak > 0 and max(dens[0], dens[-1]) > EDGE_DECAY * peak:
        raise GridTooSmall("density at grid edges above the 1e-12 decay threshold")
    hbar = w.scenario.hbar
    dx = w.grid.spacing
    x0 = w.grid.x_min
    p = 2.0 * np.pi * hbar * np.fft.fftfreq(w.grid.n_points, d=dx)
    amps = dx / math.sqrt(2.0 * np.pi * hbar) * np.exp(-1j * p * x0 / hbar) * np.fft.fft(psi)
    order = np.argsort(p)
    return MomentumState(n=w.n, t=w.t, p=p[order], amplitudes=amps[order],
                         scenario=w.scenario)


@dataclass
class DensityPair:
    """Position and momentum probability densities at fixed t."""

    t: float
    x: np.ndarray
    density_x: np.ndarray
    p: np.ndarray
    density_p: np.ndarray
    path: str  # "analytic" or "numeric"


def _gaussian_density(coords: np.ndarray, variance: float) -> np.ndarray:
    return np.exp(-coords * coords / (2.0 * variance)) / math.sqrt(2.0 * math.pi * variance)


def density_pair(n: int, s: Scenario, t: float, grid: SpatialGrid = None,
                 force_numeric: bool = False) -> DensityPair:
    """Probability density pair (|psi|^2, |psi~|^2) for eigenstate n.

    Ground states of the pulsating-mass and inverse-square scenarios take
    the analytic Gaussian pair; everything else goes through the sampled
    state and its discrete momentum transform. force_numeric exercises
    the full numeric pipeline regardless, which is what the entropy
    cross-checks use as their oracle path.
    """
    analytic_ok = (n == 0 and not force_numeric and
                   s.kind in (ScenarioKind.PULSATING_MASS,
                              ScenarioKind.INVERSE_SQUARE_FREQUENCY))
    if analytic_ok:
        if grid is None:
            grid = default_grid(n, s, t)
        x = grid.points
        var_x = sigma_x_sq(s, t)
        var_p = sigma_p_sq(s, t)
        half_width = 10.0 * math.sqrt(var_p)
        dp = 2.0 * half_width / grid.n_points
        p = -half_width + dp * np.arange(grid.n_points)
        return DensityPair(t=t, x=x, density_x=_gaussian_density(x, var_x),
                           p=p, density_p=_gaussian_density(p, var_p),
                           path="analytic")
    state = eigenstate(n, s, t, grid=grid)
    mom = momentum_transform(state)
    return DensityPair(t=t, x=state.x, density_x=np.abs(state.amplitudes) ** 2,
                       p=mom.p, density_p=np.abs(mom.amplitudes) ** 2,
                       path="numeric")


def tdse_residual(n: int, s: Scenario, x: np.ndarray, times: np.ndarray) -> float:
    """Finite-difference defect of i hbar d_t psi = H psi on a fixed
    space-time grid, H = -(hbar^2 / 2 m(t)) d_xx + m(t) w(t)^2 x^2 / 2.

    Centered five-point (fourth-order) stencils in both directions: the
    stencil error has to sit well below the tolerance being certified,
    including for excited states whose local phase rates are several
    times the ground state's. Returns the max interior defect scaled by
    the state's peak amplitude.
    """
    x = np.asarray(x, dtype=float)
    times = np.asarray(times, dtype=float)
    if len(times) < 5 or len(x) < 5:
        raise DomainError("need at least 5 samples in each direction")
    psi = np.empty((len(times), len(x)), dtype=complex)
    for i, t in enumerate(times):
        psi[i] = _sample(n, s, t, x)
    dt = times[1] - times[0]
    dx = x[1] - x[0]
    hbar = s.hbar
    inner = slice(2, -2)
    d_t = (-psi[4:, inner] + 8.0 * psi[3:-1, inner]
           - 8.0 * psi[1:-3, inner] + psi[:-4, inner]) / (12.0 * dt)
    d_xx = (-psi[2:-2, 4:] + 16.0 * psi[2:-2, 3:-1] - 30.0 * psi[2:-2, 2:-2]
            + 16.0 * psi[2:-2, 1:-3] - psi[2:-2, :-4]) / (12.0 * dx * dx)
    worst = 0.0
    scale = np.abs(psi).max()
    for row, t in enumerate(times[2:-2]):
        m_t = mass_at(s, t)
        w_t = frequency_at(s, t)
        h_psi = (-(hbar * hbar) / (2.0 * m_t) * d_xx[row]
                 + 0.5 * m_t * w_t * w_t * x[inner] ** 2 * psi[row + 2, inner])
        defect = np.abs(1j * hbar * d_t[row] - h_psi).max()
        worst = max(worst, defect)
    return worst / scale


def _sample(n: int, s: Scenario, t: float, x: np.ndarray) -> np.ndarray:
    if s.kind is ScenarioKind.STATIC:
        return psi_static(n, s, t, x)
    if s.kind is ScenarioKind.PULSATING_MASS:
        return psi_pulsating(n, s, t, x)
    if s.kind is ScenarioKind.INVERSE_SQUARE_FREQUENCY:
        return psi_inverse_square(n, s, t, x)
    raise UnsupportedScenario("custom scenarios need an explicit rho solution")
