"""Auxiliary amplitude rho(t) and accumulated phase gamma(t).

The amplitude obeys the nonlinear auxiliary equation

    rho'' + (m'/m) rho' + w(t)^2 rho = 1 / (m^2 rho^3)

and, together with gamma(t) = integral dt' / (m rho^2), parametrizes the
exact states and kernels of the time-dependent oscillator. Closed forms
exist for the three named scenario kinds; a fixed-step RK4 integrator
covers everything else and doubles as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, SingularityError, UnsupportedScenario
from .model import (Scenario, ScenarioKind, TimeGrid, ensure_valid_span,
                    ensure_valid_time, frequency_at, mass_at, mass_rate_at)

# Abort integration if the amplitude collapses below this floor; the
# right-hand side 1/(m^2 rho^3) is no longer representable past it.
RHO_FLOOR = 1e-12

SOURCE_ANALYTIC = "analytic"
SOURCE_NUMERIC = "numeric"


@dataclass
class RhoSolution:
    """Amplitude, its derivative, and accumulated phase on a time grid.

    gamma is anchored to zero at the first grid time; every consumer in
    this package uses phase differences only. Treat instances as
    immutable after construction.
    """

    times: np.ndarray
    rho: np.ndarray
    rho_dot: np.ndarray
    gamma: np.ndarray
    source: str
    _rho_fn: Optional[Callable] = field(default=None, repr=False, compare=False)
    _rho_dot_fn: Optional[Callable] = field(default=None, repr=False, compare=False)
    _gamma_fn: Optional[Callable] = field(default=None, repr=False, compare=False)
    _splines: Optional[tuple] = field(default=None, repr=False, compare=False)

    def _check_covered(self, t: float) -> None:
        t0, t1 = self.times[0], self.times[-1]
        tol = 1e-12 * max(1.0, abs(t0), abs(t1))
        if t < t0 - tol or t > t1 + tol:
            raise DomainError(f"t={t!r} outside solution coverage [{t0}, {t1}]")

    def _spline(self, which: int):
        if self._splines is None:
            self._splines = (CubicSpline(self.times, self.rho),
                             CubicSpline(self.times, self.rho_dot),
                             CubicSpline(self.times, self.gamma))
        return self._splines[which]

    def rho_at(self, t: float) -> float:
        self._check_covered(t)
        if self._rho_fn is not None:
            return self._rho_fn(t)
        return float(self._spline(0)(t))

    def rho_dot_at(self, t: float) -> float:
        self._check_covered(t)
        if self._rho_dot_fn is not None:
            return self._rho_dot_fn(t)
        return float(self._spline(1)(t))

    def gamma_at(self, t: float) -> float:
        """Accumulated phase relative to the first grid time."""
        self._check_covered(t)
        if self._gamma_fn is not None:
            return self._gamma_fn(t)
        return float(self._spline(2)(t))

    def write_csv(self, path) -> int:
        """Serialize as CSV columns t, rho, rho_dot, gamma. Returns rows written."""
        with open(path, "w", newline="") as fh:
            fh.write("t,rho,rho_dot,gamma\n")
            for t, r, rd, g in zip(self.times, self.rho, self.rho_dot, self.gamma):
                fh.write(f"{t:.17g},{r:.17g},{rd:.17g},{g:.17g}\n")
        return len(self.times)


def analytic_rho(s: Scenario, t: float) -> tuple:
    """Closed-form (rho, rho_dot) for the named scenario kinds.

    static:          rho = 1 / sqrt(m0 omega0)
    pulsating mass:  rho = 1 / sqrt(m(t) Omega),  Omega^2 = omega0^2 + nu^2
    1/t^2 frequency: rho = t sqrt(omega(t)) / ... = t / sqrt(m0 omega0)

    Each form is validated against the auxiliary equation by
    ermakov_residual rather than taken on faith.
    """
    ensure_valid_time(s, t)
    if s.kind is ScenarioKind.STATIC:
        return 1.0 / math.sqrt(s.m0 * s.omega0), 0.0
    if s.kind is ScenarioKind.PULSATING_MASS:
        omega_eff = s.omega_eff
        rho = 1.0 / (math.sqrt(s.m0 * omega_eff) * abs(math.cos(s.nu * t)))
        return rho, rho * s.nu * math.tan(s.nu * t)
    if s.kind is ScenarioKind.INVERSE_SQUARE_FREQUENCY:
        scale = 1.0 / math.sqrt(s.m0 * s.omega0)
        return t * scale, scale
    raise UnsupportedScenario("no closed-form amplitude for custom scenarios")


def analytic_gamma(s: Scenario, t: float) -> float:
    """Closed-form accumulated phase (unanchored antiderivative of
    1/(m rho^2)): omega0*t, Omega*t, or -omega0/t by kind."""
    ensure_valid_time(s, t)
    if s.kind is ScenarioKind.STATIC:
        return s.omega0 * t
    if s.kind is ScenarioKind.PULSATING_MASS:
        return s.omega_eff * t
    if s.kind is ScenarioKind.INVERSE_SQUARE_FREQUENCY:
        return -s.omega0 / t
    raise UnsupportedScenario("no closed-form phase for custom scenarios")


def analytic_rho_solution(s: Scenario, grid: TimeGrid) -> RhoSolution:
    """Tabulate the closed forms on a grid, keeping exact evaluators for
    off-grid queries. gamma is re-anchored to the grid start."""
    ensure_valid_span(s, grid.t_start, grid.t_end)
    times = grid.times
    pairs = [analytic_rho(s, t) for t in times]
    rho = np.array([p[0] for p in pairs])
    rho_dot = np.array([p[1] for p in pairs])
    g0 = analytic_gamma(s, grid.t_start)
    gamma = np.array([analytic_gamma(s, t) - g0 for t in times])
    return RhoSolution(
        times=times, rho=rho, rho_dot=rho_dot, gamma=gamma, source=SOURCE_ANALYTIC,
        _rho_fn=lambda t: analytic_rho(s, t)[0],
        _rho_dot_fn=lambda t: analytic_rho(s, t)[1],
        _gamma_fn=lambda t: analytic_gamma(s, t) - g0)


def solve_ermakov(s: Scenario, rho_init: float, rho_dot_init: float,
                  grid: TimeGrid) -> RhoSolution:
    """Integrate the auxiliary equation with fixed-step classic RK4.

    The step is tied to the grid (reproducibility over adaptivity; the
    coefficients are smooth on guarded domains). gamma is accumulated by
    the trapezoid rule on the same grid.
    """
    if rho_init <= 0:
        raise DomainError("rho_init must be positive")
    ensure_valid_span(s, grid.t_start, grid.t_end)

    def deriv(t, y):
        r, v = y
        m = mass_at(s, t)
        w = frequency_at(s, t)
        return np.array([v, 1.0 / (m * m * r ** 3) - (mass_rate_at(s, t) / m) * v - w * w * r])

    times = grid.times
    h = grid.spacing
    n = len(times)
    rho = np.empty(n)
    rho_dot = np.empty(n)
    y = np.array([rho_init, rho_dot_init], dtype=float)
    rho[0], rho_dot[0] = y
    for i in range(n - 1):
        t = times[i]
        k1 = deriv(t, y)
        k2 = deriv(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = deriv(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = deriv(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.isfinite(y).all() or y[0] < RHO_FLOOR:
            raise SingularityError(
                f"amplitude collapsed below {RHO_FLOOR} near t={times[i + 1]!r}")
        rho[i + 1], rho_dot[i + 1] = y

    integrand = np.array([1.0 / (mass_at(s, t) * r * r) for t, r in zip(times, rho)])
    gamma = np.empty(n)
    gamma[0] = 0.0
    np.cumsum(0.5 * h * (integrand[1:] + integrand[:-1]), out=gamma[1:])
    return RhoSolution(times=times, rho=rho, rho_dot=rho_dot, gamma=gamma,
                       source=SOURCE_NUMERIC)


def phase_gamma(s: Scenario, t1: float, t2: float, rho: RhoSolution) -> float:
    """Phase accumulated between t1 and t2, integral of 1/(m rho^2).

    Returned as a difference of the solution's anchored gamma, so
    additivity over adjacent intervals is exact.
    """
    if t2 < t1:
        raise DomainError("t2 must not precede t1")
    return rho.gamma_at(t2) - rho.gamma_at(t1)


def ermakov_residual(s: Scenario, rho: RhoSolution) -> float:
    """Max-abs defect of the auxiliary equation over interior grid points,
    with centered finite differences supplying the derivatives.

    Serves as the verification functional for both analytic forms and
    numeric solutions; a wrong solution of the same smoothness shows up
    at O(1) while the discretization floor shrinks like spacing^2.
    """
    times = rho.times
    if len(times) < 5:
        raise DomainError("need at least 5 grid points for finite differences")
    h = times[1] - times[0]
    r = rho.rho
    d1 = (r[2:] - r[:-2]) / (2.0 * h)
    d2 = (r[2:] - 2.0 * r[1:-1] + r[:-2]) / (h * h)
    tt = times[1:-1]
    m = np.array([mass_at(s, t) for t in tt])
    mdot = np.array([mass_rate_at(s, t) for t in tt])
    w = np.array([frequency_at(s, t) for t in tt])
    resid = d2 + (mdot / m) * d1 + w * w * r[1:-1] - 1.0 / (m * m * r[1:-1] ** 3)
    return float(np.max(np.abs(resid)))
