"""Oscillator scenarios, time/space grids, and domain guards.

A scenario fixes the mass profile m(t), the angular frequency profile
w(t), and hbar. Everything downstream (auxiliary amplitude, wavefunctions,
kernels, entropies) is a pure function of a scenario plus grid data, so
all types here are immutable and safe to share between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, DomainError, SingularityError, UnsupportedScenario

# Half-width of the excluded neighbourhood around each zero of cos(nu t),
# measured as a fraction of the half-period pi/nu. Both the position
# density width and the chirp rate diverge at the zeros, so a guard is
# mandatory; 1e-3 keeps every tabulated quantity finite in double precision.
SINGULAR_GUARD_FRACTION = 1e-3

# Smallest admissible time for the inverse-square frequency profile,
# whose w(t) = omega0 / t**2 blows up at t -> 0.
T_MIN_INVERSE_SQUARE = 1e-3


class ScenarioKind(str, Enum):
    STATIC = "static"
    PULSATING_MASS = "pulsating-mass"
    INVERSE_SQUARE_FREQUENCY = "inverse-square-frequency"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Scenario:
    """An oscillator specification.

    kind        one of ScenarioKind
    m0          mass scale, > 0
    omega0      angular frequency scale, > 0
    nu          pulsation frequency of the mass profile, >= 0
                (meaningful for PULSATING_MASS only)
    hbar        action unit, > 0 (natural units by default)
    mass_fn     m(t) callable, CUSTOM only
    frequency_fn w(t) callable, CUSTOM only

    Profiles by kind:
      STATIC                    m(t) = m0,              w(t) = omega0
      PULSATING_MASS            m(t) = m0 cos^2(nu t),  w(t) = omega0
      INVERSE_SQUARE_FREQUENCY  m(t) = m0,              w(t) = omega0 / t^2
      CUSTOM                    user callables
    """

    kind: ScenarioKind
    m0: float = 1.0
    omega0: float = 1.0
    nu: float = 0.0
    hbar: float = 1.0
    mass_fn: Optional[Callable[[float], float]] = None
    frequency_fn: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.m0 <= 0:
            raise ConfigError("m0 must be positive")
        if self.omega0 <= 0:
            raise ConfigError("omega0 must be positive")
        if self.nu < 0:
            raise ConfigError("nu must be nonnegative")
        if self.hbar <= 0:
            raise ConfigError("hbar must be positive")
        if self.kind is ScenarioKind.CUSTOM:
            if self.mass_fn is None or self.frequency_fn is None:
                raise ConfigError("custom scenarios need mass_fn and frequency_fn")
        elif self.mass_fn is not None or self.frequency_fn is not None:
            raise ConfigError("profile callables are only valid for custom scenarios")

    @classmethod
    def static(cls, m0=1.0, omega0=1.0, hbar=1.0):
        return cls(ScenarioKind.STATIC, m0=m0, omega0=omega0, hbar=hbar)

    @classmethod
    def pulsating_mass(cls, m0=1.0, omega0=1.0, nu=1.0, hbar=1.0):
        return cls(ScenarioKind.PULSATING_MASS, m0=m0, omega0=omega0, nu=nu, hbar=hbar)

    @classmethod
    def inverse_square_frequency(cls, m0=1.0, omega0=1.0, hbar=1.0):
        return cls(ScenarioKind.INVERSE_SQUARE_FREQUENCY, m0=m0, omega0=omega0, hbar=hbar)

    @classmethod
    def custom(cls, mass_fn, frequency_fn, hbar=1.0):
        return cls(ScenarioKind.CUSTOM, mass_fn=mass_fn, frequency_fn=frequency_fn, hbar=hbar)

    @property
    def omega_eff_sq(self) -> float:
        """Squared combined frequency omega0^2 + nu^2 of a pulsating-mass
        scenario. Exposed before the square root so the defining identity
        holds exactly in floating point."""
        if self.kind is not ScenarioKind.PULSATING_MASS:
            raise UnsupportedScenario("omega_eff is defined for pulsating-mass scenarios")
        return self.omega0 * self.omega0 + self.nu * self.nu

    @property
    def omega_eff(self) -> float:
        """Combined frequency Omega = sqrt(omega0^2 + nu^2)."""
        return math.sqrt(self.omega_eff_sq)


def _pulsating_guard_hit(nu: float, t: float) -> bool:
    # distance in phase from the nearest zero of cos(nu t)
    if nu == 0.0:
        return False
    return abs(math.remainder(nu * t - 0.5 * math.pi, math.pi)) < SINGULAR_GUARD_FRACTION * math.pi


def ensure_valid_time(s: Scenario, t: float) -> None:
    """Raise if t lies outside the scenario's valid domain."""
    if s.kind is ScenarioKind.PULSATING_MASS:
        if _pulsating_guard_hit(s.nu, t):
            raise SingularityError(
                f"t={t!r} is within the singular guard of a mass zero (nu={s.nu})")
    elif s.kind is ScenarioKind.INVERSE_SQUARE_FREQUENCY:
        if t < T_MIN_INVERSE_SQUARE:
            raise DomainError(f"t={t!r} below t_min={T_MIN_INVERSE_SQUARE} for 1/t^2 frequency")


def mass_at(s: Scenario, t: float) -> float:
    """Mass m(t); strictly positive on the valid domain."""
    ensure_valid_time(s, t)
    if s.kind is ScenarioKind.STATIC or s.kind is ScenarioKind.INVERSE_SQUARE_FREQUENCY:
        return s.m0
    if s.kind is ScenarioKind.PULSATING_MASS:
        c = math.cos(s.nu * t)
        return s.m0 * c * c
    value = s.mass_fn(t)
    if not value > 0:
        raise DomainError(f"custom mass profile returned {value!r} at t={t!r}")
    return value


def frequency_at(s: Scenario, t: float) -> float:
    """Angular frequency w(t); strictly positive on the valid domain."""
    ensure_valid_time(s, t)
    if s.kind is ScenarioKind.INVERSE_SQUARE_FREQUENCY:
        return s.omega0 / (t * t)
    if s.kind is ScenarioKind.CUSTOM:
        value = s.frequency_fn(t)
        if not value > 0:
            raise DomainError(f"custom frequency profile returned {value!r} at t={t!r}")
        return value
    return s.omega0


def mass_rate_at(s: Scenario, t: float) -> float:
    """Time derivative of the mass profile, dm/dt.

    Analytic for the named kinds; central difference for custom profiles.
    """
    if s.kind is ScenarioKind.PULSATING_MASS:
        ensure_valid_time(s, t)
        return -s.m0 * s.nu * math.sin(2.0 * s.nu * t)
    if s.kind is ScenarioKind.CUSTOM:
        h = 1e-6 * max(1.0, abs(t))
        return (mass_at(s, t + h) - mass_at(s, t - h)) / (2.0 * h)
    return 0.0


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform spatial grid. n_points is a power of two so the discrete
    Fourier path stays radix-2; the right endpoint is excluded (FFT
    periodicity convention), so spacing = (x_max - x_min) / n_points."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.x_max <= self.x_min:
            raise ConfigError("x_max must exceed x_min")
        n = self.n_points
        if n < 16 or (n & (n - 1)) != 0:
            raise ConfigError("n_points must be a power of two, at least 16")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def points(self) -> np.ndarray:
        return self.x_min + self.spacing * np.arange(self.n_points)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid with n_steps intervals (n_steps + 1 samples)."""

    t_start: float
    t_end: float
    n_steps: int

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ConfigError("t_end must exceed t_start")
        if self.n_steps < 1:
            raise ConfigError("n_steps must be at least 1")

    @property
    def spacing(self) -> float:
        return (self.t_end - self.t_start) / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_steps + 1)


def ensure_valid_span(s: Scenario, t_start: float, t_end: float) -> None:
    """Raise unless the whole closed interval [t_start, t_end] stays inside
    the scenario's valid domain (integrators sample interior points)."""
    ensure_valid_time(s, t_start)
    ensure_valid_time(s, t_end)
    if s.kind is ScenarioKind.PULSATING_MASS and s.nu > 0:
        guard = SINGULAR_GUARD_FRACTION * math.pi / s.nu
        k_low = math.ceil(s.nu * (t_start - guard) / math.pi - 0.5)
        k_high = math.floor(s.nu * (t_end + guard) / math.pi - 0.5)
        if k_low <= k_high:
            raise SingularityError(
                f"interval [{t_start}, {t_end}] crosses a mass zero of cos({s.nu} t)")


_SCENARIO_KEYS = {"kind", "m0", "omega0", "nu", "hbar"}


def scenario_from_json(obj: dict) -> Scenario:
    """Build a scenario from a parsed JSON object. Unknown keys are rejected."""
    if not isinstance(obj, dict):
        raise ConfigError(f"scenario must be a JSON object, got {type(obj).__name__}")
    unknown = set(obj) - _SCENARIO_KEYS
    if unknown:
        raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
    try:
        kind = ScenarioKind(obj.get("kind"))
    except ValueError:
        raise ConfigError(f"unknown scenario kind {obj.get('kind')!r}") from None
    if kind is ScenarioKind.CUSTOM:
        raise ConfigError("custom scenarios are not expressible in JSON")
    if kind is not ScenarioKind.PULSATING_MASS and "nu" in obj:
        raise ConfigError("nu is only valid for pulsating-mass scenarios")
    fields = {}
    for key in ("m0", "omega0", "nu", "hbar"):
        if key in obj:
            value = obj[key]
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ConfigError(f"scenario field {key!r} must be a number")
            fields[key] = float(value)
    return Scenario(kind, **fields)
