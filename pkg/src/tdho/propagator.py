"""Classical paths, actions, and exact Feynman kernels.

The kernel of the time-dependent oscillator factorizes as F exp(i S / hbar)
with the semiclassical prefactor

    F = [1 / (2 pi i hbar rho' rho'' sin(g'' - g'))]^{1/2}

and the closed-form classical action; both are functions of the auxiliary
amplitude rho and phase gamma at the two endpoint times alone. Everything
here is restricted to the first caustic interval 0 < g'' - g' < pi; branch
tracking past a caustic (Maslov phases) is out of scope.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import CausticError, DivergenceWarning, DomainError, QuadratureError
from .ermakov import RhoSolution, analytic_gamma, analytic_rho
from .model import Scenario, ScenarioKind, ensure_valid_time, mass_at
from .wavefunction import N_MAX, hermite_functions

# |sin(dg)| at or below this is treated as sitting on the caustic.
CAUSTIC_GUARD = 1e-6
# |sin(dg)| below this merely sets the proximity flag on the result.
CAUSTIC_NEAR = 1e-3


@dataclass(frozen=True)
class BoundaryData:
    """Endpoint positions and times of a propagation interval."""

    x_start: float
    x_end: float
    t_start: float
    t_end: float

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise DomainError("t_end must exceed t_start")


@dataclass(frozen=True)
class KernelValue:
    value: complex
    caustic_near: bool


def _endpoint_data(s: Scenario, rho: RhoSolution, b: BoundaryData):
    """(rho, rho_dot, m) at both endpoints plus the phase difference."""
    ensure_valid_time(s, b.t_start)
    ensure_valid_time(s, b.t_end)
    ra = rho.rho_at(b.t_start)
    ra_dot = rho.rho_dot_at(b.t_start)
    rb = rho.rho_at(b.t_end)
    rb_dot = rho.rho_dot_at(b.t_end)
    dg = rho.gamma_at(b.t_end) - rho.gamma_at(b.t_start)
    return ra, ra_dot, rb, rb_dot, dg


def _check_caustic(dg: float) -> bool:
    """Validate the first-caustic-interval restriction; returns the
    proximity flag."""
    if dg <= 0.0 or dg >= math.pi:
        raise CausticError(f"phase separation {dg!r} outside the first caustic interval")
    s = math.sin(dg)
    if abs(s) <= CAUSTIC_GUARD:
        raise CausticError(f"sin(gamma''-gamma') = {s!r} within the caustic guard")
    return abs(s) < CAUSTIC_NEAR


def classical_path(s: Scenario, rho: RhoSolution, b: BoundaryData, t: float) -> float:
    """Classical trajectory through (x_start, t_start) and (x_end, t_end):

      x(t) = rho(t) [A cos(gamma(t)) + B sin(gamma(t))]

    with A, B fixed by the endpoint conditions. Equivalently
    x = rho/sin(dg) [x'/rho' sin(g''-g) + x''/rho'' sin(g-g')]; the second
    endpoint factor carries sin(g-g'), which is what the boundary
    conditions force.
    """
    if t < b.t_start or t > b.t_end:
        raise DomainError("t outside the boundary interval")
    ra, _, rb, _, dg = _endpoint_data(s, rho, b)
    _check_caustic(dg)
    ga = rho.gamma_at(b.t_start)
    gb = rho.gamma_at(b.t_end)
    sin_dg = math.sin(dg)
    coeff_a = (b.x_start / ra * math.sin(gb) - b.x_end / rb * math.sin(ga)) / sin_dg
    coeff_b = (b.x_end / rb * math.cos(ga) - b.x_start / ra * math.cos(gb)) / sin_dg
    g = rho.gamma_at(t)
    return rho.rho_at(t) * (coeff_a * math.cos(g) + coeff_b * math.sin(g))


def _action_coefficients(s: Scenario, rho: RhoSolution, b: BoundaryData):
    """Quadratic-form coefficients of the classical action,
    S = q_end x_end^2 + q_start x_start^2 + q_cross x_start x_end."""
    ra, ra_dot, rb, rb_dot, dg = _endpoint_data(s, rho, b)
    near = _check_caustic(dg)
    ma = mass_at(s, b.t_start)
    mb = mass_at(s, b.t_end)
    cot = math.cos(dg) / math.sin(dg)
    csc = 1.0 / math.sin(dg)
    q_end = 0.5 * mb * rb_dot / rb + 0.5 * cot / (rb * rb)
    q_start = -0.5 * ma * ra_dot / ra + 0.5 * cot / (ra * ra)
    q_cross = -csc / (ra * rb)
    return q_start, q_end, q_cross, ra, rb, dg, near


def classical_action(s: Scenario, rho: RhoSolution, b: BoundaryData) -> float:
    """Closed-form action along the classical path:

      S = (1/2)[m'' (rho_dot''/rho'') x''^2 - m' (rho_dot'/rho') x'^2]
        + (1/2)[(x''^2/rho''^2 + x'^2/rho'^2) cot(dg) - 2 x' x''/(rho' rho'') csc(dg)]

    The cotangent term is endpoint-symmetric (it carries both x'^2/rho'^2
    and x''^2/rho''^2); that is what the kernel exponentiates into and what
    the direct time integral of the Lagrangian reproduces.
    """
    q_start, q_end, q_cross, *_ = _action_coefficients(s, rho, b)
    return (q_end * b.x_end ** 2 + q_start * b.x_start ** 2
            + q_cross * b.x_start * b.x_end)


def kernel(s: Scenario, rho: RhoSolution, b: BoundaryData) -> KernelValue:
    """Exact kernel F exp(i S / hbar) on the first caustic interval,
    principal branch of the square root in F."""
    q_start, q_end, q_cross, ra, rb, dg, near = _action_coefficients(s, rho, b)
    action = (q_end * b.x_end ** 2 + q_start * b.x_start ** 2
              + q_cross * b.x_start * b.x_end)
    pref = cmath.sqrt(1.0 / (2j * math.pi * s.hbar * ra * rb * math.sin(dg)))
    return KernelValue(value=pref * cmath.exp(1j * action / s.hbar), caustic_near=near)


def van_vleck_prefactor(s: Scenario, rho: RhoSolution, b: BoundaryData) -> complex:
    """Semiclassical prefactor [1/(2 pi i hbar rho' rho'' sin(dg))]^{1/2}.

    |F|^2 also equals (2 pi hbar)^{-1} |d^2 S / dx' dx''|, which the tests
    verify by finite differences of classical_action.
    """
    ra, _, rb, _, dg = _endpoint_data(s, rho, b)
    _check_caustic(dg)
    return cmath.sqrt(1.0 / (2j * math.pi * s.hbar * ra * rb * math.sin(dg)))


def kernel_static_closed(s: Scenario, b: BoundaryData) -> complex:
    """Textbook constant-coefficient oscillator kernel, written directly in
    terms of m, omega, and the elapsed time (independent of the general
    form; used as its cross-check)."""
    if s.kind is not ScenarioKind.STATIC:
        raise DomainError("static closed form needs a static scenario")
    m, w, hbar = s.m0, s.omega0, s.hbar
    elapsed = b.t_end - b.t_start
    sin_wt = math.sin(w * elapsed)
    if abs(sin_wt) <= CAUSTIC_GUARD:
        raise CausticError("elapsed time sits on a caustic of sin(w T)")
    pref = cmath.sqrt(m * w / (2j * math.pi * hbar * sin_wt))
    phase = (m * w / (2.0 * hbar * sin_wt)
             * ((b.x_start ** 2 + b.x_end ** 2) * math.cos(w * elapsed)
                - 2.0 * b.x_start * b.x_end))
    return pref * cmath.exp(1j * phase)


def kernel_pulsating_closed(s: Scenario, b: BoundaryData) -> complex:
    """Explicit pulsating-mass kernel in terms of m0, nu, Omega and the
    endpoint times (independent evaluation, not routed through rho):

      [m0 Omega cos(nu t') cos(nu t'') / (2 pi i hbar sin(Omega T))]^{1/2}
      exp[(i m0 nu / 2 hbar)(cos^2(nu t'') tan(nu t'') x''^2
                             - cos^2(nu t') tan(nu t') x'^2)]
      exp[(i m0 Omega / 2 hbar sin(Omega T))
          ((cos^2(nu t'') x''^2 + cos^2(nu t') x'^2) cos(Omega T)
           - 2 cos(nu t') cos(nu t'') x' x'')]
    """
    if s.kind is not ScenarioKind.PULSATING_MASS:
        raise DomainError("pulsating closed form needs a pulsating-mass scenario")
    ensure_valid_time(s, b.t_start)
    ensure_valid_time(s, b.t_end)
    m, nu, hbar = s.m0, s.nu, s.hbar
    omega_eff = s.omega_eff
    ca = math.cos(nu * b.t_start)
    cb = math.cos(nu * b.t_end)
    elapsed = b.t_end - b.t_start
    sin_ot = math.sin(omega_eff * elapsed)
    if abs(sin_ot) <= CAUSTIC_GUARD:
        raise CausticError("elapsed time sits on a caustic of sin(Omega T)")
    pref = cmath.sqrt(m * omega_eff * ca * cb / (2j * math.pi * hbar * sin_ot))
    boundary_phase = (m * nu / (2.0 * hbar)
                      * (cb * cb * math.tan(nu * b.t_end) * b.x_end ** 2
                         - ca * ca * math.tan(nu * b.t_start) * b.x_start ** 2))
    path_phase = (m * omega_eff / (2.0 * hbar * sin_ot)
                  * ((cb * cb * b.x_end ** 2 + ca * ca * b.x_start ** 2)
                     * math.cos(omega_eff * elapsed)
                     - 2.0 * ca * cb * b.x_start * b.x_end))
    return pref * cmath.exp(1j * (boundary_phase + path_phase))


def kernel_inverse_square_closed(s: Scenario, b: BoundaryData) -> complex:
    """Explicit inverse-square-frequency kernel in terms of m0, omega0 and
    the endpoint times, with phase separation omega0 (t''-t')/(t' t''):

      [m omega0 / (2 pi i hbar t' t'' sin(omega0 D))]^{1/2}
      exp[(i / 2 hbar)(m x''^2 / t'' - m x'^2 / t')]
      exp[(i m omega0 / 2 hbar sin(omega0 D))
          ((x''^2/t''^2 + x'^2/t'^2) cos(omega0 D) - 2 x' x''/(t' t''))]
    """
    if s.kind is not ScenarioKind.INVERSE_SQUARE_FREQUENCY:
        raise DomainError("inverse-square closed form needs an inverse-square scenario")
    ensure_valid_time(s, b.t_start)
    ensure_valid_time(s, b.t_end)
    m, w0, hbar = s.m0, s.omega0, s.hbar
    ta, tb = b.t_start, b.t_end
    sep = w0 * (tb - ta) / (ta * tb)
    sin_sep = math.sin(sep)
    if abs(sin_sep) <= CAUSTIC_GUARD:
        raise CausticError("phase separation sits on a caustic")
    pref = cmath.sqrt(m * w0 / (2j * math.pi * hbar * ta * tb * sin_sep))
    boundary_phase = (m * b.x_end ** 2 / tb - m * b.x_start ** 2 / ta) / (2.0 * hbar)
    path_phase = (m * w0 / (2.0 * hbar * sin_sep)
                  * ((b.x_end ** 2 / tb ** 2 + b.x_start ** 2 / ta ** 2) * math.cos(sep)
                     - 2.0 * b.x_start * b.x_end / (ta * tb)))
    return pref * cmath.exp(1j * (boundary_phase + path_phase))


def _wynn_epsilon(partials, dps: int = 60) -> complex:
    """Shanks acceleration of a partial-sum sequence via Wynn's epsilon
    table, evaluated in extended precision (the table is rounding-limited
    in doubles). Consecutive duplicate entries (zero terms) are dropped
    first, otherwise they stall the recursion."""
    with mp.workdps(dps):
        seq = [mp.mpc(v) for v in partials]
        dedup = [seq[0]]
        for v in seq[1:]:
            if v != dedup[-1]:
                dedup.append(v)
        if len(dedup) < 3:
            return complex(dedup[-1])
        e_prev = [mp.mpc(0)] * (len(dedup) + 1)
        e_cur = dedup[:]
        best = e_cur[-1]
        col = 0
        while len(e_cur) > 1:
            col += 1
            e_next = []
            for j in range(len(e_cur) - 1):
                d = e_cur[j + 1] - e_cur[j]
                if d == 0:
                    e_next.append(e_prev[j + 1])
                else:
                    e_next.append(e_prev[j + 1] + 1 / d)
            e_prev, e_cur = e_cur, e_next
            if col % 2 == 0 and e_cur:
                best = e_cur[-1]
        return complex(best)


def spectral_kernel(s: Scenario, b: BoundaryData, n_max: int,
                    accelerate: bool = True) -> KernelValue:
    """Eigenfunction decomposition of the kernel,

        K = sum_n psi_n*(x', t') psi_n(x'', t''),

    truncated at n_max. On the unit circle the raw partial sums only
    converge conditionally (term magnitude ~ n^{-1/2}), so by default the
    partial-sum sequence is Shanks-accelerated; the result still uses the
    first n_max + 1 terms and nothing else. accelerate=False returns the
    bare truncated sum.
    """
    if n_max < 0 or n_max > N_MAX:
        raise ValueError(f"n_max must lie in [0, {N_MAX}]")
    ra, ra_dot = analytic_rho(s, b.t_start)
    rb, rb_dot = analytic_rho(s, b.t_end)
    dg = analytic_gamma(s, b.t_end) - analytic_gamma(s, b.t_start)
    near = _check_caustic(dg)
    hbar = s.hbar
    ma = mass_at(s, b.t_start)
    mb = mass_at(s, b.t_end)
    w_a = 1.0 / (hbar * ra * ra)
    w_b = 1.0 / (hbar * rb * rb)
    chirp = (mb * rb_dot / (2.0 * hbar * rb) * b.x_end ** 2
             - ma * ra_dot / (2.0 * hbar * ra) * b.x_start ** 2)
    phi_a = hermite_functions(n_max, np.array([b.x_start * math.sqrt(w_a)]))[:, 0]
    phi_b = hermite_functions(n_max, np.array([b.x_end * math.sqrt(w_b)]))[:, 0]
    n = np.arange(n_max + 1)
    terms = ((w_a * w_b) ** 0.25 * cmath.exp(1j * chirp)
             * phi_a * phi_b * np.exp(-1j * (n + 0.5) * dg))
    partials = np.cumsum(terms)
    value = _wynn_epsilon(partials) if accelerate else complex(partials[-1])
    return KernelValue(value=value, caustic_near=near)


def mehler_check(u: float, v: float, z, n_max: int) -> tuple:
    """Both sides of the Hermite bilinear resummation and their gap:

      lhs = e^{-(u^2+v^2)/2} sum_{n<=n_max} (z^n / 2^n n!) H_n(u) H_n(v)
      rhs = (1-z^2)^{-1/2} exp[(4 u v z - 2 (u^2+v^2) z^2) / (2 (1-z^2))]
            e^{-(u^2+v^2)/2}

    The weight z^n / (2^n n!) is the one that closes; |z| < 1 required.
    """
    if abs(z) >= 1.0:
        raise DomainError("mehler_check requires |z| < 1")
    if abs(z) >= 0.95 and n_max < 48:
        warnings.warn("slow convergence for |z| >= 0.95 with n_max < 48",
                      DivergenceWarning, stacklevel=2)
    gauss = math.exp(-0.5 * (u * u + v * v))
    h_u_prev, h_u = 1.0, 2.0 * u
    h_v_prev, h_v = 1.0, 2.0 * v
    coef = 1.0 + 0j
    total = coef * h_u_prev * h_v_prev
    for k in range(1, n_max + 1):
        coef = coef * z / (2.0 * k)
        if k == 1:
            total += coef * h_u * h_v
        else:
            h_u_prev, h_u = h_u, 2.0 * u * h_u - 2.0 * (k - 1) * h_u_prev
            h_v_prev, h_v = h_v, 2.0 * v * h_v - 2.0 * (k - 1) * h_v_prev
            total += coef * h_u * h_v
    lhs = gauss * total
    z2 = z * z
    rhs = (gauss / cmath.sqrt(1.0 - z2)
           * cmath.exp((4.0 * u * v * z - 2.0 * (u * u + v * v) * z2) / (2.0 * (1.0 - z2))))
    if isinstance(z, float) or isinstance(z, int):
        lhs, rhs = lhs.real, rhs.real
    return lhs, rhs, abs(lhs - rhs)


def _kernel_row(s, rho, x_start, t_start, x_end_values, t_end):
    """Vectorized kernel over an array of end positions (shared times)."""
    b = BoundaryData(x_start=x_start, x_end=0.0, t_start=t_start, t_end=t_end)
    q_start, q_end, q_cross, ra, rb, dg, _ = _action_coefficients(s, rho, b)
    pref = cmath.sqrt(1.0 / (2j * math.pi * s.hbar * ra * rb * math.sin(dg)))
    action = (q_end * x_end_values ** 2 + q_start * x_start ** 2
              + q_cross * x_start * x_end_values)
    return pref * np.exp(1j * action / s.hbar)


def _neville_at_zero(xs, ys):
    tab = list(ys)
    n = len(tab)
    for k in range(1, n):
        for j in range(n - k):
            tab[j] = (xs[j] * tab[j + 1] - xs[j + k] * tab[j]) / (xs[j] - xs[j + k])
    return tab[0]


def semigroup_check(s: Scenario, rho: RhoSolution, x_start: float, t_start: float,
                    x_end: float, t_end: float, t_mid: float,
                    lambda0: float = 0.1, n_lambda: int = 6,
                    points_per_wave: int = 16) -> float:
    """Composition defect |int K(x'',t''; y,t_mid) K(y,t_mid; x',t') dy
    - K(x'',t''; x',t')|.

    The y integrand is purely oscillatory (constant modulus), so it is
    damped by exp(-lambda y^2), integrated by trapezoid on a window wide
    enough for the damping, and extrapolated to lambda -> 0 through a
    Neville table over a geometric lambda ladder. Raises QuadratureError
    if the extrapolation fails to stabilize.
    """
    if not (t_start < t_mid < t_end):
        raise DomainError("need t_start < t_mid < t_end")
    lower = _action_coefficients(s, rho, BoundaryData(x_start, 0.0, t_start, t_mid))
    upper = _action_coefficients(s, rho, BoundaryData(0.0, x_end, t_mid, t_end))
    # total quadratic phase curvature in y, for step-size control
    curvature = (abs(lower[1]) + abs(upper[0])) / s.hbar
    lambdas = [lambda0 * 0.5 ** j for j in range(n_lambda)]
    values = []
    for lam in lambdas:
        half_width = 9.0 / math.sqrt(lam)
        rate = 2.0 * curvature * half_width + 10.0
        n = int(max(4096, points_per_wave * half_width * rate / (2.0 * math.pi)))
        y = np.linspace(-half_width, half_width, n)
        first = _kernel_row(s, rho, x_start, t_start, y, t_mid)
        q_start, q_end, q_cross, ra, rb, dg, _ = upper
        pref = cmath.sqrt(1.0 / (2j * math.pi * s.hbar * ra * rb * math.sin(dg)))
        second = pref * np.exp(1j * (q_end * x_end ** 2 + q_start * y ** 2
                                     + q_cross * y * x_end) / s.hbar)
        integrand = second * first * np.exp(-lam * y * y)
        values.append(np.trapezoid(integrand, y))
    composed = _neville_at_zero(lambdas, values)
    shorter = _neville_at_zero(lambdas[:-1], values[:-1])
    direct = kernel(s, rho, BoundaryData(x_start, x_end, t_start, t_end)).value
    stability = abs(composed - shorter)
    if stability > 1e-3 * max(1.0, abs(direct)):
        raise QuadratureError(f"lambda extrapolation unstable (drift {stability:.3e})")
    return abs(composed - direct)
