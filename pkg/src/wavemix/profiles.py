"""Closed-form Burgers profiles: the Gaussian error function, the
self-similar fixed point, its time-shifted and renormalized variants, and
the asymptotic phase front.

All b-type profiles are normalized to unit diffusion and unit nonlinearity;
`with_dispersion_coefficients` maps a normalized solution into a general
(alpha, beta) frame via u(t, x) = (sqrt(alpha)/beta) v(t, x/sqrt(alpha)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from . import norms
from .errors import DomainError
from .grid import Field, SpectralGrid, _barycentric_resample


def gaussian_error(z):
    """Normalized Gaussian error profile (1/sqrt(4 pi)) int_{-inf}^z e^{-s^2/4} ds.

    Equals the standard normal CDF evaluated at z/sqrt(2); monotone with
    limits 0 and 1.
    """
    return 0.5 * (1.0 + erf(np.asarray(z, dtype=float) / 2.0))


def gaussian_error_deriv(z):
    """Derivative of gaussian_error: e^{-z^2/4} / sqrt(4 pi)."""
    z = np.asarray(z, dtype=float)
    return np.exp(-z * z / 4.0) / math.sqrt(4.0 * math.pi)


@dataclass(frozen=True)
class BurgersParams:
    """Profile parameters: amplitude A with mass phi_d = log(1+A), time
    shift T0, dispersion coefficients (alpha, beta), smallness scale delta."""

    A: float
    phi_d: float
    T0: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    delta: float | None = None

    def __post_init__(self) -> None:
        if not (self.A > 0):
            raise DomainError(f"amplitude A must be positive, got {self.A}")
        if abs(self.phi_d - math.log1p(self.A)) > 1e-12 * max(1.0, abs(self.phi_d)):
            raise DomainError("phi_d must equal log(1+A); use a constructor")
        if not (self.T0 >= 1.0):
            raise DomainError(f"T0 must be >= 1, got {self.T0}")
        if not (self.alpha > 0):
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.beta == 0:
            raise DomainError("beta must be nonzero")
        if self.delta is not None and not (0 < self.delta < 1):
            raise DomainError(f"delta must lie in (0,1), got {self.delta}")


def params_from_amplitude(A: float, T0: float = 1.0, alpha: float = 1.0,
                          beta: float = 1.0, delta: float | None = None) -> BurgersParams:
    phi_d = math.log1p(A)
    if delta is not None:
        T0 = (phi_d / delta) ** 2
    return BurgersParams(A=A, phi_d=phi_d, T0=max(1.0, T0), alpha=alpha,
                         beta=beta, delta=delta)


def params_from_offset(phi_d: float, T0: float = 1.0, alpha: float = 1.0,
                       beta: float = 1.0, delta: float | None = None) -> BurgersParams:
    """Build parameters from the phase offset; T0 = (phi_d/delta)^2 when a
    smallness scale delta is supplied."""
    if not (phi_d > 0):
        raise DomainError(f"phi_d must be positive, got {phi_d}")
    return params_from_amplitude(math.expm1(phi_d), T0=T0, alpha=alpha,
                                 beta=beta, delta=delta)


def _fixed_point(A: float, z: np.ndarray) -> np.ndarray:
    return A * gaussian_error_deriv(z) / (1.0 + A * gaussian_error(z))


def fixed_point_derivs(A: float, z: np.ndarray):
    """Fixed-point profile with its first two derivatives, all in closed
    form (used where spectral differentiation of a truncated wide profile
    would pollute the boundary)."""
    e = gaussian_error(z)
    e1 = gaussian_error_deriv(z)
    e2 = -0.5 * z * e1
    e3 = 0.25 * (z * z - 2.0) * e1
    D = 1.0 + A * e
    f = A * e1 / D
    f1 = A * e2 / D - (A * e1) ** 2 / D**2
    f2 = A * e3 / D - 3.0 * A**2 * e1 * e2 / D**2 + 2.0 * A**3 * e1**3 / D**3
    return f, f1, f2


def burgers_fixed_point(p: BurgersParams, grid: SpectralGrid) -> Field:
    """Self-similar fixed-point profile A e'(z) / (1 + A e(z)), mass log(1+A)."""
    return Field(grid, _fixed_point(p.A, grid.x), t=1.0)


def selfsimilar_solution(p: BurgersParams, t: float, grid: SpectralGrid) -> Field:
    """Exact self-similar solution t^{-1/2} f(x / sqrt(t)) of the normalized
    Burgers equation b_t = b_xx + b b_x, sampled in the lab frame."""
    if t < 1.0:
        raise DomainError(f"time must be >= 1, got {t}")
    rt = math.sqrt(t)
    return Field(grid, _fixed_point(p.A, grid.x / rt) / rt, t=float(t))


def shifted_selfsimilar(p: BurgersParams, t: float, grid: SpectralGrid) -> Field:
    """Time-shifted solution started on the fixed point at time T0:
    (t - 1 + T0)^{-1/2} f(x / sqrt(t - 1 + T0))."""
    if t < 1.0:
        raise DomainError(f"time must be >= 1, got {t}")
    s = math.sqrt(t - 1.0 + p.T0)
    return Field(grid, _fixed_point(p.A, grid.x / s) / s, t=float(t))


def renormalized_reference(p: BurgersParams, L: float, n: int, t: float,
                           grid: SpectralGrid) -> Field:
    """n-th rescaled iterate of the shifted solution, evaluated in closed form:

        L^n (L^{2n} t - 1 + T0)^{-1/2} f(L^n z / sqrt(L^{2n} t - 1 + T0)).

    The shift keeps n = 0 identical to `shifted_selfsimilar` for all t.
    """
    if not (1.0 <= t <= L * L + 1e-12):
        raise DomainError(f"local time must lie in [1, L^2], got {t}")
    Ln = float(L) ** n
    s = math.sqrt(Ln * Ln * t - 1.0 + p.T0)
    return Field(grid, Ln * _fixed_point(p.A, Ln * grid.x / s) / s, t=float(t))


def phase_front(p: BurgersParams, t: float, grid: SpectralGrid) -> Field:
    """Asymptotic phase front (alpha/beta) log(1 + A e(x / sqrt(alpha t)));
    limits 0 at -inf and (alpha/beta) log(1+A) at +inf."""
    if t < 1.0:
        raise DomainError(f"time must be >= 1, got {t}")
    arg = grid.x / math.sqrt(p.alpha * t)
    vals = (p.alpha / p.beta) * np.log1p(p.A * gaussian_error(arg))
    return Field(grid, vals, t=float(t))


def with_dispersion_coefficients(v: Field, alpha: float, beta: float) -> Field:
    """Map a normalized Burgers solution v into the (alpha, beta) frame:
    u(t, x) = (sqrt(alpha)/beta) v(t, x / sqrt(alpha))."""
    if not (alpha > 0) or beta == 0:
        raise DomainError("need alpha > 0 and beta != 0")
    ra = math.sqrt(alpha)
    if alpha == 1.0:
        scaled = v.samples.copy()
    else:
        points = v.grid.x / ra
        scaled = np.zeros_like(v.samples)
        inside = np.abs(points) <= v.grid.half_width
        scaled[inside] = _barycentric_resample(v, points[inside])
    return v.with_samples(ra / beta * scaled)


def selfsimilar_distance(p: BurgersParams, t: float, grid: SpectralGrid) -> float:
    """Weighted-norm distance of the rescaled shifted solution to the fixed
    point: || sqrt(t) bbar(t, sqrt(t) z) - f(z) || in the weighted H2 norm.

    Both terms are evaluated in closed form in the self-similar variable, so
    no PDE integration is involved.
    """
    if t < 1.0:
        raise DomainError(f"time must be >= 1, got {t}")
    s = math.sqrt(t / (t - 1.0 + p.T0))
    rescaled = s * _fixed_point(p.A, s * grid.x)
    diff = Field(grid, rescaled - _fixed_point(p.A, grid.x), t=float(t))
    return norms.h22_norm(diff)
