"""Cole-Hopf transform, its inverse, the tangent (linearized) maps around a
Burgers snapshot, and the flow/derivative commutator operator.

Convention: the normalized Burgers equation here is b_t = b_xx + (b^2)_x,
whose self-similar fixed point is the profile family of `profiles`; the
matching transform is h = exp(int_{-X}^x b) with inverse b = h_x / h, and
h is the heat front 1 + A e(x/sqrt(t)) on that family.  (The pair with
half-factors in the exponent belongs to the b b_x normalization and is NOT
the inverse pair for this profile family; the implemented pair satisfies
tangent_inverse o tangent = id, which the tests pin down numerically.)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .grid import Field, cumint, derivative, quadrature
from .profiles import gaussian_error, gaussian_error_deriv

NEGATIVITY_TOL = 1e-12


def front_derivative(h: Field) -> Field:
    """Spectral derivative of a front-like field.

    Subtracts a smooth reference front with the same boundary offsets (an
    error-function profile) before differentiating, so the periodic FFT
    never sees the front's wrap-around jump.
    """
    x = h.grid.x
    c_minus = float(np.real(h.samples[: h.grid.n_points // 64].mean()))
    c_plus = float(np.real(h.samples[-h.grid.n_points // 64 :].mean()))
    ref = c_minus + (c_plus - c_minus) * gaussian_error(x)
    rem = h.with_samples(h.samples - ref)
    rem_x = derivative(rem, 1, tail_tol=None)
    return h.with_samples(rem_x.samples + (c_plus - c_minus) * gaussian_error_deriv(x))


def transform(b: Field) -> Field:
    """Forward map: h = exp(int_{-X}^x b); h >= 1 for b >= 0, reaching
    exp(mass of b) at +X."""
    if b.samples.min() < -NEGATIVITY_TOL * max(1.0, np.abs(b.samples).max()):
        raise DomainError(
            f"Burgers state has negative values (min {b.samples.min():.3e})"
        )
    return b.with_samples(np.exp(cumint(b).samples))


def inverse_transform(h: Field) -> Field:
    """Inverse map: b = h_x / h (front-aware derivative)."""
    if h.samples.min() <= 0.0:
        raise DomainError("Cole-Hopf inverse hit a non-positive field (singular quotient)")
    hx = front_derivative(h)
    return h.with_samples(hx.samples / h.samples)


@dataclass
class ColeHopfContext:
    """Precomputed snapshot data shared by every tangent-map formula.

    Holds the Burgers state b, its running integral B, and the weights
    exp(+-B) that appear in each linearized expression.
    """

    b: Field
    cumulative: Field = field(init=False)
    weight: np.ndarray = field(init=False)       # exp(+B)
    weight_inv: np.ndarray = field(init=False)   # exp(-B)

    def __post_init__(self) -> None:
        if self.b.samples.min() < -NEGATIVITY_TOL * max(1.0, np.abs(self.b.samples).max()):
            raise DomainError("snapshot must be nonnegative")
        self.cumulative = cumint(self.b)
        self.weight = np.exp(self.cumulative.samples)
        self.weight_inv = 1.0 / self.weight

    @property
    def mass(self) -> float:
        return float(self.cumulative.samples[-1])


def tangent(ctx: ColeHopfContext, a0: Field) -> Field:
    """Tangent of the forward map at b: exp(B) * int_{-X}^x a0."""
    return a0.with_samples(ctx.weight * cumint(a0).samples)


def tangent_inverse(ctx: ColeHopfContext, h: Field) -> Field:
    """Tangent of the inverse map at b: d/dx (exp(-B) h) = exp(-B)(h_x - b h).

    The derivative is front-aware: heat images carry tiny boundary offsets
    whose wrap jump would otherwise ring under the periodic derivative and
    get re-amplified by the exp(-B) weight.
    """
    hx = front_derivative(h)
    return h.with_samples(ctx.weight_inv * (hx.samples - ctx.b.samples * h.samples))


def tangent_commutator(ctx: ColeHopfContext, a0: Field) -> Field:
    """[d/dx, tangent] a0 = b * tangent(a0); needs a0 to vanish at -X."""
    return a0.with_samples(ctx.b.samples * tangent(ctx, a0).samples)


def tangent_inverse_commutator(ctx: ColeHopfContext, h: Field) -> Field:
    """[d/dx, tangent_inverse] h = exp(-B) (-b h_x - b_x h + b^2 h).

    Derived from the tangent pair satisfying tangent_inverse(tangent(a)) = a;
    contains no derivatives of the heat-side argument beyond h_x.
    """
    hx = front_derivative(h)
    b = ctx.b.samples
    bx = derivative(ctx.b, 1).samples
    return h.with_samples(
        ctx.weight_inv * (-b * hx.samples - bx * h.samples + b * b * h.samples)
    )


def smoothing_commutator(b0: Field, bt: Field, a0: Field, t: float) -> Field:
    """Commutator of d/dx with the linearized Burgers flow over [1, t].

    Evaluates [d/dx, flow] a0 through the representation of the flow as
    tangent_inverse o heat o tangent; every term carries a factor of the
    Burgers state, so it vanishes identically for b = 0 and gains one
    derivative of regularity relative to a0.
    """
    from .flows import heat_propagate  # deferred: flows builds on this module

    if t <= 1.0:
        raise DomainError(f"commutator needs t > 1, got {t}")
    ctx0 = ColeHopfContext(b0)
    ctxt = ColeHopfContext(bt)
    inner = tangent_commutator(ctx0, a0)           # b0 * tangent(a0)
    term1 = tangent_inverse(ctxt, heat_propagate(inner, t - 1.0))
    term2 = tangent_inverse_commutator(ctxt, heat_propagate(tangent(ctx0, a0), t - 1.0))
    return a0.with_samples(term1.samples + term2.samples, t=t)


def mass_check(ctx: ColeHopfContext) -> float:
    """|cumulative(+X) - quadrature(b)|; both equal the carried mass."""
    return abs(ctx.mass - quadrature(ctx.b))
