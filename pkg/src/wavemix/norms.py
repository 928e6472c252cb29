"""Measurement instruments: weighted Sobolev norm, Fourier-weighted L1
norm, and the standard Lebesgue norms.

The weighted H2 norm is computed literally as ||(1+z^2) g||_{H2} by
weighting first and differentiating spectrally afterwards.  The Fourier
L1(1) norm uses the repo transform convention frozen in `grid.spectrum`;
its quadrature carries a second-order endpoint correction at xi = 0 where
the |xi| weight has a kink.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import grid as g
from .grid import Field

TAIL_FLAG_TOL = 1e-6


@dataclass(frozen=True)
class NormReport:
    name: str
    value: float
    tail_flag: bool


def l2_norm(f: Field) -> float:
    return float(np.sqrt(f.grid.dx * np.sum(np.abs(f.samples) ** 2)))


def lp_norms(f: Field) -> dict[str, NormReport]:
    """L1, L2 and Linf norms with a shared boundary-contamination flag."""
    flag = g.tail_mass(f) > TAIL_FLAG_TOL
    a = np.abs(f.samples)
    return {
        "l1": NormReport("l1", float(f.grid.dx * a.sum()), flag),
        "l2": NormReport("l2", l2_norm(f), flag),
        "linf": NormReport("linf", float(a.max()), flag),
    }


def h22_norm(f: Field, return_report: bool = False):
    """Weighted Sobolev norm ||(1+z^2) f||_{H2}.

    The weighted function v = (1+z^2) f is differentiated spectrally; the
    norm is sqrt(||v||^2 + ||v'||^2 + ||v''||^2).  A tail flag reports
    boundary contamination of v (weight amplifies the boundary by ~X^2).
    """
    v = f.with_samples((1.0 + f.grid.x**2) * f.samples)
    flag = g.tail_mass(v) > TAIL_FLAG_TOL
    v1 = g.derivative(v, 1, tail_tol=None)
    v2 = g.derivative(v, 2, tail_tol=None)
    value = float(np.sqrt(l2_norm(v) ** 2 + l2_norm(v1) ** 2 + l2_norm(v2) ** 2))
    if return_report:
        return NormReport("h2_weighted", value, flag)
    return value


def l1xi1_norm(f: Field, return_report: bool = False):
    """Fourier-weighted norm || fhat(xi) (1 + |xi|) ||_{L1}.

    Discretized as dxi * sum |fhat_j| (1+|xi_j|) plus the Euler-Maclaurin
    kink correction (dxi^2/6) |fhat(0)| for the |xi| factor at the origin.
    """
    gr = f.grid
    fh = np.abs(g.spectrum(f))
    dxi = np.pi / gr.half_width
    value = float(dxi * np.sum(fh * (1.0 + np.abs(gr.xi))) + dxi**2 / 6.0 * fh[0])
    if return_report:
        return NormReport("l1xi1", value, g.tail_mass(f) > TAIL_FLAG_TOL)
    return value


def all_norms(f: Field) -> list[NormReport]:
    """Every norm this module knows, as reports (used by the CLI)."""
    reports = list(lp_norms(f).values())
    reports.append(h22_norm(f, return_report=True))
    reports.append(l1xi1_norm(f, return_report=True))
    return reports
