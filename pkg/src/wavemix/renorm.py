"""Rescaling map diagnostics: empirical contraction constants for the heat
semigroup and for the linearized Burgers semigroup on mean-zero data, plus
the algebraic properties of the rescaling itself.

The frozen test corpus spans odd/even mixes, broad/narrow widths, a
translate, and a compactly supported bump derivative.  Every member is a
perfect derivative with nonvanishing first moment, which is what the
slope -1 contraction law singles out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import MeanZeroError
from .flows import heat_propagate, linflow_rep
from .grid import Field, SpectralGrid, derivative, quadrature, resample_scaled
from .norms import h22_norm, l2_norm
from .profiles import BurgersParams, params_from_offset, shifted_selfsimilar

# Grid used by the acceptance sweeps: wide enough that rescaling with L up
# to 16 clips only machine-level tails (clipping at |z| = X/L) and that the
# time-shifted reference front fits with its amplitude-weighted left tail
# below the decay gates.
SWEEP_X = 640.0
SWEEP_N = 16384

# Time shift of the reference family for contraction sweeps.  Keeping
# T0 >> L_max^2 = 256 freezes the reference amplitude across the flow
# window, so the finite-L slope fit can exhibit the asymptotic 1/L law;
# the front still carries the full mass phi_d, so the exp(+-phi_d)
# conjugation weights (the content of the mean-zero estimate) are fully
# exercised.  The fixed-point family (T0 = 1) has an L-transient that a
# {2..16} window cannot resolve; those curves are recorded, not gated.
T0_REF = 3600.0


def sweep_grid() -> SpectralGrid:
    return SpectralGrid(SWEEP_X, SWEEP_N)


def _bump(x: np.ndarray, a: float) -> np.ndarray:
    out = np.zeros_like(x)
    u = x / a
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


def _bump_deriv(x: np.ndarray, a: float) -> np.ndarray:
    out = np.zeros_like(x)
    u = x / a
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ui**2)) * (-2.0 * ui / (a * (1.0 - ui**2) ** 2))
    return out


def frozen_corpus(grid: SpectralGrid) -> list[tuple[str, Field]]:
    """The frozen mean-zero test family g_id -> Field."""
    x = grid.x
    gauss = lambda w: np.exp(-(x**2) / (4.0 * w * w))
    dgauss = lambda w: -(x / (2.0 * w * w)) * gauss(w)
    d2gauss = lambda w: (-1.0 / (2 * w * w) + x**2 / (4 * w**4)) * gauss(w)
    members = [
        ("gd", dgauss(1.0)),
        ("gd_broad", dgauss(2.0)),
        ("gd_narrow", dgauss(0.5)),
        ("gd_shift", -((x - 0.5) / 2.0) * np.exp(-((x - 0.5) ** 2) / 4.0)),
        ("gd_mix", dgauss(1.0) + 0.4 * d2gauss(1.0)),
        ("bump_deriv", _bump_deriv(x, 4.0)),
    ]
    return [(name, Field(grid, v)) for name, v in members]


def _require_mean_zero(g: Field) -> None:
    mass = abs(quadrature(g))
    scale = g.grid.dx * np.abs(g.samples).sum()
    if scale > 0 and mass > 1e-8 * scale:
        raise MeanZeroError(
            f"input carries mass {mass:.3e} (relative {mass / scale:.3e}); "
            "the contraction law requires zero mean"
        )


def heat_contraction(g: Field, L: float) -> float:
    """||R_L heat(L^2-1) g|| / ||g|| in the weighted H2 norm (mean-zero g)."""
    _require_mean_zero(g)
    if L == 1.0:
        return 1.0
    evolved = heat_propagate(g, L * L - 1.0)
    return h22_norm(resample_scaled(evolved, L)) / h22_norm(g)


def burgers_coercivity(p: BurgersParams, g: Field, L: float) -> float:
    """Same ratio for the linearized Burgers flow around the shifted
    self-similar state (T0 from p; T0 = 1 linearizes around the fixed point)."""
    _require_mean_zero(g)
    if L == 1.0:
        return 1.0
    b0 = shifted_selfsimilar(p, 1.0, g.grid)
    evolved = linflow_rep(b0, g, L * L)
    return h22_norm(resample_scaled(evolved, L)) / h22_norm(g)


def rescaling_properties(f: Field, L: float) -> dict:
    """Boundedness and commutation checks of the rescaling map:
    ||R_L f|| <= L^{5/2} ||f|| and d/dz R_L = L R_L d/dx."""
    rf = resample_scaled(f, L)
    ratio = h22_norm(rf) / h22_norm(f)
    d_of_r = derivative(rf, 1)
    r_of_d = resample_scaled(derivative(f, 1), L)
    resid = l2_norm(d_of_r.with_samples(d_of_r.samples - L * r_of_d.samples))
    denom = l2_norm(d_of_r)
    return {
        "bound_ratio": ratio,
        "bound_ok": ratio <= L**2.5 * (1.0 + 1e-12),
        "commutation_residual": resid / denom if denom > 0 else 0.0,
    }


@dataclass
class ContractionTable:
    """Measured contraction ratios per (phi_d, L, corpus member)."""

    rows: list[dict] = field(default_factory=list)

    def add(self, phi_d: float, L: float, g_id: str, ratio: float) -> None:
        self.rows.append(
            {"phi_d": phi_d, "L": L, "g_id": g_id, "ratio": ratio, "kappa": L * ratio}
        )

    def slope(self, phi_d: float, g_id: str) -> tuple[float, float]:
        """Fitted log-log slope of the rescaled-flow norm against L, with the
        RMS fit residual."""
        pts = sorted(
            (r["L"], r["ratio"]) for r in self.rows
            if r["phi_d"] == phi_d and r["g_id"] == g_id
        )
        logL = np.log([p[0] for p in pts])
        logv = np.log([p[1] for p in pts])
        coef = np.polyfit(logL, logv, 1)
        resid = float(np.sqrt(np.mean((np.polyval(coef, logL) - logv) ** 2)))
        return float(coef[0]), resid

    def corpus_sup_kappa(self, phi_d: float, L: float) -> float:
        vals = [r["kappa"] for r in self.rows if r["phi_d"] == phi_d and r["L"] == L]
        return max(vals)

    def g_ids(self) -> list[str]:
        seen: dict[str, None] = {}
        for r in self.rows:
            seen.setdefault(r["g_id"])
        return list(seen)

    def to_csv(self, path: str | Path, meta: dict | None = None) -> None:
        lines = []
        if meta:
            lines.append("# config: " + ",".join(f"{k}={v}" for k, v in meta.items()))
        lines.append("phi_d,L,g_id,ratio,kappa")
        for r in self.rows:
            lines.append(
                f"{r['phi_d']:.17g},{r['L']:.17g},{r['g_id']},"
                f"{r['ratio']:.17g},{r['kappa']:.17g}"
            )
        Path(path).write_text("\n".join(lines) + "\n")


def coercivity_table(
    phi_d_list: list[float],
    L_list: list[float],
    grid: SpectralGrid,
    corpus: list[tuple[str, Field]] | None = None,
    T0: float = T0_REF,
) -> ContractionTable:
    """Sweep the coercivity ratio over phase offsets, scales, and the corpus."""
    corpus = corpus if corpus is not None else frozen_corpus(grid)
    table = ContractionTable()
    for phi_d in phi_d_list:
        p = params_from_offset(phi_d, T0=T0)
        for L in L_list:
            for g_id, g in corpus:
                table.add(phi_d, L, g_id, burgers_coercivity(p, g, L))
    return table
