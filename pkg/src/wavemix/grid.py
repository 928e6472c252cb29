"""Uniform truncated-line spectral grid and core field operations.

The real line is truncated to [-X, X) with N equispaced nodes and periodic
FFT machinery; correctness of every operation rests on the fields decaying
to zero well inside the boundary, which `tail_mass` quantifies.

Fourier convention (fixed repo-wide): the continuum transform
``fhat(xi) = int f(x) exp(-i xi x) dx`` is approximated by ``dx * DFT``
with the node phase folded in; the inverse carries ``1/(2 pi)``.  Discrete
wavenumbers are ``xi_j = pi j / X`` for ``j = -N/2 .. N/2-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import GridError, ResolutionError, TailContaminationError

# Fields whose relative boundary magnitude exceeds this are flagged/rejected
# by operations that require decay.
DEFAULT_TAIL_TOL = 1e-6


@dataclass(frozen=True)
class SpectralGrid:
    """Equispaced periodic grid on [-X, X) with FFT wavenumbers."""

    half_width: float
    n_points: int
    dx: float = field(init=False, repr=False)
    x: np.ndarray = field(init=False, repr=False)
    xi: np.ndarray = field(init=False, repr=False)  # FFT ordering

    def __post_init__(self) -> None:
        X, N = self.half_width, self.n_points
        if not (isinstance(N, (int, np.integer)) and N >= 16 and (N & (N - 1)) == 0):
            raise GridError(f"n_points must be a power of two >= 16, got {N!r}")
        if not (np.isfinite(X) and X > 0):
            raise GridError(f"half_width must be positive and finite, got {X!r}")
        dx = 2.0 * X / N
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "x", -X + dx * np.arange(N))
        object.__setattr__(self, "xi", 2.0 * np.pi * np.fft.fftfreq(N, d=dx))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SpectralGrid)
            and self.half_width == other.half_width
            and self.n_points == other.n_points
        )

    def __hash__(self) -> int:
        return hash((self.half_width, self.n_points))


def make_grid(X: float, N: int) -> SpectralGrid:
    """Build a grid with half-width X and N nodes (N a power of two >= 16)."""
    return SpectralGrid(float(X), int(N))


@dataclass
class Field:
    """Samples of a function on a SpectralGrid, stamped with a time.

    Treated as immutable by every operation; new Fields are returned.
    """

    grid: SpectralGrid
    samples: np.ndarray
    t: float = 1.0

    def __post_init__(self) -> None:
        s = np.asarray(self.samples)
        if s.dtype.kind not in "fc":
            s = s.astype(np.float64)
        if s.shape != (self.grid.n_points,):
            raise GridError(
                f"samples shape {s.shape} does not match grid N={self.grid.n_points}"
            )
        if not np.all(np.isfinite(s)):
            raise GridError("samples contain NaN/Inf")
        self.samples = s

    @property
    def is_complex(self) -> bool:
        return self.samples.dtype.kind == "c"

    def with_samples(self, samples: np.ndarray, t: float | None = None) -> "Field":
        return Field(self.grid, samples, self.t if t is None else float(t))

    def copy(self) -> "Field":
        return Field(self.grid, self.samples.copy(), self.t)


def field_from_function(grid: SpectralGrid, fn, t: float = 1.0) -> Field:
    """Sample a callable fn(x) on the grid nodes."""
    return Field(grid, np.asarray(fn(grid.x)), t)


def tail_mass(f: Field) -> float:
    """Relative magnitude of f over the outer 5% of nodes on each side."""
    s = np.abs(f.samples)
    peak = s.max()
    if peak == 0.0:
        return 0.0
    k = max(1, f.grid.n_points // 20)
    return float(max(s[:k].max(), s[-k:].max()) / peak)


def _alternating_sign(N: int) -> np.ndarray:
    # exp(i xi_j X) = (-1)^j computed exactly from the integer mode index
    j = np.rint(np.fft.fftfreq(N) * N).astype(int)
    return 1.0 - 2.0 * (np.abs(j) % 2)


def spectrum(f: Field) -> np.ndarray:
    """Continuum-convention transform fhat(xi_j), FFT ordering (matches grid.xi)."""
    g = f.grid
    return g.dx * _alternating_sign(g.n_points) * np.fft.fft(f.samples)


def derivative(f: Field, order: int = 1, tail_tol: float | None = DEFAULT_TAIL_TOL) -> Field:
    """Spectral derivative: multiplication by (i xi)^order.

    Rejects fields with boundary contamination above tail_tol (pass None to
    skip the check).  The unpaired Nyquist mode is zeroed for odd orders.
    """
    if order not in (1, 2, 3, 4):
        raise GridError(f"derivative order must be in 1..4, got {order}")
    if tail_tol is not None:
        tm = tail_mass(f)
        if tm > tail_tol:
            raise TailContaminationError(
                f"tail_mass {tm:.3e} exceeds {tail_tol:.1e}; field not contained"
            )
    g = f.grid
    mult = (1j * g.xi) ** order
    if order % 2 == 1:
        mult[g.n_points // 2] = 0.0
    out = np.fft.ifft(mult * np.fft.fft(f.samples))
    if not f.is_complex:
        out = out.real
    return f.with_samples(out)


def quadrature(f: Field) -> float | complex:
    """Integral over [-X, X): trapezoid sum dx * sum(samples).

    Spectrally accurate for smooth decaying fields (endpoint terms vanish).
    """
    val = f.grid.dx * f.samples.sum()
    return complex(val) if f.is_complex else float(val)


def cumint(f: Field, left_tol: float | None = DEFAULT_TAIL_TOL) -> Field:
    """Cumulative integral from the left boundary: int_{-X}^{x} f(y) dy.

    Computed as the exact antiderivative of the trigonometric interpolant
    (mean handled by a linear ramp), so the result is spectrally accurate,
    vanishes at -X exactly, and reaches quadrature(f) at +X exactly.
    """
    g = f.grid
    peak = np.abs(f.samples).max()
    if left_tol is not None and peak > 0 and abs(f.samples[0]) > left_tol * peak:
        raise TailContaminationError(
            "significant mass at the left boundary; cumulative integral truncated"
        )
    F = np.fft.fft(f.samples)
    G = np.zeros_like(F)
    G[1:] = F[1:] / (1j * g.xi[1:])
    osc = np.fft.ifft(G)
    if not f.is_complex:
        osc = osc.real
    ramp = (F[0] / g.n_points) * (g.x + g.half_width)
    if not f.is_complex:
        ramp = ramp.real
    out = ramp + osc - osc[0]
    return f.with_samples(out)


def _barycentric_resample(f: Field, points: np.ndarray) -> np.ndarray:
    """Evaluate the trigonometric interpolant of f at arbitrary points."""
    g = f.grid
    N = g.n_points
    theta_k = (g.x + g.half_width) * np.pi / g.half_width
    theta_p = (points + g.half_width) * np.pi / g.half_width
    w = (-1.0) ** np.arange(N)
    eps = np.finfo(float).eps
    out = np.empty(points.shape, dtype=f.samples.dtype)
    chunk = max(1, (1 << 22) // N)  # keep the distance matrix ~32 MB
    for lo in range(0, len(points), chunk):
        D = 0.5 * (theta_p[lo : lo + chunk, None] - theta_k[None, :])
        D = 1.0 / np.tan(D + eps * (D == 0))  # N even: cot kernel
        out[lo : lo + chunk] = (D @ (w * f.samples)) / (D @ w)
    return out


def resample_scaled(f: Field, L: float, clip_tol: float | None = DEFAULT_TAIL_TOL) -> Field:
    """Rescaling map: (R_L f)(z) = L f(L z) on the same grid.

    Points with |L z| > X take the value 0 (clipping, never periodic wrap).
    The clipped tail mass is the boundary magnitude of f; above clip_tol it
    raises ResolutionError.  For integer L the interpolant is evaluated at
    node-coincident points, so the result is exact up to clipping.
    """
    if not (np.isfinite(L) and L >= 1.0):
        raise GridError(f"scale L must be >= 1, got {L!r}")
    if L == 1.0:
        return f.copy()
    clipped = tail_mass(f)
    if clip_tol is not None and clipped > clip_tol:
        raise ResolutionError(
            f"clipped tail mass {clipped:.3e} exceeds {clip_tol:.1e} for L={L}"
        )
    g = f.grid
    N, X, dx = g.n_points, g.half_width, g.dx
    points = L * g.x
    inside = np.abs(points) <= X
    out = np.zeros(N, dtype=f.samples.dtype)
    if float(L).is_integer():
        Li = int(L)
        m = (Li * np.arange(N) + (N * (1 - Li)) // 2) % N
        out[inside] = L * f.samples[m[inside]]
    else:
        out[inside] = L * _barycentric_resample(f, points[inside])
    return f.with_samples(out)


# ---------------------------------------------------------------------------
# CSV serialization: `x,value` (or `x,re,im`), header `# X=...,N=...,t=...`
# ---------------------------------------------------------------------------


def write_field_csv(f: Field, path: str | Path, meta: dict | None = None) -> None:
    g = f.grid
    lines = [f"# X={g.half_width:.17g},N={g.n_points},t={f.t:.17g}"]
    if meta:
        lines.append("# config: " + ",".join(f"{k}={v}" for k, v in meta.items()))
    if f.is_complex:
        lines.append("x,re,im")
        for x, v in zip(g.x, f.samples):
            lines.append(f"{x:.17g},{v.real:.17g},{v.imag:.17g}")
    else:
        lines.append("x,value")
        for x, v in zip(g.x, f.samples):
            lines.append(f"{x:.17g},{v:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_field_csv(path: str | Path) -> Field:
    text = Path(path).read_text().strip().splitlines()
    header = None
    rows = []
    columns = None
    for line in text:
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("X="):
                header = dict(item.split("=", 1) for item in body.split(","))
            continue
        if line.strip().startswith("x,"):
            columns = line.strip()
            continue
        rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise GridError(f"{path}: missing '# X=...,N=...,t=...' header")
    grid = make_grid(float(header["X"]), int(header["N"]))
    data = np.asarray(rows)
    if data.shape[0] != grid.n_points:
        raise GridError(f"{path}: {data.shape[0]} rows for grid N={grid.n_points}")
    if columns == "x,re,im" or data.shape[1] == 3:
        samples = data[:, 1] + 1j * data[:, 2]
    else:
        samples = data[:, 1]
    return Field(grid, samples, float(header.get("t", 1.0)))
