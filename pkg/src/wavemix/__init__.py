"""wavemix: spectral numerics for diffusive mixing of wave trains.

Library layout:
    grid      - truncated-line FFT grid, fields, derivative/integral/rescale
    profiles  - closed-form Burgers profiles and the phase front
    norms     - weighted Sobolev and Fourier-weighted measurement norms
    colehopf  - Cole-Hopf transform, tangent maps, commutators
    flows     - heat / exact Burgers / linearized Burgers semigroups
    renorm    - rescaling-map diagnostics and contraction sweeps
    mixing    - renormalization-group driver for the wavenumber equation
    spectra   - wave trains, Bloch operators, eigenvalue curves
    cli       - experiment subcommands, report orchestration
"""

from .grid import Field, SpectralGrid, make_grid
from .profiles import BurgersParams, params_from_amplitude, params_from_offset

__version__ = "0.1.0"

__all__ = [
    "Field",
    "SpectralGrid",
    "make_grid",
    "BurgersParams",
    "params_from_amplitude",
    "params_from_offset",
    "__version__",
]
