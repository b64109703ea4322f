"""Time-frequency reassignment for short-time Fourier and wavelet grids.

The short-time transform follows the symmetric (Weyl) phase convention,
so translation in time and frequency acts on grids by an exact phase
twist.  The wavelet side uses a parametric family of analytic wavelets
whose log-derivative fields satisfy a pointwise affine relation, giving
reassigned coordinates without phase unwrapping.
"""

from .cwt import (
    cwt,
    cwt_scale_derivative,
    cwt_time_derivative,
    default_scales,
    geometric_scales,
    icwt,
)
from .grid import ComplexGrid, renyi_entropy
from .heisenberg import (
    HeisenbergPoint,
    heisenberg_inv,
    heisenberg_mul,
    plane_action,
    schroedinger_action,
)
from .io import read_grid, read_signal, write_grid, write_signal
from .render import (
    db_image,
    phase_image,
    render_figure,
    render_figure_pair,
    render_pgm,
    write_pgm,
)
from .resample import trig_resample
from .scalogram_reassign import (
    LogDerivatives,
    ScaleTimeMap,
    cwt_log_derivatives,
    extract_holomorphic,
    map_amplitude,
    map_holomorphic,
    map_T,
    map_Tbeta,
    reassign_scalogram,
    structure_residual,
)
from .signals import ComplexSeries, Signal, gen_chirp, gen_click, gen_cosine
from .stft import fft_omega_axis, istft, stft, window_self_transform
from .stft_reassign import (
    PhaseGradients,
    ReassignmentField,
    displacement_field,
    geometric_phase,
    holomorphic_factor,
    reassign_spectrogram,
    reassignment_map,
    stft_phase_gradients,
)
from .verify import CHECK_NAMES, CheckResult, run_checks
from .wavelet import (
    ExtremalParams,
    admissibility,
    admissibility_squared,
    affine_action,
    affine_inv,
    affine_mul,
    extremal_spectrum,
    norm_constant,
    peak_omega,
    spectrum_log_derivative,
    wavelet_kernel,
    wavelet_time_samples,
)
from .window import Window

__version__ = "0.1.0"

__all__ = [
    "ComplexGrid",
    "ComplexSeries",
    "CheckResult",
    "CHECK_NAMES",
    "ExtremalParams",
    "HeisenbergPoint",
    "LogDerivatives",
    "PhaseGradients",
    "ReassignmentField",
    "ScaleTimeMap",
    "Signal",
    "Window",
    "admissibility",
    "admissibility_squared",
    "affine_action",
    "affine_inv",
    "affine_mul",
    "cwt",
    "cwt_log_derivatives",
    "cwt_scale_derivative",
    "cwt_time_derivative",
    "db_image",
    "default_scales",
    "displacement_field",
    "extract_holomorphic",
    "extremal_spectrum",
    "fft_omega_axis",
    "gen_chirp",
    "gen_click",
    "gen_cosine",
    "geometric_phase",
    "geometric_scales",
    "heisenberg_inv",
    "heisenberg_mul",
    "holomorphic_factor",
    "icwt",
    "istft",
    "map_T",
    "map_Tbeta",
    "map_amplitude",
    "map_holomorphic",
    "norm_constant",
    "peak_omega",
    "phase_image",
    "plane_action",
    "read_grid",
    "read_signal",
    "reassign_scalogram",
    "reassign_spectrogram",
    "reassignment_map",
    "render_figure",
    "render_figure_pair",
    "render_pgm",
    "renyi_entropy",
    "run_checks",
    "schroedinger_action",
    "spectrum_log_derivative",
    "stft",
    "stft_phase_gradients",
    "structure_residual",
    "trig_resample",
    "wavelet_kernel",
    "wavelet_time_samples",
    "window_self_transform",
    "write_grid",
    "write_pgm",
    "write_signal",
]
