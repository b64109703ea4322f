"""The Heisenberg group and its Schroedinger action on signals.

Group elements are triples (s, xi, z): time shift, frequency shift and
central phase.  The composition law is

    (s1, x1, z1) (s2, x2, z2) = (s1+s2, x1+x2, z1+z2 + (x1 s2 - x2 s1)/2)

and the action on a function of time is

    (rho_x f)(t) = exp(i z + i xi (t - s/2)) f(t - s).

The induced action on time-frequency grids multiplies by
exp(i z + i (xi t - w s)/2) and shifts the axes.
"""

from dataclasses import dataclass

import numpy as np

from .grid import ComplexGrid
from .resample import trig_resample
from .signals import ComplexSeries, Signal

__all__ = [
    "HeisenbergPoint",
    "heisenberg_mul",
    "heisenberg_inv",
    "schroedinger_action",
    "plane_action",
]


@dataclass(frozen=True)
class HeisenbergPoint:
    """Group element (s, xi, z): time shift, frequency shift, central phase."""

    s: float
    xi: float
    z: float = 0.0

    def __post_init__(self):
        if not all(np.isfinite(v) for v in (self.s, self.xi, self.z)):
            raise ValueError("group coordinates must be finite")


def heisenberg_mul(x1: HeisenbergPoint, x2: HeisenbergPoint) -> HeisenbergPoint:
    """Group product x1 * x2."""
    return HeisenbergPoint(
        x1.s + x2.s,
        x1.xi + x2.xi,
        x1.z + x2.z + 0.5 * (x1.xi * x2.s - x2.xi * x1.s),
    )


def heisenberg_inv(x: HeisenbergPoint) -> HeisenbergPoint:
    """Group inverse; the central part of (s, xi, 0)^-1 stays zero."""
    return HeisenbergPoint(-x.s, -x.xi, -x.z)


def schroedinger_action(x: HeisenbergPoint, f: Signal | ComplexSeries) -> ComplexSeries:
    """Apply rho_x to a sampled signal, resampled on f's own grid.

    On-grid time shifts are applied by circular index shift; fractional
    shifts fall back to band-limited interpolation.  Either way the
    sampled span is treated as one period, so content shifted past an
    edge wraps around.
    """
    t = f.times()
    steps = x.s * f.sample_rate
    k = int(round(steps))
    if abs(steps - k) < 1e-9:
        shifted = np.roll(np.asarray(f.samples, dtype=np.complex128), k)
    else:
        shifted = trig_resample(f.samples, f.sample_rate, f.start_time, t - x.s)
    phase = np.exp(1j * (x.z + x.xi * (t - 0.5 * x.s)))
    return ComplexSeries(phase * shifted, f.sample_rate, f.start_time)


def plane_action(x: HeisenbergPoint, grid: ComplexGrid) -> ComplexGrid:
    """Induced action on a time-frequency grid.

    Values are multiplied by exp(i z + i (xi t - w s)/2) and the axes are
    shifted by (s, xi); grid geometry is otherwise unchanged.
    """
    if grid.axis_kind != "frequency":
        raise ValueError("plane action is defined on frequency grids")
    t = grid.time_axis[np.newaxis, :]
    w = grid.second_axis[:, np.newaxis]
    phase = np.exp(1j * (x.z + 0.5 * (x.xi * t - w * x.s)))
    return ComplexGrid(
        phase * grid.values,
        grid.time_axis + x.s,
        grid.second_axis + x.xi,
        "frequency",
        dict(grid.source_descriptor),
    )
