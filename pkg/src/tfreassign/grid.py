"""Complex-valued time-frequency and time-scale grids."""

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

__all__ = ["ComplexGrid", "renyi_entropy"]

_AXIS_KINDS = ("frequency", "scale")


def renyi_entropy(values, order: float = 3.0) -> float:
    """Renyi entropy (nats) of the normalized energy distribution |values|^2.

    H = log(sum p^order) / (1 - order) with p the bin masses normalized
    to unit total.  Lower values mean a more concentrated distribution.
    """
    if order <= 0 or order == 1.0:
        raise ValueError("order must be positive and different from 1")
    p = np.abs(np.asarray(values)) ** 2
    total = p.sum()
    if not total > 0:
        raise ValueError("distribution has no mass")
    p = p / total
    return float(np.log(np.sum(p**order)) / (1.0 - order))


@dataclass(frozen=True)
class ComplexGrid:
    """Complex values on a rectangular (second axis) x (time) grid.

    Parameters
    ----------
    values : ndarray, shape (len(second_axis), len(time_axis))
        One row per second-axis bin, one column per time bin.
    time_axis : ndarray
        Time bin centers in seconds, strictly increasing.
    second_axis : ndarray
        Angular frequencies (rad/s) or scales (s), strictly monotone;
        scales must be positive.
    axis_kind : str
        "frequency" or "scale".
    source_descriptor : dict
        Provenance of the grid (window or wavelet parameters, hop, ...).
        Stored as given; written into grid metadata on serialization.
    """

    values: NDArray[np.complex128]
    time_axis: NDArray[np.float64]
    second_axis: NDArray[np.float64]
    axis_kind: str
    source_descriptor: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.array(np.asarray(self.values), dtype=np.complex128)
        t_ax = np.array(np.asarray(self.time_axis), dtype=np.float64)
        s_ax = np.array(np.asarray(self.second_axis), dtype=np.float64)
        if self.axis_kind not in _AXIS_KINDS:
            raise ValueError(f"axis_kind must be one of {_AXIS_KINDS}")
        if t_ax.ndim != 1 or s_ax.ndim != 1 or t_ax.size == 0 or s_ax.size == 0:
            raise ValueError("axes must be nonempty 1-D arrays")
        if vals.shape != (s_ax.size, t_ax.size):
            raise ValueError(
                f"values shape {vals.shape} does not match axes "
                f"({s_ax.size}, {t_ax.size})"
            )
        if t_ax.size > 1 and not np.all(np.diff(t_ax) > 0):
            raise ValueError("time_axis must be strictly increasing")
        d = np.diff(s_ax)
        if s_ax.size > 1 and not (np.all(d > 0) or np.all(d < 0)):
            raise ValueError("second_axis must be strictly monotone")
        if self.axis_kind == "scale" and np.any(s_ax <= 0):
            raise ValueError("scales must be positive")
        if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(t_ax)) and np.all(np.isfinite(s_ax))):
            raise ValueError("grid contents must be finite")
        for arr in (vals, t_ax, s_ax):
            arr.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "time_axis", t_ax)
        object.__setattr__(self, "second_axis", s_ax)

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @property
    def time_step(self) -> float:
        if self.time_axis.size < 2:
            raise ValueError("time axis has a single bin; no spacing defined")
        return float(self.time_axis[1] - self.time_axis[0])

    def second_step(self) -> float:
        """Spacing of the second axis (uniform axes only)."""
        if self.second_axis.size < 2:
            raise ValueError("second axis has a single bin; no spacing defined")
        return float(self.second_axis[1] - self.second_axis[0])

    def magnitude(self) -> NDArray[np.float64]:
        return np.abs(self.values)

    def energy(self) -> float:
        """Plain bin-mass energy sum |value|^2 (no measure weights)."""
        return float(np.sum(np.abs(self.values) ** 2))

    def with_values(self, values) -> "ComplexGrid":
        """Same axes and descriptor, new values."""
        return ComplexGrid(
            values, self.time_axis, self.second_axis, self.axis_kind,
            dict(self.source_descriptor),
        )
