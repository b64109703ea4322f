"""Sampled signals and deterministic test-signal generators.

All frequencies at this level are angular (rad/s).  Conversion from Hz
happens at the command-line boundary only.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "Signal",
    "ComplexSeries",
    "gen_cosine",
    "gen_click",
    "gen_chirp",
]


@dataclass(frozen=True)
class Signal:
    """A uniformly sampled real signal.

    Parameters
    ----------
    samples : ndarray
        Real sample values.  Copied and frozen on construction.
    sample_rate : float
        Samples per second, > 0.
    start_time : float
        Time of the first sample in seconds.
    """

    samples: NDArray[np.float64]
    sample_rate: float
    start_time: float = 0.0

    def __post_init__(self):
        arr = np.asarray(self.samples)
        if np.iscomplexobj(arr):
            raise ValueError("Signal holds real samples; complex input rejected")
        arr = np.array(arr, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("samples must be a nonempty 1-D array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        if not (np.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise ValueError("sample_rate must be positive and finite")
        if not np.isfinite(self.start_time):
            raise ValueError("start_time must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate

    @property
    def duration(self) -> float:
        return self.n / self.sample_rate

    def times(self) -> NDArray[np.float64]:
        """Sample times start_time + i/rate."""
        return self.start_time + np.arange(self.n) / self.sample_rate

    def norm(self) -> float:
        """Continuous L2 norm estimate sqrt(sum |x|^2 dt)."""
        return float(np.sqrt(np.sum(self.samples**2) / self.sample_rate))


@dataclass(frozen=True)
class ComplexSeries:
    """A uniformly sampled complex-valued function of time.

    Produced by group actions (modulation makes real signals complex);
    never serialized to signal files.
    """

    samples: NDArray[np.complex128]
    sample_rate: float
    start_time: float = 0.0

    def __post_init__(self):
        arr = np.array(np.asarray(self.samples), dtype=np.complex128)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("samples must be a nonempty 1-D array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        if not (np.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise ValueError("sample_rate must be positive and finite")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate

    def times(self) -> NDArray[np.float64]:
        return self.start_time + np.arange(self.n) / self.sample_rate

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) / self.sample_rate))


def _check_rate_n(n: int, rate: float) -> None:
    if n <= 0:
        raise ValueError("n must be positive")
    if rate <= 0:
        raise ValueError("rate must be positive")


def gen_cosine(
    freq: float, amplitude: float, n: int, rate: float, start_time: float = 0.0
) -> Signal:
    """Pure cosine amplitude*cos(freq*t) sampled at rate.

    Parameters
    ----------
    freq : float
        Angular frequency in rad/s.  Must lie strictly below the Nyquist
        frequency pi*rate.
    amplitude : float
        Peak amplitude.
    n : int
        Number of samples.
    rate : float
        Sample rate in Hz.
    start_time : float
        Time of the first sample.
    """
    _check_rate_n(n, rate)
    if not 0 <= freq < np.pi * rate:
        raise ValueError(f"freq {freq} rad/s outside [0, Nyquist={np.pi * rate:.6g})")
    t = start_time + np.arange(n) / rate
    return Signal(amplitude * np.cos(freq * t), rate, start_time)


def gen_click(position: float, n: int, rate: float) -> Signal:
    """Unit-integral impulse: one sample of value rate at the given time.

    The sample index is round(position*rate); position must fall inside
    [0, n/rate).
    """
    _check_rate_n(n, rate)
    idx = int(round(position * rate))
    if not 0 <= idx < n:
        raise ValueError(f"click position {position} outside signal support")
    samples = np.zeros(n)
    samples[idx] = rate
    return Signal(samples, rate, 0.0)


def gen_chirp(
    f0: float, f1: float, n: int, rate: float, start_time: float = 0.0
) -> Signal:
    """Linear chirp sweeping angular frequency f0 -> f1 over the duration.

    Instantaneous frequency is f0 + (f1-f0)*(t-start)/T, so the phase is
    f0*(t-start) + (f1-f0)*(t-start)^2/(2T).  With f0 == f1 this reduces
    exactly to gen_cosine.
    """
    _check_rate_n(n, rate)
    nyq = np.pi * rate
    if not (0 <= f0 < nyq and 0 <= f1 < nyq):
        raise ValueError("chirp endpoints must lie inside [0, Nyquist)")
    duration = n / rate
    tau = np.arange(n) / rate
    # absolute-time base phase keeps the f0 == f1 case identical to gen_cosine
    phase = f0 * (start_time + tau) + (f1 - f0) * tau**2 / (2.0 * duration)
    return Signal(np.cos(phase), rate, start_time)
