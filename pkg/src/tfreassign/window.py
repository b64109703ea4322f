"""Analysis windows for the short-time transform.

The reference window is the unit-integral Gaussian
``h(t) = exp(-t^2/(2 sigma^2)) / (sigma sqrt(2 pi))``; at sigma = 1 this is
the normalized Gaussian whose self-transform is the radial Gaussian
``|h|^2 exp(-(t^2 + w^2)/4)``.  Custom sampled windows are supported for
analysis; operations needing closed forms (self-transform, holomorphic
factorization) require the Gaussian.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = ["Window"]

# truncate where the Gaussian falls to 1e-12 of its peak
_TRUNC_HALF_WIDTH_SIGMAS = float(np.sqrt(2.0 * 12.0 * np.log(10.0)))


@dataclass(frozen=True)
class Window:
    """An analysis window, Gaussian or custom sampled.

    Use the constructors `Window.gaussian(sigma)` or
    `Window.from_samples(samples, rate)`.
    """

    kind: str
    sigma: float = 1.0
    samples: NDArray[np.complex128] | None = None
    sample_rate: float | None = None

    def __post_init__(self):
        if self.kind == "gaussian":
            if not (np.isfinite(self.sigma) and self.sigma > 0):
                raise ValueError("sigma must be positive and finite")
        elif self.kind == "custom":
            arr = np.array(np.asarray(self.samples), dtype=np.complex128)
            if arr.ndim != 1 or arr.size < 3:
                raise ValueError("custom window needs at least 3 samples")
            if not np.all(np.isfinite(arr)):
                raise ValueError("window samples must be finite")
            if self.sample_rate is None or self.sample_rate <= 0:
                raise ValueError("custom window needs a positive sample rate")
            arr.flags.writeable = False
            object.__setattr__(self, "samples", arr)
            if self.norm_sq() <= 0:
                raise ValueError("window norm must be positive")
        else:
            raise ValueError(f"unknown window kind {self.kind!r}")

    @staticmethod
    def gaussian(sigma: float = 1.0) -> "Window":
        return Window(kind="gaussian", sigma=sigma)

    @staticmethod
    def from_samples(samples, rate: float) -> "Window":
        """Custom window from samples centered on t = 0."""
        return Window(kind="custom", samples=samples, sample_rate=rate)

    @property
    def amplitude(self) -> float:
        """Peak value of the Gaussian (unit time integral)."""
        return 1.0 / (self.sigma * np.sqrt(2.0 * np.pi))

    def half_width(self) -> float:
        """Half support in seconds after truncation."""
        if self.kind == "gaussian":
            return _TRUNC_HALF_WIDTH_SIGMAS * self.sigma
        return 0.5 * (self.samples.size - 1) / self.sample_rate

    def evaluate(self, t) -> NDArray[np.complex128]:
        """Window values at arbitrary times (zero outside support)."""
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "gaussian":
            return (self.amplitude * np.exp(-(t**2) / (2.0 * self.sigma**2))).astype(
                np.complex128
            )
        center = 0.5 * (self.samples.size - 1)
        pos = t * self.sample_rate + center
        idx = np.round(pos).astype(int)
        if np.max(np.abs(pos - idx), initial=0.0) > 1e-6:
            raise ValueError("custom window sampled off its own grid")
        out = np.zeros(t.shape, dtype=np.complex128)
        ok = (idx >= 0) & (idx < self.samples.size)
        out[ok] = self.samples[idx[ok]]
        return out

    def derivative(self, t) -> NDArray[np.complex128]:
        """dh/dt at arbitrary times."""
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "gaussian":
            return (-t / self.sigma**2) * self.evaluate(t)
        grad = np.gradient(self.samples, 1.0 / self.sample_rate)
        center = 0.5 * (self.samples.size - 1)
        idx = np.round(t * self.sample_rate + center).astype(int)
        out = np.zeros(t.shape, dtype=np.complex128)
        ok = (idx >= 0) & (idx < self.samples.size)
        out[ok] = grad[idx[ok]]
        return out

    def norm_sq(self) -> float:
        """Squared L2 norm of the window."""
        if self.kind == "gaussian":
            return self.amplitude**2 * self.sigma * np.sqrt(np.pi)
        return float(
            np.sum(np.abs(self.samples) ** 2) / self.sample_rate
        )

    def self_transform(self, dt, dw) -> NDArray[np.complex128]:
        """Short-time transform of the window by itself at offsets (dt, dw).

        For the Gaussian this is the closed form
        ``norm_sq * exp(-dt^2/(4 sigma^2) - sigma^2 dw^2/4)``,
        real and positive everywhere.  Offsets broadcast together.
        """
        dt = np.asarray(dt, dtype=np.float64)
        dw = np.asarray(dw, dtype=np.float64)
        if self.kind != "gaussian":
            raise ValueError("closed-form self-transform requires a Gaussian window")
        out = self.norm_sq() * np.exp(
            -(dt**2) / (4.0 * self.sigma**2) - (self.sigma**2) * dw**2 / 4.0
        )
        return out.astype(np.complex128)

    def descriptor(self) -> dict:
        if self.kind == "gaussian":
            return {"window": "gaussian", "sigma": float(self.sigma)}
        return {
            "window": "custom",
            "n_samples": int(self.samples.size),
            "sample_rate": float(self.sample_rate),
        }
