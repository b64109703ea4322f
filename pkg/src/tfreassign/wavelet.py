"""Analytic wavelets extremal for the affine uncertainty relations.

The family is defined in the frequency domain on omega > 0 by

    psi_hat(w) = 2 k exp(i eps + i alpha log w + i beta w)
                     exp(-(kappa/c) w^c) w^(kappa nu - 1/2)

and zero elsewhere.  k normalizes the spectral energy on the half line,
integral |psi_hat|^2 dw = 1, and has a Gamma-function closed form, as do
the admissibility constants and the autocorrelation kernel for c = 1.
The log-derivative of the spectrum is what the scalogram reassignment
maps consume; its form makes a(d/da) log W an affine function of
(d/db) log W exactly when c = 1.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .resample import trig_resample
from .signals import ComplexSeries, Signal

__all__ = [
    "ExtremalParams",
    "extremal_spectrum",
    "spectrum_log_derivative",
    "norm_constant",
    "admissibility",
    "admissibility_squared",
    "peak_omega",
    "wavelet_time_samples",
    "wavelet_kernel",
    "affine_mul",
    "affine_inv",
    "affine_action",
]


@dataclass(frozen=True)
class ExtremalParams:
    """Parameters (epsilon, alpha, beta, kappa, nu, c) of an extremal wavelet.

    kappa sets the spectral decay rate, nu the vanishing-moment order
    (kappa nu > 1/2 keeps the wavelet admissible), c the decay shape
    (c = 1 is the exponential family with closed-form kernels), alpha a
    logarithmic chirp, beta a linear phase ramp, epsilon a constant phase.
    gamma = c kappa is the combination entering the half-plane coordinate
    z = (t - a beta) + i a gamma.
    """

    kappa: float
    nu: float
    alpha: float = 0.0
    beta: float = 0.0
    epsilon: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if not (self.kappa > 0 and self.c > 0):
            raise ValueError("kappa and c must be positive")
        if not self.kappa * self.nu > 0.5:
            raise ValueError("admissibility requires kappa * nu > 1/2")

    @property
    def gamma(self) -> float:
        return self.c * self.kappa

    def descriptor(self) -> dict:
        return {
            "wavelet": "extremal",
            "epsilon": float(self.epsilon),
            "alpha": float(self.alpha),
            "beta": float(self.beta),
            "kappa": float(self.kappa),
            "nu": float(self.nu),
            "c": float(self.c),
        }


def norm_constant(p: ExtremalParams) -> float:
    """k with integral over w > 0 of |psi_hat(w)|^2 dw = 1.

    k^2 = 1 / (4 (1/c) (c/(2 kappa))^(2 kappa nu / c) Gamma(2 kappa nu / c)).
    """
    q = 2.0 * p.kappa * p.nu / p.c
    log_k2 = -(
        math.log(4.0 / p.c) + q * math.log(p.c / (2.0 * p.kappa)) + math.lgamma(q)
    )
    return math.exp(0.5 * log_k2)


def extremal_spectrum(p: ExtremalParams, omega) -> np.ndarray:
    """psi_hat evaluated on an array of angular frequencies (zero for w <= 0)."""
    w = np.asarray(omega, dtype=np.float64)
    out = np.zeros(w.shape, dtype=np.complex128)
    pos = w > 0
    if np.any(pos):
        wp = w[pos]
        k = norm_constant(p)
        with np.errstate(under="ignore"):
            log_mag = (
                math.log(2.0 * k)
                + (p.kappa * p.nu - 0.5) * np.log(wp)
                - (p.kappa / p.c) * wp**p.c
            )
            phase = p.epsilon + p.alpha * np.log(wp) + p.beta * wp
            out[pos] = np.exp(log_mag + 1j * phase)
    return out


def spectrum_log_derivative(p: ExtremalParams, omega) -> np.ndarray:
    """Lambda(w) = psi_hat'(w) / psi_hat(w) on w > 0.

    Lambda(w) = (kappa nu - 1/2 + i alpha)/w + i beta - kappa w^(c-1).
    """
    w = np.asarray(omega, dtype=np.float64)
    if np.any(w <= 0):
        raise ValueError("log-derivative defined on omega > 0 only")
    return (
        (p.kappa * p.nu - 0.5 + 1j * p.alpha) / w
        + 1j * p.beta
        - p.kappa * w ** (p.c - 1.0)
    )


def admissibility(p: ExtremalParams) -> float:
    """Integral over w > 0 of |psi_hat(w)| / w dw (finite for kappa nu > 1/2)."""
    k = norm_constant(p)
    q = (p.kappa * p.nu - 0.5) / p.c
    return 2.0 * k / p.c * math.exp(q * math.log(p.c / p.kappa) + math.lgamma(q))


def admissibility_squared(p: ExtremalParams) -> float:
    """Integral over w > 0 of |psi_hat(w)|^2 / w dw, the reconstruction constant."""
    k = norm_constant(p)
    q = (2.0 * p.kappa * p.nu - 1.0) / p.c
    return (
        4.0 * k**2 / p.c * math.exp(q * math.log(p.c / (2.0 * p.kappa)) + math.lgamma(q))
    )


def peak_omega(p: ExtremalParams) -> float:
    """Angular frequency maximizing |psi_hat|: ((kappa nu - 1/2)/kappa)^(1/c)."""
    return ((p.kappa * p.nu - 0.5) / p.kappa) ** (1.0 / p.c)


def wavelet_time_samples(p: ExtremalParams, a: float, rate: float, n: int):
    """Time samples of the scale-a wavelet a^(-1/2) psi(t/a) on an n-point grid.

    Synthesized spectrally on the length-n FFT grid at the given rate, so
    the samples carry the periodization implied by that grid.  Returns
    (times, samples) centered on t = 0.
    """
    if a <= 0:
        raise ValueError("scale must be positive")
    omega = 2.0 * np.pi * np.fft.fftfreq(n, d=1.0 / rate)
    spec = np.sqrt(a) * extremal_spectrum(p, a * omega)
    samples = np.fft.ifft(spec) * rate
    shift = n // 2
    times = (np.arange(n) - shift) / rate
    return times, np.roll(samples, shift)


def wavelet_kernel(p: ExtremalParams, a, b) -> np.ndarray:
    """Normalized autocorrelation K(a, b) = (psi, U_(b,a) psi) / ||psi||^2.

    U_(b,a) psi(t) = a^(-1/2) psi((t - b)/a).  K(1, 0) = 1 and
    K((a, b)^-1) = conj(K(a, b)).  For c = 1,

        K(a, b) = 4 k^2 sqrt(a) a^(kappa nu - 1/2) e^(-i alpha log a)
                  Gamma(2 kappa nu) (kappa (1 + a) + i (beta (a - 1) - b))^(-2 kappa nu)

    and other c fall back to adaptive quadrature.
    """
    a_arr = np.asarray(a, dtype=np.float64)
    b_arr = np.asarray(b, dtype=np.float64)
    a_arr, b_arr = np.broadcast_arrays(a_arr, b_arr)
    if np.any(a_arr <= 0):
        raise ValueError("scale arguments must be positive")
    if p.c == 1.0:
        k2 = norm_constant(p) ** 2
        m = 2.0 * p.kappa * p.nu
        base = p.kappa * (1.0 + a_arr) + 1j * (p.beta * (a_arr - 1.0) - b_arr)
        log_k = (
            math.log(4.0 * k2)
            + math.lgamma(m)
            + (p.kappa * p.nu) * np.log(a_arr)
            - 1j * p.alpha * np.log(a_arr)
            - m * np.log(base)
        )
        return np.exp(log_k)
    out = np.empty(a_arr.shape, dtype=np.complex128)
    flat_a, flat_b, flat_o = a_arr.ravel(), b_arr.ravel(), out.ravel()
    for i in range(flat_a.size):
        flat_o[i] = _kernel_quad(p, float(flat_a[i]), float(flat_b[i]))
    return out


def _kernel_quad(p: ExtremalParams, a: float, b: float) -> complex:
    """K(a, b) = 2 pi sqrt(a)/(2 pi) int psi_hat(w) conj(psi_hat(a w)) e^(i b w) dw."""

    def integrand(w, part):
        val = (
            extremal_spectrum(p, np.array([w]))[0]
            * np.conj(extremal_spectrum(p, np.array([a * w]))[0])
            * np.exp(1j * b * w)
        )
        return val.real if part == 0 else val.imag

    # |integrand| ~ w^(2 kn - 1) exp(-(kappa/c)(1 + a^c) w^c): cut where negligible
    scale = ((2.0 * p.c * 40.0) / (p.kappa * (1.0 + a**p.c))) ** (1.0 / p.c)
    re = quad(integrand, 0.0, scale, args=(0,), limit=400)[0]
    im = quad(integrand, 0.0, scale, args=(1,), limit=400)[0]
    return np.sqrt(a) * complex(re, im)


def affine_mul(x, y):
    """Composition (b1, a1)(b2, a2) = (b1 + a1 b2, a1 a2) of affine maps t -> a t + b."""
    b1, a1 = x
    b2, a2 = y
    return (b1 + a1 * b2, a1 * a2)


def affine_inv(x):
    b, a = x
    return (-b / a, 1.0 / a)


def affine_action(x, f: Signal | ComplexSeries) -> ComplexSeries:
    """U_(b,a) f (t) = a^(-1/2) f((t - b) / a), resampled on f's own grid.

    Band-limited periodic interpolation supplies off-grid values, so the
    result is faithful only while the warped times stay inside the
    sampled span; dilations of non-periodic content incur wrap-around.
    """
    b, a = x
    if a <= 0:
        raise ValueError("affine scale must be positive")
    warped = (f.times() - b) / a
    vals = trig_resample(f.samples, f.sample_rate, f.start_time, warped) / np.sqrt(a)
    return ComplexSeries(vals, f.sample_rate, f.start_time)
