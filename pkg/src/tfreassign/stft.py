"""Short-time Fourier transform in the symmetric (Weyl) convention.

The transform of f against window h is

    Sf(t, w) = exp(i w t / 2) * integral f(s) conj(h(s - t)) exp(-i w s) ds,

equivalently the inner product of f with the Schroedinger action of
(t, w, 0) on h.  The symmetric phase factor makes the transform covariant
under the full Heisenberg group.

Frames are evaluated by windowed FFT columns when the frequency axis sits
on FFT bins, and by a dense quadrature product for arbitrary uniform axes.
Both paths share the sample-spacing quadrature weight and agree to
rounding error.
"""

import numpy as np

from .grid import ComplexGrid
from .signals import ComplexSeries, Signal
from .window import Window

__all__ = [
    "fft_omega_axis",
    "stft",
    "istft",
    "window_self_transform",
]

_FRAME_BLOCK = 256


def fft_omega_axis(rate: float, n_fft: int, k_lo: int | None = None,
                   k_hi: int | None = None) -> np.ndarray:
    """Angular frequencies of FFT bins k_lo..k_hi (inclusive) at the given rate.

    Defaults cover the full band, bins -n_fft//2 .. n_fft//2 - 1.
    """
    if n_fft < 2:
        raise ValueError("n_fft must be at least 2")
    if k_lo is None:
        k_lo = -(n_fft // 2)
    if k_hi is None:
        k_hi = n_fft // 2 - 1
    if k_hi < k_lo:
        raise ValueError("empty bin range")
    dw = 2.0 * np.pi * rate / n_fft
    return dw * np.arange(k_lo, k_hi + 1)


def _window_samples(window: Window, rate: float):
    """Window samples on the signal grid, odd length, centered."""
    half = int(np.ceil(window.half_width() * rate))
    u = (np.arange(2 * half + 1) - half) / rate
    return u, window.evaluate(u)


def _frame_centers(n: int, hop: int) -> np.ndarray:
    return np.arange(0, n, hop)


def _fft_bin_layout(omega: np.ndarray, rate: float, min_n: int):
    """Map a uniform omega axis onto FFT bins, or return None."""
    if omega.size < 2:
        return None
    dws = np.diff(omega)
    dw = dws[0]
    if dw <= 0 or np.max(np.abs(dws - dw)) > 1e-9 * abs(dw):
        return None
    n_fft = 2.0 * np.pi * rate / dw
    n_round = int(round(n_fft))
    if n_round < min_n or abs(n_fft - n_round) > 1e-6:
        return None
    k = omega / dw
    k_round = np.round(k).astype(int)
    if np.max(np.abs(k - k_round)) > 1e-6:
        return None
    if np.any(np.abs(k_round) > n_round // 2):
        return None
    return n_round, k_round


def _multi_window_stft(samples, rate: float, start_time: float,
                       window_sample_list, hop: int, omega: np.ndarray):
    """Transforms of one signal against several windows on a shared grid.

    Returns (frame_times, [values per window]).  All windows must share the
    sample layout of the first (same length, same centering).
    """
    x = np.asarray(samples, dtype=np.complex128)
    n = x.size
    m = window_sample_list[0].size
    half = (m - 1) // 2
    dt = 1.0 / rate
    if any(w.size != m for w in window_sample_list):
        raise ValueError("auxiliary windows must share the sample layout")

    padded = np.zeros(n + 2 * m, dtype=np.complex128)
    padded[m : m + n] = x
    centers = _frame_centers(n, hop)
    frame_times = start_time + centers * dt

    layout = _fft_bin_layout(omega, rate, m)
    if layout is not None:
        n_fft, k_bins = layout
        bin_phase = np.exp(2j * np.pi * k_bins * half / n_fft)
    else:
        u = (np.arange(m) - half) * dt
        basis = np.exp(-1j * np.outer(u, omega))

    conj_windows = [np.conj(w) for w in window_sample_list]
    outs = [
        np.empty((omega.size, centers.size), dtype=np.complex128)
        for _ in window_sample_list
    ]
    offsets = np.arange(m) - half
    for lo in range(0, centers.size, _FRAME_BLOCK):
        blk = centers[lo : lo + _FRAME_BLOCK]
        seg = padded[m + blk[:, None] + offsets[None, :]]
        for wi, cw in enumerate(conj_windows):
            y = seg * cw[None, :]
            if layout is not None:
                spec = np.fft.fft(y, n=n_fft, axis=1)
                vals = spec[:, k_bins % n_fft] * bin_phase[None, :]
            else:
                vals = y @ basis
            weyl = np.exp(-0.5j * np.outer(frame_times[lo : lo + blk.size], omega))
            outs[wi][:, lo : lo + blk.size] = (dt * weyl * vals).T
    return frame_times, outs


def stft(f: Signal | ComplexSeries, window: Window, hop: int = 1,
         omega: np.ndarray | None = None) -> ComplexGrid:
    """Short-time transform of f on a frame-time x frequency grid.

    Parameters
    ----------
    f : Signal or ComplexSeries
        Input, sampled uniformly.
    window : Window
        Analysis window; custom windows must be sampled at f's rate.
    hop : int
        Frame step in samples (frame centers sit on the sample grid).
    omega : ndarray or None
        Uniform angular-frequency axis within the Nyquist band.  Defaults
        to full-band FFT bins of a power-of-two transform covering the
        window.

    The signal is zero-padded by one full window length on each side, so
    every frame sees complete window support.
    """
    if hop < 1 or int(hop) != hop:
        raise ValueError("hop must be a positive integer")
    rate = f.sample_rate
    if window.half_width() >= f.n / rate:
        raise ValueError("window support exceeds the signal duration")
    u, h = _window_samples(window, rate)
    if omega is None:
        n_fft = max(256, 1 << int(np.ceil(np.log2(h.size))))
        omega = fft_omega_axis(rate, n_fft)
    omega = np.asarray(omega, dtype=np.float64)
    if omega.size == 0:
        raise ValueError("empty frequency axis")
    nyq = np.pi * rate
    if np.any(np.abs(omega) > nyq * (1 + 1e-12)):
        raise ValueError("frequency axis exceeds the Nyquist band")

    frame_times, outs = _multi_window_stft(
        f.samples, rate, f.start_time, [h], int(hop), omega
    )
    desc = {
        **window.descriptor(),
        "transform": "stft",
        "hop": int(hop),
        "sample_rate": float(rate),
        "start_time": float(f.start_time),
        "n_samples": int(f.n),
    }
    return ComplexGrid(outs[0], frame_times, omega, "frequency", desc)


def istft(grid: ComplexGrid, window: Window, rate: float | None = None):
    """Invert a short-time grid by the group-translate superposition.

    Sums Sf(s, xi) rho_(s, xi, 0) h over the grid with the axis spacings as
    quadrature weights, divided by 2 pi |h|^2.  Returns (Signal, info);
    info reports the discarded imaginary residual and grid-density checks.
    A sparse grid degrades quality but still returns a result.
    """
    desc = grid.source_descriptor
    if rate is None:
        rate = desc.get("sample_rate")
        if rate is None:
            raise ValueError("rate not given and absent from grid metadata")
    if grid.axis_kind != "frequency":
        raise ValueError("istft needs a frequency-axis grid")
    dt = 1.0 / rate
    n = int(desc.get("n_samples", round((grid.time_axis[-1] - grid.time_axis[0]) / dt) + 1))
    start_time = float(desc.get("start_time", grid.time_axis[0]))

    u, h = _window_samples(window, rate)
    m = h.size
    half = (m - 1) // 2
    omega = grid.second_axis
    dw = grid.second_step()
    ds = grid.time_step

    # per frame: h(u) * sum_k Sf(k,j) exp(i w_k (s_j/2 + u)) dw
    c = grid.values.T * np.exp(0.5j * np.outer(grid.time_axis, omega)) * dw
    basis = np.exp(1j * np.outer(omega, u))
    g = c @ basis  # frames x window offsets

    centers = np.round((grid.time_axis - start_time) * rate).astype(int)
    acc = np.zeros(n + 2 * m, dtype=np.complex128)
    for j, jc in enumerate(centers):
        acc[m + jc - half : m + jc + half + 1] += h * g[j]
    rec = acc[m : m + n] * ds / (2.0 * np.pi * window.norm_sq())

    denom = float(np.linalg.norm(rec)) or 1.0
    info = {
        "imag_residual": float(np.linalg.norm(rec.imag)) / denom,
        "time_step_ok": bool(ds <= 2.0 * _effective_sigma(window)),
        "omega_step_ok": bool(dw <= 2.0 / _effective_sigma(window)),
    }
    info["quality_warning"] = not (info["time_step_ok"] and info["omega_step_ok"])
    return Signal(rec.real, rate, start_time), info


def _effective_sigma(window: Window) -> float:
    """Root-mean-square time width of the window."""
    if window.kind == "gaussian":
        return window.sigma
    w2 = np.abs(window.samples) ** 2
    t = (np.arange(window.samples.size) - 0.5 * (window.samples.size - 1))
    t = t / window.sample_rate
    return float(np.sqrt(np.sum(t**2 * w2) / np.sum(w2)))


def window_self_transform(window: Window, dt, dw, rate: float | None = None):
    """Self-transform Sh(dt, dw) of the analysis window.

    Gaussian windows use the closed form (real, positive, radial in the
    scaled offsets).  Custom windows are analyzed against themselves on a
    dense grid once and interpolated bilinearly.
    """
    if window.kind == "gaussian":
        return window.self_transform(dt, dw)
    if rate is None:
        rate = window.sample_rate
    dt = np.atleast_1d(np.asarray(dt, dtype=np.float64))
    dw = np.atleast_1d(np.asarray(dw, dtype=np.float64))
    table = _self_transform_table(window, rate)
    return _bilinear(table, dt, dw)


def _self_transform_table(window: Window, rate: float) -> ComplexGrid:
    u, h = _window_samples(window, rate)
    sig = ComplexSeries(h, rate, float(u[0]))
    n_fft = max(256, 1 << int(np.ceil(np.log2(h.size + 1))))
    return stft(sig, window, hop=1, omega=fft_omega_axis(rate, n_fft))


def _bilinear(grid: ComplexGrid, dt, dw):
    t_ax, w_ax = grid.time_axis, grid.second_axis
    vals = np.zeros(np.broadcast(dt, dw).shape, dtype=np.complex128)
    dt, dw = np.broadcast_arrays(dt, dw)
    inside = (
        (dt >= t_ax[0]) & (dt <= t_ax[-1]) & (dw >= w_ax[0]) & (dw <= w_ax[-1])
    )
    ti = np.clip(np.searchsorted(t_ax, dt[inside]) - 1, 0, t_ax.size - 2)
    wi = np.clip(np.searchsorted(w_ax, dw[inside]) - 1, 0, w_ax.size - 2)
    ft = (dt[inside] - t_ax[ti]) / (t_ax[ti + 1] - t_ax[ti])
    fw = (dw[inside] - w_ax[wi]) / (w_ax[wi + 1] - w_ax[wi])
    v = grid.values
    vals[inside] = (
        v[wi, ti] * (1 - ft) * (1 - fw)
        + v[wi, ti + 1] * ft * (1 - fw)
        + v[wi + 1, ti] * (1 - ft) * fw
        + v[wi + 1, ti + 1] * ft * fw
    )
    return vals
