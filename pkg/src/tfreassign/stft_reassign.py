"""Reassignment of the short-time transform.

Phase partial derivatives are obtained without unwrapping from the
imaginary parts of auxiliary-window transform ratios: with windows th(t)
and h'(t) alongside h,

    d(phase)/dt = w/2 - Im(S_h' f / S_h f)
    d(phase)/dw = -t/2 - Re(S_th f / S_h f).

The reassigned coordinates in the symmetric convention are

    t~ = t/2 - d(phase)/dw        w~ = w/2 + d(phase)/dt

so the displacement v = (t~ - t, w~ - w) reduces to the classical
window-ratio formulas.  For a Gaussian window the transform factors as
Sf = F(z) exp(-|z|^2/4) with z = sigma w + i t / sigma and F holomorphic,
which yields the diagnostic identities checked by holomorphic_factor.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .grid import ComplexGrid
from .signals import ComplexSeries, Signal
from .stft import _multi_window_stft, _window_samples, fft_omega_axis, window_self_transform
from .window import Window

__all__ = [
    "PhaseGradients",
    "ReassignmentField",
    "stft_phase_gradients",
    "displacement_field",
    "reassignment_map",
    "geometric_phase",
    "reassign_spectrogram",
    "holomorphic_factor",
]

DEFAULT_EPS_MAG = 1e-6
DEFAULT_EPS_JAC = 1e-3


@dataclass(frozen=True)
class PhaseGradients:
    """Phase partial derivatives on a transform grid, NaN where masked."""

    dphi_dt: NDArray[np.float64]
    dphi_dw: NDArray[np.float64]
    mask: NDArray[np.bool_]
    eps_mag: float


@dataclass(frozen=True)
class ReassignmentField:
    """Reassigned coordinates, displacement and map Jacobian per grid point."""

    t_tilde: NDArray[np.float64]
    w_tilde: NDArray[np.float64]
    v_t: NDArray[np.float64]
    v_w: NDArray[np.float64]
    jacobian: NDArray[np.float64]
    mask: NDArray[np.bool_]


def stft_phase_gradients(
    f: Signal | ComplexSeries,
    window: Window,
    hop: int = 1,
    omega: np.ndarray | None = None,
    eps_mag: float = DEFAULT_EPS_MAG,
):
    """Transform f and return (PhaseGradients, transform grid).

    Points with |Sf| below eps_mag times the grid maximum are masked and
    carry NaN derivatives.
    """
    rate = f.sample_rate
    u, h = _window_samples(window, rate)
    th = u * h
    dh = window.derivative(u)
    if omega is None:
        n_fft = max(256, 1 << int(np.ceil(np.log2(h.size))))
        omega = fft_omega_axis(rate, n_fft)
    omega = np.asarray(omega, dtype=np.float64)

    frame_times, (sf, s_th, s_dh) = _multi_window_stft(
        f.samples, rate, f.start_time, [h, th, dh], int(hop), omega
    )

    mag = np.abs(sf)
    mask = mag >= eps_mag * mag.max()
    ratio_th = np.full(sf.shape, np.nan + 0j, dtype=np.complex128)
    ratio_dh = np.full(sf.shape, np.nan + 0j, dtype=np.complex128)
    np.divide(s_th, sf, out=ratio_th, where=mask)
    np.divide(s_dh, sf, out=ratio_dh, where=mask)

    t = frame_times[np.newaxis, :]
    w = omega[:, np.newaxis]
    dphi_dt = 0.5 * w - np.imag(ratio_dh)
    dphi_dw = -0.5 * t - np.real(ratio_th)

    desc = {
        **window.descriptor(),
        "transform": "stft",
        "hop": int(hop),
        "sample_rate": float(rate),
        "start_time": float(f.start_time),
        "n_samples": int(f.n),
    }
    grid = ComplexGrid(sf, frame_times, omega, "frequency", desc)
    return PhaseGradients(dphi_dt, dphi_dw, mask, float(eps_mag)), grid


def displacement_field(pg: PhaseGradients, grid: ComplexGrid):
    """Displacement v = (t~ - t, w~ - w) = (-t/2 - dphi/dw, -w/2 + dphi/dt)."""
    t = grid.time_axis[np.newaxis, :]
    w = grid.second_axis[:, np.newaxis]
    v_t = -0.5 * t - pg.dphi_dw
    v_w = -0.5 * w + pg.dphi_dt
    return v_t, v_w


def reassignment_map(pg: PhaseGradients, grid: ComplexGrid) -> ReassignmentField:
    """Reassigned coordinates t~ = t/2 - dphi/dw, w~ = w/2 + dphi/dt.

    The Jacobian determinant of (t, w) -> (t~, w~) is estimated by central
    differences, one-sided at the grid borders.
    """
    v_t, v_w = displacement_field(pg, grid)
    t = grid.time_axis[np.newaxis, :]
    w = grid.second_axis[:, np.newaxis]
    t_tilde = t + v_t
    w_tilde = w + v_w
    jac = _det_jacobian(t_tilde, w_tilde, grid.second_axis, grid.time_axis)
    return ReassignmentField(t_tilde, w_tilde, v_t, v_w, jac, pg.mask.copy())


def _det_jacobian(a_new, b_new, row_axis, col_axis):
    """det d(a_new, b_new)/d(row, col) on a rectangular grid."""
    da_dr = np.gradient(a_new, row_axis, axis=0)
    da_dc = np.gradient(a_new, col_axis, axis=1)
    db_dr = np.gradient(b_new, row_axis, axis=0)
    db_dc = np.gradient(b_new, col_axis, axis=1)
    return da_dc * db_dr - da_dr * db_dc


def geometric_phase(
    f: Signal | ComplexSeries,
    window: Window,
    t0: float,
    w0: float,
    t_offsets,
    w_offsets,
):
    """Phase in the frame moved to (t0, w0):

        Phi(t, w) = phase(Sf(t + t0, w + w0)) - (t w0 - t0 w) / 2

    over local offsets (t, w).  The phase branch is taken relative to the
    patch center, so the result is continuous on patches small enough that
    the phase moves less than pi between neighbours.  Offset times must
    land on the sample grid.
    """
    rate = f.sample_rate
    t_offsets = np.asarray(t_offsets, dtype=np.float64)
    w_offsets = np.asarray(w_offsets, dtype=np.float64)
    u, h = _window_samples(window, rate)

    def _values(times, omegas):
        centers = (times - f.start_time) * rate
        idx = np.round(centers).astype(int)
        if np.max(np.abs(centers - idx)) > 1e-6:
            raise ValueError("patch times must land on the sample grid")
        if np.any(idx < 0) or np.any(idx >= f.n):
            raise ValueError("patch extends beyond the signal support")
        x = np.asarray(f.samples, dtype=np.complex128)
        padded = np.zeros(x.size + 2 * h.size, dtype=np.complex128)
        padded[h.size : h.size + x.size] = x
        half = (h.size - 1) // 2
        offs = np.arange(h.size) - half
        seg = padded[h.size + idx[:, None] + offs[None, :]]
        basis = np.exp(-1j * np.outer(u, omegas))
        vals = (seg * np.conj(h)[None, :]) @ basis
        weyl = np.exp(-0.5j * np.outer(times, omegas))
        return (weyl * vals / rate).T  # omegas x times

    patch = _values(t0 + t_offsets, w0 + w_offsets)
    center = _values(np.array([t0]), np.array([w0]))[0, 0]
    # |Sf| <= ||f|| ||h||, so this mirrors the relative magnitude mask
    # without needing a full grid
    bound = np.sqrt(
        np.sum(np.abs(np.asarray(f.samples)) ** 2) / rate * window.norm_sq()
    )
    if abs(center) < DEFAULT_EPS_MAG * bound:
        raise ValueError("transform magnitude is masked at the patch center")
    rel = np.angle(patch * np.conj(center))
    frame = 0.5 * (
        np.outer(np.ones(w_offsets.size), t_offsets) * w0
        - t0 * np.outer(w_offsets, np.ones(t_offsets.size))
    )
    return np.angle(center) + rel - frame


def reassign_spectrogram(
    grid: ComplexGrid,
    field: ReassignmentField,
    window: Window,
    mode: str = "grid_sum",
    target: ComplexGrid | None = None,
    eps_jac: float = DEFAULT_EPS_JAC,
):
    """Accumulate reassigned transform values onto a target grid.

    grid_sum mode adds exp(i (w~_m t_j - t~_l w_k) / 2) Sf(t_j, w_k) at the
    nearest target bin, with the phase taken at the target bin centers.
    full_kernel mode weights each moved value by the expected-change kernel
    exp(-i (t~ w - w~ t)/2) Sh(t~ - t, w~ - w) and by 1/|J| with |J|
    clamped below at eps_jac (clamps are counted).  Every valid source
    point lands in exactly one target bin; nearest-neighbour ties break
    toward the smaller index.

    Returns (reassigned grid, diagnostics).
    """
    if mode not in ("grid_sum", "full_kernel"):
        raise ValueError("mode must be grid_sum or full_kernel")
    t_ax = grid.time_axis if target is None else target.time_axis
    w_ax = grid.second_axis if target is None else target.second_axis

    valid = field.mask & np.isfinite(field.t_tilde) & np.isfinite(field.w_tilde)
    tt = field.t_tilde[valid]
    wt = field.w_tilde[valid]
    sf = grid.values[valid]
    t_src = np.broadcast_to(grid.time_axis[np.newaxis, :], grid.shape)[valid]
    w_src = np.broadcast_to(grid.second_axis[:, np.newaxis], grid.shape)[valid]

    it = _nearest_bin(tt, t_ax)
    iw = _nearest_bin(wt, w_ax)

    n_clamped = 0
    n_jac_undefined = 0
    if mode == "grid_sum":
        phase = np.exp(0.5j * (w_ax[iw] * t_src - t_ax[it] * w_src))
        contrib = phase * sf
    else:
        jac = field.jacobian[valid]
        defined = np.isfinite(jac)
        n_jac_undefined = int(np.count_nonzero(~defined))
        absj = np.abs(jac)
        clamped = defined & (absj < eps_jac)
        n_clamped = int(np.count_nonzero(clamped))
        weight = np.zeros(jac.shape)
        weight[defined] = 1.0 / np.maximum(absj[defined], eps_jac)
        kernel = window_self_transform(window, tt - t_src, wt - w_src)
        phase = np.exp(-0.5j * (tt * w_src - wt * t_src))
        contrib = phase * kernel * sf * weight
        it, iw, contrib = it[defined], iw[defined], contrib[defined]

    out = np.zeros((w_ax.size, t_ax.size), dtype=np.complex128)
    np.add.at(out, (iw, it), contrib)

    desc = dict(grid.source_descriptor)
    desc.update({"reassigned": mode, "eps_jac": float(eps_jac)})
    diagnostics = {
        "mode": mode,
        "n_valid": int(np.count_nonzero(valid)),
        "n_masked": int(np.count_nonzero(~field.mask)),
        "n_clamped": n_clamped,
        "n_jacobian_undefined": n_jac_undefined,
    }
    return ComplexGrid(out, t_ax, w_ax, "frequency", desc), diagnostics


def _nearest_bin(x, axis):
    """Nearest index on a uniform axis; ties toward the smaller index."""
    step = axis[1] - axis[0] if axis.size > 1 else 1.0
    k = (x - axis[0]) / step
    idx = np.ceil(k - 0.5).astype(int)
    return np.clip(idx, 0, axis.size - 1)


def holomorphic_factor(
    grid: ComplexGrid,
    window: Window,
    field: ReassignmentField | None = None,
    eps_mag: float = DEFAULT_EPS_MAG,
):
    """Factor a Gaussian-window transform as Sf = F(z) exp(-|z|^2/4).

    Returns (F grid, diagnostics) with z = sigma w + i t / sigma.  The
    diagnostics hold the median Cauchy-Riemann residual ratio
    |dF/dzbar| / |dF/dz| over energetic points and, when a reassignment
    field is supplied, the median relative deviation between the
    displacement v and the amplitude-log gradient
    grad log(|F| exp(-|z|^2/4)); the deviation against grad log|F| alone
    (which differs by the radial term grad |z|^2/4) is reported alongside.
    Far-tail cells whose weight would overflow are zeroed and counted.
    """
    if window.kind != "gaussian":
        raise ValueError("holomorphic factorization requires a Gaussian window")
    sigma = window.sigma
    t = grid.time_axis[np.newaxis, :]
    w = grid.second_axis[:, np.newaxis]
    quart = ((sigma * w) ** 2 + (t / sigma) ** 2) / 4.0

    mag = np.abs(grid.values)
    mask = mag >= eps_mag * mag.max()

    # assemble F = Sf exp(quart) in the log domain: exp(quart) alone can
    # overflow where the product is still representable, and vice versa
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log_mag = np.log(mag) + quart
        ok = np.isfinite(log_mag) & (log_mag <= 700.0)
        unit = np.where(mag > 0, grid.values / np.where(mag > 0, mag, 1.0), 0.0)
        f_vals = np.where(ok, unit * np.exp(np.where(ok, log_mag, 0.0)), 0.0)
    n_overflow = int(np.count_nonzero(~ok & (mag > 0)))

    # Wirtinger derivatives in the scaled coordinates z = sigma w + i t/sigma
    df_dw = np.gradient(f_vals, grid.second_axis, axis=0)
    df_dt = np.gradient(f_vals, grid.time_axis, axis=1)
    dz = 0.5 * (df_dw / sigma - 1j * sigma * df_dt)
    dzbar = 0.5 * (df_dw / sigma + 1j * sigma * df_dt)
    inner = mask.copy()
    inner &= _interior(mask)
    denom = np.abs(dz)
    ratio = np.where(denom > 0, np.abs(dzbar) / np.where(denom > 0, denom, 1.0), np.nan)
    cr_median = float(np.nanmedian(ratio[inner])) if inner.any() else float("nan")

    diagnostics = {
        "cr_residual_median": cr_median,
        "n_overflow": n_overflow,
        "mask_fraction": float(np.count_nonzero(mask) / mask.size),
    }

    if field is not None:
        # grad log|F| by finite differences, radial term removed analytically
        log_abs_f = np.where(mask, np.log(np.where(mask, mag, 1.0)) + quart, np.nan)
        g_t = np.gradient(log_abs_f, grid.time_axis, axis=1)
        g_w = np.gradient(log_abs_f, grid.second_axis, axis=0)
        g_t_weighted = g_t - t / (2.0 * sigma**2)
        g_w_weighted = g_w - (sigma**2) * w / 2.0
        ok = inner & field.mask & np.isfinite(g_t) & np.isfinite(g_w)
        norm_w = np.hypot(g_t_weighted, g_w_weighted)
        dev_w = np.hypot(field.v_t - g_t_weighted, field.v_w - g_w_weighted)
        norm_r = np.hypot(g_t, g_w)
        dev_r = np.hypot(field.v_t - g_t, field.v_w - g_w)
        with np.errstate(divide="ignore", invalid="ignore"):
            rel_w = np.where(norm_w > 0, dev_w / norm_w, np.nan)
            rel_r = np.where(norm_r > 0, dev_r / norm_r, np.nan)
        diagnostics["v_deviation_median"] = (
            float(np.nanmedian(rel_w[ok])) if ok.any() else float("nan")
        )
        diagnostics["v_deviation_raw_median"] = (
            float(np.nanmedian(rel_r[ok])) if ok.any() else float("nan")
        )

    desc = dict(grid.source_descriptor)
    desc["holomorphic_factor"] = {"sigma": float(sigma)}
    return ComplexGrid(f_vals, grid.time_axis, grid.second_axis, "frequency", desc), diagnostics


def _interior(mask):
    """Points whose 4-neighbourhood is entirely unmasked."""
    ok = np.zeros_like(mask)
    ok[1:-1, 1:-1] = (
        mask[1:-1, 1:-1]
        & mask[:-2, 1:-1]
        & mask[2:, 1:-1]
        & mask[1:-1, :-2]
        & mask[1:-1, 2:]
    )
    return ok
