"""Wavelet transform: frozen closed forms, spectral derivatives, inversion."""

import numpy as np
import pytest

from tfreassign import (
    ComplexSeries,
    ExtremalParams,
    Signal,
    cwt,
    cwt_scale_derivative,
    cwt_time_derivative,
    gen_click,
    gen_cosine,
    geometric_scales,
    icwt,
)

from oracles import oracle_cwt_dft

MAIN = ExtremalParams(kappa=2.0, nu=1.0, alpha=0.3, beta=0.2)
RATE = 64.0


def test_matches_plain_dft_sum():
    rng = np.random.default_rng(5)
    n, rate = 128, 16.0
    sig = Signal(rng.standard_normal(n), rate)
    scales = np.array([0.3, 1.1])
    grid = cwt(sig, MAIN, scales)
    for i, a in enumerate(scales):
        want = oracle_cwt_dft(
            sig.samples, rate, MAIN.kappa, MAIN.nu, MAIN.alpha,
            MAIN.beta, MAIN.epsilon, MAIN.c, a,
        )
        assert np.max(np.abs(grid.values[i] - want)) < 1e-10


def test_frozen_tone_value():
    # frozen: closed form (A/2) sqrt(2 pi a) conj(psi_hat(a nu0)) e^{i nu0 t}
    # at a = 0.25, nu0 = 2 pi, t = 3; exact on FFT bins
    want = 0.31362646091651114 - 0.151357333427017j
    sig = gen_cosine(2.0 * np.pi, 1.0, 4096, RATE)
    grid = cwt(sig, MAIN, np.array([0.25]))
    col = int(round(3.0 * RATE))
    assert complex(grid.values[0, col]) == pytest.approx(want, rel=1e-9)


def test_frozen_click_value():
    # frozen: Gamma closed form of the impulse transform for c = 1,
    # kappa = 6, beta = 0.05, a = 0.5, evaluated at the t = 8.015625 bin;
    # the discrete impulse differs only by Nyquist truncation
    want = 0.6715334119589496 - 0.01364235433513793j
    p = ExtremalParams(kappa=6.0, nu=1.0, beta=0.05)
    sig = gen_click(8.0, 4096, RATE)
    grid = cwt(sig, p, np.array([0.5]))
    assert complex(grid.values[0, 513]) == pytest.approx(want, abs=1e-6)


def test_time_derivative_matches_finite_difference():
    rate, n = RATE, 2048
    t_ax = np.arange(n) / rate - 16.0
    sig = ComplexSeries(
        np.exp(-((t_ax / 4.0) ** 2)) * np.cos(2.0 * np.pi * t_ax) + 0j, rate, -16.0
    )
    scales = np.array([0.12, 0.2, 0.4])
    w = cwt(sig, MAIN, scales)
    dw = cwt_time_derivative(sig, MAIN, scales)
    fd = (w.values[:, 2:] - w.values[:, :-2]) * rate / 2.0
    mag = np.abs(w.values[:, 1:-1])
    m = mag > 0.05 * mag.max()
    rel = np.abs(dw.values[:, 1:-1][m] - fd[m]) / np.abs(dw.values[:, 1:-1][m])
    # second-order quotient against the spectral derivative; the gap is
    # the (nu0 dt)^2/6 truncation of the quotient itself
    assert np.median(rel) < 5e-3


def test_scale_derivative_matches_finite_difference():
    rate, n = RATE, 2048
    sig = gen_cosine(2.0 * np.pi, 1.0, n, rate)
    a0 = 0.25
    h = 1e-5
    w_up = cwt(sig, MAIN, np.array([a0 * np.exp(h)]))
    w_dn = cwt(sig, MAIN, np.array([a0 * np.exp(-h)]))
    fd = (w_up.values - w_dn.values) / (2.0 * h)
    got = cwt_scale_derivative(sig, MAIN, np.array([a0])).values
    mag = np.abs(got)
    m = mag > 0.05 * mag.max()
    rel = np.abs(got[m] - fd[m]) / np.abs(got[m])
    assert np.max(rel) < 1e-6


def test_descriptor_and_axes():
    sig = gen_cosine(2.0 * np.pi, 1.0, 512, RATE, start_time=-4.0)
    scales = geometric_scales(0.1, 0.5, 7)
    grid = cwt(sig, MAIN, scales)
    assert grid.axis_kind == "scale"
    assert grid.values.shape == (7, 512)
    assert np.array_equal(grid.second_axis, scales)
    assert grid.time_axis[0] == -4.0
    d = grid.source_descriptor
    assert d["transform"] == "cwt"
    assert d["kappa"] == 2.0
    assert d["alias_warning"] is False


def test_quality_warnings():
    sig = gen_cosine(2.0 * np.pi, 1.0, 512, RATE)
    tiny = cwt(sig, MAIN, np.array([0.002]))
    assert tiny.source_descriptor["alias_warning"] is True
    huge = cwt(sig, MAIN, np.array([40.0]))
    assert huge.source_descriptor["support_warning"] is True


def test_roundtrip_recovers_in_band_signal():
    # steep spectral onset (kappa = 4) so the discrete scale range covers
    # the band of a modulated Gaussian to a fraction of a percent
    p = ExtremalParams(kappa=4.0, nu=1.0)
    rate, n = RATE, 2048
    t_ax = np.arange(n) / rate - 16.0
    samples = np.exp(-((t_ax / 4.0) ** 2)) * np.cos(2.0 * np.pi * t_ax)
    sig = ComplexSeries(samples + 0j, rate, -16.0)
    scales = geometric_scales(0.02, 2.0, 96)
    grid = cwt(sig, p, scales)
    rec, info = icwt(grid, p)
    assert info["coverage_min"] > 0.95
    assert info["coverage_max"] < 1.05
    err = np.linalg.norm(rec.samples - samples) / np.linalg.norm(samples)
    assert err < 5e-2


def test_roundtrip_flags_sparse_scales():
    p = ExtremalParams(kappa=4.0, nu=1.0)
    sig = gen_cosine(2.0 * np.pi, 1.0, 512, RATE)
    grid = cwt(sig, p, geometric_scales(0.05, 0.5, 4))
    _, info = icwt(grid, p)
    assert info["quality_warning"]
