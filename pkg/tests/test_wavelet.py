"""Extremal wavelet family: normalization, admissibility, kernel, derivatives."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfreassign import (
    ExtremalParams,
    admissibility,
    admissibility_squared,
    extremal_spectrum,
    norm_constant,
    peak_omega,
    spectrum_log_derivative,
    wavelet_kernel,
    wavelet_time_samples,
)

from oracles import (
    oracle_admissibility,
    oracle_norm_sq,
    spectrum_direct,
)

MAIN = ExtremalParams(kappa=2.0, nu=1.0, alpha=0.3, beta=0.2)

PARAM_SETS = [
    ExtremalParams(kappa=2.0, nu=1.0),
    MAIN,
    ExtremalParams(kappa=1.5, nu=1.0, c=2.0),
    ExtremalParams(kappa=3.0, nu=0.8, alpha=0.5, beta=-0.3),
]


def test_norm_constant_closed_form():
    # frozen: k^2 = 32/3 for kappa = 2, nu = 1, c = 1
    k = norm_constant(ExtremalParams(kappa=2.0, nu=1.0))
    assert k**2 == pytest.approx(32.0 / 3.0, rel=1e-12)


@pytest.mark.parametrize("p", PARAM_SETS)
def test_spectrum_is_unit_norm(p):
    num = oracle_norm_sq(p.kappa, p.nu, p.alpha, p.beta, p.epsilon, p.c)
    assert num == pytest.approx(1.0, rel=1e-9)
    # and the library spectrum matches the independent formula pointwise
    w = np.linspace(0.05, 6.0, 23)
    got = extremal_spectrum(p, w)
    want = spectrum_direct(p.kappa, p.nu, p.alpha, p.beta, p.epsilon, p.c, w)
    assert np.max(np.abs(got - want)) < 1e-12


def test_spectrum_vanishes_for_nonpositive_frequency():
    w = np.array([-3.0, -0.5, 0.0, 0.5])
    vals = extremal_spectrum(MAIN, w)
    assert np.all(vals[:3] == 0)
    assert vals[3] != 0


def test_admissibility_constants():
    # frozen: quadrature of |psi_hat|/w and |psi_hat|^2/w for kappa=2, nu=1
    p = ExtremalParams(kappa=2.0, nu=1.0)
    assert admissibility(p) == pytest.approx(2.046653415895907, rel=1e-9)
    assert admissibility_squared(p) == pytest.approx(4.0 / 3.0, rel=1e-9)
    q = ExtremalParams(kappa=1.5, nu=1.0, c=2.0)
    assert admissibility_squared(q) == pytest.approx(
        oracle_admissibility(q.kappa, q.nu, q.alpha, q.beta, q.epsilon, q.c, squared=True),
        rel=1e-8,
    )


def test_peak_location():
    # frozen: ((kappa nu - 1/2)/kappa)^(1/c) = 0.75 for kappa=2, nu=1, c=1
    assert peak_omega(ExtremalParams(kappa=2.0, nu=1.0)) == pytest.approx(0.75)
    w = np.linspace(1e-3, 8.0, 20001)
    for p in PARAM_SETS:
        mag = np.abs(extremal_spectrum(p, w))
        assert w[np.argmax(mag)] == pytest.approx(peak_omega(p), abs=2e-3)


def test_log_derivative_matches_finite_difference():
    w = np.array([0.3, 0.75, 1.4, 3.0])
    h = 1e-6
    for p in PARAM_SETS:
        up = spectrum_direct(p.kappa, p.nu, p.alpha, p.beta, p.epsilon, p.c, w + h)
        dn = spectrum_direct(p.kappa, p.nu, p.alpha, p.beta, p.epsilon, p.c, w - h)
        fd = (np.log(up) - np.log(dn)) / (2 * h)
        got = spectrum_log_derivative(p, w)
        assert np.max(np.abs(got - fd)) < 1e-5


def test_kernel_reproduces_frozen_values():
    # frozen: quadrature of sqrt(a) conj(psi_hat(a w)) psi_hat(w) e^{ibw}
    assert complex(wavelet_kernel(MAIN, 1.0, 0.0)) == pytest.approx(1.0, rel=1e-12)
    assert complex(wavelet_kernel(MAIN, 0.8, 0.3)) == pytest.approx(
        0.8655374179400855 + 0.41129498065753706j, rel=1e-9
    )
    p2 = ExtremalParams(kappa=1.5, nu=1.0, alpha=0.1, c=2.0)
    assert complex(wavelet_kernel(p2, 1.3, -0.4)) == pytest.approx(
        0.8866196405884454 - 0.31743367638778464j, rel=1e-6
    )


def test_kernel_symmetry_under_group_inverse():
    # (psi, U_x psi) = conj((psi, U_{x^-1} psi)) with (b, a)^-1 = (-b/a, 1/a)
    for p in (MAIN, ExtremalParams(kappa=1.5, nu=1.0, alpha=0.1, c=2.0)):
        for a, b in [(0.7, 0.4), (2.1, -1.3)]:
            lhs = complex(wavelet_kernel(p, a, b))
            rhs = complex(wavelet_kernel(p, 1.0 / a, -b / a))
            assert lhs == pytest.approx(np.conj(rhs), rel=1e-6)


@settings(max_examples=25, deadline=None)
@given(
    st.floats(min_value=0.2, max_value=5.0),
    st.floats(min_value=-10.0, max_value=10.0),
)
def test_kernel_bounded_by_one(a, b):
    # Cauchy-Schwarz for unit-norm states
    assert abs(complex(wavelet_kernel(MAIN, a, b))) <= 1.0 + 1e-9


def test_time_samples_norm_and_center_frequency():
    p = MAIN
    rate, n, a = 256.0, 16384, 1.0
    times, samples = wavelet_time_samples(p, a, rate, n)
    assert times[n // 2] == 0.0
    # Plancherel with the angular-frequency normalization:
    # integral |psi(t)|^2 dt = (1/2pi) integral |psi_hat|^2 dw = 1/(2 pi)
    norm = np.sum(np.abs(samples) ** 2) / rate
    assert norm == pytest.approx(1.0 / (2.0 * np.pi), rel=1e-4)
    spec = np.fft.fft(samples) / rate
    freqs = 2.0 * np.pi * np.fft.fftfreq(n, d=1.0 / rate)
    peak = freqs[np.argmax(np.abs(spec))]
    assert peak == pytest.approx(peak_omega(p) / a, abs=2.0 * np.pi * rate / n)


def test_params_validation():
    with pytest.raises(ValueError):
        ExtremalParams(kappa=-1.0, nu=1.0)
    with pytest.raises(ValueError):
        ExtremalParams(kappa=2.0, nu=0.2)  # kappa nu must exceed 1/2
    with pytest.raises(ValueError):
        ExtremalParams(kappa=2.0, nu=1.0, c=0.0)
