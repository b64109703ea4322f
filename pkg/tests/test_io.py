"""Signal and grid file round-trips."""

import json

import numpy as np
import pytest

from tfreassign import (
    ComplexGrid,
    Signal,
    gen_cosine,
    read_grid,
    read_signal,
    write_grid,
    write_signal,
)


def test_csv_signal_roundtrip_exact(tmp_path):
    sig = gen_cosine(3.0, 0.7, 128, 16.0, start_time=-1.0)
    path = tmp_path / "sig.csv"
    write_signal(sig, path)
    back = read_signal(path, rate=16.0, start_time=-1.0)
    assert np.array_equal(back.samples, sig.samples)
    assert back.sample_rate == 16.0
    assert back.start_time == -1.0


def test_csv_rate_comes_from_caller(tmp_path):
    # the CSV holds bare sample values; rate and start are caller metadata
    sig = Signal(np.linspace(-1, 1, 32), 8.0)
    path = tmp_path / "sig.csv"
    write_signal(sig, path)
    back = read_signal(path, rate=2.0, start_time=5.0)
    assert back.sample_rate == 2.0
    assert back.start_time == 5.0
    assert np.array_equal(back.samples, sig.samples)


def test_wav_roundtrip_within_quantization(tmp_path):
    sig = gen_cosine(2.0 * np.pi, 0.9, 256, 64.0)
    path = tmp_path / "sig.wav"
    write_signal(sig, path)
    back = read_signal(path, rate=64.0)
    assert back.n == sig.n
    # 16-bit PCM: one quantization step of full scale
    assert np.max(np.abs(back.samples - sig.samples)) <= 1.0 / 32767.0


def test_wav_clips_outside_unit_range(tmp_path):
    sig = Signal(np.array([0.0, 2.0, -3.0, 0.5]), 8.0)
    path = tmp_path / "clip.wav"
    write_signal(sig, path)
    back = read_signal(path, rate=8.0)
    assert back.samples[1] == pytest.approx(1.0, abs=1e-4)
    assert back.samples[2] == pytest.approx(-1.0, abs=1e-4)


def test_grid_roundtrip_exact(tmp_path):
    rng = np.random.default_rng(7)
    vals = rng.standard_normal((5, 9)) + 1j * rng.standard_normal((5, 9))
    grid = ComplexGrid(
        values=vals,
        time_axis=np.linspace(0, 1, 9),
        second_axis=np.geomspace(0.1, 1.0, 5),
        axis_kind="scale",
        source_descriptor={"transform": "cwt", "note": 3},
    )
    prefix = tmp_path / "g"
    write_grid(grid, prefix)
    assert (tmp_path / "g.meta.json").exists()
    assert (tmp_path / "g.re.csv").exists()
    assert (tmp_path / "g.im.csv").exists()
    back = read_grid(prefix)
    assert np.array_equal(back.values, grid.values)
    assert np.array_equal(back.time_axis, grid.time_axis)
    assert np.array_equal(back.second_axis, grid.second_axis)
    assert back.axis_kind == "scale"
    assert back.source_descriptor["transform"] == "cwt"
    assert back.source_descriptor["note"] == 3


def test_grid_meta_is_plain_json(tmp_path):
    grid = ComplexGrid(
        values=np.ones((2, 3), dtype=complex),
        time_axis=np.arange(3.0),
        second_axis=np.array([1.0, 2.0]),
        axis_kind="frequency",
        source_descriptor={"transform": "stft"},
    )
    write_grid(grid, tmp_path / "m")
    meta = json.loads((tmp_path / "m.meta.json").read_text())
    assert meta["axis_kind"] == "frequency"
    assert meta["time_axis"] == [0.0, 1.0, 2.0]
    assert meta["second_axis"] == [1.0, 2.0]
    assert meta["source_descriptor"]["transform"] == "stft"


def test_read_missing_file_raises(tmp_path):
    with pytest.raises(OSError):
        read_signal(tmp_path / "absent.csv", rate=1.0)
    with pytest.raises(OSError):
        read_grid(tmp_path / "absent")


def test_unknown_format_rejected(tmp_path):
    sig = Signal(np.ones(4), 1.0)
    with pytest.raises(ValueError):
        write_signal(sig, tmp_path / "sig.xyz")
