"""Graymap and figure output."""

import numpy as np
import pytest

from tfreassign import (
    ComplexGrid,
    db_image,
    phase_image,
    render_figure,
    render_figure_pair,
    render_pgm,
    write_pgm,
)


def _grid(values, second, kind="frequency"):
    return ComplexGrid(
        values=np.asarray(values, dtype=complex),
        time_axis=np.arange(np.asarray(values).shape[1], dtype=float),
        second_axis=np.asarray(second, dtype=float),
        axis_kind=kind,
        source_descriptor={"transform": "test"},
    )


def test_db_image_levels():
    # peak -> 255, floor of the dynamic range -> 0, half range -> mid gray
    vals = np.array([[1.0, 10.0 ** (-30.0 / 20.0)], [1e-6, 0.0]])
    img = db_image(_grid(vals, [1.0, 2.0]), dynamic_range_db=60.0)
    # ascending frequency axis flips: row 0 of the image is second_axis[1]
    assert img[1, 0] == 255
    assert img[1, 1] == 128
    assert img[0, 0] == 0
    assert img[0, 1] == 0


def test_db_image_orientation():
    bright = np.zeros((3, 2))
    bright[2, 0] = 1.0  # highest frequency row
    img_f = db_image(_grid(bright, [1.0, 2.0, 3.0], kind="frequency"))
    assert img_f[0, 0] == 255
    # for scale grids the smallest scale is the highest frequency
    img_s = db_image(_grid(bright, [0.1, 0.2, 0.4], kind="scale"))
    assert img_s[2, 0] == 255


def test_db_image_all_zero_is_black():
    img = db_image(_grid(np.zeros((2, 3)), [1.0, 2.0]))
    assert img.dtype == np.uint8
    assert np.all(img == 0)


def test_phase_image_range():
    vals = np.array([[1.0, 1j, -1.0 + 1e-12j, -1j]])
    img = phase_image(_grid(vals, [1.0]))
    assert img[0, 0] == 128  # phase 0
    assert img[0, 1] == 191  # phase pi/2
    assert img[0, 2] == 255  # phase pi
    assert img[0, 3] == 64  # phase -pi/2


def test_pgm_file_layout(tmp_path):
    img = np.arange(12, dtype=np.uint8).reshape(3, 4)
    path = tmp_path / "img.pgm"
    write_pgm(path, img)
    raw = path.read_bytes()
    assert raw.startswith(b"P5\n4 3\n255\n")
    payload = raw[len(b"P5\n4 3\n255\n"):]
    assert payload == img.tobytes()


def test_render_pgm_channels(tmp_path):
    grid = _grid(np.array([[1.0, 0.5 + 0.5j]]), [2.0])
    mag_path = tmp_path / "m.pgm"
    render_pgm(grid, mag_path)
    assert mag_path.read_bytes().startswith(b"P5\n2 1\n255\n")
    ph_path = tmp_path / "p.pgm"
    render_pgm(grid, ph_path, channel="phase")
    assert ph_path.exists()
    with pytest.raises(ValueError):
        render_pgm(grid, tmp_path / "x.pgm", channel="imag")


def test_figures_are_written(tmp_path):
    rng = np.random.default_rng(0)
    vals = rng.standard_normal((16, 32)) + 1j * rng.standard_normal((16, 32))
    grid = _grid(vals, np.geomspace(0.1, 1.0, 16), kind="scale")
    single = tmp_path / "one.png"
    render_figure(grid, single, title="scalogram")
    assert single.stat().st_size > 1000
    pair = tmp_path / "two.png"
    render_figure_pair(grid, grid, pair, titles=("raw", "sharpened"), note="case")
    assert pair.stat().st_size > 1000
