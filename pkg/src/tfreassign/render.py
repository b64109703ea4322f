"""Grid rendering: binary portable graymaps and matplotlib figures.

Magnitude is mapped logarithmically over a dynamic range below the grid
peak (default 60 dB); the peak bin maps to 255, anything at or below the
floor to 0, and an all-zero grid renders black.  Image rows follow the
convention top = highest analysis frequency, i.e. the largest frequency
or the smallest scale.
"""

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .grid import ComplexGrid

__all__ = [
    "db_image",
    "phase_image",
    "write_pgm",
    "render_pgm",
    "render_figure",
    "render_figure_pair",
]


def _top_down(grid: ComplexGrid, img: np.ndarray) -> np.ndarray:
    ascending = grid.second_axis.size < 2 or grid.second_axis[1] > grid.second_axis[0]
    if grid.axis_kind == "frequency":
        return img[::-1] if ascending else img
    return img if ascending else img[::-1]


def db_image(grid: ComplexGrid, dynamic_range_db: float = 60.0) -> np.ndarray:
    """8-bit log-magnitude image of the grid, top row = highest frequency."""
    if dynamic_range_db <= 0:
        raise ValueError("dynamic range must be positive")
    mag = grid.magnitude()
    peak = mag.max()
    if peak == 0:
        return np.zeros(grid.shape, dtype=np.uint8)
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag / peak)
    level = np.clip(1.0 + db / dynamic_range_db, 0.0, 1.0)
    img = np.round(255.0 * level).astype(np.uint8)
    return _top_down(grid, img)


def phase_image(grid: ComplexGrid) -> np.ndarray:
    """8-bit phase image: (-pi, pi] mapped linearly to 0..255."""
    ph = np.angle(grid.values)
    img = np.round((ph + np.pi) / (2.0 * np.pi) * 255.0).astype(np.uint8)
    return _top_down(grid, img)


def write_pgm(path, img: np.ndarray) -> None:
    """Binary (P5) portable graymap, maxval 255."""
    img = np.ascontiguousarray(img, dtype=np.uint8)
    if img.ndim != 2:
        raise ValueError("image must be 2-D")
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def render_pgm(grid: ComplexGrid, path, dynamic_range_db: float = 60.0, channel: str = "magnitude") -> None:
    if channel == "magnitude":
        write_pgm(path, db_image(grid, dynamic_range_db))
    elif channel == "phase":
        write_pgm(path, phase_image(grid))
    else:
        raise ValueError("channel must be magnitude or phase")


def _db_array(grid: ComplexGrid, dynamic_range_db: float) -> np.ndarray:
    mag = grid.magnitude()
    peak = mag.max()
    if peak == 0:
        return np.full(grid.shape, -dynamic_range_db)
    with np.errstate(divide="ignore"):
        return np.maximum(20.0 * np.log10(mag / peak), -dynamic_range_db)


def _draw_panel(ax, grid: ComplexGrid, db: np.ndarray, title: str | None):
    mesh = ax.pcolormesh(grid.time_axis, grid.second_axis, db, shading="auto", cmap="magma")
    ax.set_xlabel("time [s]")
    if grid.axis_kind == "scale":
        ax.set_yscale("log")
        ax.set_ylabel("scale [s]")
        ax.invert_yaxis()
    else:
        ax.set_ylabel("angular frequency [rad/s]")
    if title:
        ax.set_title(title)
    return mesh


def render_figure(
    grid: ComplexGrid,
    path,
    dynamic_range_db: float = 60.0,
    title: str | None = None,
    dpi: int = 110,
) -> None:
    """Annotated magnitude figure (any matplotlib-supported raster format)."""
    fig, ax = plt.subplots(figsize=(7.2, 4.2), dpi=dpi)
    mesh = _draw_panel(ax, grid, _db_array(grid, dynamic_range_db), title)
    fig.colorbar(mesh, ax=ax, label="dB")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_figure_pair(
    left: ComplexGrid,
    right: ComplexGrid,
    path,
    titles: tuple = (None, None),
    dynamic_range_db: float = 60.0,
    note: str | None = None,
    dpi: int = 110,
) -> None:
    """Side-by-side magnitude figures sharing one color scale."""
    fig, axes = plt.subplots(1, 2, figsize=(11.0, 4.2), dpi=dpi, sharey=True)
    mesh = None
    for ax, grid, title in zip(axes, (left, right), titles):
        mesh = _draw_panel(ax, grid, _db_array(grid, dynamic_range_db), title)
    axes[1].set_ylabel("")
    if note:
        fig.suptitle(note, fontsize=9)
    fig.colorbar(mesh, ax=list(axes), label="dB")
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
