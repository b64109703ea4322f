"""File formats: CSV signals, 16-bit PCM WAV, and delimited complex grids.

Grid files come in triples sharing a prefix: <prefix>.meta.json holds the
axes and provenance, <prefix>.re.csv and <prefix>.im.csv hold the real and
imaginary parts row-major (one row per second-axis bin, comma separated,
'.' decimal, 17 significant digits so values round-trip exactly).
"""

import json
import wave
from pathlib import Path

import numpy as np

from .grid import ComplexGrid
from .signals import Signal

__all__ = [
    "read_signal",
    "write_signal",
    "write_grid",
    "read_grid",
]

_FULL_SCALE = 32767


def write_signal(signal: Signal, path, fmt: str | None = None) -> None:
    """Write a signal as CSV (one sample per line) or mono 16-bit WAV.

    fmt defaults from the file suffix (.csv / .wav).  WAV clips samples to
    [-1, 1] and needs an integral sample rate.
    """
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".").lower()
    if fmt == "csv":
        with open(path, "w") as fh:
            for v in signal.samples:
                fh.write(f"{v:.17g}\n")
    elif fmt == "wav":
        rate = int(round(signal.sample_rate))
        if abs(rate - signal.sample_rate) > 1e-9:
            raise ValueError("WAV requires an integral sample rate")
        ints = np.round(np.clip(signal.samples, -1.0, 1.0) * _FULL_SCALE)
        ints = ints.astype("<i2")
        with wave.open(str(path), "wb") as wf:
            wf.setnchannels(1)
            wf.setsampwidth(2)
            wf.setframerate(rate)
            wf.writeframes(ints.tobytes())
    else:
        raise ValueError(f"unsupported signal format {fmt!r}")


def read_signal(path, fmt: str | None = None, rate: float = 1.0,
                start_time: float = 0.0) -> Signal:
    """Read a signal file.

    CSV carries no header, so its sample rate and start time are taken from
    the arguments.  WAV carries the rate in its header; it must be mono
    16-bit PCM, anything else is rejected.
    """
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".").lower()
    if fmt == "csv":
        samples = np.loadtxt(path, dtype=np.float64, ndmin=1)
        return Signal(samples, rate, start_time)
    if fmt == "wav":
        with wave.open(str(path), "rb") as wf:
            if wf.getnchannels() != 1:
                raise ValueError("only mono WAV is supported")
            if wf.getsampwidth() != 2:
                raise ValueError("only 16-bit PCM WAV is supported")
            if wf.getcomptype() != "NONE":
                raise ValueError("compressed WAV is not supported")
            n = wf.getnframes()
            raw = wf.readframes(n)
            wav_rate = wf.getframerate()
        ints = np.frombuffer(raw, dtype="<i2")
        return Signal(ints / _FULL_SCALE, float(wav_rate), start_time)
    raise ValueError(f"unsupported signal format {fmt!r}")


def _write_matrix_csv(path, mat) -> None:
    with open(path, "w") as fh:
        for row in mat:
            fh.write(",".join(f"{v:.17g}" for v in row))
            fh.write("\n")


def write_grid(grid: ComplexGrid, prefix) -> None:
    """Write <prefix>.meta.json, <prefix>.re.csv and <prefix>.im.csv."""
    prefix = str(prefix)
    meta = {
        "axis_kind": grid.axis_kind,
        "time_axis": [float(t) for t in grid.time_axis],
        "second_axis": [float(s) for s in grid.second_axis],
        "source_descriptor": grid.source_descriptor,
    }
    with open(prefix + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    _write_matrix_csv(prefix + ".re.csv", grid.values.real)
    _write_matrix_csv(prefix + ".im.csv", grid.values.imag)


def read_grid(prefix) -> ComplexGrid:
    """Read a grid triple written by write_grid."""
    prefix = str(prefix)
    with open(prefix + ".meta.json") as fh:
        meta = json.load(fh)
    re = np.loadtxt(prefix + ".re.csv", delimiter=",", ndmin=2)
    im = np.loadtxt(prefix + ".im.csv", delimiter=",", ndmin=2)
    if re.shape != im.shape:
        raise ValueError("real/imaginary part shapes disagree")
    return ComplexGrid(
        re + 1j * im,
        np.asarray(meta["time_axis"], dtype=np.float64),
        np.asarray(meta["second_axis"], dtype=np.float64),
        meta["axis_kind"],
        meta.get("source_descriptor", {}),
    )
