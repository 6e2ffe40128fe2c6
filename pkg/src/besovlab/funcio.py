"""On-disk format for grid functions.

Layout (see docs/file_format.md for the byte-level description):

  * one JSON header line, UTF-8, terminated by a single 0x0A byte, with keys
    n (int), points_per_axis (list of int), base_scale (int),
    anisotropy (list of float);
  * immediately after the newline, size = prod(points_per_axis) samples as
    little-endian float64 pairs (re, im), interleaved, in row-major
    (C, last axis fastest) order.

Total file size is len(header) + 1 + 16 * size bytes.
"""

from __future__ import annotations

import json

import numpy as np

from .aniso import Anisotropy
from .grid import GridFunction, GridSpec

__all__ = ["write_function", "read_function"]


def write_function(path, f: GridFunction, a: Anisotropy) -> None:
    if a.n != f.ndim:
        raise ValueError("anisotropy dimension does not match the function")
    header = {
        "n": f.ndim,
        "points_per_axis": list(f.spec.shape),
        "base_scale": f.spec.base_scale,
        "anisotropy": list(a.weights),
    }
    flat = np.ascontiguousarray(f.values, dtype=np.complex128).ravel()
    block = np.empty(2 * flat.size, dtype="<f8")
    block[0::2] = flat.real
    block[1::2] = flat.imag
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8"))
        fh.write(b"\n")
        fh.write(block.tobytes())


def read_function(path) -> tuple:
    """Read a function file; returns (GridFunction, Anisotropy)."""
    with open(path, "rb") as fh:
        raw = fh.readline()
        try:
            header = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ValueError(f"bad function-file header in {path}: {exc}") from exc
        for key in ("n", "points_per_axis", "base_scale", "anisotropy"):
            if key not in header:
                raise ValueError(f"function-file header missing key {key!r}")
        spec = GridSpec(tuple(header["points_per_axis"]), header["base_scale"])
        if header["n"] != spec.ndim:
            raise ValueError("header field n disagrees with points_per_axis")
        a = Anisotropy(tuple(header["anisotropy"]))
        block = np.frombuffer(fh.read(16 * spec.size), dtype="<f8")
        if block.size != 2 * spec.size:
            raise ValueError(f"truncated sample block in {path}")
    vals = (block[0::2] + 1j * block[1::2]).reshape(spec.shape)
    return GridFunction(spec, vals), a
