"""Binary dump formats for spectrum fields and scalar maps.

Shared little-endian header ('<4sIIIIdI', 32 bytes):

    magic     4 bytes, b"CHSF" (spectrum) or b"CHZM" (scalar map)
    version   uint32, currently 1
    width     uint32
    height    uint32
    L         uint32, max wavenumber (0 for maps without bank context)
    lambda    float64, bank scale in pixels (0.0 when not applicable)
    K         uint32, kernel half-width (0 when not applicable)

CHSF payload: L+1 planes, order l = 0..L, row-major complex128 (real then
imaginary float64 per value).  CHZM payload: one row-major float64 plane.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .bank import BankParams
from .spectrum import SpectrumField

__all__ = [
    "SPECTRUM_MAGIC",
    "MAP_MAGIC",
    "write_spectrum",
    "read_spectrum",
    "write_map",
    "read_map",
]

_HEADER = struct.Struct("<4sIIIIdI")
SPECTRUM_MAGIC = b"CHSF"
MAP_MAGIC = b"CHZM"
VERSION = 1


def _pack(magic: bytes, width: int, height: int, params: BankParams | None) -> bytes:
    if params is None:
        return _HEADER.pack(magic, VERSION, width, height, 0, 0.0, 0)
    return _HEADER.pack(
        magic, VERSION, width, height, params.max_order, params.scale, params.half_width
    )


def _unpack(data: bytes, expect_magic: bytes):
    if len(data) < _HEADER.size:
        raise ValueError("dump shorter than its header")
    magic, version, width, height, max_order, scale, half_width = _HEADER.unpack_from(data)
    if magic != expect_magic:
        raise ValueError(f"bad magic {magic!r}, expected {expect_magic!r}")
    if version != VERSION:
        raise ValueError(f"unsupported dump version {version}")
    params = None
    if half_width > 0:
        params = BankParams(scale, half_width, max_order)
    return width, height, max_order, params


def write_spectrum(field: SpectrumField, path) -> None:
    header = _pack(SPECTRUM_MAGIC, field.width, field.height, field.params)
    payload = np.ascontiguousarray(field.coeffs, dtype="<c16").tobytes()
    Path(path).write_bytes(header + payload)


def read_spectrum(path) -> SpectrumField:
    data = Path(path).read_bytes()
    width, height, max_order, params = _unpack(data, SPECTRUM_MAGIC)
    if params is None:
        raise ValueError("spectrum dump is missing its bank parameters")
    count = (max_order + 1) * height * width
    coeffs = np.frombuffer(data, dtype="<c16", offset=_HEADER.size, count=count)
    coeffs = coeffs.reshape(max_order + 1, height, width).astype(complex)
    coeffs.setflags(write=False)
    return SpectrumField(coeffs, params)


def write_map(grid, path, params: BankParams | None = None) -> None:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 2:
        raise ValueError(f"expected a 2-D map, got shape {grid.shape}")
    header = _pack(MAP_MAGIC, grid.shape[1], grid.shape[0], params)
    Path(path).write_bytes(header + np.ascontiguousarray(grid, dtype="<f8").tobytes())


def read_map(path):
    """Returns (grid, params-or-None)."""
    data = Path(path).read_bytes()
    width, height, _, params = _unpack(data, MAP_MAGIC)
    grid = np.frombuffer(data, dtype="<f8", offset=_HEADER.size, count=width * height)
    grid = grid.reshape(height, width).astype(float)
    grid.setflags(write=False)
    return grid, params
