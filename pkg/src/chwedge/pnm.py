"""Bit-exact binary PGM (P5) reader/writer, plus grayscale PNG input.

PGM grammar: "P5", then width, height, maxval as ASCII tokens separated by
whitespace ('#' starts a comment running to end of line), a single
whitespace byte, then width*height raw bytes.  Only maxval 255 is
supported.  Written maps carry a JSON sidecar recording how real values
were mapped to 8 bits.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

__all__ = [
    "PnmError",
    "MalformedHeaderError",
    "UnsupportedDepthError",
    "TruncatedPayloadError",
    "read_image",
    "write_image",
]

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class PnmError(ValueError):
    """Base class for image decode/encode failures."""


class MalformedHeaderError(PnmError):
    pass


class UnsupportedDepthError(PnmError):
    pass


class TruncatedPayloadError(PnmError):
    pass


def _pgm_tokens(data: bytes):
    """Yield (token, end_offset) for header tokens, skipping comments."""
    i = 0
    n = len(data)
    while i < n:
        ch = data[i : i + 1]
        if ch in b" \t\r\n":
            i += 1
        elif ch == b"#":
            while i < n and data[i : i + 1] not in b"\r\n":
                i += 1
        else:
            j = i
            while j < n and data[j : j + 1] not in b" \t\r\n#":
                j += 1
            yield data[i:j], j
            i = j


def _read_pgm(data: bytes) -> np.ndarray:
    tokens = _pgm_tokens(data)
    fields = []
    end = 0
    try:
        for _ in range(4):
            tok, end = next(tokens)
            fields.append(tok)
    except StopIteration:
        raise MalformedHeaderError("incomplete PGM header") from None
    if fields[0] != b"P5":
        raise MalformedHeaderError(f"not a binary PGM: magic {fields[0]!r}")
    try:
        width, height, maxval = (int(f) for f in fields[1:])
    except ValueError:
        raise MalformedHeaderError(f"non-numeric PGM header fields {fields[1:]}") from None
    if width <= 0 or height <= 0:
        raise MalformedHeaderError(f"bad PGM dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedDepthError(f"only maxval 255 supported, got {maxval}")
    payload = data[end + 1 :]  # single whitespace byte after maxval
    if len(payload) < width * height:
        raise TruncatedPayloadError(
            f"payload holds {len(payload)} bytes, need {width * height}"
        )
    pixels = np.frombuffer(payload[: width * height], dtype=np.uint8)
    return pixels.reshape(height, width).astype(float)


def _read_png(path: Path) -> np.ndarray:
    from PIL import Image

    with Image.open(path) as img:
        if img.mode != "L":
            raise UnsupportedDepthError(
                f"only 8-bit grayscale PNG supported, got mode {img.mode!r}"
            )
        return np.asarray(img, dtype=np.uint8).astype(float)


def read_image(path) -> np.ndarray:
    """Decode a P5 PGM or grayscale PNG file to a float grid in [0, 255]."""
    path = Path(path)
    data = path.read_bytes()
    if data[:2] == b"P5":
        return _read_pgm(data)
    if data[: len(_PNG_MAGIC)] == _PNG_MAGIC:
        return _read_png(path)
    raise MalformedHeaderError(f"{path.name}: neither binary PGM nor PNG")


def _normalize(grid: np.ndarray, mode: str, lo, hi, amplitude):
    if mode == "minmax":
        gmin, gmax = float(grid.min()), float(grid.max())
        if gmax > gmin:
            scaled = (grid - gmin) / (gmax - gmin) * 255.0
        else:
            scaled = np.full_like(grid, 128.0)  # degenerate flat grid
        return scaled, {"mode": "minmax", "min": gmin, "max": gmax}
    if mode == "symmetric":
        amp = float(amplitude) if amplitude is not None else float(np.abs(grid).max())
        if amp == 0.0:
            amp = 1.0
        scaled = (np.clip(grid, -amp, amp) + amp) / (2.0 * amp) * 255.0
        return scaled, {"mode": "symmetric", "amplitude": amp}
    if mode == "fixed":
        if lo is None or hi is None or not hi > lo:
            raise ValueError("fixed mode needs lo < hi")
        scaled = (np.clip(grid, lo, hi) - lo) / (hi - lo) * 255.0
        return scaled, {"mode": "fixed", "lo": float(lo), "hi": float(hi)}
    raise ValueError(f"unknown normalization mode {mode!r}")


def write_image(grid, path, normalization: str = "minmax", *, lo=None, hi=None,
                amplitude=None) -> None:
    """Write a real grid as 8-bit P5 plus a sidecar JSON describing the mapping.

    Modes: "minmax" maps the value range onto 0..255 (a flat grid lands on
    128), "symmetric" maps [-A, A] onto 0..255, "fixed" maps [lo, hi].
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 2:
        raise ValueError(f"expected a 2-D grid, got shape {grid.shape}")
    if not np.isfinite(grid).all():
        raise ValueError("grid contains non-finite values")
    scaled, meta = _normalize(grid, normalization, lo, hi, amplitude)
    data = np.clip(np.rint(scaled), 0, 255).astype(np.uint8)
    path = Path(path)
    header = f"P5\n{grid.shape[1]} {grid.shape[0]}\n255\n".encode("ascii")
    path.write_bytes(header + data.tobytes())
    meta.update({"source_min": float(grid.min()), "source_max": float(grid.max())})
    path.with_suffix(path.suffix + ".json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n"
    )
