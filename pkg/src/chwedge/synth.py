"""Synthetic wedge frames: a bright angular sector on a flat background.

Scenes are 25 x 25 frames with foreground 255 and background 100; the wedge
is an infinite sector of half-angle half_width about the direction
orientation, with its apex offset from the frame center by apex_radius at
apex_angle.  Pixels are rasterized by counting supersampled sub-pixel
centers inside the sector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FOREGROUND",
    "BACKGROUND",
    "FRAME_SIZE",
    "WedgeScene",
    "render_wedge",
    "sample_scene",
    "truth_label",
    "trial_rng",
]

FOREGROUND = 255.0
BACKGROUND = 100.0
FRAME_SIZE = 25

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class WedgeScene:
    """Wedge geometry for one synthetic frame (angles in radians)."""

    half_width: float
    orientation: float
    apex_radius: float
    apex_angle: float
    size: int = FRAME_SIZE

    def __post_init__(self):
        full = 2.0 * self.half_width
        if not (math.pi / 12 <= full <= math.pi):
            raise ValueError(f"full wedge width {full} outside [pi/12, pi]")
        if not 0.0 <= self.apex_radius <= 6.0:
            raise ValueError(f"apex_radius {self.apex_radius} outside [0, 6]")
        for name in ("orientation", "apex_angle"):
            a = getattr(self, name)
            if not 0.0 <= a < _TWO_PI:
                raise ValueError(f"{name} {a} outside [0, 2 pi)")
        if self.size < 1 or self.size % 2 == 0:
            raise ValueError(f"frame size must be odd and positive, got {self.size}")

    @property
    def apex_x(self) -> float:
        return self.apex_radius * math.cos(self.apex_angle)

    @property
    def apex_y(self) -> float:
        return self.apex_radius * math.sin(self.apex_angle)


def render_wedge(scene: WedgeScene, supersample: int = 4) -> np.ndarray:
    """Rasterize a scene; each pixel averages supersample^2 sub-pixel tests.

    Uses the package-wide frame coordinates: x along columns, y up the rows,
    origin at the frame center.
    """
    if supersample < 1:
        raise ValueError(f"supersample must be >= 1, got {supersample}")
    n = scene.size
    ctr = (n - 1) / 2.0
    sub = (np.arange(supersample) + 0.5) / supersample - 0.5
    x = np.arange(n)[None, :, None, None] - ctr - scene.apex_x + sub[None, None, None, :]
    y = ctr - np.arange(n)[:, None, None, None] - scene.apex_y + sub[None, None, :, None]
    diff = np.mod(np.arctan2(y, x) - scene.orientation + math.pi, _TWO_PI) - math.pi
    frac = (np.abs(diff) <= scene.half_width).mean(axis=(2, 3))
    return BACKGROUND + (FOREGROUND - BACKGROUND) * frac


def sample_scene(rng: np.random.Generator) -> WedgeScene:
    """Draw one random scene; the order of the four draws is part of the contract."""
    full_width = rng.uniform(math.pi / 12, math.pi)
    orientation = rng.uniform(0.0, _TWO_PI)
    apex_radius = rng.uniform(0.0, 6.0)
    apex_angle = rng.uniform(0.0, _TWO_PI)
    return WedgeScene(full_width / 2.0, orientation, apex_radius, apex_angle)


def truth_label(scene: WedgeScene, template_width: float) -> bool:
    """A detection is true when the apex is near the center and the width is
    within one orientation-grid step of the template width (both full widths,
    strict inequalities)."""
    return (
        scene.apex_radius < 2.0
        and abs(2.0 * scene.half_width - template_width) < math.pi / 12
    )


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent, portable generator for one trial: PCG64 keyed by (seed, index)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))
