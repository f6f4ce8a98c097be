"""Wedge detection from circular-harmonic spectra.

Per pixel and steering angle the contrast statistic is

    Z = (mu_in - mu_out) / sqrt(var_in + var_out + sigma_min_sq)

where the means and variances of the reconstructed angular profile over the
template's inner and outer domains come from the bilinear forms in
chwedge.harmonics.  Orientation is estimated by sweeping a uniform grid of
steering angles and keeping the maximizer (smallest angle on ties).
Detection thresholds the swept map and applies greedy Chebyshev-radius
non-maximum suppression.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .harmonics import Spectrum, WedgeTemplate
from .spectrum import SpectrumField

__all__ = [
    "DetectorConfig",
    "Detection",
    "z_statistic",
    "orientation_sweep",
    "score_map",
    "detect",
]

# rounding tolerances, relative to the magnitude of the bilinear forms
_VAR_CLAMP_REL = 1e-9
_IMAG_WARN_REL = 1e-9

_BLOCK = 1 << 18  # pixels per vectorized block; fixed for determinism


@dataclass(frozen=True)
class DetectorConfig:
    """Sweep and thresholding parameters for the wedge detector."""

    template: WedgeTemplate
    theta_steps: int = 24
    threshold: float = 0.0
    use_squared: bool = False
    nms_radius: int = 5

    def __post_init__(self):
        if self.theta_steps < 1:
            raise ValueError(f"theta_steps must be >= 1, got {self.theta_steps}")
        if self.nms_radius < 0:
            raise ValueError(f"nms_radius must be >= 0, got {self.nms_radius}")


@dataclass(frozen=True)
class Detection:
    """One detected wedge: pixel location, score, estimated orientation."""

    n_x: int
    n_y: int
    z: float
    theta_hat: float


def theta_grid(steps: int) -> np.ndarray:
    """Uniform steering angles over [0, 2 pi)."""
    return 2.0 * np.pi * np.arange(steps) / steps


def _clamped_variance(power: np.ndarray, mu: np.ndarray) -> np.ndarray:
    var = power - mu**2
    tol = _VAR_CLAMP_REL * np.maximum(1.0, np.maximum(np.abs(power), mu**2))
    if np.any(var < -tol):
        worst = float(np.min(var))
        raise FloatingPointError(
            f"variance {worst} below the rounding clamp; bilinear forms inconsistent"
        )
    # residues inside the rounding band snap to exactly zero so that flat
    # profiles produce a genuinely zero denominator when the floor is zero
    return np.where(np.abs(var) <= tol, 0.0, var)


def _domain_moments(cth: np.ndarray, template: WedgeTemplate):
    """Means and clamped variances over both domains; cth is (2L+1, N) steered."""
    w1 = 2.0 * template.phi1
    w0 = 2.0 * math.pi - 2.0 * template.phi0
    mu1c = (template.s1 @ cth) / w1
    mu0c = (template.s0 @ cth) / w0
    p1c = np.sum(np.conj(cth) * (template.S1 @ cth), axis=0) / w1
    p0c = np.sum(np.conj(cth) * (template.S0 @ cth), axis=0) / w0
    for val in (mu1c, mu0c, p1c, p0c):
        resid = np.abs(val.imag)
        if np.any(resid > _IMAG_WARN_REL * np.maximum(1.0, np.abs(val.real))):
            warnings.warn(
                "bilinear form has an unexpectedly large imaginary residue; "
                "spectrum may not be Hermitian-symmetric",
                RuntimeWarning,
                stacklevel=3,
            )
            break
    mu1, mu0 = mu1c.real, mu0c.real
    var1 = _clamped_variance(p1c.real, mu1)
    var0 = _clamped_variance(p0c.real, mu0)
    return mu1, mu0, var1, var0


def _z_at_angle(cmat: np.ndarray, template: WedgeTemplate, theta: float) -> np.ndarray:
    lv = np.arange(-template.max_order, template.max_order + 1)
    cth = cmat * np.exp(1j * lv * theta)[:, None]
    mu1, mu0, var1, var0 = _domain_moments(cth, template)
    den2 = var1 + var0 + template.sigma_min_sq
    with np.errstate(divide="ignore", invalid="ignore"):
        z = (mu1 - mu0) / np.sqrt(den2)
    if not np.isfinite(z).all():
        raise ZeroDivisionError(
            "zero variance denominator: sigma_min_sq = 0 with a flat angular profile"
        )
    return z


def z_statistic(s: Spectrum, template: WedgeTemplate, theta_delta: float) -> float:
    """Contrast statistic for one spectrum at one steering angle."""
    if s.max_order != template.max_order:
        raise ValueError(
            f"spectrum order {s.max_order} != template order {template.max_order}"
        )
    return float(_z_at_angle(s.c[:, None], template, float(theta_delta))[0])


def _sweep(cmat: np.ndarray, config: DetectorConfig):
    """Best statistic and angle per column of cmat; ties go to the smaller angle."""
    best_z = None
    best_t = None
    for theta in theta_grid(config.theta_steps):
        z = _z_at_angle(cmat, config.template, float(theta))
        if config.use_squared:
            z = z * z
        if best_z is None:
            best_z = z.copy()
            best_t = np.zeros_like(z)
        else:
            better = z > best_z
            best_z[better] = z[better]
            best_t[better] = theta
    return best_z, best_t


def orientation_sweep(s: Spectrum, config: DetectorConfig):
    """(z_best, theta_hat) for a single spectrum over the steering grid."""
    if s.max_order != config.template.max_order:
        raise ValueError("spectrum and template order mismatch")
    z, t = _sweep(s.c[:, None], config)
    return float(z[0]), float(t[0])


def _full_coeffs(field: SpectrumField) -> np.ndarray:
    """Hermitian-extended coefficient matrix (2L+1, height*width)."""
    L = field.max_order
    n = field.height * field.width
    full = np.empty((2 * L + 1, n), dtype=complex)
    full[L] = field.coeffs[0].real.ravel()
    for l in range(1, L + 1):
        plane = field.coeffs[l].ravel()
        full[L + l] = plane
        full[L - l] = np.conj(plane)
    return full


def score_map(field: SpectrumField, config: DetectorConfig):
    """Swept statistic and orientation maps for every pixel of a field."""
    if field.max_order != config.template.max_order:
        raise ValueError(
            f"field order {field.max_order} != template order {config.template.max_order}"
        )
    full = _full_coeffs(field)
    n = full.shape[1]
    z = np.empty(n)
    t = np.empty(n)
    for start in range(0, n, _BLOCK):
        sl = slice(start, min(start + _BLOCK, n))
        z[sl], t[sl] = _sweep(full[:, sl], config)
    shape = (field.height, field.width)
    return z.reshape(shape), t.reshape(shape)


def greedy_nms(z_map, theta_map, threshold: float, nms_radius: int,
               top_n: int | None = None):
    """Threshold a score map and greedily suppress, returning Detections.

    Candidates with z > threshold are visited in descending score order
    (ties broken by row then column); each accepted detection suppresses
    weaker candidates within Chebyshev distance nms_radius.  theta_map may
    be None for detectors without an orientation estimate.
    """
    z_map = np.asarray(z_map)
    rows, cols = np.nonzero(z_map > threshold)
    if rows.size == 0:
        return []
    scores = z_map[rows, cols]
    order = np.lexsort((cols, rows, -scores))
    suppressed = np.zeros(z_map.shape, dtype=bool)
    r = nms_radius
    out = []
    for i in order:
        rr, cc = int(rows[i]), int(cols[i])
        if suppressed[rr, cc]:
            continue
        theta = float(theta_map[rr, cc]) if theta_map is not None else float("nan")
        out.append(Detection(n_x=cc, n_y=rr, z=float(scores[i]), theta_hat=theta))
        if top_n is not None and len(out) >= top_n:
            break
        if r > 0:
            suppressed[max(0, rr - r) : rr + r + 1, max(0, cc - r) : cc + r + 1] = True
    return out


def detect(field: SpectrumField, config: DetectorConfig, top_n: int | None = None):
    """Swept statistic detections for a spectrum field (see greedy_nms)."""
    z_map, t_map = score_map(field, config)
    return greedy_nms(z_map, t_map, config.threshold, config.nms_radius, top_n)
