"""Comparison detectors.

Two harmonic-template correlators (a maximally concentrated eigen-template
and a least-squares wedge projection) scored by normalized inner product on
the [-1, 1] interval, plus two classic gradient-based corner maps (Harris
and Kitchen-Rosenfeld) computed with Gaussian-derivative kernels.

Template and patch spectra are normalized under the full-circle energy
inner product <a, b> = 2 pi a^H b, so harmonics are orthogonal and a unit
template has unit profile energy over the circle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .harmonics import Spectrum, s_aux
from .spectrum import BOUNDARY_MODE, SpectrumField
from .wedge import theta_grid

__all__ = [
    "HarmonicTemplate",
    "slepian_template",
    "ls_projection",
    "ls_template",
    "correlation_score",
    "correlation_map",
    "harris",
    "kitchen_rosenfeld",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class HarmonicTemplate:
    """Unit-energy template spectrum t_l, l = -L..L, under the 2 pi inner product.

    concentration is the inner-domain energy fraction for the eigen design
    (None for the least-squares design).
    """

    t: np.ndarray
    kind: str
    concentration: float | None = None

    @property
    def max_order(self) -> int:
        return (len(self.t) - 1) // 2


def _hermitian_from_eigvec(v: np.ndarray) -> np.ndarray:
    # real symmetric-Toeplitz eigenvectors are index-symmetric or
    # antisymmetric; the antisymmetric ones need an i factor to satisfy
    # t_{-l} = conj(t_l)
    rev = v[::-1]
    if np.allclose(rev, v, atol=1e-10):
        return v.astype(complex)
    if np.allclose(rev, -v, atol=1e-10):
        return 1j * v
    warnings.warn(
        "degenerate concentration eigenspace; symmetrizing the leading eigenvector",
        RuntimeWarning,
        stacklevel=3,
    )
    sym = 0.5 * (v + rev)
    if np.linalg.norm(sym) < 1e-12:
        return 1j * (0.5 * (v - rev))
    return sym.astype(complex)


def _canonical_sign(t: np.ndarray) -> np.ndarray:
    # fix the arbitrary overall sign: profile positive at theta = 0, or, if
    # it vanishes there, largest coefficient rotated to the positive side
    at0 = float(np.sum(t).real)
    if abs(at0) > 1e-12:
        return t if at0 > 0 else -t
    j = int(np.argmax(np.abs(t)))
    ref = t[j].real if abs(t[j].real) > abs(t[j].imag) else t[j].imag
    return t if ref >= 0 else -t


def slepian_template(phi1: float, max_order: int) -> HarmonicTemplate:
    """Most inner-domain-concentrated unit-energy spectrum of order <= L.

    Leading eigenvector of the inner-domain Gram matrix with entries
    s_aux(l_m - l_n, phi1); eigenvalue / 2 pi is the energy fraction inside
    |theta| <= phi1 and is reported as the concentration.
    """
    if not 0.0 < phi1 < math.pi:
        raise ValueError(f"phi1 must lie in (0, pi), got {phi1}")
    lv = np.arange(-max_order, max_order + 1)
    gram = np.array([[s_aux(lm - ln, phi1) for ln in lv] for lm in lv])
    try:
        eigvals, eigvecs = np.linalg.eigh(gram)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError("concentration eigenproblem failed to converge") from exc
    lam = float(eigvals[-1])
    if len(eigvals) > 1 and lam - float(eigvals[-2]) <= 1e-9 * abs(lam):
        warnings.warn(
            "concentration ratio is degenerate (phi1 close to pi); "
            "the template is not unique",
            RuntimeWarning,
            stacklevel=2,
        )
    t = _canonical_sign(_hermitian_from_eigvec(eigvecs[:, -1]))
    t = t / math.sqrt(TWO_PI * float(np.sum(np.abs(t) ** 2)))
    t.setflags(write=False)
    return HarmonicTemplate(t, "slepian", concentration=lam / TWO_PI)


def ls_projection(phi_delta: float, max_order: int) -> np.ndarray:
    """Raw harmonic projection of the unit wedge indicator (1 on |theta| <= phi)."""
    if not 0.0 < phi_delta < math.pi:
        raise ValueError(f"phi_delta must lie in (0, pi), got {phi_delta}")
    lv = np.arange(-max_order, max_order + 1)
    return np.array([s_aux(l, phi_delta) / TWO_PI for l in lv])


def ls_template(phi_delta: float, max_order: int) -> HarmonicTemplate:
    """Least-squares wedge template: indicator projection, mean-removed, unit energy."""
    t = ls_projection(phi_delta, max_order).astype(complex)
    t[max_order] = 0.0
    t = t / math.sqrt(TWO_PI * float(np.sum(np.abs(t) ** 2)))
    t.setflags(write=False)
    return HarmonicTemplate(t, "least-squares")


def correlation_score(s: Spectrum, template: HarmonicTemplate, theta_steps: int = 24):
    """Max over steering angles of the normalized correlation, in [-1, 1].

    The patch spectrum is mean-removed (c_0 zeroed) and normalized to unit
    energy before correlating; a patch with no remaining energy scores 0.
    """
    if s.max_order != template.max_order:
        raise ValueError("spectrum and template order mismatch")
    L = s.max_order
    c = s.c.copy()
    c[L] = 0.0
    energy = TWO_PI * float(np.sum(np.abs(c) ** 2))
    if energy == 0.0:
        return 0.0, 0.0
    angles = theta_grid(theta_steps)
    lv = np.arange(-L, L + 1)
    resp = (np.conj(template.t) * np.exp(1j * np.outer(angles, lv)) * c).sum(axis=1).real
    resp *= TWO_PI / math.sqrt(energy)
    j = int(np.argmax(resp))
    return float(resp[j]), float(angles[j])


def correlation_map(field: SpectrumField, template: HarmonicTemplate, theta_steps: int = 24):
    """Per-pixel correlation_score over a spectrum field."""
    if field.max_order != template.max_order:
        raise ValueError("field and template order mismatch")
    from .wedge import _full_coeffs

    L = field.max_order
    full = _full_coeffs(field)
    full[L] = 0.0
    energy = TWO_PI * np.sum(np.abs(full) ** 2, axis=0)
    live = energy > 0.0
    inv = np.zeros_like(energy)
    inv[live] = TWO_PI / np.sqrt(energy[live])
    lv = np.arange(-L, L + 1)
    best = np.full(full.shape[1], -np.inf)
    best_t = np.zeros(full.shape[1])
    for theta in theta_grid(theta_steps):
        w = np.conj(template.t) * np.exp(1j * lv * theta)
        resp = (w @ full).real * inv
        better = resp > best
        best[better] = resp[better]
        best_t[better] = theta
    best[~live] = 0.0
    best_t[~live] = 0.0
    shape = (field.height, field.width)
    return best.reshape(shape), best_t.reshape(shape)


def _gauss_kernels(scale: float):
    """Sampled Gaussian, first- and second-derivative correlation kernels.

    Calibrated so correlation responds 1 to a unit ramp (first derivative)
    and 1 to the curvature of x^2/2 (second derivative).
    """
    if not (math.isfinite(scale) and scale > 0):
        raise ValueError(f"scale must be positive, got {scale}")
    radius = int(math.ceil(4.0 * scale))
    m = np.arange(-radius, radius + 1, dtype=float)
    g = np.exp(-(m**2) / (2.0 * scale**2))
    g /= g.sum()
    d1 = m * g
    d1 /= (m * d1).sum()
    d2 = (m**2 - (m**2 * g).sum()) * g
    d2 *= 2.0 / (m**2 * d2).sum()
    return g, d1, d2


def _sep(img: np.ndarray, wx: np.ndarray, wy: np.ndarray) -> np.ndarray:
    # x pass along columns, then y-up pass along rows (reversed kernel)
    tmp = ndimage.correlate1d(img, wx, axis=1, mode=BOUNDARY_MODE)
    return ndimage.correlate1d(tmp, wy[::-1], axis=0, mode=BOUNDARY_MODE)


def harris(image, scale: float = 3.0, k: float = 0.04) -> np.ndarray:
    """Harris corner response det(S) - k trace(S)^2 of the smoothed structure tensor."""
    img = np.asarray(image, dtype=float)
    g, d1, _ = _gauss_kernels(scale)
    ix = _sep(img, d1, g)
    iy = _sep(img, g, d1)
    sxx = _sep(ix * ix, g, g)
    syy = _sep(iy * iy, g, g)
    sxy = _sep(ix * iy, g, g)
    return sxx * syy - sxy**2 - k * (sxx + syy) ** 2


def kitchen_rosenfeld(image, scale: float = 3.0) -> np.ndarray:
    """Isophote curvature times gradient magnitude, with a guarded denominator."""
    img = np.asarray(image, dtype=float)
    g, d1, d2 = _gauss_kernels(scale)
    ix = _sep(img, d1, g)
    iy = _sep(img, g, d1)
    ixx = _sep(img, d2, g)
    iyy = _sep(img, g, d2)
    ixy = _sep(img, d1, d1)
    num = ixx * iy**2 - 2.0 * ixy * ix * iy + iyy * ix**2
    den = ix**2 + iy**2
    dyn = float(img.max() - img.min())
    floor = 1e-6 * dyn * dyn if dyn > 0 else 1e-12  # keeps flats at exactly 0
    return num / np.maximum(den, floor)
