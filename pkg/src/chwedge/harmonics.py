"""Single-pixel spectrum algebra.

A full spectrum holds c_l for l = -L..L with the Hermitian constraint
c_{-l} = conj(c_l), so the reconstructed angular profile

    Ihat(theta) = sum_l c_l exp(i l theta)

is real.  Steering by an angle multiplies c_l by exp(i l theta), which
shifts the profile: reconstruct(steer(c, a), t) == reconstruct(c, t + a).

Angular means and powers of Ihat over wedge-shaped domains reduce to
bilinear forms with closed-form integral tables built from

    s_aux(l, phi) = integral of exp(i l theta) over |theta| <= phi
                  = 2 sin(l phi) / l   (l != 0),   2 phi   (l = 0),

which is real and even in l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "Spectrum",
    "extend",
    "reconstruct",
    "steer",
    "s_aux",
    "WedgeTemplate",
    "build_template",
]


@dataclass(frozen=True)
class Spectrum:
    """Hermitian-symmetric coefficient vector, index l + L holds c_l.

    c0_imag_dropped records the magnitude of any imaginary part removed
    from c_0 when the spectrum was extended (diagnostic only).
    """

    c: np.ndarray
    c0_imag_dropped: float = 0.0

    @property
    def max_order(self) -> int:
        return (len(self.c) - 1) // 2

    def coeff(self, l: int) -> complex:
        return complex(self.c[l + self.max_order])


def extend(c_nonneg) -> Spectrum:
    """Extend coefficients for l = 0..L to the full Hermitian vector.

    c_{-l} = conj(c_l); the imaginary part of c_0 is zeroed and its
    magnitude reported on the returned Spectrum.
    """
    pos = np.asarray(c_nonneg, dtype=complex)
    if pos.ndim != 1 or pos.size == 0:
        raise ValueError("expected a non-empty 1-D coefficient vector")
    dropped = abs(float(pos[0].imag))
    full = np.concatenate([np.conj(pos[:0:-1]), [pos[0].real], pos[1:]])
    full.setflags(write=False)
    return Spectrum(full, dropped)


def _l_vector(max_order: int) -> np.ndarray:
    return np.arange(-max_order, max_order + 1)


def reconstruct(s: Spectrum, theta):
    """Angular profile Ihat(theta); accepts a scalar or an array of angles."""
    th = np.asarray(theta, dtype=float)
    phases = np.exp(1j * th[..., None] * _l_vector(s.max_order))
    vals = (phases * s.c).sum(axis=-1).real
    return float(vals) if np.isscalar(theta) else vals


def steer(s: Spectrum, theta_delta: float) -> Spectrum:
    """Phase-shift every harmonic by exp(i l theta_delta)."""
    c = s.c * np.exp(1j * _l_vector(s.max_order) * float(theta_delta))
    c.setflags(write=False)
    return Spectrum(c, s.c0_imag_dropped)


def s_aux(l: int, phi_c: float) -> float:
    """Integral of exp(i l theta) over [-phi_c, phi_c]; real, even in l."""
    if not 0.0 <= phi_c <= math.pi:
        raise ValueError(f"phi_c must lie in [0, pi], got {phi_c}")
    if l == 0:
        return 2.0 * phi_c
    return 2.0 * math.sin(l * phi_c) / l


@dataclass(frozen=True)
class WedgeTemplate:
    """Precomputed integral tables for a wedge of half-width phi_delta.

    The inner domain is |theta| <= phi1 = phi_delta - eps_delta, the outer
    domain is phi0 = phi_delta + eps_delta <= |theta| <= pi; 2*eps_delta of
    guard gap separates them on each side.  s1/s0 integrate exp(i l theta)
    over the two domains, S1/S0 do the same for harmonic differences,
    sigma_min_sq is the variance floor of the detection statistic.
    """

    phi_delta: float
    eps_delta: float
    sigma_min_sq: float
    max_order: int
    s1: np.ndarray
    s0: np.ndarray
    S1: np.ndarray
    S0: np.ndarray

    @property
    def phi1(self) -> float:
        return self.phi_delta - self.eps_delta

    @property
    def phi0(self) -> float:
        return self.phi_delta + self.eps_delta


@lru_cache(maxsize=None)
def _integral_tables(phi_delta: float, eps_delta: float, max_order: int):
    phi1 = phi_delta - eps_delta
    phi0 = phi_delta + eps_delta
    lv = _l_vector(max_order)
    s1 = np.array([s_aux(l, phi1) for l in lv])
    s0 = np.array([s_aux(l, math.pi) - s_aux(l, phi0) for l in lv])
    S1 = np.array([[s_aux(lm - ln, phi1) for ln in lv] for lm in lv])
    S0 = np.array([[s_aux(lm - ln, math.pi) - s_aux(lm - ln, phi0) for ln in lv] for lm in lv])
    for arr in (s1, s0, S1, S0):
        arr.setflags(write=False)
    return s1, s0, S1, S0


def build_template(
    phi_delta: float, eps_delta: float, sigma_min_sq: float, max_order: int
) -> WedgeTemplate:
    """Build (or fetch from cache) the integral tables for one wedge geometry."""
    if not 0.0 < phi_delta < math.pi:
        raise ValueError(f"phi_delta must lie in (0, pi), got {phi_delta}")
    if not 0.0 <= eps_delta < phi_delta:
        raise ValueError(f"eps_delta must lie in [0, phi_delta), got {eps_delta}")
    if phi_delta + eps_delta >= math.pi:
        raise ValueError("outer domain vanishes: phi_delta + eps_delta must be < pi")
    if sigma_min_sq < 0:
        raise ValueError(f"sigma_min_sq must be >= 0, got {sigma_min_sq}")
    if max_order < 0:
        raise ValueError(f"max_order must be >= 0, got {max_order}")
    s1, s0, S1, S0 = _integral_tables(float(phi_delta), float(eps_delta), int(max_order))
    return WedgeTemplate(
        phi_delta=float(phi_delta),
        eps_delta=float(eps_delta),
        sigma_min_sq=float(sigma_min_sq),
        max_order=int(max_order),
        s1=s1,
        s0=s0,
        S1=S1,
        S0=S0,
    )
