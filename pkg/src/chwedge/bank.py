"""Cartesian-separable circular-harmonic filter bank.

The bank realizes the complex polar filters

    psi_l(r, theta) = r^l exp(-r^2 / 2 s^2) exp(i l theta),   l = 0..L,

sampled on the integer grid m_x, m_y in [-K, K].  Because
r^l exp(i l theta) = (x + i y)^l, each filter splits into l + 1 separable
terms,

    psi_l(x, y) = sum_k  C(l,k) i^(l-k) * (x^k e^{-x^2/2s^2}) (y^(l-k) e^{-y^2/2s^2}),

so image filtering reduces to 1-D passes instead of a dense 2-D kernel.
This module builds the sampled 1-D component kernels, the exact complex
combination coefficients, the dense 2-D reference kernels, and the energy
normalizers rho_l = sum |h_l|^2.

Grid convention used throughout the package: x runs along columns, y runs up
the rows (row 0 is the top of an image, so the row index maps to -y), and
theta = atan2(y, x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

__all__ = [
    "BankParams",
    "KernelBank",
    "BasisFilter2D",
    "gamma_coeff",
    "hermite_kernel",
    "basis_filter",
    "separable_kernel_2d",
    "rho_norm",
    "build_bank",
    "isotropy_metric",
]

# i^p for p mod 4; exact Gaussian-integer phases, no trig rounding
_PHASES = (1 + 0j, 0 + 1j, -1 + 0j, 0 - 1j)

DEFAULT_DFT_SIZE = 256


@dataclass(frozen=True)
class BankParams:
    """Filter-bank geometry.

    scale       Gaussian spatial scale in pixels (must be positive).
    half_width  kernel half-width K; kernels span M = 2K+1 taps.
    max_order   largest angular wavenumber L.
    """

    scale: float
    half_width: int
    max_order: int

    def __post_init__(self):
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValueError(f"scale must be a positive real, got {self.scale}")
        if int(self.half_width) != self.half_width or self.half_width < 1:
            raise ValueError(f"half_width must be an integer >= 1, got {self.half_width}")
        if int(self.max_order) != self.max_order or self.max_order < 0:
            raise ValueError(f"max_order must be an integer >= 0, got {self.max_order}")

    @property
    def size(self) -> int:
        """Kernel side length M = 2K + 1 (always odd)."""
        return 2 * self.half_width + 1


def gamma_coeff(l: int, k: int) -> complex:
    """Combination coefficient C(l,k) * i^(l-k) pairing x^k with y^(l-k)."""
    if k < 0 or k > l:
        raise ValueError(f"need 0 <= k <= l, got k={k}, l={l}")
    return math.comb(l, k) * _PHASES[(l - k) % 4]


def hermite_kernel(k: int, params: BankParams) -> np.ndarray:
    """Sampled 1-D component kernel m^k exp(-m^2 / 2 s^2) for m = -K..K.

    Index i holds the sample at shift m = i - K; 0^0 is taken as 1 so k = 0
    is the plain Gaussian.  Even k gives a symmetric vector, odd k an
    antisymmetric one.  The spectrum engine's column pass consumes the
    index-reversed vector (rows run opposite to y); see chwedge.spectrum.
    """
    if k < 0 or k > params.max_order:
        raise ValueError(f"component order k={k} outside [0, {params.max_order}]")
    m = np.arange(-params.half_width, params.half_width + 1, dtype=float)
    return m**k * np.exp(-(m**2) / (2.0 * params.scale**2))


@dataclass(frozen=True)
class BasisFilter2D:
    """Dense 2-D kernel (x + iy)^l exp(-r^2/2s^2) sampled in image layout.

    values[row, col] holds the sample at m_x = col - K, m_y = K - row, i.e.
    row 0 is the top of the kernel image and y increases upward.
    """

    order: int
    values: np.ndarray

    @property
    def half_width(self) -> int:
        return (self.values.shape[0] - 1) // 2

    def value_at(self, m_x: int, m_y: int) -> complex:
        """Sample at integer grid shift (m_x, m_y)."""
        k = self.half_width
        return complex(self.values[k - m_y, m_x + k])


def basis_filter(l: int, params: BankParams) -> BasisFilter2D:
    """Ground-truth dense kernel for wavenumber l (reference realization)."""
    if l < 0 or l > params.max_order:
        raise ValueError(f"wavenumber l={l} outside [0, {params.max_order}]")
    k = params.half_width
    idx = np.arange(2 * k + 1)
    x = (idx - k).astype(float)[None, :]
    y = (k - idx).astype(float)[:, None]
    vals = (x + 1j * y) ** l * np.exp(-(x**2 + y**2) / (2.0 * params.scale**2))
    vals.setflags(write=False)
    return BasisFilter2D(l, vals)


def separable_kernel_2d(bank: KernelBank, l: int) -> np.ndarray:
    """Rebuild the dense order-l kernel from the 1-D components.

    Equals basis_filter(l).values up to rounding; used to cross-check the
    separable decomposition.
    """
    out = np.zeros((bank.params.size, bank.params.size), dtype=complex)
    for k in range(l + 1):
        out += bank.gamma[l][k] * np.outer(bank.hermite[l - k][::-1], bank.hermite[k])
    return out


def rho_norm(l: int, params: BankParams) -> float:
    """Energy of the sampled order-l kernel: sum of squared magnitudes."""
    return float(np.sum(np.abs(basis_filter(l, params).values) ** 2))


@dataclass(frozen=True)
class KernelBank:
    """Immutable, precomputed filter-bank data.

    hermite  1-D component kernels, index k = 0..L, each of length 2K+1.
    gamma    combination coefficients gamma[l][k] for 0 <= k <= l <= L.
    rho      per-order kernel energies, length L+1.
    """

    params: BankParams
    hermite: tuple
    gamma: tuple
    rho: np.ndarray


def build_bank(params: BankParams) -> KernelBank:
    """Build and invariant-check the full kernel bank."""
    L = params.max_order
    hermite = []
    for k in range(L + 1):
        h = hermite_kernel(k, params)
        sign = 1.0 if k % 2 == 0 else -1.0
        if not np.array_equal(h[::-1], sign * h):
            raise AssertionError(f"component kernel k={k} lost its parity symmetry")
        h.setflags(write=False)
        hermite.append(h)
    gamma = tuple(tuple(gamma_coeff(l, k) for k in range(l + 1)) for l in range(L + 1))
    rho = np.array([rho_norm(l, params) for l in range(L + 1)])
    if not (rho > 0).all():
        raise AssertionError("kernel energies must be positive")
    rho.setflags(write=False)
    return KernelBank(params=params, hermite=tuple(hermite), gamma=gamma, rho=rho)


def isotropy_metric(l: int, params: BankParams, dft_size: int = DEFAULT_DFT_SIZE) -> float:
    """Angular ripple of the frequency-response magnitude |H_l|.

    Zero-pads the sampled kernel into a dft_size x dft_size grid, takes the
    DFT magnitude, finds the peak, and measures the maximum deviation from
    the ring mean on the ring through the peak, normalized by the peak
    magnitude.  A radius-0 ring (the l = 0 dc peak) returns 0.  Small values
    mean the discretized filter is close to rotation invariant.
    """
    if dft_size < 4 * params.half_width:
        raise ValueError(
            f"dft_size={dft_size} too small to resolve a {params.size}-tap kernel; "
            f"need at least {4 * params.half_width}"
        )
    vals = basis_filter(l, params).values
    mag = np.abs(np.fft.fft2(vals, s=(dft_size, dft_size)))
    mag = np.fft.fftshift(mag)
    peak = float(mag.max())
    pr, pc = np.unravel_index(int(np.argmax(mag)), mag.shape)
    ctr = dft_size // 2
    radius = math.hypot(pr - ctr, pc - ctr)
    if radius == 0.0:
        return 0.0
    ang = np.linspace(0.0, 2.0 * np.pi, 720, endpoint=False)
    rows = ctr + radius * np.sin(ang)
    cols = ctr + radius * np.cos(ang)
    ring = ndimage.map_coordinates(mag, np.stack([rows, cols]), order=1, mode="grid-wrap")
    return float(np.max(np.abs(ring - ring.mean())) / peak)
