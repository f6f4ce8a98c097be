"""Synthetic ROC harness, interchangeable frame detectors, and the
separable-vs-direct filtering benchmark.

Each ROC trial renders a random wedge scene, scores the frame center with
the chosen detector, and labels the trial with the truth rule; the curve
holds one operating point per distinct score (rates of scores strictly
above each threshold) so the area is the exact rank statistic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .bank import BankParams, KernelBank, basis_filter, build_bank
from .baselines import (
    HarmonicTemplate,
    correlation_map,
    correlation_score,
    harris,
    kitchen_rosenfeld,
    ls_template,
    slepian_template,
)
from .harmonics import WedgeTemplate, build_template, extend
from .spectrum import compute_spectrum, direct_spectrum
from .synth import render_wedge, sample_scene, trial_rng, truth_label
from .wedge import DetectorConfig, orientation_sweep, score_map

__all__ = [
    "RocResult",
    "roc_points",
    "auc_trapezoid",
    "auc",
    "roc_run",
    "build_detector",
    "DETECTOR_KINDS",
    "bench_compare",
]

DETECTOR_KINDS = ("A", "B", "C", "D", "E")

DEFAULT_EPS_RATIO = 1.0 / 3.0
DEFAULT_SIGMA_MIN = 255.0
DEFAULT_THETA_STEPS = 24
DEFAULT_HARRIS_K = 0.04


@dataclass(frozen=True)
class RocResult:
    """ROC curve and area for one detector / wedge-width scenario."""

    width: float
    detector: str
    trials: int
    seed: int
    supersample: int
    thresholds: np.ndarray
    pf: np.ndarray
    pd: np.ndarray
    auc: float


def roc_points(scores: np.ndarray, labels: np.ndarray):
    """Exact empirical ROC: one threshold per distinct score, ascending.

    pf/pd are the fractions of negative/positive scores strictly above each
    threshold, so both are non-increasing.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=bool)
    pos = np.sort(scores[labels])
    neg = np.sort(scores[~labels])
    if pos.size == 0 or neg.size == 0:
        raise ValueError("need at least one positive and one negative trial")
    thresholds = np.unique(scores)
    pd = 1.0 - np.searchsorted(pos, thresholds, side="right") / pos.size
    pf = 1.0 - np.searchsorted(neg, thresholds, side="right") / neg.size
    return thresholds, pf, pd


def auc_trapezoid(pf: np.ndarray, pd: np.ndarray) -> float:
    """Trapezoidal area under the (pf, pd) polyline with (0,0), (1,1) appended."""
    pf = np.asarray(pf, dtype=float)
    pd = np.asarray(pd, dtype=float)
    if pf.shape != pd.shape or pf.ndim != 1 or pf.size == 0:
        raise ValueError("pf and pd must be equal-length non-empty 1-D arrays")
    # stored points run from low to high threshold, i.e. pf descending
    x = np.concatenate([[0.0], pf[::-1], [1.0]])
    y = np.concatenate([[0.0], pd[::-1], [1.0]])
    if np.any(np.diff(x) < 0):
        raise ValueError("pf points must be monotone in threshold")
    return float(np.trapezoid(y, x))


def auc(roc: RocResult) -> float:
    """Area under the stored curve (endpoints appended)."""
    return auc_trapezoid(roc.pf, roc.pd)


def roc_run(detector, template_width: float, trials: int, seed: int,
            supersample: int = 4) -> RocResult:
    """Run the synthetic experiment for one detector and wedge width.

    Fully reproducible: trial i draws its scene from trial_rng(seed, i), so
    the result is a pure function of (detector, width, trials, seed,
    supersample).
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    scores = np.empty(trials)
    labels = np.empty(trials, dtype=bool)
    for i in range(trials):
        scene = sample_scene(trial_rng(seed, i))
        frame = render_wedge(scene, supersample)
        scores[i] = detector.score(frame)
        labels[i] = truth_label(scene, template_width)
    thresholds, pf, pd = roc_points(scores, labels)
    return RocResult(
        width=float(template_width),
        detector=detector.name,
        trials=trials,
        seed=seed,
        supersample=supersample,
        thresholds=thresholds,
        pf=pf,
        pd=pd,
        auc=auc_trapezoid(pf, pd),
    )


class _CenterSpectrum:
    """Shared center-pixel projection for the spectrum-based detectors.

    The frame center's kernel stencil lies entirely inside any frame at
    least as large as the kernel, so the center spectrum is an exact inner
    product with the dense kernels (no boundary policy involved).
    """

    def __init__(self, bank: KernelBank):
        p = bank.params
        rows = [
            np.conj(basis_filter(l, p).values).ravel() / math.sqrt(bank.rho[l])
            for l in range(p.max_order + 1)
        ]
        self._proj = np.stack(rows)
        self._size = p.size

    def __call__(self, frame: np.ndarray):
        frame = np.asarray(frame, dtype=float)
        if frame.shape[0] < self._size or frame.shape[1] < self._size:
            raise ValueError(f"frame {frame.shape} smaller than the kernel stencil")
        r0 = (frame.shape[0] - self._size) // 2
        c0 = (frame.shape[1] - self._size) // 2
        patch = frame[r0 : r0 + self._size, c0 : c0 + self._size]
        return extend(self._proj @ patch.ravel())


class WedgeContrastDetector:
    """Detector A: swept contrast statistic of the harmonic spectrum."""

    def __init__(self, bank: KernelBank, template: WedgeTemplate,
                 theta_steps: int = DEFAULT_THETA_STEPS):
        self.name = "A"
        self.bank = bank
        self.config = DetectorConfig(template=template, theta_steps=theta_steps)
        self._center = _CenterSpectrum(bank)

    def score(self, frame) -> float:
        z, _ = orientation_sweep(self._center(frame), self.config)
        return z

    def maps(self, image):
        field = compute_spectrum(image, self.bank)
        return score_map(field, self.config)


class TemplateCorrelationDetector:
    """Detectors B and C: normalized correlation against a fixed template."""

    def __init__(self, name: str, bank: KernelBank, template: HarmonicTemplate,
                 theta_steps: int = DEFAULT_THETA_STEPS):
        self.name = name
        self.bank = bank
        self.template = template
        self.theta_steps = theta_steps
        self._center = _CenterSpectrum(bank)

    def score(self, frame) -> float:
        score, _ = correlation_score(self._center(frame), self.template, self.theta_steps)
        return score

    def maps(self, image):
        field = compute_spectrum(image, self.bank)
        return correlation_map(field, self.template, self.theta_steps)


class HarrisDetector:
    """Detector D: Harris corner response sampled at the frame center."""

    def __init__(self, scale: float = 3.0, k: float = DEFAULT_HARRIS_K):
        self.name = "D"
        self.scale = scale
        self.k = k

    def score(self, frame) -> float:
        frame = np.asarray(frame, dtype=float)
        resp = harris(frame, self.scale, self.k)
        return float(resp[frame.shape[0] // 2, frame.shape[1] // 2])

    def maps(self, image):
        return harris(np.asarray(image, dtype=float), self.scale, self.k), None


class KitchenRosenfeldDetector:
    """Detector E: curvature response sampled at the frame center.

    The raw curvature measure is negative on bright corners, so the
    detector scores the negated response (bright-corner positive).
    """

    def __init__(self, scale: float = 3.0):
        self.name = "E"
        self.scale = scale

    def score(self, frame) -> float:
        frame = np.asarray(frame, dtype=float)
        resp = kitchen_rosenfeld(frame, self.scale)
        return float(-resp[frame.shape[0] // 2, frame.shape[1] // 2])

    def maps(self, image):
        return -kitchen_rosenfeld(np.asarray(image, dtype=float), self.scale), None


def build_detector(
    kind: str,
    width: float,
    bank: KernelBank | None = None,
    params: BankParams | None = None,
    eps_ratio: float = DEFAULT_EPS_RATIO,
    sigma_min: float = DEFAULT_SIGMA_MIN,
    theta_steps: int = DEFAULT_THETA_STEPS,
    harris_k: float = DEFAULT_HARRIS_K,
):
    """Construct one of the interchangeable detectors.

    width is the full wedge angular width 2*phi in radians.  Detectors A-C
    need a kernel bank (or params to build one); D and E take their
    derivative scale from the bank scale so the spatial footprints match.
    """
    if kind not in DETECTOR_KINDS:
        raise ValueError(f"unknown detector {kind!r}; expected one of {DETECTOR_KINDS}")
    if params is None:
        params = bank.params if bank is not None else BankParams(3.0, 12, 6)
    phi = width / 2.0
    if kind in ("D", "E"):
        return HarrisDetector(params.scale, harris_k) if kind == "D" else KitchenRosenfeldDetector(params.scale)
    if bank is None:
        bank = build_bank(params)
    if kind == "A":
        template = build_template(phi, eps_ratio * phi, sigma_min**2, params.max_order)
        return WedgeContrastDetector(bank, template, theta_steps)
    if kind == "B":
        return TemplateCorrelationDetector("B", bank, slepian_template(phi, params.max_order), theta_steps)
    return TemplateCorrelationDetector("C", bank, ls_template(phi, params.max_order), theta_steps)


def _op_counts(params: BankParams) -> dict:
    m = params.size
    per_filter = [
        {"l": l, "separable_ops": 2 * m * (l + 1), "direct_ops": m * m}
        for l in range(params.max_order + 1)
    ]
    sep_total = sum(e["separable_ops"] for e in per_filter)
    dir_total = sum(e["direct_ops"] for e in per_filter)
    return {
        "per_filter": per_filter,
        "separable_total": sep_total,
        "direct_total": dir_total,
        "theoretical_ratio": dir_total / sep_total,
    }


def bench_compare(image_size: int, params: BankParams, repeats: int = 3,
                  seed: int = 0) -> dict:
    """Time both spectrum realizations on one random image and verify they agree.

    Reports best-of-repeats wall-clock times, their ratio, the worst
    interior relative difference, and the per-filter multiply-add counts
    2M(l+1) (separable) vs M^2 (direct).
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    if image_size < params.size:
        raise ValueError(f"image_size {image_size} smaller than kernel size {params.size}")
    img = np.random.Generator(np.random.PCG64(seed)).uniform(0.0, 255.0, (image_size, image_size))
    bank = build_bank(params)

    t_sep = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        sep = compute_spectrum(img, bank)
        t_sep = min(t_sep, time.perf_counter() - start)
    t_dir = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        dir_ = direct_spectrum(img, bank)
        t_dir = min(t_dir, time.perf_counter() - start)

    k = params.half_width
    core = (slice(None), slice(k, image_size - k), slice(k, image_size - k))
    err = 0.0
    for l in range(params.max_order + 1):
        diff = np.abs(sep.coeffs[l][core[1:]] - dir_.coeffs[l][core[1:]]).max()
        err = max(err, diff / np.abs(dir_.coeffs[l][core[1:]]).max())

    return {
        "image_size": image_size,
        "K": params.half_width,
        "L": params.max_order,
        "lambda": params.scale,
        "t_separable_s": t_sep,
        "t_direct_s": t_dir,
        "ratio": t_dir / t_sep,
        "max_rel_err": float(err),
        "op_counts": _op_counts(params),
    }
