"""chwedge: separable circular-harmonic filter banks and wedge detection."""

from .bank import (
    BankParams,
    BasisFilter2D,
    KernelBank,
    basis_filter,
    build_bank,
    gamma_coeff,
    hermite_kernel,
    isotropy_metric,
    rho_norm,
)
from .baselines import (
    HarmonicTemplate,
    correlation_score,
    harris,
    kitchen_rosenfeld,
    ls_template,
    slepian_template,
)
from .bench import RocResult, auc, bench_compare, build_detector, roc_run
from .harmonics import Spectrum, WedgeTemplate, build_template, extend, reconstruct, s_aux, steer
from .pnm import read_image, write_image
from .spectrum import SpectrumField, compute_spectrum, direct_spectrum
from .synth import WedgeScene, render_wedge, sample_scene, truth_label
from .wedge import Detection, DetectorConfig, detect, orientation_sweep, score_map, z_statistic

__version__ = "0.1.0"

__all__ = [
    "BankParams",
    "BasisFilter2D",
    "KernelBank",
    "basis_filter",
    "build_bank",
    "gamma_coeff",
    "hermite_kernel",
    "isotropy_metric",
    "rho_norm",
    "SpectrumField",
    "compute_spectrum",
    "direct_spectrum",
    "Spectrum",
    "WedgeTemplate",
    "build_template",
    "extend",
    "reconstruct",
    "s_aux",
    "steer",
    "Detection",
    "DetectorConfig",
    "detect",
    "orientation_sweep",
    "score_map",
    "z_statistic",
    "HarmonicTemplate",
    "correlation_score",
    "harris",
    "kitchen_rosenfeld",
    "ls_template",
    "slepian_template",
    "WedgeScene",
    "render_wedge",
    "sample_scene",
    "truth_label",
    "RocResult",
    "auc",
    "bench_compare",
    "build_detector",
    "roc_run",
    "read_image",
    "write_image",
]
