"""Command-line front end.

Subcommands:
    kernels    render filter and component galleries plus an isotropy report
    spectrum   write the CHSF spectrum dump for an input image
    detect     run one detector (A..E) over an image: CSV, maps, overlay
    roc        synthetic wedge ROC for one detector and width
    bench      separable vs direct filtering benchmark

Angles on the command line are degrees; everything internal is radians.
All options can also come from a JSON config file (--config); explicit
flags override file values.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import figures
from .bank import BankParams, build_bank
from .dumps import write_map, write_spectrum
from .harmonics import build_template
from .pnm import PnmError, read_image, write_image
from .spectrum import compute_spectrum
from .wedge import DetectorConfig, detect as run_detect, score_map

__all__ = ["RunConfig", "main"]


@dataclass
class RunConfig:
    """Resolved options for a single CLI invocation."""

    scale: float = 3.0
    kernel_half_width: int = 12
    max_order: int = 6
    width_deg: float = 90.0
    eps_ratio: float = 1.0 / 3.0
    sigma_min: float = 255.0
    theta_steps: int = 24
    threshold: float | None = None
    top_n: int | None = 200
    nms_radius: int = 5
    detector: str = "A"
    supersample: int = 4
    trials: int = 10000
    seed: int = 1
    image_size: int = 512
    repeats: int = 3
    input: str | None = None
    output_dir: str = "."

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def bank_params(self) -> BankParams:
        return BankParams(self.scale, self.kernel_half_width, self.max_order)

    @property
    def width_rad(self) -> float:
        return math.radians(self.width_deg)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chwedge",
        description="Circular-harmonic filter banks and wedge detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *groups):
        p.add_argument("--config", help="JSON file with RunConfig fields")
        p.add_argument("--output-dir", dest="output_dir", help="directory for output files")
        if "bank" in groups:
            p.add_argument("--lambda", dest="scale", type=float, help="filter scale in pixels")
            p.add_argument("--kernel-half-width", dest="kernel_half_width", type=int,
                           help="kernel half-width K")
            p.add_argument("--max-order", dest="max_order", type=int,
                           help="largest wavenumber L")
        if "template" in groups:
            p.add_argument("--width-deg", dest="width_deg", type=float,
                           help="full wedge width in degrees")
            p.add_argument("--eps-ratio", dest="eps_ratio", type=float,
                           help="guard half-gap as a fraction of the half-width")
            p.add_argument("--sigma-min", dest="sigma_min", type=float,
                           help="variance floor is this value squared")
            p.add_argument("--theta-steps", dest="theta_steps", type=int,
                           help="steering angles over the full circle")
        if "detector" in groups:
            p.add_argument("--detector", choices=bench_mod.DETECTOR_KINDS,
                           help="detector variant")
        if "input" in groups:
            p.add_argument("--input", help="input image (PGM or grayscale PNG)")

    p = sub.add_parser("kernels", help="filter bank galleries and isotropy report")
    add_common(p, "bank")

    p = sub.add_parser("spectrum", help="CHSF spectrum dump of an image")
    add_common(p, "bank", "input")

    p = sub.add_parser("detect", help="detections, score maps, and overlay for an image")
    add_common(p, "bank", "template", "detector", "input")
    p.add_argument("--threshold", type=float, help="keep scores strictly above this")
    p.add_argument("--top-n", dest="top_n", type=int, help="keep at most this many detections")
    p.add_argument("--nms-radius", dest="nms_radius", type=int,
                   help="Chebyshev suppression radius in pixels")

    p = sub.add_parser("roc", help="synthetic wedge ROC experiment")
    add_common(p, "bank", "template", "detector")
    p.add_argument("--trials", type=int, help="number of random scenes")
    p.add_argument("--seed", type=int, help="experiment seed")
    p.add_argument("--supersample", type=int, help="sub-pixel grid per axis when rasterizing")

    p = sub.add_parser("bench", help="separable vs direct spectrum benchmark")
    add_common(p, "bank")
    p.add_argument("--image-size", dest="image_size", type=int, help="square test image side")
    p.add_argument("--repeats", type=int, help="timing repeats (best is kept)")
    p.add_argument("--seed", type=int, help="test image seed")

    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        loaded = json.loads(Path(args.config).read_text())
        cfg = RunConfig.from_dict({**cfg.to_dict(), **loaded})
    field_names = {f.name for f in fields(RunConfig)}
    for name, value in vars(args).items():
        if name in field_names and value is not None:
            setattr(cfg, name, value)
    return cfg


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require_input(cfg: RunConfig) -> np.ndarray:
    if not cfg.input:
        raise ValueError("this subcommand needs --input")
    return read_image(cfg.input)


def _cmd_kernels(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    bank = build_bank(cfg.bank_params())
    from .bank import basis_filter

    for l in range(cfg.max_order + 1):
        vals = basis_filter(l, bank.params).values
        freq = np.fft.fftshift(np.abs(np.fft.fft2(vals, s=(256, 256))))
        write_image(vals.real, out / f"basis_l{l}_real.pgm", "symmetric")
        write_image(vals.imag, out / f"basis_l{l}_imag.pgm", "symmetric")
        write_image(np.abs(vals), out / f"basis_l{l}_mag.pgm", "minmax")
        write_image(freq, out / f"basis_l{l}_freqmag.pgm", "minmax")
    figures.save_filter_gallery(bank, out / "filter_gallery.png")
    figures.save_component_gallery(bank, out / "component_gallery.png")
    metrics = figures.save_isotropy_report(
        bank, out / "isotropy.csv", out / "isotropy.png"
    )
    for l, m in enumerate(metrics):
        print(f"l={l} isotropy_ripple={m:.6f}")
    print(f"wrote kernel galleries to {out}")
    return 0


def _cmd_spectrum(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    img = _require_input(cfg)
    bank = build_bank(cfg.bank_params())
    field = compute_spectrum(img, bank)
    dest = out / (Path(cfg.input).stem + ".chsf")
    write_spectrum(field, dest)
    print(f"wrote {dest} ({field.max_order + 1} planes, {field.width}x{field.height})")
    return 0


def _detection_rows(detections):
    rows = ["x,y,z,theta_deg"]
    for d in detections:
        theta = math.degrees(d.theta_hat) if math.isfinite(d.theta_hat) else float("nan")
        rows.append(f"{d.n_x},{d.n_y},{repr(d.z)},{repr(theta)}")
    return "\n".join(rows) + "\n"


def _cmd_detect(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    img = _require_input(cfg)
    params = cfg.bank_params()
    threshold = cfg.threshold if cfg.threshold is not None else -math.inf

    if cfg.detector == "A":
        bank = build_bank(params)
        template = build_template(
            cfg.width_rad / 2.0, cfg.eps_ratio * cfg.width_rad / 2.0,
            cfg.sigma_min**2, cfg.max_order,
        )
        config = DetectorConfig(
            template=template, theta_steps=cfg.theta_steps,
            threshold=threshold, nms_radius=cfg.nms_radius,
        )
        field = compute_spectrum(img, bank)
        detections = run_detect(field, config, top_n=cfg.top_n)
        z_map, t_map = score_map(field, config)
    else:
        det = bench_mod.build_detector(
            cfg.detector, cfg.width_rad, params=params,
            eps_ratio=cfg.eps_ratio, sigma_min=cfg.sigma_min,
            theta_steps=cfg.theta_steps,
        )
        z_map, t_map = det.maps(img)
        detections = _greedy_from_maps(z_map, t_map, threshold, cfg.nms_radius, cfg.top_n)

    (out / "detections.csv").write_text(_detection_rows(detections))
    write_map(z_map, out / "zmap.chzm", params)
    if t_map is not None:
        write_map(t_map, out / "thetamap.chzm", params)
    write_image(z_map, out / "zmap.pgm", "minmax")
    figures.save_map_figure(z_map, out / "zmap.png", f"detector {cfg.detector} score map")
    figures.save_detection_overlay(img, detections, out / "overlay.png")
    print(f"{len(detections)} detections written to {out / 'detections.csv'}")
    return 0


def _greedy_from_maps(z_map, t_map, threshold, nms_radius, top_n):
    """Same thresholding/suppression as wedge.detect, for map-only detectors."""
    from .wedge import Detection

    rows, cols = np.nonzero(z_map > threshold)
    if rows.size == 0:
        return []
    scores = z_map[rows, cols]
    order = np.lexsort((cols, rows, -scores))
    suppressed = np.zeros(z_map.shape, dtype=bool)
    out = []
    for i in order:
        rr, cc = int(rows[i]), int(cols[i])
        if suppressed[rr, cc]:
            continue
        theta = float(t_map[rr, cc]) if t_map is not None else float("nan")
        out.append(Detection(n_x=cc, n_y=rr, z=float(scores[i]), theta_hat=theta))
        if top_n is not None and len(out) >= top_n:
            break
        if nms_radius > 0:
            suppressed[
                max(0, rr - nms_radius) : rr + nms_radius + 1,
                max(0, cc - nms_radius) : cc + nms_radius + 1,
            ] = True
    return out


def _cmd_roc(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    params = cfg.bank_params()
    det = bench_mod.build_detector(
        cfg.detector, cfg.width_rad, params=params,
        eps_ratio=cfg.eps_ratio, sigma_min=cfg.sigma_min, theta_steps=cfg.theta_steps,
    )
    result = bench_mod.roc_run(det, cfg.width_rad, cfg.trials, cfg.seed, cfg.supersample)
    stem = f"roc_{cfg.detector}_{cfg.width_deg:g}"
    rows = ["threshold,pf,pd"]
    rows += [
        f"{repr(float(t))},{repr(float(f))},{repr(float(d))}"
        for t, f, d in zip(result.thresholds, result.pf, result.pd)
    ]
    (out / f"{stem}.csv").write_text("\n".join(rows) + "\n")
    summary = {
        "width_deg": cfg.width_deg,
        "detector": cfg.detector,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "auc": result.auc,
        "supersample": cfg.supersample,
    }
    (out / f"{stem}.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    figures.save_roc_figure(result, out / f"{stem}.png")
    print(json.dumps(summary, sort_keys=True))
    return 0


def _cmd_bench(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    report = bench_mod.bench_compare(cfg.image_size, cfg.bank_params(), cfg.repeats, cfg.seed)
    (out / "bench.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(
        f"separable {report['t_separable_s']:.3f}s vs direct {report['t_direct_s']:.3f}s "
        f"(x{report['ratio']:.1f} measured, x{report['op_counts']['theoretical_ratio']:.2f} "
        f"by op count), max_rel_err {report['max_rel_err']:.2e}"
    )
    return 0


_COMMANDS = {
    "kernels": _cmd_kernels,
    "spectrum": _cmd_spectrum,
    "detect": _cmd_detect,
    "roc": _cmd_roc,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = _build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve_config(args)
        return _COMMANDS[args.command](cfg)
    except (ValueError, PnmError, OSError, ZeroDivisionError, FloatingPointError) as exc:
        print(f"chwedge {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
