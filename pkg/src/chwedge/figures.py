"""Matplotlib rendering for the CLI report paths (Agg backend, files only)."""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .bank import KernelBank, basis_filter, isotropy_metric  # noqa: E402

# fixed metadata keeps repeated runs byte-identical
_PNG_META = {"Software": "chwedge"}


def _save(fig, path):
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)


def save_filter_gallery(bank: KernelBank, path, dft_size: int = 256) -> None:
    """Grid of basis-filter views: real, imaginary, magnitude, |frequency response|."""
    p = bank.params
    n = p.max_order + 1
    fig, axes = plt.subplots(4, n, figsize=(1.6 * n, 6.6))
    axes = np.atleast_2d(axes).reshape(4, n)
    row_names = ("real", "imag", "magnitude", "|freq resp|")
    for l in range(n):
        vals = basis_filter(l, p).values
        freq = np.fft.fftshift(np.abs(np.fft.fft2(vals, s=(dft_size, dft_size))))
        views = (vals.real, vals.imag, np.abs(vals), freq)
        for r, view in enumerate(views):
            ax = axes[r, l]
            ax.imshow(view, cmap="gray")
            ax.set_xticks([])
            ax.set_yticks([])
            if r == 0:
                ax.set_title(f"l = {l}", fontsize=9)
            if l == 0:
                ax.set_ylabel(row_names[r], fontsize=8)
    fig.suptitle(f"basis filters (scale={p.scale}, K={p.half_width})", fontsize=10)
    _save(fig, path)


def save_component_gallery(bank: KernelBank, path) -> None:
    """Grid of separable component products h_kx * h_ky for all index pairs."""
    n = bank.params.max_order + 1
    fig, axes = plt.subplots(n, n, figsize=(1.3 * n, 1.3 * n))
    axes = np.atleast_2d(axes).reshape(n, n)
    for ky in range(n):
        for kx in range(n):
            prod = np.outer(bank.hermite[ky][::-1], bank.hermite[kx])
            ax = axes[ky, kx]
            ax.imshow(prod, cmap="gray")
            ax.set_xticks([])
            ax.set_yticks([])
            if ky == 0:
                ax.set_title(f"kx={kx}", fontsize=8)
            if kx == 0:
                ax.set_ylabel(f"ky={ky}", fontsize=8)
    fig.suptitle("separable component kernels", fontsize=10)
    _save(fig, path)


def save_isotropy_report(bank: KernelBank, csv_path, png_path, dft_size: int = 256):
    """Per-order isotropy ripple as CSV plus a bar figure; returns the metrics."""
    p = bank.params
    metrics = [isotropy_metric(l, p, dft_size) for l in range(p.max_order + 1)]
    lines = ["l,isotropy_ripple"]
    lines += [f"{l},{repr(m)}" for l, m in enumerate(metrics)]
    with open(csv_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    fig, ax = plt.subplots(figsize=(4.5, 3.0))
    ax.bar(range(len(metrics)), metrics, color="steelblue")
    ax.set_xlabel("wavenumber l")
    ax.set_ylabel("ring ripple / peak")
    ax.set_title(f"frequency-response isotropy (scale={p.scale}, K={p.half_width})")
    fig.tight_layout()
    _save(fig, png_path)
    return metrics


def save_roc_figure(result, path) -> None:
    """ROC polyline with the area in the legend."""
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    pf = np.concatenate([[0.0], result.pf[::-1], [1.0]])
    pd = np.concatenate([[0.0], result.pd[::-1], [1.0]])
    ax.plot(pf, pd, "-", color="crimson",
            label=f"Det. {result.detector}, AUC={result.auc:.4f}")
    ax.plot([0, 1], [0, 1], ":", color="gray", lw=0.8)
    ax.set_xlabel("false-alarm rate")
    ax.set_ylabel("detection rate")
    width_deg = np.degrees(result.width)
    ax.set_title(f"wedge width {width_deg:g} deg, {result.trials} trials")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def save_detection_overlay(image, detections, path, tick_len: float = 8.0) -> None:
    """Input image with detection markers and orientation ticks."""
    img = np.asarray(image, dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 6.0 * img.shape[0] / max(img.shape[1], 1)))
    ax.imshow(img, cmap="gray")
    for det in detections:
        ax.plot(det.n_x, det.n_y, "s", mfc="none", mec="yellow", ms=6, mew=1.0)
        if np.isfinite(det.theta_hat):
            # y axis points down the rows, so flip the y component
            dx = tick_len * np.cos(det.theta_hat)
            dy = -tick_len * np.sin(det.theta_hat)
            ax.plot([det.n_x, det.n_x + dx], [det.n_y, det.n_y + dy], "-", color="red", lw=1.0)
    ax.set_xlim(-0.5, img.shape[1] - 0.5)
    ax.set_ylim(img.shape[0] - 0.5, -0.5)
    ax.set_xticks([])
    ax.set_yticks([])
    fig.tight_layout()
    _save(fig, path)


def save_map_figure(grid, path, title: str) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    im = ax.imshow(np.asarray(grid, dtype=float), cmap="magma")
    fig.colorbar(im, ax=ax, shrink=0.85)
    ax.set_title(title, fontsize=9)
    ax.set_xticks([])
    ax.set_yticks([])
    fig.tight_layout()
    _save(fig, path)
