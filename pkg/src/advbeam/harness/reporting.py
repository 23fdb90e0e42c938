"""Report emission: canonical JSON, CSV tables, and matplotlib figures."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ..images import save_png


def jsonable(value):
    """Recursively convert numpy scalars/arrays so json can serialize them."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def write_json(path, payload: dict) -> Path:
    """Canonical JSON: sorted keys, two-space indent, trailing newline.

    Identical payloads serialize to identical bytes, which is what makes
    repeated runs comparable with a plain file diff.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(jsonable(payload), indent=2, sort_keys=True, ensure_ascii=False)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def save_line_plot(path, xs, ys, xlabel: str, ylabel: str, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ax.plot(xs, ys, marker="o")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return Path(path)


def save_heatmap(path, angles, intercepts, rates, title: str = "") -> Path:
    """Flip-rate grid as an image: intercept on x, beam angle on y."""
    fig, ax = plt.subplots(figsize=(6.0, 4.4))
    grid = np.ma.masked_invalid(np.asarray(rates, dtype=float))
    mesh = ax.pcolormesh(
        np.asarray(intercepts), np.asarray(angles), grid, shading="nearest", cmap="viridis"
    )
    fig.colorbar(mesh, ax=ax, label="success rate (%)")
    ax.set_xlabel("intercept (px)")
    ax.set_ylabel("beam angle (deg)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return Path(path)


def save_trace_plot(path, trace, title: str = "") -> Path:
    """Accepted-confidence trajectory against query count."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    if trace:
        xs, ys = zip(*trace)
        ax.step(xs, ys, where="post")
    ax.set_xlabel("queries")
    ax.set_ylabel("confidence of clean label")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return Path(path)


def save_histogram(path, values, xlabel: str, title: str = "", bins: int = 20) -> Path:
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    if len(values):
        ax.hist(values, bins=bins)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return Path(path)


def save_image(path, image) -> Path:
    save_png(image, path)
    return Path(path)
