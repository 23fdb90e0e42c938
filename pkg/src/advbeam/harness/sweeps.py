"""Ablation sweeps: fixed-beam parameter sweeps, layout grids, restart budgets.

Fixed-beam sweeps apply one predetermined beam to every image with no search
and measure the top-1 flip rate over correctly classified images; only the
restart sweep runs the full attack.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..beam import PARAM_NAMES, BeamParams, ParamBounds, fuse, render_beam
from ..classifiers.base import Classifier, top1
from ..images import load_image
from ..search import SearchConfig
from .evaluate import DEFAULT_FRAME, EvalReport, run_eval
from .manifest import DatasetManifest

# Fixed companions for the one-dimensional sweeps.
WAVELENGTH_SWEEP_VALUES = (380.0, 480.0, 580.0, 680.0)
WAVELENGTH_SWEEP_BASE = BeamParams(580.0, 45.0, 0.0, 20.0, 1.0)
WIDTH_SWEEP_VALUES = (1.0, 5.0, 10.0, 20.0, 30.0, 40.0)
WIDTH_SWEEP_BASE = BeamParams(400.0, 30.0, 50.0, 20.0, 1.0)
LAYOUT_BASE = BeamParams(580.0, 0.0, 0.0, 20.0, 1.0)
RESTART_SWEEP_VALUES = (1, 50, 100, 200)


@dataclass(frozen=True)
class SweepSpec:
    """One swept beam dimension over explicit values, everything else fixed."""

    dimension: str
    values: tuple[float, ...]
    base: BeamParams

    def __post_init__(self):
        if self.dimension not in PARAM_NAMES:
            raise ValueError(f"unknown sweep dimension {self.dimension!r}")
        if not self.values:
            raise ValueError("sweep needs at least one value")

    def theta_at(self, value: float) -> BeamParams:
        return self.base.replace(**{self.dimension: float(value)})


@dataclass
class SweepRow:
    value: float
    flips: int
    attempted: int

    @property
    def success_rate(self) -> float | None:
        return 100.0 * self.flips / self.attempted if self.attempted else None

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "flips": self.flips,
            "attempted": self.attempted,
            "success_rate": self.success_rate,
        }


class CleanPass:
    """Loads each manifest image once and caches the clean predictions."""

    def __init__(self, manifest: DatasetManifest, classifier: Classifier, frame):
        self.frame = frame
        self.images: list[np.ndarray] = []
        self.labels: list[int] = []
        for entry in manifest.entries:
            image = load_image(entry.resolved, frame)
            if top1(classifier.scores(image)) == entry.label:
                self.images.append(image)
                self.labels.append(entry.label)

    def __len__(self) -> int:
        return len(self.images)


def fixed_beam_flip_rate(theta: BeamParams, clean: CleanPass, classifier: Classifier) -> SweepRow:
    """Fuse one beam into every correctly classified image and count flips."""
    width, height = clean.frame
    layer = render_beam(theta, width, height)
    flips = 0
    for image, label in zip(clean.images, clean.labels):
        if top1(classifier.scores(fuse(image, layer))) != label:
            flips += 1
    return SweepRow(value=float("nan"), flips=flips, attempted=len(clean))


def sweep_fixed_beam(
    spec: SweepSpec,
    manifest: DatasetManifest,
    classifier: Classifier,
    frame: tuple[int, int] | None = None,
    bounds: ParamBounds | None = None,
) -> list[SweepRow]:
    """Flip rate of one fixed beam per swept value, no search involved."""
    frame = frame or classifier.input_frame() or DEFAULT_FRAME
    if bounds is not None:
        for value in spec.values:
            if not bounds.contains(spec.theta_at(value)):
                raise ValueError(f"swept value {value} leaves the configured bounds")
    clean = CleanPass(manifest, classifier, frame)
    rows = []
    for value in spec.values:
        row = fixed_beam_flip_rate(spec.theta_at(value), clean, classifier)
        row.value = float(value)
        rows.append(row)
    return rows


@dataclass
class LayoutGrid:
    """Flip rates over an (angle, intercept) grid; rates[i][j] pairs
    angles[i] with intercepts[j]."""

    angles: tuple[float, ...]
    intercepts: tuple[float, ...]
    rates: np.ndarray
    attempted: int

    def as_dict(self) -> dict:
        return {
            "angles": list(self.angles),
            "intercepts": list(self.intercepts),
            "attempted": self.attempted,
            "rates": [[None if np.isnan(v) else float(v) for v in row] for row in self.rates],
        }


def layout_heatmap(
    angles,
    intercepts,
    manifest: DatasetManifest,
    classifier: Classifier,
    base: BeamParams = LAYOUT_BASE,
    frame: tuple[int, int] | None = None,
) -> LayoutGrid:
    """Dense fixed-beam flip-rate grid over beam angle and intercept."""
    angles = tuple(float(a) for a in angles)
    intercepts = tuple(float(b) for b in intercepts)
    if not angles or not intercepts:
        raise ValueError("layout grid axes must be non-empty")
    if min(angles) < 0 or max(angles) > 180:
        raise ValueError("angles must lie within [0, 180] degrees")
    frame = frame or classifier.input_frame() or DEFAULT_FRAME
    clean = CleanPass(manifest, classifier, frame)
    rates = np.full((len(angles), len(intercepts)), np.nan)
    for i, angle in enumerate(angles):
        for j, intercept in enumerate(intercepts):
            theta = base.replace(angle_deg=angle, intercept_px=intercept)
            row = fixed_beam_flip_rate(theta, clean, classifier)
            if row.attempted:
                rates[i, j] = row.success_rate
    return LayoutGrid(angles=angles, intercepts=intercepts, rates=rates, attempted=len(clean))


def default_layout_axes(
    frame: tuple[int, int], angle_points: int = 19, intercept_points: int = 21
):
    """Angle axis over [0, 180] and intercept axis over [0, frame height]."""
    angles = tuple(np.linspace(0.0, 180.0, int(angle_points)))
    intercepts = tuple(np.linspace(0.0, float(frame[1]), int(intercept_points)))
    return angles, intercepts


def sweep_restarts(
    k_values,
    manifest: DatasetManifest,
    classifier: Classifier,
    config: SearchConfig,
    frame: tuple[int, int] | None = None,
) -> list[tuple[int, EvalReport]]:
    """Evaluate the attack per restart budget with shared per-image seeds.

    Restart streams depend only on (seed, image index, restart index), so a
    larger budget extends a smaller one and its success rate can never drop.
    """
    k_values = [int(k) for k in k_values]
    if any(k < 1 for k in k_values):
        raise ValueError("restart budgets must be >= 1")
    return [
        (k, run_eval(manifest, classifier, replace(config, restarts=k), frame))
        for k in k_values
    ]
