"""Shared fixtures: toy classifiers, planted search instances, tiny datasets."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from advbeam import BeamParams, ParamBounds, fuse, render_beam, top1
from advbeam.classifiers import ToySpec, make_toy_classifier
from advbeam.images import save_png
from advbeam.search import DEFAULT_UNITS

TOY_FRAME = 16


def grid_axes(lo: float, hi: float, unit: float) -> list[float]:
    """Inclusive unit-resolution grid over [lo, hi]."""
    n = int(round((hi - lo) / unit))
    if n <= 0:
        return [lo]
    return [lo + i * unit for i in range(n + 1)]


def grid_flip_search(image, classifier, bounds: ParamBounds):
    """Exhaustive unit-grid oracle: every flipping theta in the bounds box.

    Independent of the greedy search path; enumerates the full discretized
    parameter space and re-renders every cell.
    """
    units = [DEFAULT_UNITS[name] for name in
             ("wavelength_nm", "angle_deg", "intercept_px", "width_px", "intensity")]
    lo, hi = bounds.lower.as_array(), bounds.upper.as_array()
    axes = [grid_axes(l, h, u) for l, h, u in zip(lo, hi, units)]
    clean = top1(classifier.scores(image))
    height, width = image.shape[:2]
    flipping = []
    for vec in itertools.product(*axes):
        theta = BeamParams(*vec)
        scores = classifier.scores(fuse(image, render_beam(theta, width, height)))
        if top1(scores) != clean:
            flipping.append(theta)
    return flipping


def grid_flip_exists(image, classifier, bounds: ParamBounds) -> bool:
    units = [DEFAULT_UNITS[name] for name in
             ("wavelength_nm", "angle_deg", "intercept_px", "width_px", "intensity")]
    lo, hi = bounds.lower.as_array(), bounds.upper.as_array()
    axes = [grid_axes(l, h, u) for l, h, u in zip(lo, hi, units)]
    clean = top1(classifier.scores(image))
    height, width = image.shape[:2]
    for vec in itertools.product(*axes):
        theta = BeamParams(*vec)
        scores = classifier.scores(fuse(image, render_beam(theta, width, height)))
        if top1(scores) != clean:
            return True
    return False


@pytest.fixture
def black_image():
    return np.zeros((TOY_FRAME, TOY_FRAME, 3), dtype=np.float32)


@pytest.fixture
def blue_toy():
    """Class 1 wins once mean blue exceeds 0.05; class 0 otherwise."""
    return make_toy_classifier(
        ToySpec(
            weights=np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 40.0]]),
            biases=np.array([2.0, 0.0]),
            names=("background", "blue_glow"),
        )
    )


# Planted search instances on a black 16x16 image against `blue_toy`.
# The unsolvable ones are impossible by construction, not just empirically:
# beams from the 650-750 nm box add no blue at all, and intensity <= 0.01
# cannot lift the mean blue level past the 0.05 decision threshold.
SOLVABLE_BOUNDS = {
    "narrow_diagonal": ParamBounds(
        BeamParams(440, 45, 0, 3, 1.0), BeamParams(460, 45, 12, 3, 1.0)
    ),
    "angle_and_width": ParamBounds(
        BeamParams(450, 0, 8, 1, 0.8), BeamParams(450, 90, 8, 4, 1.0)
    ),
    "cyan_band": ParamBounds(
        BeamParams(470, 120, 0, 2, 1.0), BeamParams(500, 150, 10, 2, 1.0)
    ),
}
UNSOLVABLE_BOUNDS = {
    "red_only": ParamBounds(
        BeamParams(650, 45, 0, 1, 1.0), BeamParams(750, 45, 12, 5, 1.0)
    ),
    "too_faint": ParamBounds(
        BeamParams(440, 0, 5, 4, 0.0), BeamParams(470, 90, 5, 4, 0.01)
    ),
}


@pytest.fixture
def graded_toy_dataset():
    """100 images of graded difficulty for a red-vs-blue toy classifier.

    Image i carries a red level proportional to i, which raises the class-0
    logit and makes the blue-beam flip progressively harder; the hardest
    images are out of reach, so restart budget visibly matters.
    """
    classifier = make_toy_classifier(
        ToySpec(
            weights=np.array([[30.0, 0.0, 0.0], [0.0, 0.0, 40.0]]),
            biases=np.array([1.0, 0.0]),
            names=("background", "blue_glow"),
        )
    )
    bounds = ParamBounds(
        BeamParams(440, 0, 0, 1, 0.2), BeamParams(470, 179, 15, 4, 1.0)
    )
    rng = np.random.default_rng(1234)
    images = []
    for i in range(100):
        img = np.zeros((TOY_FRAME, TOY_FRAME, 3), dtype=np.float32)
        img[..., 0] = 0.55 * i / 99
        img += rng.uniform(0, 0.02, img.shape).astype(np.float32)
        images.append(np.clip(img, 0, 1).astype(np.float32))
    return classifier, bounds, images


def write_toy_dataset(root, classifier, images, labels=None):
    """Materialize images + manifest.csv under `root`; returns the CSV path."""
    root.mkdir(parents=True, exist_ok=True)
    rows = ["path,label"]
    for i, image in enumerate(images):
        label = labels[i] if labels is not None else top1(classifier.scores(image))
        save_png(image, root / f"img{i:03d}.png")
        rows.append(f"img{i:03d}.png,{label}")
    manifest = root / "manifest.csv"
    manifest.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return manifest


@pytest.fixture
def small_dataset(tmp_path, blue_toy):
    """Six-image dataset: three dark (attackable) and three blue images."""
    rng = np.random.default_rng(0)
    images, labels = [], []
    for i in range(6):
        if i % 2 == 0:
            img = rng.uniform(0.0, 0.03, (TOY_FRAME, TOY_FRAME, 3)).astype(np.float32)
            labels.append(0)
        else:
            img = np.zeros((TOY_FRAME, TOY_FRAME, 3), dtype=np.float32)
            img[..., 2] = 0.6
            labels.append(1)
        images.append(img)
    manifest = write_toy_dataset(tmp_path / "ds", blue_toy, images, labels)
    return manifest, images, labels


@pytest.fixture
def toy_bounds():
    return ParamBounds(
        BeamParams(430, 0, 0, 1, 0.2), BeamParams(480, 179, 15, 6, 1.0)
    )
