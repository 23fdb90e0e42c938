"""Analytic toy classifier for oracle testing.

Logits are affine in the image's per-channel mean intensities, so the full
response surface over beam parameters can be enumerated exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import Classifier, check_scorable, softmax


@dataclass(frozen=True)
class ToySpec:
    """K affine logit rules over (mean_R, mean_G, mean_B)."""

    weights: np.ndarray  # (K, 3)
    biases: np.ndarray  # (K,)
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        b = np.asarray(self.biases, dtype=np.float64)
        if w.ndim != 2 or w.shape[1] != 3:
            raise ValueError(f"weights must have shape (K, 3), got {w.shape}")
        if w.shape[0] < 2:
            raise ValueError("a toy classifier needs at least 2 classes")
        if b.shape != (w.shape[0],):
            raise ValueError("biases must have shape (K,)")
        if self.names is not None and len(self.names) != w.shape[0]:
            raise ValueError("names length must match the class count")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "biases", b)


class ToyClassifier(Classifier):
    """Deterministic, side-effect-free classifier over channel means."""

    def __init__(self, spec: ToySpec):
        self.spec = spec

    @property
    def num_classes(self) -> int:
        return self.spec.weights.shape[0]

    @property
    def class_names(self):
        return self.spec.names

    def channel_means(self, image: np.ndarray) -> np.ndarray:
        arr = check_scorable(image)
        return arr.reshape(-1, 3).mean(axis=0, dtype=np.float64)

    def logits(self, image: np.ndarray) -> np.ndarray:
        return self.spec.weights @ self.channel_means(image) + self.spec.biases

    def scores(self, image: np.ndarray) -> np.ndarray:
        return softmax(self.logits(image))


def make_toy_classifier(spec: ToySpec) -> ToyClassifier:
    return ToyClassifier(spec)


def blue_sensitive_spec(gain: float = 40.0, margin: float = 2.0) -> ToySpec:
    """Two classes; class 1 wins once the mean blue level exceeds margin/gain."""
    return ToySpec(
        weights=np.array([[0.0, 0.0, 0.0], [0.0, 0.0, gain]]),
        biases=np.array([margin, 0.0]),
        names=("background", "blue_glow"),
    )


def constant_spec(num_classes: int = 2) -> ToySpec:
    """Scores independent of the image; top-1 is always class 0."""
    return ToySpec(
        weights=np.zeros((num_classes, 3)),
        biases=np.zeros(num_classes),
    )
