"""Score-only classifier contract shared by every backend.

The attack sees classifiers exclusively through `scores`: one confidence per
class for one image.  No gradients, no internals.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from ..images import validate_image


class TransportError(RuntimeError):
    """Backend unavailable: remote timeout/refusal or model load failure.

    Distinct from ValueError so callers can tell infrastructure faults from
    contract violations; the search propagates it rather than swallowing it.
    """


class Classifier(ABC):
    """A black-box image classifier exposing per-class confidence scores."""

    @property
    @abstractmethod
    def num_classes(self) -> int: ...

    @abstractmethod
    def scores(self, image: np.ndarray) -> np.ndarray:
        """Score one (H, W, 3) float image in [0, 1]; returns a length-K vector."""

    @property
    def class_names(self) -> tuple[str, ...] | None:
        return None

    def input_frame(self) -> tuple[int, int] | None:
        """Native (width, height) the backend scores at, if it has one."""
        return None

    def name_of(self, label: int) -> str:
        names = self.class_names
        if names is not None and 0 <= label < len(names):
            return names[label]
        return f"class_{label}"


def top1(scores: np.ndarray) -> int:
    """Index of the highest score; ties resolve to the lowest index."""
    scores = np.asarray(scores)
    if scores.size == 0:
        raise ValueError("empty score vector")
    return int(np.argmax(scores))


def topk(scores: np.ndarray, k: int) -> tuple[int, ...]:
    """Indices of the k highest scores, best first, ties by lowest index."""
    scores = np.asarray(scores)
    if scores.size == 0:
        raise ValueError("empty score vector")
    order = np.argsort(-scores, kind="stable")
    return tuple(int(i) for i in order[: min(k, scores.size)])


def softmax(logits: np.ndarray) -> np.ndarray:
    logits = np.asarray(logits, dtype=np.float64)
    shifted = logits - logits.max()
    exp = np.exp(shifted)
    return exp / exp.sum()


class CountingClassifier(Classifier):
    """Wrapper that counts every score call; the attack's query meter."""

    def __init__(self, inner: Classifier):
        self.inner = inner
        self.queries = 0

    @property
    def num_classes(self) -> int:
        return self.inner.num_classes

    @property
    def class_names(self):
        return self.inner.class_names

    def input_frame(self):
        return self.inner.input_frame()

    def scores(self, image: np.ndarray) -> np.ndarray:
        out = self.inner.scores(image)
        self.queries += 1
        return out


def check_scorable(image: np.ndarray) -> np.ndarray:
    """Shared input validation for backends: RGB raster, finite values."""
    arr = validate_image(image)
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite values")
    return arr
