"""Model input preprocessing: resize + per-channel normalization, NCHW."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..images import resize_image
from .base import check_scorable

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


@dataclass(frozen=True)
class PreprocessSpec:
    """How a backend wants its input tensor.

    size is (width, height).  Beams are rendered in this post-resize frame,
    so beam coordinates are model-input coordinates.
    """

    size: tuple[int, int] = (224, 224)
    mean: tuple[float, float, float] = IMAGENET_MEAN
    std: tuple[float, float, float] = IMAGENET_STD

    def __post_init__(self):
        if len(self.size) != 2 or min(self.size) < 1:
            raise ValueError(f"invalid input size {self.size}")
        if any(s <= 0 for s in self.std):
            raise ValueError("std components must be positive")

    def apply(self, image: np.ndarray) -> np.ndarray:
        """Produce a (1, 3, H, W) float32 tensor from a [0, 1] RGB raster."""
        arr = check_scorable(image)
        arr = resize_image(arr, self.size)
        mean = np.asarray(self.mean, dtype=np.float32)
        std = np.asarray(self.std, dtype=np.float32)
        normalized = (arr - mean) / std
        return np.ascontiguousarray(normalized.transpose(2, 0, 1)[None, ...], dtype=np.float32)
