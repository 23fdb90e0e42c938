"""Image buffers and file I/O.

Images are numpy float32 arrays of shape (height, width, 3) with RGB channel
values in [0, 1].  8-bit files are divided by 255 on ingestion and rounded to
the nearest level on export.
"""

from __future__ import annotations

import numpy as np
from PIL import Image

import cv2


def load_image(path, frame: tuple[int, int] | None = None) -> np.ndarray:
    """Load a PNG/JPEG file as a float32 RGB buffer, optionally resized.

    `frame` is (width, height); resizing uses bilinear interpolation.
    """
    with Image.open(path) as img:
        arr = np.asarray(img.convert("RGB"), dtype=np.float32) / 255.0
    if frame is not None:
        arr = resize_image(arr, frame)
    return arr


def resize_image(image: np.ndarray, frame: tuple[int, int]) -> np.ndarray:
    """Bilinear-resize to (width, height); no-op when already that size."""
    width, height = int(frame[0]), int(frame[1])
    if image.shape[1] == width and image.shape[0] == height:
        return image
    out = cv2.resize(image, (width, height), interpolation=cv2.INTER_LINEAR)
    return np.ascontiguousarray(out, dtype=np.float32)


def to_uint8(image: np.ndarray) -> np.ndarray:
    """Quantize a [0, 1] float buffer to uint8 by rounding to nearest."""
    return np.clip(np.rint(np.asarray(image) * 255.0), 0, 255).astype(np.uint8)


def from_uint8(image: np.ndarray) -> np.ndarray:
    return np.asarray(image, dtype=np.float32) / 255.0


def save_png(image: np.ndarray, path) -> None:
    """Export a float buffer to an 8-bit PNG file."""
    Image.fromarray(to_uint8(image), mode="RGB").save(path, format="PNG")


def validate_image(image: np.ndarray) -> np.ndarray:
    """Check an array is a (H, W, 3) float raster; returns it as float32."""
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an RGB raster of shape (H, W, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"empty raster {arr.shape}")
    return arr.astype(np.float32, copy=False)
