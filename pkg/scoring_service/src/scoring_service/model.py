"""Model loading and inference for the scoring service.

Supports ONNX (via onnxruntime) and TorchScript (via torch) model files,
selected by extension.  Inputs are RGB rasters in [0, 1]; preprocessing is
resize + per-channel normalization into an NCHW float32 batch of one.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


class ModelLoadError(RuntimeError):
    pass


@dataclass(frozen=True)
class ModelInfo:
    model_id: str
    input_size: tuple[int, int]  # (width, height)
    mean: tuple[float, float, float]
    std: tuple[float, float, float]


class ScoringModel:
    """A loaded classifier returning softmax probabilities."""

    def __init__(self, path, info: ModelInfo):
        self.info = info
        self._run = self._load(Path(path))
        self.num_classes: int | None = None

    def _load(self, path: Path):
        if path.suffix == ".onnx":
            try:
                import onnxruntime
            except ImportError as exc:
                raise ModelLoadError("onnxruntime is required for .onnx models") from exc
            try:
                session = onnxruntime.InferenceSession(
                    str(path), providers=["CPUExecutionProvider"]
                )
            except Exception as exc:
                raise ModelLoadError(f"cannot load {path}: {exc}") from exc
            input_name = session.get_inputs()[0].name
            return lambda tensor: session.run(None, {input_name: tensor})[0]
        if path.suffix in (".pt", ".pth", ".ts"):
            try:
                import torch
            except ImportError as exc:
                raise ModelLoadError("torch is required for TorchScript models") from exc
            try:
                module = torch.jit.load(str(path), map_location="cpu").eval()
            except Exception as exc:
                raise ModelLoadError(f"cannot load {path}: {exc}") from exc

            def run(tensor):
                with torch.inference_mode():
                    return module(torch.from_numpy(tensor)).numpy()

            return run
        raise ModelLoadError(f"unsupported model format: {path.name}")

    def preprocess(self, image: np.ndarray) -> np.ndarray:
        width, height = self.info.input_size
        arr = np.asarray(image, dtype=np.float32)
        if arr.shape[1] != width or arr.shape[0] != height:
            arr = cv2.resize(arr, (width, height), interpolation=cv2.INTER_LINEAR)
        arr = (arr - np.asarray(self.info.mean, dtype=np.float32)) / np.asarray(
            self.info.std, dtype=np.float32
        )
        return np.ascontiguousarray(arr.transpose(2, 0, 1)[None, ...], dtype=np.float32)

    def probabilities(self, image: np.ndarray) -> np.ndarray:
        logits = np.asarray(self._run(self.preprocess(image)), dtype=np.float64).reshape(-1)
        shifted = logits - logits.max()
        exp = np.exp(shifted)
        probs = exp / exp.sum()
        self.num_classes = probs.size
        return probs
