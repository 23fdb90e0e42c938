"""Embedded model backends: ONNX (onnxruntime) and TorchScript (torch).

Both score through the same preprocessing path: resize to the declared frame,
per-channel normalize, NCHW float32 batch of one.
"""

from __future__ import annotations

import numpy as np

from .base import Classifier, TransportError, softmax
from .preprocess import PreprocessSpec


def _maybe_softmax(raw: np.ndarray, apply: bool) -> np.ndarray:
    vec = np.asarray(raw, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(vec)):
        raise TransportError("backend returned non-finite scores")
    return softmax(vec) if apply else vec


class OnnxClassifier(Classifier):
    """Scores images with an ONNX model file via onnxruntime."""

    def __init__(
        self,
        model_path,
        preprocess: PreprocessSpec = PreprocessSpec(),
        apply_softmax: bool = True,
        names: tuple[str, ...] | None = None,
    ):
        try:
            import onnxruntime
        except ImportError as exc:
            raise TransportError(
                "onnxruntime is not installed; install the 'onnx' extra to use ONNX models"
            ) from exc
        try:
            self._session = onnxruntime.InferenceSession(
                str(model_path), providers=["CPUExecutionProvider"]
            )
        except Exception as exc:
            raise TransportError(f"failed to load ONNX model {model_path}: {exc}") from exc
        self._input_name = self._session.get_inputs()[0].name
        self.preprocess = preprocess
        self.apply_softmax = apply_softmax
        self._names = tuple(names) if names else None
        self._num_classes: int | None = None
        shape = self._session.get_outputs()[0].shape
        if shape and isinstance(shape[-1], int):
            self._num_classes = int(shape[-1])

    @property
    def num_classes(self) -> int:
        if self._num_classes is None:
            raise TransportError("class count unknown until the first score call")
        return self._num_classes

    @property
    def class_names(self):
        return self._names

    def input_frame(self):
        return self.preprocess.size

    def scores(self, image: np.ndarray) -> np.ndarray:
        tensor = self.preprocess.apply(image)
        try:
            (raw,) = self._session.run(None, {self._input_name: tensor})
        except Exception as exc:
            raise TransportError(f"ONNX inference failed: {exc}") from exc
        out = _maybe_softmax(raw, self.apply_softmax)
        self._num_classes = out.size
        return out


class TorchScriptClassifier(Classifier):
    """Scores images with a TorchScript module (CPU, inference mode)."""

    def __init__(
        self,
        model_path,
        preprocess: PreprocessSpec = PreprocessSpec(),
        apply_softmax: bool = True,
        names: tuple[str, ...] | None = None,
    ):
        try:
            import torch
        except ImportError as exc:
            raise TransportError(
                "torch is not installed; install the 'torch' extra to use TorchScript models"
            ) from exc
        self._torch = torch
        try:
            self._module = torch.jit.load(str(model_path), map_location="cpu").eval()
        except Exception as exc:
            raise TransportError(f"failed to load TorchScript model {model_path}: {exc}") from exc
        self.preprocess = preprocess
        self.apply_softmax = apply_softmax
        self._names = tuple(names) if names else None
        self._num_classes: int | None = None

    @property
    def num_classes(self) -> int:
        if self._num_classes is None:
            raise TransportError("class count unknown until the first score call")
        return self._num_classes

    @property
    def class_names(self):
        return self._names

    def input_frame(self):
        return self.preprocess.size

    def scores(self, image: np.ndarray) -> np.ndarray:
        tensor = self.preprocess.apply(image)
        try:
            with self._torch.inference_mode():
                raw = self._module(self._torch.from_numpy(tensor)).numpy()
        except Exception as exc:
            raise TransportError(f"TorchScript inference failed: {exc}") from exc
        out = _maybe_softmax(raw, self.apply_softmax)
        self._num_classes = out.size
        return out


def load_embedded(model_path, preprocess: PreprocessSpec = PreprocessSpec(), **kwargs) -> Classifier:
    """Pick the embedded backend from the model file extension."""
    path = str(model_path)
    if path.endswith(".onnx"):
        return OnnxClassifier(path, preprocess, **kwargs)
    if path.endswith((".pt", ".pth", ".ts")):
        return TorchScriptClassifier(path, preprocess, **kwargs)
    raise ValueError(f"unrecognized model format: {path} (expected .onnx, .pt, .pth, or .ts)")
