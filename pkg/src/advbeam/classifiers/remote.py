"""HTTP client for the remote scoring-service protocol.

Wire format: POST /v1/score with {"image": <base64 PNG>} returns
{"probs": [...], "top1": int, "model_id": str}; GET /v1/labels returns the
class-name table; GET /v1/meta declares the service's input frame.
"""

from __future__ import annotations

import base64
import io

import httpx
import numpy as np
from PIL import Image

from ..images import to_uint8
from .base import Classifier, TransportError


def encode_image_png(image: np.ndarray) -> str:
    """Base64 PNG payload for a [0, 1] float raster (8-bit quantized)."""
    buf = io.BytesIO()
    Image.fromarray(to_uint8(image), mode="RGB").save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


class RemoteClassifier(Classifier):
    """Scores images against a scoring service over HTTP.

    Transport failures and 5xx responses raise TransportError after
    `retries` additional attempts; 4xx responses raise ValueError since they
    mean the request itself was rejected.
    """

    def __init__(self, base_url: str, timeout: float = 30.0, retries: int = 2, transport=None):
        self.base_url = base_url.rstrip("/")
        self.retries = int(retries)
        self._client = httpx.Client(
            base_url=self.base_url, timeout=timeout, transport=transport
        )
        self._names: tuple[str, ...] | None = None
        self._num_classes: int | None = None
        self._frame: tuple[int, int] | None = None

    def close(self):
        self._client.close()

    def _request(self, method: str, path: str, **kwargs) -> httpx.Response:
        last_exc: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                response = self._client.request(method, path, **kwargs)
            except httpx.HTTPError as exc:
                last_exc = exc
                continue
            if response.status_code >= 500:
                last_exc = TransportError(
                    f"{method} {path} -> {response.status_code}: {response.text[:200]}"
                )
                continue
            return response
        raise TransportError(f"scoring service unreachable at {self.base_url}: {last_exc}")

    def scores(self, image: np.ndarray) -> np.ndarray:
        response = self._request("POST", "/v1/score", json={"image": encode_image_png(image)})
        if response.status_code != 200:
            raise ValueError(
                f"scoring service rejected the request "
                f"({response.status_code}): {response.text[:200]}"
            )
        probs = np.asarray(response.json()["probs"], dtype=np.float64)
        self._num_classes = probs.size
        return probs

    @property
    def num_classes(self) -> int:
        if self._num_classes is None:
            self._num_classes = len(self._labels())
        return self._num_classes

    def _labels(self) -> tuple[str, ...]:
        response = self._request("GET", "/v1/labels")
        if response.status_code != 200:
            raise TransportError(f"labels unavailable ({response.status_code})")
        return tuple(response.json())

    @property
    def class_names(self):
        if self._names is None:
            try:
                self._names = self._labels()
            except TransportError:
                return None
        return self._names

    def input_frame(self):
        if self._frame is None:
            try:
                response = self._request("GET", "/v1/meta")
            except TransportError:
                return None
            if response.status_code != 200:
                return None
            meta = response.json()
            size = meta.get("input_size")
            if size:
                self._frame = (int(size[0]), int(size[1]))
        return self._frame
