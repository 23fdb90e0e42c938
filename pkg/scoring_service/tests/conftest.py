"""Fixtures: a tiny TorchScript classifier and a configured service."""

import base64
import io

import numpy as np
import pytest

torch = pytest.importorskip("torch")

from fastapi.testclient import TestClient  # noqa: E402
from PIL import Image  # noqa: E402

from scoring_service import create_app  # noqa: E402

INPUT_SIZE = (16, 16)
NUM_CLASSES = 7


@pytest.fixture(scope="session")
def model_path(tmp_path_factory):
    torch.manual_seed(0)
    model = torch.nn.Sequential(
        torch.nn.Conv2d(3, 4, kernel_size=3, stride=2),
        torch.nn.ReLU(),
        torch.nn.AdaptiveAvgPool2d(1),
        torch.nn.Flatten(),
        torch.nn.Linear(4, NUM_CLASSES),
    ).eval()
    path = tmp_path_factory.mktemp("weights") / "tiny.pt"
    torch.jit.script(model).save(str(path))
    return path


@pytest.fixture(scope="session")
def labels_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("labels") / "labels.txt"
    path.write_text("".join(f"label_{i}\n" for i in range(NUM_CLASSES)), encoding="utf-8")
    return path


@pytest.fixture()
def app(model_path, labels_path):
    return create_app(
        model_path=str(model_path),
        labels_path=str(labels_path),
        input_size=INPUT_SIZE,
        mean=(0.5, 0.5, 0.5),
        std=(0.5, 0.5, 0.5),
    )


@pytest.fixture()
def client(app):
    return TestClient(app)


def encode_png(image: np.ndarray) -> str:
    buf = io.BytesIO()
    arr = np.clip(np.rint(np.asarray(image) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(arr, mode="RGB").save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


@pytest.fixture()
def sample_image():
    rng = np.random.default_rng(7)
    return rng.uniform(0, 1, (16, 16, 3)).astype(np.float32)
