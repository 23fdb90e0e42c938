from .base import (
    Classifier,
    CountingClassifier,
    TransportError,
    softmax,
    top1,
    topk,
)
from .embedded import OnnxClassifier, TorchScriptClassifier, load_embedded
from .preprocess import IMAGENET_MEAN, IMAGENET_STD, PreprocessSpec
from .remote import RemoteClassifier, encode_image_png
from .toy import (
    ToyClassifier,
    ToySpec,
    blue_sensitive_spec,
    constant_spec,
    make_toy_classifier,
)

__all__ = [
    "Classifier",
    "CountingClassifier",
    "TransportError",
    "softmax",
    "top1",
    "topk",
    "OnnxClassifier",
    "TorchScriptClassifier",
    "load_embedded",
    "IMAGENET_MEAN",
    "IMAGENET_STD",
    "PreprocessSpec",
    "RemoteClassifier",
    "encode_image_png",
    "ToyClassifier",
    "ToySpec",
    "blue_sensitive_spec",
    "constant_spec",
    "make_toy_classifier",
]
