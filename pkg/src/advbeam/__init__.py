"""Black-box adversarial laser-beam attack toolkit."""

from .beam import (
    BeamParams,
    ParamBounds,
    beam_geometry,
    fuse,
    render_beam,
    sample_random_beam,
)
from .classifiers import (
    Classifier,
    CountingClassifier,
    OnnxClassifier,
    PreprocessSpec,
    RemoteClassifier,
    TorchScriptClassifier,
    ToyClassifier,
    ToySpec,
    TransportError,
    load_embedded,
    make_toy_classifier,
    top1,
    topk,
)
from .images import load_image, resize_image, save_png
from .physical import (
    EffectiveRange,
    RobustAttackResult,
    TransformSpec,
    robust_attack,
    transform_batch,
)
from .search import (
    AttackOutcome,
    CandidateStep,
    SearchConfig,
    beam_attack,
    clip_params,
    greedy_descent,
)
from .spectrum import wavelength_to_rgb

__version__ = "0.1.0"

__all__ = [
    "BeamParams",
    "ParamBounds",
    "beam_geometry",
    "fuse",
    "render_beam",
    "sample_random_beam",
    "Classifier",
    "CountingClassifier",
    "OnnxClassifier",
    "PreprocessSpec",
    "RemoteClassifier",
    "TorchScriptClassifier",
    "ToyClassifier",
    "ToySpec",
    "TransportError",
    "load_embedded",
    "make_toy_classifier",
    "top1",
    "topk",
    "load_image",
    "resize_image",
    "save_png",
    "EffectiveRange",
    "RobustAttackResult",
    "TransformSpec",
    "robust_attack",
    "transform_batch",
    "AttackOutcome",
    "CandidateStep",
    "SearchConfig",
    "beam_attack",
    "clip_params",
    "greedy_descent",
    "wavelength_to_rgb",
    "__version__",
]
