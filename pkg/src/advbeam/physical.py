"""Physical adaptation: attack transformed copies, aggregate parameter ranges.

An exact beam layout is hard to reproduce with a handheld pointer, so the
attack runs over a batch of randomly rotated/translated/noised copies of the
image and the successful parameter vectors are collapsed into per-dimension
envelopes that guide real-world aiming.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import cv2
import numpy as np

from .beam import PARAM_NAMES, BeamParams
from .classifiers.base import Classifier
from .images import validate_image
from .search import AttackOutcome, SearchConfig, beam_attack


@dataclass(frozen=True)
class TransformSpec:
    """Random transform distribution for one batch.

    rotation_deg / translation_px are half-ranges of uniform draws centered
    at zero; noise_std is the per-channel standard deviation of zero-mean
    uniform additive noise, in normalized intensity units.
    """

    rotation_deg: float = 0.0
    translation_px: float = 0.0
    noise_std: float = 0.0
    batch_size: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.rotation_deg < 0 or self.translation_px < 0 or self.noise_std < 0:
            raise ValueError("transform ranges must be non-negative")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


@dataclass(frozen=True)
class EffectiveRange:
    """Componentwise envelope of the successful parameter vectors."""

    lower: BeamParams
    upper: BeamParams
    support: int  # number of successful attacks aggregated

    def as_dict(self) -> dict:
        return {
            "support": self.support,
            "lower": dict(zip(PARAM_NAMES, self.lower.as_array().tolist())),
            "upper": dict(zip(PARAM_NAMES, self.upper.as_array().tolist())),
        }


@dataclass
class RobustAttackResult:
    outcomes: list[AttackOutcome]
    transformed: list[np.ndarray]
    effective_range: EffectiveRange | None
    errors: list[tuple[int, str]]


def _item_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def transform_one(image: np.ndarray, spec: TransformSpec, rng: np.random.Generator) -> np.ndarray:
    """One random rotation + translation + additive noise, clipped to [0, 1]."""
    image = validate_image(image)
    angle = float(rng.uniform(-spec.rotation_deg, spec.rotation_deg))
    dx = float(rng.uniform(-spec.translation_px, spec.translation_px))
    dy = float(rng.uniform(-spec.translation_px, spec.translation_px))

    out = image
    if angle != 0.0 or dx != 0.0 or dy != 0.0:
        height, width = image.shape[:2]
        center = ((width - 1) / 2.0, (height - 1) / 2.0)
        matrix = cv2.getRotationMatrix2D(center, angle, 1.0)
        matrix[:, 2] += (dx, dy)
        out = cv2.warpAffine(
            image,
            matrix,
            (width, height),
            flags=cv2.INTER_LINEAR,
            borderMode=cv2.BORDER_REPLICATE,
        )

    if spec.noise_std > 0:
        half_range = spec.noise_std * math.sqrt(3.0)  # uniform with the requested std
        noise = rng.uniform(-half_range, half_range, size=out.shape).astype(np.float32)
        out = out + noise

    return np.clip(out, 0.0, 1.0).astype(np.float32)


def transform_batch(image: np.ndarray, spec: TransformSpec) -> list[np.ndarray]:
    """`spec.batch_size` independent random transforms; deterministic per seed."""
    return [transform_one(image, spec, _item_rng(spec.seed, i)) for i in range(spec.batch_size)]


def effective_range_of(outcomes) -> EffectiveRange | None:
    """Componentwise min/max over successful outcomes; None without successes."""
    vectors = [o.theta.as_array() for o in outcomes if o.success]
    if not vectors:
        return None
    stack = np.stack(vectors)
    return EffectiveRange(
        lower=BeamParams.from_array(stack.min(axis=0)),
        upper=BeamParams.from_array(stack.max(axis=0)),
        support=len(vectors),
    )


def robust_attack(
    image: np.ndarray,
    classifier: Classifier,
    config: SearchConfig,
    spec: TransformSpec,
) -> RobustAttackResult:
    """Attack every transformed copy and aggregate the successful parameters.

    Per-item failures are recorded and do not abort the remaining items.
    Item i's attack draws randomness from streams keyed by (config.seed, i).
    """
    batch = transform_batch(image, spec)
    outcomes: list[AttackOutcome] = []
    errors: list[tuple[int, str]] = []
    for i, transformed in enumerate(batch):
        try:
            outcomes.append(beam_attack(transformed, classifier, config, seed_key=(i,)))
        except Exception as exc:  # noqa: BLE001 - per-item isolation is the contract
            errors.append((i, f"{type(exc).__name__}: {exc}"))
    return RobustAttackResult(
        outcomes=outcomes,
        transformed=batch,
        effective_range=effective_range_of(outcomes),
        errors=errors,
    )
