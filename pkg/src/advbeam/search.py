"""Greedy coordinate search over beam parameters with random restarts.

The attack minimizes the classifier's confidence in the clean top-1 class by
nudging one beam parameter at a time, keeping any move that does not increase
that confidence, and restarting from fresh random parameters when a descent
stalls.  Every candidate is clipped into the search box before it is scored,
and the run ends the moment any scored image is predicted off the clean label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .beam import PARAM_NAMES, BeamParams, ParamBounds, fuse, render_beam, sample_random_beam
from .classifiers.base import Classifier, CountingClassifier, top1

# "One unit" per searchable dimension.
DEFAULT_UNITS = {
    "wavelength_nm": 1.0,
    "angle_deg": 1.0,
    "intercept_px": 1.0,
    "width_px": 1.0,
    "intensity": 0.01,
}

DEFAULT_STEP_SIZES = (1.0, 2.0, 5.0, 10.0)


@dataclass(frozen=True)
class CandidateStep:
    """A single-dimension unit move, the basis element of the search."""

    dimension: str
    unit: float

    def __post_init__(self):
        if self.dimension not in PARAM_NAMES:
            raise ValueError(f"unknown dimension {self.dimension!r}")
        if not self.unit > 0:
            raise ValueError(f"unit must be positive, got {self.unit}")

    def as_vector(self) -> np.ndarray:
        vec = np.zeros(len(PARAM_NAMES))
        vec[PARAM_NAMES.index(self.dimension)] = self.unit
        return vec


def default_candidates(units: dict[str, float] | None = None) -> tuple[CandidateStep, ...]:
    units = dict(DEFAULT_UNITS, **(units or {}))
    return tuple(CandidateStep(name, units[name]) for name in PARAM_NAMES)


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of the restart search.

    Restart i draws its randomness from a stream keyed by (seed, i) alone, so
    raising `restarts` extends a run without changing earlier restarts.
    """

    bounds: ParamBounds
    candidates: tuple[CandidateStep, ...] = field(default_factory=default_candidates)
    step_sizes: tuple[float, ...] = DEFAULT_STEP_SIZES
    max_steps: int = 200
    restarts: int = 200
    seed: int = 0
    attenuation_distance: float | None = None  # None -> image diagonal

    def __post_init__(self):
        if not self.candidates:
            raise ValueError("candidate set must be non-empty")
        if not self.step_sizes or any(s <= 0 for s in self.step_sizes):
            raise ValueError("step sizes must be non-empty and positive")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")


@dataclass
class AttackOutcome:
    """What one attack run produced."""

    success: bool
    theta: BeamParams
    queries: int
    clean_label: int
    adv_label: int
    confidence_trace: tuple[tuple[int, float], ...]  # (query index, accepted confidence)
    restarts_used: int
    # Index into confidence_trace where each restart's segment begins.
    restart_starts: tuple[int, ...] = ()

    def trace_segments(self):
        """Per-restart slices of the confidence trace."""
        bounds = [*self.restart_starts, len(self.confidence_trace)]
        return [self.confidence_trace[a:b] for a, b in zip(bounds, bounds[1:])]

    def as_dict(self) -> dict:
        return {
            "success": self.success,
            "theta": dict(zip(PARAM_NAMES, self.theta.as_array().tolist())),
            "queries": self.queries,
            "clean_label": self.clean_label,
            "adv_label": self.adv_label,
            "confidence_trace": [[q, c] for q, c in self.confidence_trace],
            "restarts_used": self.restarts_used,
            "restart_starts": list(self.restart_starts),
        }


def clip_params(theta: BeamParams, bounds: ParamBounds) -> BeamParams:
    """Componentwise clamp into the search box."""
    vec = np.clip(theta.as_array(), bounds.lower.as_array(), bounds.upper.as_array())
    return BeamParams.from_array(vec)


def restart_rng(seed: int, restart: int, key: tuple[int, ...] = ()) -> np.random.Generator:
    """Random stream for one restart, derived from (seed, key, restart) only."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(*key, restart)))


def greedy_descent(
    image: np.ndarray,
    classifier: CountingClassifier,
    theta_init: BeamParams,
    clean_label: int,
    config: SearchConfig,
    rng: np.random.Generator,
    trace: list | None = None,
):
    """One greedy descent from `theta_init`.

    Evaluates +step before -step and skips the second direction once the
    first is accepted; a move is accepted when the clean-label confidence
    does not exceed the best seen in this descent.  Returns
    (theta, best_confidence, adv_label_or_None); a non-None label means some
    scored image flipped the prediction and `theta` is the flipping vector.
    """
    height, width = image.shape[:2]

    def evaluate(theta: BeamParams):
        layer = render_beam(theta, width, height, config.attenuation_distance)
        scores = classifier.scores(fuse(image, layer))
        return float(scores[clean_label]), top1(scores)

    theta = clip_params(theta_init, config.bounds)
    best, label = evaluate(theta)
    if trace is not None:
        trace.append((classifier.queries, best))
    if label != clean_label:
        return theta, best, label

    n_candidates, n_steps = len(config.candidates), len(config.step_sizes)
    theta_vec = theta.as_array()
    lower, upper = config.bounds.lower.as_array(), config.bounds.upper.as_array()

    for _ in range(config.max_steps):
        step = config.candidates[rng.integers(n_candidates)].as_vector()
        step = step * config.step_sizes[rng.integers(n_steps)]
        for sign in (1.0, -1.0):
            candidate_vec = np.clip(theta_vec + sign * step, lower, upper)
            candidate = BeamParams.from_array(candidate_vec)
            conf, label = evaluate(candidate)
            if label != clean_label:
                return candidate, conf, label
            if conf <= best:
                theta_vec, best = candidate_vec, conf
                if trace is not None:
                    trace.append((classifier.queries, best))
                break

    return BeamParams.from_array(theta_vec), best, None


def beam_attack(
    image: np.ndarray,
    classifier: Classifier,
    config: SearchConfig,
    seed_key: tuple[int, ...] = (),
) -> AttackOutcome:
    """Search beam parameters that flip the classifier's clean prediction.

    Queries the clean image once to fix the attacked label, then runs up to
    `config.restarts` greedy descents from independent uniform
    initializations.  Returns on the first prediction flip; otherwise reports
    failure with the lowest-confidence parameters seen anywhere in the run.
    Query count includes every score call, initializations included.

    `seed_key` namespaces the random streams so that batch drivers can give
    each image its own deterministic sequence.
    """
    counting = CountingClassifier(classifier)
    clean_label = top1(counting.scores(image))

    trace: list[tuple[int, float]] = []
    restart_starts: list[int] = []
    best_conf = math.inf
    best_theta: BeamParams | None = None

    for restart in range(config.restarts):
        rng = restart_rng(config.seed, restart, seed_key)
        theta_init = sample_random_beam(config.bounds, rng)
        restart_starts.append(len(trace))
        theta, conf, adv_label = greedy_descent(
            image, counting, theta_init, clean_label, config, rng, trace
        )
        if conf < best_conf:
            best_conf, best_theta = conf, theta
        if adv_label is not None:
            return AttackOutcome(
                success=True,
                theta=theta,
                queries=counting.queries,
                clean_label=clean_label,
                adv_label=adv_label,
                confidence_trace=tuple(trace),
                restarts_used=restart + 1,
                restart_starts=tuple(restart_starts),
            )

    return AttackOutcome(
        success=False,
        theta=best_theta,
        queries=counting.queries,
        clean_label=clean_label,
        adv_label=clean_label,
        confidence_trace=tuple(trace),
        restarts_used=config.restarts,
        restart_starts=tuple(restart_starts),
    )

