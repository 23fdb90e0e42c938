"""TOML configuration: [bounds], [search], [transforms], [preprocess].

Every report embeds the resolved configuration via AppConfig.snapshot(), so
a run can be reproduced from its own output.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .beam import PARAM_NAMES, BeamParams, ParamBounds
from .classifiers.preprocess import PreprocessSpec
from .physical import TransformSpec
from .search import DEFAULT_STEP_SIZES, DEFAULT_UNITS, SearchConfig, default_candidates

# [bounds] keys are short dimension names; they map onto BeamParams fields.
BOUND_KEYS = {
    "wavelength": "wavelength_nm",
    "angle": "angle_deg",
    "intercept": "intercept_px",
    "width": "width_px",
    "intensity": "intensity",
}


@dataclass(frozen=True)
class AppConfig:
    preprocess: PreprocessSpec
    search: SearchConfig
    transforms: TransformSpec
    sweep: dict = field(default_factory=dict)
    labels_path: str | None = None

    @property
    def frame(self) -> tuple[int, int]:
        return self.preprocess.size

    def with_seed(self, seed: int | None) -> "AppConfig":
        if seed is None:
            return self
        return replace(
            self,
            search=replace(self.search, seed=int(seed)),
            transforms=replace(self.transforms, seed=int(seed)),
        )

    def snapshot(self) -> dict:
        """Resolved configuration as a plain dict for report embedding."""
        bounds = self.search.bounds
        return {
            "preprocess": {
                "size": list(self.preprocess.size),
                "mean": list(self.preprocess.mean),
                "std": list(self.preprocess.std),
            },
            "bounds": {
                short: [
                    getattr(bounds.lower, fieldname),
                    getattr(bounds.upper, fieldname),
                ]
                for short, fieldname in BOUND_KEYS.items()
            },
            "search": {
                "max_steps": self.search.max_steps,
                "restarts": self.search.restarts,
                "step_sizes": list(self.search.step_sizes),
                "units": {c.dimension: c.unit for c in self.search.candidates},
                "seed": self.search.seed,
                "attenuation_distance": self.search.attenuation_distance,
            },
            "transforms": {
                "rotation_deg": self.transforms.rotation_deg,
                "translation_px": self.transforms.translation_px,
                "noise_std": self.transforms.noise_std,
                "batch_size": self.transforms.batch_size,
                "seed": self.transforms.seed,
            },
            "sweep": dict(self.sweep),
            "labels": self.labels_path,
        }


def _parse_size(raw) -> tuple[int, int]:
    if isinstance(raw, (int, float)):
        return (int(raw), int(raw))
    if isinstance(raw, (list, tuple)) and len(raw) == 2:
        return (int(raw[0]), int(raw[1]))
    raise ValueError(f"[preprocess] size must be an int or [width, height], got {raw!r}")


def _parse_bounds(section: dict, frame: tuple[int, int]) -> ParamBounds:
    default = ParamBounds.default(frame)
    lower = {name: getattr(default.lower, name) for name in PARAM_NAMES}
    upper = {name: getattr(default.upper, name) for name in PARAM_NAMES}
    for key, raw in section.items():
        if key not in BOUND_KEYS:
            raise ValueError(f"unknown [bounds] key {key!r}")
        if not isinstance(raw, (list, tuple)) or len(raw) != 2:
            raise ValueError(f"[bounds] {key} must be a [min, max] pair")
        fieldname = BOUND_KEYS[key]
        lower[fieldname], upper[fieldname] = float(raw[0]), float(raw[1])
    return ParamBounds(lower=BeamParams(**lower), upper=BeamParams(**upper))


def load_config(path=None, seed: int | None = None) -> AppConfig:
    """Build the resolved configuration, optionally from a TOML file.

    `seed` overrides both the search and transform seeds when given.
    """
    data: dict = {}
    if path is not None:
        with open(Path(path), "rb") as fh:
            data = tomllib.load(fh)

    pre = data.get("preprocess", {})
    preprocess = PreprocessSpec(
        size=_parse_size(pre.get("size", 224)),
        mean=tuple(float(v) for v in pre.get("mean", PreprocessSpec().mean)),
        std=tuple(float(v) for v in pre.get("std", PreprocessSpec().std)),
    )

    bounds = _parse_bounds(data.get("bounds", {}), preprocess.size)

    s = data.get("search", {})
    units = dict(DEFAULT_UNITS)
    units.update({BOUND_KEYS.get(k, k): float(v) for k, v in s.get("units", {}).items()})
    search = SearchConfig(
        bounds=bounds,
        candidates=default_candidates(units),
        step_sizes=tuple(float(v) for v in s.get("step_sizes", DEFAULT_STEP_SIZES)),
        max_steps=int(s.get("max_steps", 200)),
        restarts=int(s.get("restarts", 200)),
        seed=int(s.get("seed", 0)),
        attenuation_distance=(
            float(s["attenuation_distance"]) if "attenuation_distance" in s else None
        ),
    )

    t = data.get("transforms", {})
    transforms = TransformSpec(
        rotation_deg=float(t.get("rotation_deg", 5.0)),
        translation_px=float(t.get("translation_px", 8.0)),
        noise_std=float(t.get("noise_std", 0.02)),
        batch_size=int(t.get("batch_size", 8)),
        seed=int(t.get("seed", search.seed)),
    )

    config = AppConfig(
        preprocess=preprocess,
        search=search,
        transforms=transforms,
        sweep=dict(data.get("sweep", {})),
        labels_path=data.get("dataset", {}).get("labels"),
    )
    return config.with_seed(seed)
