"""Parametric laser-beam layers and image fusion.

A beam is a straight line y = tan(angle) * x + intercept swept across the
raster with a finite width, a single spectral color, an intensity scale, and
an inverse-square falloff along the propagation direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .images import validate_image
from .spectrum import VISIBLE_MAX_NM, VISIBLE_MIN_NM, wavelength_to_rgb

# Below this |cos(angle)| the line is treated as vertical, x = intercept.
VERTICAL_COS_EPS = 1e-6

PARAM_NAMES = ("wavelength_nm", "angle_deg", "intercept_px", "width_px", "intensity")


@dataclass(frozen=True)
class BeamParams:
    """The five-dimensional beam parameter vector the search optimizes.

    wavelength_nm: spectral color, visible range [380, 750]
    angle_deg:     line angle in [0, 180] (180 is equivalent to 0)
    intercept_px:  y-intercept in pixels; x-intercept for near-vertical lines
    width_px:      beam width in pixels, > 0
    intensity:     additive strength in [0, 1]
    """

    wavelength_nm: float
    angle_deg: float
    intercept_px: float
    width_px: float
    intensity: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.wavelength_nm, self.angle_deg, self.intercept_px, self.width_px, self.intensity],
            dtype=np.float64,
        )

    @classmethod
    def from_array(cls, vec) -> "BeamParams":
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (5,):
            raise ValueError(f"expected a 5-vector, got shape {vec.shape}")
        return cls(*(float(v) for v in vec))

    def replace(self, **kwargs) -> "BeamParams":
        fields = {name: getattr(self, name) for name in PARAM_NAMES}
        fields.update(kwargs)
        return BeamParams(**fields)


@dataclass(frozen=True)
class ParamBounds:
    """Componentwise box constraint on BeamParams."""

    lower: BeamParams
    upper: BeamParams

    def __post_init__(self):
        lo, hi = self.lower.as_array(), self.upper.as_array()
        if np.any(lo > hi):
            bad = [name for name, l, h in zip(PARAM_NAMES, lo, hi) if l > h]
            raise ValueError(f"degenerate bounds (min > max) for {', '.join(bad)}")
        if (
            self.lower.wavelength_nm < VISIBLE_MIN_NM
            or self.upper.wavelength_nm > VISIBLE_MAX_NM
        ):
            raise ValueError("wavelength bounds must lie within [380, 750] nm")

    def contains(self, theta: BeamParams, atol: float = 1e-9) -> bool:
        vec = theta.as_array()
        return bool(
            np.all(vec >= self.lower.as_array() - atol)
            and np.all(vec <= self.upper.as_array() + atol)
        )

    @classmethod
    def default(cls, frame: tuple[int, int] = (224, 224)) -> "ParamBounds":
        """Reasonable search box for a given (width, height) raster frame."""
        width, height = frame
        return cls(
            lower=BeamParams(380.0, 0.0, 0.0, 1.0, 0.05),
            upper=BeamParams(750.0, 180.0, float(height), max(1.0, width / 10.0), 1.0),
        )


def _line_frame(angle_deg: float, intercept_px: float):
    """Anchor point and unit direction of the beam line."""
    rad = math.radians(angle_deg)
    cos_r, sin_r = math.cos(rad), math.sin(rad)
    if abs(cos_r) < VERTICAL_COS_EPS:
        # Vertical convention: x = intercept, traversed upward in y.
        return (intercept_px, 0.0), (0.0, 1.0)
    return (0.0, intercept_px), (cos_r, sin_r)


def _entry_parameter(anchor, direction, width: int, height: int) -> float:
    """Line parameter of the first intersection with the pixel rectangle.

    The rectangle is [0, width-1] x [0, height-1].  Falls back to the anchor
    (t = 0) when the line misses the rectangle entirely.
    """
    t_lo, t_hi = -math.inf, math.inf
    for a, d, hi in ((anchor[0], direction[0], width - 1), (anchor[1], direction[1], height - 1)):
        if abs(d) < 1e-12:
            if not 0.0 <= a <= hi:
                return 0.0
            continue
        t0, t1 = (0.0 - a) / d, (hi - a) / d
        if t0 > t1:
            t0, t1 = t1, t0
        t_lo, t_hi = max(t_lo, t0), min(t_hi, t1)
    if t_lo > t_hi or not math.isfinite(t_lo):
        return 0.0
    return t_lo


def beam_geometry(
    point: tuple[float, float],
    angle_deg: float,
    intercept_px: float,
    frame: tuple[int, int] | None = None,
) -> tuple[float, float]:
    """Perpendicular and along-line distances of a pixel from the beam line.

    The along distance is measured from where the line first enters the
    `frame` rectangle (traversing in direction (cos angle, sin angle)) and is
    clamped at zero; without a frame it is measured from the line's anchor
    point.  Both returned distances are >= 0.
    """
    anchor, direction = _line_frame(angle_deg, intercept_px)
    rel_x, rel_y = point[0] - anchor[0], point[1] - anchor[1]
    perp = abs(direction[0] * rel_y - direction[1] * rel_x)
    t = rel_x * direction[0] + rel_y * direction[1]
    entry_t = 0.0
    if frame is not None:
        entry_t = _entry_parameter(anchor, direction, int(frame[0]), int(frame[1]))
    return perp, max(0.0, t - entry_t)


def render_beam(
    theta: BeamParams,
    width: int,
    height: int,
    source_distance: float | None = None,
) -> np.ndarray:
    """Render a beam into an additive RGB layer of shape (height, width, 3).

    Per pixel: intensity * falloff(along) * profile(perp) * rgb(wavelength),
    where falloff is inverse-square with a virtual source `source_distance`
    behind the entry point (default: the image diagonal, so falloff(0) = 1)
    and profile is flat across the beam with a one-pixel linear ramp to zero
    at perp = width/2 + 0.5.
    """
    if width < 1 or height < 1:
        raise ValueError(f"raster dimensions must be >= 1, got {width}x{height}")
    rgb = np.array(wavelength_to_rgb(theta.wavelength_nm), dtype=np.float64)

    anchor, direction = _line_frame(theta.angle_deg, theta.intercept_px)
    entry_t = _entry_parameter(anchor, direction, width, height)

    xs = np.arange(width, dtype=np.float64) - anchor[0]
    ys = np.arange(height, dtype=np.float64) - anchor[1]
    rel_x, rel_y = np.meshgrid(xs, ys)

    perp = np.abs(direction[0] * rel_y - direction[1] * rel_x)
    along = np.maximum(rel_x * direction[0] + rel_y * direction[1] - entry_t, 0.0)

    s0 = float(source_distance) if source_distance is not None else math.hypot(width, height)
    falloff = (s0 / (s0 + along)) ** 2
    profile = np.clip(theta.width_px / 2.0 + 0.5 - perp, 0.0, 1.0)

    magnitude = theta.intensity * (falloff * profile)
    return (magnitude[:, :, None] * rgb[None, None, :]).astype(np.float32)


def fuse(image: np.ndarray, layer: np.ndarray) -> np.ndarray:
    """Additively compose a beam layer onto an image, clipped to [0, 1]."""
    image = validate_image(image)
    layer = np.asarray(layer)
    if image.shape != layer.shape:
        raise ValueError(f"shape mismatch: image {image.shape} vs layer {layer.shape}")
    return np.clip(image + layer, 0.0, 1.0).astype(np.float32)


def sample_random_beam(bounds: ParamBounds, rng) -> BeamParams:
    """Draw beam parameters independently uniform within `bounds`.

    `rng` is a numpy Generator or a seed accepted by numpy.random.default_rng;
    a fixed seed yields the same parameters.
    """
    rng = np.random.default_rng(rng)
    lo, hi = bounds.lower.as_array(), bounds.upper.as_array()
    vec = [float(rng.uniform(l, h)) for l, h in zip(lo, hi)]
    return BeamParams(*vec)
