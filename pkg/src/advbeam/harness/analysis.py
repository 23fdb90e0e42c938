"""Prediction-shift statistics per wavelength band and defense augmentation."""

from __future__ import annotations

import shutil
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..beam import BeamParams, ParamBounds, fuse, render_beam, sample_random_beam
from ..classifiers.base import Classifier, top1, topk
from ..images import load_image, save_png
from ..spectrum import VISIBLE_MAX_NM, VISIBLE_MIN_NM
from .evaluate import DEFAULT_FRAME
from .manifest import DatasetManifest

# Wavelength bands the shift statistics are reported over.
DEFAULT_BANDS = ((380.0, 470.0), (470.0, 560.0), (560.0, 650.0), (650.0, 740.0))


def validate_bands(bands) -> tuple[tuple[float, float], ...]:
    bands = tuple((float(lo), float(hi)) for lo, hi in bands)
    if not bands:
        raise ValueError("need at least one wavelength band")
    for lo, hi in bands:
        if not (VISIBLE_MIN_NM <= lo < hi <= VISIBLE_MAX_NM):
            raise ValueError(f"band ({lo}, {hi}) is not an increasing visible-range interval")
    for (_, hi), (lo, _) in zip(bands, bands[1:]):
        if lo < hi:
            raise ValueError("bands must be non-overlapping and ascending")
    return bands


def banded_bounds(bounds: ParamBounds, band: tuple[float, float]) -> ParamBounds:
    """Restrict the wavelength interval to `band`, leaving other dimensions."""
    return ParamBounds(
        lower=bounds.lower.replace(wavelength_nm=band[0]),
        upper=bounds.upper.replace(wavelength_nm=band[1]),
    )


@dataclass
class BandShift:
    band: tuple[float, float]
    top1_class: int
    top1_before_pct: float
    top1_after_pct: float
    top5_class: int
    top5_before_pct: float
    top5_after_pct: float
    beams: int

    def as_dict(self, name_of=None) -> dict:
        name_of = name_of or (lambda c: f"class_{c}")
        return {
            "band": list(self.band),
            "top1": {
                "class": self.top1_class,
                "name": name_of(self.top1_class),
                "before_pct": self.top1_before_pct,
                "after_pct": self.top1_after_pct,
            },
            "top5": {
                "class": self.top5_class,
                "name": name_of(self.top5_class),
                "before_pct": self.top5_before_pct,
                "after_pct": self.top5_after_pct,
            },
            "beams": self.beams,
        }


@dataclass
class ClassShiftReport:
    bands: list[BandShift]
    before_top1: np.ndarray  # per-class clean top-1 share, in [0, 1]
    before_top5: np.ndarray
    after_top1: list[np.ndarray]  # per band
    after_top5: list[np.ndarray]


def _share_vectors(score_rows, num_classes: int):
    """Top-1 and top-5 prediction shares of a set of score vectors."""
    share1 = np.zeros(num_classes)
    share5 = np.zeros(num_classes)
    for scores in score_rows:
        share1[top1(scores)] += 1
        for c in topk(scores, 5):
            share5[c] += 1
    n = max(len(score_rows), 1)
    return share1 / n, share5 / n


def band_rng(seed: int, band_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(band_index,)))


def class_shift_report(
    manifest: DatasetManifest,
    classifier: Classifier,
    bounds: ParamBounds,
    bands=DEFAULT_BANDS,
    beams_per_image: int = 4,
    seed: int = 0,
    frame: tuple[int, int] | None = None,
) -> ClassShiftReport:
    """Which class's prediction share rises most when beams are added.

    For each band, `beams_per_image` beams are drawn per image with the
    wavelength uniform in the band and every other parameter uniform in
    `bounds`; the rise is the fused-image prediction share minus the clean
    share, reported for top-1 and top-5 membership.
    """
    bands = validate_bands(bands)
    if beams_per_image < 1:
        raise ValueError("beams_per_image must be >= 1")
    if len(manifest) == 0:
        raise ValueError("empty manifest")
    frame = frame or classifier.input_frame() or DEFAULT_FRAME
    width, height = frame

    images = [load_image(e.resolved, frame) for e in manifest.entries]
    clean_scores = [classifier.scores(img) for img in images]
    num_classes = len(clean_scores[0])
    before1, before5 = _share_vectors(clean_scores, num_classes)

    report = ClassShiftReport(
        bands=[], before_top1=before1, before_top5=before5, after_top1=[], after_top5=[]
    )
    for band_index, band in enumerate(bands):
        rng = band_rng(seed, band_index)
        sub_bounds = banded_bounds(bounds, band)
        fused_scores = []
        for image in images:
            for _ in range(beams_per_image):
                theta = sample_random_beam(sub_bounds, rng)
                fused_scores.append(classifier.scores(fuse(image, render_beam(theta, width, height))))
        after1, after5 = _share_vectors(fused_scores, num_classes)
        riser1 = int(np.argmax(after1 - before1))
        riser5 = int(np.argmax(after5 - before5))
        report.after_top1.append(after1)
        report.after_top5.append(after5)
        report.bands.append(
            BandShift(
                band=band,
                top1_class=riser1,
                top1_before_pct=100.0 * float(before1[riser1]),
                top1_after_pct=100.0 * float(after1[riser1]),
                top5_class=riser5,
                top5_before_pct=100.0 * float(before5[riser5]),
                top5_after_pct=100.0 * float(after5[riser5]),
                beams=len(fused_scores),
            )
        )
    return report


@dataclass
class AugmentRecord:
    index: int
    source: str
    output: str
    label: int
    beamed: bool
    theta: BeamParams | None = None
    error: str | None = None

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "source": self.source,
            "output": self.output,
            "label": self.label,
            "beamed": self.beamed,
            "theta": None if self.theta is None else self.theta.as_array().tolist(),
            "error": self.error,
        }


@dataclass
class AugmentResult:
    out_dir: Path
    manifest_path: Path
    records: list[AugmentRecord]

    @property
    def beamed_count(self) -> int:
        return sum(1 for r in self.records if r.beamed and r.error is None)

    @property
    def errors(self) -> list[AugmentRecord]:
        return [r for r in self.records if r.error is not None]


def _image_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def augment_decisions(count: int, probability: float, seed: int) -> np.ndarray:
    """The beam/no-beam coin flips `augment_dataset` would make, without I/O."""
    if not 0.0 <= probability <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {probability}")
    return np.array(
        [bool(_image_rng(seed, i).random() < probability) for i in range(count)], dtype=bool
    )


def augment_dataset(
    manifest: DatasetManifest,
    bounds: ParamBounds,
    probability: float,
    seed: int,
    out_dir,
) -> AugmentResult:
    """Copy a dataset, fusing a random beam into each image with `probability`.

    Beamed images are rendered in their own native frame (intercept bounds are
    interpreted in that frame's pixels) and written as PNG; unbeamed images
    are copied byte-for-byte.  A new `path,label` manifest plus a JSON record
    of every drawn parameter vector land in `out_dir`.  Per-file I/O failures
    are recorded on the result and do not abort the run.
    """
    if not 0.0 <= probability <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {probability}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    records: list[AugmentRecord] = []
    for index, entry in enumerate(manifest.entries):
        rng = _image_rng(seed, index)
        beamed = bool(rng.random() < probability)
        suffix = ".png" if beamed else (entry.resolved.suffix or ".png")
        out_name = f"{index:05d}_{entry.resolved.stem}{suffix}"
        record = AugmentRecord(
            index=index, source=entry.path, output=out_name, label=entry.label, beamed=beamed
        )
        try:
            if beamed:
                image = load_image(entry.resolved)
                theta = sample_random_beam(bounds, rng)
                record.theta = theta
                height, width = image.shape[:2]
                save_png(fuse(image, render_beam(theta, width, height)), out_dir / out_name)
            else:
                shutil.copyfile(entry.resolved, out_dir / out_name)
        except OSError as exc:
            record.error = f"{type(exc).__name__}: {exc}"
        records.append(record)

    manifest_path = out_dir / "manifest.csv"
    with open(manifest_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("path,label\n")
        for record in records:
            if record.error is None:
                fh.write(f"{record.output},{record.label}\n")

    return AugmentResult(out_dir=out_dir, manifest_path=manifest_path, records=records)
