"""Full attack evaluation over a dataset manifest."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..classifiers.base import Classifier, TransportError, top1
from ..images import load_image
from ..search import AttackOutcome, SearchConfig, beam_attack
from .manifest import DatasetManifest

DEFAULT_FRAME = (224, 224)


@dataclass
class ImageOutcome:
    path: str
    label: int
    clean_label: int | None
    skipped: bool
    attack: AttackOutcome | None
    error: str | None = None

    def as_dict(self) -> dict:
        return {
            "path": self.path,
            "label": self.label,
            "clean_label": self.clean_label,
            "skipped": self.skipped,
            "attack": self.attack.as_dict() if self.attack is not None else None,
            "error": self.error,
        }


@dataclass
class EvalReport:
    """Aggregated attack metrics; success_rate is over attempted images only."""

    total: int
    skipped_misclassified: int
    successes: int
    success_rate: float | None
    mean_queries_success: float | None
    mean_queries_all: float | None
    outcomes: list[ImageOutcome]

    @property
    def attempted(self) -> int:
        return self.total - self.skipped_misclassified

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "skipped_misclassified": self.skipped_misclassified,
            "attempted": self.attempted,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "mean_queries_success": self.mean_queries_success,
            "mean_queries_all": self.mean_queries_all,
            "no_images_attempted": self.attempted == 0,
            "outcomes": [o.as_dict() for o in self.outcomes],
        }


def summarize(total: int, outcomes: list[ImageOutcome]) -> EvalReport:
    skipped = sum(1 for o in outcomes if o.skipped)
    attacks = [o.attack for o in outcomes if o.attack is not None]
    successes = sum(1 for a in attacks if a.success)
    attempted = total - skipped
    success_rate = 100.0 * successes / attempted if attempted else None
    success_queries = [a.queries for a in attacks if a.success]
    all_queries = [a.queries for a in attacks]
    return EvalReport(
        total=total,
        skipped_misclassified=skipped,
        successes=successes,
        success_rate=success_rate,
        mean_queries_success=float(np.mean(success_queries)) if success_queries else None,
        mean_queries_all=float(np.mean(all_queries)) if all_queries else None,
        outcomes=outcomes,
    )


def run_eval(
    manifest: DatasetManifest,
    classifier: Classifier,
    config: SearchConfig,
    frame: tuple[int, int] | None = None,
    progress=None,
) -> EvalReport:
    """Attack every correctly classified manifest image.

    Images the backend already misclassifies are skipped, mirroring
    evaluation over correctly classified inputs only.  Image i's attack uses
    random streams keyed by (config.seed, i), so results are independent of
    evaluation order.  Per-image I/O and transport failures are recorded on
    the outcome and do not abort the run.
    """
    if len(manifest) == 0:
        raise ValueError("empty manifest")
    frame = frame or classifier.input_frame() or DEFAULT_FRAME

    outcomes: list[ImageOutcome] = []
    for idx, entry in enumerate(manifest.entries):
        record = ImageOutcome(
            path=entry.path, label=entry.label, clean_label=None, skipped=False, attack=None
        )
        try:
            image = load_image(entry.resolved, frame)
            record.clean_label = top1(classifier.scores(image))
            if record.clean_label != entry.label:
                record.skipped = True
            else:
                record.attack = beam_attack(image, classifier, config, seed_key=(idx,))
        except (OSError, TransportError, ValueError) as exc:
            record.error = f"{type(exc).__name__}: {exc}"
        outcomes.append(record)
        if progress is not None:
            progress(idx, len(manifest), record)

    return summarize(len(manifest), outcomes)
