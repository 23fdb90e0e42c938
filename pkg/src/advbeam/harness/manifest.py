"""Dataset manifests: CSV files mapping image paths to true labels."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path


class ManifestError(ValueError):
    """Malformed manifest file; message carries the offending line number."""


@dataclass(frozen=True)
class ManifestEntry:
    path: str  # as written in the CSV
    resolved: Path  # absolute, relative entries resolved against the CSV location
    label: int


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple[ManifestEntry, ...]
    class_names: tuple[str, ...] | None = None

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def num_classes(self) -> int:
        if self.class_names is not None:
            return len(self.class_names)
        return max(e.label for e in self.entries) + 1

    def name_of(self, label: int) -> str:
        if self.class_names is not None and 0 <= label < len(self.class_names):
            return self.class_names[label]
        return f"class_{label}"


def load_class_names(path) -> tuple[str, ...]:
    """One class name per line, index order."""
    with open(path, encoding="utf-8") as fh:
        names = tuple(line.rstrip("\n") for line in fh if line.strip())
    if not names:
        raise ManifestError(f"empty class-name table: {path}")
    return names


def load_manifest(path, class_names: tuple[str, ...] | None = None) -> DatasetManifest:
    """Parse and validate a `path,label` CSV manifest.

    Relative image paths resolve against the manifest's directory.  Labels
    must be non-negative integers, and below len(class_names) when a name
    table is supplied.  Paths must be unique.
    """
    manifest_path = Path(path)
    if not manifest_path.is_file():
        raise ManifestError(f"manifest not found: {manifest_path}")
    base = manifest_path.resolve().parent

    with open(manifest_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))

    rows = [(i + 1, row) for i, row in enumerate(rows) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ManifestError(f"empty manifest: {manifest_path}")

    header_line, header = rows[0]
    if [cell.strip() for cell in header] != ["path", "label"]:
        raise ManifestError(
            f"{manifest_path}:{header_line}: expected header 'path,label', got {','.join(header)!r}"
        )
    if len(rows) == 1:
        raise ManifestError(f"empty manifest: {manifest_path} has a header but no entries")

    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    for line_no, row in rows[1:]:
        if len(row) != 2:
            raise ManifestError(f"{manifest_path}:{line_no}: expected 2 fields, got {len(row)}")
        raw_path, raw_label = row[0].strip(), row[1].strip()
        if not raw_path:
            raise ManifestError(f"{manifest_path}:{line_no}: empty image path")
        try:
            label = int(raw_label)
        except ValueError:
            raise ManifestError(
                f"{manifest_path}:{line_no}: label {raw_label!r} is not an integer"
            ) from None
        if label < 0:
            raise ManifestError(f"{manifest_path}:{line_no}: label {label} is negative")
        if class_names is not None and label >= len(class_names):
            raise ManifestError(
                f"{manifest_path}:{line_no}: label {label} out of range "
                f"for {len(class_names)} classes"
            )
        if raw_path in seen:
            raise ManifestError(f"{manifest_path}:{line_no}: duplicate path {raw_path!r}")
        seen.add(raw_path)
        resolved = Path(raw_path)
        if not resolved.is_absolute():
            resolved = base / resolved
        entries.append(ManifestEntry(path=raw_path, resolved=resolved, label=label))

    return DatasetManifest(entries=tuple(entries), class_names=class_names)
