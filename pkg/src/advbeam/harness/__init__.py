from .analysis import (
    DEFAULT_BANDS,
    AugmentResult,
    BandShift,
    ClassShiftReport,
    augment_dataset,
    augment_decisions,
    banded_bounds,
    class_shift_report,
)
from .evaluate import DEFAULT_FRAME, EvalReport, ImageOutcome, run_eval
from .manifest import DatasetManifest, ManifestEntry, ManifestError, load_class_names, load_manifest
from .reporting import (
    jsonable,
    save_heatmap,
    save_histogram,
    save_image,
    save_line_plot,
    save_trace_plot,
    write_csv,
    write_json,
)
from .sweeps import (
    LAYOUT_BASE,
    RESTART_SWEEP_VALUES,
    WAVELENGTH_SWEEP_BASE,
    WAVELENGTH_SWEEP_VALUES,
    WIDTH_SWEEP_BASE,
    WIDTH_SWEEP_VALUES,
    LayoutGrid,
    SweepRow,
    SweepSpec,
    default_layout_axes,
    layout_heatmap,
    sweep_fixed_beam,
    sweep_restarts,
)

__all__ = [
    "DEFAULT_BANDS",
    "AugmentResult",
    "BandShift",
    "ClassShiftReport",
    "augment_dataset",
    "augment_decisions",
    "banded_bounds",
    "class_shift_report",
    "DEFAULT_FRAME",
    "EvalReport",
    "ImageOutcome",
    "run_eval",
    "DatasetManifest",
    "ManifestEntry",
    "ManifestError",
    "load_class_names",
    "load_manifest",
    "jsonable",
    "save_heatmap",
    "save_histogram",
    "save_image",
    "save_line_plot",
    "save_trace_plot",
    "write_csv",
    "write_json",
    "LAYOUT_BASE",
    "RESTART_SWEEP_VALUES",
    "WAVELENGTH_SWEEP_BASE",
    "WAVELENGTH_SWEEP_VALUES",
    "WIDTH_SWEEP_BASE",
    "WIDTH_SWEEP_VALUES",
    "LayoutGrid",
    "SweepRow",
    "SweepSpec",
    "default_layout_axes",
    "layout_heatmap",
    "sweep_fixed_beam",
    "sweep_restarts",
]
