"""Command-line interface.

Subcommands: attack, eval, sweep, shift-report, augment, robust-attack.
Every command writes a report.json embedding the resolved configuration,
CSV tables where the output is tabular, and PNG figures on the report path.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .beam import fuse, render_beam
from .classifiers import (
    RemoteClassifier,
    TransportError,
    blue_sensitive_spec,
    load_embedded,
    make_toy_classifier,
)
from .config import AppConfig, load_config
from .harness import (
    DEFAULT_BANDS,
    RESTART_SWEEP_VALUES,
    WAVELENGTH_SWEEP_BASE,
    WAVELENGTH_SWEEP_VALUES,
    WIDTH_SWEEP_BASE,
    WIDTH_SWEEP_VALUES,
    SweepSpec,
    augment_dataset,
    class_shift_report,
    default_layout_axes,
    layout_heatmap,
    load_class_names,
    load_manifest,
    run_eval,
    save_heatmap,
    save_histogram,
    save_image,
    save_line_plot,
    save_trace_plot,
    sweep_fixed_beam,
    sweep_restarts,
    write_csv,
    write_json,
)
from .images import load_image
from .physical import robust_attack
from .search import beam_attack


def add_common(parser: argparse.ArgumentParser, manifest: bool = True):
    backend = parser.add_mutually_exclusive_group(required=True)
    backend.add_argument("--model", help="embedded model file (.onnx, .pt, .pth, .ts)")
    backend.add_argument("--remote", help="base URL of a scoring service")
    backend.add_argument(
        "--toy", action="store_true", help="built-in analytic toy classifier (for smoke tests)"
    )
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--labels", help="class-name table, one name per line")
    if manifest:
        parser.add_argument("--manifest", required=True, help="dataset CSV with header path,label")


def build_classifier(args, config: AppConfig):
    if args.toy:
        return make_toy_classifier(blue_sensitive_spec())
    if args.remote:
        return RemoteClassifier(args.remote)
    names = None
    labels_path = args.labels or config.labels_path
    if labels_path:
        names = load_class_names(labels_path)
    return load_embedded(args.model, config.preprocess, names=names)


def setup(args):
    config = load_config(args.config, seed=args.seed)
    classifier = build_classifier(args, config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    return config, classifier, out_dir


def get_manifest(args, config: AppConfig):
    names = None
    labels_path = args.labels or config.labels_path
    if labels_path:
        names = load_class_names(labels_path)
    return load_manifest(args.manifest, class_names=names)


def frame_of(classifier, config: AppConfig) -> tuple[int, int]:
    return classifier.input_frame() or config.frame


def cmd_attack(args) -> int:
    config, classifier, out = setup(args)
    frame = frame_of(classifier, config)
    image = load_image(args.image, frame)
    outcome = beam_attack(image, classifier, config.search)

    width, height = frame
    adversarial = fuse(image, render_beam(outcome.theta, width, height))
    save_image(out / "adversarial.png", adversarial)
    save_trace_plot(out / "trace.png", outcome.confidence_trace, title="confidence descent")
    write_json(
        out / "report.json",
        {
            "command": "attack",
            "image": args.image,
            "config": config.snapshot(),
            "outcome": outcome.as_dict(),
            "clean_name": classifier.name_of(outcome.clean_label),
            "adv_name": classifier.name_of(outcome.adv_label),
        },
    )
    status = "SUCCESS" if outcome.success else "FAILED"
    print(
        f"{status}: {classifier.name_of(outcome.clean_label)} -> "
        f"{classifier.name_of(outcome.adv_label)} "
        f"({outcome.queries} queries, {outcome.restarts_used} restarts)"
    )
    return 0


def cmd_eval(args) -> int:
    config, classifier, out = setup(args)
    manifest = get_manifest(args, config)
    report = run_eval(
        manifest,
        classifier,
        config.search,
        frame_of(classifier, config),
        progress=lambda i, n, rec: print(f"[{i + 1}/{n}] {rec.path}", file=sys.stderr),
    )
    write_json(
        out / "report.json",
        {"command": "eval", "manifest": args.manifest, "config": config.snapshot(),
         "report": report.as_dict()},
    )
    write_csv(
        out / "outcomes.csv",
        ["path", "label", "clean_label", "skipped", "success", "queries", "restarts", "adv_label"],
        [
            [
                o.path,
                o.label,
                o.clean_label,
                int(o.skipped),
                "" if o.attack is None else int(o.attack.success),
                "" if o.attack is None else o.attack.queries,
                "" if o.attack is None else o.attack.restarts_used,
                "" if o.attack is None else o.attack.adv_label,
            ]
            for o in report.outcomes
        ],
    )
    save_histogram(
        out / "queries.png",
        [o.attack.queries for o in report.outcomes if o.attack is not None],
        xlabel="queries per attack",
        title="query cost",
    )
    rate = "n/a" if report.success_rate is None else f"{report.success_rate:.2f}%"
    mean_q = "n/a" if report.mean_queries_all is None else f"{report.mean_queries_all:.1f}"
    print(
        f"attempted {report.attempted}/{report.total} "
        f"(skipped {report.skipped_misclassified} misclassified); "
        f"success rate {rate}; mean queries {mean_q}"
    )
    return 0


def _sweep_1d(args, config, classifier, manifest, out, dimension) -> None:
    sweep_cfg = config.sweep
    if dimension == "wavelength_nm":
        values = tuple(sweep_cfg.get("wavelength_values", WAVELENGTH_SWEEP_VALUES))
        base, label = WAVELENGTH_SWEEP_BASE, "wavelength (nm)"
    else:
        values = tuple(sweep_cfg.get("width_values", WIDTH_SWEEP_VALUES))
        base, label = WIDTH_SWEEP_BASE, "beam width (px)"
    spec = SweepSpec(dimension=dimension, values=values, base=base)
    rows = sweep_fixed_beam(spec, manifest, classifier, frame_of(classifier, config))
    write_csv(
        out / "sweep.csv",
        ["value", "flips", "attempted", "success_rate"],
        [[r.value, r.flips, r.attempted, r.success_rate] for r in rows],
    )
    save_line_plot(
        out / "sweep.png",
        [r.value for r in rows],
        [r.success_rate for r in rows],
        xlabel=label,
        ylabel="success rate (%)",
        title=f"fixed-beam sweep: {dimension}",
    )
    write_json(
        out / "report.json",
        {"command": f"sweep:{dimension}", "manifest": args.manifest,
         "config": config.snapshot(), "rows": [r.as_dict() for r in rows]},
    )
    for r in rows:
        rate = "n/a" if r.success_rate is None else f"{r.success_rate:.2f}%"
        print(f"{dimension}={r.value:g}: {rate} ({r.flips}/{r.attempted})")


def _sweep_layout(args, config, classifier, manifest, out) -> None:
    frame = frame_of(classifier, config)
    sweep_cfg = config.sweep
    if "angles" in sweep_cfg or "intercepts" in sweep_cfg:
        default_a, default_b = default_layout_axes(frame)
        angles = tuple(sweep_cfg.get("angles", default_a))
        intercepts = tuple(sweep_cfg.get("intercepts", default_b))
    else:
        angles, intercepts = default_layout_axes(
            frame,
            angle_points=sweep_cfg.get("angle_points", 19),
            intercept_points=sweep_cfg.get("intercept_points", 21),
        )
    grid = layout_heatmap(angles, intercepts, manifest, classifier, frame=frame)
    write_csv(
        out / "layout.csv",
        ["angle_deg", "intercept_px", "success_rate"],
        [
            [a, b, None if np.isnan(grid.rates[i, j]) else grid.rates[i, j]]
            for i, a in enumerate(grid.angles)
            for j, b in enumerate(grid.intercepts)
        ],
    )
    save_heatmap(out / "layout_heatmap.png", grid.angles, grid.intercepts, grid.rates,
                 title="fixed-beam layout sweep")
    write_json(
        out / "report.json",
        {"command": "sweep:layout", "manifest": args.manifest,
         "config": config.snapshot(), "grid": grid.as_dict()},
    )
    print(f"layout grid {len(grid.angles)}x{len(grid.intercepts)} over {grid.attempted} images")


def _sweep_restarts(args, config, classifier, manifest, out) -> None:
    k_values = tuple(int(k) for k in config.sweep.get("k_values", RESTART_SWEEP_VALUES))
    results = sweep_restarts(k_values, manifest, classifier, config.search,
                             frame_of(classifier, config))
    write_csv(
        out / "restarts.csv",
        ["k", "successes", "attempted", "success_rate", "mean_queries_all",
         "mean_queries_success"],
        [
            [k, r.successes, r.attempted, r.success_rate, r.mean_queries_all,
             r.mean_queries_success]
            for k, r in results
        ],
    )
    save_line_plot(
        out / "restarts.png",
        [k for k, _ in results],
        [r.success_rate for _, r in results],
        xlabel="restart budget k",
        ylabel="success rate (%)",
        title="restart-budget sweep",
    )
    write_json(
        out / "report.json",
        {"command": "sweep:k", "manifest": args.manifest, "config": config.snapshot(),
         "rows": [{"k": k, **{key: val for key, val in r.as_dict().items() if key != "outcomes"}}
                  for k, r in results]},
    )
    for k, r in results:
        rate = "n/a" if r.success_rate is None else f"{r.success_rate:.2f}%"
        print(f"k={k}: {rate} ({r.successes}/{r.attempted})")


def cmd_sweep(args) -> int:
    config, classifier, out = setup(args)
    manifest = get_manifest(args, config)
    if args.dim == "lambda":
        _sweep_1d(args, config, classifier, manifest, out, "wavelength_nm")
    elif args.dim == "width":
        _sweep_1d(args, config, classifier, manifest, out, "width_px")
    elif args.dim == "layout":
        _sweep_layout(args, config, classifier, manifest, out)
    else:
        _sweep_restarts(args, config, classifier, manifest, out)
    return 0


def cmd_shift_report(args) -> int:
    config, classifier, out = setup(args)
    manifest = get_manifest(args, config)
    bands = tuple(tuple(band) for band in config.sweep.get("bands", DEFAULT_BANDS))
    beams_per_image = int(config.sweep.get("beams_per_image", 4))
    report = class_shift_report(
        manifest,
        classifier,
        config.search.bounds,
        bands=bands,
        beams_per_image=beams_per_image,
        seed=config.search.seed,
        frame=frame_of(classifier, config),
    )
    name_of = classifier.name_of
    write_csv(
        out / "class_shift.csv",
        ["band_lo", "band_hi", "top1_class", "top1_name", "top1_before_pct", "top1_after_pct",
         "top5_class", "top5_name", "top5_before_pct", "top5_after_pct"],
        [
            [b.band[0], b.band[1], b.top1_class, name_of(b.top1_class),
             b.top1_before_pct, b.top1_after_pct, b.top5_class, name_of(b.top5_class),
             b.top5_before_pct, b.top5_after_pct]
            for b in report.bands
        ],
    )
    write_json(
        out / "report.json",
        {"command": "shift-report", "manifest": args.manifest, "config": config.snapshot(),
         "bands": [b.as_dict(name_of) for b in report.bands]},
    )
    for b in report.bands:
        print(
            f"{b.band[0]:g}-{b.band[1]:g} nm: top1 riser {name_of(b.top1_class)} "
            f"{b.top1_before_pct:.2f}% -> {b.top1_after_pct:.2f}%"
        )
    return 0


def cmd_augment(args) -> int:
    config = load_config(args.config, seed=args.seed)
    names = load_class_names(args.labels) if args.labels else None
    manifest = load_manifest(args.manifest, class_names=names)
    result = augment_dataset(
        manifest, config.search.bounds, args.probability, config.search.seed, args.out
    )
    write_json(
        Path(args.out) / "augmentation.json",
        {
            "command": "augment",
            "manifest": args.manifest,
            "probability": args.probability,
            "config": config.snapshot(),
            "beamed": result.beamed_count,
            "total": len(result.records),
            "records": [r.as_dict() for r in result.records],
        },
    )
    print(
        f"augmented {len(result.records)} images ({result.beamed_count} beamed) "
        f"-> {result.manifest_path}"
    )
    if result.errors:
        print(f"{len(result.errors)} files failed; see augmentation.json", file=sys.stderr)
    return 0


def cmd_robust_attack(args) -> int:
    config, classifier, out = setup(args)
    frame = frame_of(classifier, config)
    image = load_image(args.image, frame)
    result = robust_attack(image, classifier, config.search, config.transforms)

    write_csv(
        out / "outcomes.csv",
        ["item", "success", "queries", "restarts", "clean_label", "adv_label"],
        [
            [i, int(o.success), o.queries, o.restarts_used, o.clean_label, o.adv_label]
            for i, o in enumerate(result.outcomes)
        ],
    )
    payload = {
        "command": "robust-attack",
        "image": args.image,
        "config": config.snapshot(),
        "outcomes": [o.as_dict() for o in result.outcomes],
        "errors": [{"item": i, "error": msg} for i, msg in result.errors],
        "effective_range": None
        if result.effective_range is None
        else result.effective_range.as_dict(),
    }
    write_json(out / "report.json", payload)
    successes = sum(o.success for o in result.outcomes)
    print(f"{successes}/{len(result.outcomes)} transformed copies attacked successfully")
    if result.effective_range is not None:
        lo, hi = result.effective_range.lower, result.effective_range.upper
        print(
            f"effective angle range: [{lo.angle_deg:.1f}, {hi.angle_deg:.1f}] deg; "
            f"wavelength [{lo.wavelength_nm:.0f}, {hi.wavelength_nm:.0f}] nm"
        )
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="advbeam",
        description="Black-box adversarial laser-beam attacks and evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("attack", help="attack a single image")
    add_common(p, manifest=False)
    p.add_argument("--image", required=True, help="input image (PNG or JPEG)")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("eval", help="attack every manifest image and report metrics")
    add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="fixed-beam and restart-budget ablations")
    add_common(p)
    p.add_argument("--dim", required=True, choices=["lambda", "width", "layout", "k"])
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("shift-report", help="per-band prediction shift statistics")
    add_common(p)
    p.set_defaults(func=cmd_shift_report)

    p = sub.add_parser("augment", help="beam-augment a dataset for defense training")
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--labels", help="class-name table, one name per line")
    p.add_argument("--probability", type=float, default=0.5)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("robust-attack", help="attack randomly transformed copies of one image")
    add_common(p, manifest=False)
    p.add_argument("--image", required=True)
    p.set_defaults(func=cmd_robust_attack)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TransportError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
