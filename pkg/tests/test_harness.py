"""Manifest parsing, evaluation metrics, sweeps, shift stats, augmentation."""

import json

import numpy as np
import pytest

from advbeam import BeamParams, SearchConfig, fuse, render_beam, top1
from advbeam.classifiers import ToySpec, constant_spec, make_toy_classifier
from advbeam.harness import (
    ManifestError,
    SweepSpec,
    augment_dataset,
    augment_decisions,
    banded_bounds,
    class_shift_report,
    layout_heatmap,
    load_manifest,
    run_eval,
    sweep_fixed_beam,
    sweep_restarts,
    write_json,
)
from advbeam.harness.analysis import band_rng
from advbeam.images import load_image, save_png

from conftest import TOY_FRAME, write_toy_dataset

FRAME = (TOY_FRAME, TOY_FRAME)


class TestManifest:
    def write(self, tmp_path, text):
        path = tmp_path / "manifest.csv"
        path.write_text(text, encoding="utf-8")
        return path

    def test_missing_file(self, tmp_path):
        with pytest.raises(ManifestError, match="not found"):
            load_manifest(tmp_path / "nope.csv")

    def test_empty_file(self, tmp_path):
        with pytest.raises(ManifestError, match="empty manifest"):
            load_manifest(self.write(tmp_path, ""))

    def test_header_only(self, tmp_path):
        with pytest.raises(ManifestError, match="empty manifest"):
            load_manifest(self.write(tmp_path, "path,label\n"))

    def test_bad_header(self, tmp_path):
        with pytest.raises(ManifestError, match="header"):
            load_manifest(self.write(tmp_path, "file,cls\na.png,0\n"))

    def test_three_rows_in_order(self, tmp_path):
        manifest = load_manifest(self.write(tmp_path, "path,label\na.png,0\nb.png,1\nc.png,0\n"))
        assert [e.path for e in manifest.entries] == ["a.png", "b.png", "c.png"]
        assert [e.label for e in manifest.entries] == [0, 1, 0]
        assert manifest.num_classes == 2

    def test_relative_paths_resolve_against_manifest(self, tmp_path):
        manifest = load_manifest(self.write(tmp_path, "path,label\nsub/a.png,0\n"))
        assert manifest.entries[0].resolved == tmp_path / "sub/a.png"

    def test_label_out_of_range_with_names(self, tmp_path):
        path = self.write(tmp_path, "path,label\na.png,0\nb.png,2\n")
        with pytest.raises(ManifestError, match=r":3: label 2 out of range"):
            load_manifest(path, class_names=("x", "y"))

    def test_non_integer_label_line_number(self, tmp_path):
        path = self.write(tmp_path, "path,label\na.png,0\nb.png,two\n")
        with pytest.raises(ManifestError, match=":3:"):
            load_manifest(path)

    def test_negative_label(self, tmp_path):
        with pytest.raises(ManifestError, match="negative"):
            load_manifest(self.write(tmp_path, "path,label\na.png,-1\n"))

    def test_duplicate_paths(self, tmp_path):
        with pytest.raises(ManifestError, match="duplicate"):
            load_manifest(self.write(tmp_path, "path,label\na.png,0\na.png,1\n"))

    def test_wrong_field_count(self, tmp_path):
        with pytest.raises(ManifestError, match="expected 2 fields"):
            load_manifest(self.write(tmp_path, "path,label\na.png,0,extra\n"))


class TestRunEval:
    def test_metric_arithmetic(self, small_dataset, blue_toy, toy_bounds):
        manifest_path, _, _ = small_dataset
        manifest = load_manifest(manifest_path)
        config = SearchConfig(bounds=toy_bounds, max_steps=10, restarts=5, seed=1)
        report = run_eval(manifest, blue_toy, config, FRAME)
        assert report.total == 6
        assert report.attempted == report.total - report.skipped_misclassified
        # dark images flip with a blue beam; blue images cannot get darker
        assert report.successes == 3
        assert report.success_rate == pytest.approx(100.0 * 3 / report.attempted)
        succ_q = [o.attack.queries for o in report.outcomes if o.attack and o.attack.success]
        assert report.mean_queries_success == pytest.approx(np.mean(succ_q))

    def test_skips_misclassified(self, tmp_path, blue_toy, toy_bounds):
        # labels deliberately wrong: everything gets skipped
        rng = np.random.default_rng(1)
        images = [rng.uniform(0, 0.03, (16, 16, 3)).astype(np.float32) for _ in range(3)]
        manifest_path = write_toy_dataset(tmp_path / "ds", blue_toy, images, labels=[1, 1, 1])
        manifest = load_manifest(manifest_path)
        config = SearchConfig(bounds=toy_bounds, max_steps=2, restarts=1, seed=0)
        report = run_eval(manifest, blue_toy, config, FRAME)
        assert report.skipped_misclassified == 3
        assert report.attempted == 0
        assert report.success_rate is None
        assert report.as_dict()["no_images_attempted"] is True

    def test_empty_manifest_rejected(self, blue_toy, toy_bounds):
        from advbeam.harness.manifest import DatasetManifest

        config = SearchConfig(bounds=toy_bounds, max_steps=2, restarts=1, seed=0)
        with pytest.raises(ValueError, match="empty"):
            run_eval(DatasetManifest(entries=()), blue_toy, config, FRAME)

    def test_missing_image_recorded_not_fatal(self, tmp_path, blue_toy, toy_bounds):
        (tmp_path / "ds").mkdir()
        save_png(np.zeros((16, 16, 3), dtype=np.float32), tmp_path / "ds" / "ok.png")
        manifest_path = tmp_path / "ds" / "manifest.csv"
        manifest_path.write_text("path,label\nok.png,0\nmissing.png,0\n", encoding="utf-8")
        manifest = load_manifest(manifest_path)
        config = SearchConfig(bounds=toy_bounds, max_steps=3, restarts=2, seed=0)
        report = run_eval(manifest, blue_toy, config, FRAME)
        assert report.total == 2
        errors = [o for o in report.outcomes if o.error]
        assert len(errors) == 1 and "missing.png" in errors[0].path


class TestFixedBeamSweeps:
    def test_zero_intensity_never_flips(self, small_dataset, blue_toy):
        manifest = load_manifest(small_dataset[0])
        spec = SweepSpec(
            dimension="wavelength_nm",
            values=(420.0, 460.0),
            base=BeamParams(450, 45, 4, 4, 0.0),
        )
        for row in sweep_fixed_beam(spec, manifest, blue_toy, FRAME):
            assert row.flips == 0
            assert row.success_rate == 0.0

    def test_blue_beam_flips_dark_images(self, small_dataset, blue_toy):
        manifest = load_manifest(small_dataset[0])
        spec = SweepSpec(
            dimension="wavelength_nm",
            values=(450.0, 700.0),
            base=BeamParams(450, 0, 8, 6, 1.0),
        )
        rows = sweep_fixed_beam(spec, manifest, blue_toy, FRAME)
        by_value = {row.value: row for row in rows}
        assert by_value[450.0].flips == 3  # all dark images
        assert by_value[700.0].flips == 0  # red adds no blue

    def test_values_validated_against_bounds(self, small_dataset, blue_toy, toy_bounds):
        manifest = load_manifest(small_dataset[0])
        spec = SweepSpec(
            dimension="wavelength_nm", values=(700.0,), base=BeamParams(450, 0, 8, 4, 1.0)
        )
        with pytest.raises(ValueError, match="bounds"):
            sweep_fixed_beam(spec, manifest, blue_toy, FRAME, bounds=toy_bounds)

    def test_single_cell_grid_matches_sweep(self, small_dataset, blue_toy):
        manifest = load_manifest(small_dataset[0])
        base = BeamParams(450, 0, 8, 6, 1.0)
        grid = layout_heatmap([0.0], [8.0], manifest, blue_toy, base=base, frame=FRAME)
        spec = SweepSpec(dimension="angle_deg", values=(0.0,), base=base)
        row = sweep_fixed_beam(spec, manifest, blue_toy, FRAME)[0]
        assert grid.rates[0, 0] == pytest.approx(row.success_rate)

    def test_grid_rates_bounded(self, small_dataset, blue_toy):
        manifest = load_manifest(small_dataset[0])
        grid = layout_heatmap(
            np.linspace(0, 180, 5), np.linspace(0, 16, 5), manifest, blue_toy, frame=FRAME
        )
        valid = grid.rates[~np.isnan(grid.rates)]
        assert np.all(valid >= 0.0) and np.all(valid <= 100.0)

    def test_heatmap_nonzero_exactly_on_oracle_band(self, black_image, tmp_path):
        # single-image dataset against the angle-band toy: heatmap cells are
        # 100 exactly where the unit-grid oracle flips and 0 elsewhere
        toy = make_toy_classifier(
            ToySpec(
                weights=np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 40.0]]),
                biases=np.array([4.9735, 0.0]),
            )
        )
        manifest_path = write_toy_dataset(tmp_path / "one", toy, [black_image])
        manifest = load_manifest(manifest_path)
        angles = [float(a) for a in range(0, 91, 5)]
        base = BeamParams(450, 0, 0, 3, 1.0)
        grid = layout_heatmap(angles, [0.0], manifest, toy, base=base, frame=FRAME)
        for i, angle in enumerate(angles):
            clean = top1(toy.scores(black_image))
            layer = render_beam(base.replace(angle_deg=angle), *FRAME)
            flips = top1(toy.scores(fuse(black_image, layer))) != clean
            assert grid.rates[i, 0] == (100.0 if flips else 0.0)


class TestRestartSweep:
    def test_monotone_and_consistent(self, small_dataset, blue_toy, toy_bounds):
        manifest = load_manifest(small_dataset[0])
        config = SearchConfig(bounds=toy_bounds, max_steps=4, restarts=1, seed=3)
        results = sweep_restarts([1, 3, 6], manifest, blue_toy, config, FRAME)
        rates = [r.success_rate for _, r in results]
        assert all(a <= b for a, b in zip(rates, rates[1:]))
        # k=1 equals a plain eval with a single restart
        single = run_eval(manifest, blue_toy, config, FRAME)
        assert results[0][1].as_dict() == single.as_dict()

    def test_rejects_bad_budgets(self, small_dataset, blue_toy, toy_bounds):
        manifest = load_manifest(small_dataset[0])
        config = SearchConfig(bounds=toy_bounds, max_steps=4, restarts=1, seed=3)
        with pytest.raises(ValueError):
            sweep_restarts([0, 5], manifest, blue_toy, config, FRAME)


class TestClassShift:
    def test_identity_backend_has_zero_rises(self, small_dataset, toy_bounds):
        manifest = load_manifest(small_dataset[0])
        toy = make_toy_classifier(constant_spec(3))
        report = class_shift_report(manifest, toy, toy_bounds, beams_per_image=2, seed=0, frame=FRAME)
        for band, after1, after5 in zip(report.bands, report.after_top1, report.after_top5):
            np.testing.assert_array_equal(after1, report.before_top1)
            np.testing.assert_array_equal(after5, report.before_top5)
            assert band.top1_after_pct == band.top1_before_pct

    def test_blue_band_raises_blue_class(self, small_dataset, blue_toy, toy_bounds):
        manifest = load_manifest(small_dataset[0])
        report = class_shift_report(
            manifest, blue_toy, toy_bounds,
            bands=((380.0, 470.0), (650.0, 740.0)),
            beams_per_image=4, seed=7, frame=FRAME,
        )
        blue_band = report.bands[0]
        assert blue_band.top1_class == 1
        assert blue_band.top1_after_pct > blue_band.top1_before_pct
        red_band = report.bands[1]
        assert report.after_top1[1][1] == report.before_top1[1]  # red adds no blue

    def test_share_recomputation_matches(self, small_dataset, blue_toy, toy_bounds):
        # replay the identical seeded beam sample and recount from scratch
        from advbeam import sample_random_beam

        manifest = load_manifest(small_dataset[0])
        band = (380.0, 470.0)
        report = class_shift_report(
            manifest, blue_toy, toy_bounds, bands=(band,), beams_per_image=3, seed=11, frame=FRAME
        )
        rng = band_rng(11, 0)
        sub = banded_bounds(toy_bounds, band)
        counts = np.zeros(2)
        n = 0
        for entry in manifest.entries:
            image = load_image(entry.resolved, FRAME)
            for _ in range(3):
                theta = sample_random_beam(sub, rng)
                fused = fuse(image, render_beam(theta, *FRAME))
                counts[top1(blue_toy.scores(fused))] += 1
                n += 1
        np.testing.assert_allclose(report.after_top1[0], counts / n)

    def test_share_sums(self, small_dataset, blue_toy, toy_bounds):
        manifest = load_manifest(small_dataset[0])
        report = class_shift_report(manifest, blue_toy, toy_bounds, beams_per_image=2, seed=0, frame=FRAME)
        assert report.before_top1.sum() <= 1.0 + 1e-9
        for after1, after5 in zip(report.after_top1, report.after_top5):
            assert after1.sum() <= 1.0 + 1e-9
            assert after5.sum() <= 5.0 + 1e-9

    def test_bad_bands_rejected(self, small_dataset, blue_toy, toy_bounds):
        manifest = load_manifest(small_dataset[0])
        with pytest.raises(ValueError):
            class_shift_report(manifest, blue_toy, toy_bounds, bands=((500.0, 400.0),), frame=FRAME)
        with pytest.raises(ValueError):
            class_shift_report(
                manifest, blue_toy, toy_bounds,
                bands=((380.0, 500.0), (450.0, 600.0)), frame=FRAME,
            )


class TestAugment:
    def test_probability_zero_copies_bytes(self, small_dataset, toy_bounds, tmp_path):
        manifest_path, _, _ = small_dataset
        manifest = load_manifest(manifest_path)
        result = augment_dataset(manifest, toy_bounds, 0.0, seed=0, out_dir=tmp_path / "aug")
        assert result.beamed_count == 0
        for entry, record in zip(manifest.entries, result.records):
            assert (result.out_dir / record.output).read_bytes() == entry.resolved.read_bytes()

    def test_probability_one_differs_on_beam_support(self, small_dataset, toy_bounds, tmp_path):
        manifest_path, _, _ = small_dataset
        manifest = load_manifest(manifest_path)
        result = augment_dataset(manifest, toy_bounds, 1.0, seed=3, out_dir=tmp_path / "aug")
        assert result.beamed_count == len(manifest)
        for entry, record in zip(manifest.entries, result.records):
            assert record.theta is not None
            original = load_image(entry.resolved)
            augmented = load_image(result.out_dir / record.output)
            assert np.any(original != augmented)

    def test_fraction_concentrates_at_half(self):
        decisions = augment_decisions(10_000, 0.5, seed=123)
        assert 0.48 <= decisions.mean() <= 0.52

    def test_decisions_match_full_run(self, small_dataset, toy_bounds, tmp_path):
        manifest_path, _, _ = small_dataset
        manifest = load_manifest(manifest_path)
        result = augment_dataset(manifest, toy_bounds, 0.5, seed=9, out_dir=tmp_path / "aug")
        expected = augment_decisions(len(manifest), 0.5, seed=9)
        assert [r.beamed for r in result.records] == list(expected)

    def test_invalid_probability(self, small_dataset, toy_bounds, tmp_path):
        manifest = load_manifest(small_dataset[0])
        with pytest.raises(ValueError):
            augment_dataset(manifest, toy_bounds, 1.5, seed=0, out_dir=tmp_path / "aug")

    def test_output_manifest_loads(self, small_dataset, toy_bounds, tmp_path):
        manifest = load_manifest(small_dataset[0])
        result = augment_dataset(manifest, toy_bounds, 0.5, seed=1, out_dir=tmp_path / "aug")
        out_manifest = load_manifest(result.manifest_path)
        assert len(out_manifest) == len(manifest)
        assert [e.label for e in out_manifest.entries] == [e.label for e in manifest.entries]


class TestReportDeterminism:
    def test_eval_reports_byte_identical(self, small_dataset, blue_toy, toy_bounds, tmp_path):
        manifest = load_manifest(small_dataset[0])
        config = SearchConfig(bounds=toy_bounds, max_steps=5, restarts=3, seed=42)
        paths = []
        for i in range(2):
            report = run_eval(manifest, blue_toy, config, FRAME)
            paths.append(write_json(tmp_path / f"report{i}.json", report.as_dict()))
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_json_is_loadable_and_sorted(self, tmp_path):
        path = write_json(tmp_path / "x.json", {"b": np.float64(1.5), "a": [np.int32(2)]})
        payload = json.loads(path.read_text())
        assert payload == {"a": [2], "b": 1.5}
