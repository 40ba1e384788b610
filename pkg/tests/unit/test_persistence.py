"""Tests for IDX reading and the binary / CSV stores."""

import gzip
import struct

import numpy as np
import pandas as pd
import pytest

from causalrep.domain.exceptions import (
    DatasetConsistencyError,
    IdxFormatError,
    LabelDomainError,
    ShapeError,
    TruncatedFileError,
)
from causalrep.domain.models import (
    ExperimentResult,
    Method,
    NetworkConfig,
    PredictionRecord,
    ReplicationFailure,
    ResultRow,
    ShiftLevel,
)
from causalrep.domain.services.colorizer import colorize, make_shift_suite
from causalrep.domain.services.deconfounder import fit_and_adjust_train
from causalrep.domain.services.neural_network import init_network
from causalrep.domain.services.summary import summarize
from causalrep.infrastructure.persistence import (
    ResultsStore,
    load_checkpoint,
    load_colored_dataset,
    load_columns,
    load_features,
    load_fit_table,
    load_mnist_idx,
    load_predictions,
    load_shift_suite,
    read_idx_images,
    read_idx_labels,
    save_checkpoint,
    save_colored_dataset,
    save_columns,
    save_features,
    save_fit_table,
    save_shift_suite,
    write_idx_images,
    write_idx_labels,
)
from causalrep.infrastructure.persistence.results_store import RESULT_COLUMNS

pytestmark = pytest.mark.unit


class TestIdx:

    def test_reads_standard_header(self, tmp_path):
        images = np.arange(2 * 3 * 4, dtype=np.uint8).reshape(2, 3, 4)
        path = tmp_path / "images"
        path.write_bytes(struct.pack(">IIII", 0x803, 2, 3, 4) + images.tobytes())

        assert np.array_equal(read_idx_images(path), images)

    def test_gzip_files_are_decompressed(self, tmp_path, raw_factory):
        raw = raw_factory(12)
        images = write_idx_images(tmp_path / "img.gz", raw.images)
        labels = write_idx_labels(tmp_path / "lbl.gz", raw.digits)

        with gzip.open(images, "rb") as f:
            assert struct.unpack(">I", f.read(4))[0] == 0x803
        loaded = load_mnist_idx(images, labels)
        assert np.array_equal(loaded.images, raw.images)
        assert np.array_equal(loaded.digits, raw.digits)

    def test_wrong_magic_number(self, tmp_path):
        labels = write_idx_labels(tmp_path / "labels", np.array([1, 2, 3], dtype=np.uint8))
        with pytest.raises(IdxFormatError):
            read_idx_images(labels)

    def test_truncated_payload(self, tmp_path, raw_factory):
        path = write_idx_images(tmp_path / "images", raw_factory(5).images)
        path.write_bytes(path.read_bytes()[:-10])
        with pytest.raises(TruncatedFileError):
            read_idx_images(path)

    def test_trailing_bytes(self, tmp_path):
        path = write_idx_labels(tmp_path / "labels", np.array([1, 2], dtype=np.uint8))
        path.write_bytes(path.read_bytes() + b"\x00")
        with pytest.raises(IdxFormatError):
            read_idx_labels(path)

    def test_count_mismatch(self, tmp_path, raw_factory):
        raw = raw_factory(6)
        images = write_idx_images(tmp_path / "images", raw.images)
        labels = write_idx_labels(tmp_path / "labels", raw.digits[:5])
        with pytest.raises(DatasetConsistencyError):
            load_mnist_idx(images, labels)

    def test_digit_out_of_range(self, tmp_path, raw_factory):
        raw = raw_factory(3)
        images = write_idx_images(tmp_path / "images", raw.images)
        labels = write_idx_labels(tmp_path / "labels", np.array([1, 12, 3], dtype=np.uint8))
        with pytest.raises(LabelDomainError):
            load_mnist_idx(images, labels)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_idx_labels(tmp_path / "nope")


class TestColoredContainer:

    def test_round_trip_keeps_pr(self, tmp_path, raw_factory):
        dataset = colorize(raw_factory(40), 0.75, seed=1)
        loaded = load_colored_dataset(save_colored_dataset(tmp_path / "d.bin", dataset))

        assert np.array_equal(loaded.images, dataset.images)
        assert np.array_equal(loaded.labels, dataset.labels)
        assert np.array_equal(loaded.colors, dataset.colors)
        assert loaded.pr == 0.75

    def test_missing_trailer_estimates_pr(self, tmp_path, raw_factory):
        dataset = colorize(raw_factory(100), 0.9, seed=1)
        path = save_colored_dataset(tmp_path / "d.bin", dataset, include_pr=False)
        assert load_colored_dataset(path).pr == pytest.approx(0.9)

    def test_header_layout(self, tmp_path, raw_factory):
        dataset = colorize(raw_factory(3), 0.5, seed=0)
        data = save_colored_dataset(tmp_path / "d.bin", dataset).read_bytes()
        assert struct.unpack_from("<IIII", data) == (3, 2, 8, 8)
        assert len(data) == 16 + 3 * 2 * 64 + 3 + 3 + 8

    def test_wrong_channel_count(self, tmp_path):
        path = tmp_path / "d.bin"
        path.write_bytes(struct.pack("<IIII", 1, 3, 1, 1) + bytes(5))
        with pytest.raises(IdxFormatError):
            load_colored_dataset(path)

    def test_truncated_container(self, tmp_path, raw_factory):
        path = save_colored_dataset(tmp_path / "d.bin", colorize(raw_factory(4), 0.5, seed=0))
        path.write_bytes(path.read_bytes()[:40])
        with pytest.raises(TruncatedFileError):
            load_colored_dataset(path)

    def test_pixel_in_the_wrong_channel(self, tmp_path, raw_factory):
        dataset = colorize(raw_factory(10), 1.0, seed=0)
        images = dataset.images.copy()
        red = int(np.flatnonzero(dataset.colors == 1)[0])
        images[red, 1, 0, 0] = 7
        corrupted = type(dataset)(images=images, labels=dataset.labels, colors=dataset.colors, pr=1.0)

        path = save_colored_dataset(tmp_path / "d.bin", corrupted)
        with pytest.raises(DatasetConsistencyError):
            load_colored_dataset(path)

    def test_shift_suite_files(self, tmp_path, raw_factory):
        suite = make_shift_suite(raw_factory(40, seed=1), raw_factory(40, seed=2), seed=3)
        paths = save_shift_suite(tmp_path, suite)

        assert sorted(p.name for p in paths.values()) == sorted(
            ["train.bin"] + [f"test_{s.value}.bin" for s in ShiftLevel.ordered()]
        )
        loaded = load_shift_suite(tmp_path)
        for shift in ShiftLevel.ordered():
            assert loaded.tests[shift].pr == shift.pr
            assert np.array_equal(loaded.tests[shift].colors, suite.tests[shift].colors)


class TestCheckpoint:

    def test_round_trip(self, tmp_path):
        net = init_network(NetworkConfig(layer_sizes=(6, 4, 3, 2), seed=2))
        net.biases[1][:] = [0.1, -0.2, 0.3]
        loaded = load_checkpoint(save_checkpoint(tmp_path / "n.ckpt", net), net.config)

        for a, b in zip(net.parameters(), loaded.parameters()):
            assert np.array_equal(a, b)
        assert all(not v.any() for v in loaded.rms_weights)

    def test_config_is_inferred_from_shapes(self, tmp_path):
        net = init_network(NetworkConfig(layer_sizes=(5, 3, 2)))
        loaded = load_checkpoint(save_checkpoint(tmp_path / "n.ckpt", net))
        assert loaded.config.layer_sizes == (5, 3, 2)

    def test_configured_shapes_must_match(self, tmp_path):
        path = save_checkpoint(tmp_path / "n.ckpt", init_network(NetworkConfig(layer_sizes=(5, 3, 2))))
        with pytest.raises(ShapeError):
            load_checkpoint(path, NetworkConfig(layer_sizes=(5, 4, 2)))

    def test_truncated_checkpoint(self, tmp_path):
        path = save_checkpoint(tmp_path / "n.ckpt", init_network(NetworkConfig(layer_sizes=(5, 3, 2))))
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(TruncatedFileError):
            load_checkpoint(path)

    def test_trailing_bytes(self, tmp_path):
        path = save_checkpoint(tmp_path / "n.ckpt", init_network(NetworkConfig(layer_sizes=(5, 3, 2))))
        path.write_bytes(path.read_bytes() + bytes(8))
        with pytest.raises(ShapeError):
            load_checkpoint(path)


class TestFitTable:

    def test_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        y = rng.integers(0, 2, size=50)
        c = rng.integers(0, 2, size=50)
        _, fit = fit_and_adjust_train(rng.normal(size=(50, 3)), y, c)

        path = save_fit_table(tmp_path / "fit.tsv", fit)
        assert path.read_text().splitlines()[0] == "# feature\tintercept\tY\tC"
        loaded = load_fit_table(path)
        assert np.array_equal(loaded.intercepts, fit.intercepts)
        assert np.array_equal(loaded.label_coefs, fit.label_coefs)
        assert np.array_equal(loaded.confounder_coefs, fit.confounder_coefs)
        assert loaded.confounder_names == ("C",)

    def test_header_is_required(self, tmp_path):
        path = tmp_path / "fit.tsv"
        path.write_text("feature\tintercept\tY\tC\n0\t1\t2\t3\n")
        with pytest.raises(ShapeError):
            load_fit_table(path)


class TestFeatureFiles:

    def test_feature_columns_are_numbered(self, tmp_path):
        values = np.array([[0.1, 1e-20], [3.0, -2.5]])
        path = save_features(tmp_path / "f.csv", values)

        assert path.read_text().splitlines()[0] == "x1,x2"
        assert np.array_equal(load_features(path), values)

    def test_named_columns(self, tmp_path):
        path = save_columns(tmp_path / "c.csv", label=np.array([0, 1, 1]), C=np.array([1, 1, 0]))
        frame = load_columns(path)
        assert list(frame.columns) == ["label", "C"]
        assert frame["C"].tolist() == [1, 1, 0]

    def test_columns_must_have_equal_length(self, tmp_path):
        with pytest.raises(ShapeError):
            save_columns(tmp_path / "c.csv", label=np.array([0, 1]), C=np.array([1]))


class TestResultsStore:

    def _result(self, report_factory):
        result = ExperimentResult()
        for replication in (1, 0):
            for method in reversed(list(Method)):
                for shift in ShiftLevel.ordered():
                    result.rows.append(ResultRow(
                        replication=replication,
                        shift=shift,
                        method=method,
                        accuracy=0.123456,
                        ci_report=report_factory(0.05),
                    ))
        result.summary = summarize(result)
        return result

    def test_results_are_sorted_with_fixed_columns(self, tmp_path, report_factory):
        path = ResultsStore(tmp_path).write_results(self._result(report_factory))
        lines = path.read_text().splitlines()

        assert lines[0] == ",".join(RESULT_COLUMNS)
        assert len(lines) == 1 + 36
        assert lines[1].startswith("0,no-shift,none,0.1235,0.80000000000000004,")
        frame = pd.read_csv(path)
        assert frame["replication"].tolist() == [0] * 18 + [1] * 18
        assert frame["method"].tolist()[:3] == ["none", "smote", "causal"]

    def test_failed_replication_becomes_a_skipped_row(self, tmp_path, report_factory):
        result = self._result(report_factory)
        result.failures.append(ReplicationFailure(replication=2, step="train", error="boom"))

        paths = ResultsStore(tmp_path).write_experiment(result)
        frame = pd.read_csv(paths["results"])
        skipped = frame[frame["verdict"] == "skipped"]
        assert skipped["replication"].tolist() == [2]
        assert skipped["accuracy"].isna().all()
        assert pd.read_csv(paths["failures"])["step"].tolist() == ["train"]
        assert set(paths) == {"results", "ci_reports", "summary", "failures"}

    def test_ci_report_rows_carry_verdicts(self, tmp_path, report_factory):
        path = ResultsStore(tmp_path).write_ci_reports(self._result(report_factory))
        frame = pd.read_csv(path)
        assert len(frame) == 36
        assert {"corRC_givenY", "corRC_givenY_verdict", "overall"} <= set(frame.columns)
        assert (frame["overall"] == "pass").all()

    def test_predictions_round_trip(self, tmp_path):
        records = [
            PredictionRecord(
                replication=0,
                shift=shift,
                method=Method.CAUSAL,
                r_hat=np.array([0.25, 0.75]),
                colors=np.array([0, 1]),
                labels=np.array([1, 1]),
            )
            for shift in (ShiftLevel.SHIFT_2, ShiftLevel.NO_SHIFT)
        ]
        path = ResultsStore(tmp_path).write_predictions(records)
        loaded = load_predictions(path)

        assert [r.shift for r in loaded] == [ShiftLevel.NO_SHIFT, ShiftLevel.SHIFT_2]
        assert loaded[0].r_hat.tolist() == [0.25, 0.75]

    def test_bare_prediction_file_is_one_group(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("r_hat,color,label\n0.1,0,0\n0.9,1,1\n")
        (record,) = load_predictions(path)
        assert (record.replication, record.shift, record.method) == (0, ShiftLevel.NO_SHIFT, Method.NONE)

    def test_prediction_columns_are_required(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("r_hat,label\n0.1,0\n")
        with pytest.raises(ValueError):
            load_predictions(path)
