"""End-to-end runs of the replicated shift experiment on tiny synthetic digits."""

import pandas as pd
import pytest

from causalrep.application.commands import (
    RunExperimentCommand,
    RunExperimentHandler,
    RunReplicationHandler,
)
from causalrep.domain.exceptions import NetworkConfigError, ReplicationError
from causalrep.domain.models import ExperimentConfig, LogisticOptions, NetworkConfig
from causalrep.infrastructure.persistence.results_store import RESULT_COLUMNS

pytestmark = pytest.mark.integration


def small_config(**overrides) -> ExperimentConfig:
    settings = dict(
        network=NetworkConfig(
            layer_sizes=(128, 8, 4, 2),
            activations=("tanh", "tanh"),
            dropout_rates=(0.0, 0.0),
            epochs=3,
            batch_size=32,
            learning_rate=0.01,
        ),
        logistic=LogisticOptions(max_iter=300),
        replications=2,
        n_train=None,
        n_test=None,
    )
    settings.update(overrides)
    return ExperimentConfig(**settings)


def command_for(idx_files, config, output_directory=None) -> RunExperimentCommand:
    return RunExperimentCommand(config=config, output_directory=output_directory, **idx_files)


class FailingReplicationHandler(RunReplicationHandler):
    """Fails replication 1 during training."""

    def execute(self, command):
        if command.replication == 1:
            raise ReplicationError(1, "train", RuntimeError("simulated failure"))
        return super().execute(command)


class UnsizableNetworkHandler(RunReplicationHandler):
    """Cannot fit the configured network to the loaded images."""

    @staticmethod
    def _network_config(base, train_set, seed):
        raise NetworkConfigError(f"no input layer for images of shape {train_set.image_shape}")


async def test_full_protocol_writes_every_cell(idx_files, tmp_path):
    handler = RunExperimentHandler(RunReplicationHandler())
    result = await handler.handle(command_for(idx_files, small_config(), tmp_path / "out"))

    assert len(result.rows) == 36
    assert result.failures == []
    assert len(result.summary) == 18

    results = pd.read_csv(tmp_path / "out" / "results.csv")
    assert list(results.columns) == RESULT_COLUMNS
    assert len(results) == 36
    assert results["accuracy"].between(0.0, 1.0).all()
    assert results["replication"].tolist() == [0] * 18 + [1] * 18
    assert results["method"].tolist()[:3] == ["none", "smote", "causal"]
    assert (tmp_path / "out" / "ci_reports.csv").exists()
    assert (tmp_path / "out" / "summary.csv").exists()
    assert not (tmp_path / "out" / "failures.csv").exists()


async def test_reruns_and_worker_counts_give_identical_results(idx_files, tmp_path):
    handler = RunExperimentHandler(RunReplicationHandler())
    outputs = []
    for name, workers in [("a", 1), ("b", 1), ("c", 2)]:
        directory = tmp_path / name
        await handler.handle(command_for(idx_files, small_config(workers=workers), directory))
        outputs.append((directory / "results.csv").read_bytes())

    assert outputs[0] == outputs[1] == outputs[2]


async def test_failed_replication_is_skipped(idx_files, tmp_path):
    handler = RunExperimentHandler(FailingReplicationHandler())
    result = await handler.handle(command_for(idx_files, small_config(), tmp_path))

    assert len(result.rows) == 18
    assert [(f.replication, f.step) for f in result.failures] == [(1, "train")]

    results = pd.read_csv(tmp_path / "results.csv")
    assert len(results) == 19
    assert results.iloc[-1]["verdict"] == "skipped"
    failures = pd.read_csv(tmp_path / "failures.csv")
    assert failures["step"].tolist() == ["train"]


async def test_network_sizing_errors_skip_only_their_replication(idx_files, tmp_path):
    handler = RunExperimentHandler(UnsizableNetworkHandler())
    result = await handler.handle(command_for(idx_files, small_config(), tmp_path))

    assert result.rows == []
    assert [(f.replication, f.step) for f in result.failures] == [(0, "train"), (1, "train")]
    failures = pd.read_csv(tmp_path / "failures.csv")
    assert failures["error"].str.contains("NetworkConfigError").all()
    assert pd.read_csv(tmp_path / "results.csv")["verdict"].tolist() == ["skipped", "skipped"]
    assert pd.read_csv(tmp_path / "summary.csv").empty


async def test_predictions_are_saved_on_request(idx_files, tmp_path):
    handler = RunExperimentHandler(RunReplicationHandler())
    config = small_config(replications=1, save_predictions=True)
    result = await handler.handle(command_for(idx_files, config, tmp_path))

    assert len(result.predictions) == 18
    predictions = pd.read_csv(tmp_path / "predictions.csv")
    assert len(predictions) == 18 * 100
    assert predictions["r_hat"].between(0.0, 1.0).all()


async def test_base_seed_changes_the_run(idx_files):
    handler = RunExperimentHandler(RunReplicationHandler())
    first = await handler.handle(command_for(idx_files, small_config(replications=1)))
    second = await handler.handle(command_for(idx_files, small_config(replications=1, base_seed=7)))

    def correlations(result):
        return [r.ci_report.corRC_givenY for r in result.rows]

    assert correlations(first) != correlations(second)
