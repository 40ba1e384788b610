"""Run the replicated shift experiment and write its outputs."""

import asyncio
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Union

from ...domain.exceptions import ReplicationError
from ...domain.models.dataset import RawMnist
from ...domain.models.experiment import (
    ExperimentConfig,
    ExperimentResult,
    ReplicationFailure,
    ReplicationOutcome,
)
from ...domain.services.colorizer import downscale_raw, subset_raw
from ...domain.services.summary import summarize
from ...infrastructure.logging import CausalRepLogger, logging_context
from ...infrastructure.persistence.idx_reader import load_mnist_idx
from ...infrastructure.persistence.results_store import ResultsStore
from .run_replication import RunReplicationCommand, RunReplicationHandler

PathLike = Union[str, Path]


@dataclass
class RunExperimentCommand:
    """
    Command to run every replication of the shift experiment.

    The four paths point at IDX files (optionally gzip-compressed). When
    ``output_directory`` is set, results.csv, ci_reports.csv and summary.csv
    (plus failures.csv / predictions.csv when present) are written there.
    """
    config: ExperimentConfig
    train_images: Path
    train_labels: Path
    test_images: Path
    test_labels: Path
    output_directory: Optional[Path] = None


class RunExperimentHandler:
    """
    Handler for the experiment command.

    Replications run as concurrent tasks (at most ``config.workers`` at a
    time) with disjoint seeds. Their outcomes are merged in replication
    order, so the output does not depend on scheduling. A failed replication
    is recorded and skipped; the run continues.
    """

    def __init__(
        self,
        replication_handler: RunReplicationHandler,
        loader: Callable[[PathLike, PathLike], RawMnist] = load_mnist_idx,
    ):
        self.replication_handler = replication_handler
        self.loader = loader
        self.logger = CausalRepLogger.get_instance()

    def prepare_data(self, command: RunExperimentCommand) -> tuple[RawMnist, RawMnist]:
        """Load both splits, then apply the fixed desk-scale subset and optional downscale."""
        config = command.config
        train_raw = self.loader(command.train_images, command.train_labels)
        test_raw = self.loader(command.test_images, command.test_labels)
        # one fixed subset for the whole run; replications vary only their seeds
        train_raw = subset_raw(train_raw, config.n_train, config.base_seed)
        test_raw = subset_raw(test_raw, config.n_test, config.base_seed + 1)
        if config.downscale:
            train_raw, test_raw = downscale_raw(train_raw), downscale_raw(test_raw)
        return train_raw, test_raw

    async def handle(self, command: RunExperimentCommand) -> ExperimentResult:
        config = command.config
        start_time = time.time()

        with logging_context(step="load"):
            self.logger.info(
                "Starting experiment",
                extra={
                    "replications": config.replications,
                    "base_seed": config.base_seed,
                    "workers": config.workers,
                },
            )
            train_raw, test_raw = await asyncio.to_thread(self.prepare_data, command)
            self.logger.info(
                "Loaded MNIST",
                extra={"n_train": train_raw.n, "n_test": test_raw.n, "height": train_raw.height},
            )

        semaphore = asyncio.Semaphore(config.workers)

        async def run_one(replication: int) -> Union[ReplicationOutcome, ReplicationFailure]:
            async with semaphore:
                try:
                    return await self.replication_handler.handle(RunReplicationCommand(
                        config=config,
                        replication=replication,
                        train_raw=train_raw,
                        test_raw=test_raw,
                    ))
                except ReplicationError as e:
                    self.logger.warning(
                        "Replication skipped",
                        extra={"replication": replication, "step": e.step, "error": str(e)},
                    )
                    return ReplicationFailure(replication=replication, step=e.step, error=str(e))

        outcomes = await asyncio.gather(*(run_one(i) for i in range(config.replications)))

        result = ExperimentResult()
        for outcome in sorted(outcomes, key=lambda o: o.replication):
            if isinstance(outcome, ReplicationFailure):
                result.add_failure(outcome)
            else:
                result.add_outcome(outcome)
        result.summary = summarize(result)

        if command.output_directory is not None:
            paths = ResultsStore(command.output_directory).write_experiment(result)
            self.logger.info(
                "Wrote experiment outputs",
                extra={"files": sorted(str(p) for p in paths.values())},
            )

        self.logger.info(
            "Experiment finished",
            extra={
                "rows": len(result.rows),
                "failures": len(result.failures),
                "duration_seconds": round(time.time() - start_time, 2),
            },
        )
        return result
