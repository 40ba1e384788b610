"""Run one replication of the shift experiment."""

import asyncio
import time
from contextlib import contextmanager
from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

from ...domain.exceptions import ReplicationError
from ...domain.models.dataset import ColoredDataset, RawMnist, ShiftLevel, ShiftSuite
from ...domain.models.experiment import (
    ExperimentConfig,
    Method,
    PredictionRecord,
    ReplicationOutcome,
    ResultRow,
)
from ...domain.models.network import Network, NetworkConfig
from ...domain.services.balancer import smote_balance
from ...domain.services.ci_diagnostics import ci_report
from ...domain.services.colorizer import make_shift_suite
from ...domain.services.deconfounder import adjust_test, fit_and_adjust_train
from ...domain.services.neural_network import extract_features, init_network, train
from ...domain.services.statistics import accuracy, classify, logistic_fit, predict_proba
from ...infrastructure.logging import CausalRepLogger, logging_context


@dataclass
class RunReplicationCommand:
    """
    One replication: color, train two feature learners, evaluate three methods.

    ``train_raw`` and ``test_raw`` are the (already subset) raw splits; only
    the coloring, network and balancing seeds change between replications.
    """
    config: ExperimentConfig
    replication: int
    train_raw: RawMnist
    test_raw: RawMnist


@dataclass(frozen=True)
class ReplicationSeeds:
    """Disjoint child seeds derived from the replication seed."""
    coloring: int
    network: int
    balanced_network: int
    balance: int

    @classmethod
    def derive(cls, replication_seed: int) -> "ReplicationSeeds":
        children = np.random.SeedSequence(replication_seed).spawn(4)
        values = [int(child.generate_state(1)[0]) for child in children]
        return cls(*values)


class RunReplicationHandler:
    """
    Handler for one replication.

    Steps:
    1. Color the training set and the six test sets
    2. Train the feature learner on the biased training set, extract features
    3. Train a second learner on the SMOTE-balanced training set, extract features
    4. "none": logistic head on the biased features
    5. "smote": logistic head on the balanced-net features
    6. "causal": counterfactual adjustment of the step-2 features, then a logistic head
    """

    def __init__(self):
        self.logger = CausalRepLogger.get_instance()

    async def handle(self, command: RunReplicationCommand) -> ReplicationOutcome:
        """Run the replication on a worker thread."""
        return await asyncio.to_thread(self.execute, command)

    @contextmanager
    def _step(self, command: RunReplicationCommand, step: str) -> Iterator[None]:
        with logging_context(step=step):
            try:
                yield
            except ReplicationError:
                raise
            except Exception as e:
                raise ReplicationError(command.replication, step, e) from e

    def execute(self, command: RunReplicationCommand) -> ReplicationOutcome:
        config = command.config
        start_time = time.time()
        seed = config.replication_seed(command.replication)
        seeds = ReplicationSeeds.derive(seed)

        with logging_context(replication=command.replication):
            self.logger.info("Starting replication", extra={"seed": seed})

            with self._step(command, "colorize"):
                suite = make_shift_suite(command.train_raw, command.test_raw, seeds.coloring)

            with self._step(command, "train"):
                network_config = self._network_config(config.network, suite.train, seeds.network)
                net = init_network(network_config)
                trained = train(net, suite.train)
                x_train = extract_features(net, suite.train.images).values
                x_tests = {s: extract_features(net, d.images).values for s, d in suite.tests.items()}

            with self._step(command, "balance"):
                balanced = smote_balance(suite.train, replace(config.balance, seed=seeds.balance))

            with self._step(command, "train-balanced"):
                balanced_net = init_network(replace(network_config, seed=seeds.balanced_network))
                balanced_trained = train(balanced_net, balanced)
                xb_train = extract_features(balanced_net, balanced.images).values
                xb_tests = {
                    s: extract_features(balanced_net, d.images).values
                    for s, d in suite.tests.items()
                }

            rows: list[ResultRow] = []
            predictions: list[PredictionRecord] = []

            with self._step(command, "method-none"), logging_context(method=Method.NONE.value):
                self._evaluate(
                    command, Method.NONE, x_train, suite.train.labels, x_tests, suite,
                    rows, predictions,
                )

            with self._step(command, "method-smote"), logging_context(method=Method.SMOTE.value):
                self._evaluate(
                    command, Method.SMOTE, xb_train, balanced.labels, xb_tests, suite,
                    rows, predictions,
                )

            with self._step(command, "method-causal"), logging_context(method=Method.CAUSAL.value):
                adjusted_train, fit = fit_and_adjust_train(
                    x_train,
                    suite.train.labels,
                    suite.train.colors,
                    tolerance=config.min_singular_value,
                )
                adjusted_tests = {
                    s: adjust_test(x, suite.tests[s].colors, fit).values
                    for s, x in x_tests.items()
                }
                self._evaluate(
                    command, Method.CAUSAL, adjusted_train.values, suite.train.labels,
                    adjusted_tests, suite, rows, predictions,
                )

            self.logger.info(
                "Replication finished",
                extra={
                    "final_loss": round(trained.loss_trace[-1], 6),
                    "final_loss_balanced": round(balanced_trained.loss_trace[-1], 6),
                    "duration_seconds": round(time.time() - start_time, 2),
                },
            )

        return ReplicationOutcome(
            replication=command.replication, rows=rows, predictions=predictions
        )

    @staticmethod
    def _network_config(base: NetworkConfig, train_set: ColoredDataset, seed: int) -> NetworkConfig:
        """The configured architecture with the input width of the loaded images."""
        height, width = train_set.image_shape
        sizes = (2 * height * width,) + tuple(base.layer_sizes[1:])
        return replace(base, layer_sizes=sizes, seed=seed)

    def _evaluate(
        self,
        command: RunReplicationCommand,
        method: Method,
        x_train: np.ndarray,
        y_train: np.ndarray,
        x_tests: dict[ShiftLevel, np.ndarray],
        suite: ShiftSuite,
        rows: list[ResultRow],
        predictions: list[PredictionRecord],
    ) -> None:
        config = command.config
        options = config.logistic
        head = logistic_fit(
            x_train,
            y_train,
            max_iter=options.max_iter,
            tolerance=options.tolerance,
            l2_penalty=options.l2_penalty,
        )
        if not head.converged:
            self.logger.warning(
                "Logistic head stopped at the iteration cap",
                extra={"iterations": head.iterations},
            )

        for shift in ShiftLevel.ordered():
            test = suite.tests[shift]
            r_hat = predict_proba(head, x_tests[shift])
            # labels enter only here, for scoring and diagnostics
            acc = accuracy(classify(r_hat, options.threshold), test.labels)
            report = ci_report(
                r_hat,
                test.colors,
                test.labels,
                independence_threshold=config.thresholds.independence,
                dependence_threshold=config.thresholds.dependence,
                pr=test.pr,
            )
            rows.append(ResultRow(
                replication=command.replication,
                shift=shift,
                method=method,
                accuracy=acc,
                ci_report=report,
            ))
            if config.save_predictions:
                predictions.append(PredictionRecord(
                    replication=command.replication,
                    shift=shift,
                    method=method,
                    r_hat=r_hat,
                    colors=test.colors.copy(),
                    labels=test.labels.copy(),
                ))
            self.logger.debug(
                "Evaluated shift",
                extra={"shift": shift.value, "accuracy": round(acc, 4)},
            )
