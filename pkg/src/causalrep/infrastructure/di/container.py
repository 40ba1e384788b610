"""Dependency injection container for causalrep."""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..config.config_loader import ConfigLoader
from ..config.config_models import CausalRepConfig
from ..logging import CausalRepLogger
from ...domain.models.balance import BalanceConfig
from ...domain.models.experiment import DiagnosticThresholds, ExperimentConfig, LogisticOptions
from ...domain.models.network import NetworkConfig
from ...application.commands.run_experiment import RunExperimentCommand, RunExperimentHandler
from ...application.commands.run_replication import RunReplicationHandler

# Placeholder input width; handlers re-derive it from the loaded images.
MNIST_INPUT_WIDTH = 2 * 28 * 28


@dataclass
class DIContainer:
    """
    Wires configuration, logging, handlers and stores.

    The domain never sees pydantic: the container turns the validated
    configuration sections into the domain's plain config dataclasses.
    """

    config: CausalRepConfig
    logger: CausalRepLogger
    replication_handler: RunReplicationHandler
    experiment_handler: RunExperimentHandler

    @classmethod
    def create(cls, config_path: Optional[str] = None) -> "DIContainer":
        """Load configuration from all sources and wire the application."""
        return cls.from_config(ConfigLoader.load(config_path))

    @classmethod
    def from_config(cls, config: CausalRepConfig) -> "DIContainer":
        logger = CausalRepLogger.configure(
            level=config.logging.level,
            log_file=Path(config.logging.file) if config.logging.file else None,
            console=config.logging.console,
            rotation=config.logging.rotation,
            retention_days=config.logging.retention_days,
        )
        replication_handler = RunReplicationHandler()
        return cls(
            config=config,
            logger=logger,
            replication_handler=replication_handler,
            experiment_handler=RunExperimentHandler(replication_handler),
        )

    def network_config(self, input_width: int = MNIST_INPUT_WIDTH, seed: int = 0) -> NetworkConfig:
        section = self.config.network
        hidden = len(section.hidden_sizes)
        return NetworkConfig(
            layer_sizes=(input_width, *section.hidden_sizes, section.num_classes),
            activations=(section.activation,) * hidden,
            dropout_rates=tuple(section.dropout_rates),
            epochs=section.epochs,
            batch_size=section.batch_size,
            learning_rate=section.learning_rate,
            rmsprop_decay=section.rmsprop_decay,
            rmsprop_epsilon=section.rmsprop_epsilon,
            seed=seed,
        )

    def balance_config(self, seed: int = 0) -> BalanceConfig:
        section = self.config.balance
        return BalanceConfig(
            target_per_category=section.target_per_category,
            copies_per_minority_image=section.copies_per_minority_image,
            rotation_range=section.rotation_range,
            seed=seed,
        )

    def experiment_config(self) -> ExperimentConfig:
        c = self.config
        return ExperimentConfig(
            network=self.network_config(),
            balance=self.balance_config(),
            logistic=LogisticOptions(
                max_iter=c.logistic.max_iter,
                tolerance=c.logistic.tolerance,
                l2_penalty=c.logistic.l2_penalty,
                threshold=c.logistic.threshold,
            ),
            thresholds=DiagnosticThresholds(
                independence=c.diagnostics.independence_threshold,
                dependence=c.diagnostics.dependence_threshold,
            ),
            replications=c.experiment.replications,
            base_seed=c.experiment.base_seed,
            seed_stride=c.experiment.seed_stride,
            n_train=c.data.n_train,
            n_test=c.data.n_test,
            downscale=c.data.downscale,
            min_singular_value=c.deconfound.min_singular_value,
            workers=c.experiment.workers,
            save_predictions=c.experiment.save_predictions,
        )

    def experiment_command(self, output_directory: Optional[Path] = None) -> RunExperimentCommand:
        data = self.config.data
        return RunExperimentCommand(
            config=self.experiment_config(),
            train_images=Path(data.train_images),
            train_labels=Path(data.train_labels),
            test_images=Path(data.test_images),
            test_labels=Path(data.test_labels),
            output_directory=output_directory or Path(self.config.output.output_directory),
        )

    def __repr__(self) -> str:
        return f"<DIContainer: {self.config.experiment.replications} replications>"
