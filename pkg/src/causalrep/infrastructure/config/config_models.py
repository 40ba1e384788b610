"""Configuration data models using Pydantic."""

from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class DataConfig(BaseModel):
    """MNIST files and desk-scale subsetting."""
    train_images: str = Field(
        default="./data/train-images-idx3-ubyte",
        description="IDX image file of the training split (.gz accepted)"
    )
    train_labels: str = Field(
        default="./data/train-labels-idx1-ubyte",
        description="IDX label file of the training split (.gz accepted)"
    )
    test_images: str = Field(
        default="./data/t10k-images-idx3-ubyte",
        description="IDX image file of the test split (.gz accepted)"
    )
    test_labels: str = Field(
        default="./data/t10k-labels-idx1-ubyte",
        description="IDX label file of the test split (.gz accepted)"
    )
    n_train: Optional[int] = Field(
        default=12000,
        ge=10,
        description="Training images kept after a seeded shuffle (null = all)"
    )
    n_test: Optional[int] = Field(
        default=2000,
        ge=30,
        description="Test images kept after a seeded shuffle (null = all)"
    )
    downscale: bool = Field(
        default=False,
        description="Average-pool 28x28 images down to 14x14"
    )


class NetworkConfigModel(BaseModel):
    """Feature learner architecture and RMSprop training settings."""
    hidden_sizes: List[int] = Field(
        default_factory=lambda: [64, 16],
        description="Hidden layer widths; the last one is the feature layer"
    )
    dropout_rates: List[float] = Field(
        default_factory=lambda: [0.25, 0.0],
        description="Dropout rate after each hidden layer"
    )
    activation: Literal["relu", "tanh"] = Field(
        default="relu",
        description="Hidden layer nonlinearity"
    )
    num_classes: int = Field(default=2, ge=2, le=2, description="Softmax width")
    epochs: int = Field(default=10, ge=1, le=1000, description="Training epochs")
    batch_size: int = Field(default=128, ge=1, le=65536, description="Mini-batch size")
    learning_rate: float = Field(default=1e-3, ge=0.0, le=1.0, description="RMSprop step size")
    rmsprop_decay: float = Field(default=0.9, ge=0.0, lt=1.0, description="RMSprop rho")
    rmsprop_epsilon: float = Field(default=1e-8, gt=0.0, le=1.0, description="RMSprop epsilon")

    @field_validator('hidden_sizes')
    @classmethod
    def validate_hidden_sizes(cls, v):
        """Ensure widths are positive."""
        if any(width < 1 for width in v):
            raise ValueError("hidden layer widths must be positive")
        return v

    @field_validator('dropout_rates')
    @classmethod
    def validate_dropout(cls, v):
        """Ensure dropout rates lie in [0, 1)."""
        if any(not 0.0 <= rate < 1.0 for rate in v):
            raise ValueError("dropout rates must lie in [0, 1)")
        return v

    @model_validator(mode='after')
    def validate_lengths(self):
        """One dropout rate per hidden layer."""
        if len(self.dropout_rates) != len(self.hidden_sizes):
            raise ValueError(
                f"{len(self.hidden_sizes)} hidden layers but "
                f"{len(self.dropout_rates)} dropout rates"
            )
        return self


class BalanceConfigModel(BaseModel):
    """Rotation-based SMOTE balancing."""
    target_per_category: Union[Literal["equalized"], int] = Field(
        default="equalized",
        description="Images per (label, color) category, or 'equalized'"
    )
    copies_per_minority_image: int = Field(
        default=24,
        ge=1,
        le=1000,
        description="Maximum rotated copies generated from one minority image"
    )
    rotation_range: float = Field(
        default=25.0,
        gt=0.0,
        le=45.0,
        description="Rotation angles are drawn uniformly from [-range, range] degrees"
    )

    @field_validator('target_per_category')
    @classmethod
    def validate_target(cls, v):
        if isinstance(v, int) and v < 1:
            raise ValueError("target_per_category must be positive")
        return v


class DeconfoundConfigModel(BaseModel):
    """Counterfactual adjustment."""
    min_singular_value: float = Field(
        default=1e-8,
        gt=0.0,
        le=1e-2,
        description="Relative rank tolerance of the [1, Y, C] design"
    )


class LogisticConfigModel(BaseModel):
    """Logistic head fitted on features."""
    max_iter: int = Field(default=5000, ge=1, le=1_000_000, description="Iteration cap")
    tolerance: float = Field(default=1e-6, gt=0.0, le=1e-1, description="Gradient-norm stop")
    l2_penalty: float = Field(default=1e-4, ge=0.0, le=1.0, description="Ridge penalty on slopes")
    threshold: float = Field(default=0.5, gt=0.0, lt=1.0, description="Decision threshold")


class DiagnosticsConfig(BaseModel):
    """Reading correlations as dependence or independence."""
    independence_threshold: float = Field(default=0.1, ge=0.0, le=1.0)
    dependence_threshold: float = Field(default=0.2, ge=0.0, le=1.0)

    @model_validator(mode='after')
    def validate_order(self):
        if self.independence_threshold >= self.dependence_threshold:
            raise ValueError("independence_threshold must be below dependence_threshold")
        return self


class ExperimentConfigModel(BaseModel):
    """Replication protocol."""
    replications: int = Field(default=10, ge=1, le=10000, description="Number of replications")
    base_seed: int = Field(default=0, ge=0, description="Seed of replication 0")
    seed_stride: int = Field(
        default=1000,
        ge=1,
        description="Replication i uses base_seed + i * seed_stride"
    )
    workers: int = Field(default=1, ge=1, le=64, description="Replications run concurrently")
    save_predictions: bool = Field(
        default=False,
        description="Also write predictions.csv for the diagnose command"
    )


class OutputConfig(BaseModel):
    """Output configuration."""
    output_directory: str = Field(
        default="./causalrep_results",
        description="Directory for CSV outputs"
    )
    default_format: str = Field(
        default="console",
        description="Summary rendering (console, json, csv)"
    )

    @field_validator('default_format')
    @classmethod
    def validate_format(cls, v):
        """Ensure format is valid."""
        valid_formats = ["console", "json", "csv"]
        if v not in valid_formats:
            raise ValueError(f"format must be one of {valid_formats}")
        return v


class LoggingConfig(BaseModel):
    """Logging configuration."""
    level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )
    file: Optional[str] = Field(
        default=None,
        description="JSON-lines log file path (null = console only)"
    )
    console: bool = Field(
        default=True,
        description="Enable console logging"
    )
    rotation: str = Field(
        default="none",
        description="Log rotation strategy (daily, none)"
    )
    retention_days: int = Field(
        default=30,
        ge=1,
        le=365,
        description="Number of days to retain logs"
    )

    @field_validator('level')
    @classmethod
    def validate_level(cls, v):
        """Ensure log level is valid."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v = v.upper()
        if v not in valid_levels:
            raise ValueError(f"level must be one of {valid_levels}")
        return v

    @field_validator('rotation')
    @classmethod
    def validate_rotation(cls, v):
        """Ensure rotation strategy is valid."""
        valid_strategies = ["daily", "none"]
        v = v.lower()
        if v not in valid_strategies:
            raise ValueError(f"rotation must be one of {valid_strategies}")
        return v


class CausalRepConfig(BaseModel):
    """Complete causalrep configuration."""
    model_config = ConfigDict(
        extra="forbid",
        validate_assignment=True
    )

    data: DataConfig = Field(default_factory=DataConfig)
    network: NetworkConfigModel = Field(default_factory=NetworkConfigModel)
    balance: BalanceConfigModel = Field(default_factory=BalanceConfigModel)
    deconfound: DeconfoundConfigModel = Field(default_factory=DeconfoundConfigModel)
    logistic: LogisticConfigModel = Field(default_factory=LogisticConfigModel)
    diagnostics: DiagnosticsConfig = Field(default_factory=DiagnosticsConfig)
    experiment: ExperimentConfigModel = Field(default_factory=ExperimentConfigModel)
    output: OutputConfig = Field(default_factory=OutputConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    def to_yaml(self) -> str:
        """Convert configuration to YAML string."""
        import yaml
        return yaml.dump(self.model_dump(), default_flow_style=False, sort_keys=False)
