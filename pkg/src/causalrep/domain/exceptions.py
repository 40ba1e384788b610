"""Domain exceptions for causalrep."""

from typing import Optional


class CausalRepDomainError(Exception):
    """Base exception for domain errors."""
    pass


class DatasetError(CausalRepDomainError):
    """Base exception for dataset loading and generation errors."""
    pass


class IdxFormatError(DatasetError):
    """Raised when an IDX file has a wrong magic number or malformed header."""
    pass


class DatasetConsistencyError(DatasetError):
    """Raised when image and label containers disagree (e.g. counts)."""
    pass


class TruncatedFileError(DatasetError, OSError):
    """Raised when a binary file ends before its header says it should."""
    pass


class LabelDomainError(DatasetError):
    """Raised when digit labels fall outside {0..9}."""
    pass


class InvalidJointTableError(DatasetError):
    """Raised when a joint Pr(C, Y) table is not a valid 2x2 distribution."""
    pass


class InvalidParameterError(CausalRepDomainError, ValueError):
    """Raised when a numeric parameter lies outside its allowed range."""
    pass


class ShapeError(CausalRepDomainError):
    """Raised when array dimensions do not match what an operation expects."""
    pass


class NetworkConfigError(CausalRepDomainError):
    """Raised when a network configuration is invalid."""
    pass


class TrainingDivergenceError(CausalRepDomainError):
    """Raised when the training loss becomes non-finite."""

    def __init__(self, epoch: int, batch: int, loss: float):
        self.epoch = epoch
        self.batch = batch
        self.loss = loss
        super().__init__(
            f"Training diverged at epoch {epoch}, batch {batch} (loss={loss})"
        )


class StatisticsError(CausalRepDomainError):
    """Base exception for regression and correlation errors."""
    pass


class SingularDesignError(StatisticsError):
    """Raised when a design matrix is (numerically) rank deficient."""

    def __init__(self, column: str, detail: str = ""):
        self.column = column
        message = f"Singular design: column '{column}' is collinear with earlier columns"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class DegenerateLabelsError(StatisticsError):
    """Raised when binary labels contain a single class."""
    pass


class DegenerateVarianceError(StatisticsError):
    """Raised when a correlation input has zero variance."""
    pass


class CollinearityError(StatisticsError):
    """Raised when a partial correlation conditions on a perfectly correlated variable."""
    pass


class BalanceError(CausalRepDomainError):
    """Base exception for balancing errors."""
    pass


class CannotBalanceError(BalanceError):
    """Raised when a (label, color) category is empty."""
    pass


class DiagnosticsError(CausalRepDomainError):
    """Base exception for conditional-independence diagnostics."""
    pass


class DegenerateInputError(DiagnosticsError):
    """Raised when diagnostic inputs are too short or constant."""
    pass


class ReplicationError(CausalRepDomainError):
    """Raised when one replication of the experiment fails at a given step."""

    def __init__(self, replication: int, step: str, cause: Optional[BaseException] = None):
        self.replication = replication
        self.step = step
        reason = f"{type(cause).__name__}: {cause}" if cause else "unknown error"
        super().__init__(f"Replication {replication} failed during '{step}': {reason}")
