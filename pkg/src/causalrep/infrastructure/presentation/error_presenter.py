"""
ErrorPresenter - User-friendly error message generation.

Transforms domain and I/O exceptions into short messages with actionable
suggestions. Verbose mode appends the exception type, cause chain and
traceback.
"""

import traceback
from typing import List, Tuple

from pydantic import ValidationError

from ...domain.exceptions import (
    CannotBalanceError,
    CollinearityError,
    DatasetConsistencyError,
    DegenerateInputError,
    DegenerateLabelsError,
    IdxFormatError,
    InvalidJointTableError,
    InvalidParameterError,
    LabelDomainError,
    NetworkConfigError,
    ReplicationError,
    ShapeError,
    SingularDesignError,
    TrainingDivergenceError,
    TruncatedFileError,
)


class ErrorPresenter:
    """
    Presents errors to users with helpful messages and actions.

    Provides two modes:
    - Normal: User-friendly message with actionable suggestions
    - Verbose: Technical details including stack trace
    """

    @staticmethod
    def present(error: BaseException, verbose: bool = False) -> str:
        message, suggestions = ErrorPresenter._get_friendly_message(error)
        if verbose:
            return ErrorPresenter._format_verbose(error, message, suggestions)
        return ErrorPresenter._format_friendly(message, suggestions)

    @staticmethod
    def _get_friendly_message(error: BaseException) -> Tuple[str, List[str]]:
        """Friendly message and suggestions for ``error``."""
        error_str = str(error)

        if isinstance(error, ReplicationError):
            cause = error.__cause__
            detail, suggestions = (
                ErrorPresenter._get_friendly_message(cause) if cause else (error_str, [])
            )
            return (
                f"Replication {error.replication} failed during '{error.step}': {detail}",
                suggestions,
            )

        if isinstance(error, IdxFormatError):
            return (
                f"Not a valid IDX file: {error_str}",
                [
                    "Image files must start with magic 0x00000803, label files with 0x00000801",
                    "Check that image and label paths are not swapped",
                    "Decompress archives other than .gz before use",
                ],
            )

        if isinstance(error, TruncatedFileError):
            return (
                f"File is truncated: {error_str}",
                ["Re-download or re-create the file", "Check the disk is not full"],
            )

        if isinstance(error, DatasetConsistencyError):
            return (
                f"Inconsistent data: {error_str}",
                ["Pair each image file with the label file of the same split"],
            )

        if isinstance(error, LabelDomainError):
            return (f"Invalid digit labels: {error_str}", ["Labels must be digits 0-9"])

        if isinstance(error, InvalidJointTableError):
            return (
                f"Invalid joint Pr(C, Y) table: {error_str}",
                ["Entries must be nonnegative and sum to 1"],
            )

        if isinstance(error, SingularDesignError):
            return (
                f"Cannot separate label and confounder effects: {error_str}",
                [
                    "The confounder may be fully determined by the label in the training sample",
                    "Use a training coupling proportion below 1.0",
                    f"Inspect column '{error.column}' of the design",
                ],
            )

        if isinstance(error, DegenerateLabelsError):
            return (
                f"Labels contain a single class: {error_str}",
                ["The classifier needs both classes in its training data"],
            )

        if isinstance(error, (DegenerateInputError, CollinearityError)):
            return (
                f"Diagnostics cannot be computed: {error_str}",
                [
                    "Predictions, colors and labels must all vary",
                    "Provide at least 30 predictions per (shift, method) group",
                ],
            )

        if isinstance(error, CannotBalanceError):
            return (
                f"Cannot balance the training set: {error_str}",
                ["Every (label, color) category needs at least one image; lower pr or add data"],
            )

        if isinstance(error, TrainingDivergenceError):
            return (
                f"Training diverged at epoch {error.epoch}, batch {error.batch}",
                [
                    "Lower network.learning_rate",
                    "Raise network.rmsprop_epsilon",
                ],
            )

        if isinstance(error, (NetworkConfigError, ShapeError)):
            return (f"Shape or configuration mismatch: {error_str}", [
                "Check the network settings in the configuration file",
                "Make sure every input file has the same number of rows",
            ])

        if isinstance(error, InvalidParameterError):
            return (
                f"Invalid parameter: {error_str}",
                ["Check the value passed on the command line or in the configuration file"],
            )

        if isinstance(error, ValidationError):
            return (
                "Invalid configuration",
                [line for line in error_str.splitlines()[1:] if line.strip()][:6]
                + ["Show the defaults with `causalrep config --show`"],
            )

        if isinstance(error, FileNotFoundError):
            file_path = error_str.replace("[Errno 2] No such file or directory: ", "").strip("'\"")
            return (
                f"File not found: {file_path}",
                [
                    "Check the file path is correct",
                    "Point data.* in the configuration at the MNIST IDX files",
                ],
            )

        if isinstance(error, PermissionError):
            path = error_str.replace("[Errno 13] Permission denied: ", "").strip("'\"")
            return (
                f"Permission denied: {path}",
                [f"Check file permissions: `ls -la {path}`"],
            )

        if isinstance(error, KeyboardInterrupt):
            return ("Operation cancelled by user", [])

        error_type = type(error).__name__
        return (
            f"An error occurred: {error_type}",
            [
                f"Error details: {error_str or 'No details available'}",
                "Run with --verbose for more information",
            ],
        )

    @staticmethod
    def _format_friendly(message: str, suggestions: List[str]) -> str:
        output = [f"Error: {message}"]
        if suggestions:
            output.append("")
            output.append("Suggestions:")
            for suggestion in suggestions:
                output.append(f"  - {suggestion}")
        return "\n".join(output)

    @staticmethod
    def _format_verbose(error: BaseException, message: str, suggestions: List[str]) -> str:
        output = [ErrorPresenter._format_friendly(message, suggestions)]

        output.append("")
        output.append("Technical Details:")
        output.append(f"  Error Type: {type(error).__name__}")
        output.append(f"  Error Message: {error}")

        cause = error.__cause__
        while cause is not None:
            output.append(f"  Caused by: {type(cause).__name__}: {cause}")
            cause = cause.__cause__

        output.append("")
        output.append("Traceback:")
        for line in traceback.format_exception(type(error), error, error.__traceback__):
            for sub_line in line.rstrip().split("\n"):
                output.append(f"  {sub_line}")

        return "\n".join(output)
