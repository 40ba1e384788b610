"""Dataset domain models: raw MNIST, colored MNIST and synthetic SCM data."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..exceptions import DatasetConsistencyError, LabelDomainError, ShapeError

GREEN = 0
RED = 1

# Channel order of the two-channel representation.
RED_CHANNEL = 0
GREEN_CHANNEL = 1


class ShiftLevel(str, Enum):
    """Test-set shift levels and the coupling proportion each one is colored with."""
    NO_SHIFT = "no-shift"
    SHIFT_1 = "shift-1"
    SHIFT_2 = "shift-2"
    SHIFT_3 = "shift-3"
    SHIFT_4 = "shift-4"
    SHIFT_5 = "shift-5"

    @property
    def pr(self) -> float:
        """Coupling proportion used to color this test set."""
        return _SHIFT_PR[self]

    @classmethod
    def ordered(cls) -> list["ShiftLevel"]:
        """Shift levels from no shift to the strongest shift."""
        return list(cls)


_SHIFT_PR = {
    ShiftLevel.NO_SHIFT: 0.98,
    ShiftLevel.SHIFT_1: 0.9,
    ShiftLevel.SHIFT_2: 0.7,
    ShiftLevel.SHIFT_3: 0.5,
    ShiftLevel.SHIFT_4: 0.3,
    ShiftLevel.SHIFT_5: 0.1,
}

TRAIN_PR = 0.98


@dataclass(frozen=True)
class RawMnist:
    """
    Grayscale digit images with their digit labels.

    images: (n, H, W) uint8, digits: (n,) uint8 in {0..9}.
    """
    images: np.ndarray
    digits: np.ndarray

    def __post_init__(self):
        if self.images.ndim != 3:
            raise ShapeError(f"images must be (n, H, W), got shape {self.images.shape}")
        if self.images.shape[0] != self.digits.shape[0]:
            raise DatasetConsistencyError(
                f"{self.images.shape[0]} images but {self.digits.shape[0]} labels"
            )
        if self.digits.size and (self.digits.min() < 0 or self.digits.max() > 9):
            raise LabelDomainError("digit labels must lie in {0..9}")

    @property
    def n(self) -> int:
        return int(self.images.shape[0])

    @property
    def height(self) -> int:
        return int(self.images.shape[1])

    @property
    def width(self) -> int:
        return int(self.images.shape[2])


@dataclass(frozen=True)
class ColoredDataset:
    """
    Two-channel (red, green) digit images with binary label Y and color C.

    images: (n, 2, H, W) uint8; labels, colors: (n,) uint8; pr: coupling
    proportion the set was colored with.
    """
    images: np.ndarray
    labels: np.ndarray
    colors: np.ndarray
    pr: float

    def __post_init__(self):
        if self.images.ndim != 4 or self.images.shape[1] != 2:
            raise ShapeError(f"images must be (n, 2, H, W), got shape {self.images.shape}")
        n = self.images.shape[0]
        if self.labels.shape != (n,) or self.colors.shape != (n,):
            raise DatasetConsistencyError(
                f"{n} images but {self.labels.shape[0]} labels and {self.colors.shape[0]} colors"
            )

    @property
    def n(self) -> int:
        return int(self.images.shape[0])

    @property
    def image_shape(self) -> tuple[int, int]:
        return int(self.images.shape[2]), int(self.images.shape[3])

    def category_counts(self) -> dict[tuple[int, int], int]:
        """Number of examples per (label, color) category."""
        return {
            (y, c): int(np.sum((self.labels == y) & (self.colors == c)))
            for y in (0, 1)
            for c in (GREEN, RED)
        }


@dataclass(frozen=True)
class ShiftSuite:
    """One biased training set plus the six colored test sets of the shift ladder."""
    train: ColoredDataset
    tests: dict[ShiftLevel, ColoredDataset] = field(default_factory=dict)


@dataclass(frozen=True)
class SynthScmDataset:
    """
    Data drawn from the linear structural model x_j = mu_j + b_y,j y + b_c,j c + w_j.

    true_coefs has one row per feature: (mu, beta_xy, beta_xc).
    """
    y: np.ndarray
    c: np.ndarray
    x: np.ndarray
    true_coefs: np.ndarray
    noise_sd: float

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    @property
    def k(self) -> int:
        return int(self.x.shape[1])
