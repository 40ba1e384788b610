"""Balancing configuration."""

from dataclasses import dataclass
from typing import Literal, Union

from ..exceptions import BalanceError

EQUALIZED = "equalized"


@dataclass(frozen=True)
class BalanceConfig:
    """
    How the (label, color) categories are equalized.

    target_per_category is either a count or ``"equalized"``; minority images
    receive up to ``copies_per_minority_image`` rotated copies with angles
    drawn uniformly from [-rotation_range, +rotation_range] degrees.
    """
    target_per_category: Union[int, Literal["equalized"]] = EQUALIZED
    copies_per_minority_image: int = 24
    rotation_range: float = 25.0
    seed: int = 0

    def __post_init__(self):
        target = self.target_per_category
        if target != EQUALIZED and (not isinstance(target, int) or target < 1):
            raise BalanceError(
                f"target_per_category must be a positive count or '{EQUALIZED}', got {target!r}"
            )
        if self.copies_per_minority_image < 1:
            raise BalanceError("copies_per_minority_image must be positive")
        if not 0.0 < self.rotation_range <= 45.0:
            raise BalanceError("rotation_range must lie in (0, 45] degrees")
