"""
Rotation-based SMOTE balancing of the (label, color) categories.

Majority categories are subsampled without replacement; minority categories
are topped up with randomly rotated copies of their own images, so every
category ends with the same count.
"""

import numpy as np
from scipy import ndimage

from ..exceptions import CannotBalanceError, InvalidParameterError
from ..models.balance import EQUALIZED, BalanceConfig
from ..models.dataset import ColoredDataset
from ...infrastructure.logging import CausalRepLogger

MAX_ROTATION = 45.0

# Category counts within this many images of each other count as balanced.
ROUNDING_SLACK = 1


def rotate_image(image: np.ndarray, angle_degrees: float) -> np.ndarray:
    """
    Rotate about the image center with nearest-neighbor sampling.

    Accepts a single H x W channel or a (channels, H, W) stack (each channel
    rotated identically). Source pixels outside the image read as 0.
    """
    if abs(angle_degrees) > MAX_ROTATION:
        raise InvalidParameterError(
            f"|angle| must be at most {MAX_ROTATION} degrees, got {angle_degrees}"
        )
    image = np.asarray(image)
    axes = (0, 1) if image.ndim == 2 else (image.ndim - 2, image.ndim - 1)
    return ndimage.rotate(
        image, angle_degrees, axes=axes, reshape=False, order=0, mode="constant", cval=0
    )


def balance_target(counts: list[int], config: BalanceConfig) -> tuple[int, bool]:
    """
    Common per-category count, and whether a requested target had to be capped.

    The equalized target is min(largest category, smallest category x
    (copies + 1)): no category needs more copies than allowed and none is
    grown past the largest one. Counts that already agree up to
    ROUNDING_SLACK are equalized down to the smallest one, without copies.
    """
    achievable = min(max(counts), min(counts) * (config.copies_per_minority_image + 1))
    if config.target_per_category == EQUALIZED:
        if max(counts) - min(counts) <= ROUNDING_SLACK:
            return min(counts), False
        return achievable, False
    requested = int(config.target_per_category)
    if requested > achievable:
        return achievable, True
    return requested, False


def smote_balance(data: ColoredDataset, config: BalanceConfig) -> ColoredDataset:
    """
    Equalize the four (label, color) categories.

    Raises:
        CannotBalanceError: If any category is empty
    """
    logger = CausalRepLogger.get_instance()
    rng = np.random.default_rng(config.seed)

    categories = sorted(data.category_counts())
    members = {
        key: np.flatnonzero((data.labels == key[0]) & (data.colors == key[1]))
        for key in categories
    }
    empty = [key for key in categories if members[key].size == 0]
    if empty:
        raise CannotBalanceError(f"empty (label, color) categories: {empty}")

    target, capped = balance_target([members[k].size for k in categories], config)
    if capped:
        logger.warning(
            "Requested balance target capped",
            extra={"requested": config.target_per_category, "target": target},
        )

    images, labels, colors = [], [], []
    synthetic = 0
    for key in categories:
        idx = members[key]
        if idx.size >= target:
            chosen = rng.choice(idx, size=target, replace=False)
            images.append(data.images[chosen])
        else:
            needed = target - idx.size
            # Round-robin over a shuffled copy order: each source gets
            # floor or ceil(needed / size) copies, never more than allowed.
            sources = np.resize(rng.permutation(idx), needed)
            angles = rng.uniform(-config.rotation_range, config.rotation_range, size=needed)
            copies = np.stack(
                [rotate_image(data.images[s], a) for s, a in zip(sources, angles)]
            )
            images.extend((data.images[idx], copies))
            synthetic += needed
        labels.append(np.full(target, key[0], dtype=np.uint8))
        colors.append(np.full(target, key[1], dtype=np.uint8))

    order = rng.permutation(4 * target)
    balanced = ColoredDataset(
        images=np.concatenate(images)[order],
        labels=np.concatenate(labels)[order],
        colors=np.concatenate(colors)[order],
        pr=0.5,
    )
    logger.info(
        "Balanced training set",
        extra={
            "per_category": target,
            "synthetic_copies": synthetic,
            "input_counts": {f"{y}/{c}": int(members[(y, c)].size) for y, c in categories},
        },
    )
    return balanced
