"""
Colored MNIST generation.

Labels are binarized (digits 0-4 -> 0, 5-9 -> 1) and the color confounder
is injected by coloring an exact proportion pr of label-1 images red and
of label-0 images green. The shift ladder colors the same raw test images
at six different proportions.
"""

import math

import numpy as np

from ..exceptions import InvalidParameterError, LabelDomainError, ShapeError
from ..models.dataset import (
    GREEN,
    GREEN_CHANNEL,
    RED,
    RED_CHANNEL,
    TRAIN_PR,
    ColoredDataset,
    RawMnist,
    ShiftLevel,
    ShiftSuite,
)


def exact_count(pr: float, n: int) -> int:
    """round(pr * n), halves rounded up."""
    return int(math.floor(pr * n + 0.5))


def binarize_labels(digits: np.ndarray) -> np.ndarray:
    """Map digits 0-4 to 0 and 5-9 to 1."""
    digits = np.asarray(digits)
    if digits.size and (digits.min() < 0 or digits.max() > 9):
        bad = digits[(digits < 0) | (digits > 9)]
        raise LabelDomainError(f"digits must lie in {{0..9}}, found {bad[:5].tolist()}")
    return (digits >= 5).astype(np.uint8)


def subset_raw(raw: RawMnist, n: int | None, seed: int) -> RawMnist:
    """First ``n`` examples after a seeded shuffle (all of them when n is None)."""
    if n is None or n >= raw.n:
        return raw
    if n < 1:
        raise InvalidParameterError(f"subset size must be positive, got {n}")
    order = np.random.default_rng(seed).permutation(raw.n)[:n]
    return RawMnist(images=raw.images[order], digits=raw.digits[order])


def downscale_raw(raw: RawMnist) -> RawMnist:
    """Average-pool 2x2 blocks (28x28 -> 14x14)."""
    n, h, w = raw.images.shape
    if h % 2 or w % 2:
        raise ShapeError(f"cannot 2x2-pool images of size {h}x{w}")
    pooled = raw.images.reshape(n, h // 2, 2, w // 2, 2).astype(np.float64).mean(axis=(2, 4))
    return RawMnist(images=np.rint(pooled).astype(np.uint8), digits=raw.digits)


def colorize(raw: RawMnist, pr: float, seed: int) -> ColoredDataset:
    """
    Color digits so that exactly round(pr * n1) label-1 images are red and
    round(pr * n0) label-0 images are green.

    The colored subsets are chosen by a seeded shuffle within each label.
    """
    if not 0.0 <= pr <= 1.0:
        raise InvalidParameterError(f"pr must lie in [0, 1], got {pr}")

    rng = np.random.default_rng(seed)
    labels = binarize_labels(raw.digits)
    colors = np.empty(raw.n, dtype=np.uint8)

    # label 1 -> mostly red, label 0 -> mostly green
    for label, majority, minority in ((1, RED, GREEN), (0, GREEN, RED)):
        members = np.flatnonzero(labels == label)
        members = members[rng.permutation(members.size)]
        count = exact_count(pr, members.size)
        colors[members[:count]] = majority
        colors[members[count:]] = minority

    images = np.zeros((raw.n, 2, raw.height, raw.width), dtype=np.uint8)
    red = colors == RED
    images[red, RED_CHANNEL] = raw.images[red]
    images[~red, GREEN_CHANNEL] = raw.images[~red]

    return ColoredDataset(images=images, labels=labels, colors=colors, pr=float(pr))


def make_shift_suite(train: RawMnist, test: RawMnist, seed: int) -> ShiftSuite:
    """
    Color the training set at pr = 0.98 and the test images once per shift level.

    Every test set colors the same raw test images with its own child seed.
    """
    children = np.random.SeedSequence(seed).spawn(1 + len(ShiftLevel))
    seeds = [int(child.generate_state(1)[0]) for child in children]

    colored_train = colorize(train, TRAIN_PR, seeds[0])
    tests = {
        level: colorize(test, level.pr, level_seed)
        for level, level_seed in zip(ShiftLevel.ordered(), seeds[1:])
    }
    return ShiftSuite(train=colored_train, tests=tests)


def joint_proportions(dataset: ColoredDataset) -> np.ndarray:
    """2x2 table of Pr(C = c, Y = y), rows indexed by color, columns by label."""
    table = np.zeros((2, 2))
    for (y, c), count in dataset.category_counts().items():
        table[c, y] = count
    return table / max(dataset.n, 1)
