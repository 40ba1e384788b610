"""
Binary container for colored datasets.

Little-endian layout:

    uint32 n, uint32 channels (= 2), uint32 H, uint32 W
    n * channels * H * W  uint8   images, row-major
    n                     uint8   labels
    n                     uint8   colors (0 = green, 1 = red)
    [float64 pr]                  optional trailer

Containers without the trailer get pr re-estimated from the counts.
"""

import struct
from pathlib import Path
from typing import Union

import numpy as np

from ...domain.exceptions import DatasetConsistencyError, IdxFormatError, TruncatedFileError
from ...domain.models.dataset import (
    GREEN,
    GREEN_CHANNEL,
    RED,
    RED_CHANNEL,
    ColoredDataset,
    ShiftLevel,
    ShiftSuite,
)

HEADER = struct.Struct("<IIII")
PR_TRAILER = struct.Struct("<d")

PathLike = Union[str, Path]


def save_colored_dataset(path: PathLike, dataset: ColoredDataset, include_pr: bool = True) -> Path:
    """Serialize ``dataset``; the pr trailer is written unless ``include_pr`` is False."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n, channels, height, width = dataset.images.shape
    with open(path, "wb") as f:
        f.write(HEADER.pack(n, channels, height, width))
        f.write(np.ascontiguousarray(dataset.images, dtype=np.uint8).tobytes())
        f.write(np.ascontiguousarray(dataset.labels, dtype=np.uint8).tobytes())
        f.write(np.ascontiguousarray(dataset.colors, dtype=np.uint8).tobytes())
        if include_pr:
            f.write(PR_TRAILER.pack(float(dataset.pr)))
    return path


def estimate_pr(labels: np.ndarray, colors: np.ndarray) -> float:
    """Share of images colored with their label's majority color."""
    if labels.size == 0:
        return 0.0
    coupled = np.sum((labels == 1) & (colors == RED)) + np.sum((labels == 0) & (colors == GREEN))
    return float(coupled / labels.size)


def load_colored_dataset(path: PathLike) -> ColoredDataset:
    """
    Read a colored dataset container.

    Raises:
        TruncatedFileError: Fewer bytes than the header announces
        IdxFormatError: Wrong channel count or unexpected trailing bytes
        DatasetConsistencyError: Non-binary labels/colors, or a pixel in the
            channel opposite to the recorded color
    """
    path = Path(path)
    data = path.read_bytes()
    if len(data) < HEADER.size:
        raise TruncatedFileError(f"{path}: {len(data)} bytes, shorter than the header")
    n, channels, height, width = HEADER.unpack_from(data)
    if channels != 2:
        raise IdxFormatError(f"{path}: expected 2 channels, header says {channels}")

    image_bytes = n * channels * height * width
    body = HEADER.size + image_bytes + 2 * n
    if len(data) < body:
        raise TruncatedFileError(f"{path}: expected at least {body} bytes, found {len(data)}")

    offset = HEADER.size
    images = np.frombuffer(data, dtype=np.uint8, count=image_bytes, offset=offset)
    images = images.reshape(n, channels, height, width).copy()
    offset += image_bytes
    labels = np.frombuffer(data, dtype=np.uint8, count=n, offset=offset).copy()
    offset += n
    colors = np.frombuffer(data, dtype=np.uint8, count=n, offset=offset).copy()
    offset += n

    extra = len(data) - offset
    if extra == PR_TRAILER.size:
        (pr,) = PR_TRAILER.unpack_from(data, offset)
    elif extra == 0:
        pr = estimate_pr(labels, colors)
    else:
        raise IdxFormatError(f"{path}: {extra} unexpected trailing bytes")

    if labels.size and labels.max() > 1:
        raise DatasetConsistencyError(f"{path}: labels must be binary")
    if colors.size and colors.max() > 1:
        raise DatasetConsistencyError(f"{path}: colors must be 0 (green) or 1 (red)")
    if np.any(images[colors == RED, GREEN_CHANNEL]) or np.any(images[colors == GREEN, RED_CHANNEL]):
        raise DatasetConsistencyError(f"{path}: pixels found in the channel opposite to the recorded color")

    return ColoredDataset(images=images, labels=labels, colors=colors, pr=float(pr))


def shift_suite_paths(directory: PathLike) -> dict[str, Path]:
    """File names used for a shift suite: train.bin and test_<shift>.bin."""
    directory = Path(directory)
    paths = {"train": directory / "train.bin"}
    for shift in ShiftLevel.ordered():
        paths[shift.value] = directory / f"test_{shift.value}.bin"
    return paths


def save_shift_suite(directory: PathLike, suite: ShiftSuite) -> dict[str, Path]:
    """Write the training set and the six test sets into ``directory``."""
    paths = shift_suite_paths(directory)
    save_colored_dataset(paths["train"], suite.train)
    for shift, dataset in suite.tests.items():
        save_colored_dataset(paths[shift.value], dataset)
    return paths


def load_shift_suite(directory: PathLike) -> ShiftSuite:
    paths = shift_suite_paths(directory)
    return ShiftSuite(
        train=load_colored_dataset(paths["train"]),
        tests={shift: load_colored_dataset(paths[shift.value]) for shift in ShiftLevel.ordered()},
    )
