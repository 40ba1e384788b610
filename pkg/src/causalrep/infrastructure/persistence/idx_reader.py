"""
Reader (and writer) for the IDX container used by the MNIST distribution.

Layout, all header integers big-endian:

    [offset] [type]          [value]
    0000     32 bit integer  0x00000803 (2051) images / 0x00000801 (2049) labels
    0004     32 bit integer  number of items
    0008     32 bit integer  rows      (images only)
    0012     32 bit integer  columns   (images only)
    ....     unsigned bytes  row-major payload

Files ending in ``.gz`` are decompressed transparently.
"""

import gzip
import struct
from pathlib import Path
from typing import BinaryIO, Union

import numpy as np

from ...domain.exceptions import DatasetConsistencyError, IdxFormatError, TruncatedFileError
from ...domain.models.dataset import RawMnist

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801

PathLike = Union[str, Path]


def _open(path: Path) -> BinaryIO:
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return open(path, "rb")


def _read_exact(f: BinaryIO, size: int, path: Path, what: str) -> bytes:
    data = f.read(size)
    if len(data) < size:
        raise TruncatedFileError(
            f"{path}: expected {size} bytes of {what}, file ends after {len(data)}"
        )
    return data


def _read_idx(path: PathLike, magic: int, dims: int) -> tuple[tuple[int, ...], np.ndarray]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"IDX file not found: {path}")

    with _open(path) as f:
        (found,) = struct.unpack(">I", _read_exact(f, 4, path, "magic number"))
        if found != magic:
            raise IdxFormatError(
                f"{path}: magic number 0x{found:08x}, expected 0x{magic:08x}"
            )
        shape = struct.unpack(f">{dims}I", _read_exact(f, 4 * dims, path, "header"))
        size = int(np.prod(shape, dtype=np.int64))
        payload = _read_exact(f, size, path, "payload")
        if f.read(1):
            raise IdxFormatError(f"{path}: trailing bytes after {size}-byte payload")

    return shape, np.frombuffer(payload, dtype=np.uint8).reshape(shape).copy()


def read_idx_images(path: PathLike) -> np.ndarray:
    """(n, rows, cols) uint8 array from an IDX image file."""
    _, images = _read_idx(path, IMAGE_MAGIC, 3)
    return images


def read_idx_labels(path: PathLike) -> np.ndarray:
    """(n,) uint8 array from an IDX label file."""
    _, labels = _read_idx(path, LABEL_MAGIC, 1)
    return labels


def load_mnist_idx(image_path: PathLike, label_path: PathLike) -> RawMnist:
    """
    Load an image/label file pair.

    Raises:
        IdxFormatError: Wrong magic number or trailing data
        DatasetConsistencyError: Image and label counts differ
        TruncatedFileError: A file ends before its header says it should
        LabelDomainError: A digit label outside {0..9}
    """
    images = read_idx_images(image_path)
    digits = read_idx_labels(label_path)
    if images.shape[0] != digits.shape[0]:
        raise DatasetConsistencyError(
            f"{image_path} holds {images.shape[0]} images but "
            f"{label_path} holds {digits.shape[0]} labels"
        )
    return RawMnist(images=images, digits=digits)


def write_idx_images(path: PathLike, images: np.ndarray) -> Path:
    """Write (n, rows, cols) uint8 images as an IDX file (gzip if ``.gz``)."""
    images = np.ascontiguousarray(images, dtype=np.uint8)
    if images.ndim != 3:
        raise ValueError(f"images must be (n, rows, cols), got shape {images.shape}")
    return _write_idx(path, IMAGE_MAGIC, images)


def write_idx_labels(path: PathLike, labels: np.ndarray) -> Path:
    """Write (n,) uint8 labels as an IDX file (gzip if ``.gz``)."""
    labels = np.ascontiguousarray(labels, dtype=np.uint8)
    if labels.ndim != 1:
        raise ValueError(f"labels must be a vector, got shape {labels.shape}")
    return _write_idx(path, LABEL_MAGIC, labels)


def _write_idx(path: PathLike, magic: int, array: np.ndarray) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = struct.pack(f">I{array.ndim}I", magic, *array.shape)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "wb") as f:
        f.write(header)
        f.write(array.tobytes())
    return path
