"""
Network checkpoints.

Little-endian layout:

    uint32 L                        number of weight layers
    L x (uint32 fan_in, uint32 fan_out)
    for each layer: float64 W (fan_in x fan_out, row-major), float64 b (fan_out)

RMSprop state is not stored; a loaded network starts with zero state.
"""

import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ...domain.exceptions import ShapeError, TruncatedFileError
from ...domain.models.network import Network, NetworkConfig

PathLike = Union[str, Path]

_COUNT = struct.Struct("<I")
_SHAPE = struct.Struct("<II")
_FLOAT = np.dtype("<f8")


def save_checkpoint(path: PathLike, net: Network) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(_COUNT.pack(net.num_layers))
        for w in net.weights:
            f.write(_SHAPE.pack(*w.shape))
        for w, b in zip(net.weights, net.biases):
            f.write(np.ascontiguousarray(w, dtype=_FLOAT).tobytes())
            f.write(np.ascontiguousarray(b, dtype=_FLOAT).tobytes())
    return path


def load_checkpoint(path: PathLike, config: Optional[NetworkConfig] = None) -> Network:
    """
    Read a checkpoint.

    With ``config`` the stored shapes must match ``config.layer_sizes``;
    without it a config with the stored widths and default settings is built.

    Raises:
        TruncatedFileError: File shorter than its header implies
        ShapeError: Stored shapes inconsistent with each other or with ``config``
    """
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _COUNT.size:
        raise TruncatedFileError(f"{path}: empty checkpoint")
    (layers,) = _COUNT.unpack_from(data)
    offset = _COUNT.size
    if len(data) < offset + layers * _SHAPE.size:
        raise TruncatedFileError(f"{path}: header announces {layers} layers but ends early")

    shapes = []
    for _ in range(layers):
        shapes.append(_SHAPE.unpack_from(data, offset))
        offset += _SHAPE.size
    if layers == 0:
        raise ShapeError(f"{path}: checkpoint holds no layers")
    for (_, fan_out), (fan_in, _) in zip(shapes, shapes[1:]):
        if fan_out != fan_in:
            raise ShapeError(f"{path}: consecutive layer shapes {shapes} do not chain")

    sizes = tuple([shapes[0][0]] + [fan_out for _, fan_out in shapes])
    if config is None:
        config = NetworkConfig(layer_sizes=sizes)
    elif config.layer_sizes != sizes:
        raise ShapeError(
            f"{path}: checkpoint layer sizes {sizes} differ from configured {config.layer_sizes}"
        )

    expected = offset + sum((i * o + o) * _FLOAT.itemsize for i, o in shapes)
    if len(data) != expected:
        if len(data) < expected:
            raise TruncatedFileError(f"{path}: expected {expected} bytes, found {len(data)}")
        raise ShapeError(f"{path}: {len(data) - expected} unexpected trailing bytes")

    weights, biases = [], []
    for fan_in, fan_out in shapes:
        w = np.frombuffer(data, dtype=_FLOAT, count=fan_in * fan_out, offset=offset)
        offset += fan_in * fan_out * _FLOAT.itemsize
        b = np.frombuffer(data, dtype=_FLOAT, count=fan_out, offset=offset)
        offset += fan_out * _FLOAT.itemsize
        weights.append(w.reshape(fan_in, fan_out).astype(np.float64))
        biases.append(b.astype(np.float64))

    return Network(config=config, weights=weights, biases=biases)
