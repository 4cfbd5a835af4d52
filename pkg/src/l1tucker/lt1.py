"""The LT1 binary container for tensors and fitted models.

Tensor record layout (all integers little-endian):

    bytes 0-3   magic ``LT1\\0``
    bytes 4-7   uint32 N, the number of modes
    then        N x uint32 mode dimensions
    then        prod(dims) x float64 values, first index fastest

Model files reuse the tensor record as a block:

    bytes 0-3   magic ``LT1M``
    bytes 4-7   uint32 N
    then        N x uint32 target ranks
    then        uint32 core flag (0 or 1)
    then        N tensor records, the per-mode basis matrices (D_n x d_n)
    then        one tensor record with the core, if the flag is 1

Both readers validate magics, lengths, and cross-field consistency and
report the byte offset of the first violation. Write/read round-trips are
bit-exact.
"""
from __future__ import annotations

import struct

import numpy as np

from .decomposition import TuckerModel
from .errors import FormatError

TENSOR_MAGIC = b"LT1\x00"
MODEL_MAGIC = b"LT1M"


class Lt1FormatError(FormatError):
    pass


def tensor_to_bytes(x: np.ndarray) -> bytes:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim < 1 or any(d < 1 for d in x.shape):
        raise ValueError(f"cannot serialize shape {x.shape}")
    header = TENSOR_MAGIC + struct.pack(f"<I{x.ndim}I", x.ndim, *x.shape)
    return header + x.ravel(order="F").astype("<f8", copy=False).tobytes()


def _take(buf: bytes, offset: int, n: int, what: str) -> tuple[bytes, int]:
    if offset + n > len(buf):
        raise Lt1FormatError(f"truncated while reading {what}", offset)
    return buf[offset : offset + n], offset + n


def tensor_from_bytes(buf: bytes, offset: int = 0) -> tuple[np.ndarray, int]:
    """Parse one tensor record starting at ``offset``; return (tensor, next offset)."""
    magic, offset = _take(buf, offset, 4, "magic")
    if magic != TENSOR_MAGIC:
        raise Lt1FormatError(f"bad tensor magic {magic!r}", offset - 4)
    raw, offset = _take(buf, offset, 4, "mode count")
    ndim = struct.unpack("<I", raw)[0]
    if ndim < 1:
        raise Lt1FormatError("mode count must be >= 1", offset - 4)
    raw, offset = _take(buf, offset, 4 * ndim, "dimensions")
    shape = struct.unpack(f"<{ndim}I", raw)
    if any(d < 1 for d in shape):
        raise Lt1FormatError(f"invalid dimensions {shape}", offset - 4 * ndim)
    count = int(np.prod(shape))
    raw, offset = _take(buf, offset, 8 * count, "values")
    data = np.frombuffer(raw, dtype="<f8", count=count)
    return data.reshape(shape, order="F").copy(), offset


def write_tensor(path, x: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(tensor_to_bytes(x))


def read_tensor(path) -> np.ndarray:
    with open(path, "rb") as fh:
        buf = fh.read()
    x, offset = tensor_from_bytes(buf)
    if offset != len(buf):
        raise Lt1FormatError("trailing bytes after tensor record", offset)
    return x


def model_to_bytes(model: TuckerModel) -> bytes:
    ranks = model.ranks
    has_core = model.core is not None
    out = [MODEL_MAGIC, struct.pack(f"<I{len(ranks)}II", len(ranks), *ranks, int(has_core))]
    out.extend(tensor_to_bytes(b) for b in model.bases)
    if has_core:
        out.append(tensor_to_bytes(model.core))
    return b"".join(out)


def model_from_bytes(buf: bytes) -> TuckerModel:
    magic, offset = _take(buf, 0, 4, "magic")
    if magic != MODEL_MAGIC:
        raise Lt1FormatError(f"bad model magic {magic!r}", 0)
    raw, offset = _take(buf, offset, 4, "mode count")
    ndim = struct.unpack("<I", raw)[0]
    if ndim < 1:
        raise Lt1FormatError("mode count must be >= 1", offset - 4)
    raw, offset = _take(buf, offset, 4 * ndim, "ranks")
    ranks = struct.unpack(f"<{ndim}I", raw)
    raw, offset = _take(buf, offset, 4, "core flag")
    has_core = struct.unpack("<I", raw)[0]
    if has_core not in (0, 1):
        raise Lt1FormatError(f"core flag must be 0 or 1, got {has_core}", offset - 4)

    bases = []
    for n, rank in enumerate(ranks):
        block_start = offset
        basis, offset = tensor_from_bytes(buf, offset)
        if basis.ndim != 2 or basis.shape[1] != rank:
            raise Lt1FormatError(
                f"mode-{n} basis block has shape {basis.shape}, expected (*, {rank})",
                block_start,
            )
        bases.append(basis)
    core = None
    if has_core:
        block_start = offset
        core, offset = tensor_from_bytes(buf, offset)
        if tuple(core.shape) != tuple(ranks):
            raise Lt1FormatError(
                f"core block has shape {core.shape}, expected {tuple(ranks)}",
                block_start,
            )
    if offset != len(buf):
        raise Lt1FormatError("trailing bytes after model record", offset)
    return TuckerModel(bases, core)


def write_model(path, model: TuckerModel) -> None:
    with open(path, "wb") as fh:
        fh.write(model_to_bytes(model))


def read_model(path) -> TuckerModel:
    with open(path, "rb") as fh:
        return model_from_bytes(fh.read())
