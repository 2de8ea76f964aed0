"""Binary checkpoint format for named float64 parameter arrays.

Layout: magic bytes ``CPGM``, version u32, then one record per
parameter: name length (u32), UTF-8 name, rank (u32), dims (u32 each),
row-major little-endian f64 payload. Records run to end of file.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

__all__ = ["load_params", "save_params", "CheckpointError"]

MAGIC = b"CPGM"
VERSION = 1


class CheckpointError(RuntimeError):
    """Checkpoint file is malformed or incompatible."""


def save_params(path: str | Path, params: dict[str, np.ndarray]) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", VERSION))
        for name, arr in params.items():
            arr = np.asarray(arr, dtype=np.float64)
            encoded = name.encode("utf-8")
            fh.write(struct.pack("<I", len(encoded)))
            fh.write(encoded)
            fh.write(struct.pack("<I", arr.ndim))
            fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
            fh.write(arr.astype("<f8").tobytes(order="C"))


def load_params(path: str | Path) -> dict[str, np.ndarray]:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise CheckpointError(f"{path}: bad magic bytes")
    (version,) = struct.unpack_from("<I", data, 4)
    if version != VERSION:
        raise CheckpointError(f"{path}: unsupported version {version}")
    params: dict[str, np.ndarray] = {}
    offset = 8
    while offset < len(data):
        try:
            (name_len,) = struct.unpack_from("<I", data, offset)
            offset += 4
            name = data[offset : offset + name_len].decode("utf-8")
            offset += name_len
            (rank,) = struct.unpack_from("<I", data, offset)
            offset += 4
            dims = struct.unpack_from(f"<{rank}I", data, offset)
            offset += 4 * rank
            count = int(np.prod(dims)) if rank else 1
            arr = np.frombuffer(data, dtype="<f8", count=count, offset=offset).reshape(dims)
            offset += 8 * count
        except (struct.error, ValueError) as exc:
            raise CheckpointError(f"{path}: truncated record at byte {offset}") from exc
        params[name] = arr.astype(np.float64)
    return params
