"""Binary field snapshots with a fixed little-endian layout.

Layout (no padding):
    bytes 0-3   magic "CHFS"
    u32         format version (= 1)
    u32         grid dimension
    3 x u32     cells per axis (unused axes = 1)
    3 x f64     side lengths (unused axes = 1.0)
    f64         simulation time
    N x f64     cell values, first axis fastest

Everything is little-endian regardless of platform, so files written
anywhere read back bit-identically.
"""

from __future__ import annotations

import struct

import numpy as np

from .grid import Field, Grid

MAGIC = b"CHFS"
VERSION = 1
_HEADER = struct.Struct("<4s5I4d")


class SnapshotFormatError(ValueError):
    """Raised for malformed snapshot files (bad magic, truncation, bad dims)."""


def write_snapshot(field: Field, t: float, path) -> None:
    grid = field.grid
    cells = list(grid.cells) + [1] * (3 - grid.dim)
    lengths = list(grid.lengths) + [1.0] * (3 - grid.dim)
    header = _HEADER.pack(MAGIC, VERSION, grid.dim, *cells, *lengths, float(t))
    payload = field.to_flat().astype("<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_snapshot(path) -> tuple[Field, float]:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise SnapshotFormatError(f"truncated snapshot: {len(raw)} bytes is shorter than the header")
    magic, version, dim, n0, n1, n2, l0, l1, l2, t = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise SnapshotFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise SnapshotFormatError(f"unsupported snapshot version {version}")
    if dim not in (1, 2, 3):
        raise SnapshotFormatError(f"dimension overflow: dim = {dim} is not in 1..3")
    cells = (n0, n1, n2)[:dim]
    lengths = (l0, l1, l2)[:dim]
    if any(c != 1 for c in (n0, n1, n2)[dim:]):
        raise SnapshotFormatError(f"unused cell axes must be 1, got {(n0, n1, n2)}")
    grid = Grid(dim, cells, lengths)
    expected = _HEADER.size + grid.num_cells * 8
    if len(raw) < expected:
        raise SnapshotFormatError(
            f"truncated snapshot: expected {expected} bytes for {grid.num_cells} cells, got {len(raw)}"
        )
    if len(raw) > expected:
        raise SnapshotFormatError(f"trailing bytes after snapshot payload ({len(raw) - expected})")
    values = np.frombuffer(raw, dtype="<f8", count=grid.num_cells, offset=_HEADER.size)
    return Field.from_flat(grid, values), float(t)
