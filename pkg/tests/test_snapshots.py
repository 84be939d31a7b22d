import struct

import numpy as np
import pytest

from chemoflow import Field, Grid, SnapshotFormatError, read_snapshot, write_snapshot


def test_roundtrip_3d_bit_identical(tmp_path):
    g = Grid(3, (4, 5, 6), (1.0, 0.5, 2.0))
    rng = np.random.default_rng(0)
    f = Field(g, rng.normal(size=g.shape))
    path = tmp_path / "f.chfs"
    write_snapshot(f, 0.625, path)
    back, t = read_snapshot(path)
    assert t == 0.625
    assert back.grid == g
    assert np.array_equal(back.values, f.values)


def test_roundtrip_1d_and_2d(tmp_path):
    for dim in (1, 2):
        g = Grid.unit_box(dim, 8)
        f = Field(g, np.random.default_rng(dim).normal(size=g.shape))
        path = tmp_path / f"f{dim}.chfs"
        write_snapshot(f, 1.5, path)
        back, t = read_snapshot(path)
        assert back.grid == g and t == 1.5
        assert np.array_equal(back.values, f.values)


def test_golden_bytes_little_endian(tmp_path):
    # freeze the on-disk layout: header fields and first-axis-fastest values
    g = Grid(2, (4, 4), (1.0, 1.0))
    vals = np.arange(16.0).reshape(4, 4)
    path = tmp_path / "golden.chfs"
    write_snapshot(Field(g, vals), 2.0, path)
    raw = path.read_bytes()
    assert raw[:4] == b"CHFS"
    assert struct.unpack_from("<I", raw, 4)[0] == 1  # version
    assert struct.unpack_from("<I", raw, 8)[0] == 2  # dim
    assert struct.unpack_from("<3I", raw, 12) == (4, 4, 1)
    assert struct.unpack_from("<3d", raw, 24) == (1.0, 1.0, 1.0)
    assert struct.unpack_from("<d", raw, 48)[0] == 2.0
    payload = np.frombuffer(raw, dtype="<f8", offset=56)
    # first axis fastest: first four values walk column 0 of the array
    assert np.array_equal(payload[:4], vals[:, 0])
    assert len(raw) == 56 + 16 * 8


def test_truncated_file_rejected(tmp_path):
    g = Grid.unit_box(2, 4)
    path = tmp_path / "t.chfs"
    write_snapshot(Field.constant(g, 1.0), 0.0, path)
    raw = path.read_bytes()
    path.write_bytes(raw[:-8])
    with pytest.raises(SnapshotFormatError, match="truncated"):
        read_snapshot(path)
    path.write_bytes(raw[:20])  # shorter than the header
    with pytest.raises(SnapshotFormatError, match="truncated"):
        read_snapshot(path)


def test_trailing_garbage_rejected(tmp_path):
    g = Grid.unit_box(1, 4)
    path = tmp_path / "t.chfs"
    write_snapshot(Field.constant(g, 1.0), 0.0, path)
    path.write_bytes(path.read_bytes() + b"xx")
    with pytest.raises(SnapshotFormatError, match="trailing"):
        read_snapshot(path)


def test_bad_magic_rejected(tmp_path):
    g = Grid.unit_box(1, 4)
    path = tmp_path / "m.chfs"
    write_snapshot(Field.constant(g, 1.0), 0.0, path)
    raw = bytearray(path.read_bytes())
    raw[:4] = b"NOPE"
    path.write_bytes(bytes(raw))
    with pytest.raises(SnapshotFormatError, match="magic"):
        read_snapshot(path)


def test_dimension_overflow_rejected(tmp_path):
    g = Grid.unit_box(1, 4)
    path = tmp_path / "d.chfs"
    write_snapshot(Field.constant(g, 1.0), 0.0, path)
    raw = bytearray(path.read_bytes())
    struct.pack_into("<I", raw, 8, 7)  # dim = 7
    path.write_bytes(bytes(raw))
    with pytest.raises(SnapshotFormatError, match="dimension overflow"):
        read_snapshot(path)


def test_version_mismatch_rejected(tmp_path):
    g = Grid.unit_box(1, 4)
    path = tmp_path / "v.chfs"
    write_snapshot(Field.constant(g, 1.0), 0.0, path)
    raw = bytearray(path.read_bytes())
    struct.pack_into("<I", raw, 4, 9)
    path.write_bytes(bytes(raw))
    with pytest.raises(SnapshotFormatError, match="version"):
        read_snapshot(path)


def test_initial_condition_from_snapshot(tmp_path):
    from chemoflow import InitialCondition

    g = Grid.unit_box(2, 8)
    f = Field(g, np.random.default_rng(5).uniform(0, 1, size=g.shape))
    path = tmp_path / "ic.chfs"
    write_snapshot(f, 3.0, path)
    ic = InitialCondition(kind="from_snapshot", path=str(path))
    loaded = ic.build(g)
    assert np.array_equal(loaded.values, f.values)
    with pytest.raises(ValueError, match="does not match"):
        ic.build(Grid.unit_box(2, 16))
