"""Orientation field files.

Text: a ``#`` header line ``# rows R cols C N n_dirs block_size S`` followed
by one line per block, ``row col d angle_degrees valid``, row-major.

Binary: 4-bit direction indices, two blocks per byte, high nibble first,
row-major, odd counts padded with a zero nibble.  Invalid blocks are
written as 0xF; since 0xF is also direction 15 when N = 16, validity
lives in a separate mask file of one byte (0 or 1) per block.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .orientation import BlockDirectionImage

INVALID_NIBBLE = 0xF


def format_field_text(field: BlockDirectionImage) -> str:
    rows, cols = field.shape
    step = 180.0 / field.N
    out = [f"# rows {rows} cols {cols} N {field.N} block_size {field.block_size}\n"]
    for r in range(rows):
        for c in range(cols):
            d = int(field.dirs[r, c])
            out.append(f"{r} {c} {d} {d * step:.4f} {int(field.valid[r, c])}\n")
    return "".join(out)


def parse_field_text(text: str) -> BlockDirectionImage:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError("field file lacks its '# rows ... ' header")
    head = lines[0].lstrip("#").split()
    meta = dict(zip(head[::2], (int(v) for v in head[1::2])))
    try:
        rows, cols, N, block_size = meta["rows"], meta["cols"], meta["N"], meta["block_size"]
    except KeyError as e:
        raise ValueError(f"field header missing {e.args[0]!r}") from None
    dirs = np.zeros((rows, cols), dtype=np.int64)
    valid = np.zeros((rows, cols), dtype=bool)
    seen = 0
    for line in lines[1:]:
        if not line.strip() or line.startswith("#"):
            continue
        r, c, d, _angle, v = line.split()
        dirs[int(r), int(c)] = int(d)
        valid[int(r), int(c)] = v == "1"
        seen += 1
    if seen != rows * cols:
        raise ValueError(f"field file has {seen} block lines, header promises {rows * cols}")
    return BlockDirectionImage(dirs, valid, N, block_size)


def pack_nibbles(field: BlockDirectionImage) -> tuple[bytes, bytes]:
    """(index bytes, mask bytes) for the binary dump."""
    if field.N > 16:
        raise ValueError("binary dump holds 4-bit indices; N must be <= 16")
    flat = np.where(field.valid, field.dirs, INVALID_NIBBLE).ravel().astype(np.uint8)
    if flat.size % 2:
        flat = np.append(flat, np.uint8(0))
    packed = (flat[0::2] << 4) | flat[1::2]
    return packed.tobytes(), field.valid.ravel().astype(np.uint8).tobytes()


def unpack_nibbles(data: bytes, mask: bytes, rows: int, cols: int, N: int = 16, block_size: int = 16) -> BlockDirectionImage:
    count = rows * cols
    raw = np.frombuffer(data, dtype=np.uint8)
    if raw.size != (count + 1) // 2 or len(mask) != count:
        raise ValueError("binary field size does not match the block grid")
    nib = np.empty(raw.size * 2, dtype=np.int64)
    nib[0::2] = raw >> 4
    nib[1::2] = raw & 0xF
    valid = np.frombuffer(mask, dtype=np.uint8).astype(bool).reshape(rows, cols)
    dirs = nib[:count].reshape(rows, cols)
    # invalid blocks carry no direction; the in-memory field uses 0 there
    dirs = np.where(valid, dirs, 0)
    return BlockDirectionImage(dirs, valid, N, block_size)


FIELD_TEXT = "field.txt"
FIELD_BIN = "field.bin"
FIELD_MASK = "field_mask.bin"


def write_field(field: BlockDirectionImage, outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = [outdir / FIELD_TEXT]
    paths[0].write_text(format_field_text(field))
    if field.N <= 16:
        data, mask = pack_nibbles(field)
        (outdir / FIELD_BIN).write_bytes(data)
        (outdir / FIELD_MASK).write_bytes(mask)
        paths += [outdir / FIELD_BIN, outdir / FIELD_MASK]
    return paths


def read_field(path) -> BlockDirectionImage:
    """Load a field from its text file (or a directory containing one)."""
    path = Path(path)
    if path.is_dir():
        path = path / FIELD_TEXT
    return parse_field_text(path.read_text())
