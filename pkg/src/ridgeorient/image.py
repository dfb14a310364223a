"""Grayscale raster container, netpbm (PGM) I/O and block partitioning."""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class PGMError(ValueError):
    """Base class for PGM parse failures."""


class MalformedHeaderError(PGMError):
    pass


class UnsupportedMaxvalError(PGMError):
    pass


class TruncatedPayloadError(PGMError):
    pass


@dataclass(frozen=True)
class Image:
    """8-bit grayscale image, ``height`` rows by ``width`` columns.

    ``pixels`` is a read-only uint8 array of shape (height, width), stored
    row-major so ``pixels.ravel()[i * width + j]`` is pixel (i, j).
    """

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D raster, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("gray values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    @classmethod
    def from_flat(cls, height: int, width: int, values) -> "Image":
        values = np.asarray(values)
        if values.size != height * width:
            raise ValueError(f"{values.size} values for a {height}x{width} image")
        return cls(values.reshape(height, width))


def pixel_at(img: Image, i: int, j: int) -> int:
    if not (0 <= i < img.height and 0 <= j < img.width):
        raise IndexError(f"pixel ({i}, {j}) outside {img.height}x{img.width} image")
    return int(img.pixels[i, j])


@dataclass(frozen=True)
class BlockGrid:
    block_size: int
    rows: int
    cols: int

    @property
    def count(self) -> int:
        return self.rows * self.cols

    def bounds(self, br: int, bc: int) -> tuple[int, int, int, int]:
        """Pixel bounds (r0, r1, c0, c1), half-open, of block (br, bc)."""
        if not (0 <= br < self.rows and 0 <= bc < self.cols):
            raise IndexError(f"block ({br}, {bc}) outside {self.rows}x{self.cols} grid")
        s = self.block_size
        return br * s, (br + 1) * s, bc * s, (bc + 1) * s

    def blocks(self):
        for br in range(self.rows):
            for bc in range(self.cols):
                yield br, bc


def partition_blocks(img: Image, block_size: int = 16) -> BlockGrid:
    # trailing partial rows/cols are dropped, never padded
    if block_size < 1:
        raise ValueError("block size must be >= 1")
    return BlockGrid(block_size, img.height // block_size, img.width // block_size)


# --- PGM ------------------------------------------------------------------

_TOKEN = re.compile(rb"#[^\n\r]*|(\S+)")


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping comments.

    Returns the tokens and the offset just past the last token.
    """
    tokens: list[bytes] = []
    pos = 0
    for m in _TOKEN.finditer(data):
        if m.group(1) is None:
            continue
        tokens.append(m.group(1))
        pos = m.end()
        if len(tokens) == count:
            break
    return tokens, pos


def load_pgm(data: bytes) -> Image:
    """Parse a binary (P5) or ASCII (P2) PGM with maxval <= 255."""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise MalformedHeaderError(f"not a PGM file (magic {magic!r})")
    tokens, pos = _header_tokens(data, 4)
    if len(tokens) < 4:
        raise MalformedHeaderError("incomplete PGM header")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError:
        raise MalformedHeaderError(f"non-numeric PGM header field in {tokens[1:4]!r}") from None
    if width < 1 or height < 1 or maxval < 1:
        raise MalformedHeaderError(f"invalid PGM dimensions {width}x{height}, maxval {maxval}")
    if maxval > 255:
        raise UnsupportedMaxvalError(f"unsupported maxval {maxval} (8-bit only)")

    count = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates header from raster
        payload = data[pos + 1 : pos + 1 + count]
        if len(payload) < count:
            raise TruncatedPayloadError(f"truncated payload: {len(payload)} of {count} bytes")
        values = np.frombuffer(payload, dtype=np.uint8)
    else:
        words = data[pos:].split()
        if len(words) < count:
            raise TruncatedPayloadError(f"truncated payload: {len(words)} of {count} values")
        try:
            values = np.array([int(w) for w in words[:count]], dtype=np.int64)
        except ValueError:
            raise MalformedHeaderError("non-numeric value in P2 raster") from None
    if values.max() > maxval or values.min() < 0:
        raise PGMError(f"gray value outside [0, {maxval}]")
    return Image.from_flat(height, width, values.astype(np.uint8))


def read_pgm(path) -> Image:
    return load_pgm(Path(path).read_bytes())


def dump_pgm_ascii(img: Image, values_per_line: int = 16) -> bytes:
    lines = [b"P2", f"{img.width} {img.height}".encode(), b"255"]
    flat = img.pixels.ravel()
    for start in range(0, flat.size, values_per_line):
        lines.append(" ".join(str(v) for v in flat[start : start + values_per_line]).encode())
    return b"\n".join(lines) + b"\n"


def dump_pgm_binary(img: Image) -> bytes:
    return f"P5\n{img.width} {img.height}\n255\n".encode() + img.pixels.tobytes()


def write_pgm(img: Image, path, binary: bool = True) -> None:
    Path(path).write_bytes(dump_pgm_binary(img) if binary else dump_pgm_ascii(img))
