"""Quantized ridge directions and the per-direction neighbor offset table.

Conventions used throughout the package: the row axis points down, the
column axis points right, and a direction angle is measured
counter-clockwise from the +column axis in degrees over [0, 180).  A unit
step along angle ``theta`` is therefore ``(-sin(theta), cos(theta))`` in
(row, col) coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

OFFSET_LIMIT = 127  # offsets are stored as 8-bit signed numbers


@dataclass(frozen=True)
class DirectionSet:
    N: int
    angles: tuple[float, ...]

    @property
    def step(self) -> float:
        return 180.0 / self.N

    def angle(self, d: int) -> float:
        return self.angles[d]

    def index_of(self, angle_deg: float) -> int:
        """Exact index of a quantized angle (mod 180)."""
        k = (angle_deg % 180.0) / self.step
        d = int(round(k)) % self.N
        if not math.isclose(self.angles[d], angle_deg % 180.0, abs_tol=1e-9) and not (
            d == 0 and math.isclose(angle_deg % 180.0, 180.0, abs_tol=1e-9)
        ):
            raise ValueError(f"{angle_deg} deg is not one of the {self.N} quantized directions")
        return d


def build_direction_set(N: int = 16) -> DirectionSet:
    if N < 2 or N % 2:
        raise ValueError(f"N must be an even count >= 2, got {N}")
    return DirectionSet(N, tuple(d * 180.0 / N for d in range(N)))


def round_half_away(x: float) -> int:
    # snap first so sin/cos noise (sin 30 deg = 0.49999999999999994) keeps exact ties
    x = round(x, 9)
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


@dataclass(frozen=True)
class OffsetRom:
    """N x n table of signed (row, col) offsets, one line of n per direction.

    ``table`` has shape (N, n, 2) and dtype int8, mirroring a ROM of
    two 8-bit signed words per entry.
    """

    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table)
        if t.ndim != 3 or t.shape[2] != 2:
            raise ValueError(f"offset table must have shape (N, n, 2), got {t.shape}")
        if np.abs(t.astype(np.int64)).max(initial=0) > OFFSET_LIMIT:
            raise ValueError("offset magnitude exceeds 8-bit signed range")
        t = t.astype(np.int8)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def N(self) -> int:
        return self.table.shape[0]

    @property
    def n(self) -> int:
        return self.table.shape[1]

    @property
    def reach(self) -> int:
        """Largest |offset| on either axis; pixels closer than this to the border miss neighbors."""
        return int(np.abs(self.table.astype(np.int64)).max(initial=0))

    def entries(self, d: int) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in self.table[d]]

    def flat(self) -> np.ndarray:
        """Entries in ROM order (direction-major), shape (N*n, 2)."""
        return self.table.reshape(-1, 2)


def _half_line(theta: float, count: int) -> list[tuple[int, int]]:
    # walk k = 1, 2, ... until `count` distinct rounded points are found
    s, c = math.sin(theta), math.cos(theta)
    pts: list[tuple[int, int]] = []
    k = 1
    while len(pts) < count:
        p = (round_half_away(-k * s), round_half_away(k * c))
        if p != (0, 0) and p not in pts:
            pts.append(p)
        k += 1
    return pts


def generate_offset_rom(dirs: DirectionSet, n: int = 8) -> OffsetRom:
    """Sample n pixels per direction, n/2 on each side of the center pixel.

    Entries of one direction are ordered from the far negative end of the
    line to the far positive end.
    """
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    if n // 2 > OFFSET_LIMIT:
        raise ValueError(f"n={n} would need offsets beyond +/-{OFFSET_LIMIT}")
    table = np.zeros((dirs.N, n, 2), dtype=np.int64)
    for d, angle in enumerate(dirs.angles):
        pos = _half_line(math.radians(angle), n // 2)
        neg = [(-a, -b) for a, b in pos]
        table[d] = neg[::-1] + pos
    return OffsetRom(table)


def neighbor_address(i: int, j: int, entry, img) -> tuple[int, int, bool]:
    """Add a ROM entry to (i, j); the flag is False when the result leaves the image.

    ``img`` may be an Image or a plain (height, width) tuple.
    """
    height, width = getattr(img, "shape", img)
    r, c = i + int(entry[0]), j + int(entry[1])
    return r, c, (0 <= r < height and 0 <= c < width)


def format_offsets(rom: OffsetRom) -> str:
    return "".join(
        f"{d} {k} {di} {dj}\n"
        for d in range(rom.N)
        for k, (di, dj) in enumerate(rom.entries(d))
    )


def parse_offsets(text: str) -> OffsetRom:
    rows = [tuple(int(v) for v in line.split()) for line in text.splitlines() if line.strip()]
    N = max(r[0] for r in rows) + 1
    n = max(r[1] for r in rows) + 1
    table = np.zeros((N, n, 2), dtype=np.int64)
    for d, k, di, dj in rows:
        table[d, k] = (di, dj)
    return OffsetRom(table)
