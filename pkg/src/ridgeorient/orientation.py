"""Per-pixel direction selection and per-block direction voting.

The Minimum and Maximum circuits are tournament trees of two-input switch
elements.  On equal keys a switch routes its first (lower-index) input,
so both trees resolve ties toward the lowest direction index.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .datapath import compute_sd_vector, sd_bits, sd_field
from .geometry import DirectionSet, OffsetRom, build_direction_set, generate_offset_rom
from .image import Image, partition_blocks

COUNTER_MAX = 255  # 8-bit direction counters


@dataclass(frozen=True)
class OrientationParams:
    N: int = 16
    n: int = 8
    block_size: int = 16

    def __post_init__(self):
        if self.N < 2 or self.N % 2:
            raise ValueError(f"N must be an even count >= 2, got {self.N}")
        if self.n < 2 or self.n % 2:
            raise ValueError(f"n must be even and >= 2, got {self.n}")
        if self.block_size < 1:
            raise ValueError("block size must be >= 1")

    @property
    def directions(self) -> DirectionSet:
        return build_direction_set(self.N)

    @property
    def rom(self) -> OffsetRom:
        return _rom(self.N, self.n)


@lru_cache(maxsize=None)
def _rom(N: int, n: int) -> OffsetRom:
    return generate_offset_rom(build_direction_set(N), n)


@dataclass(frozen=True)
class SwitchPayload:
    sd: int
    index: int

    def packed(self, sd_width: int = 11, index_width: int = 4) -> int:
        """The bus word a Minimum switch routes: S_d above the index."""
        if self.sd >> sd_width or self.index >> index_width:
            raise ValueError("payload does not fit the bus")
        return (self.sd << index_width) | self.index


# --- switch trees ------------------------------------------------------------


def switch_layer(keys, idx, prefer_larger: bool = False):
    """One layer of switch elements over the last axis.

    Pairs (0,1), (2,3), ... are compared; an odd trailing input passes
    through unopposed.  Works on scalars-in-arrays of any leading shape.
    """
    keys = np.asarray(keys)
    idx = np.asarray(idx)
    k = keys.shape[-1]
    a_key, b_key = keys[..., 0 : k - 1 : 2], keys[..., 1:k:2]
    a_idx, b_idx = idx[..., 0 : k - 1 : 2], idx[..., 1:k:2]
    take_b = b_key > a_key if prefer_larger else b_key < a_key
    out_key = np.where(take_b, b_key, a_key)
    out_idx = np.where(take_b, b_idx, a_idx)
    if k % 2:
        out_key = np.concatenate([out_key, keys[..., -1:]], axis=-1)
        out_idx = np.concatenate([out_idx, idx[..., -1:]], axis=-1)
    return out_key, out_idx


def tree_reduce(keys, prefer_larger: bool = False, layers: int | None = None, idx=None):
    """Run switch layers until one input remains (or ``layers`` layers ran)."""
    keys = np.asarray(keys)
    if idx is None:
        idx = np.broadcast_to(np.arange(keys.shape[-1]), keys.shape)
    done = 0
    while keys.shape[-1] > 1 and (layers is None or done < layers):
        keys, idx = switch_layer(keys, idx, prefer_larger)
        done += 1
    return keys, idx


def switch_count(N: int) -> int:
    count, k = 0, N
    while k > 1:
        count += k // 2
        k = (k + 1) // 2
    return count


def minimum_tree(payloads) -> SwitchPayload:
    payloads = list(payloads)
    if len(payloads) < 2:
        raise ValueError(f"Minimum tree needs at least 2 inputs, got {len(payloads)}")
    keys, idx = tree_reduce(
        [p.sd for p in payloads], idx=np.array([p.index for p in payloads])
    )
    return SwitchPayload(int(keys[0]), int(idx[0]))


def maximum_tree(counts) -> int:
    counts = list(counts)
    if len(counts) < 2:
        raise ValueError(f"Maximum tree needs at least 2 inputs, got {len(counts)}")
    _, idx = tree_reduce(counts, prefer_larger=True)
    return int(idx[0])


# --- pixel and block directions ---------------------------------------------


def pixel_direction(img: Image, i: int, j: int, rom: OffsetRom) -> int | None:
    """Direction index of pixel (i, j), or None when it may not vote."""
    sdv = compute_sd_vector(img, i, j, rom)
    if not sdv.complete(rom.n):
        return None
    return minimum_tree(SwitchPayload(int(s), d) for d, s in enumerate(sdv.sums)).index


def direction_image(img: Image, rom: OffsetRom) -> tuple[np.ndarray, np.ndarray]:
    """Pixel-wise direction image and the mask of voting pixels."""
    sums, inside = sd_field(img, rom)
    if sums.max(initial=0) >> sd_bits(rom.n):
        raise OverflowError("S_d exceeds the SdCU output width")
    _, idx = tree_reduce(np.moveaxis(sums, 0, -1))
    return idx[..., 0].astype(np.int64), inside


def vote_histogram(directions, N: int, saturate: int | None = COUNTER_MAX) -> np.ndarray:
    """Counter bank after the given votes; ``saturate=None`` gives unbounded counters."""
    counts = np.bincount(np.asarray(directions, dtype=np.int64).ravel(), minlength=N)[:N]
    if saturate is not None:
        counts = np.minimum(counts, saturate)
    return counts


@dataclass(frozen=True)
class BlockDirectionImage:
    dirs: np.ndarray  # (rows, cols) direction index per block
    valid: np.ndarray  # (rows, cols) bool, True iff at least one pixel voted
    N: int
    block_size: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.dirs.shape

    def angles(self) -> np.ndarray:
        return self.dirs * (180.0 / self.N)

    def __eq__(self, other):
        if not isinstance(other, BlockDirectionImage):
            return NotImplemented
        return (
            self.N == other.N
            and self.block_size == other.block_size
            and np.array_equal(self.dirs, other.dirs)
            and np.array_equal(self.valid, other.valid)
        )

    __hash__ = None


def block_direction(img: Image, block: tuple[int, int], rom: OffsetRom, block_size: int = 16):
    """Winning direction of one block and whether any pixel voted."""
    grid = partition_blocks(img, block_size)
    r0, r1, c0, c1 = grid.bounds(*block)
    votes = [
        d
        for i in range(r0, r1)
        for j in range(c0, c1)
        if (d := pixel_direction(img, i, j, rom)) is not None
    ]
    counts = vote_histogram(votes, rom.N)
    return maximum_tree(counts), bool(votes)


def estimate_orientation_field(img: Image, params: OrientationParams = OrientationParams()) -> BlockDirectionImage:
    grid = partition_blocks(img, params.block_size)
    if grid.count == 0:
        raise ValueError(
            f"{img.height}x{img.width} image is smaller than one {params.block_size}x{params.block_size} block"
        )
    rom = params.rom
    dirs, inside = direction_image(img, rom)
    s = params.block_size
    h, w = grid.rows * s, grid.cols * s
    # (rows, s, cols, s) -> (rows, cols, s*s)
    d_blk = dirs[:h, :w].reshape(grid.rows, s, grid.cols, s).swapaxes(1, 2).reshape(grid.rows, grid.cols, -1)
    v_blk = inside[:h, :w].reshape(grid.rows, s, grid.cols, s).swapaxes(1, 2).reshape(grid.rows, grid.cols, -1)
    onehot = (d_blk[..., None] == np.arange(rom.N)) & v_blk[..., None]
    counts = np.minimum(onehot.sum(axis=2), COUNTER_MAX)
    _, winner = tree_reduce(counts, prefer_larger=True)
    return BlockDirectionImage(
        dirs=winner[..., 0].astype(np.int64),
        valid=v_blk.any(axis=2),
        N=rom.N,
        block_size=s,
    )
