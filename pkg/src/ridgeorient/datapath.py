"""Bit-level model of the absolute-difference and S_d summation hardware.

Every function accepts Python ints or integer numpy arrays (elementwise),
so the same datapath code serves the scalar reference and the vectorized
image paths.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import OffsetRom
from .image import Image

PIXEL_BITS = 8


def _mask(width: int) -> int:
    return (1 << width) - 1


def avd(a, b):
    """|a - b| for 8-bit operands via a two's-complement subtractor.

    a - b is formed as a + ~b + 1 in a 9-bit adder.  A carry out means
    a >= b and the low byte is the answer; otherwise the low byte is
    negated.
    """
    m = _mask(PIXEL_BITS)
    total = a + ((~b) & m) + 1
    carry = (total >> PIXEL_BITS) & 1
    low = total & m
    negated = ((~low) + 1) & m
    return carry * low + (1 - carry) * negated


def tree_add(a, b, width: int):
    """Adder for two ``width``-bit operands; the result keeps the carry bit."""
    return (a + b) & _mask(width + 1)


def adder_tree(values, width: int = PIXEL_BITS):
    """Sum a power-of-two list of ``width``-bit values layer by layer.

    Each layer pairs neighbours with adders one bit wider than the
    previous layer (8, 9, 10 bits for eight bytes), so the root carries
    width + log2(len) bits.
    """
    layer = list(values)
    if not layer or len(layer) & (len(layer) - 1):
        raise ValueError(f"adder tree needs a power-of-two operand count, got {len(layer)}")
    while len(layer) > 1:
        layer = [tree_add(layer[k], layer[k + 1], width) for k in range(0, len(layer), 2)]
        width += 1
    return layer[0]


def sd_bits(n: int) -> int:
    """Output width of an SdCU over n 8-bit differences (11 for n=8)."""
    return PIXEL_BITS + max(n - 1, 0).bit_length()


def sdcu(center, neighbors, n: int = 8):
    """S_d calculation unit: n AVD blocks feeding the adder tree."""
    neighbors = list(neighbors)
    if len(neighbors) != n:
        raise ValueError(f"SdCU takes exactly {n} neighbors, got {len(neighbors)}")
    diffs = [avd(center, v) for v in neighbors]
    if n & (n - 1):
        # non power-of-two n: pad the tree with zero operands
        size = 1 << (n - 1).bit_length()
        diffs += [0 * diffs[0]] * (size - n)
    return adder_tree(diffs)


@dataclass(frozen=True)
class SdVector:
    sums: np.ndarray  # (N,) per-direction S_d
    valid_count: np.ndarray  # (N,) in-bounds neighbors summed

    def complete(self, n: int) -> bool:
        """True when every direction summed all n neighbors."""
        return bool(np.all(self.valid_count == n))


def compute_sd_vector(img: Image, i: int, j: int, rom: OffsetRom) -> SdVector:
    """S_d for every direction at pixel (i, j).

    Out-of-bounds neighbors are skipped (contribute zero) and not counted
    in ``valid_count``.
    """
    if not (0 <= i < img.height and 0 <= j < img.width):
        raise IndexError(f"pixel ({i}, {j}) outside image")
    f = img.pixels
    center = int(f[i, j])
    sums = np.zeros(rom.N, dtype=np.int64)
    valid = np.zeros(rom.N, dtype=np.int64)
    for d in range(rom.N):
        vals = []
        for di, dj in rom.entries(d):
            r, c = i + di, j + dj
            if 0 <= r < img.height and 0 <= c < img.width:
                vals.append(int(f[r, c]))
        valid[d] = len(vals)
        # missing neighbors enter the tree as zero differences
        sums[d] = sdcu(center, vals + [center] * (rom.n - len(vals)), rom.n)
    return SdVector(sums, valid)


def sd_field(img: Image, rom: OffsetRom) -> tuple[np.ndarray, np.ndarray]:
    """S_d for every pixel whose n neighbors are all in bounds.

    Returns ``(sums, inside)`` where ``sums`` has shape (N, H, W) and
    ``inside`` is the (H, W) mask of pixels with a complete neighborhood;
    sums outside the mask are zero.
    """
    f = img.pixels.astype(np.int64)
    H, W = f.shape
    t = rom.table.astype(np.int64)
    mr, mc = int(np.abs(t[..., 0]).max()), int(np.abs(t[..., 1]).max())
    sums = np.zeros((rom.N, H, W), dtype=np.int64)
    inside = np.zeros((H, W), dtype=bool)
    if H <= 2 * mr or W <= 2 * mc:
        return sums, inside
    inside[mr : H - mr, mc : W - mc] = True
    center = f[mr : H - mr, mc : W - mc]
    for d in range(rom.N):
        neigh = [f[mr + di : H - mr + di, mc + dj : W - mc + dj] for di, dj in rom.entries(d)]
        sums[d, mr : H - mr, mc : W - mc] = sdcu(center, neigh, rom.n)
    return sums, inside
