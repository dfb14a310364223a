"""Transaction-level cycle model of the four-stage orientation pipeline.

Stages, one pixel per CLK2 cycle each:

    stage0  fetch the N*n neighbor pixels into the input registers
    stage1  N SdCUs plus the first layer of Minimum switches
    stage2  remaining Minimum switch layers; pixel direction index
    stage3  direction counters, Maximum tree every block_size**2 pixels

Time is counted in CLK1 ticks.  Without inter-stage registers stage0
fetches in one half of a CLK2 cycle and stage1 computes in the other, so
a CLK2 period is twice the fetch count; with the registers the halves
overlap and a CLK2 period equals the fetch count.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .geometry import OffsetRom
from .image import Image, partition_blocks
from .orientation import (
    COUNTER_MAX,
    BlockDirectionImage,
    OrientationParams,
    maximum_tree,
    tree_reduce,
)
from .datapath import sdcu

STAGES = 4
DRAIN_CLK2 = STAGES - 1  # cycles from the first stage0 fill to the first stage3 result
IDLE = -1


@dataclass(frozen=True)
class PipelineConfig:
    image_ram_count: int = 1
    interstage_registers: bool = False
    clk1_period_ns: float = 1.0

    def __post_init__(self):
        if self.image_ram_count not in (1, 8):
            raise ValueError(f"image_ram_count must be 1 or 8, got {self.image_ram_count}")

    @property
    def label(self) -> str:
        regs = "with" if self.interstage_registers else "without"
        return f"{self.image_ram_count} IMAGE-RAM, {regs} inter-stage registers"


# the four hardware variants, slowest first
TABLE_CONFIGS = (
    PipelineConfig(1, False),
    PipelineConfig(1, True),
    PipelineConfig(8, False),
    PipelineConfig(8, True),
)

FETCHES_PER_PIXEL = 128  # 16 directions x 8 neighbors


def fetch_cycle_count(cfg: PipelineConfig, fetches: int = FETCHES_PER_PIXEL) -> int:
    """CLK1 pulses stage0 needs to load one pixel's neighbors."""
    if cfg.image_ram_count not in (1, 8):
        raise ValueError(f"image_ram_count must be 1 or 8, got {cfg.image_ram_count}")
    return -(-fetches // cfg.image_ram_count)


def clk2_period(cfg: PipelineConfig, fetches: int = FETCHES_PER_PIXEL) -> int:
    """CLK1 ticks per CLK2 cycle (256 in the base configuration)."""
    f = fetch_cycle_count(cfg, fetches)
    return f if cfg.interstage_registers else 2 * f


def total_delay(cfg: PipelineConfig, H: int, L: int, fetches: int = FETCHES_PER_PIXEL) -> int:
    """Steady-state processing delay of an H x L image in CLK1 ticks (fill/drain excluded)."""
    if H < 1 or L < 1:
        raise ValueError("image dimensions must be positive")
    return H * L * clk2_period(cfg, fetches)


@dataclass(frozen=True)
class Fetch:
    pulse: int
    bank: int
    address: int  # row-major pixel address, or -1 if outside the image
    row: int
    col: int


def address_stream(i: int, j: int, rom: OffsetRom, cfg: PipelineConfig, shape) -> list[Fetch]:
    """stage0 fetch schedule for pixel (i, j), in ROM order.

    With eight banks, fetch k goes to bank k mod 8 and each CLK1 pulse
    retires one fetch per bank.
    """
    H, W = getattr(shape, "shape", shape)
    if not (0 <= i < H and 0 <= j < W):
        raise IndexError(f"pixel ({i}, {j}) outside image")
    banks = cfg.image_ram_count
    out = []
    for k, (di, dj) in enumerate(rom.flat()):
        r, c = i + int(di), j + int(dj)
        addr = r * W + c if (0 <= r < H and 0 <= c < W) else -1
        out.append(Fetch(k // banks, k % banks, addr, r, c))
    return out


@dataclass
class ReservationTable:
    """Stage occupancy per CLK2 cycle; ``cells[s, t]`` is a pixel id or IDLE."""

    cells: np.ndarray

    @property
    def cycles(self) -> int:
        return self.cells.shape[1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tick"] + [f"stage{s}" for s in range(self.cells.shape[0])])
        for t in range(self.cycles):
            w.writerow([t] + ["" if p == IDLE else int(p) for p in self.cells[:, t]])
        return buf.getvalue()


@dataclass
class PipelineResult:
    field: BlockDirectionImage
    reservation: ReservationTable
    ticks: int  # CLK1 ticks until the last stage3 update
    fill_drain_ticks: int
    block_outputs: int
    pixel_order: np.ndarray  # (P, 2) pixel coordinates by pixel id


def pixel_stream(img: Image, block_size: int) -> np.ndarray:
    """Pixel coordinates in issue order: block by block, row-major inside a block."""
    grid = partition_blocks(img, block_size)
    coords = [
        (r, c)
        for br, bc in grid.blocks()
        for r in range(br * block_size, (br + 1) * block_size)
        for c in range(bc * block_size, (bc + 1) * block_size)
    ]
    return np.array(coords, dtype=np.int64).reshape(-1, 2)


class _Stages:
    """Combinational logic of each stage, evaluated for a batch of pixels."""

    def __init__(self, img: Image, rom: OffsetRom, cfg: PipelineConfig):
        self.img = img
        self.rom = rom
        self.cfg = cfg
        self.offsets = rom.flat().astype(np.int64)  # ROM order
        self.memory = img.pixels.ravel()
        banks = cfg.image_ram_count
        # every pulse must touch each bank at most once
        k = np.arange(len(self.offsets))
        assert all(len(set(k[k // banks == p] % banks)) == len(k[k // banks == p]) for p in set(k // banks))

    def stage0(self, coords: np.ndarray):
        """Fill the input registers: (P, N*n) gray values and an in-bounds flag."""
        H, W = self.img.shape
        r = coords[:, :1] + self.offsets[None, :, 0]
        c = coords[:, 1:] + self.offsets[None, :, 1]
        ok = (r >= 0) & (r < H) & (c >= 0) & (c < W)
        addr = np.where(ok, r * W + c, 0)
        regs = self.memory[addr].astype(np.int64)
        center = self.memory[coords[:, 0] * W + coords[:, 1]].astype(np.int64)
        return center, regs, ok.all(axis=1)

    def stage1(self, center, regs):
        """SdCUs and the first switch layer: N/2 surviving (S_d, index) pairs."""
        N, n = self.rom.N, self.rom.n
        regs = regs.reshape(len(center), N, n)
        sums = np.stack(
            [sdcu(center, [regs[:, d, k] for k in range(n)], n) for d in range(N)], axis=1
        )
        return tree_reduce(sums, layers=1)

    def stage2(self, keys, idx):
        _, idx = tree_reduce(keys, idx=idx)
        return idx[:, 0]


def run_pipeline(
    img: Image,
    cfg: PipelineConfig = PipelineConfig(),
    params: OrientationParams = OrientationParams(),
) -> PipelineResult:
    """Clock the pipeline over every pixel of every full block."""
    rom = params.rom
    grid = partition_blocks(img, params.block_size)
    if grid.count == 0:
        raise ValueError("image is smaller than one block")
    coords = pixel_stream(img, params.block_size)
    P = len(coords)
    per_block = params.block_size**2
    logic = _Stages(img, rom, cfg)

    # stage0..2 logic is evaluated a block at a time when the block's first
    # pixel enters stage0; results stay latched until stage3 retires the block
    in_flight: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def evaluate_block(b: int):
        sl = slice(b * per_block, (b + 1) * per_block)
        center, regs, complete = logic.stage0(coords[sl])
        keys, idx = logic.stage1(center, regs)
        in_flight[b] = (logic.stage2(keys, idx), complete)

    cycles = P + DRAIN_CLK2
    cells = np.full((STAGES, cycles), IDLE, dtype=np.int64)
    dirs = np.zeros((grid.rows, grid.cols), dtype=np.int64)
    valid = np.zeros((grid.rows, grid.cols), dtype=bool)
    counters = [0] * rom.N
    voted = 0
    pulse_counter = 0  # 9-bit block pulse counter
    block_outputs = 0
    latch = [IDLE] * STAGES  # pixel id held by each stage

    for t in range(cycles):
        latch = [t if t < P else IDLE] + latch[:-1]
        cells[:, t] = latch
        if latch[0] != IDLE and latch[0] % per_block == 0:
            evaluate_block(latch[0] // per_block)
        p3 = latch[3]
        if p3 == IDLE:
            continue
        b, k = divmod(p3, per_block)
        block_dirs, block_votes = in_flight[b]
        if block_votes[k]:
            d = int(block_dirs[k])
            counters[d] = min(counters[d] + 1, COUNTER_MAX)
            voted += 1
        pulse_counter = (pulse_counter + 1) & 0x1FF
        if pulse_counter == per_block:
            br, bc = divmod(b, grid.cols)
            dirs[br, bc] = maximum_tree(counters)
            valid[br, bc] = voted > 0
            block_outputs += 1
            del in_flight[b]
            counters = [0] * rom.N
            voted = 0
            pulse_counter = 0

    period = clk2_period(cfg, rom.N * rom.n)
    field = BlockDirectionImage(dirs, valid, rom.N, params.block_size)
    return PipelineResult(
        field=field,
        reservation=ReservationTable(cells),
        ticks=cycles * period,
        fill_drain_ticks=DRAIN_CLK2 * period,
        block_outputs=block_outputs,
        pixel_order=coords,
    )
