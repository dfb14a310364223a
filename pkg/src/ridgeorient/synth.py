"""Synthetic test images with a known ridge orientation."""
from __future__ import annotations

import math

import numpy as np

from .image import Image


def stripes(height: int = 256, width: int = 256, period: int = 2, angle: float = 0.0) -> Image:
    """Binary 0/255 stripes running along ``angle``.

    ``angle`` 0 gives rows that alternate with period ``period`` (for
    period 2: 255 on even rows, 0 on odd rows).
    """
    phase = _phase(height, width, angle)
    on = np.floor(phase / (period / 2.0)).astype(np.int64) % 2 == 0
    return Image(np.where(on, 255, 0).astype(np.uint8))


def sinusoid(height: int = 256, width: int = 256, period: float = 8.0, angle: float = 0.0) -> Image:
    """128 + 127 cos(2 pi t / period), constant along lines at ``angle``."""
    t = _phase(height, width, angle)
    f = 128.0 + 127.0 * np.cos(2.0 * math.pi * t / period)
    return Image(np.rint(f).astype(np.uint8))


def noise(height: int = 256, width: int = 256, seed: int = 0) -> Image:
    rng = np.random.default_rng(seed)
    return Image(rng.integers(0, 256, size=(height, width), dtype=np.uint8))


def uniform(height: int = 256, width: int = 256, value: int = 128) -> Image:
    return Image(np.full((height, width), value, dtype=np.uint8))


def _phase(height: int, width: int, angle: float) -> np.ndarray:
    # signed distance across the ridges; zero change along (-sin, cos)
    i, j = np.mgrid[0:height, 0:width].astype(np.float64)
    a = math.radians(angle)
    return i * math.cos(a) + j * math.sin(a)


PATTERNS = {"stripe": stripes, "sinusoid": sinusoid, "noise": noise, "uniform": uniform}
