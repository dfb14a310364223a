"""Averaged-squared-gradient orientation baseline and the angular error metric."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import DirectionSet
from .image import Image, partition_blocks
from .orientation import BlockDirectionImage

# 3x3 Sobel derivative along columns; the row derivative is its transpose
_SOBEL_COL = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64) / 8.0
_ENERGY_EPS = 1e-9


@dataclass(frozen=True)
class AngleField:
    angles: np.ndarray  # (rows, cols) degrees in [0, 180)
    valid: np.ndarray  # (rows, cols) bool

    def __post_init__(self):
        a = np.mod(np.asarray(self.angles, dtype=np.float64), 180.0)
        # mod can return exactly 180.0 for tiny negative inputs
        a[a >= 180.0] = 0.0
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "valid", np.asarray(self.valid, dtype=bool))
        if self.angles.shape != self.valid.shape:
            raise ValueError("angle grid and valid mask differ in shape")

    @property
    def shape(self) -> tuple[int, int]:
        return self.angles.shape

    @classmethod
    def from_blocks(cls, field: BlockDirectionImage) -> "AngleField":
        return cls(field.angles(), field.valid)


def _correlate3(f: np.ndarray, k: np.ndarray) -> np.ndarray:
    # 'valid'-mode 3x3 correlation, output shape (H-2, W-2)
    H, W = f.shape
    out = np.zeros((H - 2, W - 2))
    for a in range(3):
        for b in range(3):
            if k[a, b]:
                out += k[a, b] * f[a : H - 2 + a, b : W - 2 + b]
    return out


def pixel_gradients(img: Image) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(gx, gy, defined) with gy positive upward, matching the angle convention.

    Gradients are defined only where the full 3x3 neighborhood exists.
    """
    f = img.pixels.astype(np.float64)
    H, W = f.shape
    gx = np.zeros((H, W))
    gy = np.zeros((H, W))
    defined = np.zeros((H, W), dtype=bool)
    if H >= 3 and W >= 3:
        gx[1:-1, 1:-1] = _correlate3(f, _SOBEL_COL)
        gy[1:-1, 1:-1] = -_correlate3(f, _SOBEL_COL.T)
        defined[1:-1, 1:-1] = True
    return gx, gy, defined


def gradient_orientation(img: Image, block_size: int = 16) -> AngleField:
    """Block ridge angle from doubled-angle averaging of squared gradients."""
    grid = partition_blocks(img, block_size)
    if grid.count == 0:
        raise ValueError("image is smaller than one block")
    gx, gy, defined = pixel_gradients(img)
    s = block_size
    h, w = grid.rows * s, grid.cols * s

    def block_sum(x):
        return x[:h, :w].reshape(grid.rows, s, grid.cols, s).sum(axis=(1, 3))

    gx = np.where(defined, gx, 0.0)
    gy = np.where(defined, gy, 0.0)
    vxy = block_sum(2.0 * gx * gy)
    vxx_yy = block_sum(gx * gx - gy * gy)
    energy = block_sum(gx * gx + gy * gy)
    # gradient orientation is half the doubled angle; ridges run perpendicular
    angles = 90.0 + 0.5 * np.degrees(np.arctan2(vxy, vxx_yy))
    return AngleField(angles, energy > _ENERGY_EPS)


def quantize_field(field: AngleField, dirs: DirectionSet) -> BlockDirectionImage:
    """Nearest quantized direction per block, circular over 180, ties to the lower index."""
    centers = np.asarray(dirs.angles)
    diff = angular_difference(field.angles[..., None], centers)
    idx = np.argmin(diff, axis=-1)  # first minimum wins
    return BlockDirectionImage(idx.astype(np.int64), field.valid.copy(), dirs.N, 0)


def angular_difference(a, b) -> np.ndarray:
    """Distance between orientations on the 180-degree circle, in [0, 90]."""
    d = np.abs(np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)) % 180.0
    return np.minimum(d, 180.0 - d)


@dataclass(frozen=True)
class ErrorReport:
    mean_squared_error: float  # deg^2
    rms_error: float  # deg
    mean_abs_error: float  # deg
    M: int  # rows of the orientation matrix
    n_valid: int  # blocks valid in both fields

    def summary(self) -> str:
        if not self.n_valid:
            return f"no valid blocks (M={self.M})"
        return (
            f"mse={self.mean_squared_error:.4f} deg^2 rms={self.rms_error:.4f} deg "
            f"mean_abs={self.mean_abs_error:.4f} deg valid_blocks={self.n_valid} M={self.M}"
        )


def error_metric(G: AngleField, P: AngleField) -> ErrorReport:
    """Mean squared angular error over blocks valid in both fields."""
    if G.shape != P.shape:
        raise ValueError(f"field shapes differ: {G.shape} vs {P.shape}")
    both = G.valid & P.valid
    n_valid = int(both.sum())
    if not n_valid:
        return ErrorReport(0.0, 0.0, 0.0, G.shape[0], 0)
    diff = angular_difference(G.angles[both], P.angles[both])
    mse = float(np.mean(diff**2))
    return ErrorReport(mse, math.sqrt(mse), float(np.mean(diff)), G.shape[0], n_valid)


def block_differences(G: AngleField, P: AngleField) -> np.ndarray:
    """Per-block circular difference, NaN where either field is invalid."""
    if G.shape != P.shape:
        raise ValueError(f"field shapes differ: {G.shape} vs {P.shape}")
    out = angular_difference(G.angles, P.angles)
    out[~(G.valid & P.valid)] = np.nan
    return out
