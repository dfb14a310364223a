"""Fingerprint ridge orientation by minimum sum of absolute differences,
modeled at the level of its fixed-width hardware datapath."""

from .geometry import DirectionSet, OffsetRom, build_direction_set, generate_offset_rom
from .gradient import AngleField, ErrorReport, error_metric, gradient_orientation, quantize_field
from .image import BlockGrid, Image, load_pgm, partition_blocks, pixel_at, read_pgm
from .orientation import (
    BlockDirectionImage,
    OrientationParams,
    estimate_orientation_field,
    pixel_direction,
)
from .pipeline import PipelineConfig, run_pipeline, total_delay

__all__ = [
    "AngleField",
    "BlockDirectionImage",
    "BlockGrid",
    "DirectionSet",
    "ErrorReport",
    "Image",
    "OffsetRom",
    "OrientationParams",
    "PipelineConfig",
    "build_direction_set",
    "error_metric",
    "estimate_orientation_field",
    "generate_offset_rom",
    "gradient_orientation",
    "load_pgm",
    "partition_blocks",
    "pixel_at",
    "pixel_direction",
    "quantize_field",
    "read_pgm",
    "run_pipeline",
    "total_delay",
]
