"""Overlay of block orientations on the source image (SVG and PPM)."""
from __future__ import annotations

import base64
import io
import math

import numpy as np
from PIL import Image as PILImage
from skimage.draw import line as draw_line

from .image import Image, partition_blocks
from .orientation import BlockDirectionImage

SEGMENT_FRACTION = 0.75
LINE_RGB = (255, 0, 0)


def segments(field: BlockDirectionImage, fraction: float = SEGMENT_FRACTION):
    """One centered segment per valid block as (row0, col0, row1, col1) floats."""
    s = field.block_size
    half = fraction * s / 2.0
    out = []
    for br, bc in zip(*np.nonzero(field.valid)):
        theta = math.radians(field.dirs[br, bc] * 180.0 / field.N)
        cr, cc = br * s + s / 2.0, bc * s + s / 2.0
        dr, dc = -half * math.sin(theta), half * math.cos(theta)
        out.append((cr - dr, cc - dc, cr + dr, cc + dc))
    return out


def check_grid(field: BlockDirectionImage, img: Image) -> None:
    grid = partition_blocks(img, field.block_size)
    if (grid.rows, grid.cols) != field.shape:
        raise ValueError(
            f"field grid {field.shape} does not match the {grid.rows}x{grid.cols} "
            f"block grid of a {img.height}x{img.width} image"
        )


def _png_data_uri(img: Image) -> str:
    buf = io.BytesIO()
    PILImage.fromarray(img.pixels).save(buf, format="PNG")
    return "data:image/png;base64," + base64.b64encode(buf.getvalue()).decode("ascii")


def render_svg(field: BlockDirectionImage, img: Image | None = None) -> str:
    s = field.block_size
    if img is not None:
        check_grid(field, img)
        height, width = img.shape
    else:
        height, width = field.shape[0] * s, field.shape[1] * s
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    if img is not None:
        parts.append(f'<image x="0" y="0" width="{width}" height="{height}" href="{_png_data_uri(img)}"/>')
    else:
        parts.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>')
    parts.append('<g stroke="rgb({},{},{})" stroke-width="1.5" stroke-linecap="round">'.format(*LINE_RGB))
    for r0, c0, r1, c1 in segments(field):
        parts.append(f'<line x1="{c0:.3f}" y1="{r0:.3f}" x2="{c1:.3f}" y2="{r1:.3f}"/>')
    parts.append("</g></svg>\n")
    return "\n".join(parts)


def render_raster(field: BlockDirectionImage, img: Image) -> np.ndarray:
    """RGB overlay: the dimmed image with red orientation segments."""
    check_grid(field, img)
    rgb = np.repeat((img.pixels.astype(np.uint16) * 3 // 5).astype(np.uint8)[..., None], 3, axis=2)
    H, W = img.shape
    for r0, c0, r1, c1 in segments(field):
        rr, cc = draw_line(int(round(r0)), int(round(c0)), int(round(r1)), int(round(c1)))
        keep = (rr >= 0) & (rr < H) & (cc >= 0) & (cc < W)
        rgb[rr[keep], cc[keep]] = LINE_RGB
    return rgb


def dump_ppm(rgb: np.ndarray) -> bytes:
    h, w, _ = rgb.shape
    return f"P6\n{w} {h}\n255\n".encode() + np.ascontiguousarray(rgb, dtype=np.uint8).tobytes()
