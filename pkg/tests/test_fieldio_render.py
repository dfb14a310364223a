import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ridgeorient import synth
from ridgeorient.fieldio import (
    format_field_text,
    pack_nibbles,
    parse_field_text,
    read_field,
    unpack_nibbles,
    write_field,
)
from ridgeorient.orientation import BlockDirectionImage, estimate_orientation_field
from ridgeorient.render import check_grid, dump_ppm, render_raster, render_svg, segments


def make_field(dirs, valid=None, N=16, block_size=16):
    dirs = np.asarray(dirs, dtype=np.int64)
    valid = np.ones(dirs.shape, bool) if valid is None else np.asarray(valid, bool)
    return BlockDirectionImage(np.where(valid, dirs, 0), valid, N, block_size)


def test_text_format():
    field = make_field([[0, 4], [15, 0]], [[True, True], [True, False]])
    lines = format_field_text(field).splitlines()
    assert lines[0] == "# rows 2 cols 2 N 16 block_size 16"
    assert lines[1:] == ["0 0 0 0.0000 1", "0 1 4 45.0000 1", "1 0 15 168.7500 1", "1 1 0 0.0000 0"]


def test_binary_format():
    field = make_field([[1, 2, 15]], [[True, False, True]])
    data, mask = pack_nibbles(field)
    assert data == bytes([0x1F, 0xF0])
    assert mask == bytes([1, 0, 1])


def test_binary_needs_4_bit_indices():
    with pytest.raises(ValueError):
        pack_nibbles(make_field([[0]], N=32))


fields = st.tuples(st.integers(1, 6), st.integers(1, 6)).flatmap(
    lambda shape: st.tuples(
        arrays(np.int64, shape, elements=st.integers(0, 15)),
        arrays(np.bool_, shape),
    )
)


@given(fields)
def test_text_round_trip(fv):
    field = make_field(*fv)
    assert parse_field_text(format_field_text(field)) == field


@given(fields)
def test_binary_round_trip(fv):
    field = make_field(*fv)
    data, mask = pack_nibbles(field)
    rows, cols = field.shape
    assert unpack_nibbles(data, mask, rows, cols) == field


def test_write_and_read(tmp_path):
    field = estimate_orientation_field(synth.sinusoid(64, 64, 8.0, 22.5))
    paths = write_field(field, tmp_path)
    assert [p.name for p in paths] == ["field.txt", "field.bin", "field_mask.bin"]
    assert read_field(tmp_path) == field
    assert read_field(tmp_path / "field.txt") == field
    rows, cols = field.shape
    again = unpack_nibbles(paths[1].read_bytes(), paths[2].read_bytes(), rows, cols)
    assert again == field


def test_parse_rejects_short_file():
    with pytest.raises(ValueError):
        parse_field_text("# rows 2 cols 2 N 16 block_size 16\n0 0 0 0.0 1\n")
    with pytest.raises(ValueError):
        parse_field_text("0 0 0 0.0 1\n")


def test_horizontal_segments():
    segs = segments(make_field(np.zeros((2, 3))))
    assert len(segs) == 6
    for r0, c0, r1, c1 in segs:
        assert r0 == r1
        assert abs(c1 - c0) == pytest.approx(12.0)


def test_invalid_block_is_blank():
    segs = segments(make_field([[0, 0]], [[True, False]]))
    assert len(segs) == 1
    svg = render_svg(make_field([[0, 0]], [[True, False]]))
    assert svg.count("<line") == 1


def test_diagonal_segment_geometry():
    (r0, c0, r1, c1), = segments(make_field([[4]]))
    half = 0.75 * 16 / 2
    h = half * math.sin(math.radians(45))
    assert (r0, c0) == pytest.approx((8 + h, 8 - h))
    assert (r1, c1) == pytest.approx((8 - h, 8 + h))


def test_render_checks_grid():
    with pytest.raises(ValueError):
        check_grid(make_field(np.zeros((2, 2))), synth.uniform(48, 32))
    check_grid(make_field(np.zeros((3, 2))), synth.uniform(48, 32))


def test_raster_overlay():
    img = synth.uniform(32, 32, 100)
    rgb = render_raster(make_field([[0, 8], [0, 0]], [[True, True], [False, True]]), img)
    assert rgb.shape == (32, 32, 3)
    red = (rgb == (255, 0, 0)).all(axis=2)
    assert red[8, 2:15].all()  # horizontal segment through block (0, 0)
    assert red[2:15, 24].all()  # vertical segment through block (0, 1)
    assert not red[16:32, 0:16].any()
    assert dump_ppm(rgb).startswith(b"P6\n32 32\n255\n")


def test_svg_is_deterministic():
    img = synth.sinusoid(32, 32, 8.0, 45.0)
    field = estimate_orientation_field(img)
    assert render_svg(field, img) == render_svg(field, img)
    assert "data:image/png;base64," in render_svg(field, img)
