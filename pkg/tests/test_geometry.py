import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ridgeorient.geometry import (
    build_direction_set,
    format_offsets,
    generate_offset_rom,
    neighbor_address,
    parse_offsets,
)


def test_sixteen_directions(dirs16):
    assert dirs16.angles == tuple(11.25 * d for d in range(16))
    assert dirs16.angles[0] == 0 and dirs16.angles[-1] == 168.75


def test_two_directions():
    assert build_direction_set(2).angles == (0.0, 90.0)


@pytest.mark.parametrize("N", [0, 1, 3, 15])
def test_bad_direction_count(N):
    with pytest.raises(ValueError):
        build_direction_set(N)


def test_horizontal_and_vertical_lines(rom16):
    assert set(rom16.entries(0)) == {(0, k) for k in (-4, -3, -2, -1, 1, 2, 3, 4)}
    assert set(rom16.entries(8)) == {(k, 0) for k in (-4, -3, -2, -1, 1, 2, 3, 4)}


def test_diagonal_line(rom16):
    # frozen from an independent rounding script (round half away, k extended past duplicates)
    expected = {(-4, 4), (-3, 3), (-2, 2), (-1, 1), (1, -1), (2, -2), (3, -3), (4, -4)}
    assert set(rom16.entries(4)) == expected


def test_rom_size(rom16):
    assert rom16.table.shape == (16, 8, 2)
    assert len(rom16.flat()) == 128


@pytest.mark.parametrize("n", [0, 1, 3, 7])
def test_bad_line_length(dirs16, n):
    with pytest.raises(ValueError):
        generate_offset_rom(dirs16, n)


def test_offset_limit(dirs16):
    with pytest.raises(ValueError):
        generate_offset_rom(dirs16, 256)
    assert generate_offset_rom(build_direction_set(4), 254).reach == 127


def test_neighbor_address():
    assert neighbor_address(10, 10, (-4, 0), (256, 256)) == (6, 10, True)
    assert neighbor_address(2, 2, (-4, 0), (256, 256))[2] is False
    assert neighbor_address(255, 255, (0, 4), (256, 256))[2] is False


def test_offset_text_round_trip(rom16):
    text = format_offsets(rom16)
    assert len(text.splitlines()) == 128
    assert text.splitlines()[0] == "0 0 0 -4"
    assert np.array_equal(parse_offsets(text).table, rom16.table)


rom_params = st.tuples(st.integers(1, 18).map(lambda k: 2 * k), st.integers(1, 12).map(lambda k: 2 * k))


@given(rom_params)
def test_rom_invariants(params):
    N, n = params
    rom = generate_offset_rom(build_direction_set(N), n)
    for d in range(N):
        entries = rom.entries(d)
        assert (0, 0) not in entries
        assert len(set(entries)) == n
        # closed under negation
        assert {(-a, -b) for a, b in entries} == set(entries)
        # within Chebyshev distance n/2
        assert max(max(abs(a), abs(b)) for a, b in entries) <= n // 2


@given(rom_params)
def test_rom_mirror(params):
    N, n = params
    rom = generate_offset_rom(build_direction_set(N), n)
    for d in range(N):
        mirror = (N - d) % N  # angle 180 - theta
        assert {(a, -b) for a, b in rom.entries(d)} == set(rom.entries(mirror))


@given(rom_params)
def test_rom_transpose(params):
    # angle 90 - theta swaps the row and column offsets
    N, n = params
    rom = generate_offset_rom(build_direction_set(N), n)
    for d in range(N):
        assert {(b, a) for a, b in rom.entries(d)} == set(rom.entries((N // 2 - d) % N))


def test_lines_follow_their_angle(dirs16, rom16):
    for d, angle in enumerate(dirs16.angles):
        t = math.radians(angle)
        for di, dj in rom16.entries(d):
            # perpendicular distance from the ideal line stays under one pixel
            assert abs(di * math.cos(t) + dj * math.sin(t)) < 1.0
