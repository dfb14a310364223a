import numpy as np
import pytest

from ridgeorient import cli, synth
from ridgeorient.fieldio import read_field
from ridgeorient.image import write_pgm
from ridgeorient.orientation import estimate_orientation_field


@pytest.fixture
def stripe_pgm(tmp_path):
    path = tmp_path / "stripe.pgm"
    write_pgm(synth.stripes(256, 256, 2), path)
    return path


def test_estimate(stripe_pgm, tmp_path, capsys):
    out = tmp_path / "out"
    assert cli.main(["estimate", str(stripe_pgm), "-o", str(out)]) == 0
    field = read_field(out)
    assert field.shape == (16, 16)
    assert (field.dirs[field.valid] == 0).all()
    assert "16x16 blocks" in capsys.readouterr().out


def test_estimate_is_deterministic(stripe_pgm, tmp_path):
    for name in ("a", "b"):
        cli.main(["estimate", str(stripe_pgm), "-o", str(tmp_path / name)])
    for f in ("field.txt", "field.bin", "field_mask.bin"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_missing_file(tmp_path, capsys):
    assert cli.main(["estimate", str(tmp_path / "nope.pgm")]) == 2
    assert "cannot open" in capsys.readouterr().err


def test_bad_pgm(tmp_path, capsys):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P5\n2 2\n65535\n")
    assert cli.main(["estimate", str(bad)]) == 2
    assert "unsupported maxval" in capsys.readouterr().err


def test_odd_n_rejected(stripe_pgm, capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["estimate", str(stripe_pgm), "--n", "7"])
    assert e.value.code == 2
    assert "n must be even" in capsys.readouterr().err


def test_even_n_accepted(stripe_pgm, tmp_path):
    assert cli.main(["estimate", str(stripe_pgm), "--n", "6", "-o", str(tmp_path)]) == 0


def test_render_round_trip(tmp_path, capsys):
    img = synth.sinusoid(64, 64, 8.0, 56.25)
    pgm = tmp_path / "s.pgm"
    write_pgm(img, pgm)
    cli.main(["estimate", str(pgm), "-o", str(tmp_path)])
    svg, ppm = tmp_path / "o.svg", tmp_path / "o.ppm"
    assert cli.main(["render", str(tmp_path / "field.txt"), str(pgm), "-o", str(svg), "-o", str(ppm)]) == 0
    # four fully valid 16x16 blocks
    assert svg.read_text().count("<line") == 16
    assert ppm.read_bytes().startswith(b"P6\n64 64\n255\n")
    assert read_field(tmp_path) == estimate_orientation_field(img)


def test_render_grid_mismatch(tmp_path, capsys):
    cli.main(["estimate", "--synth", "uniform", "--size", "64", "-o", str(tmp_path)])
    assert cli.main(["render", str(tmp_path), "--synth", "uniform", "--size", "32", "-o", str(tmp_path / "x.svg")]) == 2
    assert "does not match" in capsys.readouterr().err


def test_simulate_reports_table(tmp_path, capsys):
    csv = tmp_path / "res.csv"
    rc = cli.main(["simulate", "--synth", "stripe", "--period", "2", "--size", "32", "--reservation", str(csv)])
    assert rc == 0
    out = capsys.readouterr().out
    for factor in (256, 128, 32, 16):
        assert f": {32 * 32 * factor} CLK1 ticks" in out
    assert "matches the direct estimator" in out
    assert csv.read_text().startswith("tick,stage0,stage1,stage2,stage3\n")


def test_simulate_256_numbers(capsys):
    cli.main(["simulate", "--synth", "uniform", "--size", "256", "--rams", "8", "--registers"])
    out = capsys.readouterr().out
    assert "config 1: 1 IMAGE-RAM, without inter-stage registers: 16777216 CLK1 ticks" in out
    assert "config 4: 8 IMAGE-RAM, with inter-stage registers: 1048576 CLK1 ticks" in out


def test_simulate_consistency_failure(monkeypatch, capsys):
    real = cli.run_pipeline

    def broken(img, cfg, params):
        result = real(img, cfg, params)
        result.field.dirs[0, 0] = (result.field.dirs[0, 0] + 1) % 16
        return result

    monkeypatch.setattr(cli, "run_pipeline", broken)
    assert cli.main(["simulate", "--synth", "noise", "--size", "32"]) == 3
    assert "differs" in capsys.readouterr().err


def test_compare(tmp_path, capsys):
    csv = tmp_path / "cmp.csv"
    assert cli.main(["compare", "--synth", "sinusoid", "--angle", "45", "--csv", str(csv)]) == 0
    out = capsys.readouterr().out
    mean_abs = float(out.split("mean_abs=")[1].split()[0])
    assert mean_abs <= 3.0
    lines = csv.read_text().splitlines()
    assert lines[0] == "row,col,g_deg,p_deg,diff_deg"
    assert len(lines) == 1 + 256


def test_compare_uniform(capsys):
    assert cli.main(["compare", "--synth", "uniform"]) == 0
    assert "no valid blocks" in capsys.readouterr().out


def test_gen_offsets(capsys):
    assert cli.main(["gen-offsets"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 128
    assert lines[0] == "0 0 0 -4"
    assert cli.main(["gen-offsets", "--N", "2", "--n", "2"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 4


def test_gen_offsets_odd_N(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["gen-offsets", "--N", "3"])
    assert e.value.code == 2


def test_no_input(capsys):
    assert cli.main(["estimate"]) == 2
    assert "no input" in capsys.readouterr().err


def test_image_too_small(tmp_path, capsys):
    pgm = tmp_path / "small.pgm"
    write_pgm(synth.uniform(8, 8), pgm)
    assert cli.main(["estimate", str(pgm)]) == 2
