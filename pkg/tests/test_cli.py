import pytest

from micromacro import cli
from micromacro.config import ConfigError, RunConfig, parse_config_text
from micromacro.noise import ExperimentParams
from micromacro.spdc import DetailedParams
from micromacro.tables import ResultTable, format_cell, read_table

FAST_CURVES = """
run.seed = 3
curves.alpha_sq_min = 0
curves.alpha_sq_max = 90     # trailing comment
curves.points = 4
curves.band_samples = 24
"""


def write_config(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run(args):
    return cli.main([str(a) for a in args])


def test_config_parsing_basics():
    values = parse_config_text(FAST_CURVES)
    assert values["curves.points"] == 4
    assert values["curves.alpha_sq_max"] == 90.0
    assert values["run.seed"] == 3
    # untouched keys keep their defaults
    assert values["tomo.werner_w"] == 0.94
    # later assignments win
    again = parse_config_text("run.seed = 1\nrun.seed = 9\n")
    assert again["run.seed"] == 9


def test_config_rejects_bad_input():
    with pytest.raises(ConfigError, match="line 1.*unknown key"):
        parse_config_text("curves.alpha_max = 3")
    with pytest.raises(ConfigError, match="line 2.*bad value"):
        parse_config_text("run.seed = 1\ncurves.points = three\n")
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("just some words")
    with pytest.raises(ConfigError):
        parse_config_text("detailed.g_reading = averaged")


def test_config_hash_ignores_formatting():
    a = RunConfig.from_text("run.seed = 3\ncurves.points = 4\n")
    b = RunConfig.from_text("# comment\ncurves.points=4\n\nrun.seed   =  3")
    assert a.sha256() == b.sha256()
    c = RunConfig.from_text("run.seed = 4\ncurves.points = 4\n")
    assert a.sha256() != c.sha256()
    assert RunConfig.defaults().sha256() == RunConfig.from_text("").sha256()


def test_config_param_builders_match_defaults():
    cfg = RunConfig.defaults()
    assert cfg.noise_params() == ExperimentParams()
    assert cfg.detailed_params() == DetailedParams()
    with pytest.raises(KeyError):
        cfg["nope.nope"]


def test_rerun_is_byte_identical(tmp_path):
    cfg = write_config(tmp_path, FAST_CURVES)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    out1.mkdir(), out2.mkdir()
    assert run(["curves", "--config", cfg, "--out", out1]) == 0
    assert run(["curves", "--config", cfg, "--out", out2]) == 0
    for name in ("witness_curves.csv", "reference_points.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_worker_count_does_not_change_output(tmp_path):
    cfg = write_config(tmp_path, FAST_CURVES)
    out1, out2 = tmp_path / "j1", tmp_path / "j2"
    out1.mkdir(), out2.mkdir()
    assert run(["curves", "--config", cfg, "--out", out1, "--jobs", 1]) == 0
    assert run(["curves", "--config", cfg, "--out", out2, "--jobs", 2]) == 0
    assert (out1 / "witness_curves.csv").read_bytes() == \
        (out2 / "witness_curves.csv").read_bytes()


def test_exit_codes(tmp_path):
    assert run(["curves", "--config", tmp_path / "missing.cfg"]) == 1
    bad = write_config(tmp_path, "curves.points = banana\n")
    assert run(["curves", "--config", bad, "--out", tmp_path]) == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_validate_command(capsys):
    assert cli.main(["validate"]) == 0
    out = capsys.readouterr().out
    assert "checks passed" in out
    assert "FAIL" not in out


def test_size_command_summary(tmp_path):
    cfg = write_config(tmp_path, "size.points = 4\n")
    assert run(["size", "--config", cfg, "--out", tmp_path]) == 0
    _, _, rows = read_table(tmp_path / "size_curve.csv")
    assert len(rows) == 4
    _, _, srows = read_table(tmp_path / "size_summary.csv")
    summary = dict(srows)
    assert summary["n_eff"] == 13
    assert abs(summary["p_g_ideal"] - 0.898236) < 1e-4
    assert abs(summary["sigma_max"] - 14.9079) < 1e-3
    assert abs(summary["p_g_mixture_sigma0"] - 0.541616) < 1e-4


def test_hom_command_tables(tmp_path):
    cfg = write_config(tmp_path, "hom.points = 4\nhom.window_points = 4\n")
    assert run(["hom", "--config", cfg, "--out", tmp_path]) == 0
    meta, cols, rows = read_table(tmp_path / "hom_visibility.csv")
    assert cols == ["mu", "visibility"] and len(rows) == 4
    assert all(0.0 < v < 1.0 for _, v in rows)
    meta, cols, orows = read_table(tmp_path / "hom_overlap.csv")
    assert len(orows) == 4
    assert abs(float(meta["expected_visibility"]) - 0.841390) < 1e-4
    # wider windows always lose overlap
    xis = [r[1] for r in orows]
    assert xis == sorted(xis, reverse=True)


def test_detailed_command_with_oracle(tmp_path):
    cfg = write_config(tmp_path, "detailed.mc_samples = 400\n")
    assert run(["detailed", "--config", cfg, "--out", tmp_path]) == 0
    _, _, grid = read_table(tmp_path / "detailed_grid.csv")
    assert len(grid) == 16
    _, _, srows = read_table(tmp_path / "detailed_summary.csv")
    summary = dict(srows)
    assert 2.0 < summary["chsh_s"] < 2.83
    _, cols, orows = read_table(tmp_path / "detailed_oracle.csv")
    assert len(orows) == 64  # 16 grid points x 4 outcomes
    dev = [row[cols.index("deviation_se")] for row in orows]
    assert max(dev) < 8.0  # loose screen at 400 samples


def test_tomo_command(tmp_path):
    cfg = write_config(tmp_path, "tomo.shots = 2000\n")
    assert run(["tomo", "--config", cfg, "--out", tmp_path]) == 0
    _, _, srows = read_table(tmp_path / "tomo_summary.csv")
    summary = dict(srows)
    assert summary["fidelity"] > 0.99
    assert summary["concurrence"] > 0.8
    _, _, mrows = read_table(tmp_path / "tomo_matrix.csv")
    assert len(mrows) == 16
    trace = sum(re for i, j, re, im in mrows if i == j)
    assert abs(trace - 1.0) < 1e-9


def test_svg_output(tmp_path):
    cfg = write_config(tmp_path, "size.points = 3\n")
    assert run(["size", "--config", cfg, "--out", tmp_path, "--svg"]) == 0
    text = (tmp_path / "size_curve.svg").read_text()
    assert "<svg" in text and "</svg>" in text


def test_table_round_trip(tmp_path):
    table = ResultTable("demo", ["x", "label"], meta={"seed": "5"})
    table.add_row(0.1, "a")
    table.add_row(2.0 / 3.0, "b")
    path = tmp_path / "demo.csv"
    table.write_csv(path)
    meta, cols, rows = read_table(path)
    assert meta["table"] == "demo" and meta["seed"] == "5"
    assert cols == ["x", "label"]
    assert rows[0] == (0.1, "a")
    assert abs(rows[1][0] - 2.0 / 3.0) < 1e-12


def test_format_cell():
    assert format_cell(0.1) == "0.1"
    assert format_cell(1.0 / 3.0) == "0.333333333333"
    assert format_cell(True) == "True"
    assert format_cell(7) == "7"


def test_add_row_checks_arity():
    table = ResultTable("demo", ["x", "y"])
    with pytest.raises(ValueError):
        table.add_row(1.0)
