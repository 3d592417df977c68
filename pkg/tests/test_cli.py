import json
from fractions import Fraction
from math import exp, pi

import pytest

from majorana.cli import (
    SWEEP_HEADER,
    TABLE_HEADER,
    RunConfig,
    SweepSpec,
    load_config,
    main,
    parse_trap,
    run,
    write_output,
)
from majorana.hub.rates import rates_along
from majorana.hub.trap_model import derive_params, final_wavenumber, surface_params, with_parameter
from majorana.utilities.errors import (
    EXIT_IO,
    EXIT_OK,
    EXIT_VALIDATION,
    ConfigurationError,
)
from majorana.utilities.output import Report

from .conftest import RB87_TRAP, TRAPS_DIR


def _replace(key: str, line: str) -> str:
    lines = [line if row.startswith(key) else row for row in RB87_TRAP.splitlines()]
    return "\n".join(lines) + "\n"


def _table_lines(path) -> list:
    lines = path.read_text(encoding="utf-8").splitlines()
    return [line for line in lines if not line.startswith("#")]


def test_minimal_trap_file(trap_file):
    config = load_config(trap_file())
    assert config.command == "rate"
    assert config.trap.spin.two_f == 2
    assert config.trap.axial_curvature == 0.0
    assert not derive_params(config.trap).adiabaticity_warning


@pytest.mark.parametrize("name", sorted(path.name for path in TRAPS_DIR.glob("*.trap")))
def test_sample_traps_load(name):
    config = load_config(str(TRAPS_DIR / name))
    assert not derive_params(config.trap).adiabaticity_warning


@pytest.mark.parametrize(
    "text, key",
    [
        (_replace("two_fz", "two_fz = 3").replace("two_f = 2", "two_f = 4"), "two_fz"),
        (_replace("bias_field_gauss", "bias_field_gauss = 0"), "bias_field_gauss"),
        (_replace("g_factor", "g_factor = -0.5"), "g_factor"),
        (_replace("g_factor", "g_factor = abc"), "g_factor"),
        (_replace("g_factor", ""), "g_factor"),
        (_replace("two_f =", "two_f = 1.5"), "two_f"),
        (_replace("two_f =", "two_f = 26"), "two_f"),
        (_replace("two_fz", "two_fz = 0"), "two_fz"),
        (RB87_TRAP + "temperature_k = 1e-6\n", "temperature_k"),
        (RB87_TRAP + "g_factor = 0.5\n", "g_factor"),
        (RB87_TRAP + "just some words\n", "line 8"),
    ],
)
def test_trap_file_rejects(text, key):
    with pytest.raises(ConfigurationError) as caught:
        parse_trap(text)
    assert caught.value.key == key


def test_zero_bias_names_the_singular_frame():
    with pytest.raises(ConfigurationError, match="singular adiabatic frame"):
        parse_trap(_replace("bias_field_gauss", "bias_field_gauss = 0"))


def test_run_config_validation(rb87):
    with pytest.raises(ConfigurationError):
        RunConfig(command="derive")
    with pytest.raises(ConfigurationError):
        RunConfig(command="plot", trap=rb87)
    with pytest.raises(ConfigurationError):
        RunConfig(command="rate", trap=rb87, format="xml")
    with pytest.raises(ConfigurationError):
        RunConfig(command="sweep", trap=rb87)
    with pytest.raises(ConfigurationError):
        RunConfig(command="rate", trap=rb87, temperature=-1.0)
    assert RunConfig(command="table").trap is None


@pytest.mark.parametrize(
    "parameter, start, stop, steps",
    [
        ("mass_amu", 1.0, 2.0, 5),
        ("bias_field", 2.0, 1.0, 5),
        ("bias_field", 1.0, 2.0, 1),
        ("bias_field", -1.0, 2.0, 5),
    ],
)
def test_sweep_spec_rejects(parameter, start, stop, steps):
    with pytest.raises(ConfigurationError):
        SweepSpec(parameter, start, stop, steps)


def test_table_command(settings):
    report = run(RunConfig(command="table", p_max=5), settings)
    assert report.columns == TABLE_HEADER
    rows = {(row[0], row[1]): row for row in report.rows}
    assert len(report.rows) == 11
    assert rows[(5, 2)][2:] == [5, 8, 3, 20]
    assert rows[(4, 1)][2:4] == [1, 1]
    assert rows[(4, 0)][4:] == [43, 96]


def test_table_defaults_to_settings(settings):
    report = run(RunConfig(command="table"), settings)
    assert max(row[0] for row in report.rows) == settings.table_pmax


@pytest.mark.parametrize("p_max", [0, -1, 25])
def test_table_pmax_out_of_range(tmp_path, p_max):
    with pytest.raises(ConfigurationError) as error:
        RunConfig(command="table", p_max=p_max)
    assert error.value.key == "pmax"
    out = tmp_path / "table.csv"
    assert main(["table", "--pmax", str(p_max), "--out", str(out)]) == EXIT_VALIDATION
    assert not out.exists()


def test_table_honours_small_pmax(settings):
    report = run(RunConfig(command="table", p_max=1), settings)
    assert [row[:2] for row in report.rows] == [[1, 0]]


def test_trap_file_must_be_utf8(tmp_path):
    path = tmp_path / "latin.trap"
    path.write_bytes(RB87_TRAP.encode("utf-8") + b"# \xff\xfe\n")
    with pytest.raises(ConfigurationError) as error:
        load_config(str(path))
    assert error.value.key == "config"
    assert main(["rate", "--config", str(path)]) == EXIT_VALIDATION


def test_rate_command_spin_half(settings):
    config = load_config(str(TRAPS_DIR / "spin_half.trap"))
    report = run(config, settings)
    row = dict(zip(report.columns, report.rows[0]))
    derived = derive_params(config.trap)
    surface = surface_params(derived, 1)
    k_f = final_wavenumber(derived, surface)
    closed = pi * surface.omega_i / 2 * exp(-pi * (k_f * surface.b_i) ** 2 / 4)
    assert row["rate_per_s"] == pytest.approx(closed, rel=1e-12)
    assert row["c_p"] == Fraction(1)
    assert report.metadata["chi0_warning"] is False
    assert report.metadata["notes"]


def test_rate_command_thermal(trap_file, settings):
    config = load_config(trap_file(), command="rate", temperature=1.0e-6)
    report = run(config, settings)
    assert any("C-bar" in note for note in report.metadata["notes"])


def test_derive_command(trap_file, settings):
    report = run(load_config(trap_file(), command="derive"), settings)
    row = dict(zip(report.columns, report.rows[0]))
    assert row["chi0"] == pytest.approx(row["omega0_rad_s"] / row["omega_prec_rad_s"], rel=1e-12)
    assert row["two_fz"] == 2
    assert "constants" in report.metadata
    assert report.metadata["axial_curvature_gauss_per_cm2"] == 0.0


def test_sweep_over_bias_field(trap_file, settings):
    spec = SweepSpec("bias_field", 1.0, 5.0, 20)
    report = run(load_config(trap_file(), command="sweep", sweep_spec=spec), settings)
    assert report.columns == SWEEP_HEADER
    assert len(report.rows) == 20
    rates = [row[SWEEP_HEADER.index("rate_per_s")] for row in report.rows]
    assert all(b < a for a, b in zip(rates, rates[1:]))
    assert report.rows[0][1] == 1.0 and report.rows[-1][1] == 5.0


def test_sweep_over_g_factor(trap_file, settings):
    spec = SweepSpec("g_factor", 0.5, 1.0, 3)
    report = run(load_config(trap_file(), command="sweep", sweep_spec=spec), settings)
    assert [row[0] for row in report.rows] == ["g_factor"] * 3


def test_sweep_rows_follow_rates_along(trap_file, settings):
    spec = SweepSpec("bias_field", 1.0, 3.0, 3)
    config = load_config(trap_file(), command="sweep", sweep_spec=spec)
    report = run(config, settings)
    traps = [with_parameter(config.trap, "bias_field", value) for value in (1.0, 2.0, 3.0)]
    expected = [breakdown.rate for breakdown in rates_along(traps)]
    assert [row[SWEEP_HEADER.index("rate_per_s")] for row in report.rows] == expected


def test_write_output_to_stdout(capsys):
    write_output(Report("table", ["a"], [[1]]), None, "csv")
    assert capsys.readouterr().out == "a\n1\n"


def test_main_table(tmp_path):
    out = tmp_path / "table.csv"
    assert main(["table", "--pmax", "5", "--out", str(out)]) == EXIT_OK
    lines = _table_lines(out)
    assert lines[0] == "p,p2,n_num,n_den,c_p_num,c_p_den"
    assert lines[-1] == "5,2,5,8,3,20"
    assert len(lines) == 12


def test_main_sweep_is_byte_identical(tmp_path, trap_file):
    path = trap_file()
    outputs = []
    for name in ("first.csv", "second.csv"):
        out = tmp_path / name
        argv = ["sweep", "--config", path, "--param", "bias_field", "--from", "1", "--to", "5"]
        assert main(argv + ["--steps", "20", "--out", str(out)]) == EXIT_OK
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    lines = _table_lines(tmp_path / "first.csv")
    assert lines[0] == ",".join(SWEEP_HEADER)
    assert len(lines) == 21


def test_main_json(tmp_path, trap_file):
    out = tmp_path / "derive.json"
    assert main(["derive", "--config", trap_file(), "--format", "json", "--out", str(out)]) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["command"] == "derive"
    assert payload["rows"][0]["chi0"] == pytest.approx(0.0644, rel=1e-2)
    assert payload["metadata"]["version"]


def test_main_exit_statuses(tmp_path, trap_file):
    bad = trap_file(_replace("two_fz", "two_fz = 3").replace("two_f = 2", "two_f = 4"))
    assert main(["rate", "--config", bad]) == EXIT_VALIDATION
    assert main(["rate", "--config", str(tmp_path / "missing.trap")]) == EXIT_IO
    good = trap_file()
    assert main(["rate", "--config", good, "--out", str(tmp_path)]) == EXIT_IO
    argv = ["sweep", "--config", good, "--param", "bias_field", "--from", "5", "--to", "1"]
    assert main(argv + ["--steps", "4"]) == EXIT_VALIDATION


def test_main_verify_fast(tmp_path):
    out = tmp_path / "verify.csv"
    assert main(["verify", "--fast", "--out", str(out)]) == EXIT_OK
    lines = _table_lines(out)
    assert lines[0] == "name,kind,tolerance,deviation,status,detail"
    assert all(",pass," in line for line in lines[1:])
