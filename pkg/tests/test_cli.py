"""Command line: config loading, CSV output and exit codes."""

import csv
import hashlib
import io

import pytest

from regdim.cli import build_parser, main
from regdim.cli.commands import cmd_estimate, cmd_formula, cmd_sweep_epsilon
from regdim.cli.output import format_value, render_csv
from regdim.core import ConfigError
from regdim.models.run_config import load_run_config

CANTOR = """
model:
  family: selfsimilar
  ratios: ["1/3", "1/3"]
  translations: [0, "2/3"]
  probs: [0.7, 0.3]
grid: {base: 3, exp_min: 0, exp_max: 8, gap_min: 4, gap_max: 6}
estimators: [dimreg, local_dim, doubling]
"""

SEQUENCE_MIXED = """
model:
  family: sequence
  points: {kind: poly, param: 1}
  weights: {kind: exp, param: "1/2"}
  n_max: 1000
estimators: [violation]
"""

LENS = """
model:
  family: lens
  i_max: 6
"""


def _rows(text: str):
    lines = text.split("\r\n")
    if lines[0].startswith("#"):
        lines = lines[1:]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


# ===========================================
# Output formatting
# ===========================================

@pytest.mark.parametrize("value, expected", [
    (None, ""),
    (float("inf"), "inf"),
    (1 / 3, "0.333333333333"),
    (2, "2"),
    ((0.5, 0.25), "0.5 0.25"),
])
def test_format_value(value, expected):
    assert format_value(value) == expected


def test_render_csv_uses_crlf_and_a_hash_line():
    text = render_csv(("a", "b"), [{"a": 1.5}], "abc")
    assert text == "# config_sha256=abc\r\na,b\r\n1.5,\r\n"


# ===========================================
# Config loading
# ===========================================

def test_config_hash_is_the_file_digest(write_config):
    path = write_config(CANTOR)
    _, digest = load_run_config(path)
    assert digest == hashlib.sha256(path.read_bytes()).hexdigest()


def test_quoted_numbers_become_fractions(write_config):
    config, _ = load_run_config(write_config(CANTOR))
    ratios = config.model.ratios
    assert str(ratios[0]) == "1/3"
    assert config.model.probs == [0.7, 0.3]


@pytest.mark.parametrize("text, key", [
    (CANTOR.replace("[dimreg, local_dim, doubling]", "[dimreg, bogus]"), "estimators.1"),
    (CANTOR + "colour: blue\n", "colour"),
    (CANTOR.replace('"2/3"', '"2/x"'), "translations"),
    (CANTOR.replace("exp_min: 0", "exp_min: 9"), "grid"),
    (CANTOR.replace("[0.7, 0.3]", "[0.7, 0.4]"), "probs"),
    (CANTOR.replace("[0.7, 0.3]", "[1.2, -0.2]"), "probs"),
    (CANTOR.replace('["1/3", "1/3"]', '["1/3", "3/2"]'), "ratios"),
    (SEQUENCE_MIXED.replace("{kind: exp, param: \"1/2\"}", "{kind: poly, param: 1}"), "model"),
    (SEQUENCE_MIXED.replace("{kind: exp, param: \"1/2\"}", "{kind: exp, param: 2}"), "weights"),
    (LENS + "  h: 0.01\n", "model"),
    ("model: {family: sponge, preset: epsilon_carpet, epsilon: 0.75}\n", "epsilon"),
    ("model: {family: sponge, bases: [2, 3], digits: [[0, 5]], probs: [1]}\n", "model"),
    (LENS + "pushforward: {ratio: 0}\n", "pushforward.ratio"),
    ("model: [unclosed\n", "config"),
    ("- just\n- a list\n", "config"),
])
def test_invalid_configs_name_the_key(write_config, text, key):
    with pytest.raises(ConfigError) as info:
        load_run_config(write_config(text))
    assert key in info.value.key


def test_missing_file_is_a_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "absent.yaml")


def test_pushforward_orthogonal_part_follows_the_seed(write_config):
    text = LENS + "pushforward: {ratio: \"1/2\", random_orthogonal: true}\n"
    a, _ = load_run_config(write_config(text))
    b = a.model_copy(update={"seed": 7})
    q0 = a.pushforward.similarity(2, a.seed).orthogonal
    assert (q0 == a.pushforward.similarity(2, a.seed).orthogonal).all()
    assert not (q0 == b.pushforward.similarity(2, b.seed).orthogonal).all()


# ===========================================
# formula
# ===========================================

def test_formula_on_the_biased_cantor(write_config):
    path = write_config(CANTOR)
    text = cmd_formula(str(path))
    assert text.startswith(f"# config_sha256={hashlib.sha256(path.read_bytes()).hexdigest()}\r\n")
    values = {row["quantity"]: row["value"] for row in _rows(text)}
    assert float(values["dimreg"]) == pytest.approx(1.09590, abs=1e-5)


def test_formula_prints_infinity_for_mixed_sequences(write_config):
    rows = _rows(cmd_formula(str(write_config(SEQUENCE_MIXED))))
    assert {row["quantity"]: row["value"] for row in rows}["dimreg"] == "inf"


def test_formula_without_closed_form(write_config):
    rows = _rows(cmd_formula(str(write_config(LENS))))
    assert rows == [{"quantity": "dimreg", "value": "", "note": "no closed form"}]


def test_formula_writes_the_out_file(write_config, tmp_path):
    out = tmp_path / "formula.csv"
    text = cmd_formula(str(write_config(CANTOR)), str(out))
    assert out.read_bytes() == text.encode("utf-8")


# ===========================================
# estimate
# ===========================================

def test_estimate_rows_follow_the_estimator_list(write_config):
    rows = _rows(cmd_estimate(str(write_config(CANTOR))))
    names = [row["estimator"] for row in rows]
    assert names[0] == "dimreg"
    assert names[-1] == "doubling(theta=0.5)"
    assert names.count("local_dim") == 4
    assert all(row["error"] == "" and row["runtime_ms"] == "" for row in rows)
    assert float(rows[0]["value"]) == pytest.approx(1.0959, abs=0.05)


def test_output_does_not_depend_on_threads(write_config):
    path = str(write_config(CANTOR))
    assert cmd_estimate(path, threads=1) == cmd_estimate(path, threads=4)


def test_timings_fill_the_runtime_column(write_config):
    rows = _rows(cmd_estimate(str(write_config(CANTOR)), timings=True))
    assert all(float(row["runtime_ms"]) >= 0 for row in rows)


def test_wrong_family_becomes_an_error_row(write_config):
    text = CANTOR.replace("[dimreg, local_dim, doubling]", "[violation, dimreg]")
    rows = _rows(cmd_estimate(str(write_config(text))))
    assert rows[0]["estimator"] == "violation"
    assert "sequence model" in rows[0]["error"]
    assert rows[1]["error"] == ""


def test_library_errors_become_error_rows(write_config, monkeypatch):
    def fail(*args, **kwargs):
        raise ValueError("f(a) and f(b) must have different signs")

    monkeypatch.setattr("regdim.cli.commands.estimate.estimate_upper_regularity", fail)
    rows = _rows(cmd_estimate(str(write_config(CANTOR))))
    assert rows[0]["estimator"] == "dimreg"
    assert rows[0]["error"].startswith("ValueError: ")
    assert rows[-1]["estimator"] == "doubling(theta=0.5)"
    assert all(row["error"] == "" for row in rows[1:])


def test_violation_rows_on_a_mixed_sequence(write_config):
    rows = _rows(cmd_estimate(str(write_config(SEQUENCE_MIXED))))
    assert len(rows) == 11
    assert all(row["witness_x"] == "0" for row in rows)
    assert all(float(row["value"]) > 1e3 for row in rows)


# ===========================================
# sweep
# ===========================================

def test_sweep_reproduces_the_carpet_curves():
    rows = _rows(cmd_sweep_epsilon(0.01, 0.5, 50))
    assert len(rows) == 50
    assert abs(float(rows[-1]["dimreg"]) - float(rows[-1]["assouad"])) <= 1e-9

    quarter = next(row for row in rows if abs(float(row["epsilon"]) - 0.25) < 1e-9)
    values = sorted(float(quarter[c]) for c in ("dimreg", "T", "sup_local", "assouad"))
    # T and sup_local are the closest pair, about 0.208 apart
    assert all(b - a >= 0.2 for a, b in zip(values, values[1:]))

    branch = {round(float(row["epsilon"]), 2): row["sup_local_branch"] for row in rows}
    assert branch[0.06] == "1"
    assert branch[0.07] == "2"


@pytest.mark.parametrize("eps_min, eps_max, steps", [(0.0, 0.5, 10), (0.3, 0.2, 10), (0.1, 0.6, 10), (0.1, 0.5, 1)])
def test_sweep_rejects_bad_ranges(eps_min, eps_max, steps):
    with pytest.raises(ConfigError):
        cmd_sweep_epsilon(eps_min, eps_max, steps)


# ===========================================
# Exit codes
# ===========================================

def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_main_succeeds(write_config, capsys):
    assert main(["formula", "--config", str(write_config(CANTOR))]) == 0
    assert "dimreg" in capsys.readouterr().out


def test_main_keeps_going_after_a_failed_estimator(write_config, capsys):
    text = CANTOR.replace("[dimreg, local_dim, doubling]", "[nondoubling]")
    assert main(["estimate", "--config", str(write_config(text))]) == 0
    assert "lens model" in capsys.readouterr().out


def test_main_maps_config_errors_to_two(write_config, tmp_path):
    assert main(["formula", "--config", str(tmp_path / "absent.yaml")]) == 2
    assert main(["estimate", "--config", str(write_config(CANTOR)), "--threads", "0"]) == 2
    assert main(["estimate", "--config", str(write_config(CANTOR)), "--tol", "2"]) == 2
    assert main(["sweep", "--eps-min", "0.4", "--eps-max", "0.2"]) == 2


@pytest.mark.parametrize("command", ["formula", "estimate"])
def test_model_values_fail_before_computing(write_config, command, caplog):
    path = write_config(CANTOR.replace("[0.7, 0.3]", "[0.7, 0.4]"))
    assert main([command, "--config", str(path)]) == 2
    assert "probs" in caplog.text


def test_main_maps_computation_errors_to_three(write_config):
    # pieces [0, 1/3] and [1/3, 2/3] touch, so separation cannot be certified
    text = CANTOR.replace('"2/3"', '"1/3"')
    assert main(["formula", "--config", str(write_config(text))]) == 3


def test_main_maps_unexpected_errors_to_three(write_config, monkeypatch):
    def overflow(self):
        raise OverflowError("math range error")

    monkeypatch.setattr("regdim.models.run_config.RunConfig.build_base_model", overflow)
    assert main(["formula", "--config", str(write_config(CANTOR))]) == 3
