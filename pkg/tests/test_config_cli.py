import textwrap

import numpy as np
import pytest

from superrad.cli import main
from superrad.config import parse_config
from superrad.errors import ValidationError
from superrad.states import DickeSuperposition, MultimodeFock

MINIMAL = """
[coupling]
n_modes = 3
g = 1, 2, 0.5

[state]
family = fock
occupations = 1, 0, 2
"""


def write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text) + "\n[output]\ndir = out\nplots = false\n")
    return str(path)


def test_minimal_config():
    run = parse_config(MINIMAL)
    assert tuple(run.coupling.g) == (1.0, 2.0, 0.5)
    assert run.coupling.kappa == 1.0
    assert isinstance(run.state, MultimodeFock)
    assert run.tau[0] == 0 and run.tau[-1] == pytest.approx(3.0)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("[coupling]\nn_modes = 2\nuniform_g = 1\nkappa = -1\n", ":4: kappa must be positive"),
        ("[coupling]\nn_modes = 2\nuniform_g = 1\nspeed = 3\n", ":4: unknown key 'speed'"),
        ("[coupling]\nn_modes = 2\nuniform_g = 1\n[extras]\n", ":4: unknown section"),
        ("[coupling]\nn_modes = 2\ng = 1\n", ":3: g lists 1 couplings"),
        ("[coupling]\nn_modes = 2\nuniform_g = 1\n[time]\nsamples = 1\n", ":5: samples"),
        ("[coupling]\nn_modes = 2\nuniform_g = 1\n[state]\nfamily = dicke\nterms = 1|0|x\n", ":5:"),
    ],
)
def test_bad_configs_name_the_line(text, fragment):
    with pytest.raises(ValidationError) as err:
        parse_config(text, source="bad.ini")
    assert fragment in str(err.value)


def test_moon_expands_to_dicke_terms():
    run = parse_config("[coupling]\nn_modes = 2\nuniform_g = 1\n[state]\nfamily = moon m=2 n=0\n")
    assert isinstance(run.state, DickeSuperposition)
    assert sum(abs(a) ** 2 for a, _ in run.state.terms) == pytest.approx(1)


def test_classify_output(tmp_path, capsys):
    path = write(tmp_path, "[coupling]\nn_modes = 5\nuniform_g = 1\n[state]\nfamily = dicke\nterms = 1|0,0,0,0|5\n")
    assert main(["classify", path]) == 0
    assert capsys.readouterr().out.strip() == "Superradiant F=0.000 F_N=0.800"
    fock = write(tmp_path, "[coupling]\nn_modes = 5\nuniform_g = 1\n[state]\nfamily = fock\noccupations = 1,0,0,0,0\n", "f.ini")
    assert main(["classify", fock]) == 0
    assert capsys.readouterr().out.strip() == "Normal F=0.800 F_N=0.800"


def test_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, "[coupling]\nn_modes = 2\nuniform_g = 1\nkappa = 0\n")
    assert main(["classify", bad]) == 1
    assert "kappa" in capsys.readouterr().err
    leaky = write(
        tmp_path,
        "[coupling]\nn_modes = 2\nuniform_g = 1\n[state]\nfamily = collective_squeezed_vacuum\nxi = 2\n"
        "[tolerances]\noracle_max_quanta = 2\n",
        "leak.ini",
    )
    assert main(["evolve", leaky, "--oracle"]) == 2
    assert "truncation leak" in capsys.readouterr().err
    ok = write(tmp_path, "[coupling]\nn_modes = 2\nuniform_g = 1\n[state]\nfamily = fock\noccupations = 1,1\n", "ok.ini")
    assert main(["correlations", ok, "--i", "1", "--j", "3"]) == 1
    assert main(["evolve", ok]) == 0


def _table(path):
    lines = open(path).read().splitlines()
    header = lines[0].split(",")
    return header, np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])


def test_compare_atomic_initial_values(tmp_path):
    path = write(tmp_path, "[coupling]\nn_modes = 1\nuniform_g = 1\n[time]\nt_max = 2\nsamples = 21\n")
    assert main(["compare-atomic", path, "--n", "5"]) == 0
    header, rows = _table(tmp_path / "out" / "superrad_compare_atomic.csv")
    assert header == ["t_gamma", "bosonic_intensity", "atomic_intensity"]
    assert rows[0, 1] == pytest.approx(25, abs=1e-12) and rows[0, 2] == pytest.approx(5, abs=1e-12)
    _, init = _table(tmp_path / "out" / "superrad_initial_intensity.csv")
    assert tuple(init[2]) == (2, 8, 10)


def test_sweep_alpha_zero_row(tmp_path):
    path = write(tmp_path, "[coupling]\nn_modes = 10\nuniform_g = 1\n")
    assert main(["sweep-fraction", path, "--alpha-range", "0:1:3", "--r-range", "0.5:2:4"]) == 0
    _, rows = _table(tmp_path / "out" / "superrad_sweep_fraction.csv")
    zero = rows[rows[:, 0] == 0]
    assert np.all(zero[:, 3] == 0.9)
    assert np.max(np.abs(zero[:, 2] - 0.9)) < 1e-15


def test_law_eberly_command(tmp_path, capsys):
    path = write(tmp_path, "[coupling]\nn_modes = 2\nuniform_g = 1\n")
    assert main(["law-eberly", path, "--target", "0.6,0,0.8j"]) == 0
    assert "fidelity=" in capsys.readouterr().out
    assert main(["law-eberly", path, "--target", "1,1"]) == 1


def test_reruns_are_byte_identical(tmp_path):
    text = "[coupling]\nn_modes = 3\ng = 1,1.5,0.5\n[state]\nfamily = dicke\nterms = 0.6|1,0|1; 0.8j|0,0|2\n"
    path = write(tmp_path, text)
    out = tmp_path / "out" / "superrad_evolve.csv"
    assert main(["evolve", path]) == 0
    first = out.read_bytes()
    assert main(["evolve", path]) == 0
    assert out.read_bytes() == first
    assert b"\r" not in first and b"-0," not in first
