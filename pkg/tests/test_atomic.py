import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superrad.atomic import (
    atomic_dicke_intensity,
    atomic_intensity,
    atomic_populations,
    five_atom_intensity,
    five_atom_populations,
    initial_intensity_comparison,
)
from superrad.errors import ValidationError

TAU = np.linspace(0, 3, 61)


def test_five_atom_start_and_early_time():
    pops = atomic_populations(5, [0.0, 0.2, 12.0])
    assert np.allclose(pops.values[:, 0], [1, 0, 0, 0, 0, 0])
    assert pops.values[0, 1] == pytest.approx(math.exp(-1), abs=1e-9)
    assert pops.values[5, 2] == pytest.approx(1, abs=1e-6)


def test_five_atom_closed_forms():
    assert np.max(np.abs(atomic_populations(5, TAU).values - five_atom_populations(TAU))) < 1e-6
    i = atomic_intensity(5, TAU)["intensity"]
    assert np.max(np.abs(i - five_atom_intensity(TAU))) < 1e-6


def test_intensity_examples():
    assert atomic_intensity(5, [0.0])["intensity"][0] == pytest.approx(5)
    assert atomic_dicke_intensity(2.5, 2.5) == pytest.approx(5)
    one = atomic_intensity(1, TAU)["intensity"]
    assert np.allclose(one, np.exp(-TAU), atol=1e-9)
    fine = np.linspace(0, 1, 401)
    assert atomic_intensity(5, fine)["intensity"].max() > 5


@pytest.mark.parametrize("n", [1, 4, 8, 12])
def test_probability_conserved(n):
    pops = atomic_populations(n, np.linspace(0, 4, 21))
    assert np.max(np.abs(pops.values.sum(0) - 1)) < 1e-9
    assert np.all(pops.values > -1e-12)


@pytest.mark.parametrize("n", [2, 5, 8])
def test_all_photons_eventually_emitted(n):
    pops = atomic_populations(n, [0.0, 10.0])
    assert np.dot(np.arange(n + 1), pops.values[:, 1]) == pytest.approx(n, abs=1e-4)


def test_comparison_examples():
    assert initial_intensity_comparison(4, 2) == (6, 8)
    assert initial_intensity_comparison(7, 0) == (0, 0)
    for n in (1, 3, 9):
        assert initial_intensity_comparison(n, 1) == (n, n)
    with pytest.raises(ValidationError):
        initial_intensity_comparison(3, 4)


@given(st.integers(1, 40), st.data())
def test_oscillators_never_dimmer(n, data):
    k = data.draw(st.integers(0, n))
    atomic, bosonic = initial_intensity_comparison(n, k)
    assert bosonic >= atomic
    assert (bosonic == atomic) == (k <= 1)


def test_series_channels():
    s = atomic_populations(3, TAU[:5]).to_series()
    assert s.labels() == ["P0", "P1", "P2", "P3", "intensity"]
