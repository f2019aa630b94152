import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superrad.collective import (
    BasisIndex,
    CouplingConfig,
    apply_collective_ladder,
    collective_transform,
    cumulative_norms,
    dicke_state_fock_vector,
    eigen_energy,
    enumerate_basis,
    star_spectrum,
)
from superrad.errors import BasisSizeError, ValidationError
from superrad.fock import FockSpace
from superrad.oracle import star_hamiltonian_spectrum

couplings = st.lists(st.floats(0.1, 5.0), min_size=1, max_size=8)


def test_cumulative_norms_examples():
    assert np.allclose(cumulative_norms(CouplingConfig((1.0,))), [1.0])
    assert np.allclose(cumulative_norms(CouplingConfig.uniform(2, 1.5)), [1.5, 1.5 * math.sqrt(2)])
    assert np.allclose(cumulative_norms(CouplingConfig((3.0, 4.0))), [3.0, 5.0])


def test_gamma_definition():
    cfg = CouplingConfig((3.0, 4.0), kappa=2.0)
    assert cfg.gamma == pytest.approx(4 * 25 / (2 * 2.0))


@pytest.mark.parametrize(
    "kw",
    [dict(couplings=(1.0, -1.0)), dict(couplings=(1.0,), kappa=0.0), dict(couplings=())],
)
def test_coupling_config_rejects_invalid(kw):
    with pytest.raises(ValidationError):
        CouplingConfig(**kw)


def test_transform_two_modes():
    g1, g2 = 0.8, 1.7
    u = collective_transform(CouplingConfig((g1, g2)))
    norm = math.hypot(g1, g2)
    assert np.allclose(u, [[g2 / norm, -g1 / norm], [g1 / norm, g2 / norm]], atol=1e-15)


def test_transform_single_mode_and_uniform_three():
    assert np.allclose(collective_transform(CouplingConfig((2.0,))), [[1.0]])
    u = collective_transform(CouplingConfig.uniform(3))
    assert np.max(np.abs(u @ u.T - np.eye(3))) < 1e-14


@given(couplings)
def test_transform_orthogonal_and_matches_rows(g):
    cfg = CouplingConfig(tuple(g))
    u = collective_transform(cfg)
    n = len(g)
    assert np.max(np.abs(u @ u.T - np.eye(n))) < 1e-12
    big = cumulative_norms(cfg)
    for k in range(n - 1):
        row = np.zeros(n)
        row[: k + 1] = [g[k + 1] * gj for gj in g[: k + 1]]
        row[k + 1] = -big[k] ** 2
        assert np.allclose(u[k], row / (big[k] * big[k + 1]), atol=1e-12)
    assert np.allclose(u[-1], np.array(g) / big[-1], atol=1e-12)


def test_enumerate_two_modes_order():
    basis = enumerate_basis(2, 2)
    expected = [((0,), 0), ((0,), 1), ((1,), 0), ((0,), 2), ((1,), 1), ((2,), 0)]
    assert [(b.degeneracy, b.rung) for b in basis] == expected


@pytest.mark.parametrize("k", [0, 1, 5])
def test_enumerate_single_ladder(k):
    basis = enumerate_basis(1, k)
    assert [b.rung for b in basis] == list(range(k + 1))


@given(st.integers(1, 5), st.integers(0, 6))
def test_stratum_counts_are_binomial(n, m):
    basis = enumerate_basis(n, m)
    assert len(set(basis)) == len(basis)
    totals = [b.total for b in basis]
    assert totals == sorted(totals)
    for dark in range(m + 1):
        degeneracies = {b.degeneracy for b in basis if b.dark == dark}
        expected = 1 if n == 1 and dark == 0 else (math.comb(dark + n - 2, dark) if n > 1 else 0)
        assert len(degeneracies) == expected


def test_three_mode_dark_pairs():
    assert len({b.degeneracy for b in enumerate_basis(3, 2) if b.dark == 2}) == 3


def test_enumerate_overflow_guard():
    with pytest.raises(BasisSizeError):
        enumerate_basis(8, 40, limit=1000)


def test_ladder_examples():
    assert apply_collective_ladder(BasisIndex((2, 1), 0), 3, raising=False).result is None
    down = apply_collective_ladder(BasisIndex((0,), 4), 2, raising=False)
    assert down.coefficient == pytest.approx(2.0) and down.result == BasisIndex((0,), 3)
    up = apply_collective_ladder(BasisIndex((2, 0), 1), 1, raising=True)
    assert up.coefficient == pytest.approx(math.sqrt(3)) and up.result == BasisIndex((3, 0), 1)
    assert apply_collective_ladder(BasisIndex((0, 1), 1), 1, raising=False).coefficient == 0
    with pytest.raises(ValidationError):
        apply_collective_ladder(BasisIndex((0,), 1), 3, raising=True)


def test_dicke_vectors_examples():
    space = FockSpace.uniform(2, 2)
    u = CouplingConfig.uniform(2)
    v = dicke_state_fock_vector(BasisIndex((0,), 1), u, 2, space=space)
    assert np.allclose(v, (space.basis_vector((1, 0)) + space.basis_vector((0, 1))) / math.sqrt(2))
    g = CouplingConfig((0.6, 1.3))
    v = dicke_state_fock_vector(BasisIndex((1,), 0), g, 2, space=space)
    want = (1.3 * space.basis_vector((1, 0)) - 0.6 * space.basis_vector((0, 1))) / math.hypot(0.6, 1.3)
    assert np.allclose(v, want)
    v = dicke_state_fock_vector(BasisIndex((0,), 2), u, 2, space=space)
    want = (space.basis_vector((2, 0)) + space.basis_vector((0, 2)) + math.sqrt(2) * space.basis_vector((1, 1))) / 2
    assert np.allclose(v, want)


@pytest.mark.parametrize("g", [(1.0, 2.0), (0.7, 1.1, 1.9)])
def test_dicke_vectors_orthonormal(g):
    cfg = CouplingConfig(g)
    space = FockSpace.uniform(len(g), 4)
    basis = enumerate_basis(len(g), 4)
    vecs = np.array([dicke_state_fock_vector(b, cfg, 4, space=space) for b in basis])
    assert np.max(np.abs(vecs.conj() @ vecs.T - np.eye(len(basis)))) < 1e-12
    for b, v in zip(basis, vecs):
        support = space.totals[np.abs(v) > 1e-14]
        assert np.all(support == b.total)


@pytest.mark.parametrize("g", [(1.0, 2.0), (0.7, 1.1, 1.9)])
def test_ladder_matches_explicit_operators(g):
    cfg = CouplingConfig(g)
    n = len(g)
    space = FockSpace.uniform(n, 4)
    u = collective_transform(cfg)
    basis = enumerate_basis(n, 3)
    vec = {b: dicke_state_fock_vector(b, cfg, 4, space=space) for b in enumerate_basis(n, 4)}
    for k in range(1, n + 1):
        c_k = space.collective_annihilation(u[k - 1]).toarray()
        for b in basis:
            for raising, op in ((False, c_k), (True, c_k.conj().T)):
                act = apply_collective_ladder(b, k, raising=raising)
                explicit = op @ vec[b]
                abstract = np.zeros_like(explicit) if act.result is None else act.coefficient * vec[act.result]
                assert np.max(np.abs(explicit - abstract)) < 1e-12


def test_eigen_energy_examples():
    cfg = CouplingConfig((3.0, 4.0), omega=10.0)
    assert eigen_energy(0, 0, 0, cfg) == 0
    assert eigen_energy(3, 0, 0, cfg) == pytest.approx(30.0)
    assert eigen_energy(0, 1, 0, cfg) == pytest.approx(15.0)


@pytest.mark.parametrize("g,omega", [((1.0,), 0.0), ((1.0, 2.0), 0.4), ((0.5, 1.0, 1.5), -0.3)])
def test_spectrum_against_dense_hamiltonian(g, omega):
    cfg = CouplingConfig(g, omega=omega)
    assert np.max(np.abs(star_spectrum(cfg, 3) - star_hamiltonian_spectrum(cfg, 3))) < 1e-10
