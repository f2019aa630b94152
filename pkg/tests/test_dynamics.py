import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superrad.collective import BasisIndex, CouplingConfig, enumerate_basis
from superrad.dynamics import (
    Radiance,
    classify,
    correlation_matrix,
    dark_fraction,
    intensity_series,
    ladder_populations,
    mrl_series,
    pascal_matrices,
    pascal_solution_check,
    split_intensity,
    sweep_fraction,
    two_time_correlation,
    uniform_product_fraction,
)
from superrad.errors import ValidationError
from superrad.oracle import rung_populations_ode
from superrad.states import (
    CollectiveDisplaced,
    DickeSuperposition,
    IncoherentMixture,
    MultimodeFock,
    ProductSqueezedCoherent,
    vacuum,
)

TAU = np.linspace(0, 3, 31)

# two-time correlations from the regression-theorem oracle (N=2, g=(1,2)),
# sampled at tau = 0, 0.35, 0.7, 1.4 and frozen here
FROZEN_TAU = np.array([0.0, 0.35, 0.7, 1.4])
FROZEN_FOCK_12 = [0.0, -0.236249528184, -0.40273175691, -0.60272242879]
FROZEN_FOCK_22 = [2.0, 1.527500943555, 1.194536486127, 0.794555142394]
FROZEN_DICKE_12 = [0.8, 0.56375047178, 0.397268243089, 0.197277571234]


def dicke(deg, rung):
    return DickeSuperposition.single(BasisIndex(tuple(deg), rung))


def test_intensity_examples(uniform5):
    assert intensity_series(dicke((0,) * 4, 5), uniform5, [0.0])["intensity"][0] == pytest.approx(25)
    assert np.all(intensity_series(vacuum(5), uniform5, TAU)["intensity"] == 0)
    three = CouplingConfig.uniform(3)
    i = intensity_series(MultimodeFock((1, 1, 1)), three, TAU)["intensity"]
    assert i[0] == pytest.approx(3) and np.allclose(i, 3 * np.exp(-3 * TAU))


@given(st.lists(st.floats(0.2, 3.0), min_size=2, max_size=4), st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_intensity_nonnegative_and_decreasing(g, occ):
    cfg = CouplingConfig(tuple(g))
    i = intensity_series(MultimodeFock(tuple(occ[: len(g)])), cfg, TAU)["intensity"]
    assert np.all(i >= 0) and np.all(np.diff(i) <= 1e-15)


def test_mrl_series_laws():
    cfg = CouplingConfig((1.0, 1.4, 0.8))
    s = mrl_series(MultimodeFock((2, 1, 1)), cfg, TAU)
    assert np.allclose(s["L"], s["L"][0]) and np.allclose(s["R"], s["R"][0] * np.exp(-3 * TAU))
    assert np.allclose(s["M"], s["R"] + s["L"])


def test_split_examples(uniform2):
    mix = IncoherentMixture(distributions=((0.3, 0.7), (0.5, 0.25, 0.25)))
    for t in (0.0, 0.4, 2.0):
        assert split_intensity(mix, uniform2, t)[1] == 0
    iu, ic = split_intensity(dicke((1,), 0), uniform2, 0.0)
    assert iu == pytest.approx(-ic) and iu + ic == pytest.approx(0, abs=1e-12)
    for t in (0.0, 0.3):
        iu, ic = split_intensity(dicke((0,), 1), uniform2, t)
        assert iu == pytest.approx(math.exp(-2 * t)) and ic == pytest.approx(math.exp(-2 * t))
    with pytest.raises(ValidationError):
        split_intensity(MultimodeFock((1,)), CouplingConfig.uniform(1), 0.0)


@given(st.floats(0.2, 3.0), st.builds(complex, st.floats(-1, 1), st.floats(-1, 1)), st.floats(0, 2))
def test_split_sums_to_total(g2, a, t):
    cfg = CouplingConfig((1.0, g2))
    spec = ProductSqueezedCoherent((a, 0.5), (0.2, 0.1j))
    iu, ic = split_intensity(spec, cfg, t)
    total = intensity_series(spec, cfg, [t])["intensity"][0]
    assert iu + ic == pytest.approx(total, abs=1e-10)


@given(st.lists(st.integers(0, 3), min_size=2, max_size=2), st.integers(0, 3))
def test_dicke_fraction(deg, rung):
    cfg = CouplingConfig.uniform(3)
    idx = BasisIndex(tuple(deg), rung)
    f, fn = dark_fraction(DickeSuperposition.single(idx), cfg)
    if idx.total == 0:
        assert f is None
    else:
        assert f == pytest.approx(idx.dark / idx.total)
    assert fn == pytest.approx(2 / 3)


def test_fraction_coherent_and_squeezed_limits():
    cfg = CouplingConfig.uniform(10)
    assert dark_fraction(ProductSqueezedCoherent((0.8,) * 10), cfg)[0] == pytest.approx(0, abs=1e-15)
    f, fn = dark_fraction(ProductSqueezedCoherent((0,) * 10, (0.6,) * 10), cfg)
    assert f == pytest.approx(0.9) and fn == pytest.approx(0.9)


def test_classify_examples(uniform5):
    c = classify(dicke((0,) * 4, 5), uniform5)
    assert c.tag is Radiance.SUPERRADIANT and str(c) == "Superradiant F=0.000 F_N=0.800"
    assert classify(MultimodeFock((1, 1, 1)), CouplingConfig.uniform(3)).tag is Radiance.NORMAL
    for g in [(1.0, 1.0), (0.3, 2.0)]:
        assert classify(dicke((1,), 0), CouplingConfig(g)).tag is Radiance.DARK
    v = classify(vacuum(3), CouplingConfig.uniform(3))
    assert v.tag is Radiance.VACUUM and v.dark_fraction is None
    assert classify(MultimodeFock((3,)), CouplingConfig.uniform(1)).tag is Radiance.NORMAL


def test_subradiant_dicke():
    # L >= R(N-1) with R > 0 is subradiant
    assert classify(dicke((2, 1), 1), CouplingConfig.uniform(3)).tag is Radiance.SUBRADIANT


@given(st.lists(st.floats(0.2, 3.0), min_size=3, max_size=3), st.floats(0.01, 100), st.floats(0.1, 10))
def test_classify_scale_invariant(g, scale, kappa):
    spec = ProductSqueezedCoherent((0.4, -0.3j, 0.2), (0.3, 0.0, 0.1))
    a = classify(spec, CouplingConfig(tuple(g), kappa))
    b = classify(spec, CouplingConfig(tuple(scale * x for x in g), kappa * scale))
    assert a.tag is b.tag
    assert a.dark_fraction == pytest.approx(b.dark_fraction, rel=1e-10)
    assert a.normal_fraction == pytest.approx(b.normal_fraction, rel=1e-10)


@given(st.integers(0, 10_000))
def test_equal_energy_monotonicity(seed):
    rng = np.random.default_rng(seed)
    cfg = CouplingConfig(tuple(rng.uniform(0.3, 2.0, 3)))
    basis = [b for b in enumerate_basis(3, 3) if b.total == 3]
    picks = [rng.choice(len(basis), size=2, replace=False) for _ in range(2)]
    states = []
    for row in picks:
        amps = rng.normal(size=2) + 1j * rng.normal(size=2)
        states.append(DickeSuperposition.normalized(list(zip(amps, [basis[i] for i in row]))))
    (fa, _), (fb, _) = (dark_fraction(s, cfg) for s in states)
    ia, ib = (intensity_series(s, cfg, [0.0])["intensity"][0] for s in states)
    if abs(ia - ib) > 1e-9:
        assert (ia > ib) == (fa < fb)


def test_ladder_populations_at_ln2(uniform5):
    tau = math.log(2) / 5
    pops = ladder_populations(dicke((0,) * 4, 5), uniform5, [0.0, tau, 40.0])
    want = np.array([math.comb(5, r) for r in range(6)]) / 32
    assert np.allclose(pops.values[:, 1], want, atol=1e-14)
    assert np.allclose(pops.values[:, 0], [0, 0, 0, 0, 0, 1])
    assert pops.values[0, 2] == pytest.approx(1)


def test_ladders_do_not_mix():
    cfg = CouplingConfig((1.0, 2.0))
    spec = DickeSuperposition.normalized([(1, BasisIndex((0,), 2)), (1j, BasisIndex((1,), 1))])
    pops = ladder_populations(spec, cfg, TAU)
    by_ladder = {}
    for idx, row in zip(pops.indices, pops.values):
        by_ladder.setdefault(idx.degeneracy, []).append(row)
    for rows in by_ladder.values():
        assert np.allclose(np.sum(rows, axis=0), 0.5, atol=1e-12)
    assert np.allclose(pops.values.sum(0), 1, atol=1e-10)


@given(st.lists(st.floats(0.0, 1.0), min_size=2, max_size=9), st.integers(1, 5))
def test_ladder_closed_form_matches_ode(weights, n):
    w = np.array(weights)
    if w.sum() < 1e-3:
        w[-1] = 1.0
    w /= w.sum()
    cfg = CouplingConfig.uniform(n)
    deg = (0,) * (n - 1)
    spec = DickeSuperposition(tuple((math.sqrt(x), BasisIndex(deg, r)) for r, x in enumerate(w) if x > 0))
    tau = np.linspace(0, 1.5, 16)
    pops = ladder_populations(spec, cfg, tau)
    ode = rung_populations_ode(w, n, tau)
    closed = np.zeros_like(ode)
    for idx, row in zip(pops.indices, pops.values):
        closed[idx.rung] = row
    assert np.max(np.abs(closed - ode)) < 1e-8


def test_ladder_log_domain_large_rungs():
    cfg = CouplingConfig.uniform(2)
    pops = ladder_populations(dicke((0,), 80), cfg, [0.0, 0.01, 0.5])
    assert np.all(np.isfinite(pops.values))
    assert np.allclose(pops.values.sum(0), 1, atol=1e-10)


def test_pascal_examples():
    a, b, d = pascal_matrices(3)
    assert [list(map(int, r)) for r in b] == [[1, 0, 0], [1, 1, 0], [1, 2, 1]]
    assert pascal_solution_check(1) == 0
    assert pascal_solution_check(10) <= 1e-12
    assert max(pascal_solution_check(k) for k in range(1, 26)) <= 1e-10


def test_correlation_frozen_oracle_values():
    cfg = CouplingConfig((1.0, 2.0))
    fock = MultimodeFock((1, 2))
    assert np.allclose(two_time_correlation(fock, cfg, 1, 2, FROZEN_TAU)["c_1_2"], FROZEN_FOCK_12, atol=1e-9)
    assert np.allclose(two_time_correlation(fock, cfg, 2, 2, FROZEN_TAU)["c_2_2"], FROZEN_FOCK_22, atol=1e-9)
    d = dicke((0,), 2)
    assert np.allclose(two_time_correlation(d, cfg, 1, 2, FROZEN_TAU)["c_1_2"], FROZEN_DICKE_12, atol=1e-9)


def test_correlation_special_cases():
    g = np.array([1.0, 1.5, 0.5])
    cfg = CouplingConfig(tuple(g))
    w = g / np.linalg.norm(g)
    occ = (2, 1, 3)
    c = two_time_correlation(MultimodeFock(occ), cfg, 1, 3, TAU)["c_1_3"]
    assert np.allclose(c, -w[0] * w[2] * (1 - np.exp(-1.5 * TAU)) * occ[2])
    c = two_time_correlation(ProductSqueezedCoherent((0.3, 1j, -0.5)), cfg, 2, 3, TAU)["c_2_3"]
    assert np.max(np.abs(c)) < 1e-15
    c = two_time_correlation(dicke((0, 0), 4), cfg, 2, 1, TAU)["c_2_1"]
    assert np.allclose(c, 4 * w[1] * w[0] * np.exp(-1.5 * TAU))


def test_correlation_initial_value_is_centered_moment():
    cfg = CouplingConfig((1.0, 2.0))
    spec = CollectiveDisplaced(MultimodeFock((1, 0)), 2, 0.4 + 0.2j)
    c0 = correlation_matrix(spec, cfg, 0.0)
    for i in (1, 2):
        for j in (1, 2):
            assert two_time_correlation(spec, cfg, i, j, [0.0])[f"c_{i}_{j}"][0] == pytest.approx(c0[i - 1, j - 1])
    with pytest.raises(ValidationError):
        two_time_correlation(spec, cfg, 0, 1, TAU)


def test_sweep_matches_closed_form():
    cfg = CouplingConfig.uniform(10)
    alphas = np.linspace(0, 2, 9)
    rs = np.linspace(0, 2, 9)
    closed, piped = sweep_fraction(cfg, alphas, rs)
    ok = np.isfinite(closed)
    assert not ok[0, 0] and ok.sum() == ok.size - 1
    assert np.max(np.abs(closed[ok] - piped[ok])) < 1e-10
    for i, a in enumerate(alphas):
        for j, r in enumerate(rs):
            if (i, j) != (0, 0):
                s = math.sinh(r) ** 2
                assert closed[i, j] == pytest.approx(1 - (a * a + s / 10) / (a * a + s), abs=1e-12)
    assert np.all(closed[1:, 0] == 0) and np.all(closed[0, 1:] == 0.9)
    assert np.max(np.abs(piped[0, 1:] - 0.9)) < 1e-15 and np.all(piped[1:, 0] == 0)
    assert uniform_product_fraction(0.0, 1.0, 10) == 0.9
