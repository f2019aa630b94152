import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superrad.collective import BasisIndex, CouplingConfig, collective_transform
from superrad.dynamics import Radiance, classify
from superrad.errors import ValidationError
from superrad.preparation import (
    JaynesCummings,
    PhasePause,
    PulseSequence,
    QubitRotation,
    couplings_for_collective_weights,
    law_eberly_fidelity,
    law_eberly_simulate,
    law_eberly_synthesize,
    multimode_expansion,
    waveguide_dark_fraction,
    waveguide_hamiltonian,
    waveguide_output_state,
    waveguide_propagator,
)
from superrad.states import DickeSuperposition

S2 = math.sqrt(2)


def test_propagator_identity_at_zero():
    assert np.allclose(waveguide_propagator(4, 1.3, 0.7, 0.0).matrix, np.eye(4))


def test_propagator_three_guides():
    j, omega, t = 0.9, 0.4, 1.3
    a = waveguide_propagator(3, j, omega, t).matrix
    x = 0.25 * cmath.exp(-1j * (omega + S2 * j) * t)
    z = cmath.exp(1j * S2 * j * t)
    assert np.allclose(a[:, 0], [x * (z + 1) ** 2, -S2 * x * (z * z - 1), x * (z - 1) ** 2], atol=1e-14)


@given(st.integers(1, 6), st.floats(-2, 2), st.floats(-1, 1), st.floats(0, 5))
def test_propagator_unitary_and_matches_hamiltonian(n, j, omega, t):
    from scipy.linalg import expm

    w = waveguide_propagator(n, j, omega, t)
    assert w.unitarity_error() < 1e-12
    assert np.max(np.abs(w.matrix - expm(-1j * t * waveguide_hamiltonian(n, j, omega)))) < 1e-10


def test_three_guide_fractions():
    cfg = CouplingConfig.uniform(3)
    j = 0.7
    t_star = math.pi / (2 * S2 * j)
    assert waveguide_dark_fraction(1, j, t_star, cfg) == pytest.approx(5 / 6, abs=1e-12)
    assert waveguide_dark_fraction(2, j, t_star, cfg) == pytest.approx(1 / 3, abs=1e-12)
    for q in (1, 2):
        assert waveguide_dark_fraction(q, j, 0.0, cfg) == pytest.approx(2 / 3, abs=1e-12)
    for t in np.linspace(0, 4, 9):
        c = math.cos(2 * S2 * j * t)
        assert waveguide_dark_fraction(1, j, t, cfg) == pytest.approx(0.75 - c / 12, abs=1e-12)
        assert waveguide_dark_fraction(2, j, t, cfg) == pytest.approx(0.5 + c / 6, abs=1e-12)


def test_two_photon_output_is_normalized_and_multiphoton_rejected():
    cfg = CouplingConfig.uniform(3)
    out = waveguide_output_state((1, 1, 0), 1.0, 0.0, 0.8, cfg)
    assert isinstance(out, DickeSuperposition)
    assert sum(abs(a) ** 2 for a, _ in out.terms) == pytest.approx(1, abs=1e-12)
    with pytest.raises(ValidationError):
        waveguide_output_state((2, 1, 0), 1.0, 0.0, 0.8, cfg)


def test_trivial_targets():
    assert len(law_eberly_synthesize([1.0])) == 0
    assert law_eberly_fidelity([1.0], PulseSequence()) == pytest.approx(1)
    seq = law_eberly_synthesize([0, 1])
    assert seq.steps == (QubitRotation(-math.pi / 2), JaynesCummings(math.pi / 2))


def test_rejects_unnormalized_target():
    with pytest.raises(ValidationError):
        law_eberly_synthesize([0.5, 0.5])


@given(st.integers(0, 10_000), st.integers(1, 4))
def test_round_trip(seed, top):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=top + 1) + 1j * rng.normal(size=top + 1)
    c /= np.linalg.norm(c)
    seq = law_eberly_synthesize(c)
    assert law_eberly_fidelity(c, seq) >= 1 - 1e-8
    assert seq.count(JaynesCummings) <= top and seq.count(QubitRotation) <= top + 1
    assert len(seq) <= 3 * (top + 1)
    res = law_eberly_simulate(seq, max_quanta=top + 1)
    assert abs(res.norm - 1) < 1e-12 and res.excited_population < 1e-12


def test_zero_top_levels_are_skipped():
    seq = law_eberly_synthesize([0.6, 0.8, 0.0, 0.0])
    assert seq.count(JaynesCummings) == 1


def test_schedule_text_round_trip():
    c = np.array([0.3, 0.4j, -0.5, 0.2 + 0.1j])
    c /= np.linalg.norm(c)
    seq = law_eberly_synthesize(c)
    again = PulseSequence.from_text(seq.to_text())
    assert law_eberly_fidelity(c, again) >= 1 - 1e-12
    assert PulseSequence.from_text("ROT 1 0\nJC 0.5\nPHASE 0.2\n").steps == (
        QubitRotation(1 + 0j),
        JaynesCummings(0.5),
        PhasePause(0.2),
    )
    with pytest.raises(ValidationError):
        PulseSequence.from_text("FOO 1")


def test_simulation_needs_room_for_a_quantum():
    with pytest.raises(ValidationError):
        law_eberly_simulate(PulseSequence((QubitRotation(math.pi / 2), JaynesCummings(math.pi / 2))), max_quanta=0)


def test_two_quantum_expansion():
    cfg = CouplingConfig.uniform(3)
    k = 1
    v = np.zeros(3)
    v[k - 1] = v[-1] = 1 / S2
    out = multimode_expansion([0, 0, 1], couplings_for_collective_weights(v, cfg), cfg)
    amps = {idx: a for a, idx in out.terms}
    assert amps[BasisIndex((0, 0), 2)] == pytest.approx(S2 / (2 * S2), abs=1e-10)
    assert amps[BasisIndex((2, 0), 0)] == pytest.approx(S2 / (2 * S2), abs=1e-10)
    assert amps[BasisIndex((1, 0), 1)] == pytest.approx(2 / (2 * S2), abs=1e-10)
    assert len(amps) == 3


def test_couplings_realize_collective_weights():
    cfg = CouplingConfig((1.0, 2.0, 0.5))
    v = np.array([0.6, 0.0, 0.8])
    g = couplings_for_collective_weights(v, cfg)
    assert np.allclose(collective_transform(cfg) @ g, v)


@pytest.mark.parametrize("top", [1, 2, 3])
def test_bright_mode_targets_classify_consistently(top):
    cfg = CouplingConfig.uniform(3)
    rng = np.random.default_rng(top)
    c = rng.normal(size=top + 1) + 1j * rng.normal(size=top + 1)
    c /= np.linalg.norm(c)
    result = law_eberly_simulate(law_eberly_synthesize(c), cfg.g, max_quanta=top + 1)
    spec = multimode_expansion(result.mode_amplitudes, cfg.g, cfg)
    # every term has L = 0, so L < R(N-1) holds whenever any quanta are present
    assert classify(spec, cfg).tag is Radiance.SUPERRADIANT
