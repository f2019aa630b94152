"""State preparation: coupled-waveguide pre-evolution and Law-Eberly synthesis.

Waveguides
    ``N`` guides with nearest-neighbour coupling ``J`` propagate single photons
    with the sine-mode propagator ``A``; feeding the output into the
    superradiant section gives a tunable dark fraction.

Law-Eberly
    A qubit coupled to the collective mode ``d = sum_j gt_j b_j / gt`` climbs
    the Fock ladder through alternating qubit rotations
    ``exp(-i (A s+ + A* s-))`` and Jaynes-Cummings pulses
    ``exp(-i theta (d^dag s- + d s+))``, with pauses that add a phase to the
    excited state.  Sequences are synthesized by running the target backwards
    to the vacuum one ladder level at a time.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .collective import BasisIndex, collective_transform
from .errors import TruncationError, ValidationError
from .fock import FockSpace
from .states import DickeSuperposition, fock_to_dicke

__all__ = [
    "WaveguidePropagator",
    "waveguide_propagator",
    "waveguide_hamiltonian",
    "waveguide_output_state",
    "waveguide_dark_fraction",
    "QubitRotation",
    "JaynesCummings",
    "PhasePause",
    "PulseSequence",
    "LawEberlyResult",
    "law_eberly_synthesize",
    "law_eberly_simulate",
    "law_eberly_fidelity",
    "multimode_expansion",
    "couplings_for_collective_weights",
]

ZERO_TOL = 1e-14


def _num(x):
    x = float(x)
    return "0" if x == 0 else f"{x:.17g}"


# ---------------------------------------------------------------- waveguides


@dataclass(frozen=True)
class WaveguidePropagator:
    n_guides: int
    coupling: float
    omega: float
    time: float
    matrix: np.ndarray

    def output_amplitudes(self, input_guide):
        """Single-photon amplitudes over guides for a photon injected in ``input_guide`` (1-based)."""
        if not 1 <= input_guide <= self.n_guides:
            raise ValidationError(f"input guide must lie in 1..{self.n_guides}")
        return self.matrix[:, input_guide - 1].copy()

    def unitarity_error(self):
        a = self.matrix
        return float(np.max(np.abs(a.conj().T @ a - np.eye(self.n_guides))))


def waveguide_propagator(n_guides, J, omega, t):
    """Propagator ``A[j, q] = 2/(N+1) sum_p exp(-i(omega + 2J cos(p pi/(N+1))) t)
    sin(q p pi/(N+1)) sin(j p pi/(N+1))``."""
    n = int(n_guides)
    if n < 1:
        raise ValidationError("need at least one guide")
    if t < 0:
        raise ValidationError("propagation time must be non-negative")
    k = np.arange(1, n + 1)
    angle = np.pi / (n + 1)
    modes = np.sin(np.outer(k, k) * angle)  # modes[j, p]
    phases = np.exp(-1j * (omega + 2.0 * J * np.cos(k * angle)) * t)
    a = (2.0 / (n + 1)) * (modes * phases) @ modes.T
    return WaveguidePropagator(n, float(J), float(omega), float(t), a)


def waveguide_hamiltonian(n_guides, J, omega):
    """Single-particle Hamiltonian of a uniform chain of guides."""
    h = omega * np.eye(n_guides) + J * (np.eye(n_guides, k=1) + np.eye(n_guides, k=-1))
    return h


def waveguide_output_state(occupations, J, omega, t, cfg):
    """Propagate a Fock input through the guides and express it as a Dicke superposition.

    Inputs with more than two photons are rejected; they belong on the
    oracle's dense path.
    """
    occ = tuple(int(x) for x in occupations)
    if len(occ) != cfg.n_modes:
        raise ValidationError("input occupations must list one entry per guide")
    photons = sum(occ)
    if photons < 1 or photons > 2 or min(occ) < 0:
        raise ValidationError("waveguide inputs must hold one or two photons")
    prop = waveguide_propagator(cfg.n_modes, J, omega, t)
    space = FockSpace.uniform(cfg.n_modes, photons, max_total=photons)
    vec = space.vacuum()
    for q, count in enumerate(occ):
        raise_op = space.collective_annihilation(prop.matrix[:, q].conj()).conj().T.tocsr()
        for _ in range(count):
            vec = raise_op @ vec
        vec = vec / math.sqrt(math.factorial(count))
    return fock_to_dicke(vec, space, cfg)


def waveguide_dark_fraction(input_guide, J, t, cfg):
    """Dark fraction after single-photon propagation from ``input_guide``."""
    from .dynamics import dark_fraction

    if isinstance(input_guide, (tuple, list)):
        raise ValidationError("multi-photon inputs go through waveguide_output_state and the oracle")
    prop = waveguide_propagator(cfg.n_modes, J, cfg.omega, t)
    amps = prop.output_amplitudes(input_guide)
    collective = collective_transform(cfg) @ amps
    n = cfg.n_modes
    terms = []
    for k, c in enumerate(collective):
        if abs(c) > ZERO_TOL:
            idx = BasisIndex((0,) * (n - 1), 1) if k == n - 1 else BasisIndex.unit(n, k + 1)
            terms.append((complex(c), idx))
    state = DickeSuperposition.normalized(terms)
    f, _ = dark_fraction(state, cfg)
    return f


# ---------------------------------------------------------------- pulse sequences


@dataclass(frozen=True)
class QubitRotation:
    """``exp(-i (A s+ + A* s-))`` with complex Rabi area ``A``."""

    area: complex

    def inverse(self):
        return QubitRotation(-self.area)

    def to_text(self):
        return f"ROT {_num(self.area.real)} {_num(self.area.imag)}"


@dataclass(frozen=True)
class JaynesCummings:
    """``exp(-i theta (d^dag s- + d s+))`` with ``theta = gt * t``."""

    gt: float

    def inverse(self):
        return JaynesCummings(-self.gt)

    def to_text(self):
        return f"JC {_num(self.gt)}"


@dataclass(frozen=True)
class PhasePause:
    """Multiplies the excited-state amplitude by ``exp(i phase)``."""

    phase: float

    def inverse(self):
        return PhasePause(-self.phase)

    def to_text(self):
        return f"PHASE {_num(self.phase)}"


@dataclass(frozen=True)
class PulseSequence:
    steps: tuple = ()

    def __post_init__(self):
        steps = tuple(self.steps)
        for s in steps:
            if not isinstance(s, (QubitRotation, JaynesCummings, PhasePause)):
                raise ValidationError(f"unknown pulse step {s!r}")
            if isinstance(s, JaynesCummings) and s.gt < 0:
                raise ValidationError("Jaynes-Cummings durations must be non-negative")
        object.__setattr__(self, "steps", steps)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def count(self, kind):
        return sum(isinstance(s, kind) for s in self.steps)

    def to_text(self):
        return "".join(s.to_text() + "\n" for s in self.steps)

    @classmethod
    def from_text(cls, text):
        steps = []
        for lineno, line in enumerate(text.splitlines(), 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            try:
                if parts[0] == "ROT" and len(parts) == 3:
                    steps.append(QubitRotation(complex(float(parts[1]), float(parts[2]))))
                elif parts[0] == "JC" and len(parts) == 2:
                    steps.append(JaynesCummings(float(parts[1])))
                elif parts[0] == "PHASE" and len(parts) == 2:
                    steps.append(PhasePause(float(parts[1])))
                else:
                    raise ValueError
            except ValueError:
                raise ValidationError(f"schedule line {lineno}: cannot parse {line!r}") from None
        return cls(tuple(steps))


def _apply_step(psi, step):
    """Apply one step to ``psi[q, n]`` (q = 0 ground, 1 excited) in place."""
    g, e = psi[0], psi[1]
    if isinstance(step, PhasePause):
        e *= cmath.exp(1j * step.phase)
    elif isinstance(step, QubitRotation):
        mag = abs(step.area)
        if mag == 0:
            return
        u = step.area / mag
        c, s = math.cos(mag), math.sin(mag)
        g_new = c * g - 1j * s * u.conjugate() * e
        e_new = c * e - 1j * s * u * g
        psi[0], psi[1] = g_new, e_new
    else:
        top = psi.shape[1] - 1
        if abs(e[top]) > ZERO_TOL:
            raise TruncationError(f"Jaynes-Cummings pulse would lift |e, {top}> past the truncation")
        n = np.arange(1, top + 1)
        c, s = np.cos(step.gt * np.sqrt(n)), np.sin(step.gt * np.sqrt(n))
        g_up, e_dn = g[1:].copy(), e[:-1].copy()
        g[1:] = c * g_up - 1j * s * e_dn
        e[:-1] = c * e_dn - 1j * s * g_up


def law_eberly_synthesize(target, collective_couplings=None):
    """Pulse sequence preparing ``sum_n c_n (d^dag)^n / sqrt(n!) |0>`` from the vacuum.

    The couplings only fix ``gt``; schedules are expressed through the
    products ``gt * t`` and do not depend on them otherwise.
    """
    c = np.asarray(target, dtype=complex)
    if c.ndim != 1 or c.size == 0:
        raise ValidationError("target must be a non-empty coefficient list")
    if abs(np.linalg.norm(c) - 1.0) > 1e-12:
        raise ValidationError("target coefficients must be normalized")
    if collective_couplings is not None:
        gt = np.asarray(collective_couplings, dtype=float)
        if not np.sqrt(np.sum(gt**2)) > 0:
            raise ValidationError("collective couplings must not all vanish")
    top = c.size - 1
    psi = np.zeros((2, top + 2), dtype=complex)
    psi[0, : top + 1] = c
    reverse = []

    def run(step):
        _apply_step(psi, step)
        reverse.append(step)

    for n in range(top, 0, -1):
        g, e = psi[0, n], psi[1, n - 1]
        if abs(g) > ZERO_TOL:
            # align phases so that -i g / e is real and negative, then swap |g,n> into |e,n-1>
            if abs(e) > ZERO_TOL:
                ratio = g / e
                phase = cmath.phase(1j * ratio)
                if abs(phase) > ZERO_TOL:
                    run(PhasePause(phase))
                angle = -math.atan(abs(ratio))
            else:
                angle = -math.pi / 2
            run(JaynesCummings(angle / math.sqrt(n)))
            psi[0, n] = 0.0
        g, e = psi[0, n - 1], psi[1, n - 1]
        if abs(e) > ZERO_TOL:
            if abs(g) > ZERO_TOL:
                ratio = -1j * e / g
                mag = math.atan(abs(ratio))
                area = mag * ratio / abs(ratio)
            else:
                area = (math.pi / 2) * (-1j * e) / abs(e)
            run(QubitRotation(complex(area)))
            psi[1, n - 1] = 0.0
    forward = tuple(step.inverse() for step in reversed(reverse))
    return PulseSequence(forward)


@dataclass
class LawEberlyResult:
    """Final qubit (x) collective-mode amplitudes ``state[q, n]``."""

    state: np.ndarray

    @property
    def mode_amplitudes(self):
        """Amplitudes ``c_n`` of the mode with the qubit in its ground state."""
        return self.state[0].copy()

    @property
    def excited_population(self):
        return float(np.sum(np.abs(self.state[1]) ** 2))

    @property
    def norm(self):
        return float(np.linalg.norm(self.state))


def law_eberly_simulate(seq, collective_couplings=None, max_quanta=None):
    """Apply a sequence to ``|g, 0>`` on a mode truncated at ``max_quanta`` levels above 0."""
    if max_quanta is None:
        max_quanta = seq.count(JaynesCummings) + 1
    if max_quanta < 1:
        raise ValidationError("max_quanta must be at least 1")
    psi = np.zeros((2, max_quanta + 1), dtype=complex)
    psi[0, 0] = 1.0
    for step in seq:
        _apply_step(psi, step)
    return LawEberlyResult(psi)


def law_eberly_fidelity(target, seq):
    """``|<target|result>|^2`` with the qubit projected on ``|g>``."""
    c = np.asarray(target, dtype=complex)
    res = law_eberly_simulate(seq, max_quanta=max(c.size, seq.count(JaynesCummings) + 1))
    amps = res.mode_amplitudes[: c.size]
    return float(abs(np.vdot(c, amps)) ** 2)


def couplings_for_collective_weights(weights, cfg):
    """Qubit-mode couplings (unit norm) realizing ``d = sum_k v_k C_k`` for real ``v``."""
    v = np.asarray(weights, dtype=float)
    if v.size != cfg.n_modes or not np.linalg.norm(v) > 0:
        raise ValidationError("need one non-zero weight per collective mode")
    return collective_transform(cfg).T @ (v / np.linalg.norm(v))


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def multimode_expansion(mode_amplitudes, collective_couplings, cfg, *, drop=ZERO_TOL):
    """Bosonic-Dicke expansion of ``sum_n c_n (d^dag)^n / sqrt(n!) |0>``.

    With ``d = sum_k v_k C_k`` the amplitude of occupations ``m`` (summing to n)
    is ``c_n sqrt(n!) prod_k v_k^m_k / sqrt(m_k!)``.
    """
    gt = np.asarray(collective_couplings, dtype=float)
    if gt.size != cfg.n_modes:
        raise ValidationError("one qubit coupling per oscillator is required")
    v = collective_transform(cfg) @ (gt / np.linalg.norm(gt))
    out = {}
    for n, c in enumerate(np.asarray(mode_amplitudes, dtype=complex)):
        if abs(c) <= drop:
            continue
        for m in _compositions(n, cfg.n_modes):
            amp = c * math.sqrt(math.factorial(n))
            for vk, mk in zip(v, m):
                amp *= vk**mk / math.sqrt(math.factorial(mk))
            if abs(amp) > drop:
                idx = BasisIndex(m[:-1], m[-1])
                out[idx] = out.get(idx, 0j) + amp
    order = sorted(out, key=lambda i: (i.total, -i.rung, i.degeneracy))
    return DickeSuperposition.normalized([(out[i], i) for i in order])
