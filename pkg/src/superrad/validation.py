"""Invariant suite run by ``superrad oracle-check``.

Each check pits a closed form against an independent route (oracle
integration, dense diagonalization, exact arithmetic) on small fixed
instances and reports the worst deviation next to its tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .atomic import atomic_populations, five_atom_populations
from .collective import BasisIndex, CouplingConfig, enumerate_basis, star_spectrum
from .dynamics import (
    intensity_series,
    ladder_populations,
    mrl_series,
    pascal_solution_check,
    two_time_correlation,
)
from .fock import FockSpace, PureState
from .oracle import (
    evolve_full_with_ancilla,
    evolve_independent_baths,
    evolve_reduced,
    prepare_density,
    regression_correlation,
    rung_populations_ode,
    star_hamiltonian_spectrum,
    to_density,
)
from .preparation import law_eberly_fidelity, law_eberly_synthesize, waveguide_propagator
from .states import DickeSuperposition, MultimodeFock, ProductSqueezedCoherent, fock_representation

__all__ = ["CheckResult", "CHECKS", "run_checks", "format_table", "random_dicke_state"]

SEED = 20240531


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    higher_is_better: bool = False
    note: str = ""

    @property
    def passed(self):
        if not np.isfinite(self.value):
            return False
        if self.higher_is_better:
            return self.value >= self.tolerance
        return self.value <= self.tolerance


def random_dicke_state(rng, n_modes, max_quanta, n_terms=3):
    """Random normalized superposition of distinct Dicke basis states."""
    basis = [b for b in enumerate_basis(n_modes, max_quanta) if b.total > 0]
    picks = rng.choice(len(basis), size=min(n_terms, len(basis)), replace=False)
    amps = rng.normal(size=picks.size) + 1j * rng.normal(size=picks.size)
    return DickeSuperposition.normalized([(a, basis[i]) for a, i in zip(amps, sorted(picks))])


def check_pascal():
    return CheckResult("pascal similarity (dim 25)", max(pascal_solution_check(d) for d in range(1, 26)), 1e-10)


def check_ladder_populations():
    rng = np.random.default_rng(SEED)
    cfg = CouplingConfig((1.0, 1.7, 0.6))
    tau = np.linspace(0, 1.5, 31)
    worst = 0.0
    for k in range(1, 9):
        weights = rng.random(k + 1)
        weights /= weights.sum()
        terms = [(math.sqrt(w), BasisIndex((1, 0), r)) for r, w in enumerate(weights)]
        closed = ladder_populations(DickeSuperposition(tuple(terms)), cfg, tau).values
        ode = rung_populations_ode(weights, cfg.n_modes, tau)
        worst = max(worst, float(np.max(np.abs(closed - ode))))
    return CheckResult("rung populations closed form vs ODE (K<=8)", worst, 1e-8)


def check_atomic():
    tau = np.linspace(0, 3, 61)
    dev = float(np.max(np.abs(atomic_populations(5, tau).values - five_atom_populations(tau))))
    return CheckResult("atomic N=5 populations vs closed forms", dev, 1e-6)


def check_atomic_probability():
    tau = np.linspace(0, 4, 21)
    worst = max(float(np.max(np.abs(atomic_populations(n, tau).values.sum(0) - 1))) for n in range(1, 13))
    return CheckResult("atomic probability conservation (N<=12)", worst, 1e-9)


def _oracle_laws(spec, cfg, max_quanta, tau):
    rho = prepare_density(spec, cfg, max_quanta)
    rec = evolve_reduced(rho, cfg, tau / cfg.gamma)
    closed = mrl_series(spec, cfg, tau)
    drift = float(np.max(np.abs(rec["L"] - rec["L"][0])))
    r_rel = float(np.max(np.abs(rec["R"] - closed["R"]) / np.maximum(closed["R"], 1e-300)))
    return drift, r_rel, rec


def check_conservation():
    rng = np.random.default_rng(SEED + 1)
    tau = np.linspace(0, 1.0, 11)
    drift = r_rel = 0.0
    for n in (2, 3):
        cfg = CouplingConfig(tuple(rng.uniform(0.5, 2.0, size=n)))
        for _ in range(2):
            spec = random_dicke_state(rng, n, 3)
            d, r, _ = _oracle_laws(spec, cfg, 3, tau)
            drift, r_rel = max(drift, d), max(r_rel, r)
    return [
        CheckResult("oracle <L> conservation (N<=3, M<=3)", drift, 1e-8),
        CheckResult("oracle <R> exponential law, relative", r_rel, 1e-6),
    ]


def check_dark_invariance():
    cfg = CouplingConfig((1.0, 2.0))
    rho = prepare_density(DickeSuperposition.single(BasisIndex((1,), 0)), cfg, 1)
    rec = evolve_reduced(rho, cfg, np.linspace(0, 3, 7) / cfg.gamma, snapshots=True)
    dev = max(float(np.max(np.abs(s.data - rho.data))) for s in rec.snapshots)
    return CheckResult("dark state invariance under collective decay", dev, 1e-9)


def check_intensity_derivative():
    cfg = CouplingConfig((1.0, 1.4, 0.8))
    spec = MultimodeFock((2, 1, 1))
    tau = np.linspace(0, 1.0, 201)
    rec = evolve_reduced(prepare_density(spec, cfg, 4), cfg, tau / cfg.gamma)
    fd = -np.gradient(rec["M"], tau, edge_order=2)
    closed = intensity_series(spec, cfg, tau)["intensity"]
    inner = slice(1, -1)
    rel = float(np.max(np.abs(fd[inner] - closed[inner]) / closed[inner]))
    return CheckResult("intensity vs -dM/dt of the oracle, relative", rel, 1e-4)


def check_correlations():
    cfg = CouplingConfig((1.0, 2.0))
    tau = np.linspace(0, 2, 9)
    worst = 0.0
    cases = [
        (MultimodeFock((1, 2)), 3),
        (DickeSuperposition.single(BasisIndex((0,), 3)), 3),
        (DickeSuperposition.normalized([(1, BasisIndex((0,), 1)), (1j, BasisIndex((1,), 1))]), 2),
        (ProductSqueezedCoherent((0.3, -0.2j)), None),
    ]
    for spec, mq in cases:
        if mq is None:
            rep = fock_representation(spec, cfg, 9, tail_tol=1e-10)
            rho = to_density(rep, FockSpace.uniform(2, 9, max_total=9))
        else:
            rho = prepare_density(spec, cfg, mq)
        for i in (1, 2):
            for j in (1, 2):
                oracle = regression_correlation(rho, cfg, i, j, tau / cfg.gamma)
                closed = two_time_correlation(spec, cfg, i, j, tau)[f"c_{i}_{j}"]
                worst = max(worst, float(np.max(np.abs(oracle - closed))))
    return CheckResult("two-time correlation vs regression oracle", worst, 1e-6)


def check_independent_baths():
    space = FockSpace.uniform(2, 3, max_total=4)
    rho = to_density(PureState(space, space.basis_vector((1, 1))))
    gamma_i = 0.7
    t = np.linspace(0, 2, 9)
    rec = evolve_independent_baths(rho, gamma_i, t)
    dev = float(np.max(np.abs(rec["M"] - 2 * np.exp(-2 * gamma_i * t))))
    return CheckResult("independent baths: M = 2 exp(-2 gamma t)", dev, 1e-8)


def check_spectrum():
    cfg = CouplingConfig((1.0, 2.0, 0.5), omega=0.3)
    dense = star_hamiltonian_spectrum(cfg, 3)
    closed = star_spectrum(cfg, 3)
    dev = float(np.max(np.abs(dense - closed))) if dense.size == closed.size else math.inf
    return CheckResult("star spectrum vs dense diagonalization", dev, 1e-10)


def check_waveguide():
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 7))
        w = waveguide_propagator(n, rng.uniform(-2, 2), rng.uniform(-1, 1), rng.uniform(0, 5))
        worst = max(worst, w.unitarity_error())
    return CheckResult("waveguide propagator unitarity (100 draws)", worst, 1e-12)


def check_law_eberly():
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for _ in range(50):
        top = int(rng.integers(1, 5))
        c = rng.normal(size=top + 1) + 1j * rng.normal(size=top + 1)
        c /= np.linalg.norm(c)
        worst = max(worst, 1.0 - law_eberly_fidelity(c, law_eberly_synthesize(c)))
    return CheckResult("Law-Eberly round-trip infidelity (max of 50)", worst, 1e-8)


def check_adiabatic():
    cfg = CouplingConfig.uniform(2).with_kappa_ratio(100.0)
    rho = to_density(prepare_density(DickeSuperposition.single(BasisIndex((0,), 1)), cfg, 1), FockSpace.uniform(2, 3))
    t = np.linspace(0, 3 / (cfg.n_modes * cfg.gamma), 16)
    full = evolve_full_with_ancilla(rho, cfg, t)
    red = evolve_reduced(rho, cfg, t)
    rel = float(np.max(np.abs(full["M"] - red["M"]) / red["M"]))
    return CheckResult("adiabatic elimination at kappa/G=100, relative", rel, 0.05)


CHECKS = [
    ("pascal", check_pascal, False),
    ("ladder", check_ladder_populations, False),
    ("atomic", check_atomic, False),
    ("atomic_probability", check_atomic_probability, False),
    ("conservation", check_conservation, False),
    ("dark", check_dark_invariance, False),
    ("intensity", check_intensity_derivative, False),
    ("correlations", check_correlations, False),
    ("independent", check_independent_baths, False),
    ("spectrum", check_spectrum, False),
    ("waveguide", check_waveguide, False),
    ("law_eberly", check_law_eberly, False),
    ("adiabatic", check_adiabatic, True),
]


def check_config_state(run):
    """Closed-form R and L laws against the oracle for the configured state."""
    spec, cfg = run.state, run.coupling
    if spec is None:
        return []
    mq = run.oracle_max_quanta
    if mq is None:
        if isinstance(spec, DickeSuperposition):
            mq = max(idx.total for _, idx in spec.terms)
        elif isinstance(spec, MultimodeFock):
            mq = sum(spec.occupations)
        else:
            return [CheckResult("configured state vs oracle", math.nan, 0.0, note="set oracle_max_quanta")]
    tau = np.linspace(0, min(run.t_max, 2.0), 9)
    drift, r_rel, _ = _oracle_laws(spec, cfg, mq, tau)
    return [
        CheckResult("configured state: <L> conservation", drift, 1e-8),
        CheckResult("configured state: <R> law, relative", r_rel, 1e-6),
    ]


def run_checks(run=None, skip_slow=False):
    results = []
    for _, fn, slow in CHECKS:
        if slow and skip_slow:
            continue
        out = fn()
        results.extend(out if isinstance(out, list) else [out])
    if run is not None:
        results.extend(check_config_state(run))
    return results


def format_table(results):
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        cmp = ">=" if r.higher_is_better else "<="
        note = f"  ({r.note})" if r.note else ""
        lines.append(f"{mark}  {r.name:<{width}}  {r.value:.3e} {cmp} {r.tolerance:.1e}{note}")
    return "\n".join(lines)
