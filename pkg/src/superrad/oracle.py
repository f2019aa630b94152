"""Brute-force master-equation integration on truncated Fock spaces.

This is the ground truth the closed forms are checked against.  Density
matrices are dense; the integrator is fixed-step RK4 whose step is halved on
every output interval until two successive refinements agree on every
recorded channel.  After each accepted sample the state is checked for trace,
Hermiticity, positivity and probability creeping into the guard band below
the cutoffs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ._numerics import integrate_refined
from .collective import CouplingConfig, collective_transform
from .errors import NumericalContractError, TruncationError, ValidationError
from .fock import DensityOperator, FockSpace, PureState
from .series import TimeSeries, _fmt

__all__ = [
    "DensityOperator",
    "EvolutionRecord",
    "GUARD_LEVELS",
    "oracle_space",
    "to_density",
    "check_density",
    "evolve_reduced",
    "evolve_full_with_ancilla",
    "evolve_independent_baths",
    "regression_correlation",
    "rung_populations_ode",
    "star_hamiltonian_spectrum",
    "dump_snapshot",
    "prepare_density",
]

GUARD_LEVELS = 2
LEAK_TOL = 1e-8
TRACE_TOL = 1e-9
HERM_TOL = 1e-10
POS_TOL = 1e-9
REFINE_TOL = 1e-9
ASSEMBLE_MAX_SIZE = 4096


@dataclass
class EvolutionRecord:
    """Expectation channels sampled along an oracle trajectory.

    ``tau`` is the dimensionless time (``Gamma t`` for collective decay,
    ``gamma_I t`` for independent baths); ``times`` is the physical grid.
    """

    times: np.ndarray
    tau: np.ndarray
    channels: dict
    gamma: float | None = None
    snapshots: list | None = None
    info: dict = field(default_factory=dict)

    def __getitem__(self, label):
        return self.channels[label]

    def to_series(self):
        return TimeSeries(self.tau, dict(self.channels), self.gamma)


def oracle_space(n_modes, max_quanta, guard=GUARD_LEVELS):
    """Product space with per-mode cutoff and total cap ``max_quanta + guard``."""
    top = max_quanta + guard
    return FockSpace.uniform(n_modes, top, max_total=top)


def prepare_density(spec, cfg, max_quanta, *, guard=GUARD_LEVELS, tail_tol=1e-10):
    """Render a StateSpec into the capped oracle space for ``max_quanta``.

    ``max_quanta`` is the largest total occupation that carries weight; the
    space adds ``guard`` levels above it.
    """
    from .states import fock_representation

    space = oracle_space(cfg.n_modes, max_quanta, guard)
    rep = fock_representation(spec, cfg, max_quanta + guard, tail_tol=tail_tol)
    return to_density(rep, space)


def to_density(rep, space=None):
    """Density operator from a PureState or DensityOperator, optionally moved
    into ``space`` (matching occupations; dropped mass must be negligible)."""
    if isinstance(rep, PureState):
        if space is not None and space != rep.space:
            # embed the amplitudes first; the hypercube density can be huge
            src, dst = rep.space.embedding_indices(space)
            vec = np.zeros(space.dim, dtype=complex)
            vec[dst] = rep.vector[src]
            lost = float(np.vdot(rep.vector, rep.vector).real - np.vdot(vec, vec).real)
            if lost > LEAK_TOL:
                raise TruncationError(
                    f"moving the state into the oracle space drops {lost:.3e} of its probability", tail=lost
                )
            rep = PureState(space, vec)
        return rep.density()
    rho = rep
    if space is None or space == rho.space:
        return rho
    src, dst = rho.space.embedding_indices(space)
    data = np.zeros((space.dim, space.dim), dtype=complex)
    data[np.ix_(dst, dst)] = rho.data[np.ix_(src, src)]
    lost = float(np.trace(rho.data).real - np.trace(data).real)
    if lost > LEAK_TOL:
        raise TruncationError(f"moving the state into the oracle space drops {lost:.3e} of its probability", tail=lost)
    return DensityOperator(space, data)


def check_density(data, trace_ref=1.0, label="state"):
    """Raise NumericalContractError unless ``data`` is a valid density matrix."""
    tr = np.trace(data).real
    if abs(tr - trace_ref) > TRACE_TOL:
        raise NumericalContractError(f"{label}: trace drifted to {tr:.12g} (expected {trace_ref:.12g})")
    herm = np.max(np.abs(data - data.conj().T)) if data.size else 0.0
    if herm > HERM_TOL:
        raise NumericalContractError(f"{label}: Hermiticity violated by {herm:.3e}")
    # exactly-zero rows and columns only add zero eigenvalues
    live = np.any(data != 0, axis=1)
    sub = data[np.ix_(live, live)]
    evals = np.linalg.eigvalsh(0.5 * (sub + sub.conj().T))
    if evals.size and evals.min() < -POS_TOL:
        raise NumericalContractError(f"{label}: negative eigenvalue {evals.min():.3e}")


def _guard_mask(space, guard, skip_modes=()):
    occ = space.occupations
    mask = np.zeros(space.dim, dtype=bool)
    for j, c in enumerate(space.cutoffs):
        if j in skip_modes:
            continue
        mask |= occ[:, j] > c - guard
    if space.max_total is not None:
        mask |= space.totals > space.max_total - guard
    return mask


def _check_leak(data, mask, label):
    leak = float(np.sum(np.real(np.diag(data))[mask]))
    if leak > LEAK_TOL:
        raise TruncationError(
            f"{label}: {leak:.3e} of the probability sits within {GUARD_LEVELS} levels of a cutoff", tail=leak
        )


class _BlockGenerator:
    """Lindblad generator on number-conserving blocks.

    ``H`` must conserve the total quantum number and each jump operator must
    lower it by exactly one, so the block ``(p, q)`` of the output only needs
    blocks ``(p, q)`` and ``(p + 1, q + 1)`` of the input.  Arrays are kept in
    an ordering sorted by total number; only blocks reachable from the seed
    arrays are ever touched, the rest stay exactly zero.
    """

    def __init__(self, space, hamiltonian, jumps, seeds):
        totals = space.totals
        self.order = np.argsort(totals, kind="stable")
        self.inverse = np.argsort(self.order)
        sorted_totals = totals[self.order]
        top = int(sorted_totals.max()) if sorted_totals.size else 0
        edges = np.searchsorted(sorted_totals, np.arange(top + 2))
        self.blocks = [slice(int(edges[p]), int(edges[p + 1])) for p in range(top + 1)]
        dim = space.dim
        heff = [np.zeros((b.stop - b.start,) * 2, dtype=complex) for b in self.blocks]
        if hamiltonian is not None:
            h = self.sort(_as_dense(hamiltonian))
            self._require_blocks(h, 0, "Hamiltonian")
            for p, b in enumerate(self.blocks):
                heff[p] += -1j * h[b, b]
        self.jumps = []
        for rate, a in jumps:
            if rate == 0:
                continue
            a = self.sort(_as_dense(a))
            self._require_blocks(a, -1, "jump operator")
            lowering = [None] + [a[self.blocks[p - 1], self.blocks[p]] for p in range(1, top + 1)]
            for p in range(1, top + 1):
                heff[p] -= rate * (lowering[p].conj().T @ lowering[p])
            raising = [None] + [m.conj().T for m in lowering[1:]]
            self.jumps.append((2.0 * rate, lowering, raising))
        self.heff = heff
        self.heff_dag = [m.conj().T for m in heff]
        self.dim = dim
        self.pairs = self._reachable([self.sort(x) for x in seeds])
        self._layout()
        # small problems: one sparse matvec beats a Python loop over blocks
        self.matrix = self._assemble() if self.size <= ASSEMBLE_MAX_SIZE else None

    def sort(self, x):
        return x[np.ix_(self.order, self.order)]

    def unsort(self, x):
        return x[np.ix_(self.inverse, self.inverse)]

    def _require_blocks(self, op, shift, what):
        mask = np.zeros(op.shape, dtype=bool)
        for p, b in enumerate(self.blocks):
            if 0 <= p + shift < len(self.blocks):
                mask[self.blocks[p + shift], b] = True
        if np.any(op[~mask] != 0):
            raise ValidationError(f"{what} does not respect the number-block structure")

    def _reachable(self, seeds):
        pairs = set()
        for x in seeds:
            for p, bp in enumerate(self.blocks):
                for q, bq in enumerate(self.blocks):
                    if np.any(x[bp, bq] != 0):
                        pairs.add((p, q))
        frontier = list(pairs)
        while frontier:
            p, q = frontier.pop()
            if p > 0 and q > 0 and (p - 1, q - 1) not in pairs:
                pairs.add((p - 1, q - 1))
                frontier.append((p - 1, q - 1))
        return sorted(pairs)

    def _layout(self):
        self.offsets, pos = [], 0
        for p, q in self.pairs:
            shape = (self.blocks[p].stop - self.blocks[p].start, self.blocks[q].stop - self.blocks[q].start)
            self.offsets.append((pos, shape))
            pos += shape[0] * shape[1]
        self.size = pos
        self.where = {pq: k for k, pq in enumerate(self.pairs)}

    def pack(self, x):
        """Flat vector of the active blocks of a number-sorted array."""
        return np.concatenate([x[self.blocks[p], self.blocks[q]].ravel() for p, q in self.pairs])

    def unpack(self, v):
        x = np.zeros((self.dim, self.dim), dtype=complex)
        for (p, q), (start, shape) in zip(self.pairs, self.offsets):
            x[self.blocks[p], self.blocks[q]] = v[start:start + shape[0] * shape[1]].reshape(shape)
        return x

    def _view(self, v, k):
        start, shape = self.offsets[k]
        return v[start:start + shape[0] * shape[1]].reshape(shape)

    def _assemble(self):
        """Sparse matrix of the packed generator (row-major vec: vec(A X B) = (A kron B^T) vec X)."""
        n = len(self.pairs)
        grid = [[None] * n for _ in range(n)]
        for k, (p, q) in enumerate(self.pairs):
            rows, cols = self.offsets[k][1]
            grid[k][k] = sp.kron(self.heff[p], sp.identity(cols)) + sp.kron(sp.identity(rows), self.heff_dag[q].T)
            below = self.where.get((p + 1, q + 1))
            if below is not None:
                for rate2, low, high in self.jumps:
                    term = rate2 * sp.kron(low[p + 1], high[q + 1].T)
                    grid[k][below] = term if grid[k][below] is None else grid[k][below] + term
        return sp.bmat(grid, format="csr", dtype=complex)

    def __call__(self, v):
        if self.matrix is not None:
            return self.matrix @ v if v.ndim == 1 else (self.matrix @ v.T).T
        out = np.empty_like(v)
        for k, (p, q) in enumerate(self.pairs):
            rho = self._view(v, k)
            blk = self.heff[p] @ rho + rho @ self.heff_dag[q]
            below = self.where.get((p + 1, q + 1))
            if below is not None:
                inner = self._view(v, below)
                for rate2, low, high in self.jumps:
                    blk += rate2 * (low[p + 1] @ inner @ high[q + 1])
            self._view(out, k)[...] = blk
        return out


def _as_dense(op):
    return op.toarray().astype(complex) if sp.issparse(op) else np.asarray(op, dtype=complex)


def _expect(op, rho):
    # Tr(op rho) without forming the product
    return np.sum(op * rho.T)


def _dense(op):
    return op.toarray().astype(complex)


def _run(space, rho0, gen, observables, times, rate_scale, *, guard_skip=(), snapshots=False, label="oracle"):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1 or np.any(np.diff(times) <= 0) or times[0] < 0:
        raise ValidationError("times must be a strictly increasing, non-negative grid")
    data0 = rho0.data
    trace0 = float(np.trace(data0).real)
    if abs(trace0 - 1.0) > TRACE_TOL:
        raise NumericalContractError(f"{label}: initial trace {trace0:.12g} is not 1 (truncation too tight?)")
    check_density(data0, trace0, label)
    mask = _guard_mask(space, GUARD_LEVELS, guard_skip)
    _check_leak(data0, mask, label)
    # everything below lives in the generator's number-sorted ordering
    mask = mask[gen.order]
    names = list(observables)
    ops = [gen.sort(observables[k]) for k in names]
    stored = [] if snapshots else None

    def observe(v):
        rho = gen.unpack(v)
        return np.array([_expect(o, rho).real for o in ops])

    def on_sample(k, v):
        rho = gen.unpack(v)
        check_density(rho, trace0, f"{label} at t={times[k]:.6g}")
        _check_leak(rho, mask, f"{label} at t={times[k]:.6g}")
        if stored is not None:
            stored.append(DensityOperator(space, gen.unsort(rho)))

    y0 = gen.pack(gen.sort(data0))
    if times.size == 1:
        on_sample(0, y0)
        chans = observe(y0)[None, :]
    else:
        _, chans = integrate_refined(gen, y0, times, observe, tol=REFINE_TOL, rate_scale=rate_scale, on_sample=on_sample)
    return {name: chans[:, k] for k, name in enumerate(names)}, stored


def _system_observables(space, cfg, offset=0):
    """Dense M, R, n_j operators for system modes starting at ``offset``."""
    n = cfg.n_modes
    obs = {}
    number = [_dense(space.number(offset + j)) for j in range(n)]
    obs["M"] = sum(number)
    weights = np.zeros(space.n_modes)
    weights[offset:] = cfg.bright_weights
    c_n = _dense(space.collective_annihilation(weights))
    obs["R"] = c_n.conj().T @ c_n
    for j in range(n):
        obs[f"n{j + 1}"] = number[j]
    return obs, c_n


def _finish(chans, n_modes):
    ordered = {"M": chans["M"], "R": chans["R"], "L": chans["M"] - chans["R"]}
    for key, val in chans.items():
        if key not in ordered:
            ordered[key] = val
    bad = np.max(np.abs(ordered["M"] - ordered["R"] - ordered["L"]))
    if not np.all(np.isfinite(np.concatenate(list(ordered.values())))) or bad > 1e-9:
        raise NumericalContractError("non-finite or inconsistent oracle channels")
    return ordered


def evolve_reduced(rho0, cfg, times, *, snapshots=False):
    """Integrate ``drho/dt = (N Gamma / 2) D[C_N] rho`` with D[A] = 2 A.A^dag - {A^dag A, .}.

    ``times`` are physical; the record also carries ``tau = Gamma t``.
    """
    space = rho0.space
    if space.n_modes != cfg.n_modes:
        raise ValidationError("density operator and coupling config disagree on N")
    obs, c_n = _system_observables(space, cfg)
    rate = 0.5 * cfg.n_modes * cfg.gamma
    gen = _BlockGenerator(space, None, [(rate, c_n)], [rho0.data])
    top = int(space.totals.max())
    chans, stored = _run(
        space, rho0, gen, obs, times, rate_scale=2 * rate * max(top, 1), snapshots=snapshots, label="reduced"
    )
    times = np.asarray(times, dtype=float)
    return EvolutionRecord(times, times * cfg.gamma, _finish(chans, cfg.n_modes), cfg.gamma, stored)


def _with_ancilla(rho0, ancilla_cutoff):
    sys_space = rho0.space
    cap = sys_space.max_total
    full = FockSpace((ancilla_cutoff,) + sys_space.cutoffs, cap)
    data = np.zeros((full.dim, full.dim), dtype=complex)
    idx = np.array([full.index((0,) + s) for s in sys_space.states])
    data[np.ix_(idx, idx)] = rho0.data
    return DensityOperator(full, data)


def evolve_full_with_ancilla(rho0_system, cfg, times, *, ancilla_cutoff=3, coupling_scale=1.0, snapshots=False):
    """Integrate the system plus the damped central mode ``a`` (mode 0).

    Interaction picture: ``H = G_N (a^dag C_N + a C_N^dag)`` and damping
    ``(kappa / 2) D[a]``.  The intensity is reported both as ``kappa <a^dag a>``
    and as ``-dM/dt`` (central differences), in units of Gamma.
    ``coupling_scale`` multiplies G_N (0 decouples the system).
    """
    if ancilla_cutoff < 3:
        raise ValidationError("central-mode cutoff must be at least 3")
    if rho0_system.space.n_modes != cfg.n_modes:
        raise ValidationError("density operator and coupling config disagree on N")
    rho0 = _with_ancilla(rho0_system, ancilla_cutoff)
    space = rho0.space
    obs, c_n = _system_observables(space, cfg, offset=1)
    a = _dense(space.annihilation(0))
    obs["a"] = a.conj().T @ a
    g_eff = coupling_scale * cfg.total_coupling
    h = g_eff * (a.conj().T @ c_n + a @ c_n.conj().T)
    gen = _BlockGenerator(space, h, [(0.5 * cfg.kappa, a)], [rho0.data])
    top = int(space.totals.max())
    scale = max(cfg.kappa, 2.0 * g_eff * math.sqrt(max(top, 1)))
    chans, stored = _run(
        space, rho0, gen, obs, times, rate_scale=scale, guard_skip=(0,), snapshots=snapshots, label="full"
    )
    times = np.asarray(times, dtype=float)
    gamma = cfg.gamma
    out = _finish(chans, cfg.n_modes)
    out["intensity_kappa"] = cfg.kappa * out["a"] / gamma
    if times.size > 1:
        out["intensity_dM"] = -np.gradient(out["M"], times) / gamma
    else:
        out["intensity_dM"] = np.full(times.size, np.nan)
    rec = EvolutionRecord(times, times * gamma, out, gamma, stored)
    rec.info["kappa_over_G"] = cfg.kappa / cfg.total_coupling
    rec.info["ancilla_max"] = float(np.max(out["a"]))
    return rec


def evolve_independent_baths(rho0, gamma_i, times, *, snapshots=False):
    """Integrate ``drho/dt = gamma_I sum_j D[b_j] rho`` (each ``<n_j>`` decays as ``e^{-2 gamma_I t}``)."""
    if not gamma_i >= 0:
        raise ValidationError("gamma_i must be non-negative")
    space = rho0.space
    n = space.n_modes
    lowering = [_dense(space.annihilation(j)) for j in range(n)]
    number = [op.conj().T @ op for op in lowering]
    obs = {"M": sum(number)}
    for j in range(n):
        obs[f"n{j + 1}"] = number[j]
    gen = _BlockGenerator(space, None, [(gamma_i, op) for op in lowering], [rho0.data])
    top = int(space.totals.max())
    chans, stored = _run(
        space, rho0, gen, obs, times, rate_scale=2 * gamma_i * max(top, 1), snapshots=snapshots, label="independent"
    )
    times = np.asarray(times, dtype=float)
    return EvolutionRecord(times, times * gamma_i, chans, gamma_i or None, stored)


def regression_correlation(rho0, cfg, i, j, times):
    """``c_ij(t, 0)`` by the quantum regression theorem.

    Evolves ``X = b_j rho(0)`` alongside ``rho`` under the reduced generator and
    returns ``Tr(b_i^dag X(t)) - Tr(b_i^dag rho(t)) Tr(b_j rho(0))`` as a complex
    array over physical ``times``.
    """
    space = rho0.space
    n = cfg.n_modes
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValidationError(f"mode indices must lie in 1..{n}")
    times = np.asarray(times, dtype=float)
    weights = cfg.bright_weights
    c_n = _dense(space.collective_annihilation(weights))
    rate = 0.5 * n * cfg.gamma
    b_i_dag = _dense(space.creation(i - 1))
    b_j = _dense(space.annihilation(j - 1))
    x0 = b_j @ rho0.data
    mean_j = _expect(b_j, rho0.data)
    gen = _BlockGenerator(space, None, [(rate, c_n)], [x0, rho0.data])
    y0 = np.stack([gen.pack(gen.sort(x0)), gen.pack(gen.sort(rho0.data))])
    b_i_dag = gen.sort(b_i_dag)

    def rhs(y):
        return np.stack([gen(y[0]), gen(y[1])])

    def observe(y):
        c = _expect(b_i_dag, gen.unpack(y[0])) - _expect(b_i_dag, gen.unpack(y[1])) * mean_j
        return np.array([c.real, c.imag])

    top = int(space.totals.max())
    _, chans = integrate_refined(rhs, y0, times, observe, tol=REFINE_TOL, rate_scale=2 * rate * max(top, 1))
    return chans[:, 0] + 1j * chans[:, 1]


def rung_populations_ode(weights, n_modes, tau):
    """Integrate ``dP_R/dtau = N ((R+1) P_{R+1} - R P_R)`` for one ladder."""
    p0 = np.asarray(weights, dtype=float)
    rungs = np.arange(p0.size)
    up = rungs[1:].astype(float)

    def rhs(p):
        out = -n_modes * rungs * p
        out[:-1] += n_modes * up * p[1:]
        return out

    _, chans = integrate_refined(
        rhs, p0, tau, lambda p: p, tol=1e-11, rate_scale=n_modes * max(p0.size - 1, 1)
    )
    return chans.T


def star_hamiltonian_spectrum(cfg, max_total):
    """Eigenvalues of ``omega (a^dag a + sum b^dag b) + sum g_j (a^dag b_j + a b_j^dag)``
    with at most ``max_total`` quanta, by dense diagonalization."""
    space = FockSpace.uniform(cfg.n_modes + 1, max_total, max_total=max_total)
    a = space.annihilation(0)
    h = cfg.omega * space.total_number()
    for j, g in enumerate(cfg.couplings):
        b = space.annihilation(j + 1)
        h = h + g * (a.T @ b + b.T @ a)
    return np.sort(np.linalg.eigvalsh(h.toarray()))


def dump_snapshot(rho, stream):
    """Write a density matrix as text: a ``dim`` header then row-major ``re im`` pairs."""
    data = rho.data if isinstance(rho, DensityOperator) else np.asarray(rho)
    dim = data.shape[0]
    stream.write(f"{dim}\n")
    for row in data:
        stream.write(" ".join(f"{_fmt(z.real)} {_fmt(z.imag)}" for z in row) + "\n")
