"""Collective-mode algebra for a star of identical oscillators.

N oscillators ``b_j`` couple to a central mode at rates ``g_j``.  The bright
collective mode is ``C_N = sum_j g_j b_j / G_N`` and the remaining ``C_k``
(k < N) complete an orthogonal transformation.  Fock states of the collective
modes form the bosonic Dicke basis ``|d_L, R>``: ``m_k`` quanta in each dark
mode ``C_k`` and ``R`` quanta (the rung) in ``C_N``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._numerics import binom
from .errors import BasisSizeError, ValidationError
from .fock import FockSpace

__all__ = [
    "CouplingConfig",
    "BasisIndex",
    "LadderAction",
    "cumulative_norms",
    "collective_transform",
    "enumerate_basis",
    "stratum_size",
    "apply_collective_ladder",
    "dicke_state_fock_vector",
    "eigen_energy",
    "star_spectrum",
]

DEFAULT_BASIS_LIMIT = 2_000_000


@dataclass(frozen=True)
class CouplingConfig:
    """Star-coupled oscillator ensemble.

    Parameters
    ----------
    couplings : sequence of float
        Positive rates ``g_j`` to the central mode (angular frequency units).
    kappa : float
        Decay rate of the central mode.
    omega : float
        Common oscillator frequency; enters only spectra and phases.
    """

    couplings: tuple
    kappa: float = 1.0
    omega: float = 0.0

    def __post_init__(self):
        g = tuple(float(x) for x in np.atleast_1d(np.asarray(self.couplings, dtype=float)))
        if len(g) < 1:
            raise ValidationError("n_modes must be at least 1")
        if not all(math.isfinite(x) and x > 0 for x in g):
            raise ValidationError("couplings: every g_j must be positive and finite")
        if not (math.isfinite(self.kappa) and self.kappa > 0):
            raise ValidationError("kappa must be positive")
        if not math.isfinite(self.omega):
            raise ValidationError("omega must be finite")
        object.__setattr__(self, "couplings", g)
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "omega", float(self.omega))

    @classmethod
    def uniform(cls, n_modes, g=1.0, kappa=1.0, omega=0.0):
        return cls((g,) * int(n_modes), kappa, omega)

    @property
    def n_modes(self):
        return len(self.couplings)

    @property
    def g(self):
        return np.array(self.couplings)

    @property
    def total_coupling(self):
        """G_N, the norm of the coupling vector."""
        return float(np.sqrt(np.sum(self.g**2)))

    @property
    def gamma(self):
        """Effective single-oscillator decay rate 4 G_N^2 / (N kappa)."""
        return 4.0 * self.total_coupling**2 / (self.n_modes * self.kappa)

    @cached_property
    def bright_weights(self):
        """Row N of the collective transform, g / G_N."""
        return self.g / self.total_coupling

    def with_kappa_ratio(self, ratio):
        """Same couplings with kappa = ratio * G_N."""
        return CouplingConfig(self.couplings, ratio * self.total_coupling, self.omega)


@dataclass(frozen=True, order=True)
class BasisIndex:
    """Label ``|d_L, Phi^R_L>`` of a bosonic Dicke basis state."""

    degeneracy: tuple
    rung: int

    def __post_init__(self):
        d = tuple(int(m) for m in self.degeneracy)
        if any(m < 0 for m in d):
            raise ValidationError("degeneracy entries must be non-negative")
        if int(self.rung) < 0:
            raise ValidationError("rung must be non-negative")
        object.__setattr__(self, "degeneracy", d)
        object.__setattr__(self, "rung", int(self.rung))

    @classmethod
    def ground(cls, n_modes, rung=0):
        """``|e_0, Phi^rung_0>`` for an ensemble of ``n_modes``."""
        return cls((0,) * (n_modes - 1), rung)

    @classmethod
    def unit(cls, n_modes, k, count=1, rung=0):
        """``|count e_k, Phi^rung>`` (1-based dark-mode index k)."""
        d = [0] * (n_modes - 1)
        d[k - 1] = count
        return cls(tuple(d), rung)

    @property
    def n_modes(self):
        return len(self.degeneracy) + 1

    @property
    def dark(self):
        """L, the number of quanta in the dark collective modes."""
        return sum(self.degeneracy)

    @property
    def total(self):
        return self.dark + self.rung

    @property
    def occupations(self):
        """Occupation of every collective mode, C_1 .. C_N."""
        return self.degeneracy + (self.rung,)

    def ladder(self):
        """Key shared by all rungs of the same ladder."""
        return self.degeneracy

    def __str__(self):
        if self.dark == 0:
            d = "e0"
        else:
            d = "+".join(f"{m}e{k}" if m > 1 else f"e{k}" for k, m in enumerate(self.degeneracy, 1) if m)
        return f"|{d}, R={self.rung}>"


@dataclass(frozen=True)
class LadderAction:
    coefficient: float
    result: BasisIndex | None


def cumulative_norms(cfg):
    """Cumulative norms ``G_k = sqrt(sum_{j<=k} g_j^2)`` for k = 1..N."""
    return np.sqrt(np.cumsum(cfg.g**2))


def collective_transform(cfg):
    """Real orthogonal matrix U with ``C_k = sum_j U[k, j] b_j``.

    Row k < N (0-based k-1) is ``(g_{k+1} g_1, ..., g_{k+1} g_k, -G_k^2, 0, ...)
    / (G_k G_{k+1})``; the last row is ``g / G_N``.
    """
    g = cfg.g
    n = g.size
    G = cumulative_norms(cfg)
    u = np.zeros((n, n))
    for k in range(1, n):
        row = np.zeros(n)
        row[:k] = g[k] * g[:k]
        row[k] = -G[k - 1] ** 2
        u[k - 1] = row / (G[k - 1] * G[k])
    u[n - 1] = g / G[-1]
    return u


def stratum_size(n_modes, dark):
    """Number of degeneracy vectors with ``sum(m) = dark``: C(L+N-2, L)."""
    return int(round(binom(dark + n_modes - 2, dark)))


def _compositions(total, parts):
    """All non-negative integer vectors of length ``parts`` summing to ``total``,
    in ascending lexicographic order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_basis(n_modes, max_quanta, *, limit=DEFAULT_BASIS_LIMIT):
    """Bosonic Dicke basis elements with ``L + R <= max_quanta``.

    Ordered by total quanta M, then by rung descending, then by the
    degeneracy vector in ascending lexicographic order.
    """
    if n_modes < 1 or max_quanta < 0:
        raise ValidationError("need n_modes >= 1 and max_quanta >= 0")
    count = sum(stratum_size(n_modes, L) * (max_quanta - L + 1) for L in range(max_quanta + 1))
    if count > limit:
        raise BasisSizeError(f"basis would hold {count} elements, above the limit {limit}")
    out = []
    for m in range(max_quanta + 1):
        for r in range(m, -1, -1):
            for d in _compositions(m - r, n_modes - 1):
                out.append(BasisIndex(d, r))
    return out


def apply_collective_ladder(idx, mode, raising):
    """Action of ``C_mode`` (or its adjoint) on a Dicke basis state.

    ``mode`` is 1-based; ``mode == N`` is the bright ladder operator.
    """
    n = idx.n_modes
    if not 1 <= mode <= n:
        raise ValidationError(f"mode {mode} outside 1..{n}")
    occ = list(idx.occupations)
    m = occ[mode - 1]
    if raising:
        occ[mode - 1] = m + 1
        return LadderAction(math.sqrt(m + 1), BasisIndex(tuple(occ[:-1]), occ[-1]))
    if m == 0:
        return LadderAction(0.0, None)
    occ[mode - 1] = m - 1
    return LadderAction(math.sqrt(m), BasisIndex(tuple(occ[:-1]), occ[-1]))


def dicke_state_fock_vector(idx, cfg, max_quanta, *, space=None):
    """Amplitudes of ``|d_L, Phi^R_L>`` over the product Fock basis.

    Built by applying the collective creation operators (rows of
    :func:`collective_transform`) to the vacuum.  ``space`` defaults to a
    per-mode cutoff of ``max_quanta``.
    """
    if idx.n_modes != cfg.n_modes:
        raise ValidationError("basis index and coupling config disagree on N")
    if idx.total > max_quanta:
        raise ValidationError(f"state holds {idx.total} quanta, above max_quanta={max_quanta}")
    if space is None:
        space = FockSpace.uniform(cfg.n_modes, max_quanta)
    u = collective_transform(cfg)
    vec = space.vacuum()
    for k, m in enumerate(idx.occupations):
        if m == 0:
            continue
        raise_op = space.collective_annihilation(u[k]).T.tocsr()
        for _ in range(m):
            vec = raise_op @ vec
        vec = vec / math.sqrt(math.factorial(m))
    norm = np.linalg.norm(vec)
    assert abs(norm - 1.0) < 1e-10, "truncation too small for the requested Dicke state"
    return vec


def eigen_energy(l, n_plus, n_minus, cfg):
    """Energy of ``|l, n_+, n_->`` for the star Hamiltonian (hbar = 1)."""
    if min(l, n_plus, n_minus) < 0:
        raise ValidationError("quantum numbers must be non-negative")
    return cfg.omega * (l + n_plus + n_minus) + cfg.total_coupling * (n_plus - n_minus)


def star_spectrum(cfg, max_total):
    """Sorted eigenvalues of the star Hamiltonian with at most ``max_total``
    excitations (central mode included), with degeneracies.

    Each dark label l contributes ``C(l+N-2, l)`` degenerate copies.
    """
    energies = []
    for l, npl, nmi in itertools.product(range(max_total + 1), repeat=3):
        if l + npl + nmi > max_total:
            continue
        energies.extend([eigen_energy(l, npl, nmi, cfg)] * stratum_size(cfg.n_modes, l))
    return np.sort(np.array(energies))
