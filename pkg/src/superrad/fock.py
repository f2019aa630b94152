"""Truncated product Fock spaces and single-mode matrix elements.

A :class:`FockSpace` is the span of ``|n_1, ..., n_N>`` with ``n_j <= cutoffs[j]``
and, optionally, ``sum(n) <= max_total``.  Capping the total is exact for any
generator that never raises the total number of quanta, which is the case for
every master equation in this package, and it shrinks the dimension from
``prod(c+1)`` to a binomial.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.special import eval_genlaguerre

from .errors import ValidationError


@dataclass(frozen=True, eq=True)
class FockSpace:
    """Truncated multimode Fock space with a lexicographic basis order."""

    cutoffs: tuple
    max_total: int | None = None
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        cutoffs = tuple(int(c) for c in self.cutoffs)
        if not cutoffs or any(c < 0 for c in cutoffs):
            raise ValidationError("cutoffs must be a non-empty sequence of non-negative integers")
        object.__setattr__(self, "cutoffs", cutoffs)
        if self.max_total is not None and self.max_total < 0:
            raise ValidationError("max_total must be non-negative")
        states = [
            s
            for s in itertools.product(*(range(c + 1) for c in cutoffs))
            if self.max_total is None or sum(s) <= self.max_total
        ]
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(states)})

    @classmethod
    def uniform(cls, n_modes, cutoff, max_total=None):
        return cls((cutoff,) * n_modes, max_total)

    @property
    def n_modes(self):
        return len(self.cutoffs)

    @property
    def dim(self):
        return len(self._index)

    @cached_property
    def states(self):
        return list(self._index)

    @cached_property
    def occupations(self):
        """Integer array of shape (dim, n_modes)."""
        return np.array(self.states, dtype=int).reshape(self.dim, self.n_modes)

    @cached_property
    def totals(self):
        return self.occupations.sum(axis=1)

    def index(self, occupation):
        return self._index[tuple(occupation)]

    def __contains__(self, occupation):
        return tuple(occupation) in self._index

    def basis_vector(self, occupation):
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(occupation)] = 1.0
        return v

    def vacuum(self):
        return self.basis_vector((0,) * self.n_modes)

    def annihilation(self, mode):
        """Sparse lowering operator b_mode (CSR)."""
        return self._ladder_cache[mode]

    def creation(self, mode):
        return self._ladder_cache[mode].T.tocsr()

    @cached_property
    def _ladder_cache(self):
        ops = []
        occ = self.occupations
        for j in range(self.n_modes):
            rows, cols, vals = [], [], []
            for i, s in enumerate(self.states):
                if s[j] == 0:
                    continue
                t = list(s)
                t[j] -= 1
                rows.append(self._index[tuple(t)])
                cols.append(i)
                vals.append(math.sqrt(occ[i, j]))
            ops.append(sp.csr_matrix((vals, (rows, cols)), shape=(self.dim, self.dim), dtype=float))
        return ops

    def number(self, mode):
        return sp.diags(self.occupations[:, mode].astype(float), format="csr")

    def total_number(self):
        return sp.diags(self.totals.astype(float), format="csr")

    def collective_annihilation(self, weights):
        """Sparse ``sum_j w_j b_j`` for a weight vector over modes."""
        weights = np.asarray(weights)
        op = sp.csr_matrix((self.dim, self.dim), dtype=complex if np.iscomplexobj(weights) else float)
        for j, w in enumerate(weights):
            if w != 0:
                op = op + w * self.annihilation(j)
        return op.tocsr()

    def embed(self, vector, target):
        """Map an amplitude vector into another space by matching occupations.

        Components with no counterpart in ``target`` are dropped; the caller is
        responsible for checking the discarded norm.
        """
        out = np.zeros(target.dim, dtype=complex)
        for i, s in enumerate(self.states):
            j = target._index.get(s)
            if j is not None:
                out[j] = vector[i]
        return out

    def embedding_indices(self, target):
        """(source_idx, target_idx) arrays for occupations present in both."""
        src, dst = [], []
        for i, s in enumerate(self.states):
            j = target._index.get(s)
            if j is not None:
                src.append(i)
                dst.append(j)
        return np.array(src, dtype=int), np.array(dst, dtype=int)


def displacement_matrix(alpha, dim):
    """Exact matrix elements <m|D(alpha)|n> for 0 <= m, n < dim.

    Uses the associated-Laguerre closed form rather than exponentiating a
    truncated generator, so every retained element is exact.
    """
    alpha = complex(alpha)
    x = abs(alpha) ** 2
    out = np.zeros((dim, dim), dtype=complex)
    if alpha == 0:
        np.fill_diagonal(out, 1.0)
        return out
    pref = math.exp(-0.5 * x)
    for m in range(dim):
        for n in range(dim):
            if m >= n:
                k = m - n
                lag = eval_genlaguerre(n, k, x)
                ratio = math.exp(0.5 * (math.lgamma(n + 1) - math.lgamma(m + 1)))
                out[m, n] = pref * ratio * alpha**k * lag
            else:
                k = n - m
                lag = eval_genlaguerre(m, k, x)
                ratio = math.exp(0.5 * (math.lgamma(m + 1) - math.lgamma(n + 1)))
                out[m, n] = pref * ratio * (-alpha.conjugate()) ** k * lag
    return out


def squeezed_vacuum_amplitudes(xi, dim):
    """Fock amplitudes of S(xi)|0> with S(xi) = exp((xi* b^2 - xi b^dag^2)/2).

    Only even levels are populated:
    ``<2n|xi> = (-e^{i theta} tanh r)^n sqrt((2n)!) / (2^n n!) / sqrt(cosh r)``.
    """
    xi = complex(xi)
    r = abs(xi)
    theta = np.angle(xi) if r > 0 else 0.0
    out = np.zeros(dim, dtype=complex)
    out[0] = 1.0 / math.sqrt(math.cosh(r))
    if r == 0:
        return out
    t = math.tanh(r)
    for n in range(1, (dim - 1) // 2 + 1):
        log_mag = 0.5 * math.lgamma(2 * n + 1) - n * math.log(2.0) - math.lgamma(n + 1) + n * math.log(t)
        out[2 * n] = (-1) ** n * math.exp(log_mag) * np.exp(1j * n * theta) / math.sqrt(math.cosh(r))
    return out


def squeezed_coherent_amplitudes(alpha, xi, dim, *, inner_dim=None):
    """Fock amplitudes of D(alpha) S(xi) |0>, truncated to ``dim`` levels."""
    inner = inner_dim or max(dim + 40, 2 * dim)
    sq = squeezed_vacuum_amplitudes(xi, inner)
    d = displacement_matrix(alpha, inner)[:dim, :]
    return d @ sq


def _mode_moments(space, expect):
    n = space.n_modes
    means = np.array([expect(space.annihilation(j)) for j in range(n)])
    second = np.zeros((n, n), dtype=complex)
    for i in range(n):
        bi_dag = space.creation(i)
        for j in range(n):
            second[i, j] = expect(bi_dag @ space.annihilation(j))
    return means, second


@dataclass(frozen=True)
class PureState:
    """Amplitude vector on a truncated Fock space.

    ``tail`` is the probability missing from the truncated vector.
    """

    space: FockSpace
    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex)
        if v.shape != (self.space.dim,):
            raise ValidationError("vector length does not match the Fock space")
        object.__setattr__(self, "vector", v)

    @property
    def tail(self):
        return max(0.0, 1.0 - float(np.vdot(self.vector, self.vector).real))

    def density(self):
        return DensityOperator(self.space, np.outer(self.vector, self.vector.conj()))

    def expect(self, op):
        return complex(np.vdot(self.vector, op @ self.vector))

    def moments(self):
        """(<b_j>, <b_i^dag b_j>) evaluated on the truncated vector."""
        return _mode_moments(self.space, self.expect)


@dataclass(frozen=True)
class DensityOperator:
    """Dense density matrix on a truncated Fock space."""

    space: FockSpace
    data: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.data, dtype=complex)
        if d.shape != (self.space.dim, self.space.dim):
            raise ValidationError("density matrix shape does not match the Fock space")
        object.__setattr__(self, "data", d)

    @property
    def tail(self):
        return max(0.0, 1.0 - float(np.trace(self.data).real))

    def density(self):
        return self

    def expect(self, op):
        return complex(np.sum((op @ self.data).diagonal()))

    def moments(self):
        return _mode_moments(self.space, self.expect)
