"""Superradiance of N two-level atoms, for comparison with the oscillators.

Starting from the fully excited symmetric state, ``n`` counts photons already
emitted and the populations obey

    dP(n)/dtau = (N - n + 1) n P(n-1) - (N - n)(n + 1) P(n),   tau = Gamma t.

The general-N solution is integrated numerically; the N = 5 closed forms are
kept as a fixture for validating the integrator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numerics import integrate_refined
from .errors import ValidationError
from .series import TimeSeries

__all__ = [
    "AtomicPopulations",
    "atomic_populations",
    "atomic_intensity",
    "atomic_dicke_intensity",
    "initial_intensity_comparison",
    "five_atom_populations",
    "five_atom_intensity",
]


@dataclass
class AtomicPopulations:
    """``values[n, k]`` is the probability that n photons were emitted by ``tau[k]``."""

    n_atoms: int
    tau: np.ndarray
    values: np.ndarray

    def emitted(self):
        return np.arange(self.n_atoms + 1) @ self.values

    def intensity(self):
        """Exact expectation of the gain term, ``sum_n (N - n)(n + 1) P(n)``."""
        n = np.arange(self.n_atoms + 1)
        return ((self.n_atoms - n) * (n + 1)) @ self.values

    def to_series(self):
        chans = {f"P{n}": self.values[n] for n in range(self.n_atoms + 1)}
        chans["intensity"] = self.intensity()
        return TimeSeries(self.tau, chans)


def _rates(n_atoms):
    n = np.arange(n_atoms + 1, dtype=float)
    loss = (n_atoms - n) * (n + 1)
    return loss


def atomic_populations(n_atoms, times, *, tol=1e-12):
    """Emitted-photon populations for ``n_atoms`` atoms starting fully excited."""
    n_atoms = int(n_atoms)
    if n_atoms < 1:
        raise ValidationError("n_atoms must be at least 1")
    tau = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(tau < 0):
        raise ValidationError("times must be non-negative")
    loss = _rates(n_atoms)
    p0 = np.zeros(n_atoms + 1)
    p0[0] = 1.0

    def rhs(p):
        out = -loss * p
        out[1:] += loss[:-1] * p[:-1]
        return out

    if tau.size == 1 and tau[0] == 0:
        return AtomicPopulations(n_atoms, tau, p0[:, None])
    grid = tau if tau[0] == 0 else np.concatenate([[0.0], tau])
    _, chans = integrate_refined(rhs, p0, grid, lambda p: p, tol=tol, rate_scale=float(loss.max()))
    values = chans.T if tau[0] == 0 else chans[1:].T
    return AtomicPopulations(n_atoms, tau, values)


def atomic_intensity(n_atoms, times):
    """Emission intensity in units of Gamma."""
    pops = atomic_populations(n_atoms, times)
    return TimeSeries(pops.tau, {"intensity": pops.intensity()})


def atomic_dicke_intensity(l, m):
    """Initial intensity ``(l + m)(l - m + 1)`` of the atomic Dicke state |l, m>."""
    if abs(m) > l:
        raise ValidationError("need |m| <= l")
    return (l + m) * (l - m + 1)


def initial_intensity_comparison(n_systems, quanta):
    """Best initial intensities with K quanta: atoms ``NK + K - K^2``, oscillators ``NK``."""
    n, k = int(n_systems), int(quanta)
    if n < 1 or k < 0:
        raise ValidationError("need N >= 1 and K >= 0")
    if k > n:
        raise ValidationError(f"{n} atoms cannot hold {k} excitations")
    return float(n * k + k - k * k), float(n * k)


def five_atom_populations(tau):
    """Closed-form N = 5 populations, rows n = 0..5."""
    t = np.asarray(tau, dtype=float)
    e5, e8, e9 = np.exp(-5 * t), np.exp(-8 * t), np.exp(-9 * t)
    return np.array(
        [
            e5,
            -5 / 3 * e8 + 5 / 3 * e5,
            -40 / 3 * e8 + 10 * e9 + 10 / 3 * e5,
            -90 * e9 + 80 * e8 + 10 * e5 - 120 * e8 * t,
            -220 / 3 * e5 + 180 * e9 - 320 / 3 * e8 + 320 * e8 * t + 80 * e5 * t,
            1 - 100 * e9 + 125 / 3 * e8 + 172 / 3 * e5 - 200 * e8 * t - 80 * e5 * t,
        ]
    )


def five_atom_intensity(tau):
    t = np.asarray(tau, dtype=float)
    return 5 / 3 * (162 * np.exp(-9 * t) + 16 * np.exp(-8 * t) * (24 * t - 1) + np.exp(-5 * t) * (240 * t - 143))
