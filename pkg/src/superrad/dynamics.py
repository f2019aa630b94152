"""Closed-form dynamics of collective decay through the bright mode.

The reduced master equation ``drho/dt = (N Gamma / 2) D[C_N] rho`` only ever
lowers the bright rung, so every quantity here follows from the initial mode
moments.  Times are dimensionless, ``tau = Gamma t``; intensities are reported
in units of ``Gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import xlog1py, xlogy

from ._numerics import log_binom
from .collective import BasisIndex
from .errors import ValidationError
from .series import TimeSeries
from .states import DickeSuperposition, ModeMoments, moments_of, mrl_expectations

__all__ = [
    "Radiance",
    "RadianceClass",
    "initial_moments",
    "intensity_series",
    "mrl_series",
    "split_intensity",
    "dark_fraction",
    "normal_fraction",
    "classify",
    "LadderPopulations",
    "ladder_populations",
    "pascal_matrices",
    "pascal_solution_check",
    "two_time_correlation",
    "correlation_matrix",
    "product_state_fraction",
    "uniform_product_fraction",
    "sweep_fraction",
]

DEFAULT_EPSILON = 1e-12


class Radiance(str, Enum):
    SUPERRADIANT = "Superradiant"
    NORMAL = "Normal"
    SUBRADIANT = "Subradiant"
    DARK = "Dark"
    VACUUM = "Vacuum"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RadianceClass:
    tag: Radiance
    dark_fraction: float | None
    normal_fraction: float

    def __str__(self):
        f = "n/a" if self.dark_fraction is None else f"{self.dark_fraction:.3f}"
        return f"{self.tag} F={f} F_N={self.normal_fraction:.3f}"


def initial_moments(state, cfg):
    """Accept either a StateSpec or precomputed ModeMoments."""
    if isinstance(state, ModeMoments):
        if state.n_modes != cfg.n_modes:
            raise ValidationError("moments and coupling config disagree on N")
        return state
    return moments_of(state, cfg)


def _tau(times):
    tau = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(tau < 0):
        raise ValidationError("times must be non-negative")
    return tau


def intensity_series(state, cfg, times):
    """Emitted intensity ``I/Gamma = N R(0) exp(-N tau)``."""
    m = initial_moments(state, cfg)
    tau = _tau(times)
    _, r0, _ = mrl_expectations(m, cfg)
    n = cfg.n_modes
    return TimeSeries(tau, {"intensity": n * r0 * np.exp(-n * tau)}, cfg.gamma)


def mrl_series(state, cfg, times):
    """Expected total, bright and dark quanta; L is conserved, R decays at N Gamma."""
    m = initial_moments(state, cfg)
    tau = _tau(times)
    m0, r0, l0 = mrl_expectations(m, cfg)
    n = cfg.n_modes
    r = r0 * np.exp(-n * tau)
    return TimeSeries(
        tau,
        {"intensity": n * r, "M": l0 + r, "R": r, "L": np.full_like(tau, l0)},
        cfg.gamma,
    )


def split_intensity(state, cfg, t):
    """Uncorrelated and correlated parts ``(I_U, I_C)`` at ``tau = t``, units of Gamma."""
    if cfg.n_modes == 1:
        raise ValidationError("the uncorrelated/correlated split is undefined for a single oscillator")
    m = initial_moments(state, cfg)
    w = cfg.bright_weights
    s = np.real(m.second)
    diag = float(np.sum(w**2 * np.diag(s)))
    full = float(w @ s @ w)
    env = cfg.n_modes * math.exp(-cfg.n_modes * float(t))
    return env * diag, env * (full - diag)


def normal_fraction(m, cfg):
    """``F_N = 1 - sum g_j^2 n_j / (G^2 sum n_j)``; ``1 - 1/N`` for uniform couplings."""
    w2 = cfg.bright_weights**2
    occ = np.real(np.diag(m.second))
    total = float(occ.sum())
    if total <= 0:
        return 1.0 - 1.0 / cfg.n_modes
    return 1.0 - float(w2 @ occ) / total


def dark_fraction(state, cfg):
    """``(F, F_N)``; F is None for the vacuum."""
    m = initial_moments(state, cfg)
    total, bright, _ = mrl_expectations(m, cfg)
    fn = normal_fraction(m, cfg)
    if total == 0:
        return None, fn
    return 1.0 - bright / total, fn


def classify(state, cfg, epsilon=DEFAULT_EPSILON):
    """Classify the radiance of an initial state.

    Vacuum when ``M <= epsilon``, Dark when ``R <= epsilon M``; otherwise the
    sign of ``F_N - F`` (the correlated share of the bright quanta) decides,
    with a relative band ``epsilon`` around zero.
    """
    if not epsilon > 0:
        raise ValidationError("epsilon must be positive")
    m = initial_moments(state, cfg)
    total, bright, _ = mrl_expectations(m, cfg)
    fn = normal_fraction(m, cfg)
    if total <= epsilon:
        return RadianceClass(Radiance.VACUUM, None, fn)
    f = 1.0 - bright / total
    if bright <= epsilon * total:
        return RadianceClass(Radiance.DARK, f, fn)
    if cfg.n_modes == 1:
        return RadianceClass(Radiance.NORMAL, f, fn)
    # F_N - F directly from the off-diagonal moments, avoiding cancellation
    w = cfg.bright_weights
    s = np.real(m.second)
    off = float(w @ s @ w - np.sum(w**2 * np.diag(s)))
    gap = off / total
    band = epsilon * max(abs(f), abs(fn), abs(off) / total if total else 0.0)
    if gap > band:
        tag = Radiance.SUPERRADIANT
    elif gap < -band:
        tag = Radiance.SUBRADIANT
    else:
        tag = Radiance.NORMAL
    return RadianceClass(tag, f, fn)


# ---------------------------------------------------------------- ladder populations


@dataclass
class LadderPopulations:
    """Rung populations ``P_(R, L, d_L)(tau)``, one row per retained index."""

    tau: np.ndarray
    indices: list
    values: np.ndarray

    def __getitem__(self, idx):
        return self.values[self.indices.index(idx)]

    def to_series(self, gamma=None):
        chans = {}
        for idx, row in zip(self.indices, self.values):
            d = "_".join(str(x) for x in idx.degeneracy)
            chans[f"P_{d}_R{idx.rung}" if d else f"P_R{idx.rung}"] = row
        return TimeSeries(self.tau, chans, gamma)


def _rung_populations(weights, n_modes, tau):
    """Populations of rungs 0..K for one ladder from initial rung weights."""
    weights = np.asarray(weights, dtype=float)
    top = weights.size - 1
    x = np.exp(-n_modes * tau)
    out = np.zeros((top + 1, tau.size))
    for r in range(top + 1):
        acc = np.zeros(tau.size)
        for k in range(r, top + 1):
            if weights[k] == 0:
                continue
            # binom(k, R) x^R (1-x)^(k-R) accumulated in log space
            log_term = log_binom(k, r) + xlogy(r, x) + xlog1py(k - r, -x)
            acc += weights[k] * np.exp(log_term)
        out[r] = acc
    return out


def ladder_populations(initial, cfg, times):
    """Closed-form rung populations of a Dicke superposition.

    Each ladder ``d_L`` decays independently; coherences between ladders do not
    affect the populations.  Retained indices are every rung from 0 up to the
    highest occupied rung of each occupied ladder, grouped by ladder.
    """
    if not isinstance(initial, DickeSuperposition):
        raise ValidationError("ladder populations need a DickeSuperposition")
    if initial.n_modes_hint() != cfg.n_modes:
        raise ValidationError("state and coupling config disagree on N")
    tau = _tau(times)
    ladders = {}
    for a, idx in initial.terms:
        ladders.setdefault(idx.degeneracy, {})[idx.rung] = abs(a) ** 2
    indices, rows = [], []
    for deg in sorted(ladders, key=lambda d: (sum(d), d)):
        weights = ladders[deg]
        top = max(weights)
        pops = _rung_populations([weights.get(k, 0.0) for k in range(top + 1)], cfg.n_modes, tau)
        for r in range(top + 1):
            indices.append(BasisIndex(deg, r))
            rows.append(pops[r])
    return LadderPopulations(tau, indices, np.array(rows))


def pascal_matrices(dim):
    """Exact integer (A, B, D) for the rung-rate generator on ``dim`` rungs.

    ``A`` has ``1 - i`` on the diagonal and ``i`` on the superdiagonal
    (1-based), ``B[i, j] = binom(i-1, j-1)`` and ``D = diag(1 - i)``.
    """
    if dim < 1:
        raise ValidationError("dim must be at least 1")
    a = np.zeros((dim, dim), dtype=object)
    b = np.zeros((dim, dim), dtype=object)
    d = np.zeros((dim, dim), dtype=object)
    for i in range(dim):
        a[i, i] = -i
        d[i, i] = -i
        if i + 1 < dim:
            a[i, i + 1] = i + 1
        for j in range(i + 1):
            b[i, j] = math.comb(i, j)
    return a, b, d


def pascal_solution_check(dim):
    """Max-abs residual of ``A - (B^-1)^T D B^T`` on ``dim`` rungs.

    ``B^-1`` is the signed Pascal matrix ``(-1)^(i-j) binom(i-1, j-1)``; the
    product is formed in exact integer arithmetic.
    """
    a, b, d = pascal_matrices(dim)
    b_inv = np.zeros((dim, dim), dtype=object)
    for i in range(dim):
        for j in range(i + 1):
            b_inv[i, j] = (-1) ** (i - j) * math.comb(i, j)
    recon = b_inv.T.dot(d).dot(b.T)
    return float(max(abs(int(x)) for x in (a - recon).ravel()))


# ---------------------------------------------------------------- correlations


def correlation_matrix(state, cfg, t):
    """All ``c_ij(t, 0)`` at one time ``tau = t`` as an N x N complex matrix.

    ``c_ij = S_ij - mu_i^* mu_j - w_i (1 - e^{-N tau / 2}) (sum_m w_m S_mj - <C_N^dag> mu_j)``
    with ``w = g / G_N``.  The bright amplitude ``<C_N(t)>`` decays at half the
    rate of the bright population, hence the ``N tau / 2``.
    """
    m = initial_moments(state, cfg)
    w = cfg.bright_weights
    mu = m.means
    c_dag = complex(w @ mu.conj())
    cross = w @ m.second - c_dag * mu
    decay = 1.0 - math.exp(-0.5 * cfg.n_modes * float(t))
    return m.second - np.outer(mu.conj(), mu) - decay * np.outer(w, cross)


def two_time_correlation(state, cfg, i, j, times):
    """``c_ij(t, 0) = <b_i^dag(t) b_j(0)> - <b_i^dag(t)><b_j(0)>`` (1-based i, j)."""
    n = cfg.n_modes
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValidationError(f"mode indices must lie in 1..{n}")
    m = initial_moments(state, cfg)
    tau = _tau(times)
    w = cfg.bright_weights
    mu = m.means
    c_dag = complex(w @ mu.conj())
    base = m.second[i - 1, j - 1] - mu[i - 1].conjugate() * mu[j - 1]
    cross = complex(w @ m.second[:, j - 1]) - c_dag * mu[j - 1]
    values = base - w[i - 1] * (1.0 - np.exp(-0.5 * n * tau)) * cross
    return TimeSeries(tau, {f"c_{i}_{j}": values.astype(complex)}, cfg.gamma)


# ---------------------------------------------------------------- product squeezed coherent states


def product_state_fraction(alpha, xi, cfg):
    """Dark fraction of ``prod_j D_j(alpha_j) S_j(xi_j)|0>`` from its closed form.

    ``F = 1 - (|sum g_j alpha_j|^2 + sum g_j^2 sinh^2 r_j) / (G^2 sum_j (|alpha_j|^2 + sinh^2 r_j))``;
    None for the vacuum.
    """
    a = np.asarray(alpha, dtype=complex)
    sh2 = np.sinh(np.abs(np.asarray(xi, dtype=complex))) ** 2
    g = cfg.g
    total = float(np.sum(np.abs(a) ** 2 + sh2))
    if total == 0:
        return None
    bright = (abs(complex(g @ a)) ** 2 + float(g**2 @ sh2)) / cfg.total_coupling**2
    return 1.0 - bright / total


def uniform_product_fraction(alpha, r, n_modes):
    """Dark fraction of ``|alpha, r e^{i theta}>^N`` with uniform couplings.

    Written as ``(1 - 1/N) s / (|alpha|^2 + s)`` with ``s = sinh^2 r`` so the
    coherent (``r = 0``) and squeezed-vacuum (``alpha = 0``) edges are exact.
    """
    s = math.sinh(r) ** 2
    a2 = abs(alpha) ** 2
    if a2 + s == 0:
        return None
    # s / (a2 + s) first: it is exactly 1 on the alpha = 0 edge
    return (1.0 - 1.0 / n_modes) * (s / (a2 + s))


def sweep_fraction(cfg, alphas, rs):
    """Dark fraction over a grid of uniform product squeezed coherent states.

    Returns ``(closed, pipeline)``, each of shape ``(len(alphas), len(rs))``:
    the uniform closed form and the route through moments_of and
    dark_fraction.  The vacuum corner is NaN.
    """
    from ._numerics import parallel_map
    from .states import ProductSqueezedCoherent

    n = cfg.n_modes
    alphas = np.asarray(alphas, dtype=float)
    rs = np.asarray(rs, dtype=float)

    def row(alpha):
        closed, piped = [], []
        for r in rs:
            f = uniform_product_fraction(alpha, r, n)
            closed.append(np.nan if f is None else f)
            spec = ProductSqueezedCoherent((alpha,) * n, (complex(r),) * n)
            fp, _ = dark_fraction(spec, cfg)
            piped.append(np.nan if fp is None else fp)
        return closed, piped

    rows = parallel_map(row, alphas)
    return np.array([c for c, _ in rows]), np.array([p for _, p in rows])
