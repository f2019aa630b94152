"""Small numerical helpers shared across modules."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from .errors import IntegrationError

_EXACT_FACTORIAL_LIMIT = 20


def binom(n: int, k: int) -> float:
    """Binomial coefficient as a float (0 outside ``0 <= k <= n``).

    ``binom(-1, 0)`` is 1, matching the empty-stratum convention used for
    single-mode degeneracy counts.
    """
    if k == 0:
        return 1.0
    if k < 0 or n < 0 or k > n:
        return 0.0
    return float(math.comb(n, k))


def log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def factorial(n: int) -> float:
    if n <= _EXACT_FACTORIAL_LIMIT:
        return float(math.factorial(n))
    return math.exp(math.lgamma(n + 1))


def sqrt_factorial_ratio(m: int, n: int) -> float:
    """sqrt(m! / n!) evaluated in log space."""
    return math.exp(0.5 * (math.lgamma(m + 1) - math.lgamma(n + 1)))


def rk4_step(rhs, y, h):
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * h * k1)
    k3 = rhs(y + 0.5 * h * k2)
    k4 = rhs(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_refined(
    rhs: Callable[[np.ndarray], np.ndarray],
    y0: np.ndarray,
    times,
    observe: Callable[[np.ndarray], np.ndarray],
    *,
    tol: float = 1e-9,
    rate_scale: float = 1.0,
    max_steps: int = 1 << 20,
    on_sample: Callable[[int, np.ndarray], None] | None = None,
):
    """Integrate an autonomous linear ODE with fixed-step RK4 and step halving.

    Each interval between consecutive sample times is integrated with ``n``
    and ``2n`` equal steps; the finer result is accepted once every observed
    channel differs by less than ``tol``, otherwise ``n`` doubles.

    Returns
    -------
    ys : list of ndarray
        Accepted state at each sample time.
    channels : ndarray, shape (len(times), n_channels)
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-D array")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")

    y = np.array(y0, copy=True)
    ys = [y.copy()]
    obs = [np.asarray(observe(y))]
    if on_sample is not None:
        on_sample(0, y)
    for k in range(1, times.size):
        dt = times[k] - times[k - 1]
        # start near RK4's stability comfort zone, h * rate ~ 0.5
        n = max(1, int(math.ceil(dt * rate_scale / 0.5)))
        coarse = _advance(rhs, y, dt, n)
        coarse_obs = np.asarray(observe(coarse))
        while True:
            if 2 * n > max_steps:
                raise IntegrationError(
                    f"step refinement did not converge on interval {k} "
                    f"(t={times[k - 1]:.6g}..{times[k]:.6g}) within {max_steps} steps"
                )
            fine = _advance(rhs, y, dt, 2 * n)
            fine_obs = np.asarray(observe(fine))
            diff = np.max(np.abs(fine_obs - coarse_obs)) if fine_obs.size else 0.0
            if np.isfinite(diff) and diff < tol:
                break
            n *= 2
            coarse, coarse_obs = fine, fine_obs
        y = fine
        ys.append(y.copy())
        obs.append(fine_obs)
        if on_sample is not None:
            on_sample(k, y)
    return ys, np.array(obs)


def _advance(rhs, y, dt, n):
    h = dt / n
    for _ in range(n):
        y = rk4_step(rhs, y, h)
    return y


def thread_limit(default=None):
    """Worker cap from ``SUPERRAD_THREADS`` (at least 1)."""
    raw = os.environ.get("SUPERRAD_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return default or min(8, os.cpu_count() or 1)


def parallel_map(fn, items):
    """Order-preserving map over a thread pool capped by ``SUPERRAD_THREADS``."""
    items = list(items)
    workers = min(thread_limit(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
