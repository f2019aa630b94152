"""Initial-state families, their mode moments, and their representations.

Every family reduces to a :class:`ModeMoments` record (``<b_j>`` and
``<b_i^dag b_j>``), which is all the closed-form dynamics needs.  Families with
a known bosonic-Dicke expansion can also be expanded term by term, and every
family can be rendered on a truncated product Fock space for the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .collective import (
    BasisIndex,
    CouplingConfig,
    apply_collective_ladder,
    collective_transform,
    dicke_state_fock_vector,
    enumerate_basis,
)
from .errors import NoClosedFormError, TruncationError, ValidationError
from .fock import (
    DensityOperator,
    FockSpace,
    PureState,
    displacement_matrix,
    squeezed_coherent_amplitudes,
)

__all__ = [
    "StateSpec",
    "DickeSuperposition",
    "MultimodeFock",
    "IncoherentMixture",
    "ProductSqueezedCoherent",
    "CollectiveDisplaced",
    "CollectiveSqueezedVacuum",
    "ModeMoments",
    "Expansion",
    "moments_of",
    "mrl_expectations",
    "expansion_coefficients",
    "fock_representation",
    "fock_to_dicke",
    "moon_state",
    "vacuum",
    "format_state",
    "parse_state",
]

NORM_TOL = 1e-12


class StateSpec:
    """Marker base class for initial-state families."""

    family = "abstract"

    def n_modes_hint(self):
        """Number of modes implied by the state description itself, or None."""
        return None


@dataclass(frozen=True)
class DickeSuperposition(StateSpec):
    """Pure state ``sum_i a_i |d_L, Phi^R_L>_i``."""

    terms: tuple
    family = "dicke"

    def __post_init__(self):
        terms = tuple((complex(a), idx if isinstance(idx, BasisIndex) else BasisIndex(*idx)) for a, idx in self.terms)
        if not terms:
            raise ValidationError("DickeSuperposition needs at least one term")
        sizes = {idx.n_modes for _, idx in terms}
        if len(sizes) != 1:
            raise ValidationError("all Dicke terms must share one mode count")
        if len({idx for _, idx in terms}) != len(terms):
            raise ValidationError("duplicate basis index in DickeSuperposition")
        norm = math.sqrt(sum(abs(a) ** 2 for a, _ in terms))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"Dicke amplitudes must have unit norm (got {norm:.15g})")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def single(cls, idx):
        return cls(((1.0, idx),))

    @classmethod
    def normalized(cls, terms):
        terms = [(complex(a), idx) for a, idx in terms if a != 0]
        norm = math.sqrt(sum(abs(a) ** 2 for a, _ in terms))
        return cls(tuple((a / norm, idx) for a, idx in terms))

    def n_modes_hint(self):
        return self.terms[0][1].n_modes

    def as_dict(self):
        return {idx: a for a, idx in self.terms}


@dataclass(frozen=True)
class MultimodeFock(StateSpec):
    occupations: tuple
    family = "fock"

    def __post_init__(self):
        occ = tuple(int(n) for n in self.occupations)
        if not occ or any(n < 0 for n in occ):
            raise ValidationError("occupations must be non-negative integers")
        object.__setattr__(self, "occupations", occ)

    def n_modes_hint(self):
        return len(self.occupations)


@dataclass(frozen=True)
class IncoherentMixture(StateSpec):
    """Product of diagonal single-mode states.

    Exactly one of ``distributions`` (explicit ``P^j_n`` lists, which must sum
    to one) or ``nbar`` (thermal occupations) is given.
    """

    distributions: tuple | None = None
    nbar: tuple | None = None
    family = "mixture"

    def __post_init__(self):
        if (self.distributions is None) == (self.nbar is None):
            raise ValidationError("give exactly one of distributions or nbar")
        if self.nbar is not None:
            nbar = tuple(float(x) for x in self.nbar)
            if not nbar or any(not math.isfinite(x) or x < 0 for x in nbar):
                raise ValidationError("nbar entries must be non-negative")
            object.__setattr__(self, "nbar", nbar)
        else:
            dists = tuple(tuple(float(p) for p in d) for d in self.distributions)
            if not dists:
                raise ValidationError("distributions must not be empty")
            for j, d in enumerate(dists):
                if any(p < 0 for p in d):
                    raise ValidationError(f"distribution {j + 1} has negative weights")
                if abs(sum(d) - 1.0) > NORM_TOL:
                    raise ValidationError(
                        f"distribution {j + 1} sums to {sum(d):.15g}; truncated distributions are not renormalized"
                    )
            object.__setattr__(self, "distributions", dists)

    @classmethod
    def thermal(cls, nbar):
        return cls(nbar=tuple(nbar))

    @property
    def is_thermal(self):
        return self.nbar is not None

    def n_modes_hint(self):
        return len(self.nbar if self.is_thermal else self.distributions)

    def mean_occupations(self):
        if self.is_thermal:
            return np.array(self.nbar)
        return np.array([sum(n * p for n, p in enumerate(d)) for d in self.distributions])

    def level_weights(self, mode, cutoff):
        """Weights P_n for n = 0..cutoff of one mode (not renormalized)."""
        if self.is_thermal:
            nb = self.nbar[mode]
            n = np.arange(cutoff + 1)
            if nb == 0:
                return (n == 0).astype(float)
            return np.exp(n * math.log(nb) - (n + 1) * math.log1p(nb))
        d = np.zeros(cutoff + 1)
        src = np.array(self.distributions[mode][: cutoff + 1])
        d[: src.size] = src
        return d


@dataclass(frozen=True)
class ProductSqueezedCoherent(StateSpec):
    """``prod_j D_j(alpha_j) S_j(xi_j) |0>`` with ``xi_j = r_j e^{i theta_j}``."""

    alpha: tuple
    xi: tuple | None = None
    family = "product_squeezed_coherent"

    def __post_init__(self):
        alpha = tuple(complex(a) for a in self.alpha)
        xi = tuple(complex(x) for x in self.xi) if self.xi is not None else (0j,) * len(alpha)
        if not alpha or len(xi) != len(alpha):
            raise ValidationError("alpha and xi must be equal-length, non-empty")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "xi", xi)

    def n_modes_hint(self):
        return len(self.alpha)


@dataclass(frozen=True)
class CollectiveDisplaced(StateSpec):
    """``D_k(amplitude)`` applied to ``base``; ``mode`` k is 1-based, k = N is bright."""

    base: StateSpec
    mode: int
    amplitude: complex
    family = "collective_displaced"

    def __post_init__(self):
        if not isinstance(self.base, StateSpec):
            raise ValidationError("base must be a StateSpec")
        if int(self.mode) < 1:
            raise ValidationError("mode index is 1-based")
        object.__setattr__(self, "mode", int(self.mode))
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    def n_modes_hint(self):
        return self.base.n_modes_hint()


@dataclass(frozen=True)
class CollectiveSqueezedVacuum(StateSpec):
    """``S_N(xi)|0>``: single-mode squeezing of the bright collective mode."""

    xi: complex
    family = "collective_squeezed_vacuum"

    def __post_init__(self):
        object.__setattr__(self, "xi", complex(self.xi))


def vacuum(n_modes):
    return MultimodeFock((0,) * n_modes)


def _check_modes(spec, cfg):
    hint = spec.n_modes_hint()
    if hint is not None and hint != cfg.n_modes:
        raise ValidationError(f"state describes {hint} modes but the coupling config has {cfg.n_modes}")
    if isinstance(spec, CollectiveDisplaced):
        if spec.mode > cfg.n_modes:
            raise ValidationError(f"collective mode {spec.mode} outside 1..{cfg.n_modes}")
        _check_modes(spec.base, cfg)


# ---------------------------------------------------------------- moments


@dataclass(frozen=True)
class ModeMoments:
    """First moments ``<b_j>`` and normal-ordered second moments ``<b_i^dag b_j>``."""

    means: np.ndarray
    second: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "means", np.asarray(self.means, dtype=complex))
        object.__setattr__(self, "second", np.asarray(self.second, dtype=complex))

    @property
    def n_modes(self):
        return self.means.size

    @property
    def centered(self):
        """``S - conj(mu) mu^T``, a Gram matrix for physical states."""
        return self.second - np.outer(self.means.conj(), self.means)

    def check(self, herm_tol=1e-12, psd_tol=1e-10):
        s = self.second
        scale = max(1.0, float(np.max(np.abs(s))) if s.size else 1.0)
        if np.max(np.abs(s - s.conj().T)) > herm_tol * scale:
            raise ValidationError("second-moment matrix is not Hermitian")
        if np.any(np.real(np.diag(s)) < -herm_tol * scale):
            raise ValidationError("negative occupation on the diagonal")
        c = self.centered
        evals = np.linalg.eigvalsh(0.5 * (c + c.conj().T))
        if evals.size and evals.min() < -psd_tol * scale:
            raise ValidationError(f"centered moments not positive semidefinite (min eigenvalue {evals.min():.3e})")
        return self


def _dicke_collective_moments(spec, n):
    """(<C_k>, <C_k^dag C_l>) in the collective basis from ladder actions."""
    psi = spec.as_dict()
    lowered = []
    for k in range(1, n + 1):
        out = {}
        for idx, a in psi.items():
            act = apply_collective_ladder(idx, k, False)
            if act.result is not None:
                out[act.result] = out.get(act.result, 0j) + a * act.coefficient
        lowered.append(out)
    mu = np.array([sum(psi.get(i, 0j).conjugate() * v for i, v in lk.items()) for lk in lowered])
    s = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            lk, ll = lowered[k], lowered[l]
            s[k, l] = sum(lk[i].conjugate() * v for i, v in ll.items() if i in lk)
    return mu, s


def moments_of(spec, cfg):
    """Closed-form mode moments of an initial state."""
    _check_modes(spec, cfg)
    n = cfg.n_modes
    if isinstance(spec, DickeSuperposition):
        u = collective_transform(cfg)
        mu_c, s_c = _dicke_collective_moments(spec, n)
        return ModeMoments(u.T @ mu_c, u.T @ s_c @ u)
    if isinstance(spec, MultimodeFock):
        return ModeMoments(np.zeros(n), np.diag(np.array(spec.occupations, dtype=float)))
    if isinstance(spec, IncoherentMixture):
        return ModeMoments(np.zeros(n), np.diag(spec.mean_occupations()))
    if isinstance(spec, ProductSqueezedCoherent):
        a = np.array(spec.alpha)
        sh2 = np.sinh(np.abs(np.array(spec.xi))) ** 2
        return ModeMoments(a, np.outer(a.conj(), a) + np.diag(sh2))
    if isinstance(spec, CollectiveDisplaced):
        base = moments_of(spec.base, cfg)
        v = spec.amplitude * collective_transform(cfg)[spec.mode - 1]
        mu = base.means
        s = base.second + np.outer(v.conj(), mu) + np.outer(mu.conj(), v) + np.outer(v.conj(), v)
        return ModeMoments(mu + v, s)
    if isinstance(spec, CollectiveSqueezedVacuum):
        w = cfg.bright_weights
        return ModeMoments(np.zeros(n), np.outer(w, w) * math.sinh(abs(spec.xi)) ** 2)
    raise ValidationError(f"unsupported state family {type(spec).__name__}")


def mrl_expectations(m, cfg):
    """Expected total, bright and dark quanta ``(M, R, L)``."""
    w = cfg.bright_weights
    total = float(np.real(np.trace(m.second)))
    bright = float(np.real(w @ m.second @ w))
    total = max(total, 0.0)
    bright = min(max(bright, 0.0), total)
    return total, bright, total - bright


# ---------------------------------------------------------------- Dicke expansions


@dataclass(frozen=True)
class Expansion:
    """Truncated bosonic-Dicke expansion and the norm it leaves out."""

    terms: tuple
    tail: float

    def as_dict(self):
        return {idx: a for a, idx in self.terms}

    def amplitude(self, idx):
        return self.as_dict().get(idx, 0j)

    def to_state(self, renormalize=False):
        if renormalize:
            return DickeSuperposition.normalized(self.terms)
        return DickeSuperposition(self.terms)


def _sort_key(idx):
    return (idx.total, -idx.rung, idx.degeneracy)


def _squeezed_bright_terms(xi, n, max_terms):
    r = abs(xi)
    theta = np.angle(xi) if r > 0 else 0.0
    t = math.tanh(r)
    out = {}
    for k in range(max_terms):
        if k > 0 and t == 0:
            break
        # lambda_k = (-1)^k sqrt((2k)!) / (2^k k!) tanh^k r
        log_mag = 0.5 * math.lgamma(2 * k + 1) - k * math.log(2.0) - math.lgamma(k + 1)
        log_mag += k * math.log(t) if k else 0.0
        amp = (-1) ** k * math.exp(log_mag) * np.exp(1j * k * theta) / math.sqrt(math.cosh(r))
        out[BasisIndex.ground(n, 2 * k)] = complex(amp)
    return out


def _expansion_dict(spec, cfg, max_terms):
    n = cfg.n_modes
    if isinstance(spec, DickeSuperposition):
        return spec.as_dict()
    if isinstance(spec, MultimodeFock) and not any(spec.occupations):
        return {BasisIndex.ground(n): 1.0 + 0j}
    if isinstance(spec, CollectiveSqueezedVacuum):
        return _squeezed_bright_terms(spec.xi, n, max_terms)
    if isinstance(spec, CollectiveDisplaced):
        base = _expansion_dict(spec.base, cfg, max_terms)
        k = spec.mode - 1
        top = max(idx.occupations[k] for idx in base)
        dim = max(max_terms, top + 1)
        dmat = displacement_matrix(spec.amplitude, dim)
        out = {}
        for idx, a in base.items():
            occ = list(idx.occupations)
            src = occ[k]
            for m in range(dim):
                amp = a * dmat[m, src]
                if amp == 0:
                    continue
                occ[k] = m
                key = BasisIndex(tuple(occ[:-1]), occ[-1])
                out[key] = out.get(key, 0j) + amp
        return out
    raise NoClosedFormError(f"no closed-form Dicke expansion for family '{spec.family}'")


def expansion_coefficients(spec, cfg, max_terms=40):
    """Bosonic-Dicke expansion of collective displaced/squeezed families.

    ``max_terms`` is the number of retained levels of each displaced or
    squeezed collective mode (rungs ``0, 2, ..., 2(max_terms-1)`` for the
    squeezed vacuum).  The discarded norm is reported as ``tail``.
    """
    _check_modes(spec, cfg)
    terms = _expansion_dict(spec, cfg, max_terms)
    ordered = tuple((complex(terms[idx]), idx) for idx in sorted(terms, key=_sort_key))
    kept = sum(abs(a) ** 2 for a, _ in ordered)
    return Expansion(ordered, max(0.0, 1.0 - kept))


# ---------------------------------------------------------------- Fock representation


def fock_representation(spec, cfg, max_quanta, *, tail_tol=1e-9):
    """Render a state on the product Fock space with per-mode cutoff ``max_quanta``.

    Returns a :class:`PureState` for pure families and a
    :class:`DensityOperator` for mixtures.  Nothing is renormalized: the
    discarded probability is reported as ``tail`` and must stay below
    ``tail_tol``.
    """
    _check_modes(spec, cfg)
    space = FockSpace.uniform(cfg.n_modes, max_quanta)
    rep = _render(spec, cfg, space)
    if rep.tail > tail_tol:
        raise TruncationError(
            f"cutoff {max_quanta} discards {rep.tail:.3e} of the state's probability (limit {tail_tol:.1e})",
            tail=rep.tail,
        )
    return rep


def _render(spec, cfg, space):
    c = space.cutoffs[0]
    n = cfg.n_modes
    if isinstance(spec, DickeSuperposition):
        if max(idx.total for _, idx in spec.terms) > c:
            raise TruncationError(f"Dicke terms exceed the per-mode cutoff {c}", tail=1.0)
        vec = np.zeros(space.dim, dtype=complex)
        for a, idx in spec.terms:
            vec += a * dicke_state_fock_vector(idx, cfg, c, space=space)
        return PureState(space, vec)
    if isinstance(spec, MultimodeFock):
        if max(spec.occupations) > c:
            raise TruncationError(f"occupation {max(spec.occupations)} exceeds cutoff {c}", tail=1.0)
        return PureState(space, space.basis_vector(spec.occupations))
    if isinstance(spec, IncoherentMixture):
        diag = np.ones(1)
        for j in range(n):
            diag = np.kron(diag, spec.level_weights(j, c))
        return DensityOperator(space, np.diag(diag.astype(complex)))
    if isinstance(spec, ProductSqueezedCoherent):
        vec = np.ones(1, dtype=complex)
        for a, x in zip(spec.alpha, spec.xi):
            vec = np.kron(vec, squeezed_coherent_amplitudes(a, x, c + 1))
        return PureState(space, vec)
    if isinstance(spec, CollectiveSqueezedVacuum):
        terms = _squeezed_bright_terms(spec.xi, n, c // 2 + 1)
        vec = np.zeros(space.dim, dtype=complex)
        for idx, a in terms.items():
            vec += a * dicke_state_fock_vector(idx, cfg, c, space=space)
        return PureState(space, vec)
    if isinstance(spec, CollectiveDisplaced):
        base = _render(spec.base, cfg, space)
        shifts = spec.amplitude * collective_transform(cfg)[spec.mode - 1]
        d = np.ones((1, 1), dtype=complex)
        for s in shifts:
            d = np.kron(d, displacement_matrix(s, c + 1))
        if isinstance(base, PureState):
            return PureState(space, d @ base.vector)
        return DensityOperator(space, d @ base.data @ d.conj().T)
    raise ValidationError(f"unsupported state family {type(spec).__name__}")


def fock_to_dicke(vector, space, cfg, *, drop=1e-14):
    """Project a pure Fock-space vector onto the bosonic Dicke basis."""
    support = space.totals[np.abs(vector) > 0]
    top = int(support.max()) if support.size else 0
    terms = []
    for idx in enumerate_basis(cfg.n_modes, top):
        amp = np.vdot(dicke_state_fock_vector(idx, cfg, top, space=space), vector)
        if abs(amp) > drop:
            terms.append((complex(amp), idx))
    return DickeSuperposition(tuple(terms))


def moon_state(m, n, cfg):
    """``(|m, 0> + |0, n>) / sqrt(2)`` on modes 1 and 2, as a Dicke superposition."""
    if cfg.n_modes < 2:
        raise ValidationError("MOON states need at least two modes")
    if m == 0 and n == 0:
        raise ValidationError("MOON state with m = n = 0 is not normalizable as written")
    space = FockSpace.uniform(cfg.n_modes, max(m, n))
    left = [0] * cfg.n_modes
    right = [0] * cfg.n_modes
    left[0] = m
    right[1] = n
    vec = (space.basis_vector(left) + space.basis_vector(right)) / math.sqrt(2.0)
    return fock_to_dicke(vec, space, cfg)


# ---------------------------------------------------------------- text serialization


def _fmt_complex(z):
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    return f"{z.real!r}{z.imag:+.17g}j"


def _fmt_list(values, fmt=repr):
    return ", ".join(fmt(v) for v in values)


def format_state(spec, prefix=""):
    """Serialize a state to ``key = value`` lines (see :func:`parse_state`)."""
    lines = [f"{prefix}family = {spec.family}"]
    if isinstance(spec, DickeSuperposition):
        body = " ; ".join(
            f"{_fmt_complex(a)}|{','.join(str(m) for m in idx.degeneracy)}|{idx.rung}" for a, idx in spec.terms
        )
        lines.append(f"{prefix}terms = {body}")
    elif isinstance(spec, MultimodeFock):
        lines.append(f"{prefix}occupations = {_fmt_list(spec.occupations, str)}")
    elif isinstance(spec, IncoherentMixture):
        if spec.is_thermal:
            lines.append(f"{prefix}nbar = {_fmt_list(spec.nbar)}")
        else:
            lines.append(f"{prefix}distributions = " + " ; ".join(_fmt_list(d) for d in spec.distributions))
    elif isinstance(spec, ProductSqueezedCoherent):
        lines.append(f"{prefix}alpha = {_fmt_list(spec.alpha, _fmt_complex)}")
        lines.append(f"{prefix}xi = {_fmt_list(spec.xi, _fmt_complex)}")
    elif isinstance(spec, CollectiveSqueezedVacuum):
        lines.append(f"{prefix}xi = {_fmt_complex(spec.xi)}")
    elif isinstance(spec, CollectiveDisplaced):
        lines.append(f"{prefix}mode = {spec.mode}")
        lines.append(f"{prefix}alpha = {_fmt_complex(spec.amplitude)}")
        lines.extend(format_state(spec.base, prefix + "base.").splitlines())
    return "\n".join(lines) + "\n"


STATE_KEYS = {"family", "alpha", "xi", "occupations", "nbar", "terms", "distributions", "mode", "m", "n"}


def _parse_complex(text):
    text = text.strip().replace(" ", "")
    try:
        return complex(text)
    except ValueError:
        raise ValidationError(f"not a complex number: {text!r}") from None


def _split_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _parse_terms(text):
    terms = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split("|")
        if len(parts) != 3:
            raise ValidationError(f"Dicke term must look like 'amp|m1,m2,...|R', got {chunk!r}")
        amp = _parse_complex(parts[0])
        deg = tuple(int(x) for x in _split_list(parts[1]))
        terms.append((amp, BasisIndex(deg, int(parts[2]))))
    return tuple(terms)


def parse_state(mapping, cfg=None):
    """Build a StateSpec from a ``key -> value`` mapping of strings.

    The ``family`` value may carry inline ``key=value`` tokens, e.g.
    ``family = moon m=3 n=2``.  Keys prefixed ``base.`` describe the base of
    a collective displacement.  ``cfg`` is needed for ``moon`` and ``vacuum``.
    """
    try:
        return _parse_state(dict(mapping), cfg)
    except ValidationError:
        raise
    except ValueError as exc:
        # bare int()/float() failures on malformed numbers
        raise ValidationError(f"state block: {exc}") from None


def _parse_state(mapping, cfg):
    if "family" not in mapping:
        raise ValidationError("state block needs a 'family' key")
    tokens = mapping["family"].split()
    family = tokens[0].lower()
    for tok in tokens[1:]:
        if "=" not in tok:
            raise ValidationError(f"inline family parameter must be key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        mapping[k.strip().lower()] = v.strip()
    base_keys = {k[5:]: v for k, v in mapping.items() if k.startswith("base.")}
    own = {k for k in mapping if not k.startswith("base.")}
    unknown = own - STATE_KEYS
    if unknown:
        raise ValidationError(f"unknown state keys: {', '.join(sorted(unknown))}")

    def need(key):
        if key not in mapping:
            raise ValidationError(f"family '{family}' requires key '{key}'")
        return mapping[key]

    if family == "dicke":
        return DickeSuperposition(_parse_terms(need("terms")))
    if family == "fock":
        return MultimodeFock(tuple(int(x) for x in _split_list(need("occupations"))))
    if family == "vacuum":
        if cfg is None:
            raise ValidationError("family 'vacuum' needs the coupling block")
        return vacuum(cfg.n_modes)
    if family in ("thermal", "mixture"):
        if "nbar" in mapping:
            return IncoherentMixture.thermal(tuple(float(x) for x in _split_list(mapping["nbar"])))
        dists = tuple(
            tuple(float(x) for x in _split_list(chunk)) for chunk in need("distributions").split(";") if chunk.strip()
        )
        return IncoherentMixture(distributions=dists)
    if family == "product_squeezed_coherent":
        alpha = tuple(_parse_complex(x) for x in _split_list(need("alpha")))
        xi = tuple(_parse_complex(x) for x in _split_list(mapping["xi"])) if "xi" in mapping else None
        return ProductSqueezedCoherent(alpha, xi)
    if family == "collective_squeezed_vacuum":
        return CollectiveSqueezedVacuum(_parse_complex(need("xi")))
    if family == "collective_displaced":
        if not base_keys:
            raise ValidationError("collective_displaced needs base.* keys")
        base = _parse_state(base_keys, cfg)
        return CollectiveDisplaced(base, int(need("mode")), _parse_complex(need("alpha")))
    if family == "moon":
        if cfg is None:
            raise ValidationError("family 'moon' needs the coupling block")
        return moon_state(int(need("m")), int(need("n")), cfg)
    raise ValidationError(f"unknown state family '{family}'")
