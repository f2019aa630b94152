"""Run configuration files.

Flat ``key = value`` pairs grouped under ``[section]`` headers; ``#`` starts a
comment.  Example::

    [coupling]
    n_modes = 5
    uniform_g = 1.0
    kappa = 100

    [state]
    family = dicke
    terms = 1|0,0,0,0|5

    [time]
    t_max = 3        # in units of 1/Gamma
    samples = 61

Every value is validated and unknown sections or keys are rejected with the
offending line number.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .collective import CouplingConfig
from .errors import SuperradError, ValidationError
from .states import STATE_KEYS, StateSpec, parse_state

__all__ = ["RunConfig", "load_config", "parse_config"]

SECTIONS = {
    "coupling": {"n_modes", "g", "uniform_g", "kappa", "omega"},
    "state": STATE_KEYS,
    "time": {"t_max", "samples"},
    "tolerances": {"epsilon", "tail", "oracle_max_quanta"},
    "output": {"dir", "prefix", "plots"},
}


@dataclass
class RunConfig:
    coupling: CouplingConfig
    state: StateSpec | None = None
    t_max: float = 3.0
    samples: int = 61
    epsilon: float = 1e-12
    tail_tol: float = 1e-10
    oracle_max_quanta: int | None = None
    output_dir: str = "."
    prefix: str = "superrad"
    plots: bool = True
    source: str = "<string>"
    state_lines: dict = field(default_factory=dict)

    @property
    def tau(self):
        """Dimensionless time grid ``Gamma t``."""
        return np.linspace(0.0, self.t_max, self.samples)

    def output_path(self, suffix):
        return os.path.join(self.output_dir, f"{self.prefix}_{suffix}")


def _error(source, lineno, msg):
    where = f"{source}:{lineno}: " if lineno else f"{source}: "
    return ValidationError(where + msg)


def _tokenize(text, source):
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise _error(source, lineno, f"malformed section header {raw.strip()!r}")
            current = line[1:-1].strip().lower()
            if current not in SECTIONS:
                raise _error(source, lineno, f"unknown section [{current}]")
            if current in sections:
                raise _error(source, lineno, f"section [{current}] repeated")
            sections[current] = {}
            continue
        if current is None:
            raise _error(source, lineno, "key outside any section")
        if "=" not in line:
            raise _error(source, lineno, f"expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        allowed = SECTIONS[current]
        if key not in allowed and not (current == "state" and key.startswith("base.") and key[5:] in allowed):
            raise _error(source, lineno, f"unknown key '{key}' in [{current}]")
        if key in sections[current]:
            raise _error(source, lineno, f"key '{key}' repeated")
        sections[current][key] = (value, lineno)
    return sections


def _number(entry, name, source, kind=float):
    value, lineno = entry
    try:
        x = kind(value)
    except ValueError:
        raise _error(source, lineno, f"{name}: cannot parse {value!r} as {kind.__name__}") from None
    if kind is float and not math.isfinite(x):
        raise _error(source, lineno, f"{name}: must be finite")
    return x


def _coupling(sec, source):
    if "n_modes" not in sec:
        raise _error(source, 0, "[coupling] needs n_modes")
    n = _number(sec["n_modes"], "n_modes", source, int)
    if n < 1:
        raise _error(source, sec["n_modes"][1], "n_modes must be at least 1")
    if ("g" in sec) == ("uniform_g" in sec):
        raise _error(source, 0, "[coupling] needs exactly one of g or uniform_g")
    if "g" in sec:
        value, lineno = sec["g"]
        try:
            g = [float(x) for x in value.split(",") if x.strip()]
        except ValueError:
            raise _error(source, lineno, f"g: cannot parse {value!r}") from None
        if len(g) != n:
            raise _error(source, lineno, f"g lists {len(g)} couplings but n_modes = {n}")
    else:
        g = [_number(sec["uniform_g"], "uniform_g", source)] * n
    for j, gj in enumerate(g, 1):
        if not gj > 0:
            key = "g" if "g" in sec else "uniform_g"
            raise _error(source, sec[key][1], f"{key}: coupling {j} must be positive")
    kappa = _number(sec["kappa"], "kappa", source) if "kappa" in sec else 1.0
    if not kappa > 0:
        raise _error(source, sec["kappa"][1], f"kappa must be positive (got {kappa:g})")
    omega = _number(sec["omega"], "omega", source) if "omega" in sec else 0.0
    return CouplingConfig(tuple(g), kappa, omega)


def parse_config(text, source="<string>"):
    """Parse configuration text into a validated :class:`RunConfig`."""
    sections = _tokenize(text, source)
    if "coupling" not in sections:
        raise _error(source, 0, "missing [coupling] section")
    cfg = RunConfig(_coupling(sections["coupling"], source), source=source)

    if "state" in sections:
        sec = sections["state"]
        mapping = {k: v for k, (v, _) in sec.items()}
        first = min(lineno for _, lineno in sec.values()) if sec else 0
        try:
            cfg.state = parse_state(mapping, cfg.coupling)
        except SuperradError as exc:
            raise _error(source, sec.get("family", ("", first))[1], str(exc)) from None
        cfg.state_lines = mapping

    time = sections.get("time", {})
    if "t_max" in time:
        cfg.t_max = _number(time["t_max"], "t_max", source)
        if not cfg.t_max > 0:
            raise _error(source, time["t_max"][1], "t_max must be positive")
    if "samples" in time:
        cfg.samples = _number(time["samples"], "samples", source, int)
        if cfg.samples < 2:
            raise _error(source, time["samples"][1], "samples must be at least 2")

    tol = sections.get("tolerances", {})
    if "epsilon" in tol:
        cfg.epsilon = _number(tol["epsilon"], "epsilon", source)
        if not cfg.epsilon > 0:
            raise _error(source, tol["epsilon"][1], "epsilon must be positive")
    if "tail" in tol:
        cfg.tail_tol = _number(tol["tail"], "tail", source)
        if not cfg.tail_tol > 0:
            raise _error(source, tol["tail"][1], "tail must be positive")
    if "oracle_max_quanta" in tol:
        cfg.oracle_max_quanta = _number(tol["oracle_max_quanta"], "oracle_max_quanta", source, int)
        if cfg.oracle_max_quanta < 0:
            raise _error(source, tol["oracle_max_quanta"][1], "oracle_max_quanta must be non-negative")

    out = sections.get("output", {})
    if "dir" in out:
        cfg.output_dir = out["dir"][0]
    if "prefix" in out:
        cfg.prefix = out["prefix"][0]
        if not cfg.prefix or any(c in cfg.prefix for c in "/\\"):
            raise _error(source, out["prefix"][1], "prefix must be a plain file-name stem")
    if "plots" in out:
        value, lineno = out["plots"]
        if value.lower() not in ("true", "false", "yes", "no", "1", "0"):
            raise _error(source, lineno, "plots must be true or false")
        cfg.plots = value.lower() in ("true", "yes", "1")
    return cfg


def load_config(path):
    """Read and validate a configuration file; relative output dirs resolve
    against the file's directory."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from None
    cfg = parse_config(text, source=os.fspath(path))
    if not os.path.isabs(cfg.output_dir):
        cfg.output_dir = os.path.join(os.path.dirname(os.path.abspath(path)), cfg.output_dir)
    return cfg
