"""Sampled time series and the CSV format shared by every emitter."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = ["TimeSeries", "format_csv", "write_csv", "format_table", "write_text"]


@dataclass
class TimeSeries:
    """Channels sampled on a strictly increasing grid of ``tau = Gamma t``.

    Parameters
    ----------
    tau : array
        Dimensionless times.
    channels : dict
        Ordered ``label -> values``; values may be complex.
    gamma : float, optional
        Single-oscillator rate, so that ``times = tau / gamma`` carries the
        units of the coupling constants.
    """

    tau: np.ndarray
    channels: dict = field(default_factory=dict)
    gamma: float | None = None

    def __post_init__(self):
        self.tau = np.asarray(self.tau, dtype=float)
        if self.tau.ndim != 1 or self.tau.size == 0:
            raise ValidationError("times must be a non-empty 1-D grid")
        if np.any(np.diff(self.tau) <= 0):
            raise ValidationError("times must be strictly increasing")
        chans = {}
        for label, values in self.channels.items():
            values = np.asarray(values)
            if values.shape != self.tau.shape:
                raise ValidationError(f"channel {label!r} has {values.size} samples, expected {self.tau.size}")
            chans[str(label)] = values
        self.channels = chans

    @property
    def times(self):
        if self.gamma is None:
            raise ValidationError("no rate attached; only tau = Gamma t is known")
        return self.tau / self.gamma

    def __getitem__(self, label):
        return self.channels[label]

    def labels(self):
        return list(self.channels)

    def add(self, label, values):
        values = np.asarray(values)
        if values.shape != self.tau.shape:
            raise ValidationError(f"channel {label!r} has the wrong length")
        self.channels[str(label)] = values
        return self


def _columns(series):
    cols = [("t_gamma", series.tau)]
    for label, values in series.channels.items():
        if np.iscomplexobj(values):
            cols.append((f"{label}_re", values.real))
            cols.append((f"{label}_im", values.imag))
        else:
            cols.append((label, values))
    return cols


def _fmt(x):
    x = float(x)
    if x == 0:
        return "0"  # folds -0.0 so reruns cannot differ by a sign bit
    return "%.17g" % x


def format_csv(series):
    """CSV text: ``t_gamma,<channels>`` header, 17 significant digits, LF endings."""
    cols = _columns(series)
    out = io.StringIO()
    out.write(",".join(name for name, _ in cols) + "\n")
    for k in range(series.tau.size):
        out.write(",".join(_fmt(values[k]) for _, values in cols) + "\n")
    return out.getvalue()


def write_csv(series, path):
    return write_text(format_csv(series), path)


def format_table(header, rows):
    """CSV text for arbitrary columns using the same number format."""
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(v if isinstance(v, str) else _fmt(v) for v in row) + "\n")
    return out.getvalue()


def write_text(text, path):
    with open(os.fspath(path), "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
    return path
