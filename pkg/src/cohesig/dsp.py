"""Low-pass smoothing and discrete correlation of cohesion signals."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .exceptions import FilterWindowError, SignalLengthError, ZeroNormError
from .vectors import CohesionSignal


class FilterKind(str, enum.Enum):
    MOVING_AVERAGE = "moving_average"
    HAMMING = "hamming"


@dataclass(frozen=True)
class FilterSpec:
    """Symmetric FIR kernel with reflected edges.

    The kernel is symmetric, so filtering introduces no phase shift and
    valleys stay at the gap where they were measured.
    """

    kind: FilterKind = FilterKind.MOVING_AVERAGE
    window: int = 5
    edge: str = "reflect"

    def __post_init__(self):
        object.__setattr__(self, "kind", FilterKind(self.kind))
        if self.window < 1 or self.window % 2 == 0:
            raise ValueError(f"window must be an odd integer >= 1, got {self.window}")
        if self.edge != "reflect":
            raise ValueError(f"unsupported edge mode {self.edge!r}")

    def kernel(self) -> np.ndarray:
        if self.kind is FilterKind.HAMMING:
            k = np.hamming(self.window)
        else:
            k = np.ones(self.window)
        return k / k.sum()


def lowpass(signal: CohesionSignal, spec: FilterSpec | None = None) -> CohesionSignal:
    spec = spec or FilterSpec()
    x = np.asarray(signal.values, dtype=float)
    half = spec.window // 2
    if x.size == 0 or half > x.size - 1:
        raise FilterWindowError(
            f"window {spec.window} too large for signal of length {x.size} "
            f"(max {2 * x.size - 1})"
        )
    padded = np.pad(x, half, mode="reflect") if half else x
    kernel = spec.kernel()
    # symmetric kernel: convolution and correlation coincide
    out = np.convolve(padded, kernel, mode="valid")
    # a convex combination cannot leave the input range; clip rounding noise
    out = np.clip(out, x.min(), x.max())
    return replace(signal, values=tuple(out.tolist()), smoothed=True, filter=spec)


@dataclass(frozen=True)
class CorrelationResult:
    h: tuple[float, ...]
    r: float
    n_x: int
    n_y: int


def _as_values(x) -> list[float]:
    if isinstance(x, CohesionSignal):
        return list(x.values)
    return [float(v) for v in x]


def cross_correlate(x, y) -> CorrelationResult:
    """Discrete correlation ``h[j] = sum_k x[j+k] * y[k]`` with zero padding.

    ``r`` normalizes the zero-lag coefficient by the product of the input
    norms. For aligned parallel signals only ``r`` is meaningful.
    """
    xv, yv = _as_values(x), _as_values(y)
    nx, ny = len(xv), len(yv)
    if nx == 0 or ny == 0:
        raise ValueError("signals must be non-empty")
    sx = math.fsum(v * v for v in xv)
    sy = math.fsum(v * v for v in yv)
    if sx == 0 or sy == 0:
        raise ZeroNormError("cannot normalize correlation of an all-zero signal")
    # lags j >= 0 sit at the tail of numpy's full correlation; h[j] = 0 for j >= nx
    full = np.correlate(np.asarray(xv, dtype=float), np.asarray(yv, dtype=float), mode="full")
    h = [float(v) for v in full[ny - 1:]] + [0.0] * (ny - 1)
    h[0] = math.fsum(a * b for a, b in zip(xv, yv))  # exact zero-lag term for r
    r = h[0] / math.sqrt(sx * sy)
    return CorrelationResult(tuple(h), min(1.0, max(-1.0, r)), nx, ny)


@dataclass(frozen=True)
class CorrelationMatrix:
    labels: tuple[str, ...]
    cells: tuple[tuple[float, ...], ...]

    def __getitem__(self, key: tuple[str, str]) -> float:
        a, b = key
        return self.cells[self.labels.index(a)][self.labels.index(b)]

    def to_csv(self, decimals: int = 3) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["", *self.labels])
        for label, row in zip(self.labels, self.cells):
            w.writerow([label, *(f"{v:.{decimals}f}" for v in row)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"labels": list(self.labels), "cells": [list(r) for r in self.cells]}, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CorrelationMatrix":
        data = json.loads(text)
        return cls(tuple(data["labels"]), tuple(tuple(r) for r in data["cells"]))


def correlation_matrix(runs: Mapping[str, object] | Sequence[tuple[str, object]]) -> CorrelationMatrix:
    """Pairwise ``r`` for labelled, equally long signals."""
    items = list(runs.items()) if isinstance(runs, Mapping) else list(runs)
    if len(items) < 2:
        raise ValueError("need at least two runs")
    labels = [label for label, _ in items]
    if len(set(labels)) != len(labels):
        raise ValueError("run labels must be unique")
    values = [_as_values(sig) for _, sig in items]
    n0 = len(values[0])
    bad = [labels[i] for i, v in enumerate(values) if len(v) != n0]
    if bad:
        raise SignalLengthError(
            f"runs {bad} differ in length from {labels[0]!r} ({n0}); "
            "parallel documents must be aligned before correlation"
        )
    k = len(items)
    cells = [[0.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            cells[i][j] = cells[j][i] = cross_correlate(values[i], values[j]).r
    return CorrelationMatrix(tuple(labels), tuple(tuple(r) for r in cells))


def format_smoothed_csv(raw: CohesionSignal, smoothed: CohesionSignal, decimals: int = 6) -> str:
    if len(raw) != len(smoothed):
        raise SignalLengthError("raw and smoothed signals differ in length")
    lines = ["gap_index,raw,smoothed"]
    lines += [
        f"{i},{a:.{decimals}f},{b:.{decimals}f}"
        for i, (a, b) in enumerate(zip(raw.values, smoothed.values))
    ]
    return "\n".join(lines) + "\n"


def format_plot_data(signal: CohesionSignal, decimals: int = 6) -> str:
    return "".join(f"{i} {v:.{decimals}f}\n" for i, v in enumerate(signal.values))
