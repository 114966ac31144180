"""idf.tf segment vectors and the cohesion signal over adjacent segments.

Sums are taken with :func:`math.fsum`, which is exactly rounded and therefore
independent of term order. Renaming every term of a document through a
bijection yields a bit-identical signal.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

from .analysis import AnalyzedSegment
from .exceptions import FormatError, TooFewSegmentsError


@dataclass(frozen=True)
class SegmentVector:
    index: int
    weights: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for term in sorted(self.weights):
            w = self.weights[term]
            if not math.isfinite(w) or w < 0:
                raise ValueError(f"invalid weight {w!r} for term {term!r}")
            if w > 0:
                clean[term] = float(w)
        object.__setattr__(self, "weights", MappingProxyType(clean))
        object.__setattr__(self, "_sumsq", math.fsum(w * w for w in clean.values()))

    def __eq__(self, other):
        if not isinstance(other, SegmentVector):
            return NotImplemented
        return self.index == other.index and dict(self.weights) == dict(other.weights)

    def __bool__(self) -> bool:
        return bool(self.weights)

    @property
    def norm(self) -> float:
        return math.sqrt(self._sumsq)


@dataclass(frozen=True)
class CohesionSignal:
    """Similarity of each pair of adjacent segments.

    ``values[i]`` belongs to gap ``i``, between segments ``i`` and ``i + 1``.
    ``degenerate[i]`` marks gaps where one side had no weighted terms.
    """

    doc_id: str
    values: tuple[float, ...]
    degenerate: tuple[bool, ...] = ()
    smoothed: bool = False
    filter: object | None = None  # FilterSpec once smoothed

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        flags = tuple(bool(f) for f in self.degenerate) or (False,) * len(self.values)
        if len(flags) != len(self.values):
            raise ValueError("degenerate flags must match values")
        object.__setattr__(self, "degenerate", flags)

    def __len__(self) -> int:
        return len(self.values)


def build_vectors(analyzed: Sequence[AnalyzedSegment]) -> list[SegmentVector]:
    """Weight each term by ``tf * ln(N / df)`` over the segments of one document.

    Terms occurring in every segment get weight zero and are left out.
    """
    n = len(analyzed)
    if n < 2:
        raise TooFewSegmentsError(f"need at least 2 segments, got {n}")
    df: Counter = Counter()
    for seg in analyzed:
        df.update(seg.terms.keys())
    idf = {t: math.log(n / d) for t, d in df.items()}
    return [
        SegmentVector(seg.index, {t: c * idf[t] for t, c in seg.terms.items() if idf[t] > 0})
        for seg in analyzed
    ]


def cosine(x: SegmentVector, y: SegmentVector) -> float:
    """Cosine of the angle between two weight vectors; 0.0 if either is empty."""
    if not x or not y:
        return 0.0
    xw, yw = x.weights, y.weights
    if len(xw) > len(yw):
        xw, yw = yw, xw
    dot = math.fsum(w * yw[t] for t, w in xw.items() if t in yw)
    return min(1.0, max(0.0, dot / math.sqrt(x._sumsq * y._sumsq)))


def cohesion_signal(vectors: Sequence[SegmentVector], doc_id: str = "") -> CohesionSignal:
    if len(vectors) < 2:
        raise TooFewSegmentsError(f"need at least 2 segments, got {len(vectors)}")
    pairs = list(zip(vectors, vectors[1:]))
    return CohesionSignal(
        doc_id,
        tuple(cosine(a, b) for a, b in pairs),
        tuple(not a or not b for a, b in pairs),
    )


def _fmt(value: float, decimals: int | None) -> str:
    return repr(value) if decimals is None else f"{value:.{decimals}f}"


def format_signal_csv(signal: CohesionSignal, decimals: int | None = 6) -> str:
    """Render ``gap_index,value,degenerate``; ``decimals=None`` keeps full precision."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["gap_index", "value", "degenerate"])
    for i, (v, d) in enumerate(zip(signal.values, signal.degenerate)):
        w.writerow([i, _fmt(v, decimals), int(d)])
    return buf.getvalue()


def parse_signal_csv(text: str, doc_id: str = "") -> CohesionSignal:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["gap_index", "value", "degenerate"]:
        raise FormatError(f"unexpected signal CSV header {header!r}")
    values, flags = [], []
    for row in reader:
        if not row:
            continue
        try:
            idx, value, flag = int(row[0]), float(row[1]), int(row[2])
        except (ValueError, IndexError) as exc:
            raise FormatError(f"bad signal row {row!r}") from exc
        if idx != len(values):
            raise FormatError(f"gap indices must be contiguous, got {idx} at row {len(values)}")
        values.append(value)
        flags.append(bool(flag))
    return CohesionSignal(doc_id, tuple(values), tuple(flags))
