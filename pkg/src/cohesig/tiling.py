"""Subtopic boundaries at signal valleys and their comparison across versions."""

from __future__ import annotations

import enum
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

from .exceptions import ComparisonError
from .vectors import CohesionSignal


@dataclass(frozen=True)
class BoundarySet:
    doc_id: str
    gaps: tuple[int, ...]
    depths: Mapping[int, float] = field(default_factory=dict)
    min_depth: float = 0.0
    signal_length: int = 0

    def __post_init__(self):
        gaps = tuple(int(g) for g in self.gaps)
        if any(b <= a for a, b in zip(gaps, gaps[1:])):
            raise ValueError(f"gaps must be strictly ascending: {gaps}")
        if gaps and (gaps[0] < 0 or gaps[-1] >= self.signal_length):
            raise ValueError(f"gaps {gaps} outside signal of length {self.signal_length}")
        depths = {g: float(self.depths.get(g, 0.0)) for g in gaps}
        object.__setattr__(self, "gaps", gaps)
        object.__setattr__(self, "depths", MappingProxyType(depths))

    def __eq__(self, other):
        if not isinstance(other, BoundarySet):
            return NotImplemented
        return (self.doc_id, self.gaps, dict(self.depths), self.min_depth, self.signal_length) == (
            other.doc_id, other.gaps, dict(other.depths), other.min_depth, other.signal_length)

    def __len__(self) -> int:
        return len(self.gaps)

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "gaps": list(self.gaps),
            "depths": {str(g): d for g, d in self.depths.items()},
            "min_depth": self.min_depth,
            "signal_length": self.signal_length,
        }


def _values(signal) -> list[float]:
    return list(signal.values) if isinstance(signal, CohesionSignal) else [float(v) for v in signal]


def detect_boundaries(signal, min_depth: float = 0.0, doc_id: str | None = None) -> BoundarySet:
    """Find valleys of a cohesion signal and score their depth.

    A gap is a valley when the signal strictly drops into it and strictly
    rises after it; a flat valley floor is reported at its leftmost gap.
    Endpoints are never valleys. The depth of a valley is the climb to the
    nearest peak on the left plus the climb to the nearest peak on the right.
    """
    if min_depth < 0:
        raise ValueError("min_depth must be non-negative")
    v = _values(signal)
    if doc_id is None:
        doc_id = signal.doc_id if isinstance(signal, CohesionSignal) else ""
    n = len(v)
    gaps, depths = [], {}
    i = 1
    while i < n - 1:
        if v[i] < v[i - 1]:
            j = i
            while j + 1 < n and v[j + 1] == v[i]:
                j += 1
            if j + 1 < n and v[j + 1] > v[i]:
                depth = _climb(v, i, -1) + _climb(v, j, +1) - 2 * v[i]
                if depth >= min_depth:
                    gaps.append(i)
                    depths[i] = depth
            i = j + 1
        else:
            i += 1
    return BoundarySet(doc_id, tuple(gaps), depths, min_depth, n)


def _climb(v: Sequence[float], i: int, step: int) -> float:
    while 0 <= i + step < len(v) and v[i + step] >= v[i]:
        i += step
    return v[i]


class BoundaryClass(str, enum.Enum):
    CONFIRMED = "confirmed"
    WEAK_DISTORTION = "weak_distortion"
    UNCONFIRMED = "unconfirmed"


@dataclass(frozen=True)
class GapClassification:
    consensus_gap: int
    cls: BoundaryClass
    supporters: tuple[int | None, ...]  # per-document offset from consensus_gap
    strength: float

    def to_dict(self, doc_ids: Sequence[str]) -> dict:
        return {
            "consensus_gap": self.consensus_gap,
            "class": self.cls.value,
            "strength": self.strength,
            "supporters": dict(zip(doc_ids, self.supporters)),
        }


@dataclass(frozen=True)
class BoundaryComparison:
    sets: tuple[BoundarySet, ...]
    classifications: tuple[GapClassification, ...]
    agreement: tuple[tuple[float, ...], ...]
    tolerance_used: int

    @property
    def doc_ids(self) -> list[str]:
        return [s.doc_id for s in self.sets]

    def to_dict(self) -> dict:
        ids = self.doc_ids
        return {
            "documents": [s.to_dict() for s in self.sets],
            "tolerance": self.tolerance_used,
            "clusters": [c.to_dict(ids) for c in self.classifications],
            "agreement": {"labels": ids, "cells": [list(r) for r in self.agreement]},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def table(self) -> str:
        """Fixed-width view: one row per clustered gap, one column per document."""
        ids = self.doc_ids
        width = max(8, *(len(i) for i in ids))
        head = f"{'gap':>5}  " + "  ".join(f"{i:^{width}}" for i in ids) + f"  {'class':<15} strength"
        lines = [head, "-" * len(head)]
        for c in self.classifications:
            marks = []
            for off in c.supporters:
                mark = "." if off is None else ("|" if off == 0 else f"{off:+d}")
                marks.append(f"{mark:^{width}}")
            lines.append(f"{c.consensus_gap:>5}  " + "  ".join(marks) + f"  {c.cls.value:<15} {c.strength:.3f}")
        return "\n".join(lines) + "\n"


def _check_lengths(sets: Sequence[BoundarySet]) -> None:
    lengths = {s.signal_length for s in sets}
    if len(lengths) > 1:
        raise ComparisonError(
            "boundary sets come from signals of different lengths: "
            + ", ".join(f"{s.doc_id}={s.signal_length}" for s in sets)
        )


def _cluster(sets: Sequence[BoundarySet], tolerance: int) -> list[dict[int, int]]:
    """Group gaps of different documents that lie within ``tolerance``.

    The most widely shared unassigned gap (earliest on ties) seeds each
    cluster; every other document contributes its nearest unassigned gap
    within reach. Returns one ``{doc_position: gap}`` mapping per cluster.
    """
    remaining = [set(s.gaps) for s in sets]
    clusters = []
    while any(remaining):
        votes = Counter(g for r in remaining for g in r)
        seed = min(votes, key=lambda g: (-votes[g], g))
        members = {}
        for d, r in enumerate(remaining):
            near = [g for g in r if abs(g - seed) <= tolerance]
            if near:
                g = min(near, key=lambda g: (abs(g - seed), g))
                members[d] = g
                r.discard(g)
        clusters.append(members)
    return clusters


def _classify(members: dict[int, int], n_docs: int) -> GapClassification:
    votes = Counter(members.values())
    consensus = min(votes, key=lambda g: (-votes[g], g))
    offsets = tuple(members[d] - consensus if d in members else None for d in range(n_docs))
    exact = sum(1 for o in offsets if o == 0)
    # exact support counts 1, off-by-one 0.5, generally 1 / (1 + distance)
    strength = sum(1.0 / (1 + abs(o)) for o in offsets if o is not None) / n_docs
    if exact == n_docs:
        cls = BoundaryClass.CONFIRMED
        strength = 1.0
    elif 2 * exact > n_docs and all(o is not None and abs(o) <= 1 for o in offsets):
        cls = BoundaryClass.WEAK_DISTORTION
    else:
        cls = BoundaryClass.UNCONFIRMED
    return GapClassification(consensus, cls, offsets, strength)


def compare_boundaries(
    sets: Sequence[BoundarySet], tolerance: int = 1, alpha: float = 0.25
) -> BoundaryComparison:
    if len(sets) < 2:
        raise ValueError("need at least two boundary sets")
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    _check_lengths(sets)
    classes = tuple(sorted(
        (_classify(m, len(sets)) for m in _cluster(sets, tolerance)),
        key=lambda c: c.consensus_gap,
    ))
    k = len(sets)
    agreement = [[1.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            agreement[i][j] = agreement[j][i] = agreement_score(sets[i], sets[j], alpha)
    return BoundaryComparison(tuple(sets), classes, tuple(tuple(r) for r in agreement), tolerance)


def agreement_score(a: BoundarySet, b: BoundarySet, alpha: float = 0.25) -> float:
    """Matched-boundary F-score with a tolerance that grows with tile length.

    Longer tiles leave more room for a boundary to drift, so the matching
    window is ``alpha`` times the mean tile length of both segmentations.
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must be in (0, 1]")
    _check_lengths([a, b])
    if not a.gaps and not b.gaps:
        return 1.0
    mean_tile = 2 * a.signal_length / (len(a.gaps) + len(b.gaps) + 2)
    window = max(1, math.floor(alpha * mean_tile))
    candidates = sorted(
        (abs(ga - gb), ga, gb) for ga in a.gaps for gb in b.gaps if abs(ga - gb) <= window
    )
    used_a, used_b = set(), set()
    for _, ga, gb in candidates:
        if ga not in used_a and gb not in used_b:
            used_a.add(ga)
            used_b.add(gb)
    return 2 * len(used_a) / (len(a.gaps) + len(b.gaps))


def repair_boundaries(comparison: BoundaryComparison) -> list[BoundarySet]:
    """Snap near-miss boundaries of weak distortions onto the consensus gap."""
    moves: list[dict[int, int]] = [{} for _ in comparison.sets]
    for c in comparison.classifications:
        if c.cls is not BoundaryClass.WEAK_DISTORTION:
            continue
        for d, off in enumerate(c.supporters):
            if off:
                moves[d][c.consensus_gap + off] = c.consensus_gap
    repaired = []
    for s, move in zip(comparison.sets, moves):
        if not move:
            repaired.append(s)
            continue
        depths: dict[int, float] = {}
        for g in s.gaps:
            target = move.get(g, g)
            depths[target] = max(depths.get(target, 0.0), s.depths[g])
        repaired.append(BoundarySet(s.doc_id, tuple(sorted(depths)), depths, s.min_depth, s.signal_length))
    return repaired
