"""Reading and writing documents, lemma tables, stoplists and alignments.

The canonical document format is UTF-8 plain text in which segments are
separated by one or more blank lines. A segment whose first line starts with
the heading marker (``"== "`` by default) is a heading, everything else is a
paragraph.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .exceptions import EmptyDocumentError, FormatError, LemmaTableParseError

DEFAULT_HEADING_MARKER = "== "
HEURISTIC_HEADING_MAX_CHARS = 60
_SENTENCE_END = (".", "!", "?", ":", ";", ",")


class SegmentKind(str, enum.Enum):
    HEADING = "heading"
    PARAGRAPH = "paragraph"


@dataclass(frozen=True)
class Segment:
    index: int
    kind: SegmentKind
    text: str

    @property
    def char_length(self) -> int:
        return len(self.text)

    @property
    def is_heading(self) -> bool:
        return self.kind is SegmentKind.HEADING


@dataclass(frozen=True)
class Document:
    id: str
    language: str
    segments: tuple[Segment, ...]
    source: str = ""

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def headings(self) -> list[Segment]:
        return [s for s in self.segments if s.is_heading]


@dataclass(frozen=True)
class ParseOptions:
    """How raw text is split into segments.

    ``heuristic_headings`` additionally treats a single short line without
    terminal punctuation as a heading, for texts that carry no markers.
    """

    heading_marker: str = DEFAULT_HEADING_MARKER
    heuristic_headings: bool = False
    doc_id: str = "doc"
    language: str = ""
    source: str = ""


def parse_document(raw_text: str, options: ParseOptions | None = None) -> Document:
    """Split ``raw_text`` into headings and paragraphs.

    Raises
    ------
    EmptyDocumentError
        If the text contains nothing but whitespace.
    """
    options = options or ParseOptions()
    blocks: list[list[str]] = []
    current: list[str] = []
    for line in raw_text.splitlines():
        if line.strip():
            current.append(line)
        elif current:
            blocks.append(current)
            current = []
    if current:
        blocks.append(current)
    if not blocks:
        raise EmptyDocumentError(f"document {options.doc_id!r} is empty")

    marker = options.heading_marker
    segments = []
    for index, lines in enumerate(blocks):
        kind = SegmentKind.PARAGRAPH
        if marker and lines[0].startswith(marker):
            kind = SegmentKind.HEADING
            lines = [lines[0][len(marker):], *lines[1:]]
        elif options.heuristic_headings and _looks_like_heading(lines):
            kind = SegmentKind.HEADING
        segments.append(Segment(index, kind, "\n".join(lines)))
    return Document(options.doc_id, options.language, tuple(segments), options.source)


def _looks_like_heading(lines: list[str]) -> bool:
    text = lines[0].strip()
    return (
        len(lines) == 1
        and len(text) <= HEURISTIC_HEADING_MAX_CHARS
        and not text.endswith(_SENTENCE_END)
    )


def serialize_document(doc: Document, heading_marker: str = DEFAULT_HEADING_MARKER) -> str:
    parts = [
        (heading_marker + s.text) if s.is_heading else s.text for s in doc.segments
    ]
    return "\n\n".join(parts) + "\n"


def read_document(
    path: str | Path,
    *,
    language: str = "",
    doc_id: str | None = None,
    heading_marker: str = DEFAULT_HEADING_MARKER,
    heuristic_headings: bool = False,
) -> Document:
    path = Path(path)
    opts = ParseOptions(
        heading_marker=heading_marker,
        heuristic_headings=heuristic_headings,
        doc_id=doc_id if doc_id is not None else path.stem,
        language=language,
        source=str(path),
    )
    return parse_document(path.read_text(encoding="utf-8"), opts)


# -- lemma tables and stoplists ----------------------------------------------


@dataclass(frozen=True)
class LemmaTable:
    """Unambiguous word form to lemma mapping.

    ``dropped`` counts the forms that were excluded at load time because the
    source listed them with more than one lemma.
    """

    entries: Mapping[str, str] = field(default_factory=dict)
    dropped: int = 0

    def __post_init__(self):
        for form, lemma in self.entries.items():
            if not form or not lemma or form != form.lower() or lemma != lemma.lower():
                raise ValueError(f"invalid lemma entry {form!r} -> {lemma!r}")
        object.__setattr__(self, "entries", MappingProxyType(dict(sorted(self.entries.items()))))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, form: str) -> bool:
        return form in self.entries

    def __getitem__(self, form: str) -> str:
        return self.entries[form]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LemmaTable):
            return NotImplemented
        return dict(self.entries) == dict(other.entries) and self.dropped == other.dropped

    def __hash__(self) -> int:
        return hash((tuple(self.entries.items()), self.dropped))


def load_lemma_table(tsv_text: str) -> LemmaTable:
    """Parse ``form<TAB>lemma`` lines, dropping ambiguous forms."""
    lemmas: dict[str, set[str]] = {}
    for line_no, line in enumerate(tsv_text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.rstrip("\r").split("\t")
        if len(fields) != 2:
            raise LemmaTableParseError(line_no, f"expected 2 tab-separated fields, got {len(fields)}")
        form, lemma = (f.strip().lower() for f in fields)
        if not form or not lemma:
            raise LemmaTableParseError(line_no, "empty form or lemma")
        lemmas.setdefault(form, set()).add(lemma)
    entries = {form: next(iter(ls)) for form, ls in lemmas.items() if len(ls) == 1}
    return LemmaTable(entries, dropped=len(lemmas) - len(entries))


def read_lemma_table(path: str | Path) -> LemmaTable:
    return load_lemma_table(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class Stoplist:
    forms: frozenset[str] = frozenset()

    def __post_init__(self):
        if any(not f for f in self.forms):
            raise ValueError("stoplist contains an empty form")
        object.__setattr__(self, "forms", frozenset(self.forms))

    def __contains__(self, form: str) -> bool:
        return form in self.forms

    def __len__(self) -> int:
        return len(self.forms)


def load_stoplist(text: str) -> Stoplist:
    return Stoplist(frozenset(line.strip().lower() for line in text.splitlines() if line.strip()))


def read_stoplist(path: str | Path) -> Stoplist:
    return load_stoplist(Path(path).read_text(encoding="utf-8"))


# -- segment alignment -------------------------------------------------------


class DivergenceKind(str, enum.Enum):
    COUNT_MISMATCH = "count-mismatch"
    SIZE_MISMATCH = "size-mismatch"


@dataclass(frozen=True)
class Divergence:
    position: int  # index into AlignmentMap.pairs
    kind: DivergenceKind
    detail: str


@dataclass(frozen=True)
class AlignmentRow:
    a: range
    b: range
    status: str  # "ok" or "divergent"


@dataclass(frozen=True)
class AlignmentMap:
    pairs: tuple[tuple[range, range], ...]
    divergences: tuple[Divergence, ...] = ()

    def rows(self) -> list[AlignmentRow]:
        bad = {d.position for d in self.divergences}
        return [
            AlignmentRow(a, b, "divergent" if i in bad else "ok")
            for i, (a, b) in enumerate(self.pairs)
        ]

    @property
    def is_clean(self) -> bool:
        return not self.divergences


def _size_ratio(x: int, y: int) -> float:
    if x == y:
        return 1.0
    return min(x, y) / max(x, y)


def _compatible(a: Segment, b: Segment, size_tolerance: float) -> bool:
    return _size_ratio(a.char_length, b.char_length) >= 1.0 - size_tolerance


def _match_headings(
    ha: Sequence[Segment], hb: Sequence[Segment], size_tolerance: float
) -> list[tuple[int, int]]:
    """Longest common subsequence of size-compatible headings.

    Ties between equally long subsequences prefer the earliest matches.
    """
    n, m = len(ha), len(hb)
    # suffix table so the forward walk can greedily take the earliest match
    best = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            take = best[i + 1][j + 1] + 1 if _compatible(ha[i], hb[j], size_tolerance) else 0
            best[i][j] = max(take, best[i + 1][j], best[i][j + 1])
    matches = []
    i = j = 0
    while i < n and j < m:
        if _compatible(ha[i], hb[j], size_tolerance) and best[i][j] == best[i + 1][j + 1] + 1:
            matches.append((ha[i].index, hb[j].index))
            i += 1
            j += 1
        elif best[i + 1][j] >= best[i][j + 1]:
            i += 1
        else:
            j += 1
    return matches


def _merge_cost(long_groups: list[list[int]], short_lengths: list[int]) -> float:
    return sum(1.0 - _size_ratio(sum(g), s) for g, s in zip(long_groups, short_lengths))


def _propose_merge(long_lengths: list[int], n_short: int, short_lengths: list[int]) -> list[range]:
    """Greedily join adjacent units until both sides have ``n_short`` units.

    Each step applies the single adjacent merge that minimizes the summed
    ``1 - shorter/longer`` length mismatch of the resulting 1:1 pairing.
    Returns ranges of local positions on the longer side.
    """
    groups = [[i] for i in range(len(long_lengths))]
    while len(groups) > n_short:
        best_cost, best_k = None, 0
        for k in range(len(groups) - 1):
            trial = groups[:k] + [groups[k] + groups[k + 1]] + groups[k + 2:]
            cost = _merge_cost([[long_lengths[i] for i in g] for g in trial], short_lengths)
            if best_cost is None or cost < best_cost - 1e-12:
                best_cost, best_k = cost, k
        groups[best_k:best_k + 2] = [groups[best_k] + groups[best_k + 1]]
    return [range(g[0], g[-1] + 1) for g in groups]


def _align_region(a_idx: range, b_idx: range, a: Document, b: Document) -> list[tuple[range, range]]:
    if len(a_idx) == len(b_idx):
        return [(range(i, i + 1), range(j, j + 1)) for i, j in zip(a_idx, b_idx)]
    if len(a_idx) > len(b_idx):
        local = _propose_merge(
            [a.segments[i].char_length for i in a_idx],
            len(b_idx),
            [b.segments[j].char_length for j in b_idx],
        )
        return [
            (range(a_idx[r.start], a_idx[r.stop - 1] + 1), range(j, j + 1))
            for r, j in zip(local, b_idx)
        ]
    return [(ra, rb) for rb, ra in _align_region(b_idx, a_idx, b, a)]


def align_documents(a: Document, b: Document, size_tolerance: float = 0.4) -> AlignmentMap:
    """Align two language versions of a document at the segment level.

    Headings are matched first (in order, by size compatibility); the
    paragraphs between matched headings are paired 1:1, or joined by a
    greedy merge proposal when the counts differ. Every pair that is not a
    clean 1:1 match is reported as a divergence for manual review.
    """
    if not a.segments or not b.segments:
        raise EmptyDocumentError("cannot align an empty document")
    if size_tolerance <= 0:
        raise ValueError("size_tolerance must be positive")

    anchors = _match_headings(a.headings, b.headings, size_tolerance)
    pairs: list[tuple[range, range]] = []
    flagged: dict[int, Divergence] = {}

    def flag(k: int, kind: DivergenceKind, detail: str) -> None:
        flagged.setdefault(k, Divergence(k, kind, detail))

    a_pos = b_pos = 0
    carry: tuple[int, int] | None = None
    for ai, bi in [*anchors, (len(a), len(b))]:
        region_a, region_b = range(a_pos, ai), range(b_pos, bi)
        detail = f"{len(region_a)} segments in A vs {len(region_b)} in B"
        if len(region_a) and len(region_b):
            first = len(pairs)
            pairs.extend(_align_region(region_a, region_b, a, b))
            for k in range(first, len(pairs)):
                pa, pb = pairs[k]
                if len(pa) != 1 or len(pb) != 1:
                    flag(k, DivergenceKind.COUNT_MISMATCH,
                         f"{detail}; proposed A[{_fmt_range(pa)}] <-> B[{_fmt_range(pb)}]")
        elif len(region_a) or len(region_b):
            # segments without any counterpart are folded into a neighbouring pair
            if pairs:
                pa, pb = pairs[-1]
                pairs[-1] = (range(pa.start, ai), range(pb.start, bi))
                flag(len(pairs) - 1, DivergenceKind.COUNT_MISMATCH, detail + " without counterpart")
            else:
                carry = (a_pos, b_pos)
        if ai < len(a) and bi < len(b):
            start_a, start_b = carry or (ai, bi)
            pairs.append((range(start_a, ai + 1), range(start_b, bi + 1)))
            if carry:
                flag(len(pairs) - 1, DivergenceKind.COUNT_MISMATCH, detail + " without counterpart")
                carry = None
        a_pos, b_pos = ai + 1, bi + 1

    for k, (pa, pb) in enumerate(pairs):
        if len(pa) == 1 and len(pb) == 1 and k not in flagged:
            sa, sb = a.segments[pa.start], b.segments[pb.start]
            if not sa.is_heading and not _compatible(sa, sb, size_tolerance):
                flag(k, DivergenceKind.SIZE_MISMATCH, f"lengths {sa.char_length} vs {sb.char_length}")
    return AlignmentMap(tuple(pairs), tuple(flagged[k] for k in sorted(flagged)))


def _fmt_range(r: range) -> str:
    return f"{r.start}-{r.stop - 1}"


def format_alignment(alignment: AlignmentMap | Iterable[AlignmentRow]) -> str:
    rows = alignment.rows() if isinstance(alignment, AlignmentMap) else alignment
    return "".join(f"{_fmt_range(r.a)}\t{_fmt_range(r.b)}\t{r.status}\n" for r in rows)


_RANGE_RE = re.compile(r"^(\d+)-(\d+)$")


def parse_alignment(tsv_text: str) -> list[AlignmentRow]:
    rows = []
    for line_no, line in enumerate(tsv_text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3 or fields[2] not in ("ok", "divergent"):
            raise FormatError(f"alignment line {line_no}: malformed row {line!r}")
        ranges = []
        for f in fields[:2]:
            m = _RANGE_RE.match(f)
            if not m or int(m[2]) < int(m[1]):
                raise FormatError(f"alignment line {line_no}: bad range {f!r}")
            ranges.append(range(int(m[1]), int(m[2]) + 1))
        rows.append(AlignmentRow(ranges[0], ranges[1], fields[2]))
    return rows
