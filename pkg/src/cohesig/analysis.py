"""Index-term extraction: tokens, lemmas and character n-grams."""

from __future__ import annotations

import enum
import functools
import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpusio import Document, LemmaTable, Segment, Stoplist

_JOINERS = frozenset("-'’")


class AnalysisMode(str, enum.Enum):
    SURFACE = "surface"
    LEMMATIZED = "lemmatized"
    CHAR_NGRAM = "char_ngram"


@dataclass(frozen=True)
class AnalysisConfig:
    mode: AnalysisMode = AnalysisMode.SURFACE
    n: int = 3
    pad: str = "_"
    use_stoplist: bool = False
    lemma_table: LemmaTable | None = None
    stoplist: Stoplist | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", AnalysisMode(self.mode))
        if not 2 <= self.n <= 8:
            raise ValueError(f"n-gram size must be in [2, 8], got {self.n}")
        if len(self.pad) != 1:
            raise ValueError("pad must be a single character")
        if self.mode is AnalysisMode.LEMMATIZED and self.lemma_table is None:
            raise ValueError("lemmatized mode requires a lemma table")
        if self.use_stoplist and self.stoplist is None:
            raise ValueError("use_stoplist requires a stoplist")

    def describe(self) -> dict:
        out = {"mode": self.mode.value, "use_stoplist": self.use_stoplist}
        if self.mode is AnalysisMode.CHAR_NGRAM:
            out.update(n=self.n, pad=self.pad)
        return out


@dataclass(frozen=True)
class AnalyzedSegment:
    index: int
    terms: Counter
    token_count: int


@dataclass(frozen=True)
class CorpusStats:
    tokens: int
    surface_types: int
    analyzed_types: int


def _is_letter(ch: str) -> bool:
    # combining marks are kept so decomposed accented letters survive
    return unicodedata.category(ch)[0] in "LM"


@functools.lru_cache(maxsize=1 << 16)
def _clean_token(raw: str) -> str:
    if raw.isalpha():
        return raw.lower()
    kept = "".join(ch for ch in raw if _is_letter(ch) or ch in _JOINERS)
    return kept.strip("".join(_JOINERS)).lower()


def tokenize(segment: Segment | str) -> list[str]:
    """Lowercase word tokens with numbers and punctuation removed.

    Hyphens and apostrophes survive only inside a word, so ``"bank's"`` and
    ``"Öl-Preis"`` are single tokens while ``"1987"`` and ``"2.5%"`` vanish.
    """
    text = segment.text if isinstance(segment, Segment) else segment
    tokens = []
    for raw in text.split():
        tok = _clean_token(raw)
        if tok:
            tokens.append(tok)
    return tokens


def lemmatize(tokens: Iterable[str], table: LemmaTable) -> list[str]:
    entries = table.entries
    return [entries.get(t, t) for t in tokens]


def char_ngrams(tokens: Iterable[str], n: int = 3, pad: str = "_") -> Counter:
    if not 2 <= n <= 8:
        raise ValueError(f"n-gram size must be in [2, 8], got {n}")
    grams: Counter = Counter()
    for tok in tokens:
        padded = f"{pad}{tok}{pad}"
        if len(padded) <= n:
            grams[padded] += 1
        else:
            grams.update(padded[i:i + n] for i in range(len(padded) - n + 1))
    return grams


def apply_stoplist(terms, stoplist: Stoplist):
    """Drop stoplisted members from a token sequence or a term Counter."""
    if isinstance(terms, Counter):
        return Counter({t: c for t, c in terms.items() if t not in stoplist})
    return [t for t in terms if t not in stoplist]


def _map_tokens(tokens: Sequence[str], cfg: AnalysisConfig) -> Counter:
    if cfg.use_stoplist:
        tokens = apply_stoplist(tokens, cfg.stoplist)
    if cfg.mode is AnalysisMode.LEMMATIZED:
        return Counter(lemmatize(tokens, cfg.lemma_table))
    if cfg.mode is AnalysisMode.CHAR_NGRAM:
        return char_ngrams(tokens, cfg.n, cfg.pad)
    return Counter(tokens)


def analyze_segment(segment: Segment, cfg: AnalysisConfig) -> AnalyzedSegment:
    tokens = tokenize(segment)
    return AnalyzedSegment(segment.index, _map_tokens(tokens, cfg), len(tokens))


def analyze_document(doc: Document, cfg: AnalysisConfig) -> list[AnalyzedSegment]:
    return [analyze_segment(seg, cfg) for seg in doc.segments]


def corpus_stats(doc: Document, cfg: AnalysisConfig) -> CorpusStats:
    n_tokens = 0
    surface: set[str] = set()
    analyzed: set[str] = set()
    for seg in doc.segments:
        tokens = tokenize(seg)
        n_tokens += len(tokens)
        surface.update(tokens)
        analyzed.update(_map_tokens(tokens, cfg))
    return CorpusStats(n_tokens, len(surface), len(analyzed))
