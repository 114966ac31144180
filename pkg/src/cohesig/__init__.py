"""Lexical cohesion signals for subtopic tiling and parallel-text comparison."""

__version__ = "0.1.0"

from .analysis import (
    AnalysisConfig, AnalysisMode, AnalyzedSegment, CorpusStats, analyze_document,
    apply_stoplist, char_ngrams, corpus_stats, lemmatize, tokenize,
)
from .corpusio import (
    AlignmentMap, Document, LemmaTable, ParseOptions, Segment, SegmentKind, Stoplist,
    align_documents, load_lemma_table, load_stoplist, parse_document, read_document,
    serialize_document,
)
from .dsp import (
    CorrelationMatrix, CorrelationResult, FilterKind, FilterSpec, correlation_matrix,
    cross_correlate, lowpass,
)
from .estimators import CohesionSignalTransformer, ParallelCorrelator, SubtopicSegmenter
from .exceptions import CohesigError
from .tiling import (
    BoundaryClass, BoundaryComparison, BoundarySet, agreement_score, compare_boundaries,
    detect_boundaries, repair_boundaries,
)
from .vectors import CohesionSignal, SegmentVector, build_vectors, cohesion_signal, cosine
