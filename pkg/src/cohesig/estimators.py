"""scikit-learn compatible wrappers around the cohesion pipeline.

Documents go in, cohesion signals come out of
:class:`CohesionSignalTransformer`; :class:`SubtopicSegmenter` turns signals
into boundary gaps and :class:`ParallelCorrelator` scores aligned signals
against each other. Signals of different documents generally differ in
length, so transforms return lists of 1-D arrays rather than a 2-D matrix.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_documents, check_signals
from .analysis import AnalysisConfig, analyze_document
from .dsp import CorrelationMatrix, FilterSpec, correlation_matrix, lowpass
from .tiling import BoundarySet, compare_boundaries, detect_boundaries
from .vectors import CohesionSignal, build_vectors, cohesion_signal


class CohesionSignalTransformer(TransformerMixin, BaseEstimator):
    """Map each document to its (optionally smoothed) cohesion signal.

    Term weights depend only on the document being transformed, so ``fit``
    merely validates the parameters.

    Parameters
    ----------
    mode : {"surface", "lemmatized", "char_ngram"}
    n : int
        Character n-gram size, used in ``char_ngram`` mode.
    lemma_table : LemmaTable, optional
        Required in ``lemmatized`` mode.
    stoplist : Stoplist, optional
        Applied to tokens when given.
    smooth : bool
        Low-pass filter the signal.
    filter_kind : {"moving_average", "hamming"}
    window : int
        Odd filter length in gaps.
    """

    def __init__(self, mode="char_ngram", n=3, pad="_", lemma_table=None, stoplist=None,
                 smooth=True, filter_kind="moving_average", window=5):
        self.mode = mode
        self.n = n
        self.pad = pad
        self.lemma_table = lemma_table
        self.stoplist = stoplist
        self.smooth = smooth
        self.filter_kind = filter_kind
        self.window = window

    def fit(self, X=None, y=None):
        self.config_ = AnalysisConfig(
            mode=self.mode, n=self.n, pad=self.pad, lemma_table=self.lemma_table,
            stoplist=self.stoplist, use_stoplist=self.stoplist is not None,
        )
        self.filter_spec_ = FilterSpec(self.filter_kind, self.window) if self.smooth else None
        return self

    def transform_signals(self, X) -> list[CohesionSignal]:
        check_is_fitted(self, "config_")
        out = []
        for doc in check_documents(X):
            sig = cohesion_signal(build_vectors(analyze_document(doc, self.config_)), doc.id)
            out.append(lowpass(sig, self.filter_spec_) if self.filter_spec_ else sig)
        return out

    def transform(self, X) -> list[np.ndarray]:
        return [np.asarray(s.values) for s in self.transform_signals(X)]


class SubtopicSegmenter(BaseEstimator):
    """Boundary gaps at the valleys of cohesion signals."""

    def __init__(self, min_depth=0.0):
        self.min_depth = min_depth

    def fit(self, X=None, y=None):
        if self.min_depth < 0:
            raise ValueError("min_depth must be non-negative")
        self.n_features_in_ = None
        return self

    def boundary_sets(self, X) -> list[BoundarySet]:
        check_is_fitted(self, "n_features_in_")
        return [detect_boundaries(s, self.min_depth, doc_id=f"doc{i}")
                for i, s in enumerate(check_signals(X))]

    def predict(self, X) -> list[np.ndarray]:
        return [np.asarray(b.gaps, dtype=int) for b in self.boundary_sets(X)]

    def fit_predict(self, X, y=None) -> list[np.ndarray]:
        return self.fit(X).predict(X)


class ParallelCorrelator(BaseEstimator):
    """Normalized correlation and boundary agreement of aligned signals.

    After ``fit``, ``matrix_`` holds the pairwise correlation matrix and
    ``comparison_`` the cross-version boundary classification.
    """

    def __init__(self, labels=None, min_depth=0.0, tolerance=1, alpha=0.25):
        self.labels = labels
        self.min_depth = min_depth
        self.tolerance = tolerance
        self.alpha = alpha

    def fit(self, X, y=None):
        signals = check_signals(X, same_length=True, min_count=2)
        labels = list(self.labels) if self.labels is not None else [f"run{i}" for i in range(len(signals))]
        if len(labels) != len(signals):
            raise ValueError(f"{len(labels)} labels for {len(signals)} signals")
        self.matrix_: CorrelationMatrix = correlation_matrix(list(zip(labels, signals)))
        sets = [detect_boundaries(s, self.min_depth, doc_id=lab) for lab, s in zip(labels, signals)]
        self.comparison_ = compare_boundaries(sets, self.tolerance, self.alpha)
        return self

    def score(self, X=None, y=None) -> float:
        """Mean off-diagonal correlation (refits when ``X`` is given)."""
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "matrix_")
        cells = np.asarray(self.matrix_.cells)
        k = cells.shape[0]
        return float((cells.sum() - np.trace(cells)) / (k * (k - 1)))
