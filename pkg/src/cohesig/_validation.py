"""Input checks shared by the estimator wrappers."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .corpusio import Document, ParseOptions, parse_document
from .exceptions import SignalLengthError
from .vectors import CohesionSignal


def check_documents(X) -> list[Document]:
    """Accept a Document, a string, or a sequence of either."""
    if isinstance(X, (Document, str)):
        X = [X]
    docs = []
    for i, item in enumerate(X):
        if isinstance(item, Document):
            docs.append(item)
        elif isinstance(item, str):
            docs.append(parse_document(item, ParseOptions(doc_id=f"doc{i}")))
        else:
            raise TypeError(f"expected Document or str at position {i}, got {type(item).__name__}")
    if not docs:
        raise ValueError("no documents given")
    return docs


def check_signal(x) -> np.ndarray:
    if isinstance(x, CohesionSignal):
        x = x.values
    return check_array(np.asarray(x, dtype=float), ensure_2d=False, ensure_min_samples=1).ravel()


def check_signals(X, *, same_length: bool = False, min_count: int = 1) -> list[np.ndarray]:
    if isinstance(X, CohesionSignal) or (isinstance(X, np.ndarray) and X.ndim == 1):
        X = [X]
    signals = [check_signal(x) for x in X]
    if len(signals) < min_count:
        raise ValueError(f"need at least {min_count} signals, got {len(signals)}")
    if same_length and len({s.size for s in signals}) > 1:
        raise SignalLengthError(f"signals differ in length: {[s.size for s in signals]}")
    return signals
