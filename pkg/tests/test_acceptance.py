"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
happen; they are also repeated in the terminal summary.
"""

import contextlib
import itertools
import random
import statistics
import time

import numpy as np
import pytest

from cohesig.analysis import AnalysisConfig, analyze_document, tokenize
from cohesig.cli import main
from cohesig.corpusio import (
    ParseOptions, align_documents, format_alignment, load_lemma_table, parse_alignment,
    parse_document, serialize_document,
)
from cohesig.dsp import FilterKind, FilterSpec, correlation_matrix, cross_correlate, lowpass
from cohesig.estimators import CohesionSignalTransformer, ParallelCorrelator
from cohesig.synth import (
    INFLECTED_DE, INFLECTED_EN, SURFACE_DE, SURFACE_EN, SURFACE_FR, demo_corpus, lemma_table_tsv,
    make_skeleton, render_document, render_tokens, replace_fraction,
)
from cohesig.tiling import BoundaryClass, BoundarySet, compare_boundaries, detect_boundaries, repair_boundaries
from cohesig.vectors import CohesionSignal, build_vectors, cohesion_signal, format_signal_csv, parse_signal_csv

from oracles import correlation_h, tfidf_cosine_signal, valleys

RESULTS: list[str] = []


@contextlib.contextmanager
def criterion(number, title):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"criterion {number} FAIL  {title}: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        RESULTS.append(line)
        print(line)
        raise
    line = f"criterion {number} PASS  {title} ({time.perf_counter() - start:.2f} s)"
    RESULTS.append(line)
    print(line)


def _surface_signals(docs):
    return CohesionSignalTransformer(mode="surface").fit().transform_signals(docs)


def test_criterion_1_bijection_fidelity():
    with criterion(1, "bijection translations correlate at 1 and share all boundaries"):
        start = time.perf_counter()
        sk = make_skeleton(484, seed=0)
        docs = [render_document(sk, lang) for lang in (SURFACE_EN, SURFACE_DE, SURFACE_FR)]
        signals = _surface_signals(docs)
        assert [len(s) for s in signals] == [483] * 3
        model = ParallelCorrelator(labels=["en", "de", "fr"]).fit(signals)
        cells = np.asarray(model.matrix_.cells)
        assert np.abs(cells - 1.0).max() <= 1e-9
        classes = [c.cls for c in model.comparison_.classifications]
        assert classes and set(classes) == {BoundaryClass.CONFIRMED}
        assert time.perf_counter() - start < 5.0


@pytest.mark.slow
def test_criterion_2_degradation_ordering():
    with criterion(2, "correlation falls as more tokens are replaced"):
        start = time.perf_counter()
        sk = make_skeleton(484, seed=0)
        clean = _surface_signals([render_document(sk, SURFACE_EN)])[0]
        tokens = render_tokens(sk, SURFACE_DE)
        transformer = CohesionSignalTransformer(mode="surface").fit()
        means = {}
        for p in (0.1, 0.3, 0.5):
            rs = []
            for trial in range(100):
                noisy_tokens = replace_fraction(tokens, p, seed=trial)
                text = "\n\n".join(" ".join(words) for _, words in noisy_tokens)
                noisy = transformer.transform_signals([parse_document(text)])[0]
                rs.append(cross_correlate(clean, noisy).r)
            assert max(rs) <= 1.0
            means[p] = statistics.fmean(rs)
        print(f"  mean r: {', '.join(f'p={p}: {m:.4f}' for p, m in means.items())}")
        assert means[0.1] > means[0.3] > means[0.5]
        assert means[0.1] > 0.9
        assert time.perf_counter() - start < 30.0


FIXTURE_30 = [
    "interest rates rose while the bank kept lending",
    "the bank raised interest",
    "loans to farmers fell sharply",
    "farmers sold cattle and grain at market",
    "grain prices and cattle prices rose",
]


def test_criterion_3_vector_oracle(make_doc):
    with criterion(3, "signal equals brute-force idf.tf cosine oracle"):
        assert sum(len(p.split()) for p in FIXTURE_30) == 30
        sig = cohesion_signal(build_vectors(analyze_document(make_doc(*FIXTURE_30), AnalysisConfig())))
        expected = tfidf_cosine_signal([tokenize(p) for p in FIXTURE_30])
        assert len(sig.values) == 4
        assert max(abs(a - b) for a, b in zip(sig.values, expected)) <= 1e-12
        assert any(v > 0 for v in expected)


def test_criterion_4_correlation_oracle():
    with criterion(4, "h equals double-loop oracle; [1,2]x[2,1] worked example"):
        rng = random.Random(4)
        for _ in range(1000):
            x = [rng.random() for _ in range(rng.randint(1, 16))]
            y = [rng.random() for _ in range(rng.randint(1, 16))]
            got = cross_correlate(x, y).h
            exp = correlation_h(x, y)
            assert len(got) == len(exp)
            assert max(abs(a - b) for a, b in zip(got, exp)) <= 1e-12
        res = cross_correlate([1, 2], [2, 1])
        assert res.h == (4.0, 4.0, 0.0)
        assert res.r == 0.8


@pytest.mark.slow
def test_criterion_5_exhaustive_segmentation():
    with criterion(5, "detect_boundaries equals minima enumeration on all short signals"):
        start = time.perf_counter()
        grid = (0.0, 0.25, 0.5, 0.75, 1.0)
        checked = 0
        for n in range(1, 9):
            for v in itertools.product(grid, repeat=n):
                assert dict(detect_boundaries(v).depths) == valleys(v), v
                checked += 1
        assert checked == sum(5 ** n for n in range(1, 9))
        assert time.perf_counter() - start < 60.0


def test_criterion_6_filter_contracts():
    with criterion(6, "low-pass fixpoint, identity, range and reversal symmetry"):
        rng = np.random.default_rng(6)
        for kind in FilterKind:
            for window in (3, 5, 7):
                spec = FilterSpec(kind, window)
                const = lowpass(CohesionSignal("c", (0.42,) * 20), spec)
                assert max(abs(v - 0.42) for v in const.values) <= 1e-12
        for _ in range(1000):
            values = tuple(rng.random(int(rng.integers(4, 60))))
            sig = CohesionSignal("s", values)
            assert lowpass(sig, FilterSpec(window=1)).values == values
            spec = FilterSpec(FilterKind(rng.choice([k.value for k in FilterKind])), int(rng.choice([3, 5, 7])))
            out = lowpass(sig, spec).values
            assert all(0.0 <= v <= 1.0 for v in out)
            rev = lowpass(CohesionSignal("r", values[::-1]), spec).values
            assert max(abs(a - b) for a, b in zip(out, rev[::-1])) <= 1e-12


def test_criterion_7_weak_distortion_repair():
    with criterion(7, "weak distortion scores 5/6 and repairs idempotently"):
        sets = [BoundarySet(d, (g,), {g: 0.3}, 0.0, 12) for d, g in (("de", 4), ("en", 4), ("fr", 5))]
        (c,) = compare_boundaries(sets, tolerance=1).classifications
        assert c.cls is BoundaryClass.WEAK_DISTORTION
        assert abs(c.strength - 5 / 6) <= 1e-15
        repaired = repair_boundaries(compare_boundaries(sets, tolerance=1))
        assert [s.gaps for s in repaired] == [(4,), (4,), (4,)]
        assert repair_boundaries(compare_boundaries(repaired, tolerance=1)) == repaired


def test_criterion_8_analysis_mode_effect():
    with criterion(8, "lemmatization changes the signal; trigrams correlate at least as well"):
        sk = make_skeleton(484, seed=5)
        en = render_document(sk, INFLECTED_EN)
        de = render_document(sk, INFLECTED_DE)
        table = load_lemma_table(lemma_table_tsv(sk, INFLECTED_EN, seed=5))
        surface = CohesionSignalTransformer(mode="surface").fit()
        lemma = CohesionSignalTransformer(mode="lemmatized", lemma_table=table).fit()
        trigram = CohesionSignalTransformer(mode="char_ngram", n=3).fit()
        r_lemma = cross_correlate(lemma.transform_signals([en])[0], surface.transform_signals([en])[0]).r
        sx, sy = surface.transform_signals([en, de])
        tx, ty = trigram.transform_signals([en, de])
        r_surface, r_trigram = cross_correlate(sx, sy).r, cross_correlate(tx, ty).r
        print(f"  r(lemma, surface) = {r_lemma:.4f}; r_surface = {r_surface:.4f}; r_trigram = {r_trigram:.4f}")
        assert r_lemma < 1.0
        assert r_trigram >= r_surface


def test_criterion_9_round_trips(tmp_path):
    with criterion(9, "document, alignment and signal round-trips; golden CLI outputs"):
        corpus = demo_corpus()
        for tag, text in corpus.texts.items():
            doc = parse_document(text, ParseOptions(doc_id=tag))
            once = serialize_document(doc)
            assert parse_document(once, ParseOptions(doc_id=tag)) == doc
            assert serialize_document(parse_document(once, ParseOptions(doc_id=tag))) == once
        en = parse_document(corpus.texts["en"])
        de = parse_document(corpus.texts["de"])
        alignment = align_documents(en, de)
        assert parse_alignment(format_alignment(alignment)) == alignment.rows()
        sig = cohesion_signal(build_vectors(analyze_document(en, AnalysisConfig())), "en")
        assert parse_signal_csv(format_signal_csv(sig, decimals=None), sig.doc_id) == sig
        text = format_signal_csv(sig)
        assert format_signal_csv(parse_signal_csv(text, sig.doc_id)) == text

        from test_cli import GOLDEN, GOLDEN_RUNS
        demo = tmp_path / "demo"
        assert main(["demo", "--out", str(demo)]) == 0
        for name, argv in sorted(GOLDEN_RUNS.items()):
            out = tmp_path / name
            assert main([a.format(demo=demo) for a in argv] + ["--out", str(out)]) == 0
            produced = {p.name: p.read_bytes() for p in out.iterdir()}
            expected = {p.name: p.read_bytes() for p in (GOLDEN / name).iterdir()}
            assert produced == expected, f"golden mismatch in {name}"
