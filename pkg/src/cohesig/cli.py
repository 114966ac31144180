"""Command-line interface: ``cohesig <command> ...``.

Every command computes all of its outputs in memory first and only then
writes them (each through a temporary file and an atomic rename), so a
failing command leaves no partial files behind.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .analysis import AnalysisConfig, AnalysisMode, corpus_stats, analyze_document
from .corpusio import (
    Document, LemmaTable, align_documents, format_alignment, read_document,
    read_lemma_table, read_stoplist,
)
from .dsp import FilterSpec, correlation_matrix, format_plot_data, format_smoothed_csv, lowpass
from .exceptions import CohesigError, FormatError
from .tiling import compare_boundaries, detect_boundaries, repair_boundaries
from .vectors import CohesionSignal, build_vectors, cohesion_signal, format_signal_csv

log = logging.getLogger("cohesig")

_MODES = {"surface": AnalysisMode.SURFACE, "lemma": AnalysisMode.LEMMATIZED, "ngram": AnalysisMode.CHAR_NGRAM}
_FILTERS = {"ma": "moving_average", "hamming": "hamming"}


class UsageError(CohesigError):
    pass


@dataclass
class Run:
    label: str
    path: Path
    language: str
    config: AnalysisConfig
    filter: FilterSpec
    lemma_table: LemmaTable | None = None


@dataclass
class RunManifest:
    runs: list[Run] = field(default_factory=list)


# -- option handling ---------------------------------------------------------


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("analysis")
    g.add_argument("--mode", choices=sorted(_MODES), help="index terms (default: ngram)")
    g.add_argument("--ngram", type=int, metavar="N", help="character n-gram size (implies --mode ngram; default 3)")
    g.add_argument("--lemmas", type=Path, metavar="FILE", help="form<TAB>lemma list for --mode lemma")
    g.add_argument("--stoplist", type=Path, metavar="FILE", help="one form per line")
    g.add_argument("--filter", choices=sorted(_FILTERS), default="ma", help="smoothing kernel (default: ma)")
    g.add_argument("--window", type=int, default=5, metavar="K", help="odd smoothing window, 1 disables (default: 5)")
    g.add_argument("--lang", default="", help="language tag recorded in reports")


def _settings_from_args(args) -> dict:
    return {
        "mode": args.mode, "ngram": args.ngram, "lemmas": args.lemmas,
        "stoplist": args.stoplist, "filter": args.filter, "window": args.window,
        "lang": args.lang,
    }


def _build_run(label: str, path: Path, s: dict) -> Run:
    mode = s.get("mode")
    n = s.get("ngram")
    if n is not None and mode not in (None, "ngram"):
        raise UsageError(f"{label}: --ngram conflicts with --mode {mode}")
    mode = _MODES[mode or "ngram"]
    lemma_table = read_lemma_table(s["lemmas"]) if s.get("lemmas") else None
    if mode is AnalysisMode.LEMMATIZED and lemma_table is None:
        raise UsageError(f"{label}: lemma mode needs a lemma list (--lemmas)")
    stoplist = read_stoplist(s["stoplist"]) if s.get("stoplist") else None
    try:
        cfg = AnalysisConfig(
            mode=mode, n=int(n) if n is not None else 3,
            lemma_table=lemma_table if mode is AnalysisMode.LEMMATIZED else None,
            stoplist=stoplist, use_stoplist=stoplist is not None,
        )
        spec = FilterSpec(_FILTERS[s.get("filter") or "ma"], int(s.get("window") or 5))
    except ValueError as exc:
        raise UsageError(f"{label}: {exc}") from exc
    return Run(label, path, s.get("lang") or "", cfg, spec, lemma_table)


_MANIFEST_KEYS = {"lang", "mode", "ngram", "lemmas", "stoplist", "filter", "window"}


def read_manifest(path: Path, defaults: dict) -> RunManifest:
    """Parse a run manifest.

    One run per line: ``label<TAB>document[<TAB>key=value...]``. Keys are the
    long CLI flag names without dashes (``mode``, ``ngram``, ``lemmas``,
    ``stoplist``, ``filter``, ``window``, ``lang``); omitted keys fall back
    to the command-line flags. Relative paths are resolved against the
    manifest's directory. ``#`` starts a comment line.
    """
    base = path.parent
    manifest = RunManifest()
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 2:
            raise FormatError(f"{path}:{line_no}: expected label<TAB>path")
        label, doc = fields[0].strip(), fields[1].strip()
        opts: dict = {}
        for item in fields[2:]:
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in _MANIFEST_KEYS:
                raise FormatError(f"{path}:{line_no}: bad option {item!r}")
            value = value.strip()
            opts[key] = base / value if key in ("lemmas", "stoplist") else value
        if "ngram" in opts and "mode" not in opts:
            opts["mode"] = "ngram"
        settings = {**defaults, **opts}
        manifest.runs.append(_build_run(label, base / doc, settings))
    labels = [r.label for r in manifest.runs]
    if len(set(labels)) != len(labels):
        raise FormatError(f"{path}: run labels must be unique")
    if len(manifest.runs) < 2:
        raise FormatError(f"{path}: need at least two runs")
    return manifest


# -- pipeline helpers ----------------------------------------------------------


def _load(run: Run) -> Document:
    return read_document(run.path, language=run.language, doc_id=run.label)


def _raw_signal(doc: Document, cfg: AnalysisConfig) -> CohesionSignal:
    return cohesion_signal(build_vectors(analyze_document(doc, cfg)), doc.id)


def _stats_payload(doc: Document, run: Run) -> dict:
    stats = corpus_stats(doc, run.config)
    out = {
        "document": doc.id,
        "language": doc.language,
        "segments": len(doc),
        "headings": len(doc.headings),
        "gaps": max(len(doc) - 1, 0),
        "analysis": run.config.describe(),
        "tokens": stats.tokens,
        "surface_types": stats.surface_types,
        "analyzed_types": stats.analyzed_types,
    }
    if run.lemma_table is not None:
        out["lemma_table"] = {"entries": len(run.lemma_table), "dropped_ambiguous": run.lemma_table.dropped}
    return out


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _write_outputs(out_dir: Path, files: dict[str, str]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=f".{name}.", suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            staged.append((tmp, out_dir / name))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, final in staged:
        os.replace(tmp, final)
        log.info("wrote %s", final)


def _single_run(args) -> Run:
    return _build_run(args.document.stem, args.document, _settings_from_args(args))


# -- commands --------------------------------------------------------------------


def cmd_analyze(args) -> dict[str, str]:
    run = _single_run(args)
    doc = read_document(args.document, language=run.language)
    raw = _raw_signal(doc, run.config)
    smooth = lowpass(raw, run.filter)
    stem = doc.id
    return {
        f"{stem}.signal.csv": format_signal_csv(raw),
        f"{stem}.smoothed.csv": format_smoothed_csv(raw, smooth),
        f"{stem}.stats.json": _json(_stats_payload(doc, run)),
        f"{stem}.raw.dat": format_plot_data(raw),
        f"{stem}.smoothed.dat": format_plot_data(smooth),
    }


def cmd_stats(args) -> dict[str, str]:
    run = _single_run(args)
    doc = read_document(args.document, language=run.language)
    return {f"{doc.id}.stats.json": _json(_stats_payload(doc, run))}


def cmd_segment(args) -> dict[str, str]:
    run = _single_run(args)
    doc = read_document(args.document, language=run.language)
    sig = lowpass(_raw_signal(doc, run.config), run.filter)
    bset = detect_boundaries(sig, args.min_depth)
    return {f"{doc.id}.boundaries.json": _json(bset.to_dict())}


def _manifest_signals(args) -> tuple[list[Run], list[CohesionSignal]]:
    manifest = read_manifest(args.manifest, _settings_from_args(args))
    docs = [_load(r) for r in manifest.runs]
    counts = {d.id: len(d) for d in docs}
    if len(set(counts.values())) > 1:
        raise UsageError(
            f"documents must be aligned segment by segment before comparison; segment counts: {counts}. "
            "Run 'cohesig align' and merge the divergent segments first."
        )
    signals = [lowpass(_raw_signal(d, r.config), r.filter) for d, r in zip(docs, manifest.runs)]
    return manifest.runs, signals


def cmd_correlate(args) -> dict[str, str]:
    runs, signals = _manifest_signals(args)
    matrix = correlation_matrix([(r.label, s) for r, s in zip(runs, signals)])
    files = {"correlation.csv": matrix.to_csv(), "correlation.json": matrix.to_json()}
    for r, s in zip(runs, signals):
        files[f"{r.label}.dat"] = format_plot_data(s)
    return files


def cmd_compare(args) -> dict[str, str]:
    runs, signals = _manifest_signals(args)
    sets = [detect_boundaries(s, args.min_depth, doc_id=r.label) for r, s in zip(runs, signals)]
    comparison = compare_boundaries(sets, args.tolerance, args.alpha)
    report = comparison.to_dict()
    table = comparison.table()
    if args.repair:
        repaired = repair_boundaries(comparison)
        report["repaired"] = [s.to_dict() for s in repaired]
        after = compare_boundaries(repaired, args.tolerance, args.alpha)
        table += "\nafter repair\n" + after.table()
    return {"comparison.json": _json(report), "comparison.txt": table}


def cmd_align(args) -> dict[str, str]:
    a = read_document(args.doc_a)
    b = read_document(args.doc_b)
    alignment = align_documents(a, b, args.size_tolerance)
    report = {
        "a": a.id, "b": b.id,
        "segments": [len(a), len(b)],
        "pairs": len(alignment.pairs),
        "divergences": [
            {"position": d.position, "kind": d.kind.value, "detail": d.detail,
             "a": [alignment.pairs[d.position][0].start, alignment.pairs[d.position][0].stop - 1],
             "b": [alignment.pairs[d.position][1].start, alignment.pairs[d.position][1].stop - 1]}
            for d in alignment.divergences
        ],
    }
    for d in alignment.divergences:
        print(f"divergent pair {d.position}: {d.kind.value}: {d.detail}", file=sys.stderr)
    return {"alignment.tsv": format_alignment(alignment), "divergences.json": _json(report)}


def cmd_demo(args) -> dict[str, str]:
    from .synth import demo_corpus

    corpus = demo_corpus(args.seed)
    files = {f"{tag}.txt": text for tag, text in corpus.texts.items()}
    files.update({f"{tag}.lemmas.tsv": text for tag, text in corpus.lemma_tables.items()})
    files["manifest.tsv"] = (
        "# trigram analyses of the three language versions\n"
        "de_3gr\tde.txt\tlang=de\tmode=ngram\tngram=3\n"
        "en_3gr\ten.txt\tlang=en\tmode=ngram\tngram=3\n"
        "fr_3gr\tfr.txt\tlang=fr\tmode=ngram\tngram=3\n"
    )
    files["manifest-modes.tsv"] = (
        "# word-form, lemma and trigram analyses side by side\n"
        "de_nm\tde.txt\tlang=de\tmode=surface\n"
        "de_m\tde.txt\tlang=de\tmode=lemma\tlemmas=de.lemmas.tsv\n"
        "en_nm\ten.txt\tlang=en\tmode=surface\n"
        "en_m\ten.txt\tlang=en\tmode=lemma\tlemmas=en.lemmas.tsv\n"
        "fr_nm\tfr.txt\tlang=fr\tmode=surface\n"
        "fr_3g\tfr.txt\tlang=fr\tmode=ngram\tngram=3\n"
    )
    return files


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohesig",
        description="Lexical cohesion signals, subtopic tiling and parallel-text discourse similarity.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--out", type=Path, default=Path("."), metavar="DIR", help="output directory")
        return p

    p = command("analyze", cmd_analyze, "cohesion signal, smoothed signal, stats and plot data for one document")
    p.add_argument("document", type=Path)
    _add_analysis_flags(p)

    p = command("stats", cmd_stats, "token and type counts for one document")
    p.add_argument("document", type=Path)
    _add_analysis_flags(p)

    p = command("segment", cmd_segment, "subtopic boundaries of one document")
    p.add_argument("document", type=Path)
    _add_analysis_flags(p)
    p.add_argument("--min-depth", type=float, default=0.0, metavar="D",
                   help="drop valleys shallower than D (default: 0)")

    p = command("correlate", cmd_correlate, "correlation matrix of aligned language versions")
    p.add_argument("manifest", type=Path)
    _add_analysis_flags(p)

    p = command("compare", cmd_compare, "cross-version boundary comparison")
    p.add_argument("manifest", type=Path)
    _add_analysis_flags(p)
    p.add_argument("--min-depth", type=float, default=0.0, metavar="D",
                   help="drop valleys shallower than D (default: 0)")
    p.add_argument("--tolerance", type=int, default=1, metavar="T", help="cluster radius in gaps (default: 1)")
    p.add_argument("--alpha", type=float, default=0.25, metavar="A",
                   help="agreement window as a fraction of mean tile length (default: 0.25)")
    p.add_argument("--repair", action="store_true", help="snap weak distortions to the consensus gap")

    p = command("align", cmd_align, "segment-level alignment of two language versions")
    p.add_argument("doc_a", type=Path)
    p.add_argument("doc_b", type=Path)
    p.add_argument("--size-tolerance", type=float, default=0.4, metavar="R")

    p = command("demo", cmd_demo, "write the synthetic trilingual demo corpus")
    p.add_argument("--seed", type=int, default=1994)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        files = args.func(args)
        _write_outputs(args.out, files)
    except (CohesigError, OSError, ValueError) as exc:
        print(f"cohesig {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
