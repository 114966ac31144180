"""Deterministic synthetic parallel corpora.

A :class:`Skeleton` fixes the discourse structure of a document as a
sequence of segments over abstract lemma ids. A :class:`Language` renders a
skeleton as text: it assigns every lemma id a word (a vocabulary bijection)
and optionally attaches inflectional suffixes chosen by its own random
stream. Two renderings of one skeleton are therefore perfect "translations"
of each other at the lemma level.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .corpusio import DEFAULT_HEADING_MARKER, Document, ParseOptions, parse_document

_ONSETS = "b c d f g h j k l m n p r s t v w x z".split() + ["br", "dr", "gl", "kr", "pl", "st", "tr"]
_VOWELS = "a e i o u".split()
FRESH_PREFIX = "qu"  # never produced by the syllable generator ("q" is not an onset)


@dataclass(frozen=True)
class Skeleton:
    """Segments as ``(is_heading, lemma ids)`` plus the topic seams."""

    segments: tuple[tuple[bool, tuple[int, ...]], ...]
    seams: tuple[int, ...]  # gap indices where a new topic starts
    n_lemmas: int

    def __len__(self) -> int:
        return len(self.segments)


def make_words(count: int, seed: int) -> list[str]:
    """``count`` distinct lowercase pseudo-words made of CV syllables."""
    rng = random.Random(seed)
    seen: set[str] = set()
    words = []
    while len(words) < count:
        w = "".join(rng.choice(_ONSETS) + rng.choice(_VOWELS) for _ in range(rng.randint(2, 4)))
        if w not in seen:
            seen.add(w)
            words.append(w)
    return words


@functools.lru_cache(maxsize=None)
def fresh_word(k: int) -> str:
    """The ``k``-th out-of-vocabulary word, disjoint from :func:`make_words`."""
    letters = []
    k += 1
    while k:
        k, rem = divmod(k - 1, 26)
        letters.append(chr(ord("a") + rem))
    return FRESH_PREFIX + "".join(reversed(letters))


def make_skeleton(
    n_segments: int = 484,
    *,
    seed: int = 0,
    topic_len: tuple[int, int] = (12, 32),
    topic_vocab: int = 60,
    background_vocab: int = 120,
    para_len: tuple[int, int] = (25, 60),
    topic_share: float = 0.55,
    headings: bool = True,
) -> Skeleton:
    """Topic blocks of varying length over disjoint topic vocabularies.

    Each paragraph mixes Zipf-distributed topic lemmas with a shared
    background vocabulary; each block starts with a short heading.
    """
    rng = random.Random(seed)
    lengths = []
    while sum(lengths) < n_segments:
        lengths.append(rng.randint(*topic_len))
    lengths[-1] -= sum(lengths) - n_segments
    if lengths[-1] < 2 and len(lengths) > 1:
        lengths[-2] += lengths.pop()

    background = list(range(background_vocab))
    zipf = [1.0 / (r + 1) for r in range(topic_vocab)]
    segments = []
    seams = []
    next_lemma = background_vocab
    for block, length in enumerate(lengths):
        vocab = list(range(next_lemma, next_lemma + topic_vocab))
        next_lemma += topic_vocab
        if block:
            seams.append(len(segments) - 1)
        for k in range(length):
            if headings and k == 0 and length > 2:
                segments.append((True, tuple(rng.sample(vocab[:8], rng.randint(1, 3)))))
                continue
            size = rng.randint(*para_len)
            tokens = []
            for _ in range(size):
                if rng.random() < topic_share:
                    tokens.append(rng.choices(vocab, zipf)[0])
                else:
                    tokens.append(rng.choice(background))
            segments.append((False, tuple(tokens)))
    return Skeleton(tuple(segments), tuple(seams), next_lemma)


@dataclass(frozen=True)
class Language:
    """How a skeleton is rendered: lexicon seed plus inflection scheme."""

    tag: str
    lexicon_seed: int
    suffixes: tuple[str, ...] = ("",)
    inflection_seed: int = 0
    numbers: bool = True

    def lexicon(self, n_lemmas: int) -> list[str]:
        return make_words(n_lemmas, self.lexicon_seed)


SURFACE_EN = Language("en", 11)
SURFACE_DE = Language("de", 22)
SURFACE_FR = Language("fr", 33)
INFLECTED_EN = Language("en", 11, ("", "s", "ed", "ing"), inflection_seed=1)
INFLECTED_DE = Language("de", 22, ("", "e", "en", "er", "es"), inflection_seed=2)
INFLECTED_FR = Language("fr", 33, ("", "s", "ent", "ait"), inflection_seed=3)


def render_tokens(skeleton: Skeleton, language: Language) -> list[tuple[bool, list[str]]]:
    lex = language.lexicon(skeleton.n_lemmas)
    rng = random.Random(language.inflection_seed)
    out = []
    for is_heading, lemmas in skeleton.segments:
        words = []
        for lemma in lemmas:
            suffix = "" if is_heading else rng.choice(language.suffixes)
            words.append(lex[lemma] + suffix)
        out.append((is_heading, words))
    return out


def tokens_to_text(
    segments: Sequence[tuple[bool, Sequence[str]]],
    *,
    seed: int = 0,
    numbers: bool = True,
    heading_marker: str = DEFAULT_HEADING_MARKER,
) -> str:
    """Lay tokens out as sentences, with capitals, punctuation and stray numbers."""
    rng = random.Random(seed)
    parts = []
    for is_heading, words in segments:
        if is_heading:
            parts.append(heading_marker + " ".join(w.capitalize() for w in words))
            continue
        pieces = []
        start = True
        for i, w in enumerate(words):
            pieces.append(w.capitalize() if start else w)
            start = False
            if numbers and rng.random() < 0.02:
                pieces.append(rng.choice(["1987", "2.5%", "(3)", "12,000"]))
            if i == len(words) - 1 or rng.random() < 0.1:
                pieces[-1] += "."
                start = True
            elif rng.random() < 0.05:
                pieces[-1] += ","
        # wrap long paragraphs over several lines
        lines = [" ".join(pieces[k:k + 12]) for k in range(0, len(pieces), 12)]
        parts.append("\n".join(lines))
    return "\n\n".join(parts) + "\n"


def render_text(skeleton: Skeleton, language: Language) -> str:
    return tokens_to_text(
        render_tokens(skeleton, language), seed=language.lexicon_seed, numbers=language.numbers
    )


def render_document(skeleton: Skeleton, language: Language, doc_id: str | None = None) -> Document:
    opts = ParseOptions(doc_id=doc_id or language.tag, language=language.tag)
    return parse_document(render_text(skeleton, language), opts)


def lemma_table_tsv(skeleton: Skeleton, language: Language, *, coverage: float = 0.8, seed: int = 0) -> str:
    """Form/lemma list for a covered subset of lemmas.

    A few forms are listed under two lemmas so that loading exercises the
    ambiguity rule.
    """
    rng = random.Random(seed)
    lex = language.lexicon(skeleton.n_lemmas)
    lines = [f"# synthetic lemma list for {language.tag}"]
    covered = [i for i in range(skeleton.n_lemmas) if rng.random() < coverage]
    for i in covered:
        for suffix in language.suffixes:
            if suffix:
                lines.append(f"{lex[i]}{suffix}\t{lex[i]}")
    for i in rng.sample(covered, min(5, len(covered))):
        lines.append(f"{lex[i]}{language.suffixes[-1]}\t{lex[(i + 1) % len(lex)]}")
    return "\n".join(lines) + "\n"


def replace_fraction(
    segments: Sequence[tuple[bool, Sequence[str]]], p: float, seed: int
) -> list[tuple[bool, list[str]]]:
    """Replace a fraction ``p`` of paragraph tokens by fresh unique words."""
    rng = random.Random(seed)
    positions = [(s, k) for s, (h, words) in enumerate(segments) if not h for k in range(len(words))]
    chosen = rng.sample(positions, round(p * len(positions)))
    out = [(h, list(words)) for h, words in segments]
    for n, (s, k) in enumerate(sorted(chosen)):
        out[s][1][k] = fresh_word(n)
    return out


@dataclass
class DemoCorpus:
    skeleton: Skeleton
    texts: dict[str, str] = field(default_factory=dict)
    lemma_tables: dict[str, str] = field(default_factory=dict)


def demo_corpus(seed: int = 1994) -> DemoCorpus:
    """Trilingual 484-segment demo: inflected en/de/fr with lemma lists for en and de."""
    skeleton = make_skeleton(484, seed=seed)
    corpus = DemoCorpus(skeleton)
    for lang in (INFLECTED_EN, INFLECTED_DE, INFLECTED_FR):
        corpus.texts[lang.tag] = render_text(skeleton, lang)
    for lang in (INFLECTED_EN, INFLECTED_DE):
        corpus.lemma_tables[lang.tag] = lemma_table_tsv(skeleton, lang, seed=seed)
    return corpus
