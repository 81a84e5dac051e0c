"""Synonym lexicon, description preprocessing and word similarity.

A :class:`Lexicon` bundles three optional resources, each loaded from a
small UTF-8 text file:

* synonyms, ``<term>\\t<synonym>[\\t<weight>]`` per line
* stopwords, one word per line
* word classes, ``<word>\\t<N|ADJ|PREP|O>`` per line

Lines starting with ``#`` and blank lines are ignored everywhere.
"""

from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Dict, FrozenSet, Mapping, Optional, Protocol

from .errors import DomainError, ParseError
from .text import Description, Source, iter_lines, tokenize

DEFAULT_SYNONYM_WEIGHT = 0.8


class WordClass(str, Enum):
    NOUN = "N"
    ADJECTIVE = "ADJ"
    PREPOSITION = "PREP"
    OTHER = "O"


@dataclass(frozen=True)
class Lexicon:
    """Immutable synonym/stopword/word-class knowledge.

    ``synonyms`` maps a term to ``{synonym: weight}`` and is always
    symmetric; use :func:`build_lexicon` or :func:`parse_lexicon` rather than
    filling it by hand.
    """

    synonyms: Mapping[str, Mapping[str, float]] = field(default_factory=dict)
    stopwords: FrozenSet[str] = frozenset()
    word_classes: Optional[Mapping[str, WordClass]] = None

    def synonyms_of(self, term: str) -> Dict[str, float]:
        """All synonyms of ``term`` including itself at weight 1.0."""
        out = dict(self.synonyms.get(term, {}))
        out[term] = 1.0
        return out


class SimilarityProvider(Protocol):
    def word_similarity(self, a: str, b: str) -> float: ...


class LexiconSimilarity:
    """Similarity backed by a :class:`Lexicon`.

    Identical words score 1.0, linked words score their lexicon weight, and
    everything else scores 0.0.
    """

    def __init__(self, lexicon: Optional[Lexicon] = None):
        self.lexicon = lexicon if lexicon is not None else Lexicon()

    @property
    def stopwords(self) -> FrozenSet[str]:
        return self.lexicon.stopwords

    def word_similarity(self, a: str, b: str) -> float:
        if a == b:
            return 1.0
        return self.lexicon.synonyms.get(a, {}).get(b, 0.0)

    def __repr__(self):
        return f"LexiconSimilarity({len(self.lexicon.synonyms)} terms)"


class ExactMatchSimilarity:
    """1.0 for identical words, 0.0 otherwise."""

    stopwords: FrozenSet[str] = frozenset()

    def word_similarity(self, a: str, b: str) -> float:
        return 1.0 if a == b else 0.0


def word_similarity(a: str, b: str, lex: Lexicon) -> float:
    return LexiconSimilarity(lex).word_similarity(a, b)


def _normalize_term(raw: str) -> str:
    return " ".join(raw.lower().split())


def build_lexicon(pairs, stopwords=(), word_classes=None) -> Lexicon:
    """Build a lexicon from ``(term, synonym, weight)`` triples.

    The symmetric closure is applied; when a pair is listed more than once
    (in either direction) the largest weight wins.
    """
    synonyms: Dict[str, Dict[str, float]] = {}
    for a, b, w in pairs:
        a, b = _normalize_term(a), _normalize_term(b)
        w = float(w)
        if not 0.0 <= w <= 1.0:
            raise DomainError(f"synonym weight {w} for {a!r}->{b!r} outside [0, 1]")
        if a == b:
            continue
        for x, y in ((a, b), (b, a)):
            row = synonyms.setdefault(x, {})
            row[y] = max(w, row.get(y, 0.0))
    classes = None
    if word_classes is not None:
        classes = {_normalize_term(k): WordClass(v) for k, v in dict(word_classes).items()}
    return Lexicon(
        synonyms=synonyms,
        stopwords=frozenset(_normalize_term(s) for s in stopwords),
        word_classes=classes,
    )


def _content_lines(source: Source):
    for lineno, line in enumerate(iter_lines(source), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def parse_synonyms(source: Source) -> list:
    triples = []
    for lineno, line in _content_lines(source):
        cols = line.split("\t")
        if len(cols) not in (2, 3) or not cols[0].strip() or not cols[1].strip():
            raise ParseError(f"expected '<term>\\t<synonym>[\\t<weight>]', got {line!r}", lineno)
        weight = DEFAULT_SYNONYM_WEIGHT
        if len(cols) == 3:
            try:
                weight = float(cols[2])
            except ValueError:
                raise ParseError(f"bad weight {cols[2]!r}", lineno) from None
            if not 0.0 <= weight <= 1.0:
                raise DomainError(f"line {lineno}: weight {weight} outside [0, 1]")
        triples.append((cols[0], cols[1], weight))
    return triples


def parse_stopwords(source: Source) -> FrozenSet[str]:
    words = set()
    for lineno, line in _content_lines(source):
        parts = line.split()
        if len(parts) != 1:
            raise ParseError(f"expected one word per line, got {line!r}", lineno)
        words.update(tokenize(parts[0]))
    return frozenset(words)


def parse_word_classes(source: Source) -> Dict[str, WordClass]:
    classes = {}
    for lineno, line in _content_lines(source):
        cols = line.split("\t")
        if len(cols) != 2:
            raise ParseError(f"expected '<word>\\t<class>', got {line!r}", lineno)
        try:
            classes[_normalize_term(cols[0])] = WordClass(cols[1].strip().upper())
        except ValueError:
            raise ParseError(f"unknown word class {cols[1]!r}", lineno) from None
    return classes


def parse_lexicon(
    synonyms: Source,
    stopwords: Optional[Source] = None,
    word_classes: Optional[Source] = None,
) -> Lexicon:
    """Parse the synonym file plus optional stopword and word-class files.

    Raises
    ------
    ParseError
        On a malformed line.
    DomainError
        If a weight is outside [0, 1].
    """
    return build_lexicon(
        parse_synonyms(synonyms),
        stopwords=parse_stopwords(stopwords) if stopwords is not None else (),
        word_classes=parse_word_classes(word_classes) if word_classes is not None else None,
    )


def default_stopwords() -> FrozenSet[str]:
    """The English stopword list shipped with the package."""
    data = resources.files("ctxsugg").joinpath("data/stopwords.txt").read_bytes()
    return parse_stopwords(data)


def preprocess_description(text: str, lex: Optional[Lexicon] = None) -> Description:
    """Tokenize a raw description and drop noise words.

    Stopwords are removed, and when the lexicon carries word classes, tokens
    classed as ``O`` (other) are removed too. Tokens missing from the
    word-class table are kept.

    >>> lex = Lexicon(stopwords=frozenset({"the", "was"}))
    >>> preprocess_description("The beach was great!!!", lex).tokens
    ('beach', 'great')
    """
    tokens = tokenize(text)
    if lex is None:
        return Description(tuple(tokens))
    classes = lex.word_classes
    return Description(tuple(
        t
        for t in tokens
        if t not in lex.stopwords
        and (classes is None or classes.get(t) is not WordClass.OTHER)
    ))
