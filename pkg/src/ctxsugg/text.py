"""Low-level text helpers: tag normalization, tokenization, line reading."""

import io
import re
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Tuple, Union

from .errors import NormalizationEmpty

Source = Union[bytes, str, IO[bytes], IO[str], Iterable[str]]

_TAG_DROP = re.compile(r"[^\w&\- ]|_")
_TOKEN_DROP = re.compile(r"[^\w\s]|_")
_WS = re.compile(r"\s+")


def normalize_tag(raw: str) -> str:
    """Canonical form of a tag string.

    Lowercases, turns every whitespace run into a single space, drops
    characters other than letters, digits, ``&``, ``-`` and space, and trims.

    >>> normalize_tag("  Beach   Goer ")
    'beach goer'
    >>> normalize_tag("Art & Architecture")
    'art & architecture'
    """
    text = _WS.sub(" ", raw.lower())
    text = _TAG_DROP.sub("", text)
    text = _WS.sub(" ", text).strip()
    if not text:
        raise NormalizationEmpty(f"tag {raw!r} is empty after normalization")
    return text


def tokenize(text: str) -> list:
    """Lowercase word tokens of ``text`` with punctuation removed.

    Apostrophes are deleted ("don't" -> "dont"); any other punctuation acts
    as a word separator ("beach-walk" -> "beach", "walk").
    """
    text = text.lower().replace("'", "").replace("’", "")
    return _TOKEN_DROP.sub(" ", text).split()


def iter_lines(source: Source) -> Iterator[str]:
    """Yield decoded lines (without line terminators) from ``source``.

    Accepts raw bytes, a string, a binary or text file object, or any
    iterable of strings.
    """
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        source = io.StringIO(source)
    for line in source:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        yield line.rstrip("\r\n")


@dataclass(frozen=True)
class Description:
    """Ordered, normalized word tokens of an attraction description."""

    tokens: Tuple[str, ...] = ()

    def __post_init__(self):
        tokens = tuple(self.tokens)
        for tok in tokens:
            if not tok or tok != tok.lower() or not _TOKEN_DROP.sub("", tok):
                raise ValueError(f"invalid description token {tok!r}")
        object.__setattr__(self, "tokens", tokens)

    @classmethod
    def from_text(cls, text: str) -> "Description":
        return cls(tuple(tokenize(text)))

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self):
        return len(self.tokens)

    def __str__(self):
        return " ".join(self.tokens)
