"""Domain types and the line-oriented input formats.

Profiles and requests are JSON Lines; the tagset and qrels files are plain
text. Every parser accepts bytes, str, a file object or an iterable of
lines, and every ``serialize_*`` function returns UTF-8 bytes that parse
back to an equal value.
"""

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import FrozenSet, Iterable, List, Optional, Tuple

from .errors import DomainError, DuplicateIdError, NormalizationEmpty, ParseError
from .lexicon import Lexicon, preprocess_description
from .text import Description, Source, iter_lines, normalize_tag

__all__ = [
    "RATINGS",
    "Candidate",
    "Description",
    "ProfileAttraction",
    "QrelEntry",
    "Request",
    "Tag",
    "TagKind",
    "TagSource",
    "UserProfile",
    "normalize_tag",
    "parse_profiles",
    "parse_qrels",
    "parse_requests",
    "parse_tagset",
    "serialize_profiles",
    "serialize_qrels",
    "serialize_requests",
    "serialize_tagset",
]

RATINGS = (4, 3, 2, 1, 0, -1)


class TagKind(str, Enum):
    GENERIC = "G"
    SPECIFIC = "S"


class TagSource(str, Enum):
    USER = "user"
    ENRICHED = "enriched"


@dataclass(frozen=True)
class Tag:
    """A tag from the predefined vocabulary.

    Equality and hashing use the normalized text only, so a tag parsed from
    a profile and the same tag from the tagset are interchangeable in sets.
    """

    text: str
    kind: TagKind = field(default=TagKind.GENERIC, compare=False)

    def __post_init__(self):
        if not self.text or normalize_tag(self.text) != self.text:
            raise ValueError(f"tag text {self.text!r} is not normalized")

    @classmethod
    def of(cls, raw: str, kind: TagKind = TagKind.GENERIC) -> "Tag":
        return cls(normalize_tag(raw), kind)


def tag_set(raw_tags: Iterable[str]) -> FrozenSet[Tag]:
    return frozenset(Tag.of(t) for t in raw_tags)


def sorted_tags(tags: Iterable[Tag]) -> List[Tag]:
    return sorted(tags, key=lambda t: t.text)


def check_rating(rating, what: str) -> int:
    if isinstance(rating, bool) or not isinstance(rating, int) or rating not in RATINGS:
        raise DomainError(f"{what}: rating {rating!r} not in {{-1..4}}")
    return rating


@dataclass(frozen=True)
class ProfileAttraction:
    id: str
    description: Description
    rating: int
    tags: FrozenSet[Tag] = frozenset()
    tags_source: TagSource = TagSource.USER

    def __post_init__(self):
        check_rating(self.rating, f"attraction {self.id!r}")
        object.__setattr__(self, "tags", frozenset(self.tags))


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    attractions: Tuple[ProfileAttraction, ...]

    def __post_init__(self):
        attractions = tuple(self.attractions)
        if not attractions:
            raise ValueError(f"profile {self.user_id!r} has no attractions")
        _check_unique((a.id for a in attractions), f"attraction in profile {self.user_id!r}")
        object.__setattr__(self, "attractions", attractions)


@dataclass(frozen=True)
class Candidate:
    id: str
    description: Description
    tags: FrozenSet[Tag] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "tags", frozenset(self.tags))


@dataclass(frozen=True)
class Request:
    request_id: str
    user_id: str
    candidates: Tuple[Candidate, ...] = ()

    def __post_init__(self):
        candidates = tuple(self.candidates)
        _check_unique((c.id for c in candidates), f"candidate in request {self.request_id!r}")
        object.__setattr__(self, "candidates", candidates)

    def with_candidates(self, candidates) -> "Request":
        return replace(self, candidates=tuple(candidates))


@dataclass(frozen=True)
class QrelEntry:
    request_id: str
    candidate_id: str
    rating: int

    def __post_init__(self):
        check_rating(self.rating, f"judgment {self.request_id} {self.candidate_id}")


def _check_unique(ids, what):
    seen = set()
    for i in ids:
        if i in seen:
            raise DuplicateIdError(f"duplicate {what}: {i!r}")
        seen.add(i)


# -- JSON Lines records ------------------------------------------------------


def _records(source: Source):
    for lineno, line in enumerate(iter_lines(source), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
        if not isinstance(record, dict):
            raise ParseError("record is not a JSON object", lineno)
        yield lineno, record


def _field(record, key, kind, lineno, optional=False):
    if key not in record:
        if optional:
            return None
        raise ParseError(f"missing field {key!r}", lineno)
    value = record[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ParseError(f"field {key!r} has wrong type {type(value).__name__}", lineno)
    return value


def _tags_field(record, lineno, optional=False) -> FrozenSet[Tag]:
    raw = _field(record, "tags", list, lineno, optional=optional) or []
    if not all(isinstance(t, str) for t in raw):
        raise ParseError("tags must be strings", lineno)
    try:
        return tag_set(raw)
    except NormalizationEmpty as exc:
        raise ParseError(str(exc), lineno) from None


def parse_profiles(source: Source, lexicon: Optional[Lexicon] = None) -> List[UserProfile]:
    """Parse a profiles file, one JSON object per line.

    Descriptions are tokenized; when ``lexicon`` is given its stopwords and
    word classes are applied as well.

    Raises
    ------
    ParseError
        Malformed JSON or record shape (carries the line number).
    DomainError
        A rating outside {-1..4}.
    DuplicateIdError
        An attraction id repeated within a profile.
    """
    profiles = []
    for lineno, record in _records(source):
        user_id = _field(record, "user_id", str, lineno)
        attractions = []
        for item in _field(record, "attractions", list, lineno):
            if not isinstance(item, dict):
                raise ParseError("attraction is not a JSON object", lineno)
            attraction_id = _field(item, "id", str, lineno)
            rating = item.get("rating")
            check_rating(rating, f"attraction {attraction_id!r}")
            source_tag = _field(item, "tags_source", str, lineno, optional=True)
            try:
                tags_source = TagSource(source_tag or TagSource.USER.value)
            except ValueError:
                raise ParseError(f"unknown tags_source {source_tag!r}", lineno) from None
            attractions.append(
                ProfileAttraction(
                    id=attraction_id,
                    description=preprocess_description(
                        _field(item, "description", str, lineno), lexicon
                    ),
                    rating=rating,
                    tags=_tags_field(item, lineno),
                    tags_source=tags_source,
                )
            )
        if not attractions:
            raise ParseError(f"profile {user_id!r} has no attractions", lineno)
        _check_unique((a.id for a in attractions), f"attraction in profile {user_id!r}")
        profiles.append(UserProfile(user_id, tuple(attractions)))
    _check_unique((p.user_id for p in profiles), "user_id")
    return profiles


def parse_requests(source: Source, lexicon: Optional[Lexicon] = None) -> List[Request]:
    """Parse a requests file; candidate ``tags`` may be omitted."""
    requests = []
    for lineno, record in _records(source):
        request_id = _field(record, "request_id", str, lineno)
        candidates = []
        for item in _field(record, "candidates", list, lineno):
            if not isinstance(item, dict):
                raise ParseError("candidate is not a JSON object", lineno)
            candidates.append(
                Candidate(
                    id=_field(item, "id", str, lineno),
                    description=preprocess_description(
                        _field(item, "description", str, lineno), lexicon
                    ),
                    tags=_tags_field(item, lineno, optional=True),
                )
            )
        _check_unique((c.id for c in candidates), f"candidate in request {request_id!r}")
        requests.append(
            Request(request_id, _field(record, "user_id", str, lineno), tuple(candidates))
        )
    _check_unique((r.request_id for r in requests), "request_id")
    return requests


def _dump(record) -> str:
    return json.dumps(record, ensure_ascii=False)


def serialize_profiles(profiles: Iterable[UserProfile]) -> bytes:
    lines = []
    for profile in profiles:
        attractions = []
        for a in profile.attractions:
            item = {
                "id": a.id,
                "description": str(a.description),
                "rating": a.rating,
                "tags": [t.text for t in sorted_tags(a.tags)],
            }
            if a.tags_source is TagSource.ENRICHED:
                item["tags_source"] = a.tags_source.value
            attractions.append(item)
        lines.append(_dump({"user_id": profile.user_id, "attractions": attractions}))
    return "".join(line + "\n" for line in lines).encode("utf-8")


def serialize_requests(requests: Iterable[Request]) -> bytes:
    lines = []
    for r in requests:
        candidates = [
            {
                "id": c.id,
                "description": str(c.description),
                "tags": [t.text for t in sorted_tags(c.tags)],
            }
            for c in r.candidates
        ]
        lines.append(
            _dump({"request_id": r.request_id, "user_id": r.user_id, "candidates": candidates})
        )
    return "".join(line + "\n" for line in lines).encode("utf-8")


# -- plain-text formats --------------------------------------------------------


def parse_tagset(source: Source) -> List[Tag]:
    """Parse ``<tag>[\\t<G|S>]`` lines; the first occurrence of a tag wins."""
    tags = {}
    for lineno, line in enumerate(iter_lines(source), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) > 2:
            raise ParseError(f"too many columns in {line!r}", lineno)
        kind = TagKind.GENERIC
        if len(cols) == 2:
            try:
                kind = TagKind(cols[1].strip().upper())
            except ValueError:
                raise ParseError(f"unknown tag class {cols[1]!r}", lineno) from None
        try:
            text = normalize_tag(cols[0])
        except NormalizationEmpty as exc:
            raise ParseError(str(exc), lineno) from None
        tags.setdefault(text, Tag(text, kind))
    return list(tags.values())


def serialize_tagset(tags: Iterable[Tag]) -> bytes:
    return "".join(f"{t.text}\t{t.kind.value}\n" for t in tags).encode("utf-8")


def parse_qrels(source: Source) -> List[QrelEntry]:
    """Parse ``<request_id> 0 <candidate_id> <rating>`` lines."""
    entries = []
    seen = set()
    for lineno, line in enumerate(iter_lines(source), 1):
        if not line.strip():
            continue
        cols = line.split()
        if len(cols) != 4:
            raise ParseError(f"expected 4 columns, got {len(cols)}", lineno)
        request_id, _, candidate_id, raw_rating = cols
        try:
            rating = int(raw_rating)
        except ValueError:
            raise ParseError(f"rating {raw_rating!r} is not an integer", lineno) from None
        check_rating(rating, f"line {lineno}")
        if (request_id, candidate_id) in seen:
            raise DuplicateIdError(f"line {lineno}: duplicate judgment {request_id} {candidate_id}")
        seen.add((request_id, candidate_id))
        entries.append(QrelEntry(request_id, candidate_id, rating))
    return entries


def serialize_qrels(entries: Iterable[QrelEntry]) -> bytes:
    return "".join(
        f"{e.request_id} 0 {e.candidate_id} {e.rating}\n" for e in entries
    ).encode("utf-8")
