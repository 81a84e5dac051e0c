"""Tag enrichment for untagged attractions and candidates.

A tag is assigned when every content term of the tag is matched by some
description token. Generic tags accept synonyms (similarity above 0.75);
specific tags need a near-exact hit (similarity of at least 0.95).
Items that already carry tags are never modified.
"""

from dataclasses import replace
from typing import Collection, FrozenSet, Iterable, Optional, Sequence, Tuple

from .corpus import Candidate, ProfileAttraction, Request, Tag, TagKind, TagSource, UserProfile
from .lexicon import SimilarityProvider
from .text import Description, tokenize

GENERIC_THRESHOLD = 0.75
SPECIFIC_THRESHOLD = 0.95


def _stopwords_of(provider) -> FrozenSet[str]:
    return frozenset(getattr(provider, "stopwords", ()) or ())


def tag_terms(tag: Tag, stopwords: Collection[str] = ()) -> Tuple[str, ...]:
    """Content words of a tag: "shopping for shoes" -> ("shopping", "shoes")."""
    return tuple(t for t in tokenize(tag.text) if t not in stopwords)


def _all_terms_match(desc, terms, provider, accept) -> bool:
    if not terms or not len(desc):
        return False
    sim = provider.word_similarity
    return all(any(accept(sim(tok, term)) for tok in desc) for term in terms)


def match_specific_tag(
    desc: Description,
    tag: Tag,
    provider: SimilarityProvider,
    stopwords: Optional[Collection[str]] = None,
) -> bool:
    if stopwords is None:
        stopwords = _stopwords_of(provider)
    return _all_terms_match(
        desc, tag_terms(tag, stopwords), provider, lambda s: s >= SPECIFIC_THRESHOLD
    )


def match_generic_tag(
    desc: Description,
    tag: Tag,
    provider: SimilarityProvider,
    stopwords: Optional[Collection[str]] = None,
) -> bool:
    if stopwords is None:
        stopwords = _stopwords_of(provider)
    return _all_terms_match(
        desc, tag_terms(tag, stopwords), provider, lambda s: s > GENERIC_THRESHOLD
    )


def matching_tags(
    desc: Description, tagset: Iterable[Tag], provider: SimilarityProvider
) -> FrozenSet[Tag]:
    """Every tagset tag whose kind-appropriate matcher accepts ``desc``."""
    stopwords = _stopwords_of(provider)
    matched = set()
    for tag in tagset:
        match = match_specific_tag if tag.kind is TagKind.SPECIFIC else match_generic_tag
        if match(desc, tag, provider, stopwords):
            matched.add(tag)
    return frozenset(matched)


def enrich_attraction(
    a: ProfileAttraction, tagset: Sequence[Tag], provider: SimilarityProvider
) -> ProfileAttraction:
    if a.tags:
        return a
    tags = matching_tags(a.description, tagset, provider)
    if not tags:
        return a
    return replace(a, tags=tags, tags_source=TagSource.ENRICHED)


def enrich_profile(
    p: UserProfile, tagset: Sequence[Tag], provider: SimilarityProvider
) -> UserProfile:
    attractions = tuple(enrich_attraction(a, tagset, provider) for a in p.attractions)
    if all(new is old for new, old in zip(attractions, p.attractions)):
        return p
    return replace(p, attractions=attractions)


def enrich_candidate(
    c: Candidate, tagset: Sequence[Tag], provider: SimilarityProvider
) -> Candidate:
    if c.tags:
        return c
    tags = matching_tags(c.description, tagset, provider)
    return replace(c, tags=tags) if tags else c


def enrich_candidates(
    r: Request, tagset: Sequence[Tag], provider: SimilarityProvider
) -> Request:
    candidates = tuple(enrich_candidate(c, tagset, provider) for c in r.candidates)
    if all(new is old for new, old in zip(candidates, r.candidates)):
        return r
    return r.with_candidates(candidates)


def newly_tagged(before: UserProfile, after: UserProfile) -> int:
    """Number of attractions that gained tags between two profile versions."""
    return sum(
        1 for old, new in zip(before.attractions, after.attractions) if not old.tags and new.tags
    )
