"""Rule-based rankers for candidate suggestions.

Three families are provided:

``drec``
    Description/tag-phrase similarity. Candidates are ordered by their best
    tag-phrase score against any profile attraction, ties broken by their
    best description-pair score.
``cov-rec`` / ``cmp-rec``
    Tag-set coverage of the profile's distinct tags and completeness
    against the per-attraction tag lists; one key is primary, the other
    breaks ties.
``r-rec``
    Rating-first: each candidate inherits the rating of the profile
    attraction it matches best (by normalized per-rating tag scores) and is
    ordered by that rating, then by the match score.

Every ordering ends with ascending candidate id, so results never depend on
the input order of candidates.
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Mapping, Sequence, Tuple

from .corpus import RATINGS, Candidate, ProfileAttraction, Request, Tag, UserProfile, sorted_tags
from .errors import UnknownUserError
from .lexicon import ExactMatchSimilarity, SimilarityProvider
from .text import Description, tokenize

NO_RATING = -1


@dataclass(frozen=True)
class ScoredCandidate:
    """One ranked entry.

    ``primary_score``/``secondary_score`` are the ranker's sort keys
    (tag-phrase/description for drec, coverage/completeness or the reverse
    for the C-Rec modes, best match score/0 for r-rec).
    """

    candidate_id: str
    primary_score: float
    secondary_score: float = 0.0
    inherited_rating: int = NO_RATING


@dataclass(frozen=True)
class RankedList:
    request_id: str
    entries: Tuple[ScoredCandidate, ...] = ()
    ranker: str = ""

    @property
    def candidate_ids(self) -> list:
        return [e.candidate_id for e in self.entries]


class CRecMode(str, Enum):
    COVERAGE = "cov-rec"
    COMPLETENESS = "cmp-rec"


# -- D-Rec ---------------------------------------------------------------------


def _mean_pair_similarity(first: Sequence[str], second: Sequence[str], provider) -> float:
    if not first or not second:
        return 0.0
    sim = provider.word_similarity
    # Sum exactly, reading each similarity as the decimal it was written as
    # (0.3, not the binary float below it), so equal scores stay equal.
    # Grouping equal values keeps the exact sum cheap.
    counts = Counter(sim(a, b) for a in first for b in second)
    total = sum(Fraction(str(value)) * n for value, n in counts.items())
    return float(total / (len(first) * len(second)))


def desc_pair_score(
    d_u: Description, d_c: Description, provider: SimilarityProvider
) -> float:
    """Mean pairwise word similarity between two descriptions.

    Sum of ``word_similarity(a, b)`` over all cross pairs divided by
    ``len(d_u) * len(d_c)``; 0.0 when either side is empty.
    """
    return _mean_pair_similarity(tuple(d_u), tuple(d_c), provider)


def tag_phrase(tags: Iterable[Tag]) -> Tuple[str, ...]:
    """Tags joined into one word sequence, in ascending tag order."""
    words = []
    for tag in sorted_tags(tags):
        words.extend(tokenize(tag.text))
    return tuple(words)


def tag_phrase_score(
    tags_u: Iterable[Tag], d_c: Description, provider: SimilarityProvider
) -> float:
    return _mean_pair_similarity(tag_phrase(tags_u), tuple(d_c), provider)


def _check_user(profile: UserProfile, request: Request):
    if profile.user_id != request.user_id:
        raise UnknownUserError([request.user_id])


def _ranked(request, scored, key, ranker) -> RankedList:
    entries = sorted(scored, key=lambda s: key(s) + (s.candidate_id,))
    return RankedList(request.request_id, tuple(entries), ranker)


def rank_drec(
    profile: UserProfile, request: Request, provider: SimilarityProvider = None
) -> RankedList:
    _check_user(profile, request)
    provider = provider or ExactMatchSimilarity()
    scored = []
    for c in request.candidates:
        tag_best = max(tag_phrase_score(a.tags, c.description, provider) for a in profile.attractions)
        desc_best = max(
            desc_pair_score(a.description, c.description, provider) for a in profile.attractions
        )
        scored.append(ScoredCandidate(c.id, tag_best, desc_best))
    return _ranked(request, scored, lambda s: (-s.primary_score, -s.secondary_score), "drec")


# -- C-Rec ---------------------------------------------------------------------


def profile_tag_union(profile: UserProfile) -> FrozenSet[Tag]:
    return frozenset().union(*(a.tags for a in profile.attractions))


def coverage(tau: FrozenSet[Tag], t_c: FrozenSet[Tag]) -> float:
    """Share of the profile's distinct tags present on the candidate."""
    if not tau:
        return 0.0
    return len(tau & t_c) / len(tau)


def completeness(profile: UserProfile, t_c: FrozenSet[Tag]) -> float:
    """Matched tags summed over attractions, over the profile's total tag count."""
    total = sum(len(a.tags) for a in profile.attractions)
    if not total:
        return 0.0
    return sum(len(a.tags & t_c) for a in profile.attractions) / total


def rank_crec(profile: UserProfile, request: Request, mode="cov-rec") -> RankedList:
    _check_user(profile, request)
    mode = CRecMode(mode)
    tau = profile_tag_union(profile)
    scored = []
    for c in request.candidates:
        theta = coverage(tau, c.tags)
        omega = completeness(profile, c.tags)
        if mode is CRecMode.COVERAGE:
            scored.append(ScoredCandidate(c.id, theta, omega))
        else:
            scored.append(ScoredCandidate(c.id, omega, theta))
    return _ranked(request, scored, lambda s: (-s.primary_score, -s.secondary_score), mode.value)


# -- R-Rec ---------------------------------------------------------------------


@dataclass(frozen=True)
class RatingIndex:
    """Per-rating tag statistics of one profile.

    ``counts[(r, t)]`` is the number of attractions rated ``r`` carrying tag
    ``t``; ``totals[r]`` sums those counts; ``scores[(r, t)]`` is the
    normalized share ``counts / totals`` and sums to one per rating.
    """

    totals: Mapping[int, int] = field(default_factory=dict)
    counts: Mapping[Tuple[int, str], int] = field(default_factory=dict)
    scores: Mapping[Tuple[int, str], float] = field(default_factory=dict)

    def score(self, tag, rating: int) -> float:
        text = tag.text if isinstance(tag, Tag) else tag
        return self.scores.get((rating, text), 0.0)


def build_rating_index(profile: UserProfile) -> RatingIndex:
    totals: Dict[int, int] = {r: 0 for r in RATINGS}
    counts: Dict[Tuple[int, str], int] = {}
    for a in profile.attractions:
        for tag in a.tags:
            counts[(a.rating, tag.text)] = counts.get((a.rating, tag.text), 0) + 1
            totals[a.rating] += 1
    scores = {key: n / totals[key[0]] for key, n in counts.items()}
    return RatingIndex(totals=totals, counts=counts, scores=scores)


def candidate_match_score(c: Candidate, a: ProfileAttraction, idx: RatingIndex) -> float:
    """Sum of the normalized scores (at ``a``'s rating) of the tags shared by ``c`` and ``a``."""
    total = idx.totals.get(a.rating, 0)
    if not total:
        return 0.0
    # all shared tags have the same denominator: add counts, divide once
    matched = sum(idx.counts.get((a.rating, t.text), 0) for t in c.tags & a.tags)
    return matched / total


def best_attraction_match(c: Candidate, profile: UserProfile, idx: RatingIndex):
    """``(inherited_rating, score)`` of the best-matching attraction.

    Ties on score go to the higher rating, then to the earlier attraction;
    a candidate matching nothing gets ``(-1, 0.0)``.
    """
    best_score, best_rating = 0.0, NO_RATING
    for a in profile.attractions:
        s = candidate_match_score(c, a, idx)
        if s > best_score or (s == best_score and s > 0 and a.rating > best_rating):
            best_score, best_rating = s, a.rating
    return best_rating, best_score


def rank_rrec(profile: UserProfile, request: Request, index: RatingIndex = None) -> RankedList:
    _check_user(profile, request)
    idx = index if index is not None else build_rating_index(profile)
    scored = []
    for c in request.candidates:
        rating, score = best_attraction_match(c, profile, idx)
        scored.append(ScoredCandidate(c.id, score, 0.0, rating))
    return _ranked(request, scored, lambda s: (-s.inherited_rating, -s.primary_score), "r-rec")


# -- dispatch --------------------------------------------------------------------

ALGORITHMS = ("drec", "cov-rec", "cmp-rec", "r-rec")


def rank(algo: str, profile: UserProfile, request: Request, provider=None) -> RankedList:
    """Rank one request with the named algorithm (see :data:`ALGORITHMS`)."""
    if algo == "drec":
        return rank_drec(profile, request, provider)
    if algo in ("cov-rec", "cmp-rec"):
        return rank_crec(profile, request, algo)
    if algo == "r-rec":
        return rank_rrec(profile, request)
    raise ValueError(f"unknown algorithm {algo!r}; expected one of {', '.join(ALGORITHMS)}")


def rank_all(
    algo: str,
    profiles: Mapping[str, UserProfile],
    requests: Sequence[Request],
    provider=None,
    jobs: int = 1,
) -> list:
    """Rank every request against its user's profile, preserving request order.

    Raises :class:`UnknownUserError` listing every unresolved user before
    any ranking is done.
    """
    missing = [r.user_id for r in requests if r.user_id not in profiles]
    if missing:
        raise UnknownUserError(missing)
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}")
    args = [(algo, profiles[r.user_id], r, provider) for r in requests]
    if jobs <= 1 or len(args) < 2:
        return [rank(*a) for a in args]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_rank_args, args))


def _rank_args(args):
    return rank(*args)
