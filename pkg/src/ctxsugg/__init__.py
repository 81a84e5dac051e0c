"""Rule-based contextual suggestion: tag enrichment, ranking and evaluation."""

from .corpus import (
    Candidate,
    Description,
    ProfileAttraction,
    QrelEntry,
    Request,
    Tag,
    TagKind,
    TagSource,
    UserProfile,
    normalize_tag,
    parse_profiles,
    parse_qrels,
    parse_requests,
    parse_tagset,
)
from .enrich import enrich_attraction, enrich_candidates, enrich_profile
from .lexicon import ExactMatchSimilarity, Lexicon, LexiconSimilarity, parse_lexicon
from .metrics import EvalReport, evaluate_run
from .rankers import (
    RankedList,
    RatingIndex,
    ScoredCandidate,
    build_rating_index,
    rank,
    rank_all,
    rank_crec,
    rank_drec,
    rank_rrec,
)
from .runfile import parse_runfile, write_runfile

__version__ = "0.1.0"
