"""P@k and reciprocal rank over ranked runs and graded judgments."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .corpus import RATINGS, QrelEntry
from .errors import DomainError, EmptyRunError

log = logging.getLogger(__name__)

RELEVANT_RATINGS = frozenset({3, 4})


def is_relevant(rating: int) -> bool:
    """A judgment counts as relevant when rated 3 or 4."""
    if rating not in RATINGS:
        raise DomainError(f"rating {rating!r} not in {{-1..4}}")
    return rating in RELEVANT_RATINGS


def _relevant(candidate_id: str, judgments: Mapping[str, int]) -> bool:
    rating = judgments.get(candidate_id)
    return rating is not None and is_relevant(rating)


def precision_at_k(ranked: Sequence[str], judgments: Mapping[str, int], k: int = 5) -> float:
    """Relevant items among the first ``k`` divided by ``k``.

    Short lists are not rescaled (two relevant items out of two scores 0.4
    at k=5); unjudged ids are non-relevant.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(1 for cid in ranked[:k] if _relevant(cid, judgments)) / k


def reciprocal_rank(ranked: Sequence[str], judgments: Mapping[str, int]) -> float:
    for position, cid in enumerate(ranked, 1):
        if _relevant(cid, judgments):
            return 1.0 / position
    return 0.0


@dataclass
class EvalReport:
    per_request: Dict[str, Tuple[float, float]] = field(default_factory=dict)
    mean_p_at_k: float = 0.0
    mrr: float = 0.0
    k: int = 5

    def lines(self, per_request: bool = False) -> list:
        """Tab-separated report lines as printed by ``ctxsugg eval``."""
        out = []
        if per_request:
            for rid, (p, rr) in self.per_request.items():
                out.append(f"{rid}\tP@{self.k}\t{p:.4f}\tRR\t{rr:.4f}")
        out.append(f"P@{self.k}\t{self.mean_p_at_k:.4f}")
        out.append(f"MRR\t{self.mrr:.4f}")
        return out


def group_qrels(qrels: Iterable[QrelEntry]) -> Dict[str, Dict[str, int]]:
    grouped: Dict[str, Dict[str, int]] = {}
    for e in qrels:
        grouped.setdefault(e.request_id, {})[e.candidate_id] = e.rating
    return grouped


def evaluate_run(
    run: Mapping[str, Sequence[str]],
    qrels: Iterable[QrelEntry],
    k: int = 5,
    judged_only: bool = False,
) -> EvalReport:
    """Per-request P@k and RR plus their means over the run's requests.

    A run request with no judgments scores (0, 0) and logs a warning, or
    is skipped when ``judged_only`` is set.
    """
    if not run:
        raise EmptyRunError("run contains no requests")
    judgments = group_qrels(qrels)
    report = EvalReport(k=k)
    for rid, ranked in run.items():
        if rid not in judgments:
            if judged_only:
                continue
            log.warning("request %s has no relevance judgments; scoring it as 0", rid)
        j = judgments.get(rid, {})
        report.per_request[rid] = (precision_at_k(ranked, j, k), reciprocal_rank(ranked, j))
    if not report.per_request:
        raise EmptyRunError("no judged requests in run")
    n = len(report.per_request)
    report.mean_p_at_k = math.fsum(p for p, _ in report.per_request.values()) / n
    report.mrr = math.fsum(rr for _, rr in report.per_request.values()) / n
    return report
