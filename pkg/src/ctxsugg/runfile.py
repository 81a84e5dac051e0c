"""TREC-style run files.

Each line is ``<request_id> Q0 <candidate_id> <rank> <score> <run_tag>``
with a 1-based rank and a six-decimal score. For r-rec the score column is
``inherited_rating + score / 1000`` so sorting by the column reproduces the
ranking order.
"""

from typing import Dict, Iterable, List

from .errors import DuplicateIdError, FormatError, ParseError
from .rankers import RankedList, ScoredCandidate
from .text import Source, iter_lines


def run_score(entry: ScoredCandidate, ranker: str) -> float:
    if ranker == "r-rec":
        return entry.inherited_rating + entry.primary_score / 1000
    return entry.primary_score


def _check_token(value: str, what: str):
    if not value or any(ch.isspace() for ch in value):
        raise FormatError(f"{what} {value!r} is empty or contains whitespace")


def write_runfile(ranked: Iterable[RankedList], run_tag: str) -> bytes:
    _check_token(run_tag, "run tag")
    lines = []
    for rl in ranked:
        _check_token(rl.request_id, "request id")
        for rank, entry in enumerate(rl.entries, 1):
            _check_token(entry.candidate_id, "candidate id")
            score = run_score(entry, rl.ranker)
            lines.append(
                f"{rl.request_id} Q0 {entry.candidate_id} {rank} {score:.6f} {run_tag}\n"
            )
    return "".join(lines).encode("utf-8")


def parse_runfile(source: Source) -> Dict[str, List[str]]:
    """Ranked candidate ids per request, ordered by the rank column.

    Requests keep their first-appearance order.
    """
    rows: Dict[str, list] = {}
    seen = set()
    for lineno, line in enumerate(iter_lines(source), 1):
        if not line.strip():
            continue
        cols = line.split()
        if len(cols) != 6:
            raise ParseError(f"expected 6 columns, got {len(cols)}", lineno)
        rid, _, cid, rank, score, _ = cols
        try:
            rank_i, _ = int(rank), float(score)
        except ValueError:
            raise ParseError(f"bad rank or score in {line!r}", lineno) from None
        if (rid, cid) in seen:
            raise DuplicateIdError(f"line {lineno}: candidate {cid} ranked twice for {rid}")
        seen.add((rid, cid))
        rows.setdefault(rid, []).append((rank_i, lineno, cid))
    return {rid: [cid for _, _, cid in sorted(items)] for rid, items in rows.items()}
