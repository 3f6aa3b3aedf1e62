"""Symbolic (ordinal convex-combination) engine."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

from ..vocab import TERMS
from .base import EngineError, Recommendation, argmax_lowest, criterion_ranks, weight_ranks

DEFAULT_CAP = 4


def round_half_away(q: Fraction) -> int:
    return int(math.copysign(math.floor(abs(q) + Fraction(1, 2)), q))


def _combine(w_hi: Fraction, hi: int, lo: int, cap: int) -> int:
    return min(cap, lo + round_half_away(w_hi * (hi - lo)))


def sm_aggregate(terms: Sequence[int], weights: Sequence, cap: int = DEFAULT_CAP, pairing: str = "literal") -> int:
    """Recursive convex combination of ordinal term indices.

    ``weights`` must sum to one. With ``pairing="literal"`` the terms and the
    weights are each sorted in descending order and paired by position; with
    ``"attached"`` each weight stays with its term while terms are sorted.
    """
    if not terms:
        raise EngineError("empty aggregation")
    if len(terms) != len(weights):
        raise EngineError("terms and weights differ in length")
    ws = [Fraction(w) if not isinstance(w, float) else Fraction(w).limit_denominator(10**9) for w in weights]
    if abs(sum(ws) - 1) > Fraction(1, 10**9):
        raise EngineError(f"weights sum to {float(sum(ws))}, not 1")
    if pairing == "literal":
        pairs = list(zip(sorted(terms, reverse=True), sorted(ws, reverse=True)))
    elif pairing == "attached":
        pairs = sorted(zip(terms, ws), key=lambda p: (p[0], p[1]), reverse=True)
    else:
        raise EngineError(f"unknown pairing {pairing!r}")
    return _fold(pairs, cap)


def _fold(pairs: list[tuple[int, Fraction]], cap: int) -> int:
    term, w = pairs[0]
    if len(pairs) == 1:
        return term
    rest = 1 - w
    if rest == 0:
        return term
    tail = _fold([(t, v / rest) for t, v in pairs[1:]], cap)
    if term >= tail:
        return _combine(w, term, tail, cap)
    return _combine(rest, tail, term, cap)


def normalized_weights(weights: Mapping[str, str] | None) -> list[Fraction]:
    ranks = weight_ranks(weights)
    total = sum(ranks)
    return [Fraction(r, total) for r in ranks]


def sm_score_frequency(feedback: Mapping[str, str], weights: Mapping[str, str] | None = None,
                       cap: int = DEFAULT_CAP, pairing: str = "literal") -> int:
    return sm_aggregate(criterion_ranks(feedback), normalized_weights(weights), cap, pairing)


def sm_satisfaction(index: int) -> str:
    return TERMS["satisfaction"][index - 1]


def sm_recommend(per_frequency: Mapping[str, Mapping[str, str]], weights: Mapping[str, str] | None = None,
                 cap: int = DEFAULT_CAP, pairing: str = "literal") -> Recommendation:
    scores = {f: sm_score_frequency(fb, weights, cap, pairing) for f, fb in per_frequency.items()}
    best = argmax_lowest(scores)
    return Recommendation("sm", scores, best, sm_satisfaction(scores[best]))
