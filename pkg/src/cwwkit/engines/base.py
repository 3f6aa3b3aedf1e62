from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from ..vocab import CRITERIA, EQUAL, TERMS, VocabularyError, rank


class EngineError(ValueError):
    pass


@dataclass(frozen=True)
class Recommendation:
    engine: str
    scores: dict[str, Any]
    frequency: str
    satisfaction: str | None = None
    details: dict[str, Any] = field(default_factory=dict, compare=False)


def argmax_lowest(scores: Mapping[str, Any], key: Callable[[Any], Any] = lambda s: s) -> str:
    """Frequency with the largest score; ties go to the lowest frequency."""
    if not scores:
        raise EngineError("no frequencies to choose from")
    freqs = sorted(scores, key=_freq_order)
    best = freqs[0]
    for f in freqs[1:]:
        if key(scores[f]) > key(scores[best]):
            best = f
    return best


def _freq_order(f: str) -> tuple[int, str]:
    digits = "".join(ch for ch in f if ch.isdigit())
    return (int(digits) if digits else 0, f)


def criterion_ranks(feedback: Mapping[str, str], criteria: Sequence[str] = CRITERIA) -> list[int]:
    out = []
    for crit in criteria:
        if crit not in feedback:
            raise EngineError(f"missing word for criterion {crit}")
        try:
            out.append(rank(crit, feedback[crit]))
        except VocabularyError:
            raise EngineError(f"unknown word {feedback[crit]!r} for criterion {crit}") from None
    return out


def weight_ranks(weights: Mapping[str, str] | None, criteria: Sequence[str] = CRITERIA) -> list[int]:
    """Integer weight indices (U=1 .. VI=5); ``None`` or Equal gives all ones."""
    if weights is None or is_equal(weights):
        return [1] * len(criteria)
    out = []
    for crit in criteria:
        w = weights.get(crit)
        if w not in TERMS["weight"]:
            raise EngineError(f"unknown weight {w!r} for criterion {crit}")
        out.append(rank("weight", w))
    return out


def is_equal(weights: Mapping[str, str] | None) -> bool:
    return weights is None or all(v == EQUAL for v in weights.values())
