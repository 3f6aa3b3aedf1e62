"""2-tuple linguistic engine."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ..vocab import TERMS
from .base import EngineError, Recommendation, argmax_lowest, criterion_ranks, weight_ranks
from .symbolic import round_half_away


@dataclass(frozen=True, order=True)
class TwoTuple:
    """Term index with symbolic translation ``alpha`` in [-0.5, 0.5)."""

    index: int
    alpha: Fraction = Fraction(0)

    def __post_init__(self):
        if not (Fraction(-1, 2) <= self.alpha < Fraction(1, 2)):
            raise EngineError(f"translation {self.alpha} outside [-0.5, 0.5)")

    @classmethod
    def from_beta(cls, beta) -> "TwoTuple":
        beta = Fraction(beta)
        i = round_half_away(beta)
        return cls(i, beta - i)

    @property
    def beta(self) -> Fraction:
        return self.index + self.alpha

    def __str__(self) -> str:
        return f"(s{self.index}, {float(self.alpha):.2f})"


def ttp_aggregate(indices: Sequence[int], weights: Sequence[int] | None = None) -> TwoTuple:
    if not indices:
        raise EngineError("empty aggregation")
    weights = [1] * len(indices) if weights is None else list(weights)
    if len(weights) != len(indices) or any(w <= 0 for w in weights):
        raise EngineError("weights must be positive and match the terms")
    return TwoTuple.from_beta(Fraction(sum(i * w for i, w in zip(indices, weights)), sum(weights)))


def ttp_score_frequency(feedback: Mapping[str, str], weights: Mapping[str, str] | None = None) -> TwoTuple:
    return ttp_aggregate(criterion_ranks(feedback), weight_ranks(weights))


def ttp_satisfaction(t: TwoTuple) -> str:
    return TERMS["satisfaction"][t.index - 1]


def ttp_recommend(per_frequency: Mapping[str, Mapping[str, str]],
                  weights: Mapping[str, str] | None = None) -> Recommendation:
    scores = {f: ttp_score_frequency(fb, weights) for f, fb in per_frequency.items()}
    best = argmax_lowest(scores)
    return Recommendation("2tp", scores, best, ttp_satisfaction(scores[best]))
