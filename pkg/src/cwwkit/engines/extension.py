"""Extension-principle engine over triangular tri-tuples."""

from __future__ import annotations

from typing import Mapping

from ..fuzzy import DEFAULT_PROFILE, TriTuple, WeightProfile, tri_mean, tri_product, weighted_distance
from ..vocab import CRITERIA, DISTANCE_TERMS, TERMS, UNIFORM_TRIS
from .base import Recommendation, argmax_lowest, criterion_ranks, is_equal, weight_ranks


def _closest(c: TriTuple, profile: WeightProfile) -> tuple[int, list[float]]:
    # minimum distance; equal distances resolve to the higher index
    dists = [weighted_distance(c, d, profile) for d in DISTANCE_TERMS]
    best = 0
    for j, d in enumerate(dists):
        if d <= dists[best]:
            best = j
    return best + 1, dists


def collective_vector(feedback: Mapping[str, str], weights: Mapping[str, str] | None = None) -> TriTuple:
    """Mean of the word tri-tuples, each multiplied by its weight tri-tuple when weighted.

    The weighted mean is not divided by the total weight mass.
    """
    words = [UNIFORM_TRIS[r - 1] for r in criterion_ranks(feedback)]
    if is_equal(weights):
        return tri_mean(words)
    ws = [UNIFORM_TRIS[r - 1] for r in weight_ranks(weights)]
    return tri_mean(tri_product(x, w) for x, w in zip(words, ws))


def ep_score_frequency(feedback: Mapping[str, str], weights: Mapping[str, str] | None = None,
                       profile: WeightProfile = DEFAULT_PROFILE) -> tuple[TriTuple, int, list[float]]:
    c = collective_vector(feedback, weights)
    index, dists = _closest(c, profile)
    return c, index, dists


def ep_satisfaction(c: TriTuple, profile: WeightProfile = DEFAULT_PROFILE) -> str:
    index, _ = _closest(c, profile)
    return TERMS["satisfaction"][index - 1]


def ep_recommend(per_frequency: Mapping[str, Mapping[str, str]], weights: Mapping[str, str] | None = None,
                 profile: WeightProfile = DEFAULT_PROFILE) -> Recommendation:
    vectors, scores = {}, {}
    for freq, fb in per_frequency.items():
        vectors[freq], scores[freq], _ = ep_score_frequency(fb, weights, profile)
    best = argmax_lowest(scores)
    return Recommendation("ep", scores, best, ep_satisfaction(vectors[best], profile), {"vectors": vectors})


__all__ = ["CRITERIA", "collective_vector", "ep_recommend", "ep_satisfaction", "ep_score_frequency"]
