"""Recommendation engines.

Every engine scores each frequency from one user's per-criterion words and
picks the frequency with the best score, breaking ties toward the lowest
frequency. ``recommend`` dispatches by engine key.
"""

from __future__ import annotations

from typing import Mapping

from .base import EngineError, Recommendation, argmax_lowest
from .extension import ep_recommend, ep_satisfaction, ep_score_frequency
from .perceptual import lwa, pc_recommend, pc_satisfaction, pc_score_frequency
from .symbolic import sm_aggregate, sm_recommend, sm_satisfaction
from .twotuple import TwoTuple, ttp_aggregate, ttp_recommend, ttp_satisfaction

ENGINES = ("pc", "ep", "sm", "2tp")


def recommend(engine: str, feedback: Mapping[str, Mapping[str, str]], weights=None, codebook=None,
              **options) -> Recommendation:
    if engine == "pc":
        if codebook is None:
            raise EngineError("perceptual computing needs a codebook")
        return pc_recommend(feedback, weights, codebook, **options)
    if engine == "ep":
        return ep_recommend(feedback, weights)
    if engine == "sm":
        return sm_recommend(feedback, weights, **options)
    if engine == "2tp":
        return ttp_recommend(feedback, weights)
    raise EngineError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")


__all__ = [
    "ENGINES", "EngineError", "Recommendation", "TwoTuple", "argmax_lowest", "recommend",
    "ep_recommend", "ep_satisfaction", "ep_score_frequency",
    "lwa", "pc_recommend", "pc_satisfaction", "pc_score_frequency",
    "sm_aggregate", "sm_recommend", "sm_satisfaction",
    "ttp_aggregate", "ttp_recommend", "ttp_satisfaction",
]
