"""Perceptual-computing engine over interval type-2 codebooks.

Words are aggregated with an interval weighted average evaluated level by
level: at each membership level the operand and weight cuts are intervals,
and the aggregate cut comes from an exhaustive switch-point search. Upper
memberships use levels up to 1; lower memberships use levels up to the
smallest lower-membership height among the inputs.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ..codebook import Codebook
from ..fuzzy import DEFAULT_RESOLUTION, Fou, GridSet, centroid_mean, grid, jaccard_similarity
from ..vocab import CRITERIA
from .base import EngineError, Recommendation, argmax_lowest, is_equal

DEFAULT_LEVELS = 101


def interval_weighted_average(xl, xr, wl, wr) -> tuple[np.ndarray, np.ndarray]:
    """Bounds of ``sum(x w) / sum(w)`` with ``x`` in ``[xl, xr]`` and ``w`` in ``[wl, wr]``.

    Arrays have shape ``(n, levels)``; the search runs per column. The
    minimum puts upper weights on the smallest operands and lower weights on
    the rest, switching at one of ``n + 1`` points; the maximum mirrors it.
    """
    xl, xr, wl, wr = (np.asarray(a, dtype=float) for a in (xl, xr, wl, wr))
    n = xl.shape[0]
    order_l = np.argsort(xl, axis=0, kind="stable")
    order_r = np.argsort(xr, axis=0, kind="stable")
    sxl = np.take_along_axis(xl, order_l, 0)
    sxr = np.take_along_axis(xr, order_r, 0)
    lo_wl, lo_wr = np.take_along_axis(wl, order_l, 0), np.take_along_axis(wr, order_l, 0)
    hi_wl, hi_wr = np.take_along_axis(wl, order_r, 0), np.take_along_axis(wr, order_r, 0)
    rows = np.arange(n)[:, None]
    yl = np.full(xl.shape[1], np.inf)
    yr = np.full(xl.shape[1], -np.inf)
    for k in range(n + 1):
        first = rows < k
        w = np.where(first, lo_wr, lo_wl)
        den = w.sum(0)
        val = np.divide((sxl * w).sum(0), den, out=np.full(den.shape, np.inf), where=den > 0)
        yl = np.minimum(yl, val)
        w = np.where(first, hi_wl, hi_wr)
        den = w.sum(0)
        val = np.divide((sxr * w).sum(0), den, out=np.full(den.shape, -np.inf), where=den > 0)
        yr = np.maximum(yr, val)
    if not (np.all(np.isfinite(yl)) and np.all(np.isfinite(yr))):
        raise EngineError("weights vanish at some level")
    return yl, yr


def _membership_from_cuts(x: np.ndarray, alphas: np.ndarray, yl: np.ndarray, yr: np.ndarray) -> np.ndarray:
    # cuts are nested, so the left ends rise and the right ends fall with alpha
    yl = np.maximum.accumulate(yl)
    yr = np.minimum.accumulate(yr)
    return np.minimum(_branch(x, alphas, yl), _branch(-x, alphas, -yr))


def _branch(x: np.ndarray, alphas: np.ndarray, ends: np.ndarray) -> np.ndarray:
    # largest level whose cut end lies at or below x, interpolated between levels
    idx = np.searchsorted(ends, x, side="right") - 1
    out = np.zeros_like(x)
    top = idx >= len(alphas) - 1
    out[top] = alphas[-1]
    mid = (idx >= 0) & ~top
    i = idx[mid]
    span = ends[i + 1] - ends[i]
    out[mid] = alphas[i] + (x[mid] - ends[i]) / span * (alphas[i + 1] - alphas[i])
    return out


def lwa(words: Sequence[Fou], weights: Sequence[Fou] | None = None, levels: int = DEFAULT_LEVELS,
        resolution: int = DEFAULT_RESOLUTION) -> GridSet:
    """Linguistic weighted average of word models, sampled on the word grid.

    ``weights=None`` means crisp equal weights.
    """
    if not words:
        raise EngineError("empty aggregation")
    if weights is not None and len(weights) != len(words):
        raise EngineError("words and weights differ in length")
    x = grid(resolution)
    n = len(words)

    alphas = np.linspace(0.0, 1.0, levels)
    cuts = [f.umf.alpha_cut(alphas) for f in words]
    xl, xr = np.array([c[0] for c in cuts]), np.array([c[1] for c in cuts])
    if weights is None:
        wl = wr = np.ones((n, levels))
    else:
        wc = [w.umf.alpha_cut(alphas) for w in weights]
        wl, wr = np.array([c[0] for c in wc]), np.array([c[1] for c in wc])
    yl, yr = interval_weighted_average(xl, xr, wl, wr)
    upper = _membership_from_cuts(x, alphas, yl, yr)

    heights = [f.lmf_height for f in words] + ([w.lmf_height for w in weights] if weights is not None else [])
    h = min(heights)
    alphas = np.linspace(0.0, h, levels)
    cuts = [f.lmf.alpha_cut(alphas, f.lmf_height) for f in words]
    xl, xr = np.array([c[0] for c in cuts]), np.array([c[1] for c in cuts])
    if weights is None:
        wl = wr = np.ones((n, levels))
    else:
        wc = [w.lmf.alpha_cut(alphas, w.lmf_height) for w in weights]
        wl, wr = np.array([c[0] for c in wc]), np.array([c[1] for c in wc])
    yl, yr = interval_weighted_average(xl, xr, wl, wr)
    lower = np.minimum(_membership_from_cuts(x, alphas, yl, yr), upper)
    return GridSet(x, lower, upper)


def _resolve(codebook: Codebook, criterion: str, word: str) -> Fou:
    try:
        return codebook[criterion][word]
    except KeyError:
        raise EngineError(f"unknown word {word!r} for criterion {criterion} in codebook {codebook.name}") from None


def aggregate(feedback: Mapping[str, str], weights: Mapping[str, str] | None, codebook: Codebook,
              levels: int = DEFAULT_LEVELS, resolution: int = DEFAULT_RESOLUTION) -> GridSet:
    for crit in CRITERIA:
        if crit not in feedback:
            raise EngineError(f"missing word for criterion {crit}")
    words = [_resolve(codebook, c, feedback[c]) for c in CRITERIA]
    ws = None
    if not is_equal(weights):
        if "weight" not in codebook:
            raise EngineError(f"codebook {codebook.name} has no weight vocabulary")
        ws = [_resolve(codebook, "weight", weights[c]) for c in CRITERIA]
    return lwa(words, ws, levels, resolution)


def pc_score_frequency(feedback: Mapping[str, str], weights: Mapping[str, str] | None, codebook: Codebook,
                       levels: int = DEFAULT_LEVELS, resolution: int = DEFAULT_RESOLUTION) -> float:
    return centroid_mean(aggregate(feedback, weights, codebook, levels, resolution))


def pc_satisfaction(y: GridSet, codebook: Codebook) -> str:
    """Satisfaction word most similar to ``y``; equal similarity goes to the higher word."""
    if "satisfaction" not in codebook:
        raise EngineError(f"codebook {codebook.name} has no satisfaction vocabulary")
    vocab = codebook["satisfaction"]
    res = y.x.size
    best, best_s = None, -1.0
    for word in vocab.words:
        s = jaccard_similarity(y, vocab[word].sample(res))
        if s >= best_s:
            best, best_s = word, s
    return best


def pc_recommend(per_frequency: Mapping[str, Mapping[str, str]], weights: Mapping[str, str] | None,
                 codebook: Codebook, levels: int = DEFAULT_LEVELS,
                 resolution: int = DEFAULT_RESOLUTION) -> Recommendation:
    sets = {f: aggregate(fb, weights, codebook, levels, resolution) for f, fb in per_frequency.items()}
    scores = {f: centroid_mean(s) for f, s in sets.items()}
    best = argmax_lowest(scores)
    sat = pc_satisfaction(sets[best], codebook) if "satisfaction" in codebook else None
    return Recommendation("pc", scores, best, sat, {"aggregates": sets})
