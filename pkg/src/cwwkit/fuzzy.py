"""Numeric kernels for triangular type-1 sets and interval type-2 word models.

Two representations live here. ``TriTuple`` is a triangular membership
function on the normalized [0, 1] scale, used by the extension-principle
engine. ``Fou`` is a trapezoidal interval type-2 word model on the [0, 10]
word scale, as stored in the codebooks; ``GridSet`` is its sampled form and
is also what the linguistic weighted average produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SCALE = (0.0, 10.0)
DEFAULT_RESOLUTION = 1001
_EPS = 1e-12


class FuzzyError(ValueError):
    """Raised when a fuzzy-set operation receives an invalid input."""


def round_half_away(x: float, ndigits: int = 0) -> float:
    """Round half away from zero (``round(0.5) == 1``, ``round(-0.5) == -1``)."""
    q = 10.0**ndigits
    # the 1e-9 guard absorbs binary representation error, e.g. 0.125 -> 0.12499999
    return math.copysign(math.floor(abs(x) * q + 0.5 + 1e-9) / q, x)


# ---------------------------------------------------------------------------
# Type-1 triangular tuples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TriTuple:
    """Triangular membership function ``(l, m, r)`` on [0, 1]."""

    l: float
    m: float
    r: float

    def __post_init__(self):
        if not (-_EPS <= self.l <= self.m + _EPS and self.m <= self.r + _EPS and self.r <= 1 + _EPS):
            raise FuzzyError(f"invalid tri-tuple ({self.l}, {self.m}, {self.r}): need 0 <= l <= m <= r <= 1")

    def astuple(self) -> tuple[float, float, float]:
        return (self.l, self.m, self.r)

    def rounded(self, ndigits: int = 2) -> tuple[float, float, float]:
        return tuple(round_half_away(v, ndigits) for v in self.astuple())


@dataclass(frozen=True)
class WeightProfile:
    """Weights of the left, apex and right terms in :func:`weighted_distance`."""

    p1: float = 0.2
    p2: float = 0.6
    p3: float = 0.2

    def __post_init__(self):
        if min(self.p1, self.p2, self.p3) < 0 or abs(self.p1 + self.p2 + self.p3 - 1) > 1e-9:
            raise FuzzyError("weight profile must be non-negative and sum to 1")


DEFAULT_PROFILE = WeightProfile()


def tri_product(a: TriTuple, b: TriTuple) -> TriTuple:
    """Product of two triangular sets: extreme corner products and the apex product."""
    corners = (a.l * b.l, a.l * b.r, a.r * b.l, a.r * b.r)
    return TriTuple(min(corners), a.m * b.m, max(corners))


def tri_mean(items: Iterable[TriTuple]) -> TriTuple:
    items = list(items)
    if not items:
        raise FuzzyError("empty aggregation")
    n = len(items)
    return TriTuple(
        sum(t.l for t in items) / n,
        sum(t.m for t in items) / n,
        sum(t.r for t in items) / n,
    )


def weighted_distance(a: TriTuple, b: TriTuple, w: WeightProfile = DEFAULT_PROFILE) -> float:
    return math.sqrt(w.p1 * (a.l - b.l) ** 2 + w.p2 * (a.m - b.m) ** 2 + w.p3 * (a.r - b.r) ** 2)


# ---------------------------------------------------------------------------
# Interval type-2 word models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Trapezoid:
    """Normal trapezoid with knots ``a <= b <= c <= d`` on the word scale.

    A vertical edge (``a == b`` or ``c == d``) takes the plateau value at the
    shared abscissa.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        lo, hi = SCALE
        if not (lo <= self.a <= self.b <= self.c <= self.d <= hi):
            raise FuzzyError(f"unordered knots ({self.a}, {self.b}, {self.c}, {self.d})")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a, b, c, d = self.a, self.b, self.c, self.d
        rise = np.divide(x - a, b - a, out=np.ones_like(x), where=(b > a) & (x < b))
        fall = np.divide(d - x, d - c, out=np.ones_like(x), where=(d > c) & (x > c))
        mu = np.where(x < b, rise, np.where(x > c, fall, 1.0))
        return np.where((x < a) | (x > d), 0.0, mu)

    def astuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def alpha_cut(self, alpha, height: float = 1.0):
        """Left and right ends of the cut at level ``alpha`` (``alpha <= height``)."""
        t = np.asarray(alpha, dtype=float) / height
        return self.a + t * (self.b - self.a), self.d - t * (self.d - self.c)


@dataclass(frozen=True)
class GridSet:
    """Interval type-2 set sampled on an ascending grid."""

    x: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        if not (self.x.shape == self.lower.shape == self.upper.shape):
            raise FuzzyError("grid and membership arrays must have equal shape")

    @property
    def crisp(self) -> bool:
        return bool(np.allclose(self.lower, self.upper))


@dataclass(frozen=True)
class Fou:
    """Trapezoidal interval type-2 word model.

    ``centroid`` and ``center`` hold the values printed alongside the model
    in its source table; they are kept for comparison, never used in place
    of :func:`km_centroid`.
    """

    umf: Trapezoid
    lmf: Trapezoid
    lmf_height: float = 1.0
    centroid: tuple[float, float] | None = None
    center: float | None = None

    def __post_init__(self):
        if not (0 < self.lmf_height <= 1):
            raise FuzzyError(f"lmf height {self.lmf_height} outside (0, 1]")
        if self.centroid is not None:
            cl, cr = self.centroid
            if cl > cr + _EPS:
                raise FuzzyError(f"cached centroid [{cl}, {cr}] is reversed")
            if self.center is not None and not (cl - 0.01 <= self.center <= cr + 0.01):
                raise FuzzyError(f"cached center {self.center} outside [{cl}, {cr}]")

    @classmethod
    def from_knots(cls, umf: Sequence[float], lmf: Sequence[float], height: float = 1.0, **kw) -> "Fou":
        return cls(Trapezoid(*umf), Trapezoid(*lmf), height, **kw)

    def membership(self, x: float) -> tuple[float, float]:
        lo, hi = SCALE
        if not (lo <= x <= hi):
            raise FuzzyError(f"{x} out of scale [{lo}, {hi}]")
        return float(self.lmf_height * self.lmf(x)), float(self.umf(x))

    def sample(self, resolution: int = DEFAULT_RESOLUTION) -> GridSet:
        x = grid(resolution)
        return GridSet(x, self.lmf_height * self.lmf(x), self.umf(x))

    def containment_violation(self, resolution: int = DEFAULT_RESOLUTION) -> float:
        """Largest amount by which the lower membership exceeds the upper one."""
        s = self.sample(resolution)
        return float(np.max(s.lower - s.upper))


def grid(resolution: int = DEFAULT_RESOLUTION) -> np.ndarray:
    return np.linspace(SCALE[0], SCALE[1], resolution)


def _as_grid(f, resolution: int) -> GridSet:
    return f if isinstance(f, GridSet) else f.sample(resolution)


# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------


def _km_endpoint(x: np.ndarray, lower: np.ndarray, upper: np.ndarray, left: bool, max_iter: int = 100) -> float:
    # switch-point iteration: weights take the upper membership on one side of
    # the current estimate and the lower membership on the other
    theta = (lower + upper) / 2
    if theta.sum() <= 0:
        theta = upper
    c = float(np.dot(x, theta) / theta.sum())
    k = -1
    for _ in range(max_iter):
        k_new = int(np.searchsorted(x, c, side="right")) - 1
        if k_new == k:
            break
        k = k_new
        below = np.arange(x.size) <= k
        theta = np.where(below, upper, lower) if left else np.where(below, lower, upper)
        den = theta.sum()
        if den <= 0:
            # all weight on a side with zero lower membership; fall back to the umf mass
            theta = upper
            den = theta.sum()
        c = float(np.dot(x, theta) / den)
    return c


def km_centroid(f, resolution: int = DEFAULT_RESOLUTION) -> tuple[float, float]:
    """Centroid interval ``[c_l, c_r]`` by Karnik-Mendel iteration.

    ``f`` is a :class:`Fou` (sampled at ``resolution`` points on [0, 10]) or
    an already sampled :class:`GridSet`.
    """
    if not isinstance(f, GridSet) and resolution < 2:
        raise FuzzyError("resolution must be at least 2")
    s = _as_grid(f, resolution)
    if s.upper.sum() <= 0:
        raise FuzzyError("empty set")
    cl = _km_endpoint(s.x, s.lower, s.upper, left=True)
    cr = _km_endpoint(s.x, s.lower, s.upper, left=False)
    return cl, cr


def centroid_mean(f, resolution: int = DEFAULT_RESOLUTION) -> float:
    cl, cr = km_centroid(f, resolution)
    return (cl + cr) / 2


def type1_centroid(x: np.ndarray, mu: np.ndarray) -> float:
    total = mu.sum()
    if total <= 0:
        raise FuzzyError("empty set")
    return float(np.dot(x, mu) / total)


@dataclass(frozen=True)
class FuzzinessInterval:
    f_l: float
    f_r: float

    @property
    def mean(self) -> float:
        return (self.f_l + self.f_r) / 2


def fuzziness_kernel(u):
    return 1.0 - np.abs(2.0 * np.asarray(u, dtype=float) - 1.0)


def fuzziness(f, resolution: int = DEFAULT_RESOLUTION) -> FuzzinessInterval:
    """Fuzziness interval over all embedded type-1 sets.

    Each embedded set is scored by the mean of ``1 - |2u - 1|`` over the grid
    points of the upper support. The kernel is concave, so the least fuzzy
    embedded set takes whichever bound lies farther from 0.5 and the most
    fuzzy one takes 0.5 clipped into the band.
    """
    s = _as_grid(f, resolution)
    support = s.upper > 0
    n = int(support.sum())
    if n == 0:
        return FuzzinessInterval(0.0, 0.0)
    lo, hi = s.lower[support], s.upper[support]
    far = np.where(np.abs(lo - 0.5) >= np.abs(hi - 0.5), lo, hi)
    near = np.clip(0.5, lo, hi)
    return FuzzinessInterval(float(fuzziness_kernel(far).sum() / n), float(fuzziness_kernel(near).sum() / n))


def tabulated_fuzziness(f, resolution: int = DEFAULT_RESOLUTION) -> FuzzinessInterval:
    """Fuzziness interval in the convention of the published word tables.

    ``f_r`` is the upper bound of :func:`fuzziness`. ``f_l`` counts only grid
    points strictly inside the band (lower < upper) and is averaged over the
    whole grid, so a word whose lower and upper memberships coincide scores
    ``f_l = 0``. This is not an embedded-set bound; it is the reading that
    reproduces the printed intervals.
    """
    s = _as_grid(f, resolution)
    support = s.upper > 0
    if not support.any():
        return FuzzinessInterval(0.0, 0.0)
    band = s.upper - s.lower > 1e-9
    far = np.where(np.abs(s.lower - 0.5) >= np.abs(s.upper - 0.5), s.lower, s.upper)
    f_l = float((fuzziness_kernel(far) * band).sum() / s.x.size)
    f_r = float(fuzziness_kernel(np.clip(0.5, s.lower, s.upper))[support].sum() / support.sum())
    return FuzzinessInterval(f_l, f_r)


def jaccard_similarity(a, b, resolution: int = DEFAULT_RESOLUTION) -> float:
    sa, sb = _as_grid(a, resolution), _as_grid(b, resolution)
    if sa.x.shape != sb.x.shape or not np.allclose(sa.x, sb.x):
        raise FuzzyError("sets must share a grid")
    num = np.minimum(sa.upper, sb.upper).sum() + np.minimum(sa.lower, sb.lower).sum()
    den = np.maximum(sa.upper, sb.upper).sum() + np.maximum(sa.lower, sb.lower).sum()
    if den <= 0:
        raise FuzzyError("undefined similarity")
    return float(num / den)
