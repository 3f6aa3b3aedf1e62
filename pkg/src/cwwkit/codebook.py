"""Word codebooks: loading, validation, Person-FOU sampling and encoders."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Protocol, Sequence

import numpy as np

from .fuzzy import DEFAULT_RESOLUTION, SCALE, Fou, FuzzyError, km_centroid

COLUMNS = [
    "criterion", "word", "rank",
    "umf_a", "umf_b", "umf_c", "umf_d",
    "lmf_a", "lmf_b", "lmf_c", "lmf_d", "lmf_h",
    "centroid_l", "centroid_r", "center",
]
WORDS_PER_CRITERION = 5

# bundled codebooks: <mode>_<method>.csv
MODES = ("multi", "single")
METHODS = ("ia", "eia", "hma")


class CodebookError(ValueError):
    """Malformed or inconsistent codebook data."""


@dataclass(frozen=True)
class CriterionVocabulary:
    name: str
    words: tuple[str, ...]
    fous: dict[str, Fou] = field(compare=True)

    def __post_init__(self):
        if len(set(self.words)) != len(self.words):
            raise CodebookError(f"{self.name}: duplicate word labels")

    def rank(self, word: str) -> int:
        return self.words.index(word) + 1

    def __getitem__(self, word: str) -> Fou:
        try:
            return self.fous[word]
        except KeyError:
            raise KeyError(f"word not in codebook: {self.name}/{word}") from None


@dataclass(frozen=True)
class Codebook:
    criteria: tuple[CriterionVocabulary, ...]
    name: str = ""
    scale: tuple[float, float] = SCALE

    def __getitem__(self, criterion: str) -> CriterionVocabulary:
        for c in self.criteria:
            if c.name == criterion:
                return c
        raise KeyError(f"criterion not in codebook: {criterion}")

    def __contains__(self, criterion: str) -> bool:
        return any(c.name == criterion for c in self.criteria)

    def __iter__(self) -> Iterator[CriterionVocabulary]:
        return iter(self.criteria)

    def fou(self, criterion: str, word: str) -> Fou:
        return self[criterion][word]

    def items(self) -> Iterator[tuple[str, str, Fou]]:
        for c in self.criteria:
            for w in c.words:
                yield c.name, w, c.fous[w]


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def parse_codebook(source, name: str | None = None) -> Codebook:
    """Parse a codebook CSV from a path or an open text stream.

    Rows must be grouped by criterion with ranks 1..5 in order. Errors name
    the source, the line number and the violated invariant.
    """
    if isinstance(source, (str, Path)):
        label = str(source)
        with open(source, newline="", encoding="utf-8") as fh:
            return _parse(fh, label, name or Path(source).stem)
    return _parse(source, getattr(source, "name", "<stream>"), name or "")


def _parse(fh, label: str, name: str) -> Codebook:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header != COLUMNS:
        raise CodebookError(f"{label}:1: header must be {','.join(COLUMNS)}")
    order: list[str] = []
    words: dict[str, list[str]] = {}
    fous: dict[str, dict[str, Fou]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(COLUMNS):
            raise CodebookError(f"{label}:{lineno}: expected {len(COLUMNS)} columns, got {len(row)}")
        crit, word, rank = row[0], row[1], row[2]
        try:
            v = [float(x) for x in row[3:]]
            rank_i = int(rank)
        except ValueError as exc:
            raise CodebookError(f"{label}:{lineno}: non-numeric field ({exc})") from None
        if crit not in words:
            order.append(crit)
            words[crit], fous[crit] = [], {}
        if rank_i != len(words[crit]) + 1:
            raise CodebookError(f"{label}:{lineno}: rank {rank_i} out of order for {crit}")
        if word in fous[crit]:
            raise CodebookError(f"{label}:{lineno}: duplicate word {word} in {crit}")
        try:
            fou = Fou.from_knots(v[0:4], v[4:8], v[8], centroid=(v[9], v[10]), center=v[11])
        except FuzzyError as exc:
            raise CodebookError(f"{label}:{lineno}: {crit}/{word}: {exc}") from None
        words[crit].append(word)
        fous[crit][word] = fou
    vocabularies = []
    for crit in order:
        if len(words[crit]) != WORDS_PER_CRITERION:
            raise CodebookError(f"{label}: criterion {crit} has {len(words[crit])} words, need {WORDS_PER_CRITERION}")
        vocabularies.append(CriterionVocabulary(crit, tuple(words[crit]), fous[crit]))
    if not vocabularies:
        raise CodebookError(f"{label}: no rows")
    return Codebook(tuple(vocabularies), name=name)


def serialize_codebook(cb: Codebook) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COLUMNS)
    for crit in cb:
        for rank, word in enumerate(crit.words, start=1):
            f = crit.fous[word]
            cl, cr = f.centroid if f.centroid is not None else km_centroid(f)
            center = f.center if f.center is not None else (cl + cr) / 2
            w.writerow(
                [crit.name, word, rank]
                + [_fmt(v) for v in f.umf.astuple() + f.lmf.astuple()]
                + [_fmt(f.lmf_height), _fmt(cl), _fmt(cr), _fmt(center)]
            )
    return out.getvalue()


def load_bundled(mode: str, method: str) -> Codebook:
    if mode not in MODES or method not in METHODS:
        raise KeyError(f"no bundled codebook {mode}_{method}")
    ref = resources.files("cwwkit") / "data" / "codebooks" / f"{mode}_{method}.csv"
    with ref.open("r", encoding="utf-8", newline="") as fh:
        return _parse(fh, f"{mode}_{method}.csv", f"{mode}_{method}")


def bundled_corrections() -> list[dict[str, str]]:
    ref = resources.files("cwwkit") / "data" / "codebooks" / "corrections.csv"
    with ref.open("r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WordCheck:
    criterion: str
    word: str
    containment: float  # max(lower - upper) on the grid; <= tol passes
    centroid: tuple[float, float]
    cached_centroid: tuple[float, float] | None
    center_inside: bool

    @property
    def deviation(self) -> float | None:
        if self.cached_centroid is None:
            return None
        return max(abs(self.centroid[0] - self.cached_centroid[0]), abs(self.centroid[1] - self.cached_centroid[1]))


@dataclass
class ValidationReport:
    codebook: str
    checks: list[WordCheck]
    tolerance: float = 1e-9

    @property
    def containment_failures(self) -> list[WordCheck]:
        return [c for c in self.checks if c.containment > self.tolerance]

    @property
    def ok(self) -> bool:
        return not self.containment_failures and all(c.center_inside for c in self.checks)

    def lines(self) -> list[str]:
        out = [f"codebook {self.codebook}: {len(self.checks)} words"]
        for c in self.checks:
            dev = c.deviation
            status = "ok" if c.containment <= self.tolerance and c.center_inside else "FAIL"
            cached = "-" if c.cached_centroid is None else f"[{c.cached_centroid[0]:.2f}, {c.cached_centroid[1]:.2f}]"
            out.append(
                f"  {status:4} {c.criterion}/{c.word}: lmf<=umf margin {-c.containment:+.4f}; "
                f"centroid [{c.centroid[0]:.3f}, {c.centroid[1]:.3f}] vs cached {cached}"
                + ("" if dev is None else f" (max dev {dev:.3f})")
            )
        return out


def validate_codebook(cb: Codebook, resolution: int = DEFAULT_RESOLUTION) -> ValidationReport:
    checks = []
    for crit, word, fou in cb.items():
        c = km_centroid(fou, resolution)
        inside = True
        if fou.center is not None:
            inside = c[0] - 0.01 <= fou.center <= c[1] + 0.01 or (
                fou.centroid is not None and fou.centroid[0] - 0.01 <= fou.center <= fou.centroid[1] + 0.01
            )
        checks.append(WordCheck(crit, word, fou.containment_violation(resolution), c, fou.centroid, inside))
    return ValidationReport(cb.name, checks)


# ---------------------------------------------------------------------------
# Person FOU sampling and encoders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalPair:
    """Uncertainty intervals for the left and right end of one word."""

    left: tuple[float, float]
    right: tuple[float, float]

    def __post_init__(self):
        lo, hi = SCALE
        for name, (a, b) in (("left", self.left), ("right", self.right)):
            if a > b:
                raise ValueError(f"{name} interval [{a}, {b}] is reversed")
            if a < lo or b > hi:
                raise ValueError(f"{name} interval [{a}, {b}] outside [{lo}, {hi}]")


MAX_RESAMPLE = 1000


def person_fou_sample(pair: IntervalPair, n: int = 50, seed: int | None = None,
                      rng: np.random.Generator | None = None) -> list[tuple[float, float]]:
    """Virtual-subject data intervals for one word.

    ``n`` left ends and ``n`` right ends are drawn uniformly from the two
    intervals and paired by index. A pair with ``L >= R`` is redrawn, at
    most ``MAX_RESAMPLE`` times.
    """
    if n <= 0:
        raise ValueError("sample size must be positive")
    if rng is None:
        if seed is None:
            raise ValueError("an explicit seed or generator is required")
        rng = np.random.default_rng(seed)
    (la, lb), (ra, rb) = pair.left, pair.right
    if la >= rb:
        raise ValueError("left interval lies entirely at or above the right interval")
    left = rng.uniform(la, lb, n) if lb > la else np.full(n, la)
    right = rng.uniform(ra, rb, n) if rb > ra else np.full(n, ra)
    for i in np.flatnonzero(left >= right):
        for _ in range(MAX_RESAMPLE):
            left[i] = rng.uniform(la, lb) if lb > la else la
            right[i] = rng.uniform(ra, rb) if rb > ra else ra
            if left[i] < right[i]:
                break
        else:
            raise ValueError(f"could not draw an ordered pair in {MAX_RESAMPLE} attempts")
    return [(float(a), float(b)) for a, b in zip(left, right)]


class Encoder(Protocol):
    """Turns a word's data intervals into an interval type-2 model."""

    def encode(self, intervals: Sequence[tuple[float, float]], criterion: str, word: str) -> Fou: ...


class TableEncoder:
    """Serves the model stored in a codebook and ignores the intervals."""

    def __init__(self, codebook: Codebook):
        self.codebook = codebook

    def encode(self, intervals: Sequence[tuple[float, float]], criterion: str, word: str) -> Fou:
        try:
            return self.codebook[criterion][word]
        except KeyError:
            raise KeyError(f"word not in codebook: {criterion}/{word}") from None
