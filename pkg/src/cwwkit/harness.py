"""Corpus replay, golden-table checks and the derived statistics reports."""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .codebook import Codebook, load_bundled
from .datasets import GAME_NAMES, PHASE_NAMES, PHASES, Corpus, PowerTable
from .engines import ENGINES, Recommendation, recommend
from .engines.base import EngineError
from .engines.perceptual import aggregate, pc_satisfaction
from .fuzzy import FuzzinessInterval, fuzziness, round_half_away, tabulated_fuzziness
from .vocab import rank

Key = tuple[int, str, str]  # (user, game, phase)


@dataclass(frozen=True)
class HarnessConfig:
    resolution: int = 1001
    levels: int = 101
    sm_cap: int = 4
    sm_pairing: str = "literal"
    pc_method_multi: str = "eia"
    pc_method_single: str = "hma"
    # "golden": the transcribed PP/PF columns define the correct frequency;
    # "pc": this package's perceptual-computing engine does
    reference: str = "golden"
    golden_threshold: float = 0.90
    fuzziness_measure: str = "tabulated"
    seed: int = 0

    def pc_method(self, mode: str) -> str:
        return self.pc_method_multi if mode == "multi" else self.pc_method_single


class ConfigError(ValueError):
    pass


def load_config(source) -> HarnessConfig:
    """Read ``key=value`` lines; ``#`` starts a comment. Unknown keys are errors."""
    text = Path(source).read_text(encoding="utf-8") if isinstance(source, (str, Path)) else source.read()
    types = {f.name: f.type for f in fields(HarnessConfig)}
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        kind = types[key]
        try:
            values[key] = int(value) if kind == "int" else float(value) if kind == "float" else value
        except ValueError:
            raise ConfigError(f"line {lineno}: {key} needs a {kind}, got {value!r}") from None
    cfg = replace(HarnessConfig(), **values)
    if cfg.reference not in ("golden", "pc"):
        raise ConfigError("reference must be 'golden' or 'pc'")
    if cfg.sm_pairing not in ("literal", "attached"):
        raise ConfigError("sm_pairing must be 'literal' or 'attached'")
    if cfg.fuzziness_measure not in ("tabulated", "embedded"):
        raise ConfigError("fuzziness_measure must be 'tabulated' or 'embedded'")
    return cfg


def bundled_codebooks(mode: str) -> dict[str, Codebook]:
    return {m: load_bundled(mode, m) for m in ("ia", "eia", "hma")}


# ---------------------------------------------------------------------------
# Comparison table
# ---------------------------------------------------------------------------


@dataclass
class ComparisonRow:
    user: int
    game: str
    phase: str
    feedback: dict[str, dict[str, str]] = field(repr=False)
    weights: dict[str, str] | None
    recs: dict[str, Recommendation] = field(default_factory=dict)
    pc_by_method: dict[str, str] = field(default_factory=dict)

    @property
    def key(self) -> Key:
        return (self.user, self.game, self.phase)

    @property
    def group(self) -> int:
        """1 for equal weights, 2 for differential weights."""
        return 1 if self.weights is None else 2


@dataclass
class ComparisonTable:
    mode: str
    engines: tuple[str, ...]
    rows: list[ComparisonRow]
    pc_method: str | None = None

    def frequency(self, engine: str, key: Key) -> str:
        return self.row(key).recs[engine].frequency

    def row(self, key: Key) -> ComparisonRow:
        for r in self.rows:
            if r.key == key:
                return r
        raise KeyError(key)

    @property
    def games(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(r.game for r in self.rows))

    def pc_disagreements(self) -> list[ComparisonRow]:
        return [r for r in self.rows if len(set(r.pc_by_method.values())) > 1]

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        methods = sorted({m for r in self.rows for m in r.pc_by_method})
        w.writerow(["user", "game", "phase", *self.engines, *(f"pc_{m}" for m in methods)])
        for r in self.rows:
            w.writerow([r.user, r.game, r.phase, *(r.recs[e].frequency for e in self.engines),
                        *(r.pc_by_method.get(m, "") for m in methods)])
        return out.getvalue()


def run_comparison(corpus: Corpus, codebooks: Mapping[str, Codebook] | None = None,
                   engines: Sequence[str] = ENGINES, config: HarnessConfig = HarnessConfig()) -> ComparisonTable:
    """Replay every (user, game, phase) group through the requested engines.

    The perceptual engine runs under every supplied codebook; the configured
    method for the corpus mode provides its column.
    """
    engines = tuple(engines)
    for e in engines:
        if e not in ENGINES:
            raise EngineError(f"unknown engine {e!r}")
    codebooks = dict(codebooks or {})
    method = None
    if "pc" in engines:
        if not codebooks:
            raise EngineError("perceptual computing needs at least one codebook")
        method = config.pc_method(corpus.mode)
        if method not in codebooks:
            method = next(iter(codebooks))
    rows = []
    if not engines:
        return ComparisonTable(corpus.mode, engines, rows, method)
    for (user, game, phase), per_freq in corpus.groups().items():
        weights = corpus.weights_for(user, game)
        row = ComparisonRow(user, game, phase, per_freq, weights)
        try:
            for e in engines:
                if e == "pc":
                    for m, cb in codebooks.items():
                        rec = recommend("pc", per_freq, weights, cb, levels=config.levels, resolution=config.resolution)
                        row.pc_by_method[m] = rec.frequency
                        if m == method:
                            row.recs["pc"] = rec
                elif e == "sm":
                    row.recs[e] = recommend("sm", per_freq, weights, cap=config.sm_cap, pairing=config.sm_pairing)
                else:
                    row.recs[e] = recommend(e, per_freq, weights)
        except EngineError as exc:
            raise EngineError(f"user {user}, {game}, phase {phase}: {exc}") from None
        rows.append(row)
    return ComparisonTable(corpus.mode, engines, rows, method)


# ---------------------------------------------------------------------------
# Golden tables
# ---------------------------------------------------------------------------

GOVERNING = {
    "pc": "centroid-mean argmax of the weighted average of word models, lowest-frequency tie",
    "ep": "distance-index argmax over collective tri-tuples, lowest-frequency tie",
    "sm": "recursive ordinal convex combination, index argmax, lowest-frequency tie",
    "2tp": "lexicographic 2-tuple argmax of the weighted index mean, lowest-frequency tie",
}

# cells where the source's own prose and its tables disagree
DOCUMENTED_CONFLICTS = {
    (22, "subway_surfers", "T", "sm"): "prose gives F1,F2,F6 -> d3,d3,d4, so F6 wins; the table prints F1",
    (22, "subway_surfers", "T", "2tp"): "prose arithmetic favours F6; the table prints F6 for 2-tuple but F2 elsewhere",
}


@dataclass(frozen=True)
class Discrepancy:
    user: int
    game: str
    phase: str
    engine: str
    ours: str
    golden: str
    note: str
    documented: bool

    def line(self) -> str:
        tag = "documented" if self.documented else "undocumented"
        return (f"user {self.user:2d} {GAME_NAMES.get(self.game, self.game)} {PHASE_NAMES[self.phase]}: "
                f"{self.engine} gives {self.ours}, table {self.golden} [{tag}] ({self.note})")


@dataclass
class GoldenReport:
    counts: dict[tuple[str, str], tuple[int, int]]  # (game, engine) -> (agree, total)
    discrepancies: list[Discrepancy]

    def agreement(self, engines: Iterable[str] | None = None) -> float:
        sel = [v for (g, e), v in self.counts.items() if engines is None or e in engines]
        total = sum(t for _, t in sel)
        return sum(a for a, _ in sel) / total if total else 1.0

    def lines(self) -> list[str]:
        out = ["game             engine  agree/total"]
        for (g, e), (a, t) in sorted(self.counts.items()):
            out.append(f"{g:16} {e:6}  {a:3d}/{t:3d}")
        out.append(f"overall {100 * self.agreement():.1f}% of {sum(t for _, t in self.counts.values())} cells")
        return out


def golden_comparison(table: ComparisonTable, golden: Mapping[tuple[int, str, str, str], str],
                      conflicts: Mapping = DOCUMENTED_CONFLICTS) -> GoldenReport:
    counts: dict[tuple[str, str], list[int]] = {}
    disc = []
    for r in table.rows:
        for e in table.engines:
            k = (r.user, r.game, r.phase, e)
            if k not in golden:
                continue
            ours = r.recs[e].frequency
            c = counts.setdefault((r.game, e), [0, 0])
            c[1] += 1
            if ours == golden[k]:
                c[0] += 1
            else:
                note = conflicts.get(k, GOVERNING[e])
                disc.append(Discrepancy(r.user, r.game, r.phase, e, ours, golden[k], note, k in conflicts))
    return GoldenReport({k: (a, t) for k, (a, t) in counts.items()}, disc)


def reference_frequencies(table: ComparisonTable, golden: Mapping | None = None,
                          config: HarnessConfig = HarnessConfig()) -> dict[Key, str]:
    """The frequency each group should have received."""
    if config.reference == "golden":
        if golden is None:
            raise ValueError("golden reference requested without golden data")
        return {r.key: golden[(r.user, r.game, r.phase, "pc")] for r in table.rows}
    return {r.key: r.recs["pc"].frequency for r in table.rows}


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------


def _csv(header: list[str], rows: Iterable[list]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return out.getvalue()


def percent(count: int, n: int) -> int:
    return int(round_half_away(100 * count / n)) if n else 0


@dataclass(frozen=True)
class MismatchRow:
    game: str
    engine: str
    phase: str
    count: int
    n: int
    group1: int
    group2: int

    @property
    def pct(self) -> int:
        return percent(self.count, self.n)


@dataclass
class MismatchReport:
    rows: list[MismatchRow]

    def get(self, game: str, engine: str, phase: str) -> MismatchRow:
        for r in self.rows:
            if (r.game, r.engine, r.phase) == (game, engine, phase):
                return r
        raise KeyError((game, engine, phase))

    @property
    def group_totals(self) -> tuple[int, int]:
        return sum(r.group1 for r in self.rows), sum(r.group2 for r in self.rows)

    @property
    def group_ratio(self) -> float:
        g1, g2 = self.group_totals
        return 100 * (g2 - g1) / g1 if g1 else float("nan")

    def lines(self) -> list[str]:
        out = ["game             engine phase      failures  pct  group1 group2"]
        for r in self.rows:
            out.append(f"{r.game:16} {r.engine:6} {PHASE_NAMES[r.phase]:10} {r.count:4d}/{r.n:<3d} {r.pct:3d}%  "
                       f"{r.group1:6d} {r.group2:6d}")
        g1, g2 = self.group_totals
        out.append(f"group totals: {g1} (equal weights) vs {g2} (differential), {self.group_ratio:+.2f}%")
        return out

    def to_csv(self) -> str:
        return _csv(["game", "engine", "phase", "failures", "n", "pct", "group1", "group2"],
                    [[r.game, r.engine, r.phase, r.count, r.n, r.pct, r.group1, r.group2] for r in self.rows])


def mismatch_stats(table: ComparisonTable, reference: Mapping[Key, str]) -> MismatchReport:
    rows = []
    for game in table.games:
        for e in table.engines:
            if e == "pc":
                continue
            for phase in PHASES:
                sel = [r for r in table.rows if r.game == game and r.phase == phase]
                bad = [r for r in sel if r.recs[e].frequency != reference[r.key]]
                rows.append(MismatchRow(game, e, phase, len(bad), len(sel),
                                        sum(r.group == 1 for r in bad), sum(r.group == 2 for r in bad)))
    return MismatchReport(rows)


def pooled_improvement(pf: Sequence[float], other: Sequence[float], higher_is_better: bool) -> float:
    """Mean over games of whole-number percentage gaps between displayed averages.

    Averages are first rounded to two decimals; each game's gap is rounded
    to a whole percent before the mean. Satisfaction gaps are relative to
    the other engine, power gaps relative to the reference.
    """
    gaps = []
    for a, b in zip(pf, other):
        a, b = round_half_away(a, 2), round_half_away(b, 2)
        gap = 100 * (a - b) / b if higher_is_better else 100 * (b - a) / a
        gaps.append(round_half_away(gap))
    return statistics.fmean(gaps)


@dataclass
class AverageReport:
    """Per (phase, game): reference average and per-engine averages."""

    quantity: str
    engines: tuple[str, ...]
    values: dict[tuple[str, str], dict[str, float]]  # (phase, game) -> {"pf"|engine: mean}
    improvements: dict[tuple[str, str], float]  # (phase, engine) -> pooled %

    def lines(self) -> list[str]:
        head = f"{'phase':10} {'game':16} {'PF':>6}" + "".join(f" {e:>6}" for e in self.engines)
        out = [f"average {self.quantity}", head]
        for (phase, game), v in self.values.items():
            out.append(f"{PHASE_NAMES[phase]:10} {game:16} {v['pf']:6.2f}" + "".join(f" {v[e]:6.2f}" for e in self.engines))
        out.append("pooled improvement of PF (mean of per-game whole percentages)")
        for phase in PHASES:
            out.append(f"  {PHASE_NAMES[phase]:10}" + "".join(
                f" {e}: {self.improvements[(phase, e)]:+.2f}%" for e in self.engines if (phase, e) in self.improvements))
        return out

    def to_csv(self) -> str:
        cols = ["pf", *self.engines]
        return _csv(["phase", "game", *cols],
                    [[p, g, *(f"{round_half_away(v[c], 2):.2f}" for c in cols)] for (p, g), v in self.values.items()])

    def plot_data(self) -> str:
        """One x/y series per (approach, phase): x is the game, y the average."""
        rows = []
        for c in ("pf", *self.engines):
            for (p, g), v in self.values.items():
                rows.append([f"{c}-{p}", g, f"{v[c]:.4f}"])
        return _csv(["series", "x", "y"], rows)


def _average_report(quantity: str, table: ComparisonTable, per_row, reference: Mapping[Key, str],
                    higher_is_better: bool, rows: Sequence[ComparisonRow] | None = None) -> AverageReport:
    engines = tuple(e for e in table.engines if e != "pc")
    rows = table.rows if rows is None else rows
    values = {}
    for phase in PHASES:
        for game in table.games:
            sel = [r for r in rows if r.game == game and r.phase == phase]
            if not sel:
                continue
            v = {"pf": statistics.fmean(per_row(r, "pf", reference[r.key]) for r in sel)}
            for e in engines:
                v[e] = statistics.fmean(per_row(r, e, r.recs[e].frequency) for r in sel)
            values[(phase, game)] = v
    imp = {}
    for phase in PHASES:
        keys = [k for k in values if k[0] == phase]
        if not keys:
            continue
        for e in engines:
            imp[(phase, e)] = pooled_improvement([values[k]["pf"] for k in keys], [values[k][e] for k in keys],
                                                 higher_is_better)
    return AverageReport(quantity, engines, values, imp)


def power_report(table: ComparisonTable, power: PowerTable, reference: Mapping[Key, str],
                 rows: Sequence[ComparisonRow] | None = None) -> AverageReport:
    return _average_report("power (W)", table, lambda r, e, f: power.at(r.game, f), reference, False, rows)


def satisfaction_index(term: str) -> int:
    return rank("satisfaction", term)


def reference_satisfaction(row: ComparisonRow, frequency: str, codebook: Codebook,
                           config: HarnessConfig = HarnessConfig()) -> str:
    y = aggregate(row.feedback[frequency], row.weights, codebook, config.levels, config.resolution)
    return pc_satisfaction(y, codebook)


def satisfaction_report(table: ComparisonTable, reference: Mapping[Key, str], codebook: Codebook,
                        config: HarnessConfig = HarnessConfig(),
                        rows: Sequence[ComparisonRow] | None = None) -> AverageReport:
    """Average satisfaction index (NS=1 .. OS=5).

    Engine columns use each engine's own satisfaction term. The reference
    column maps the weighted-average word model at the reference frequency
    to its most similar satisfaction word.
    """
    cache: dict[tuple[Key, str], int] = {}

    def score(r: ComparisonRow, e: str, f: str) -> int:
        if e != "pf":
            return satisfaction_index(r.recs[e].satisfaction)
        if (r.key, f) not in cache:
            cache[(r.key, f)] = satisfaction_index(reference_satisfaction(r, f, codebook, config))
        return cache[(r.key, f)]

    return _average_report("satisfaction index", table, score, reference, True, rows)


@dataclass
class GroupReport:
    mismatch: MismatchReport
    power: dict[int, AverageReport]
    satisfaction: dict[int, AverageReport]

    def lines(self) -> list[str]:
        out = self.mismatch.lines()
        for g in (1, 2):
            label = "equal weights" if g == 1 else "differential weights"
            out.append(f"group {g} ({label})")
            out += ["  " + s for s in self.power[g].lines()]
            out += ["  " + s for s in self.satisfaction[g].lines()]
        return out


def group_analysis(table: ComparisonTable, power: PowerTable, reference: Mapping[Key, str], codebook: Codebook,
                   config: HarnessConfig = HarnessConfig()) -> GroupReport:
    pw, sat = {}, {}
    for g in (1, 2):
        rows = [r for r in table.rows if r.group == g]
        pw[g] = power_report(table, power, reference, rows)
        sat[g] = satisfaction_report(table, reference, codebook, config, rows)
    return GroupReport(mismatch_stats(table, reference), pw, sat)


# ---------------------------------------------------------------------------
# Fuzziness
# ---------------------------------------------------------------------------


@dataclass
class FuzzinessReport:
    methods: tuple[str, ...]
    words: list[tuple[str, str]]  # (criterion, word)
    intervals: dict[tuple[str, str], FuzzinessInterval]  # (method, word) -> interval

    def mean(self, method: str, word: str) -> float:
        return self.intervals[(method, word)].mean

    def decrease(self, method: str, base: str = "ia") -> float:
        """Average over words of the percent drop of the mean relative to ``base``."""
        drops = []
        for _, w in self.words:
            b = self.mean(base, w)
            drops.append(0.0 if b == 0 else 100 * (b - self.mean(method, w)) / b)
        return statistics.fmean(drops)

    def ordering_share(self) -> float:
        ok = sum(self.mean("hma", w) <= self.mean("eia", w) + 1e-12 and self.mean("hma", w) <= self.mean("ia", w) + 1e-12
                 for _, w in self.words)
        return ok / len(self.words)

    def lines(self) -> list[str]:
        out = ["word  " + "".join(f"{m:>20}" for m in self.methods)]
        for _, w in self.words:
            cells = []
            for m in self.methods:
                iv = self.intervals[(m, w)]
                cells.append(f"[{iv.f_l:.2f},{iv.f_r:.2f}] {iv.mean:.2f}".rjust(20))
            out.append(f"{w:5} " + "".join(cells))
        for m in self.methods:
            if m != "ia":
                out.append(f"average decrease of {m} vs ia: {self.decrease(m):.2f}%")
        out.append(f"hma least fuzzy for {100 * self.ordering_share():.0f}% of words")
        return out

    def to_csv(self) -> str:
        head = ["criterion", "word"] + [f"{m}_{k}" for m in self.methods for k in ("l", "r", "m")]
        rows = []
        for c, w in self.words:
            cells = []
            for m in self.methods:
                iv = self.intervals[(m, w)]
                cells += [f"{iv.f_l:.4f}", f"{iv.f_r:.4f}", f"{iv.mean:.4f}"]
            rows.append([c, w, *cells])
        return _csv(head, rows)


def fuzziness_report(codebooks: Mapping[str, Codebook], measure: str = "tabulated",
                     resolution: int = 1001) -> FuzzinessReport:
    fn = tabulated_fuzziness if measure == "tabulated" else fuzziness
    methods = tuple(codebooks)
    first = codebooks[methods[0]]
    words = [(c, w) for c, w, _ in first.items()]
    intervals = {(m, w): fn(cb.fou(c, w), resolution) for m, cb in codebooks.items() for c, w in words}
    return FuzzinessReport(methods, words, intervals)


__all__ = [
    "ComparisonRow", "ComparisonTable", "ConfigError", "DOCUMENTED_CONFLICTS", "Discrepancy", "GoldenReport",
    "HarnessConfig", "MismatchReport", "bundled_codebooks", "fuzziness_report", "golden_comparison",
    "group_analysis", "load_config", "mismatch_stats", "pooled_improvement", "power_report",
    "reference_frequencies", "run_comparison", "satisfaction_report",
]
