"""Feedback corpora and the per-frequency power table."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping

from .vocab import CRITERIA, EQUAL, TERMS

FEEDBACK_COLUMNS = ["user", "game", "phase", "frequency", *CRITERIA]
WEIGHT_COLUMNS = ["w_battery", "w_app", "w_type", "w_time"]
POWER_COLUMNS = ["game", "frequency", "watts"]
MODES = ("multi", "single")
PHASES = ("T", "E")
PHASE_NAMES = {"T": "Training", "E": "Execution"}
FREQUENCIES = ("F1", "F2", "F3", "F4", "F5", "F6")
GAMES = {
    "multi": ("left4dead", "amnesia"),
    "single": ("subway_surfers", "asphalt8", "fruit_ninja"),
}
GAME_NAMES = {
    "left4dead": "Left 4 Dead", "amnesia": "Amnesia",
    "subway_surfers": "Subway Surfers", "asphalt8": "Asphalt 8", "fruit_ninja": "Fruit Ninja",
}


class DataError(ValueError):
    """Malformed corpus or power file."""


@dataclass(frozen=True)
class FeedbackRecord:
    user: int
    game: str
    phase: str
    frequency: str
    words: dict[str, str] = field(hash=False)

    @property
    def key(self) -> tuple[int, str, str]:
        return (self.user, self.game, self.phase)


@dataclass(frozen=True)
class WeightAssignment:
    user: int
    game: str
    weights: dict[str, str] | None  # None means Equal

    @property
    def equal(self) -> bool:
        return self.weights is None


@dataclass
class Corpus:
    mode: str
    records: list[FeedbackRecord]
    weights: dict[tuple[int, str], WeightAssignment] = field(default_factory=dict)

    def __iter__(self) -> Iterator[FeedbackRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def games(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(r.game for r in self.records))

    @property
    def users(self) -> tuple[int, ...]:
        return tuple(sorted({r.user for r in self.records}))

    def groups(self) -> dict[tuple[int, str, str], dict[str, dict[str, str]]]:
        """Per (user, game, phase): frequency -> criterion words, in file order."""
        out: dict[tuple[int, str, str], dict[str, dict[str, str]]] = {}
        for r in self.records:
            out.setdefault(r.key, {})[r.frequency] = r.words
        return out

    def weights_for(self, user: int, game: str) -> dict[str, str] | None:
        wa = self.weights.get((user, game))
        return None if wa is None else wa.weights


def _open(source):
    if isinstance(source, (str, Path)):
        return open(source, newline="", encoding="utf-8"), str(source)
    return None, getattr(source, "name", "<stream>")


def load_feedback(source, mode: str) -> Corpus:
    """Read a corpus file; ``single`` files carry four extra weight columns."""
    if mode not in MODES:
        raise DataError(f"unknown mode {mode!r}")
    fh, label = _open(source)
    stream = fh or source
    try:
        return _read_feedback(stream, label, mode)
    finally:
        if fh is not None:
            fh.close()


def _read_feedback(stream, label: str, mode: str) -> Corpus:
    expected = FEEDBACK_COLUMNS + (WEIGHT_COLUMNS if mode == "single" else [])
    reader = csv.reader(stream)
    header = next(reader, None)
    if header != expected:
        raise DataError(f"{label}:1: header must be {','.join(expected)}")
    records, weights = [], {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        where = _coords(label, lineno, row)
        if len(row) != len(expected) or any(not c.strip() for c in row):
            raise DataError(f"{where}: missing cell (expected {len(expected)} non-empty fields)")
        try:
            user = int(row[0])
        except ValueError:
            raise DataError(f"{where}: user id {row[0]!r} is not an integer") from None
        game, phase, freq = row[1], row[2], row[3]
        if phase not in PHASES:
            raise DataError(f"{where}: phase {phase!r} not in {PHASES}")
        if freq not in FREQUENCIES:
            raise DataError(f"{where}: frequency {freq!r} not in F1..F6")
        words = dict(zip(CRITERIA, row[4:8]))
        for crit, w in words.items():
            if w not in TERMS[crit]:
                raise DataError(f"{where}: unknown word {w!r} for criterion {crit}")
        records.append(FeedbackRecord(user, game, phase, freq, words))
        if mode == "single":
            wa = _weights(row[8:12], user, game, where)
            prev = weights.setdefault((user, game), wa)
            if prev != wa:
                raise DataError(f"{where}: weights differ from earlier rows of user {user}, {game}")
    return Corpus(mode, records, weights)


def _coords(label: str, lineno: int, row: list[str]) -> str:
    parts = ["user", "game", "phase", "frequency"]
    vals = [f"{k}={v}" for k, v in zip(parts, row[:4])]
    return f"{label}:{lineno} ({', '.join(vals)})"


def _weights(cells: list[str], user: int, game: str, where: str) -> WeightAssignment:
    if all(c == EQUAL for c in cells):
        return WeightAssignment(user, game, None)
    if any(c == EQUAL for c in cells):
        raise DataError(f"{where}: weights mix Equal with weight words")
    for c in cells:
        if c not in TERMS["weight"]:
            raise DataError(f"{where}: unknown weight {c!r}")
    return WeightAssignment(user, game, dict(zip(CRITERIA, cells)))


def serialize_feedback(corpus: Corpus) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    single = corpus.mode == "single"
    w.writerow(FEEDBACK_COLUMNS + (WEIGHT_COLUMNS if single else []))
    for r in corpus.records:
        row = [r.user, r.game, r.phase, r.frequency] + [r.words[c] for c in CRITERIA]
        if single:
            ws = corpus.weights_for(r.user, r.game)
            row += [EQUAL] * 4 if ws is None else [ws[c] for c in CRITERIA]
        w.writerow(row)
    return out.getvalue()


@dataclass(frozen=True)
class PowerTable:
    watts: dict[str, dict[str, float]]

    def __getitem__(self, game: str) -> dict[str, float]:
        return self.watts[game]

    def at(self, game: str, frequency: str) -> float:
        try:
            return self.watts[game][frequency]
        except KeyError:
            raise DataError(f"no power entry for {game}/{frequency}") from None


def load_power(source) -> PowerTable:
    """Read ``game,frequency,watts`` rows; power must rise strictly with frequency."""
    fh, label = _open(source)
    stream = fh or source
    try:
        reader = csv.reader(stream)
        if next(reader, None) != POWER_COLUMNS:
            raise DataError(f"{label}:1: header must be {','.join(POWER_COLUMNS)}")
        table: dict[str, dict[str, float]] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise DataError(f"{label}:{lineno}: expected 3 fields")
            game, freq, watts = row
            try:
                table.setdefault(game, {})[freq] = float(watts)
            except ValueError:
                raise DataError(f"{label}:{lineno}: watts {watts!r} is not a number") from None
    finally:
        if fh is not None:
            fh.close()
    for game, col in table.items():
        freqs = list(col)
        if freqs != sorted(freqs, key=lambda f: int(f[1:])):
            raise DataError(f"power for {game}: frequencies out of order {freqs}")
        vals = list(col.values())
        for (f0, a), (f1, b) in zip(zip(freqs, vals), zip(freqs[1:], vals[1:])):
            if not b > a:
                raise DataError(f"power for {game} not increasing: {f0}={a} then {f1}={b}")
    return PowerTable(table)


def _bundled(*parts: str):
    return resources.files("cwwkit").joinpath("data", *parts)


def bundled_corpus(mode: str) -> Corpus:
    with _bundled("corpora", f"{mode}.csv").open("r", encoding="utf-8", newline="") as fh:
        return _read_feedback(fh, f"{mode}.csv", mode)


def bundled_corpus_text(mode: str) -> str:
    return _bundled("corpora", f"{mode}.csv").read_text(encoding="utf-8")


def bundled_power() -> PowerTable:
    with _bundled("power.csv").open("r", encoding="utf-8", newline="") as fh:
        return load_power(fh)


def bundled_corrections() -> list[dict[str, str]]:
    with _bundled("corpora", "corrections.csv").open("r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def load_golden() -> dict[tuple[int, str, str, str], str]:
    """Transcribed recommendations keyed by (user, game, phase, engine)."""
    with _bundled("golden", "recommendations.csv").open("r", encoding="utf-8", newline="") as fh:
        return {(int(r["user"]), r["game"], r["phase"], r["engine"]): r["frequency"] for r in csv.DictReader(fh)}


def load_golden_fuzziness() -> list[dict[str, str]]:
    with _bundled("golden", "fuzziness.csv").open("r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


__all__ = [
    "Corpus", "DataError", "FeedbackRecord", "PowerTable", "WeightAssignment",
    "bundled_corpus", "bundled_power", "load_feedback", "load_power", "load_golden", "serialize_feedback",
]
