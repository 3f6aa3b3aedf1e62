"""Command-line entry point: ``cwwkit <command> ...``.

Exit codes: 0 success, 2 data validation failure, 3 golden-table agreement
below the configured threshold.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import datasets, harness
from .codebook import CodebookError, IntervalPair, parse_codebook, person_fou_sample, validate_codebook
from .datasets import DataError
from .engines import ENGINES, EngineError, recommend

EXIT_OK, EXIT_DATA, EXIT_GOLDEN = 0, 2, 3


def _pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'low,high', got {text!r}") from None
    return a, b


def _config(args) -> harness.HarnessConfig:
    return harness.load_config(args.config) if args.config else harness.HarnessConfig()


def cmd_codebook_validate(args) -> int:
    cb = parse_codebook(args.file)
    report = validate_codebook(cb, _config(args).resolution)
    print("\n".join(report.lines()))
    print("valid" if report.ok else "INVALID")
    return EXIT_OK if report.ok else EXIT_DATA


def cmd_personfou_sample(args) -> int:
    pair = IntervalPair(args.left, args.right)
    seed = args.seed if args.seed is not None else _config(args).seed
    print("left,right")
    for lo, hi in person_fou_sample(pair, args.n, seed=seed):
        print(f"{lo:.6f},{hi:.6f}")
    return EXIT_OK


def _detect_mode(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    return "single" if "w_battery" in header else "multi"


def cmd_recommend(args) -> int:
    cfg = _config(args)
    mode = args.mode or _detect_mode(args.corpus)
    corpus = datasets.load_feedback(args.corpus, mode)
    codebook = parse_codebook(args.codebook) if args.codebook else None
    if args.engine == "pc" and codebook is None:
        raise EngineError("--codebook is required for the pc engine")
    options = {}
    if args.engine == "sm":
        options = {"cap": cfg.sm_cap, "pairing": cfg.sm_pairing}
    elif args.engine == "pc":
        options = {"levels": cfg.levels, "resolution": cfg.resolution}
    found = False
    print("user,game,phase,engine,frequency,satisfaction,scores")
    for (user, game, phase), per_freq in corpus.groups().items():
        if (args.user is not None and user != args.user) or (args.game and game != args.game) or (
                args.phase and phase != args.phase):
            continue
        found = True
        rec = recommend(args.engine, per_freq, corpus.weights_for(user, game), codebook, **options)
        scores = " ".join(f"{f}={_fmt_score(s)}" for f, s in rec.scores.items())
        print(f"{user},{game},{phase},{args.engine},{rec.frequency},{rec.satisfaction or ''},{scores}")
    if not found:
        print("no records match the selection", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def _fmt_score(s) -> str:
    return f"{s:.3f}" if isinstance(s, float) else str(s)


def cmd_compare(args) -> int:
    cfg = _config(args)
    corpus = datasets.load_feedback(args.corpus, args.mode) if args.corpus else datasets.bundled_corpus(args.mode)
    table = harness.run_comparison(corpus, harness.bundled_codebooks(args.mode), config=cfg)
    golden = harness.golden_comparison(table, datasets.load_golden())
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{args.mode}_recommendations.csv").write_text(table.to_csv(), encoding="utf-8")
    (out / f"{args.mode}_discrepancies.log").write_text(
        "".join(d.line() + "\n" for d in golden.discrepancies), encoding="utf-8")
    split = [f"user {r.user} {r.game} {r.phase}: " + ", ".join(f"{m}={f}" for m, f in r.pc_by_method.items())
             for r in table.pc_disagreements()]
    (out / f"{args.mode}_codebook_split.log").write_text("".join(s + "\n" for s in split), encoding="utf-8")
    summary = golden.lines() + [f"codebook methods disagree on {len(split)} of {len(table.rows)} groups"]
    (out / f"{args.mode}_golden.txt").write_text("\n".join(summary) + "\n", encoding="utf-8")
    print("\n".join(summary))
    if golden.agreement() < cfg.golden_threshold:
        print(f"golden agreement {100 * golden.agreement():.1f}% below {100 * cfg.golden_threshold:.0f}%",
              file=sys.stderr)
        return EXIT_GOLDEN
    return EXIT_OK


def cmd_report(args) -> int:
    cfg = _config(args)
    kind = args.kind
    if kind == "fuzziness":
        modes = [args.mode] if args.mode else list(datasets.MODES)
        for mode in modes:
            rep = harness.fuzziness_report(harness.bundled_codebooks(mode), cfg.fuzziness_measure, cfg.resolution)
            print(rep.to_csv() if args.format == "csv" else "\n".join([f"[{mode}]", *rep.lines()]) + "\n", end="")
        return EXIT_OK
    golden = datasets.load_golden()
    if kind == "mismatch":
        modes = [args.mode] if args.mode else list(datasets.MODES)
        for mode in modes:
            table = _table(mode, cfg, kind)
            rep = harness.mismatch_stats(table, harness.reference_frequencies(table, golden, cfg))
            print(rep.to_csv() if args.format == "csv" else "\n".join([f"[{mode}]", *rep.lines()]) + "\n", end="")
        return EXIT_OK
    mode = args.mode or "single"
    if mode != "single":
        raise DataError(f"the {kind} report needs the single-person corpus")
    table = _table(mode, cfg, kind)
    ref = harness.reference_frequencies(table, golden, cfg)
    power = datasets.bundled_power()
    codebook = harness.bundled_codebooks(mode)[cfg.pc_method(mode)]
    if kind == "power":
        rep = harness.power_report(table, power, ref)
    elif kind == "satisfaction":
        rep = harness.satisfaction_report(table, ref, codebook, cfg)
    else:
        grp = harness.group_analysis(table, power, ref, codebook, cfg)
        if args.format == "csv":
            print(grp.mismatch.to_csv(), end="")
            for g in (1, 2):
                print(f"# group {g} power\n{grp.power[g].to_csv()}# group {g} satisfaction\n{grp.satisfaction[g].to_csv()}",
                      end="")
        else:
            print("\n".join(grp.lines()))
        return EXIT_OK
    if args.plot_data:
        print(rep.plot_data(), end="")
    elif args.format == "csv":
        print(rep.to_csv(), end="")
    else:
        print("\n".join(rep.lines()))
    return EXIT_OK


def _table(mode: str, cfg: harness.HarnessConfig, kind: str) -> harness.ComparisonTable:
    corpus = datasets.bundled_corpus(mode)
    # the pc column is only needed when it serves as the reference
    engines = tuple(e for e in ENGINES if e != "pc" or cfg.reference == "pc")
    codebooks = harness.bundled_codebooks(mode) if "pc" in engines else None
    return harness.run_comparison(corpus, codebooks, engines, cfg)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cwwkit", description="Computing-with-words engines and benchmark harness.")
    p.add_argument("--config", help="key=value file (resolution, levels, sm_cap, reference, ...)")
    sub = p.add_subparsers(dest="command", required=True)

    cb = sub.add_parser("codebook", help="codebook utilities")
    cbsub = cb.add_subparsers(dest="action", required=True)
    v = cbsub.add_parser("validate", help="check containment and centroids of a codebook file")
    v.add_argument("file")
    v.set_defaults(func=cmd_codebook_validate)

    pf = sub.add_parser("personfou", help="Person-FOU virtual-subject sampler")
    pfsub = pf.add_subparsers(dest="action", required=True)
    s = pfsub.add_parser("sample", help="draw data intervals from left/right end intervals")
    s.add_argument("--left", type=_pair, required=True, metavar="A,B")
    s.add_argument("--right", type=_pair, required=True, metavar="C,D")
    s.add_argument("--n", type=int, default=50)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_personfou_sample)

    r = sub.add_parser("recommend", help="run one engine over a corpus file")
    r.add_argument("--engine", choices=ENGINES, required=True)
    r.add_argument("--corpus", required=True)
    r.add_argument("--codebook")
    r.add_argument("--mode", choices=datasets.MODES, help="corpus layout (detected from the header by default)")
    r.add_argument("--user", type=int)
    r.add_argument("--game")
    r.add_argument("--phase", choices=datasets.PHASES)
    r.set_defaults(func=cmd_recommend)

    c = sub.add_parser("compare", help="replay a corpus through all engines and check the golden tables")
    c.add_argument("--mode", choices=datasets.MODES, required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--corpus", help="corpus file (bundled corpus by default)")
    c.set_defaults(func=cmd_compare)

    rp = sub.add_parser("report", help="derived statistics")
    rp.add_argument("kind", choices=("mismatch", "power", "satisfaction", "fuzziness", "groups"))
    rp.add_argument("--mode", choices=datasets.MODES)
    rp.add_argument("--format", choices=("text", "csv"), default="text")
    rp.add_argument("--plot-data", action="store_true", help="emit x/y series (power and satisfaction)")
    rp.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CodebookError, DataError, harness.ConfigError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
