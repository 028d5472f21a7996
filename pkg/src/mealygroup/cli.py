"""Command-line interface.

Machine-readable results go to stdout (or ``--out``); progress and
diagnostics go to stderr.  Output for a given configuration is
byte-identical regardless of ``--jobs``, which is why the CSV artifacts
carry no wall-clock column values; timings are reported on stderr.

Exit codes: 0 success (and ``wp`` identity / ``claim`` within bound),
1 negative verdict (``wp`` non-identity, ``claim`` bound exceeded,
failed ``solve --verify``), 2 usage, parse, or budget errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .automata import (
    Automaton,
    AutomatonError,
    apply,
    format_automaton,
    format_letter_word,
    format_state_word,
    parse_automaton,
    parse_letter_word,
    parse_state_word,
    section_word,
    validate,
)
from .hanoi import frame_stewart, hanoi_automaton, legal_moves, solve_3peg
from . import analysis
from .analysis import (
    BudgetError,
    render_growth_csv,
    render_threshold_csv,
    survey,
    threshold_survey,
)

DEFAULT_PEGS = 4


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("automaton source")
    src.add_argument("--automaton", metavar="FILE", help="machine description file")
    src.add_argument(
        "--pegs",
        type=int,
        metavar="M",
        help=f"use the M-peg Hanoi machine (default {DEFAULT_PEGS} when no file is given)",
    )
    common.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes")
    common.add_argument("--seed", type=int, default=0, metavar="U64", help="sampling seed")
    common.add_argument("--out", metavar="PATH", help="write data output to PATH instead of stdout")
    common.add_argument("--csv", action="store_true", help="emit CSV instead of the plain table")
    common.add_argument(
        "--long-run", action="store_true", help="allow enumerations beyond the default budget"
    )
    common.add_argument(
        "--no-symmetry", action="store_true", help="disable symmetry orbit reduction"
    )
    common.add_argument(
        "--include-trivial-state",
        action="store_true",
        help="enumerate words containing the do-nothing state too",
    )

    parser = argparse.ArgumentParser(
        prog="mealygroup",
        description="Invertible Mealy automata: actions, sections, word problem, "
        "depth/growth surveys, and Hanoi game strategies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="emit a Hanoi machine description")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("act", parents=[common], help="apply a state word to an input word")
    p.add_argument("--word", required=True, help="dot-separated state names (may be empty)")
    p.add_argument("--input", required=True, help="input letters")
    p.set_defaults(func=_cmd_act)

    p = sub.add_parser("section", parents=[common], help="section of a state word at an input word")
    p.add_argument("--word", required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_section)

    p = sub.add_parser("wp", parents=[common], help="decide whether a state word acts as identity")
    p.add_argument("--word", required=True)
    p.set_defaults(func=_cmd_wp)

    p = sub.add_parser("table", parents=[common], help="exhaustive depth / section-growth table")
    p.add_argument("--max-n", type=int, required=True, metavar="N", help="largest word length")
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("claim", parents=[common], help="fixing thresholds of random words vs bound")
    p.add_argument(
        "--lengths", default="4,8,16,32", metavar="LIST", help="comma-separated word lengths"
    )
    p.add_argument("--samples", type=int, default=200, metavar="K", help="words per length")
    p.set_defaults(func=_cmd_claim)

    p = sub.add_parser("solve", parents=[common], help="strategy word moving a full tower")
    p.add_argument("--disks", type=int, required=True, metavar="K")
    p.add_argument("--from-peg", type=int, default=1, metavar="P", dest="from_peg")
    p.add_argument("--to-peg", type=int, default=None, metavar="P", dest="to_peg")
    p.add_argument("--verify", action="store_true", help="replay the word and check the target")
    p.set_defaults(func=_cmd_solve)

    return parser


def _load_automaton(args) -> Automaton:
    if args.automaton and args.pegs is not None:
        raise AutomatonError("give either --automaton or --pegs, not both")
    if args.automaton:
        return parse_automaton(Path(args.automaton).read_text())
    return hanoi_automaton(args.pegs if args.pegs is not None else DEFAULT_PEGS)


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _require_invertible(auto: Automaton) -> None:
    report = validate(auto)
    if not report.invertible:
        raise AutomatonError("automaton is not invertible: " + "; ".join(report.issues))


def _cmd_gen(args) -> int:
    if args.automaton:
        raise AutomatonError("gen builds Hanoi machines; use --pegs")
    auto = hanoi_automaton(args.pegs if args.pegs is not None else DEFAULT_PEGS)
    _emit(args, format_automaton(auto))
    return 0


def _cmd_act(args) -> int:
    auto = _load_automaton(args)
    word = parse_state_word(auto, args.word)
    letters = parse_letter_word(args.input, auto.alphabet_size)
    image = apply(auto, word, letters)
    _emit(args, format_letter_word(image, auto.alphabet_size) + "\n")
    return 0


def _cmd_section(args) -> int:
    auto = _load_automaton(args)
    word = parse_state_word(auto, args.word)
    letters = parse_letter_word(args.input, auto.alphabet_size)
    sec = section_word(auto, word, letters)
    _emit(args, format_state_word(auto, sec) + "\n")
    return 0


def _cmd_wp(args) -> int:
    auto = _load_automaton(args)
    _require_invertible(auto)
    word = parse_state_word(auto, args.word)
    closure = analysis.section_closure(auto, word)
    trivial = analysis.is_identity(auto, word)
    verdict = "identity" if trivial else "non-identity"
    _emit(args, f"{verdict} sections={closure.count} depth={closure.depth}\n")
    return 0 if trivial else 1


def _format_growth_plain(report, auto) -> str:
    headers = ["n", "depth", "theta", "depth_witness", "theta_witness", "words_examined"]
    rows = [
        [
            str(r.n),
            str(r.depth),
            str(r.theta),
            format_state_word(auto, r.depth_witness),
            format_state_word(auto, r.theta_witness),
            str(r.words_examined),
        ]
        for r in report.rows
    ]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _cmd_table(args) -> int:
    auto = _load_automaton(args)
    _require_invertible(auto)
    if args.max_n < 1:
        raise AutomatonError("--max-n must be at least 1")
    checkpoint = None
    if args.long_run and args.out:
        checkpoint = args.out + ".ckpt"

    def progress(row):
        print(
            f"# n={row.n} depth={row.depth} theta={row.theta} "
            f"words={row.words_examined} seconds={row.seconds:.3f}",
            file=sys.stderr,
            flush=True,
        )

    report = survey(
        auto,
        args.max_n,
        exclude_trivial=not args.include_trivial_state,
        symmetry=not args.no_symmetry,
        jobs=args.jobs,
        long_run=args.long_run,
        checkpoint=checkpoint,
        progress=progress,
    )
    if args.csv or args.out:
        _emit(args, render_growth_csv(report, auto, timings=False))
    else:
        _emit(args, _format_growth_plain(report, auto))
    return 0


def _cmd_claim(args) -> int:
    auto = _load_automaton(args)
    _require_invertible(auto)
    try:
        lengths = [int(tok) for tok in args.lengths.split(",") if tok.strip()]
    except ValueError:
        raise AutomatonError(f"--lengths must be comma-separated integers, got {args.lengths!r}")
    if not lengths:
        raise AutomatonError("--lengths must name at least one length")
    report = threshold_survey(auto, lengths, args.samples, seed=args.seed)
    if args.csv or args.out:
        _emit(args, render_threshold_csv(report, auto))
    else:
        maxima = report.max_by_length()
        lines = ["n  samples  max_t_star  bound  pass"]
        for n in lengths:
            subset = [s for s in report.samples if s.length == n]
            bound = subset[0].bound
            ok = all(s.passed for s in subset)
            mx = maxima[n]
            lines.append(
                f"{n}  {len(subset)}  {'inf' if mx is None else mx}  {bound}  "
                f"{'true' if ok else 'false'}"
            )
        lines.append(
            "verdict: "
            + ("all sections within bound" if report.all_passed else "bound exceeded")
        )
        _emit(args, "\n".join(lines) + "\n")
    return 0 if report.all_passed else 1


def _cmd_solve(args) -> int:
    auto = _load_automaton(args)
    pegs = auto.alphabet_size
    if args.disks < 0:
        raise AutomatonError("--disks must be nonnegative")
    target = args.to_peg if args.to_peg is not None else pegs
    if pegs == 3:
        names = solve_3peg(args.disks, args.from_peg, target)
    else:
        names = frame_stewart(pegs, args.disks, args.from_peg, target)
    word = auto.word_from_names(names)
    _emit(args, format_state_word(auto, word) + "\n")
    if args.verify:
        start = (args.from_peg,) * args.disks
        goal = (target,) * args.disks
        cfg = start
        for step, nm in enumerate(reversed(names), 1):
            if nm not in legal_moves(cfg, pegs):
                print(f"verify: move {step} ({nm}) illegal at {cfg}", file=sys.stderr)
                return 1
            cfg = apply(auto, (auto.state_index(nm),), cfg)
        if cfg != goal:
            print(f"verify: final configuration {cfg} is not the target", file=sys.stderr)
            return 1
        print(
            f"verify: {len(names)} moves take "
            f"{format_letter_word(start, pegs) or 'the empty tower'} to "
            f"{format_letter_word(goal, pegs) or 'itself'}",
            file=sys.stderr,
        )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AutomatonError, BudgetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
