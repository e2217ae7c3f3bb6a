"""Command-line interface.

Every command reads a contract file (``-`` for stdin) except ``gen``, which
writes one.  ``--json`` switches any command to a single JSON object on
stdout with sorted keys.  Exit codes: 0 for success (and "yes" answers), 1
for clean "no" answers (check-trace, agree, validate findings), 2 for usage
and parse errors, 3 for precondition violations such as asking a
conflict-sensitive question about a conflicted contract.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dsl, game, gen, logic, oracle
from .model import ContractSpec, SpecError


def _read_spec(path: str) -> ContractSpec:
    if path == "-":
        text = sys.stdin.read()
    else:
        text = Path(path).read_text(encoding="utf-8")
    return dsl.parse(text)


def _event_list(text: str) -> tuple[str, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(item.strip() for item in text.split(","))


def _emit(payload: dict, args: argparse.Namespace, text_lines: list[str]) -> None:
    if args.json_global or args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _fmt_play(seq: tuple[str, ...]) -> str:
    return ",".join(seq) if seq else "(empty)"


def _fmt_set(events: frozenset[str]) -> str:
    return " ".join(sorted(events)) if events else "(empty)"


def _set_lines(events: frozenset[str]) -> list[str]:
    return sorted(events)


# --- commands --------------------------------------------------------------


def _cmd_validate(args: argparse.Namespace) -> int:
    if args.file == "-":
        text = sys.stdin.read()
    else:
        text = Path(args.file).read_text(encoding="utf-8")
    spec, diags = dsl.analyze(text)
    ok = spec is not None
    payload = {
        "ok": ok,
        "diagnostics": [
            {"code": d.code, "message": d.message, "line": d.line, "column": d.column}
            for d in diags
        ],
    }
    _emit(payload, args, ["ok"] if ok else [d.render() for d in diags])
    return 0 if ok else 1


def _cmd_prove(args: argparse.Namespace) -> int:
    theory = logic.theory_of(_read_spec(args.file))
    provable = logic.provable_atoms(theory)
    _emit({"provable": sorted(provable)}, args, _set_lines(provable))
    return 0


def _cmd_traces(args: argparse.Namespace) -> int:
    theory = logic.theory_of(_read_spec(args.file))
    traces = sorted(logic.proof_traces(theory, max_count=args.max), key=lambda t: (len(t), t))
    _emit(
        {"traces": [list(t) for t in traces]},
        args,
        [" ".join(t) if t else "(empty)" for t in traces],
    )
    return 0


def _cmd_check_trace(args: argparse.Namespace) -> int:
    theory = logic.theory_of(_read_spec(args.file))
    ok = logic.is_proof_trace(theory, _event_list(args.trace))
    _emit({"is_trace": ok}, args, ["yes" if ok else "no"])
    return 0 if ok else 1


def _cmd_urgent(args: argparse.Namespace) -> int:
    theory = logic.theory_of(_read_spec(args.file))
    urgent = logic.urgent_atoms(theory, _event_list(args.past))
    _emit({"urgent": sorted(urgent)}, args, _set_lines(urgent))
    return 0


def _cmd_prudent(args: argparse.Namespace) -> int:
    spec = _read_spec(args.file)
    prudent = game.prudent_events(spec, _event_list(args.past))
    _emit({"prudent": sorted(prudent)}, args, _set_lines(prudent))
    return 0


def _cmd_reachable(args: argparse.Namespace) -> int:
    spec = _read_spec(args.file)
    reach = game.reachable(spec, _event_list(args.past))
    _emit({"reachable": sorted(reach)}, args, _set_lines(reach))
    return 0


def _cmd_credits(args: argparse.Namespace) -> int:
    spec = _read_spec(args.file)
    play = _event_list(args.play)
    ledger = game.credits(spec, play)
    payload = {
        "play": list(play),
        "per_prefix": [sorted(c) for c in ledger.per_prefix],
        "final": sorted(ledger.final),
    }
    lines = [
        f"after {_fmt_play(tuple(play[:i]))}: {_fmt_set(c)}"
        for i, c in enumerate(ledger.per_prefix)
    ]
    _emit(payload, args, lines)
    return 0


def _verdict_payload(seq: tuple[str, ...], result: game.GameVerdict) -> dict:
    return {
        "play": list(seq),
        "participants": {
            p: {"innocent": row.innocent, "credit_free": row.credit_free, "wins": row.wins}
            for p, row in result.participants.items()
        },
    }


def _verdict_lines(result: game.GameVerdict) -> list[str]:
    def yn(flag: bool) -> str:
        return "yes" if flag else "no"

    return [
        f"{p}: innocent={yn(row.innocent)} credit_free={yn(row.credit_free)} wins={yn(row.wins)}"
        for p, row in sorted(result.participants.items())
    ]


def _cmd_verdict(args: argparse.Namespace) -> int:
    spec = _read_spec(args.file)
    play = _event_list(args.play)
    result = game.verdict(spec, play)
    _emit(_verdict_payload(result.play, result), args, _verdict_lines(result))
    return 0


def _cmd_agree(args: argparse.Namespace) -> int:
    spec = _read_spec(args.file)
    yes = game.agreement(spec)
    provable = game.provable_events(spec)
    payload = {"agreement": yes, "provable": sorted(provable)}
    lines = [f"agreement: {'yes' if yes else 'no'}", f"provable: {_fmt_set(provable)}"]
    _emit(payload, args, lines)
    return 0 if yes else 1


def _cmd_strategy(args: argparse.Namespace) -> int:
    spec = _read_spec(args.file)
    strat = game.synthesize_strategy(spec, args.participant)
    past = _event_list(args.past)
    offers = strat.offers(past)
    payload = {"participant": args.participant, "past": list(past), "offers": sorted(offers)}
    _emit(payload, args, _set_lines(offers))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    spec = _read_spec(args.file)
    strategies = [game.synthesize_strategy(spec, p) for p in sorted(spec.participants)]
    play, result = game.simulate(spec, strategies, seed=args.seed)
    payload = _verdict_payload(play, result)
    payload["seed"] = args.seed
    lines = [f"play: {_fmt_play(play)}"] + _verdict_lines(result)
    _emit(payload, args, lines)
    return 0


def _cmd_encode(args: argparse.Namespace) -> int:
    theory = logic.theory_of(_read_spec(args.file))
    encoded = logic.encode_urgency(theory)
    payload = {
        "atoms": sorted(encoded.atoms),
        "clauses": [
            {"head": c.head, "body": sorted(c.body), "kind": c.kind}
            for c in sorted(encoded.clauses, key=lambda c: (c.head, c.kind, sorted(c.body)))
        ],
    }
    _emit(payload, args, [dsl.print_spec(logic.spec_of(encoded)).rstrip("\n")])
    return 0


def _parse_cells(text: str) -> list[tuple[int, int]]:
    cells = []
    for item in _event_list(text):
        i, dot, j = item.partition(".")
        if not dot or not i.isdigit() or not j.isdigit():
            raise SpecError(f"bad cell {item!r}; expected row.col like 2.3")
        cells.append((int(i), int(j)))
    return cells


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.family == "shy-dancers":
        circular = None if args.circular == "all" else _parse_cells(args.circular)
        spec = gen.shy_dancers(args.n, circular)
        text = dsl.print_spec(spec)
        _emit({"text": text}, args, [text.rstrip("\n")])
        return 0
    raise SpecError(f"unknown family {args.family!r}")


def _cmd_oracle_prove(args: argparse.Namespace) -> int:
    theory = logic.theory_of(_read_spec(args.file))
    provable = frozenset(a for a in theory.atoms if oracle.nd_provable(theory, a))
    _emit({"provable": sorted(provable)}, args, _set_lines(provable))
    return 0


def _cmd_oracle_traces(args: argparse.Namespace) -> int:
    theory = logic.theory_of(_read_spec(args.file))
    traces = sorted(oracle.traces_bruteforce(theory), key=lambda t: (len(t), t))
    _emit(
        {"traces": [list(t) for t in traces]},
        args,
        [" ".join(t) if t else "(empty)" for t in traces],
    )
    return 0


def _cmd_oracle_prudence(args: argparse.Namespace) -> int:
    spec = _read_spec(args.file)
    prudent = oracle.prudence_bruteforce(spec, _event_list(args.past))
    _emit({"prudent": sorted(prudent)}, args, _set_lines(prudent))
    return 0


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pacta",
        description="Analyse contracts with circular enabling: provability, "
        "proof traces, prudence, credits, agreements, and strategies.",
    )
    parser.add_argument(
        "--json",
        dest="json_global",
        action="store_true",
        help="emit a single JSON object instead of text",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str, needs_file: bool = True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if needs_file:
            p.add_argument("file", help="contract file, or - for stdin")
        p.set_defaults(func=func)
        return p

    add("validate", _cmd_validate, "check a contract file, reporting all findings")
    add("prove", _cmd_prove, "atoms provable from the contract's clauses")
    p = add("traces", _cmd_traces, "enumerate proof traces (shortlex order)")
    p.add_argument("--max", type=int, default=None, help="emit at most this many traces")
    p = add("check-trace", _cmd_check_trace, "is the given sequence a proof trace?")
    p.add_argument("--trace", required=True, help="comma-separated events ('' for empty)")
    for name, func, help_text in (
        ("urgent", _cmd_urgent, "atoms performable right after the given past"),
        ("prudent", _cmd_prudent, "events prudently performable after the given past"),
        ("reachable", _cmd_reachable, "events obtainable on credit from the given past"),
    ):
        p = add(name, func, help_text)
        p.add_argument("--past", default="", help="comma-separated events already done")
    p = add("credits", _cmd_credits, "credit ledger of a play, prefix by prefix")
    p.add_argument("--play", required=True, help="comma-separated events in order")
    p = add("verdict", _cmd_verdict, "judge a finished play participant by participant")
    p.add_argument("--play", required=True, help="comma-separated events in order")
    add("agree", _cmd_agree, "can prudent cooperation satisfy every payoff?")
    p = add("strategy", _cmd_strategy, "offers of the synthesized prudent strategy")
    p.add_argument("--participant", required=True)
    p.add_argument("--past", default="", help="play so far, comma-separated")
    p = add("simulate", _cmd_simulate, "run synthesized strategies to quiescence")
    p.add_argument("--seed", type=int, default=0)
    add("encode", _cmd_encode, "compile the contract's theory into urgency tags")

    p = sub.add_parser("gen", parents=[common], help="generate a contract family")
    gen_sub = p.add_subparsers(dest="family", required=True)
    dancers = gen_sub.add_parser("shy-dancers", parents=[common])
    dancers.add_argument("--n", type=int, required=True, help="grid side length")
    dancers.add_argument(
        "--circular",
        default="all",
        help="'all' or comma-separated cells like 1.1,2.3",
    )
    dancers.set_defaults(func=_cmd_gen)

    p = sub.add_parser("oracle", parents=[common], help="brute-force reference answers")
    oracle_sub = p.add_subparsers(dest="oracle_command", required=True)
    o = oracle_sub.add_parser("prove", parents=[common])
    o.add_argument("file")
    o.set_defaults(func=_cmd_oracle_prove)
    o = oracle_sub.add_parser("traces", parents=[common])
    o.add_argument("file")
    o.set_defaults(func=_cmd_oracle_traces)
    o = oracle_sub.add_parser("prudence", parents=[common])
    o.add_argument("file")
    o.add_argument("--past", default="", help="play so far, comma-separated")
    o.set_defaults(func=_cmd_oracle_prudence)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except dsl.ParseError as exc:
        for d in exc.diagnostics:
            print(d.render(), file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
