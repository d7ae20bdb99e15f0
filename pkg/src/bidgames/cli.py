"""Batch entry points: solving, tables, oracle runs, play, and serving.

Exit codes: 0 success, 1 computation error, 2 usage error.  With
``--format json`` computation errors are emitted as an error document on
stdout so scripts can consume them.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from .analysis import CompareResult, compare_games
from .bidding import Player, Rule
from .gamespec import GameSpecError, parse_game
from .graphs import GameGraph, topological_order
from .holdings import parse_holding
from .oracle import solve_chip_states
from .play import Phase, PlayError, PlaySession, SessionConfig
from .richman import ReconstructionError, richman_values
from .thresholds import THRESHOLD_RULES, decode_value, threshold_keys


def _parse_k_range(text: str) -> list[int]:
    if ".." in text:
        lo, _, hi = text.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def _add_common(p: argparse.ArgumentParser, rules: Sequence[Rule] = tuple(Rule)) -> None:
    p.add_argument("--game", required=True, help="game spec, e.g. tug:2, ttt, wedge(A,B^2)")
    p.add_argument("--rule", type=Rule, choices=list(rules), default=Rule.STANDARD)
    p.add_argument("--format", choices=["csv", "json", "paper-table"], default="csv")
    p.add_argument("--out", help="write output to this file (directory for ttt-study)")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(message: str, fmt: str) -> int:
    if fmt == "json":
        sys.stdout.write(json.dumps({"error": message}) + "\n")
    else:
        sys.stderr.write(f"error: {message}\n")
    return 1


def cmd_richman(args: argparse.Namespace) -> int:
    try:
        g = parse_game(args.game)
        prof = richman_values(g)
    except (GameSpecError, ReconstructionError, ValueError, OSError) as e:
        return _fail(str(e), args.format)
    rows = [
        (g.labels[v], str(prof.r[v]), str(prof.delta[v]) if prof.delta[v] is not None else "")
        for v in range(g.num_vertices)
        if prof.r[v] is not None
    ]
    if args.format == "json":
        _emit(
            json.dumps(
                {"R": str(prof.r[g.start]), "vertices": {r[0]: r[1] for r in rows}},
                indent=2,
                sort_keys=True,
            )
            + "\n",
            args.out,
        )
    else:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["vertex", "R", "delta"])
        w.writerows(rows)
        _emit(buf.getvalue(), args.out)
    return 0


def _threshold_for_k(payload: tuple[str, int, str]) -> tuple[int, list[Optional[int]]]:
    spec, k, rule_value = payload
    g = parse_game(spec)
    return k, threshold_keys(g, k, Rule(rule_value))


def cmd_threshold(args: argparse.Namespace) -> int:
    try:
        g = parse_game(args.game)
        if args.rule not in THRESHOLD_RULES:
            raise ValueError("threshold tables exist for standard and make_it_take_it")
        ks = _parse_k_range(args.k_range) if args.k_range else [args.k]
        if ks == [None]:
            raise ValueError("--k or --k-range required")
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = dict(
                    pool.map(_threshold_for_k, [(args.game, k, args.rule.value) for k in ks])
                )
            per_k = [(k, results[k]) for k in ks]
        else:
            order = topological_order(g)
            per_k = [(k, threshold_keys(g, k, args.rule, order)) for k in ks]
    except (GameSpecError, ValueError, OSError) as e:
        return _fail(str(e), args.format)
    if args.format == "json":
        doc = {
            str(k): str(decode_value(keys[g.start], k, args.rule)) for k, keys in per_k
        }
        _emit(json.dumps({"f": doc}, indent=2, sort_keys=True) + "\n", args.out)
    elif args.format == "paper-table":
        ks_list = [k for k, _ in per_k]
        start_keys = [keys[g.start] for _, keys in per_k]
        rendered = None
        if args.rule is Rule.STANDARD and ks_list == list(range(len(ks_list))):
            # Residue-row layout when the range covers a full period.
            from .analysis import periodicity_constants
            from .study import render_residue_table

            try:
                consts = periodicity_constants(g)
                if consts.M <= len(ks_list):
                    rendered = render_residue_table(
                        start_keys, consts.M, consts.m, f"thresholds for {args.game}"
                    )
            except ValueError:
                rendered = None
        if rendered is None:
            lines = [
                f"{k}\t{decode_value(keys[g.start], k, args.rule)}" for k, keys in per_k
            ]
            rendered = "\n".join(lines) + "\n"
        _emit(rendered, args.out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["k", "vertex", "value"])
        for k, keys in per_k:
            for v in range(g.num_vertices):
                if keys[v] is None:
                    continue
                val = decode_value(keys[v], k, args.rule)
                w.writerow([k, g.labels[v], "NEVER" if val.never else str(val)])
        _emit(buf.getvalue(), args.out)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    try:
        g = parse_game(args.game)
        table = solve_chip_states(g, args.k, args.rule)
    except (GameSpecError, ValueError, OSError) as e:
        return _fail(str(e), args.format)
    rows = table.csv_rows()
    if args.format == "json":
        _emit(
            json.dumps(
                {
                    "k": args.k,
                    "rule": args.rule.value,
                    "outcomes": [
                        {"vertex": v, "alice": a, "advantage": adv, "outcome": o}
                        for v, a, adv, o in rows
                    ],
                },
                indent=2,
                sort_keys=True,
            )
            + "\n",
            args.out,
        )
    else:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["vertex", "alice_holding", "advantage", "outcome"])
        w.writerows(rows)
        _emit(buf.getvalue(), args.out)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    try:
        g = parse_game(args.game)
        h = parse_game(args.other)
        res: CompareResult = compare_games(g, h, args.rule, args.k_max)
    except (GameSpecError, ReconstructionError, ValueError, OSError) as e:
        return _fail(str(e), args.format)
    doc = {
        "verdict": res.verdict.value,
        "certified_all_k": res.certified_all_k,
        "window": res.window,
        "witness_less": res.witness_less,
        "witness_greater": res.witness_greater,
    }
    if args.format == "json":
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    else:
        parts = [f"verdict: {res.verdict.value}"]
        if res.witness_less is not None:
            parts.append(f"f(G,{res.witness_less}) < f(H,{res.witness_less})")
        if res.witness_greater is not None:
            parts.append(f"f(G,{res.witness_greater}) > f(H,{res.witness_greater})")
        parts.append("certified for all k" if res.certified_all_k else f"checked k < {res.window}")
        _emit("\n".join(parts) + "\n", args.out)
    return 0


def cmd_ttt_study(args: argparse.Namespace) -> int:
    from .study import render_residue_table, run_study, study_csv, write_report

    k_max = max(_parse_k_range(args.k_range)) if args.k_range else 255
    study = run_study(k_max, identify_positions=not args.no_identify)
    if args.out:
        files = write_report(study, args.out)
        sys.stdout.write("\n".join(files) + "\n")
        return 0
    if args.format == "json":
        sys.stdout.write(json.dumps(study.to_json_obj(), indent=2, sort_keys=True) + "\n")
    elif args.format == "paper-table":
        sys.stdout.write(
            render_residue_table(study.f_center, 256, 133, "center opening thresholds")
        )
        sys.stdout.write(
            render_residue_table(study.f_corner, 256, 137, "corner opening thresholds")
        )
    else:
        sys.stdout.write(study_csv(study))
    return 0


def cmd_play(args: argparse.Namespace) -> int:
    try:
        alice_amount, holder = SessionConfig.parse_split(args.split)
        ai = frozenset()
        if args.ai == "alice":
            ai = frozenset({Player.ALICE})
        elif args.ai == "bob":
            ai = frozenset({Player.BOB})
        cfg = SessionConfig(
            game=args.game,
            k=args.k,
            alice_amount=alice_amount,
            advantage=holder if args.rule is not Rule.LADIES_FIRST else None,
            rule=args.rule,
            ai_controls=ai,
            hints=args.hints,
        )
        session = PlaySession(cfg)
    except (GameSpecError, PlayError, ValueError, OSError) as e:
        return _fail(str(e), "text")
    session.run_ai()
    out = sys.stdout
    while session.phase is not Phase.FINISHED:
        actor = session.actor()
        assert actor is not None
        out.write(f"\n[{session.graph.labels[session.position]}] ")
        if session.board is not None:
            out.write(session.board + " ")
        out.write(
            f"alice {session.alice}{'*' if session.holder is Player.ALICE else ''} / "
            f"bob {session.bob}{'*' if session.holder is Player.BOB else ''}\n"
        )
        try:
            if session.phase is Phase.AWAITING_BIDS:
                raw = input(f"{actor.value} bid (0..{session.chips(actor)}): ")
                session.submit_bid(actor, int(raw))
            elif session.phase is Phase.AWAITING_TIE_CHOICE:
                raw = input(f"{actor.value}: use advantage? [y/n]: ")
                session.resolve_tie(actor, raw.strip().lower().startswith("y"))
            else:
                moves = session.legal_cells(actor) if session.board is not None else session.legal_moves(actor)
                prompt = f"{actor.value} move {moves} or 'force': "
                raw = input(prompt).strip()
                if raw == "force" and session.phase is Phase.AWAITING_ELECTION:
                    session.elect_and_move(actor, "force_opponent")
                elif session.board is not None:
                    session.elect_and_move(actor, "self", cell=int(raw))
                else:
                    session.elect_and_move(actor, "self", move=int(raw))
        except (PlayError, ValueError) as e:
            out.write(f"  ! {e}\n")
        except EOFError:
            out.write("\n(aborted)\n")
            return 1
        session.run_ai()
    out.write(f"\nresult: {session.outcome.value}\n")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    serve(host=args.host, port=args.port, snapshot_path=args.snapshot)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bidgames", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("richman", help="exact per-vertex critical fractions")
    _add_common(pr)
    pr.set_defaults(fn=cmd_richman)

    pt = sub.add_parser("threshold", help="chip thresholds for bounded games")
    _add_common(pt, rules=THRESHOLD_RULES)
    pt.add_argument("--k", type=int)
    pt.add_argument("--k-range", dest="k_range")
    pt.add_argument("--jobs", type=int, default=1)
    pt.set_defaults(fn=cmd_threshold)

    po = sub.add_parser("oracle", help="explicit chip-state outcomes")
    _add_common(po)
    po.add_argument("--k", type=int, required=True)
    po.set_defaults(fn=cmd_oracle)

    pc = sub.add_parser("compare", help="threshold partial-order verdict")
    _add_common(pc, rules=THRESHOLD_RULES)
    pc.add_argument("--other", required=True, help="second game spec")
    pc.add_argument("--k-max", dest="k_max", type=int)
    pc.set_defaults(fn=cmd_compare)

    ps = sub.add_parser("ttt-study", help="full tic-tac-toe study and figures")
    ps.add_argument("--k-range", dest="k_range", help="e.g. 0..255")
    ps.add_argument("--format", choices=["csv", "json", "paper-table"], default="csv")
    ps.add_argument("--out", help="directory for the full report")
    ps.add_argument("--no-identify", action="store_true", help="skip position identification")
    ps.set_defaults(fn=cmd_ttt_study)

    pp = sub.add_parser("play", help="interactive terminal session")
    pp.add_argument("--game", required=True)
    pp.add_argument("--k", type=int, required=True)
    pp.add_argument("--split", required=True, help="e.g. 4*/4")
    pp.add_argument("--rule", type=Rule, choices=list(Rule), default=Rule.STANDARD)
    pp.add_argument("--ai", choices=["none", "alice", "bob"], default="bob")
    pp.add_argument("--hints", action="store_true")
    pp.set_defaults(fn=cmd_play)

    pv = sub.add_parser("serve", help="run the HTTP service")
    pv.add_argument("--host", default="127.0.0.1")
    pv.add_argument("--port", type=int, default=8714)
    pv.add_argument("--snapshot", help="snapshot file path")
    pv.set_defaults(fn=cmd_serve)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
