"""Command-line surface: decompose, solve, verify, reach, play, serve.

Exit codes are a stable contract for CI: 0 on success (for ``verify``,
all asserted points passing), 1 on runtime failure, 2 on usage errors.
Move tokens and state JSON reuse the engine's canonical encodings, so
logs, CLI output, and the HTTP API agree exactly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import engine, fibzeck, solver, theorems
from .engine import SeatingConfig

USAGE_ERROR = 2
RUNTIME_ERROR = 1


class UsageError(ValueError):
    """Bad command-line input; exits with code 2."""


def parse_alliances(text: str) -> list[list[int]]:
    """Parse the seating string "1,2,3,4;5,6" into team member lists.

    Raises UsageError naming the character position of the first problem.
    """
    teams: list[list[int]] = []
    current: list[int] = []
    digits = ""
    for pos, ch in enumerate(text + ";"):
        if ch.isdigit():
            digits += ch
            continue
        if ch in ",;":
            if not digits:
                raise UsageError(f"alliances: expected a player number at position {pos}")
            current.append(int(digits))
            digits = ""
            if ch == ";":
                teams.append(current)
                current = []
            continue
        raise UsageError(f"alliances: unexpected character {ch!r} at position {pos}")
    if not teams or not teams[-1]:
        raise UsageError("alliances: empty seating")
    return teams


def _seating_from_args(players: int, alliances: str | None) -> SeatingConfig:
    if alliances is None:
        return SeatingConfig.singles(players)
    try:
        seating = SeatingConfig.from_alliances(parse_alliances(alliances))
    except ValueError as exc:
        raise UsageError(f"alliances: {exc}") from exc
    if seating.p != players:
        raise UsageError(
            f"alliances name {seating.p} players but --players is {players}"
        )
    return seating


def parse_coalition(spec: str, seating: SeatingConfig) -> frozenset[int]:
    """A coalition spec is either "teamK" or a comma list of players."""
    spec = spec.strip()
    if spec.startswith("team"):
        try:
            team = int(spec[4:])
        except ValueError:
            raise UsageError(f"coalition: bad team name {spec!r}") from None
        members = seating.teams().get(team)
        if not members:
            raise UsageError(f"coalition: no such team {team}")
        return frozenset(members)
    try:
        members = frozenset(int(tok) for tok in spec.split(","))
    except ValueError:
        raise UsageError(f"coalition: expected players or teamK, got {spec!r}") from None
    try:
        return solver.as_coalition(members, seating.p)
    except ValueError as exc:
        raise UsageError(f"coalition: {exc}") from exc


def cmd_decompose(args: argparse.Namespace) -> int:
    try:
        decomp = fibzeck.zeckendorf(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    indices = list(decomp.indices)
    values = list(decomp.values())
    if args.json:
        print(json.dumps({"n": args.n, "indices": indices, "values": values}))
        return 0
    by_index = " + ".join(f"F_{i}" for i in reversed(indices))
    by_value = " + ".join(str(v) for v in reversed(values))
    print(f"{args.n} = {by_index} = {by_value}")
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    seating = _seating_from_args(args.players, args.alliances)
    coalition = parse_coalition(args.coalition, seating)
    try:
        outcome = solver.solve(args.n, seating, coalition, state_cap=args.state_cap)
    except solver.CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR
    stats = outcome.stats
    if args.json:
        print(
            json.dumps(
                {
                    "n": args.n,
                    "players": seating.p,
                    "alliances": seating.to_alliances(),
                    "coalition": sorted(coalition),
                    "win": outcome.win,
                    "stats": {
                        "states_visited": stats.states_visited,
                        "memo_entries": stats.memo_entries,
                        "max_depth": stats.max_depth,
                    },
                }
            )
        )
        return 0
    members = ",".join(str(m) for m in sorted(coalition))
    print(f"coalition {{{members}}}: {'WIN' if outcome.win else 'LOSS'}")
    print(
        f"states visited: {stats.states_visited}, memo entries: {stats.memo_entries}, "
        f"max depth: {stats.max_depth}"
    )
    return 0


def _claim_overrides(args: argparse.Namespace) -> dict:
    overrides = {}
    if args.n_lo is not None:
        overrides["n_lo"] = args.n_lo
    if args.n_hi is not None:
        overrides["n_hi"] = args.n_hi
    for key in ("t", "p", "b", "d"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    if args.players is not None:
        overrides["players"] = tuple(
            int(tok) for tok in args.players.split(",") if tok
        )
    return overrides


def cmd_verify(args: argparse.Namespace) -> int:
    overrides = _claim_overrides(args)
    if args.claim is None:
        if overrides:
            raise UsageError("grid overrides require --claim")
        claims = theorems.claim_catalog()
    else:
        claim_id = args.claim.upper()
        if claim_id not in theorems.CLAIM_IDS:
            raise UsageError(
                f"unknown claim {args.claim!r}; known: {', '.join(theorems.CLAIM_IDS)}"
            )
        try:
            claims = [theorems.build_claim(claim_id, **overrides)]
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    reports = [
        theorems.verify(claim, jobs=jobs, state_cap=args.state_cap)
        for claim in claims
    ]
    if args.json:
        print(json.dumps([r.to_json_dict(include_runtime=True) for r in reports]))
    else:
        for report in reports:
            print(report.to_text_table())
            print()
        failures = sum(r.counts()["fail"] for r in reports)
        print("ALL CLAIMS PASS" if failures == 0 else f"FAILED POINTS: {failures}")
    return 0 if all(r.all_pass for r in reports) else RUNTIME_ERROR


def cmd_reach(args: argparse.Namespace) -> int:
    try:
        report = solver.reachability(args.n, state_cap=args.state_cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except solver.CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR
    if args.json:
        print(
            json.dumps(
                {
                    "n": report.n,
                    "states": report.state_count,
                    "terminal": [s.to_json_dict() for s in report.terminal_states],
                    "acyclic": report.acyclic,
                    "longest_path": report.longest_path,
                    "shortest_path": report.shortest_path,
                }
            )
        )
        return 0
    print(
        f"states: {report.state_count}, terminal: {len(report.terminal_states)}, "
        f"acyclic: {'yes' if report.acyclic else 'NO'}"
    )
    for state in report.terminal_states:
        print(f"  terminal state: {state.pretty()}")
    print(f"longest game: {report.longest_path} moves, shortest: {report.shortest_path} moves")
    return 0


def _print_position(session: engine.Session) -> None:
    print(f"position {session.state.pretty()}  (turn {session.turn})")


def cmd_play(args: argparse.Namespace) -> int:
    seating = _seating_from_args(args.players, args.alliances)
    humans: frozenset[int] = frozenset()
    if args.human:
        try:
            humans = solver.as_coalition(
                (int(tok) for tok in args.human.split(",")), seating.p
            )
        except ValueError as exc:
            raise UsageError(f"--human: {exc}") from exc
    session = engine.new_session(args.n, seating)

    # Machines play relative to one reference coalition: the first human's
    # team.  Its members (machine teammates included) follow the winning
    # policy when one exists; everyone else plays best resistance against
    # it, which is the worst case the human can explore against.
    anchor = min(humans) if humans else 1
    reference = frozenset(seating.teams()[seating.team_of_player(anchor)])
    table = solver.CoalitionSolver(args.n, seating, reference, args.state_cap)

    print(f"Zeckendorf game: n={args.n}, {seating.p} players, teams {seating.to_alliances()}")
    while not session.finished:
        _print_position(session)
        player = session.player_to_move()
        assert player is not None
        team = seating.team_of_player(player)
        moves = engine.legal_moves(session.state)
        if player in humans:
            tokens = ", ".join(f"{m.token()} ({m.describe()})" for m in moves)
            print(f"player {player} (team {team}) to move. legal: {tokens}")
            move = _read_human_move(session, moves, table)
            if move is None:
                print("game abandoned")
                return 0
        else:
            move = table.best_move(session.state, session.turn).move
            print(f"player {player} (team {team}) plays {move.token()} ({move.describe()})")
        session = engine.session_apply(session, move)
    _print_position(session)
    if session.winner is None:
        print("the start position is already final; nobody moved")
    else:
        print(f"player {session.winner} (team {session.winning_team}) made the final move and wins")
    return 0


def _read_human_move(
    session: engine.Session,
    moves: list[engine.Move],
    hint_solver: solver.CoalitionSolver,
) -> engine.Move | None:
    while True:
        try:
            raw = input("move> ").strip()
        except EOFError:
            return None
        if raw in ("quit", "exit"):
            return None
        if raw == "moves":
            print(", ".join(m.token() for m in moves))
            continue
        if raw == "hint":
            best = hint_solver.best_move(session.state, session.turn)
            verdict = "winning" if best.win else "not winning"
            members = ",".join(str(m) for m in sorted(hint_solver.coalition))
            print(f"hint: {best.move.token()} (coalition {{{members}}} is {verdict} here)")
            continue
        try:
            move = engine.parse_move(raw)
        except ValueError as exc:
            print(f"bad token: {exc} (try 'moves')")
            continue
        if move not in moves:
            print(f"{move.token()} is not legal here (try 'moves')")
            continue
        return move


def cmd_serve(args: argparse.Namespace) -> int:
    from pathlib import Path

    from . import server

    static = args.static
    if static is None and Path("frontend/dist/index.html").is_file():
        static = "frontend/dist"
    try:
        server.run_server(
            port=args.port,
            persist_path=args.persist,
            static_dir=static,
            state_cap=args.state_cap,
        )
    except OSError as exc:
        print(f"error: cannot serve on port {args.port}: {exc}", file=sys.stderr)
        return RUNTIME_ERROR
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zeckgame",
        description="Exact engine, coalition solver, and claim verifier for the Zeckendorf game.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dec = sub.add_parser("decompose", help="Zeckendorf decomposition of n")
    p_dec.add_argument("n", type=int)
    p_dec.add_argument("--json", action="store_true")
    p_dec.set_defaults(func=cmd_decompose)

    p_solve = sub.add_parser("solve", help="decide whether a coalition can force the final move")
    p_solve.add_argument("--n", type=int, required=True)
    p_solve.add_argument("--players", type=int, required=True)
    p_solve.add_argument("--alliances", help='teams like "1,2,3,4;5,6" (default: everyone solo)')
    p_solve.add_argument("--coalition", required=True, help='players like "1,3" or a team like "team1"')
    p_solve.add_argument("--state-cap", type=int)
    p_solve.add_argument("--json", action="store_true")
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="run claim verification grids")
    p_verify.add_argument("--claim", help="claim id (default: the full catalog)")
    p_verify.add_argument("--n-lo", type=int)
    p_verify.add_argument("--n-hi", type=int)
    p_verify.add_argument("--t", type=int)
    p_verify.add_argument("--p", type=int)
    p_verify.add_argument("--b", type=int)
    p_verify.add_argument("--d", type=int)
    p_verify.add_argument("--players", help="comma list of player counts (NO_WINNER_MULTI)")
    p_verify.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
    p_verify.add_argument("--state-cap", type=int)
    p_verify.add_argument("--json", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    p_reach = sub.add_parser("reach", help="enumerate the reachable game graph")
    p_reach.add_argument("--n", type=int, required=True)
    p_reach.add_argument("--state-cap", type=int)
    p_reach.add_argument("--json", action="store_true")
    p_reach.set_defaults(func=cmd_reach)

    p_play = sub.add_parser("play", help="interactive game against exact machine play")
    p_play.add_argument("--n", type=int, required=True)
    p_play.add_argument("--players", type=int, required=True)
    p_play.add_argument("--alliances")
    p_play.add_argument("--human", help='comma list of human-controlled players, e.g. "1,3"')
    p_play.add_argument("--state-cap", type=int)
    p_play.set_defaults(func=cmd_play)

    p_serve = sub.add_parser("serve", help="serve the HTTP API and web client")
    p_serve.add_argument("--port", type=int, default=8787)
    p_serve.add_argument("--persist", help="JSON-lines session snapshot file")
    p_serve.add_argument("--static", help="directory of web client assets")
    p_serve.add_argument("--state-cap", type=int)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except KeyboardInterrupt:
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
