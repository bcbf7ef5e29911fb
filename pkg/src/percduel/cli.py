"""Command-line entry points: verification suites, single games, batches,
board sampling, transcript replay, and the interactive service.

Every run starts by echoing its resolved configuration as one JSON line, so
any output can be reproduced from the log alone.  PERCDUEL_SEED supplies the
default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import verify as verify_mod
from .boards import sample_bond_percolation, read_board, write_board
from .engine import Bias, Status, Variant, new_game
from .lattice import Box
from .match import parse, play_match, replay, serialize
from .policies import parse_policy
from .strategies import Strategy3, Strategy4, Strategy5
from .boards import certify_barred, choose_origin


def _default_seed() -> int:
    return int(os.environ.get("PERCDUEL_SEED", "0"))


def _echo_config(args: argparse.Namespace) -> None:
    cfg = {k: v for k, v in vars(args).items() if k != "func" and v is not None}
    print("CONFIG " + json.dumps(cfg, sort_keys=True))


def _parse_window(text: str) -> Box:
    x0, y0, x1, y1 = (int(t) for t in text.split(","))
    return Box(x0, x1, y0, y1)


def _resolve_board(args):
    if getattr(args, "board", None):
        return read_board(args.board), args.board
    if getattr(args, "p", None) is not None:
        window = _parse_window(args.window)
        return sample_bond_percolation(window, args.p, args.board_seed), None
    return None, None


def _build_breaker(name: str, game, board):
    if name == "strategy3":
        return Strategy3()
    if name == "strategy4":
        return Strategy4()
    if name == "strategy5":
        cert = certify_barred(board, game.origin)
        if cert is None:
            raise SystemExit("origin does not certify: strategy5 unavailable")
        return Strategy5(cert)
    raise SystemExit(f"unknown breaker strategy {name!r}")


def _make_game(args, board):
    origin = None
    if args.origin:
        x, y = args.origin.split(",")
        origin = (int(x), int(y))
    elif board is not None:
        origin = choose_origin(board, args.origin_policy)
        if origin is None:
            raise SystemExit("no vertex certifies on this board")
    else:
        origin = (0, 0)
    bias = Bias(m=args.m, b=args.b, c=args.c, s=args.s)
    return new_game(args.variant, bias, board, origin)


def cmd_verify(args) -> int:
    _echo_config(args)
    selected: list[str] = []
    if args.all:
        selected = list(verify_mod.ALL_CHECKS)
    if args.lemma:
        selected.append({"perimetric": "perimetric",
                         "bounding-box": "bounding-box",
                         "box-connected": "box-connected"}[args.lemma])
    if args.strategy:
        selected.append(args.strategy)
    if args.check:
        selected.append(args.check)
    if not selected:
        raise SystemExit("nothing selected: use --all, --lemma, --strategy or --check")
    reports = []
    for name in selected:
        fn = verify_mod.ALL_CHECKS[name]
        kwargs = {}
        if name in ("perimetric", "bounding-box") and args.max_edges:
            kwargs["max_edges"] = args.max_edges
        if name == "box-connected" and args.trials:
            kwargs["trials"] = args.trials
        if name == "strategy3" and args.games:
            kwargs["counts"] = {"random": args.games, "greedy": args.games // 5 or 1,
                                "banking": args.games // 5 or 1,
                                "wrapped": args.games // 5 or 1}
        if name == "strategy4":
            if args.games:
                kwargs["games_per_cell"] = args.games
            if args.m:
                kwargs["cells"] = ((args.m, args.c),)
        if name == "strategy5" and args.boards:
            kwargs["boards_per_p"] = args.boards
        if name == "survival" and args.rounds:
            kwargs["rounds"] = args.rounds
        report = fn(**kwargs)
        reports.append(report)
        print(report.line())
        print("REPORT " + json.dumps({
            "name": report.name, "passed": report.passed,
            "elapsed": round(report.elapsed, 2), "details": report.details,
            "counterexample": report.counterexample}, sort_keys=True))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump([{
                "name": r.name, "passed": r.passed, "elapsed": r.elapsed,
                "details": r.details, "counterexample": r.counterexample,
            } for r in reports], fh, indent=2)
    return 0 if all(r.passed for r in reports) else 1


def _play_one(args, seed_offset: int = 0):
    board, board_path = _resolve_board(args)
    game = _make_game(args, board)
    maker = parse_policy(args.maker).build(seed_offset)
    breaker = _build_breaker(args.breaker, game, board)
    limit = args.round_limit
    if limit is None:
        limit = 4 * len(board.open_edges) + 16 if board is not None else 200
    result = play_match(
        game, maker, breaker, round_limit=limit, seed=args.seed + seed_offset,
        status_every=args.status_every, record=not args.no_record,
        board_path=board_path)
    return result


def cmd_play(args) -> int:
    _echo_config(args)
    result = _play_one(args)
    print(f"OUTCOME {result.outcome} round={result.rounds}")
    if result.transcript is not None and args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize(result.transcript))
        print(f"transcript written to {args.out}")
    return 0


def cmd_batch(args) -> int:
    _echo_config(args)
    outcomes: dict[str, int] = {}
    hist: dict[str, int] = {}
    for k in range(args.games):
        result = _play_one(args, seed_offset=k)
        outcomes[result.outcome] = outcomes.get(result.outcome, 0) + 1
        if result.outcome == Status.BREAKER_WON.value:
            key = str(result.rounds)
            hist[key] = hist.get(key, 0) + 1
    summary = {
        "games": args.games,
        "outcomes": outcomes,
        "breaker_win_rate": outcomes.get(Status.BREAKER_WON.value, 0) / args.games,
        "forfeits": outcomes.get(Status.FORFEIT_BY_BREAKER.value, 0),
        "rounds_histogram": dict(sorted(hist.items(), key=lambda kv: int(kv[0]))),
    }
    print("SUMMARY " + json.dumps(summary, sort_keys=True))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2)
    return 0


def cmd_sample_board(args) -> int:
    _echo_config(args)
    board = sample_bond_percolation(_parse_window(args.window), args.p, args.seed)
    write_board(board, args.out)
    print(f"board with {len(board.open_edges)} open edges written to {args.out}")
    return 0


def cmd_replay(args) -> int:
    _echo_config(args)
    with open(args.transcript, encoding="utf-8") as fh:
        t = parse(fh.read())
    state = replay(t, base_dir=args.base_dir or os.path.dirname(args.transcript) or ".")
    from .service import state_hash

    print(f"OUTCOME {t.outcome} round={t.final_round}")
    print(f"STATE_HASH {state_hash(state)}")
    return 0


def cmd_serve(args) -> int:
    _echo_config(args)
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


def _add_game_args(sp, *, batch: bool) -> None:
    sp.add_argument("--variant", default="limited",
                    choices=[v.value for v in Variant])
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--b", type=int, default=2)
    sp.add_argument("--c", type=int, default=0)
    sp.add_argument("--s", type=int, default=0)
    sp.add_argument("--breaker", default="strategy4")
    sp.add_argument("--maker", default="random:0")
    sp.add_argument("--board", help="board file for a polluted game")
    sp.add_argument("--p", type=float, help="sample a fresh polluted board")
    sp.add_argument("--window", default="-50,-50,50,50")
    sp.add_argument("--board-seed", type=int, default=_default_seed())
    sp.add_argument("--origin", help="x,y (defaults to 0,0 or the origin policy)")
    sp.add_argument("--origin-policy", default="scan_adversarial",
                    choices=["scan_adversarial", "largest_cluster"])
    sp.add_argument("--round-limit", type=int)
    sp.add_argument("--seed", type=int, default=_default_seed())
    sp.add_argument("--status-every", type=int, default=1)
    sp.add_argument("--no-record", action="store_true")
    sp.add_argument("--out")
    if batch:
        sp.add_argument("--games", type=int, default=100)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="percduel")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("verify", help="run property and strategy suites")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--lemma", choices=["perimetric", "bounding-box", "box-connected"])
    sp.add_argument("--strategy", choices=["strategy3", "strategy4", "strategy5"])
    sp.add_argument("--check", choices=list(verify_mod.ALL_CHECKS))
    sp.add_argument("--max-edges", type=int)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--games", type=int)
    sp.add_argument("--boards", type=int)
    sp.add_argument("--rounds", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--c", type=int, default=0)
    sp.add_argument("--maker")
    sp.add_argument("--seed", type=int, default=_default_seed())
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("play", help="play one game")
    _add_game_args(sp, batch=False)
    sp.set_defaults(func=cmd_play)

    sp = sub.add_parser("batch", help="play many seeded games")
    _add_game_args(sp, batch=True)
    sp.set_defaults(func=cmd_batch)

    sp = sub.add_parser("sample-board", help="sample and write a polluted board")
    sp.add_argument("--window", default="-50,-50,50,50")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--seed", type=int, default=_default_seed())
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_sample_board)

    sp = sub.add_parser("replay", help="replay a transcript and report the outcome")
    sp.add_argument("--transcript", required=True)
    sp.add_argument("--base-dir")
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("serve", help="run the interactive game service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8642)
    sp.set_defaults(func=cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
