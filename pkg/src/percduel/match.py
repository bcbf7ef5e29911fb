"""Match running and line-format transcripts.

A transcript replays exactly: the header pins the variant, bias, board and
origin; the move lines pin every claim; replaying them through the engine
reproduces the final state, and the recorded outcome matches the exact
status predicate evaluated on it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .boards import PollutedBoard, parse_board_header, read_board, sample_bond_percolation
from .engine import (
    Bias,
    GameState,
    Status,
    apply_move,
    breaker_won,
    new_game,
)
from .lattice import Edge, LatticeError, Vertex, format_edge, parse_edge

FORFEIT = object()
"""Sentinel a Breaker strategy returns when no strategy step applies."""

OUTCOME_ROUND_LIMIT = "round_limit"


@dataclass
class Transcript:
    variant: str
    m: int
    b: int
    c: int
    s: int
    board_spec: str  # "lattice" or "polluted:<file-or-@header>"
    origin: Vertex
    seed: int
    moves: list[tuple[str, int, tuple[Edge, ...]]] = field(default_factory=list)
    outcome: str = OUTCOME_ROUND_LIMIT
    final_round: int = 0

    def header(self) -> str:
        return (
            f"GAME v1 variant={self.variant} m={self.m} b={self.b} "
            f"c={self.c} s={self.s} board={self.board_spec} "
            f"origin={self.origin[0]},{self.origin[1]} seed={self.seed}"
        )


def board_spec_for(board: PollutedBoard | None, path: str | None = None) -> str:
    """lattice, a board-file reference, or an inline @header for fileless runs."""
    if board is None:
        return "lattice"
    if path is not None:
        return f"polluted:{path}"
    w = board.window
    return (
        f"polluted:@window={w.xmin},{w.ymin},{w.xmax},{w.ymax}"
        f";p={board.p!r};seed={board.seed}"
    )


def resolve_board_spec(spec: str, *, base_dir: str = ".") -> PollutedBoard | None:
    if spec == "lattice":
        return None
    if not spec.startswith("polluted:"):
        raise LatticeError(f"bad board spec {spec!r}")
    ref = spec[len("polluted:"):]
    if ref.startswith("@"):
        fields = dict(part.split("=", 1) for part in ref[1:].split(";"))
        window, p, seed = parse_board_header(
            f"BOARD v1 window={fields['window']} p={fields['p']} seed={fields['seed']}"
        )
        return sample_bond_percolation(window, p, seed)
    path = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
    return read_board(path)


def serialize(t: Transcript) -> str:
    lines = [t.header()]
    for side, rnd, edges in t.moves:
        toks = " ".join(format_edge(e) for e in edges)
        lines.append(f"{side} {rnd}:" + (f" {toks}" if toks else ""))
    lines.append(f"OUTCOME {t.outcome} round={t.final_round}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> Transcript:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if head[:2] != ["GAME", "v1"]:
        raise LatticeError(f"bad transcript header {lines[0]!r}")
    fields = dict(part.split("=", 1) for part in head[2:])
    ox, oy = fields["origin"].split(",")
    t = Transcript(
        variant=fields["variant"],
        m=int(fields["m"]),
        b=int(fields["b"]),
        c=int(fields["c"]),
        s=int(fields["s"]),
        board_spec=fields["board"],
        origin=(int(ox), int(oy)),
        seed=int(fields["seed"]),
    )
    for ln in lines[1:]:
        if ln.startswith("OUTCOME"):
            parts = ln.split()
            t.outcome = parts[1]
            t.final_round = int(parts[2].split("=", 1)[1])
            break
        side, rest = ln.split(":", 1)
        side_tag, rnd = side.split()
        toks = rest.split()
        if len(toks) % 3 != 0:
            raise LatticeError(f"bad move line {ln!r}")
        edges = tuple(
            parse_edge(" ".join(toks[i:i + 3])) for i in range(0, len(toks), 3)
        )
        t.moves.append((side_tag, int(rnd), edges))
    return t


def replay(t: Transcript, *, base_dir: str = ".") -> GameState:
    """Re-apply every recorded move; the final status must match the outcome."""
    board = resolve_board_spec(t.board_spec, base_dir=base_dir)
    bias = Bias(m=t.m, b=t.b, c=t.c, s=t.s)
    state = new_game(t.variant, bias, board, t.origin)
    for side, _rnd, edges in t.moves:
        if state.status is not Status.ONGOING:
            break
        apply_move(state, "maker" if side == "M" else "breaker", edges,
                   check_status=False)
    if t.outcome == Status.FORFEIT_BY_BREAKER.value:
        state.status = Status.FORFEIT_BY_BREAKER
    elif breaker_won(state):
        state.status = Status.BREAKER_WON
    final = state.status.value if state.status is not Status.ONGOING else (
        Status.MAKER_ESCAPED_HORIZON.value if state.board is not None
        else OUTCOME_ROUND_LIMIT
    )
    if final != t.outcome or state.round_no != t.final_round:
        raise LatticeError(
            f"replay mismatch: got {final} at round {state.round_no}, "
            f"transcript says {t.outcome} at round {t.final_round}"
        )
    return state


@dataclass
class MatchResult:
    outcome: str
    rounds: int
    state: GameState
    transcript: Transcript | None = None


def play_match(
    state: GameState,
    maker,
    breaker,
    round_limit: int,
    *,
    seed: int = 0,
    status_every: int = 1,
    record: bool = True,
    board_path: str | None = None,
) -> MatchResult:
    """Alternate moves, Maker first, until Breaker wins, forfeits, play
    stalls, or the round limit falls.

    status_every > 1 defers the exact win test to every k-th round (plus
    round-limit and stall points) for long window batches; the recorded
    outcome is always re-checked exactly.
    """
    transcript: Transcript | None = None
    if record:
        transcript = Transcript(
            variant=state.variant.value,
            m=state.bias.m, b=state.bias.b, c=state.bias.c, s=state.bias.s,
            board_spec=board_spec_for(state.board, board_path),
            origin=state.origin,
            seed=seed,
        )

    def finish(outcome: str) -> MatchResult:
        if transcript is not None:
            transcript.outcome = outcome
            transcript.final_round = state.round_no
        return MatchResult(outcome, state.round_no, state, transcript)

    if state.status is Status.BREAKER_WON:
        return finish(Status.BREAKER_WON.value)
    for i in range(1, round_limit + 1):
        m_edges = tuple(maker.move(state))
        apply_move(state, "maker", m_edges, check_status=False)
        if transcript is not None:
            transcript.moves.append(("M", i, m_edges))
        reply = breaker.move(state)
        if reply is FORFEIT:
            state.status = Status.FORFEIT_BY_BREAKER
            return finish(Status.FORFEIT_BY_BREAKER.value)
        b_edges = tuple(reply)
        apply_move(state, "breaker", b_edges, check_status=False)
        if transcript is not None:
            transcript.moves.append(("B", i, b_edges))
        stalled = not m_edges and not b_edges
        if stalled or i % status_every == 0 or not b_edges:
            if breaker_won(state):
                state.status = Status.BREAKER_WON
                return finish(Status.BREAKER_WON.value)
            if stalled:
                return finish(
                    Status.MAKER_ESCAPED_HORIZON.value if state.board is not None
                    else OUTCOME_ROUND_LIMIT
                )
    if breaker_won(state):
        state.status = Status.BREAKER_WON
        return finish(Status.BREAKER_WON.value)
    return finish(
        Status.MAKER_ESCAPED_HORIZON.value if state.board is not None
        else OUTCOME_ROUND_LIMIT
    )
