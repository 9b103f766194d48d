"""Exact coalition solver, reachability analysis, and move-pattern detectors.

A coalition wins if one of its members makes the final move.  The solver
decides this by exhaustive AND/OR search over the game DAG: at a
coalition member's turn the coalition picks the move (OR over children),
at anyone else's turn the rest of the table is assumed to coordinate
against the coalition (AND over children).  A move that lands on the
Zeckendorf decomposition is an immediate win for the mover's side.

Positions are memoized by (counts array, turn mod p); the turn residue
must be part of the key because lines of different length can reach the
same counts array with a different player to move.  The game graph is
acyclic (every game terminates), and the search asserts that at runtime
with an in-stack mark rather than assuming it.

``CoalitionSolver`` keeps its memo across queries, so a server can answer
many analysis requests for the same table cheaply; ``solve`` is the
one-shot functional wrapper.
"""

from __future__ import annotations

import os
import sys
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .engine import (
    GameState,
    KIND_COMBINE_ONES,
    KIND_SPLIT_TWOS,
    Move,
    SeatingConfig,
    initial_state,
    player_for_turn,
    successors,
)

DEFAULT_STATE_CAP = 10**7
STATE_CAP_ENV = "ZECK_STATE_CAP"

_UNKNOWN = object()


class CapacityError(RuntimeError):
    """The configured search size cap was hit; results would be partial."""


class SearchInvariantError(RuntimeError):
    """A back edge appeared in the supposedly acyclic game graph."""


class NoMoveError(ValueError):
    """A move was requested for a terminal position."""


def resolve_state_cap(state_cap: int | None = None) -> int:
    """Effective cap: explicit argument, else ZECK_STATE_CAP, else default."""
    if state_cap is not None:
        cap = state_cap
    elif STATE_CAP_ENV in os.environ:
        raw = os.environ[STATE_CAP_ENV]
        try:
            cap = int(raw)
        except ValueError:
            raise ValueError(f"{STATE_CAP_ENV} must be an integer, got {raw!r}") from None
    else:
        return DEFAULT_STATE_CAP
    if cap < 1:
        raise ValueError(f"state cap must be positive, got {cap}")
    return cap


def as_coalition(members: Iterable[int], p: int) -> frozenset[int]:
    """Validate and normalize a coalition for a p-player table."""
    coalition = frozenset(members)
    if not coalition:
        raise ValueError("coalition must not be empty")
    for m in coalition:
        if not isinstance(m, int) or isinstance(m, bool) or not 1 <= m <= p:
            raise ValueError(f"coalition member {m!r} out of range 1..{p}")
    return coalition


@dataclass(frozen=True)
class SolveStats:
    states_visited: int
    memo_entries: int
    max_depth: int


@dataclass(frozen=True)
class SolveOutcome:
    """Result of one coalition query: value, winning policy, search size.

    ``policy`` maps (state, turn mod p) to the canonical-order-first
    winning move, for every evaluated position where the coalition
    member to move can force a win.
    """

    n: int
    seating: SeatingConfig
    coalition: frozenset[int]
    win: bool
    policy: dict[tuple[GameState, int], Move]
    stats: SolveStats


class CoalitionSolver:
    """Memoized AND/OR evaluator for one (n, seating, coalition) table."""

    def __init__(
        self,
        n: int,
        seating: SeatingConfig,
        coalition: Iterable[int],
        state_cap: int | None = None,
    ) -> None:
        self.n = n
        self.seating = seating
        self.coalition = as_coalition(coalition, seating.p)
        self.cap = resolve_state_cap(state_cap)
        self._p = seating.p
        self._member_by_r = tuple(
            player_for_turn(r, self._p) in self.coalition for r in range(self._p)
        )
        self._initial = initial_state(n)
        self._memo: dict[tuple[tuple[int, ...], int], bool] = {}
        self._policy: dict[tuple[tuple[int, ...], int], Move] = {}
        self._onstack: set[tuple[tuple[int, ...], int]] = set()
        self._visits = 0
        self._max_depth = 0
        # DFS depth tracks game length from the deepest position; give the
        # interpreter stack generous headroom before starting.
        needed = min(4 * n + 1000, 200_000)
        if sys.getrecursionlimit() < needed:
            sys.setrecursionlimit(needed)

    def value(self, counts: tuple[int, ...], r: int) -> bool:
        """True iff the coalition forces a member-made final move from here.

        ``counts`` must be a non-terminal position of this game; ``r`` is
        the turn residue (turn mod p) at that position.
        """
        key = (counts, r)
        cached = self._memo.get(key, _UNKNOWN)
        if cached is not _UNKNOWN:
            return cached  # type: ignore[return-value]
        if key in self._onstack:
            raise SearchInvariantError(
                "back edge in game graph: the termination invariant is broken"
            )
        if len(self._memo) >= self.cap:
            raise CapacityError(
                f"solver state cap of {self.cap} memo entries exceeded "
                f"(raise it via state_cap or {STATE_CAP_ENV})"
            )
        onstack = self._onstack
        onstack.add(key)
        self._visits += 1
        if len(onstack) > self._max_depth:
            self._max_depth = len(onstack)

        member_to_move = self._member_by_r[r]
        next_r = (r + 1) % self._p
        winning_move: Move | None = None
        try:
            if member_to_move:
                result = False
                for move, child in successors(counts):
                    if not successors(child) or self.value(child, next_r):
                        result = True
                        winning_move = move
                        break
            else:
                result = True
                for move, child in successors(counts):
                    if not successors(child) or not self.value(child, next_r):
                        result = False
                        break
        finally:
            onstack.discard(key)

        self._memo[key] = result
        if winning_move is not None:
            self._policy[key] = winning_move
        return result

    def win_from_initial(self) -> bool:
        """Value of the opening position; False when n=1 (nobody moves)."""
        if not successors(self._initial.counts):
            return False
        return self.value(self._initial.counts, 0)

    def state_value(self, state: GameState, turn: int) -> bool:
        if state.n != self.n:
            raise ValueError(f"state has n={state.n}, solver was built for n={self.n}")
        if not successors(state.counts):
            raise NoMoveError("position is terminal; it has no value to move from")
        return self.value(state.counts, turn % self._p)

    def best_move(self, state: GameState, turn: int) -> "BestMove":
        """Best move at (state, turn) from the coalition's point of view.

        For a coalition member to move: the canonical-order-first winning
        move, or the first legal move if the position is lost.  For an
        opponent: the first move keeping the coalition's evaluation False
        (best resistance), or the first legal move if every reply loses.
        The win flag is the position's value for the coalition either way.
        """
        if state.n != self.n:
            raise ValueError(f"state has n={state.n}, solver was built for n={self.n}")
        succ = successors(state.counts)
        if not succ:
            raise NoMoveError("position is terminal; there is no move to pick")
        r = turn % self._p
        win = self.value(state.counts, r)
        member_to_move = self._member_by_r[r]
        next_r = (r + 1) % self._p
        wanted = member_to_move  # the mover's side wants this child outcome
        for move, child in succ:
            outcome = member_to_move if not successors(child) else self.value(child, next_r)
            if outcome == wanted:
                return BestMove(move, win)
        return BestMove(succ[0][0], win)

    def stats(self) -> SolveStats:
        return SolveStats(
            states_visited=self._visits,
            memo_entries=len(self._memo),
            max_depth=self._max_depth,
        )

    def outcome(self) -> SolveOutcome:
        """Solve from the opening position and package the result."""
        win = self.win_from_initial()
        policy = {
            (GameState(self.n, counts), r): move
            for (counts, r), move in sorted(self._policy.items())
        }
        return SolveOutcome(
            n=self.n,
            seating=self.seating,
            coalition=self.coalition,
            win=win,
            policy=policy,
            stats=self.stats(),
        )


class BestMove(NamedTuple):
    move: Move
    win: bool


def solve(
    n: int,
    seating: SeatingConfig,
    target: Iterable[int],
    state_cap: int | None = None,
) -> SolveOutcome:
    """Decide whether the target coalition can force the final move.

    Pure function of its inputs: repeated calls give bit-identical
    outcomes, including the extracted policy.
    """
    return CoalitionSolver(n, seating, target, state_cap).outcome()


def best_move(
    state: GameState,
    turn: int,
    seating: SeatingConfig,
    target: Iterable[int],
    state_cap: int | None = None,
) -> BestMove:
    """One-shot best move for the coalition at (state, turn)."""
    solver = CoalitionSolver(state.n, seating, target, state_cap)
    return solver.best_move(state, turn)


@dataclass(frozen=True)
class ReachabilityReport:
    n: int
    state_count: int
    terminal_states: tuple[GameState, ...]
    acyclic: bool
    longest_path: int
    shortest_path: int


def reachability(n: int, state_cap: int | None = None) -> ReachabilityReport:
    """Exhaustive forward closure of the game graph from the opening position.

    Reports the reachable state count, every reachable terminal state,
    whether the graph is acyclic, and the extreme game lengths (moves from
    the opening position to a terminal position).
    """
    cap = resolve_state_cap(state_cap)
    init = initial_state(n).counts

    # Forward closure.  Edges are kept for the cycle check and length DP.
    edges: dict[tuple[int, ...], tuple[tuple[int, ...], ...]] = {}
    frontier = deque([init])
    edges[init] = ()
    order: list[tuple[int, ...]] = []
    while frontier:
        counts = frontier.popleft()
        order.append(counts)
        children = tuple(child for _, child in successors(counts))
        edges[counts] = children
        for child in children:
            if child not in edges:
                if len(edges) >= cap:
                    raise CapacityError(
                        f"reachability state cap of {cap} states exceeded "
                        f"(raise it via state_cap or {STATE_CAP_ENV})"
                    )
                edges[child] = ()
                frontier.append(child)

    # Kahn's algorithm: the graph is acyclic iff the topological order
    # consumes every reachable state.
    indegree: dict[tuple[int, ...], int] = {counts: 0 for counts in edges}
    for counts, children in edges.items():
        for child in children:
            indegree[child] += 1
    queue = deque(c for c, d in indegree.items() if d == 0)
    topo: list[tuple[int, ...]] = []
    while queue:
        counts = queue.popleft()
        topo.append(counts)
        for child in edges[counts]:
            indegree[child] -= 1
            if indegree[child] == 0:
                queue.append(child)
    acyclic = len(topo) == len(edges)

    terminals = tuple(
        GameState(n, counts) for counts in order if not edges[counts]
    )

    # Longest path from the opening position over the DAG; shortest by BFS.
    longest = -1
    shortest = -1
    if acyclic:
        high: dict[tuple[int, ...], int] = {}
        for counts in reversed(topo):
            children = edges[counts]
            high[counts] = 1 + max(high[c] for c in children) if children else 0
        longest = high[init]
        dist = {init: 0}
        bfs = deque([init])
        while bfs:
            counts = bfs.popleft()
            if not edges[counts]:
                shortest = dist[counts]
                break
            for child in edges[counts]:
                if child not in dist:
                    dist[child] = dist[counts] + 1
                    bfs.append(child)

    return ReachabilityReport(
        n=n,
        state_count=len(edges),
        terminal_states=terminals,
        acyclic=acyclic,
        longest_path=longest,
        shortest_path=shortest,
    )


def detect_steal_pattern_k(moves: Sequence[Move], k: int) -> list[int]:
    """Start indices of every window of k+k ``1+1=2`` then k ``2+2=1+3``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    hits: list[int] = []
    span = 3 * k
    for j in range(len(moves) - span + 1):
        if all(moves[j + t].kind == KIND_COMBINE_ONES for t in range(2 * k)) and all(
            moves[j + 2 * k + t].kind == KIND_SPLIT_TWOS for t in range(k)
        ):
            hits.append(j)
    return hits


def detect_steal_pattern(moves: Sequence[Move]) -> list[int]:
    """Start indices of the 3-step window ``1+1=2, 1+1=2, 2+2=1+3``."""
    return detect_steal_pattern_k(moves, 1)
