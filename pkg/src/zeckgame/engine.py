"""Game state, move rules, and turn-tracked sessions.

A position is a multiset of Fibonacci parts summing to a conserved total
``n``, stored as a counts array (position ``j`` holds the multiplicity of
``F_{j+1}``).  The four move rules:

* ``c1``      -- combine two F_1 into one F_2                  (1+1=2)
* ``adj:i``   -- combine F_i and F_{i+1} into F_{i+2}          (i >= 1)
* ``s2``      -- split two F_2 into F_1 and F_3                (2+2=1+3)
* ``split:i`` -- split two F_i into F_{i-2} and F_{i+1}        (i >= 3)

Every rule conserves the total, so no part can ever exceed ``n`` and a
fixed counts-array capacity of ``max_index(n) + 1`` suffices for a whole
game.  The game ends exactly when the counts array is the Zeckendorf
decomposition of ``n``; the player who made the final move wins for
their team.

States and moves are immutable values.  ``successors`` is the shared
move generator: it returns children in the canonical move order
(``c1``, then ``adj`` by ascending index, then ``s2``, then ``split`` by
ascending index) and memoizes per counts array, so exhaustive searches
that revisit states across queries pay for move generation once.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from . import fibzeck
from .fibzeck import fib_value, is_zeckendorf, max_index

KIND_COMBINE_ONES = "c1"
KIND_COMBINE_ADJACENT = "adj"
KIND_SPLIT_TWOS = "s2"
KIND_SPLIT_PAIR = "split"

_KINDS = (KIND_COMBINE_ONES, KIND_COMBINE_ADJACENT, KIND_SPLIT_TWOS, KIND_SPLIT_PAIR)


class IllegalMoveError(ValueError):
    """A move whose count preconditions do not hold in the given state."""


class GameOverError(RuntimeError):
    """A move was submitted to a session whose game already ended."""


@dataclass(frozen=True, slots=True)
class Move:
    """One of the four move variants; ``i`` is set only for adj/split."""

    kind: str
    i: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown move kind {self.kind!r}")
        if self.kind in (KIND_COMBINE_ONES, KIND_SPLIT_TWOS):
            if self.i is not None:
                raise ValueError(f"move {self.kind!r} takes no index")
        elif self.kind == KIND_COMBINE_ADJACENT:
            if self.i is None or self.i < 1:
                raise ValueError("adj requires an index i >= 1")
        else:  # split
            if self.i is None or self.i < 3:
                raise ValueError("split requires an index i >= 3")

    def token(self) -> str:
        """Canonical text encoding: c1, adj:i, s2, split:i."""
        if self.i is None:
            return self.kind
        return f"{self.kind}:{self.i}"

    def describe(self) -> str:
        """Human-readable equation form, e.g. ``3+5=8`` or ``2+2=1+3``."""
        if self.kind == KIND_COMBINE_ONES:
            return "1+1=2"
        if self.kind == KIND_SPLIT_TWOS:
            return "2+2=1+3"
        i = self.i
        assert i is not None
        if self.kind == KIND_COMBINE_ADJACENT:
            return f"{fib_value(i)}+{fib_value(i + 1)}={fib_value(i + 2)}"
        return f"{fib_value(i)}+{fib_value(i)}={fib_value(i - 2)}+{fib_value(i + 1)}"

    def __str__(self) -> str:
        return self.token()


COMBINE_ONES = Move(KIND_COMBINE_ONES)
SPLIT_TWOS = Move(KIND_SPLIT_TWOS)


def combine_adjacent(i: int) -> Move:
    return Move(KIND_COMBINE_ADJACENT, i)


def split_pair(i: int) -> Move:
    return Move(KIND_SPLIT_PAIR, i)


def parse_move(token: str) -> Move:
    """Parse the canonical text encoding of a move.

    Raises ValueError for anything that is not exactly c1, s2, adj:i or
    split:i with a positive integer index.
    """
    token = token.strip()
    if token == KIND_COMBINE_ONES:
        return COMBINE_ONES
    if token == KIND_SPLIT_TWOS:
        return SPLIT_TWOS
    kind, sep, arg = token.partition(":")
    if sep and kind in (KIND_COMBINE_ADJACENT, KIND_SPLIT_PAIR):
        try:
            i = int(arg)
        except ValueError:
            raise ValueError(f"bad move index in token {token!r}") from None
        return Move(kind, i)
    raise ValueError(f"unparseable move token {token!r}")


@dataclass(frozen=True, slots=True)
class GameState:
    """Immutable counts-array position with its conserved total.

    ``counts`` always has the full capacity ``max_index(n) + 1`` so that
    states of the same game compare by plain tuple equality.
    """

    n: int
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        fibzeck._check_n(self.n)
        cap = max_index(self.n) + 1
        if len(self.counts) != cap:
            raise ValueError(
                f"counts must have capacity {cap} for n={self.n}, "
                f"got length {len(self.counts)}"
            )
        total = 0
        for j, c in enumerate(self.counts):
            if c < 0:
                raise ValueError(f"negative count at index {j + 1}")
            if c:
                total += c * fib_value(j + 1)
        if total != self.n:
            raise ValueError(f"counts sum to {total}, expected n={self.n}")

    def trimmed_counts(self) -> tuple[int, ...]:
        """Counts with trailing zeros removed (the canonical wire form)."""
        counts = self.counts
        top = len(counts)
        while top > 0 and counts[top - 1] == 0:
            top -= 1
        return counts[:top]

    def parts(self) -> list[int]:
        """The multiset of part values, ascending."""
        out: list[int] = []
        for j, c in enumerate(self.counts):
            out.extend([fib_value(j + 1)] * c)
        return out

    def pretty(self) -> str:
        """Display form like ``{1^3, 2^2, 5}``."""
        pieces = []
        for j, c in enumerate(self.counts):
            if c == 1:
                pieces.append(str(fib_value(j + 1)))
            elif c > 1:
                pieces.append(f"{fib_value(j + 1)}^{c}")
        return "{" + ", ".join(pieces) + "}"

    def to_json_dict(self) -> dict:
        return {"n": self.n, "counts": list(self.trimmed_counts())}

    @classmethod
    def from_counts(cls, n: int, counts: Sequence[int]) -> "GameState":
        """Build a state from any-length counts, normalizing capacity."""
        cap = max_index(n) + 1
        padded = list(counts)[: len(counts)]
        while len(padded) > cap and padded and padded[-1] == 0:
            padded.pop()
        if len(padded) > cap:
            raise ValueError(f"counts name an index above max_index({n})")
        padded.extend([0] * (cap - len(padded)))
        return cls(n, tuple(padded))

    @classmethod
    def from_json_dict(cls, obj: dict) -> "GameState":
        if not isinstance(obj, dict) or "n" not in obj or "counts" not in obj:
            raise ValueError("state object must have 'n' and 'counts'")
        return cls.from_counts(obj["n"], obj["counts"])


def initial_state(n: int) -> GameState:
    """The opening position: n copies of F_1."""
    fibzeck._check_n(n)
    cap = max_index(n) + 1
    return GameState(n, (n,) + (0,) * (cap - 1))


# Successor cache, shared by every search in the process.  Keys are full
# counts tuples; values are immutable, so concurrent idempotent insertion
# under the GIL is safe.
_successor_cache: dict[tuple[int, ...], tuple[tuple[Move, tuple[int, ...]], ...]] = {}


def successors(counts: tuple[int, ...]) -> tuple[tuple[Move, tuple[int, ...]], ...]:
    """All (move, child counts) pairs from a counts tuple, canonical order.

    Empty exactly when the position is terminal.
    """
    cached = _successor_cache.get(counts)
    if cached is not None:
        return cached
    out: list[tuple[Move, tuple[int, ...]]] = []
    cap = len(counts)
    if counts[0] >= 2:
        child = list(counts)
        child[0] -= 2
        child[1] += 1
        out.append((COMBINE_ONES, tuple(child)))
    for j in range(cap - 2):
        if counts[j] >= 1 and counts[j + 1] >= 1:
            child = list(counts)
            child[j] -= 1
            child[j + 1] -= 1
            child[j + 2] += 1
            out.append((combine_adjacent(j + 1), tuple(child)))
    if cap >= 3 and counts[1] >= 2:
        child = list(counts)
        child[1] -= 2
        child[0] += 1
        child[2] += 1
        out.append((SPLIT_TWOS, tuple(child)))
    for j in range(2, cap - 1):
        if counts[j] >= 2:
            child = list(counts)
            child[j] -= 2
            child[j - 2] += 1
            child[j + 1] += 1
            out.append((split_pair(j + 1), tuple(child)))
    result = tuple(out)
    _successor_cache[counts] = result
    return result


def clear_successor_cache() -> None:
    _successor_cache.clear()


def legal_moves(state: GameState) -> list[Move]:
    """Legal moves in canonical order; empty iff the state is terminal."""
    return [move for move, _ in successors(state.counts)]


def is_terminal(state: GameState) -> bool:
    """True iff the position is the Zeckendorf decomposition of n."""
    return is_zeckendorf(state.counts)


def _legality_reason(counts: tuple[int, ...], move: Move) -> str | None:
    """None if the move is legal, else the violated count precondition."""
    cap = len(counts)

    def have(i: int) -> int:
        return counts[i - 1] if 1 <= i <= cap else 0

    if move.kind == KIND_COMBINE_ONES:
        if have(1) < 2:
            return f"c1 requires two copies of F_1, found {have(1)}"
        return None
    if move.kind == KIND_SPLIT_TWOS:
        if have(2) < 2:
            return f"s2 requires two copies of F_2, found {have(2)}"
        return None
    i = move.i
    assert i is not None
    if move.kind == KIND_COMBINE_ADJACENT:
        if have(i) < 1 or have(i + 1) < 1:
            return (
                f"adj:{i} requires one F_{i} and one F_{i + 1}, "
                f"found {have(i)} and {have(i + 1)}"
            )
        if i + 2 > cap:
            return f"adj:{i} would create F_{i + 2}, above capacity for this n"
        return None
    if have(i) < 2:
        return f"split:{i} requires two copies of F_{i}, found {have(i)}"
    if i + 1 > cap:
        return f"split:{i} would create F_{i + 1}, above capacity for this n"
    return None


def apply_move(state: GameState, move: Move) -> GameState:
    """Apply a legal move, returning the new state.

    Raises IllegalMoveError naming the violated precondition otherwise.
    """
    reason = _legality_reason(state.counts, move)
    if reason is not None:
        raise IllegalMoveError(reason)
    for candidate, child in successors(state.counts):
        if candidate == move:
            return GameState(state.n, child)
    raise IllegalMoveError(f"move {move.token()} not legal in {state.pretty()}")


@dataclass(frozen=True)
class SeatingConfig:
    """Player count and the player -> team assignment.

    Teams are 1-based integers.  Seating is circular: player p and
    player 1 are adjacent.
    """

    p: int
    team_of: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError(f"need at least one player, got p={self.p}")
        if len(self.team_of) != self.p:
            raise ValueError(
                f"team_of must assign all {self.p} players, got {len(self.team_of)}"
            )

    @classmethod
    def singles(cls, p: int) -> "SeatingConfig":
        """Every player on their own team (the plain multiplayer game)."""
        return cls(p, tuple(range(1, p + 1)))

    @classmethod
    def from_alliances(cls, alliances: Sequence[Sequence[int]]) -> "SeatingConfig":
        """Build from team membership lists, e.g. [[1,2,3,4],[5,6]].

        The lists must partition 1..p; team ids follow list order.
        """
        players = [m for team in alliances for m in team]
        p = len(players)
        if p == 0:
            raise ValueError("alliances must name at least one player")
        if sorted(players) != list(range(1, p + 1)):
            raise ValueError(f"alliances must partition players 1..{p}")
        team_of = [0] * p
        for tid, team in enumerate(alliances, start=1):
            for m in team:
                team_of[m - 1] = tid
        return cls(p, tuple(team_of))

    def team_of_player(self, player: int) -> int:
        if not 1 <= player <= self.p:
            raise ValueError(f"player {player} out of range 1..{self.p}")
        return self.team_of[player - 1]

    def teams(self) -> dict[int, tuple[int, ...]]:
        """Team id -> members, ids in first-appearance order."""
        out: dict[int, list[int]] = {}
        for player, tid in enumerate(self.team_of, start=1):
            out.setdefault(tid, []).append(player)
        return {tid: tuple(members) for tid, members in out.items()}

    def to_alliances(self) -> list[list[int]]:
        return [list(members) for members in self.teams().values()]

    def rotated(self, r: int) -> "SeatingConfig":
        """Shift the seating pattern by r places around the circle.

        Player ((m-1+r) mod p)+1 in the result plays the role player m
        had in the original.
        """
        team_of = [0] * self.p
        for m in range(1, self.p + 1):
            team_of[(m - 1 + r) % self.p] = self.team_of[m - 1]
        return SeatingConfig(self.p, tuple(team_of))


def player_for_turn(turn: int, p: int) -> int:
    """Player to move at a 0-based turn counter; player 1 moves first."""
    return (turn % p) + 1


@dataclass(frozen=True)
class Session:
    """A game in progress: state, move log, seating, and turn counter.

    ``winner`` is the player who made the final move; it stays None for
    the n=1 game, which starts finished with nobody having moved.
    """

    state: GameState
    seating: SeatingConfig
    moves_played: tuple[Move, ...] = ()
    turn: int = 0
    winner: int | None = None

    @property
    def finished(self) -> bool:
        return is_terminal(self.state)

    @property
    def winning_team(self) -> int | None:
        if self.winner is None:
            return None
        return self.seating.team_of_player(self.winner)

    def player_to_move(self) -> int | None:
        if self.finished:
            return None
        return player_for_turn(self.turn, self.seating.p)


def new_session(n: int, seating: SeatingConfig) -> Session:
    """Start a game of total n.  An already-terminal start (n=1) has no winner."""
    return Session(state=initial_state(n), seating=seating)


def session_apply(session: Session, move: Move) -> Session:
    """Advance a session by one move, marking the winner on the final move."""
    if session.finished:
        raise GameOverError("the game is over; no further moves are accepted")
    mover = player_for_turn(session.turn, session.seating.p)
    state = apply_move(session.state, move)
    winner = mover if is_terminal(state) else None
    return replace(
        session,
        state=state,
        moves_played=session.moves_played + (move,),
        turn=session.turn + 1,
        winner=winner,
    )
