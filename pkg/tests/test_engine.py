"""Engine checks: move legality, application, terminality, sessions."""

from __future__ import annotations

import random

import pytest

from zeckgame import engine
from zeckgame.engine import (
    COMBINE_ONES,
    SPLIT_TWOS,
    GameOverError,
    GameState,
    IllegalMoveError,
    Move,
    SeatingConfig,
    apply_move,
    combine_adjacent,
    initial_state,
    is_terminal,
    legal_moves,
    new_session,
    parse_move,
    session_apply,
    split_pair,
)
from zeckgame.fibzeck import fib_value, zeckendorf


def state_of(n: int, counts) -> GameState:
    return GameState.from_counts(n, counts)


def tokens(state: GameState) -> list[str]:
    return [m.token() for m in legal_moves(state)]


# -- moves ------------------------------------------------------------------


def test_move_tokens_round_trip():
    for move in (COMBINE_ONES, SPLIT_TWOS, combine_adjacent(1), split_pair(7)):
        assert parse_move(move.token()) == move


def test_move_validation():
    with pytest.raises(ValueError):
        Move("adj")  # missing index
    with pytest.raises(ValueError):
        split_pair(2)  # split needs i >= 3
    with pytest.raises(ValueError):
        Move("c1", 1)
    with pytest.raises(ValueError):
        parse_move("frob")
    with pytest.raises(ValueError):
        parse_move("adj:x")


def test_move_describe():
    assert COMBINE_ONES.describe() == "1+1=2"
    assert SPLIT_TWOS.describe() == "2+2=1+3"
    assert combine_adjacent(2).describe() == "2+3=5"
    assert split_pair(4).describe() == "5+5=2+8"


# -- states -----------------------------------------------------------------


def test_initial_state_examples():
    assert initial_state(1).counts == (1, 0)
    assert initial_state(5).trimmed_counts() == (5,)
    assert initial_state(30).trimmed_counts() == (30,)
    with pytest.raises(ValueError):
        initial_state(0)


def test_state_conservation_validated():
    with pytest.raises(ValueError):
        GameState.from_counts(4, [1, 1])  # sums to 3, not 4
    with pytest.raises(ValueError):
        GameState.from_counts(4, [1, 0, -1])


def test_state_json_round_trip():
    state = state_of(12, [0, 2, 0, 0, 1])  # 2+2+8 = 12
    obj = state.to_json_dict()
    assert obj == {"n": 12, "counts": [0, 2, 0, 0, 1]}
    assert GameState.from_json_dict(obj) == state


def test_state_equality_ignores_trailing_zeros_via_capacity():
    a = state_of(4, [1, 0, 1])
    b = state_of(4, [1, 0, 1, 0])
    assert a == b
    assert a.counts == (1, 0, 1, 0)


# -- legal moves / application ----------------------------------------------


def test_legal_moves_examples():
    assert tokens(initial_state(5)) == ["c1"]
    assert tokens(state_of(4, [1, 0, 1])) == []  # {1,3} is final
    assert tokens(state_of(3, [1, 1])) == ["adj:1"]


def test_legal_moves_canonical_order():
    # {1^2, 2^2, 3, 5^2}: every move kind at once.
    state = state_of(19, [2, 2, 1, 2])
    assert tokens(state) == ["c1", "adj:1", "adj:2", "adj:3", "s2", "split:4"]


def test_apply_examples():
    assert apply_move(state_of(4, [0, 2]), SPLIT_TWOS) == state_of(4, [1, 0, 1])
    assert apply_move(state_of(6, [0, 0, 2]), split_pair(3)) == state_of(6, [1, 0, 0, 1])
    assert apply_move(initial_state(4), COMBINE_ONES) == state_of(4, [2, 1])


def test_apply_rejects_illegal_move_with_reason():
    with pytest.raises(IllegalMoveError, match="two copies of F_2"):
        apply_move(state_of(4, [1, 0, 1]), SPLIT_TWOS)
    with pytest.raises(IllegalMoveError, match="requires one F_2 and one F_3"):
        apply_move(initial_state(5), combine_adjacent(2))


def test_is_terminal_examples():
    assert is_terminal(initial_state(3)) is False
    assert is_terminal(state_of(3, [0, 0, 1])) is True
    assert is_terminal(state_of(10, [0, 1, 0, 0, 1])) is True  # {2, 8}


def test_terminality_equivalences_over_reachable_states():
    # is_terminal <=> no legal move <=> the counts form of zeckendorf(n).
    for n in range(1, 26):
        final = zeckendorf(n).to_counts(len(initial_state(n).counts))
        seen = {initial_state(n).counts}
        frontier = [initial_state(n).counts]
        while frontier:
            counts = frontier.pop()
            state = GameState(n, counts)
            moves = legal_moves(state)
            assert is_terminal(state) == (not moves)
            assert is_terminal(state) == (counts == final)
            for move in moves:
                child = apply_move(state, move).counts
                if child not in seen:
                    seen.add(child)
                    frontier.append(child)


def test_apply_is_pure_and_deterministic():
    state = state_of(19, [2, 2, 1, 2])
    first = legal_moves(state)
    second = legal_moves(state)
    assert first == second
    for move in first:
        assert apply_move(state, move) == apply_move(state, move)


def test_conservation_on_random_walks():
    rng = random.Random(20260810)
    applications = 0
    while applications < 2000:
        n = rng.randint(2, 40)
        state = initial_state(n)
        while True:
            moves = legal_moves(state)
            if not moves:
                break
            state = apply_move(state, rng.choice(moves))
            applications += 1
            assert sum(c * fib_value(j + 1) for j, c in enumerate(state.counts)) == n


# -- seating ------------------------------------------------------------------


def test_seating_from_alliances():
    seating = SeatingConfig.from_alliances([[1, 2, 3, 4], [5, 6]])
    assert seating.p == 6
    assert seating.team_of == (1, 1, 1, 1, 2, 2)
    assert seating.teams() == {1: (1, 2, 3, 4), 2: (5, 6)}
    assert seating.to_alliances() == [[1, 2, 3, 4], [5, 6]]
    with pytest.raises(ValueError):
        SeatingConfig.from_alliances([[1, 2], [2, 3]])
    with pytest.raises(ValueError):
        SeatingConfig.from_alliances([[1], [3]])


def test_seating_rotation_wraps():
    seating = SeatingConfig.from_alliances([[1, 2], [3]])
    rotated = seating.rotated(2)
    # the pattern (team of seat 1, 2, 3) = (1, 1, 2) shifts two seats on.
    assert rotated.team_of == (1, 2, 1)
    assert seating.rotated(3) == seating


# -- sessions -----------------------------------------------------------------


def test_session_single_forced_move_wins_for_player_one():
    session = new_session(2, SeatingConfig.singles(2))
    session = session_apply(session, COMBINE_ONES)
    assert session.finished
    assert session.winner == 1
    assert session.winning_team == 1


def test_session_n3_player_two_wins():
    session = new_session(3, SeatingConfig.singles(2))
    session = session_apply(session, COMBINE_ONES)
    assert not session.finished
    session = session_apply(session, combine_adjacent(1))
    assert session.finished
    assert session.winner == 2


def test_session_rejects_moves_after_game_over():
    session = new_session(2, SeatingConfig.singles(2))
    session = session_apply(session, COMBINE_ONES)
    with pytest.raises(GameOverError):
        session_apply(session, COMBINE_ONES)


def test_session_n1_starts_finished_without_winner():
    session = new_session(1, SeatingConfig.singles(3))
    assert session.finished
    assert session.winner is None
    assert session.player_to_move() is None
    with pytest.raises(GameOverError):
        session_apply(session, COMBINE_ONES)


def test_session_replay_reproduces_state():
    rng = random.Random(7)
    seating = SeatingConfig.singles(3)
    session = new_session(21, seating)
    while not session.finished:
        moves = legal_moves(session.state)
        session = session_apply(session, rng.choice(moves))
    replayed = new_session(21, seating)
    for move in session.moves_played:
        replayed = session_apply(replayed, move)
    assert replayed == session
    assert session.turn == len(session.moves_played)
    assert session.winner == ((session.turn - 1) % 3) + 1


def test_winner_team_follows_seating():
    seating = SeatingConfig.from_alliances([[1, 2], [3]])
    session = new_session(2, seating.rotated(1))
    session = session_apply(session, COMBINE_ONES)
    assert session.winner == 1
    assert session.winning_team == 2  # seat 1 now belongs to team 2
