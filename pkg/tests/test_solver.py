"""Solver checks: values against a memo-free oracle, game-theory properties,
reachability, and the move-pattern detectors."""

from __future__ import annotations

import random
from itertools import chain, combinations
from threading import Thread

import pytest
from hypothesis import given, strategies as st

from zeckgame import engine, solver
from zeckgame.engine import (
    COMBINE_ONES,
    SPLIT_TWOS,
    GameState,
    SeatingConfig,
    combine_adjacent,
    initial_state,
    split_pair,
)
from zeckgame.fibzeck import zeckendorf
from zeckgame.solver import (
    CapacityError,
    CoalitionSolver,
    NoMoveError,
    best_move,
    detect_steal_pattern,
    detect_steal_pattern_k,
    reachability,
    solve,
)


def brute_value(state: GameState, turn: int, coalition: frozenset[int], p: int) -> bool:
    """Memo-free game-tree enumeration; the independent oracle for solve()."""
    mover = (turn % p) + 1
    mover_is_member = mover in coalition
    outcomes = []
    for move in engine.legal_moves(state):
        child = engine.apply_move(state, move)
        if engine.is_terminal(child):
            outcomes.append(mover_is_member)
        else:
            outcomes.append(brute_value(child, turn + 1, coalition, p))
    return any(outcomes) if mover_is_member else all(outcomes)


def proper_subsets(p: int):
    players = range(1, p + 1)
    return [
        frozenset(c)
        for c in chain.from_iterable(combinations(players, size) for size in range(1, p))
    ]


# -- solve values -------------------------------------------------------------


def test_solve_spec_examples():
    assert solve(2, SeatingConfig.singles(2), {1}).win is True
    assert solve(5, SeatingConfig.singles(2), {2}).win is True
    assert solve(5, SeatingConfig.singles(3), {1}).win is False
    assert solve(4, SeatingConfig.singles(3), {2}).win is True
    assert solve(16, SeatingConfig.singles(3), {1, 2}).win is True


def test_solve_n1_nobody_wins():
    seating = SeatingConfig.singles(2)
    for coalition in ({1}, {2}, {1, 2}):
        outcome = solve(1, seating, coalition)
        assert outcome.win is False
        assert outcome.policy == {}


def test_solve_validates_coalition():
    seating = SeatingConfig.singles(3)
    with pytest.raises(ValueError):
        solve(5, seating, set())
    with pytest.raises(ValueError):
        solve(5, seating, {4})


def test_solve_matches_brute_force_oracle():
    for n in range(2, 11):
        for p in (2, 3):
            seating = SeatingConfig.singles(p)
            for coalition in proper_subsets(p):
                expected = brute_value(initial_state(n), 0, coalition, p)
                assert solve(n, seating, coalition).win == expected, (n, p, coalition)


def test_determinacy_small_grid():
    # Exactly one of a coalition and its complement wins (n >= 2).
    for n in range(2, 19):
        for p in (2, 3, 4):
            seating = SeatingConfig.singles(p)
            values = {c: solve(n, seating, c).win for c in proper_subsets(p)}
            for coalition, win in values.items():
                complement = frozenset(range(1, p + 1)) - coalition
                assert win != values[complement], (n, p, coalition)


def test_coalition_monotonicity():
    for n in range(2, 15):
        for p in (3, 4):
            seating = SeatingConfig.singles(p)
            values = {c: solve(n, seating, c).win for c in proper_subsets(p)}
            for small, win in values.items():
                if not win:
                    continue
                for big in values:
                    if small < big:
                        assert values[big], (n, p, small, big)


def test_rotation_equivariance():
    for n in range(2, 15):
        for p in (3, 4):
            seating = SeatingConfig.singles(p)
            for coalition in proper_subsets(p):
                base = solve(n, seating, coalition).win
                for r in range(1, p):
                    shifted = frozenset(((m - 1 + r) % p) + 1 for m in coalition)
                    table = CoalitionSolver(n, seating, shifted)
                    assert table.value(initial_state(n).counts, r) == base, (
                        n, p, coalition, r,
                    )


def test_policy_soundness_by_exhaustive_playout():
    for n in range(2, 15):
        for p in (2, 3):
            seating = SeatingConfig.singles(p)
            for coalition in proper_subsets(p):
                outcome = solve(n, seating, coalition)
                if not outcome.win:
                    continue
                _playout(initial_state(n), 0, outcome.policy, coalition, p, set())


def _playout(state, turn, policy, coalition, p, seen):
    """Follow policy at member turns, branch over everything else."""
    key = (state, turn % p)
    if key in seen:
        return
    seen.add(key)
    mover = (turn % p) + 1
    if mover in coalition:
        move = policy.get(key)
        assert move is not None, f"missing policy entry at {state.pretty()} turn {turn}"
        children = [engine.apply_move(state, move)]
    else:
        children = [engine.apply_move(state, m) for m in engine.legal_moves(state)]
    for child in children:
        if engine.is_terminal(child):
            assert mover in coalition, "opposition made the final move against policy"
        else:
            _playout(child, turn + 1, policy, coalition, p, seen)


def test_policy_moves_are_legal():
    outcome = solve(12, SeatingConfig.singles(2), {2})
    assert outcome.win
    for (state, _r), move in outcome.policy.items():
        assert move in engine.legal_moves(state)


def test_policy_wins_from_every_recorded_position():
    # Not just from the opening: any policy entry is a winning position,
    # and following the policy from there must still beat all opposition.
    outcome = solve(11, SeatingConfig.singles(3), {2, 3})
    assert outcome.win
    seen: set = set()
    for (state, r), _move in outcome.policy.items():
        _playout(state, r, outcome.policy, frozenset({2, 3}), 3, seen)


def test_memo_determinism_sequential_and_concurrent():
    seating = SeatingConfig.from_alliances([[1, 2], [3]])
    first = solve(20, seating, {1, 2})
    second = solve(20, seating, {1, 2})
    assert first.win == second.win
    assert first.policy == second.policy
    assert first.stats == second.stats

    results = []

    def run():
        results.append(solve(20, seating, {1, 2}))

    threads = [Thread(target=run) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for outcome in results:
        assert outcome.win == first.win
        assert outcome.policy == first.policy


def test_state_cap_is_enforced_and_named():
    with pytest.raises(CapacityError, match="13"):
        solve(25, SeatingConfig.singles(2), {2}, state_cap=13)


def test_state_cap_env_override(monkeypatch):
    monkeypatch.setenv(solver.STATE_CAP_ENV, "11")
    with pytest.raises(CapacityError, match="11"):
        solve(25, SeatingConfig.singles(2), {2})
    monkeypatch.setenv(solver.STATE_CAP_ENV, "nope")
    with pytest.raises(ValueError, match="ZECK_STATE_CAP"):
        solve(25, SeatingConfig.singles(2), {2})


# -- best_move ----------------------------------------------------------------


def test_best_move_forced_win():
    result = best_move(initial_state(2), 0, SeatingConfig.singles(2), {1})
    assert result.move == COMBINE_ONES
    assert result.win is True


def test_best_move_reports_position_value_for_nonmember():
    result = best_move(initial_state(5), 0, SeatingConfig.singles(2), {2})
    assert result.win is True  # position is winning for {2} whoever moves
    assert result.move in engine.legal_moves(initial_state(5))


def test_best_move_resistance_prefers_losing_child():
    # {1^2, 2} with n=4, target {1}, player 2 to move.  c1 hands player 1
    # the finish at {2^2}, so resistance must skip it and end the game
    # with adj:1 even though c1 comes first in canonical order.
    state = GameState.from_counts(4, [2, 1])
    result = best_move(state, 1, SeatingConfig.singles(2), {1})
    assert result.win is False
    assert result.move == combine_adjacent(1)


def test_best_move_on_terminal_raises():
    state = GameState.from_counts(3, [0, 0, 1])
    with pytest.raises(NoMoveError):
        best_move(state, 0, SeatingConfig.singles(2), {1})


# -- reachability ---------------------------------------------------------------


def test_reachability_examples():
    r1 = reachability(1)
    assert (r1.state_count, r1.acyclic) == (1, True)
    assert [s.trimmed_counts() for s in r1.terminal_states] == [(1,)]
    assert r1.longest_path == r1.shortest_path == 0

    r3 = reachability(3)
    assert r3.state_count == 3
    assert len(r3.terminal_states) == 1

    r4 = reachability(4)
    assert r4.state_count == 4
    assert len(r4.terminal_states) == 1
    assert r4.longest_path == 3
    assert r4.shortest_path == 2


def test_reachability_n4_exact_states():
    # Hand enumeration: {1^4}, {1^2 2}, {2^2}, {1 3}.
    seen = set()
    frontier = [initial_state(4)]
    while frontier:
        state = frontier.pop()
        if state.counts in seen:
            continue
        seen.add(state.counts)
        for move in engine.legal_moves(state):
            frontier.append(engine.apply_move(state, move))
    expected = {(4, 0, 0, 0), (2, 1, 0, 0), (0, 2, 0, 0), (1, 0, 1, 0)}
    assert seen == expected


def test_reachability_terminal_is_zeckendorf():
    for n in range(1, 26):
        report = reachability(n)
        assert report.acyclic
        assert len(report.terminal_states) == 1
        final = report.terminal_states[0]
        assert final.counts == zeckendorf(n).to_counts(len(final.counts))


def test_reachability_cap():
    with pytest.raises(CapacityError, match="7"):
        reachability(30, state_cap=7)


# -- pattern detectors -----------------------------------------------------------


def test_detect_steal_pattern_examples():
    assert detect_steal_pattern([COMBINE_ONES, COMBINE_ONES, SPLIT_TWOS]) == [0]
    assert detect_steal_pattern([COMBINE_ONES, combine_adjacent(1), SPLIT_TWOS]) == []
    assert detect_steal_pattern([COMBINE_ONES, COMBINE_ONES]) == []


def test_detect_steal_pattern_k_examples():
    c1, s2 = COMBINE_ONES, SPLIT_TWOS
    assert detect_steal_pattern_k([c1, c1, c1, c1, s2, s2], 2) == [0]
    assert detect_steal_pattern_k([c1, c1, c1, s2, s2, s2], 2) == []
    assert detect_steal_pattern_k([c1, c1, s2], 1) == [0]
    with pytest.raises(ValueError):
        detect_steal_pattern_k([], 0)


def test_detect_reports_every_hit():
    c1, s2 = COMBINE_ONES, SPLIT_TWOS
    assert detect_steal_pattern([c1, c1, c1, s2, s2]) == [1]
    assert detect_steal_pattern([c1, c1, s2, c1, c1, s2]) == [0, 3]


_move_strategy = st.one_of(
    st.just(COMBINE_ONES),
    st.just(SPLIT_TWOS),
    st.builds(combine_adjacent, st.integers(min_value=1, max_value=6)),
    st.builds(split_pair, st.integers(min_value=3, max_value=7)),
)


@given(st.lists(_move_strategy, max_size=40), st.integers(min_value=1, max_value=4))
def test_detectors_match_naive_window_oracle(moves, k):
    span = 3 * k
    expected = [
        j
        for j in range(max(len(moves) - span + 1, 0))
        if [m.kind for m in moves[j : j + span]] == ["c1"] * 2 * k + ["s2"] * k
    ]
    assert detect_steal_pattern_k(moves, k) == expected
    if k == 1:
        assert detect_steal_pattern(moves) == expected
