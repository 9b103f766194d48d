"""Harness checks: catalog grids, report determinism, thresholds, skips."""

from __future__ import annotations

import json
import random

import pytest

from zeckgame import solver, theorems
from zeckgame.theorems import build_claim, claim_catalog, find_threshold, verify


@pytest.fixture(scope="module")
def catalog_reports():
    return {claim.id: (claim, verify(claim)) for claim in claim_catalog()}


def test_catalog_lists_all_claims():
    assert [c.id for c in claim_catalog()] == list(theorems.CLAIM_IDS)


def test_catalog_defaults_match_contract():
    claims = {c.id: c for c in claim_catalog()}
    big = claims["BIG_VS_2"]
    assert big.params["p"] == 7
    assert big.params["n_lo"] == big.params["n_hi"] == 32

    off3 = claims["OFFSET_3B"]
    assert off3.params["p"] == 4 and off3.params["b"] == 1
    assert off3.params["guaranteed_from"] == 12  # 2p + 4b
    rot0 = [pt for pt in off3.points if dict(pt.detail)["rotation"] == 0]
    assert all(pt.coalition == frozenset({1, 2, 3}) for pt in rot0)

    off2 = claims["OFFSET_2B"]
    assert off2.params["guaranteed_from"] == 22  # 4pb + 2p - 2b

    assert claims["BIG_2D_VS_D"].params["guaranteed_from"] == 16  # 12d^2 + 4d
    assert claims["TEAMS_K"].params["guaranteed_from"] == 30
    assert claims["ALLIANCE_4V2"].params["guaranteed_from"] == 30


def test_teams_grid_places_team_j_on_consecutive_block():
    seating = theorems._teams_seating(t=3, k=2, rotation=0)
    assert seating.teams() == {1: (1, 2), 2: (3, 4), 3: (5, 6)}
    seating4 = theorems._teams_seating(t=4, k=3, rotation=0)
    assert seating4.teams()[2] == (4, 5, 6)


def test_verify_two_player_all_pass(catalog_reports):
    _, report = catalog_reports["TWO_PLAYER"]
    assert report.all_pass
    assert report.counts()["fail"] == 0
    assert {r.point.n for r in report.results} == set(range(3, 26))
    assert report.empirical_threshold == 3


def test_verify_no_winner_multi_all_lose(catalog_reports):
    _, report = catalog_reports["NO_WINNER_MULTI"]
    assert report.all_pass
    assert all(r.observed is False for r in report.results)
    assert report.empirical_threshold == 5


def test_teams_k_band_is_informational(catalog_reports):
    _, report = catalog_reports["TEAMS_K"]
    assert report.all_pass
    for r in report.results:
        if r.point.n < 30:
            assert r.status == "info"
            assert r.point.expected is None
        else:
            assert r.status == "pass"


def test_every_observed_point_matches_fresh_solve(catalog_reports):
    rng = random.Random(99)
    for claim_id, (claim, report) in catalog_reports.items():
        candidates = [r for r in report.results if r.observed is not None]
        for result in rng.sample(candidates, min(10, len(candidates))):
            pt = result.point
            fresh = solver.solve(pt.n, pt.seating, pt.coalition)
            assert fresh.win == result.observed, (claim_id, pt)


def test_reports_deterministic_across_runs_and_jobs():
    claim = build_claim("BIG_2D_VS_D")
    a = verify(claim, jobs=1).to_json_dict()
    b = verify(claim, jobs=1).to_json_dict()
    c = verify(claim, jobs=2).to_json_dict()
    assert a == b == c
    json.dumps(a)  # schema is JSON-serializable as-is


def test_find_threshold_examples():
    assert find_threshold(build_claim("TWO_PLAYER"), (2, 20)) == 3
    assert find_threshold(build_claim("NO_WINNER_MULTI", players=(3,)), (2, 20)) == 5
    # The alliance of 2 consecutive seats out of 3 empirically wins from
    # well below the guaranteed bound of 16.
    observed = find_threshold(build_claim("BIG_2D_VS_D"), (2, 22))
    assert observed is not None and observed <= 16


def test_find_threshold_absent_when_failing_at_top():
    # Player 1 never wins the two-player game for n in [3, 10], so the
    # "player 2 wins" claim pattern applied to a losing stretch is a
    # convenient always-false probe at every n... use NO_WINNER_MULTI on
    # p=2 instead: with two players somebody always wins, so the claim
    # fails at the top of the range.
    claim = build_claim("NO_WINNER_MULTI", players=(2,), n_lo=5, n_hi=8)
    assert find_threshold(claim, (5, 8)) is None


def test_structurally_invalid_grid_is_skipped_with_reason():
    claim = build_claim("OFFSET_3B", p=5, b=2, n_lo=20, n_hi=20)
    report = verify(claim)
    assert report.counts()["skip"] == len(report.results) > 0
    assert all("consecutive seats" in r.point.skip_reason for r in report.results)
    assert report.all_pass  # skips are not failures
    assert report.empirical_threshold is None


def test_verify_reports_failures():
    # Forcing a wrong expectation: pretend player 2 wins at n=2 as well.
    claim = build_claim("TWO_PLAYER", n_lo=2, n_hi=4)
    doctored = theorems.ClaimSpec(
        id=claim.id,
        description=claim.description,
        win_means_holds=claim.win_means_holds,
        params=claim.params,
        points=tuple(
            theorems.GridPoint(
                pt.claim_id, pt.n, pt.seating, pt.coalition, True, pt.detail
            )
            for pt in claim.points
        ),
    )
    report = verify(doctored)
    assert not report.all_pass
    by_n = {r.point.n: r.status for r in report.results}
    assert by_n == {2: "fail", 3: "pass", 4: "pass"}
    assert report.empirical_threshold == 3


def test_text_table_is_aligned_and_complete():
    report = verify(build_claim("BIG_2D_VS_D", n_lo=16, n_hi=17))
    table = report.to_text_table()
    lines = table.splitlines()
    assert lines[0].startswith("status")
    assert len(lines) == 2 + 6 + 1  # header, rule, 2 n x 3 rotations, summary
    assert "BIG_2D_VS_D" in lines[-1]


def test_unknown_claim_and_parameter_rejected():
    with pytest.raises(ValueError):
        build_claim("NOPE")
    with pytest.raises(ValueError):
        build_claim("TWO_PLAYER", p=9)
