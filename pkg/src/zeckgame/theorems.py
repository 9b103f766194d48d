"""Claim verification harness: sweep solver grids, report pass/fail and thresholds.

Each claim binds a family of game-strategy statements to a grid of exact
solves.  A grid point fixes (n, seating, coalition) plus an expected
value where the claim asserts one; points below a claim's guaranteed
bound are still solved and reported as informational findings, which is
how the harness surfaces empirically observed thresholds next to the
stated ones.  The harness checks finite prefixes only; it never claims
to prove a "for all n" statement.

Claims:

* TWO_PLAYER      -- two players: player 2 forces the final move (n >= 3).
* NO_WINNER_MULTI -- p >= 3 solo players: nobody forces the final move (n >= 5).
* TEAMS_K         -- t >= 3 teams of k = t-1 consecutive seats: no team
                     forces the final move (guaranteed from n >= 30 when
                     t = 3; the general seat-pattern bound is 2k^2+4k).
* ALLIANCE_4V2    -- 6 players, alliances of 4 and 2: the 4-player
                     alliance forces the final move (n >= 30).
* BIG_VS_2        -- p >= 7, alliances of p-2 and 2: the big alliance
                     forces the final move (n >= 32).
* OFFSET_2B       -- an alliance with more than two thirds of the seats,
                     where every non-member at seat i has a member at
                     seat i-b, holding 2b consecutive seats: it forces
                     the final move (n >= 4pb+2p-2b).
* OFFSET_3B       -- same seat-offset condition with 3b consecutive
                     seats: forces the final move (n >= 2p+4b).
* BIG_2D_VS_D     -- 3d players, a 2d-consecutive alliance against a
                     d-consecutive alliance: the big alliance forces the
                     final move (n >= 12d^2+4d).

Grid points are independent; ``verify`` can fan them out over a process
pool, and the assembled report is identical regardless of job count.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .engine import SeatingConfig
from .solver import CoalitionSolver

CLAIM_IDS = (
    "TWO_PLAYER",
    "NO_WINNER_MULTI",
    "TEAMS_K",
    "ALLIANCE_4V2",
    "BIG_VS_2",
    "OFFSET_2B",
    "OFFSET_3B",
    "BIG_2D_VS_D",
)


@dataclass(frozen=True)
class GridPoint:
    """One solver query of a claim grid, with the claim's expectation.

    ``expected`` is None for informational points (below the claim's
    guaranteed bound); ``skip_reason`` marks structurally invalid points,
    which are reported but never solved.
    """

    claim_id: str
    n: int
    seating: SeatingConfig
    coalition: frozenset[int]
    expected: bool | None
    detail: tuple[tuple[str, int | str], ...]
    skip_reason: str | None = None

    def seating_str(self) -> str:
        return ";".join(
            ",".join(str(m) for m in members)
            for members in self.seating.teams().values()
        )

    def coalition_str(self) -> str:
        return ",".join(str(m) for m in sorted(self.coalition))

    def sort_key(self) -> tuple:
        return (self.n, self.detail, tuple(sorted(self.coalition)))


@dataclass(frozen=True)
class PointResult:
    point: GridPoint
    observed: bool | None
    status: str  # "pass" | "fail" | "info" | "skip"
    states_visited: int

    def to_json_dict(self) -> dict:
        out: dict = {
            "n": self.point.n,
            "seating": self.point.seating_str(),
            "coalition": self.point.coalition_str(),
            "detail": dict(self.point.detail),
            "expected": self.point.expected,
            "observed": self.observed,
            "status": self.status,
            "states_visited": self.states_visited,
        }
        if self.point.skip_reason is not None:
            out["skip_reason"] = self.point.skip_reason
        return out


@dataclass(frozen=True)
class ClaimSpec:
    """A claim id, its parameter grid, and the expectation per point."""

    id: str
    description: str
    win_means_holds: bool
    params: dict
    points: tuple[GridPoint, ...]


@dataclass(frozen=True)
class VerificationReport:
    claim_id: str
    description: str
    params: dict
    results: tuple[PointResult, ...]
    empirical_threshold: int | None
    runtime_seconds: float

    @property
    def all_pass(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    def counts(self) -> dict[str, int]:
        out = {"points": len(self.results), "pass": 0, "fail": 0, "info": 0, "skip": 0}
        for r in self.results:
            out[r.status] += 1
        return out

    def to_json_dict(self, include_runtime: bool = False) -> dict:
        out = {
            "claim": self.claim_id,
            "description": self.description,
            "params": dict(self.params),
            "points": [r.to_json_dict() for r in self.results],
            "empirical_threshold": self.empirical_threshold,
            "summary": self.counts(),
            "all_pass": self.all_pass,
        }
        if include_runtime:
            out["runtime_seconds"] = round(self.runtime_seconds, 3)
        return out

    def to_text_table(self) -> str:
        header = ("status", "n", "seating", "coalition", "expected", "observed", "visited")
        rows = [header]
        for r in self.results:
            rows.append(
                (
                    r.status.upper(),
                    str(r.point.n),
                    r.point.seating_str(),
                    "{" + r.point.coalition_str() + "}",
                    _cell(r.point.expected),
                    _cell(r.observed),
                    str(r.states_visited),
                )
            )
        widths = [max(len(row[c]) for row in rows) for c in range(len(header))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        summary = self.counts()
        lines.append(
            f"{self.claim_id}: {summary['pass']} pass, {summary['fail']} fail, "
            f"{summary['info']} informational, {summary['skip']} skipped; "
            f"empirical threshold: "
            f"{self.empirical_threshold if self.empirical_threshold is not None else 'not reached'}"
        )
        return "\n".join(lines)


def _cell(value: bool | None) -> str:
    if value is None:
        return "-"
    return "win" if value else "loss"


def _consecutive(start: int, length: int, p: int) -> list[int]:
    """Length consecutive seats starting at ``start`` on a circle of p."""
    return [(start - 1 + j) % p + 1 for j in range(length)]


def _longest_circular_run(members: frozenset[int], p: int) -> int:
    if len(members) == p:
        return p
    best = run = 0
    # Doubling the circle catches runs that wrap past seat p.
    for i in list(range(1, p + 1)) * 2:
        if i in members:
            run += 1
            best = max(best, run)
        else:
            run = 0
    return min(best, p)


def _offset_condition(members: frozenset[int], p: int, b: int) -> bool:
    """Every non-member at seat i has a member at seat i - b (circularly)."""
    return all(
        ((i - b - 1) % p) + 1 in members
        for i in range(1, p + 1)
        if i not in members
    )


# Per-claim grid generators.  Each returns the points for a single n so
# that threshold sweeps can re-use the exact same pattern at any n.

def _points_two_player(params: dict, n: int, expected: bool | None) -> list[GridPoint]:
    return [
        GridPoint(
            "TWO_PLAYER", n, SeatingConfig.singles(2), frozenset({2}),
            expected, (("p", 2),),
        )
    ]


def _points_no_winner_multi(params: dict, n: int, expected: bool | None) -> list[GridPoint]:
    points = []
    for p in params["players"]:
        seating = SeatingConfig.singles(p)
        skip = None if p >= 3 else f"claim needs p >= 3, got p={p}"
        for m in range(1, p + 1):
            points.append(
                GridPoint(
                    "NO_WINNER_MULTI", n, seating, frozenset({m}),
                    expected, (("p", p), ("player", m)), skip,
                )
            )
    return points


def _teams_seating(t: int, k: int, rotation: int) -> SeatingConfig:
    """Team j on seats (j-1)k+1 .. jk, then the whole pattern rotated."""
    p = t * k
    team_of = [0] * p
    for j in range(1, t + 1):
        for seat in _consecutive((j - 1) * k + 1, k, p):
            team_of[seat - 1] = j
    return SeatingConfig(p, tuple(team_of)).rotated(rotation)


def _points_teams_k(params: dict, n: int, expected: bool | None) -> list[GridPoint]:
    t = params["t"]
    k = t - 1
    skip = None if t >= 3 else f"claim needs t >= 3, got t={t}"
    p = max(t * k, 1)
    points = []
    for rotation in range(p if skip is None else 1):
        seating = _teams_seating(t, k, rotation) if skip is None else SeatingConfig.singles(max(t, 1))
        for team, members in seating.teams().items():
            points.append(
                GridPoint(
                    "TEAMS_K", n, seating, frozenset(members), expected,
                    (("t", t), ("rotation", rotation), ("team", team)), skip,
                )
            )
    return points


def _points_alliance_4v2(params: dict, n: int, expected: bool | None) -> list[GridPoint]:
    points = []
    for small in combinations(range(1, 7), 2):
        big = frozenset(range(1, 7)) - frozenset(small)
        seating = SeatingConfig.from_alliances([sorted(big), list(small)])
        points.append(
            GridPoint(
                "ALLIANCE_4V2", n, seating, big, expected,
                (("small_players", f"{small[0]},{small[1]}"),),
            )
        )
    return points


def _points_big_vs_2(params: dict, n: int, expected: bool | None) -> list[GridPoint]:
    p = params["p"]
    skip = None if p >= 7 else f"claim needs p >= 7, got p={p}"
    points = []
    for small in combinations(range(1, p + 1), 2):
        big = frozenset(range(1, p + 1)) - frozenset(small)
        seating = SeatingConfig.from_alliances([sorted(big), list(small)])
        points.append(
            GridPoint(
                "BIG_VS_2", n, seating, big, expected,
                (("p", p), ("small_players", f"{small[0]},{small[1]}")), skip,
            )
        )
    return points


def _offset_points(claim_id: str, params: dict, n: int, expected: bool | None) -> list[GridPoint]:
    p = params["p"]
    b = params["b"]
    run_needed = (2 if claim_id == "OFFSET_2B" else 3) * b
    points = []
    for rotation in range(p):
        members = frozenset(_consecutive(rotation + 1, p - 1, p))
        rest = sorted(set(range(1, p + 1)) - members)
        seating = SeatingConfig.from_alliances([sorted(members), rest])
        skip = None
        if b < 1:
            skip = f"claim needs b >= 1, got b={b}"
        elif not _offset_condition(members, p, b):
            skip = f"some non-member seat i has no member at seat i-{b}"
        elif _longest_circular_run(members, p) < run_needed:
            skip = f"alliance needs {run_needed} consecutive seats"
        elif claim_id == "OFFSET_2B" and 3 * len(members) <= 2 * p:
            skip = "alliance must hold more than two thirds of the seats"
        points.append(
            GridPoint(
                claim_id, n, seating, members, expected,
                (("p", p), ("b", b), ("rotation", rotation)), skip,
            )
        )
    return points


def _points_offset_2b(params: dict, n: int, expected: bool | None) -> list[GridPoint]:
    return _offset_points("OFFSET_2B", params, n, expected)


def _points_offset_3b(params: dict, n: int, expected: bool | None) -> list[GridPoint]:
    return _offset_points("OFFSET_3B", params, n, expected)


def _points_big_2d_vs_d(params: dict, n: int, expected: bool | None) -> list[GridPoint]:
    d = params["d"]
    skip = None if d >= 1 else f"claim needs d >= 1, got d={d}"
    p = max(3 * d, 1)
    points = []
    for rotation in range(p if skip is None else 1):
        big = frozenset(_consecutive(rotation + 1, 2 * d, p)) if skip is None else frozenset({1})
        rest = sorted(set(range(1, p + 1)) - big) or [1]
        seating = (
            SeatingConfig.from_alliances([sorted(big), rest])
            if skip is None
            else SeatingConfig.singles(1)
        )
        points.append(
            GridPoint(
                "BIG_2D_VS_D", n, seating, big, expected,
                (("d", d), ("rotation", rotation)), skip,
            )
        )
    return points


_GENERATORS = {
    "TWO_PLAYER": _points_two_player,
    "NO_WINNER_MULTI": _points_no_winner_multi,
    "TEAMS_K": _points_teams_k,
    "ALLIANCE_4V2": _points_alliance_4v2,
    "BIG_VS_2": _points_big_vs_2,
    "OFFSET_2B": _points_offset_2b,
    "OFFSET_3B": _points_offset_3b,
    "BIG_2D_VS_D": _points_big_2d_vs_d,
}

_DESCRIPTIONS = {
    "TWO_PLAYER": "Two players: player 2 forces the final move for every n >= 3.",
    "NO_WINNER_MULTI": "p >= 3 solo players: no single player forces the final move for n >= 5.",
    "TEAMS_K": (
        "t >= 3 teams of k = t-1 consecutive seats each: no team forces the final "
        "move (guaranteed from n >= 30 for t = 3; general seat-pattern bound 2k^2+4k)."
    ),
    "ALLIANCE_4V2": "Six players, alliances of 4 and 2: the 4-player alliance forces the final move for n >= 30.",
    "BIG_VS_2": "p >= 7, alliances of p-2 and 2: the big alliance forces the final move for n >= 32.",
    "OFFSET_2B": (
        "Alliance with more than two thirds of the seats, a member at seat i-b for "
        "every non-member seat i, and 2b consecutive seats: it forces the final move "
        "for n >= 4pb+2p-2b."
    ),
    "OFFSET_3B": (
        "Alliance with a member at seat i-b for every non-member seat i and 3b "
        "consecutive seats: it forces the final move for n >= 2p+4b."
    ),
    "BIG_2D_VS_D": (
        "3d players, a 2d-seat consecutive alliance versus a d-seat consecutive "
        "alliance: the big alliance forces the final move for n >= 12d^2+4d."
    ),
}

_WIN_MEANS_HOLDS = {
    "TWO_PLAYER": True,
    "NO_WINNER_MULTI": False,
    "TEAMS_K": False,
    "ALLIANCE_4V2": True,
    "BIG_VS_2": True,
    "OFFSET_2B": True,
    "OFFSET_3B": True,
    "BIG_2D_VS_D": True,
}


def _default_params(claim_id: str) -> dict:
    if claim_id == "TWO_PLAYER":
        return {"n_lo": 3, "n_hi": 25}
    if claim_id == "NO_WINNER_MULTI":
        return {"players": (3, 4, 5, 6), "n_lo": 5, "n_hi": 22}
    if claim_id == "TEAMS_K":
        return {"t": 3, "n_lo": 16, "n_hi": 30}
    if claim_id == "ALLIANCE_4V2":
        return {"n_lo": 5, "n_hi": 30}
    if claim_id == "BIG_VS_2":
        return {"p": 7, "n_lo": 32, "n_hi": 32}
    if claim_id == "OFFSET_2B":
        return {"p": 4, "b": 1, "n_lo": 12, "n_hi": 22}
    if claim_id == "OFFSET_3B":
        return {"p": 4, "b": 1, "n_lo": 12, "n_hi": 22}
    if claim_id == "BIG_2D_VS_D":
        return {"d": 1, "n_lo": 16, "n_hi": 22}
    raise ValueError(f"unknown claim id {claim_id!r}")


def guaranteed_from(claim_id: str, params: dict) -> int:
    """The n from which the claim's statement is guaranteed to hold."""
    if claim_id == "TWO_PLAYER":
        return 3
    if claim_id == "NO_WINNER_MULTI":
        return 5
    if claim_id == "TEAMS_K":
        k = params["t"] - 1
        bound = 2 * k * k + 4 * k
        # For t = 3 the guarantee is only established from 30; below that
        # (down to the general pattern bound 16) results are findings.
        return max(bound, 30) if params["t"] == 3 else bound
    if claim_id == "ALLIANCE_4V2":
        return 30
    if claim_id == "BIG_VS_2":
        return 32
    if claim_id == "OFFSET_2B":
        p, b = params["p"], params["b"]
        return 4 * p * b + 2 * p - 2 * b
    if claim_id == "OFFSET_3B":
        return 2 * params["p"] + 4 * params["b"]
    if claim_id == "BIG_2D_VS_D":
        d = params["d"]
        return 12 * d * d + 4 * d
    raise ValueError(f"unknown claim id {claim_id!r}")


def build_claim(claim_id: str, **overrides) -> ClaimSpec:
    """A ClaimSpec for the given id, with optional grid parameter overrides."""
    if claim_id not in _GENERATORS:
        raise ValueError(f"unknown claim id {claim_id!r}")
    params = _default_params(claim_id)
    for key, value in overrides.items():
        if key not in params:
            raise ValueError(f"claim {claim_id} has no parameter {key!r}")
        params[key] = value
    win_means_holds = _WIN_MEANS_HOLDS[claim_id]
    assert_from = guaranteed_from(claim_id, params)
    params["guaranteed_from"] = assert_from
    generate = _GENERATORS[claim_id]
    points: list[GridPoint] = []
    for n in range(params["n_lo"], params["n_hi"] + 1):
        expected = win_means_holds if n >= assert_from else None
        points.extend(generate(params, n, expected))
    points.sort(key=GridPoint.sort_key)
    return ClaimSpec(
        id=claim_id,
        description=_DESCRIPTIONS[claim_id],
        win_means_holds=win_means_holds,
        params=params,
        points=tuple(points),
    )


def claim_catalog() -> list[ClaimSpec]:
    """The eight claims with their default desk-scale grids."""
    return [build_claim(claim_id) for claim_id in CLAIM_IDS]


def _solve_point(args: tuple) -> tuple[int, bool, int]:
    index, n, seating, coalition, state_cap = args
    solver = CoalitionSolver(n, seating, coalition, state_cap)
    win = solver.win_from_initial()
    return index, win, solver.stats().states_visited


def verify(
    claim: ClaimSpec,
    jobs: int = 1,
    state_cap: int | None = None,
) -> VerificationReport:
    """Solve every grid point of a claim exactly and assemble the report.

    Points run independently (in a process pool when jobs > 1); the
    assembled report does not depend on the job count.
    """
    start = time.monotonic()
    tasks = [
        (i, pt.n, pt.seating, pt.coalition, state_cap)
        for i, pt in enumerate(claim.points)
        if pt.skip_reason is None
    ]
    solved: dict[int, tuple[bool, int]] = {}
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for index, win, visited in pool.map(_solve_point, tasks, chunksize=8):
                solved[index] = (win, visited)
    else:
        for task in tasks:
            index, win, visited = _solve_point(task)
            solved[index] = (win, visited)

    results = []
    for i, pt in enumerate(claim.points):
        if pt.skip_reason is not None:
            results.append(PointResult(pt, None, "skip", 0))
            continue
        win, visited = solved[i]
        if pt.expected is None:
            status = "info"
        else:
            status = "pass" if win == pt.expected else "fail"
        results.append(PointResult(pt, win, status, visited))

    return VerificationReport(
        claim_id=claim.id,
        description=claim.description,
        params=claim.params,
        results=tuple(results),
        empirical_threshold=_empirical_threshold(claim, results),
        runtime_seconds=time.monotonic() - start,
    )


def _empirical_threshold(claim: ClaimSpec, results: Iterable[PointResult]) -> int | None:
    """Smallest tested n from which every larger tested n holds."""
    by_n: dict[int, bool] = {}
    for r in results:
        if r.observed is None:
            continue
        holds = r.observed == claim.win_means_holds
        by_n[r.point.n] = by_n.get(r.point.n, True) and holds
    threshold = None
    for n in sorted(by_n, reverse=True):
        if not by_n[n]:
            break
        threshold = n
    return threshold


def find_threshold(
    claim: ClaimSpec,
    n_range: tuple[int, int],
    jobs: int = 1,
    state_cap: int | None = None,
) -> int | None:
    """Sweep the claim's grid pattern over n_range and return the threshold.

    The result is the smallest n in the range from which the claim holds
    at every tested n up to the top of the range; None if it fails at the
    top.
    """
    lo, hi = n_range
    if lo < 1 or hi < lo:
        raise ValueError(f"bad n range {n_range}")
    generate = _GENERATORS[claim.id]
    points: list[GridPoint] = []
    for n in range(lo, hi + 1):
        points.extend(generate(claim.params, n, None))
    points.sort(key=GridPoint.sort_key)
    sweep = ClaimSpec(claim.id, claim.description, claim.win_means_holds,
                      claim.params, tuple(points))
    report = verify(sweep, jobs=jobs, state_cap=state_cap)
    return report.empirical_threshold
