"""HTTP JSON API for interactive play and exact analysis.

Endpoints (all JSON, CORS open):

* ``POST /games``                 -- create a session: {n, players, alliances?, human_players?}
* ``GET  /games/{id}``            -- full session view
* ``GET  /games/{id}/legal``      -- ordered legal move tokens
* ``POST /games/{id}/moves``      -- {move, turn?}; apply one move
* ``GET  /games/{id}/analysis``   -- ?coalition=teamK or ?coalition=1,2

State and move encodings are the engine's canonical forms, so replaying
the move log from game creation reproduces every snapshot the API ever
returned.  Move posts are serialized per session; a post carrying the
optional ``turn`` stamp is rejected with 409 when the session has moved
on, which is how two racing clients resolve to exactly one winner.

Solver analyses share one memoized table per (n, seating, coalition)
across requests.  Sessions live in memory; ``persist_path`` appends a
JSON-lines snapshot per mutation and is replayed on startup.

Status codes: 400 invalid body, 404 unknown session, 405 wrong method,
409 illegal move / game over / stale turn, 422 unparseable move token,
503 solver capacity exceeded.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import re
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import engine, fibzeck, solver
from .engine import GameOverError, IllegalMoveError, SeatingConfig, Session

log = logging.getLogger("zeckgame.server")

DEFAULT_PORT = 8787


class ApiError(Exception):
    """An error response: HTTP status plus a JSON-able payload."""

    def __init__(self, status: int, message: str, field: str | None = None) -> None:
        super().__init__(message)
        self.status = status
        self.payload: dict = {"error": {"message": message}}
        if field is not None:
            self.payload["error"]["field"] = field


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def parse_coalition_spec(spec: str, seating: SeatingConfig) -> frozenset[int]:
    """Coalition query value: "teamK" or a comma list of players."""
    spec = spec.strip()
    if spec.startswith("team"):
        try:
            team = int(spec[4:])
        except ValueError:
            raise ValueError(f"bad team name {spec!r}") from None
        members = seating.teams().get(team)
        if not members:
            raise ValueError(f"no such team {team}")
        return frozenset(members)
    try:
        players = frozenset(int(tok) for tok in spec.split(","))
    except ValueError:
        raise ValueError(f"expected players or teamK, got {spec!r}") from None
    return solver.as_coalition(players, seating.p)


@dataclass
class SessionRecord:
    id: str
    session: Session
    human_players: tuple[int, ...]
    created_at: str
    updated_at: str

    def view(self) -> dict:
        session = self.session
        seating = session.seating
        player = session.player_to_move()
        to_move = None
        if player is not None:
            to_move = {"player": player, "team": seating.team_of_player(player)}
        winner = None
        if session.winner is not None:
            winner = {"player": session.winner, "team": session.winning_team}
        return {
            "id": self.id,
            "n": session.state.n,
            "players": seating.p,
            "alliances": seating.to_alliances(),
            "human_players": list(self.human_players),
            "state": session.state.to_json_dict(),
            "turn": session.turn,
            "to_move": to_move,
            "finished": session.finished,
            "winner": winner,
            "moves": [m.token() for m in session.moves_played],
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }


class GameStore:
    """Sessions, per-session write locks, shared analysis tables, snapshots."""

    def __init__(self, persist_path: str | None = None, state_cap: int | None = None) -> None:
        self._records: dict[str, SessionRecord] = {}
        self._session_locks: dict[str, threading.Lock] = {}
        self._store_lock = threading.Lock()
        self._analysis: dict[tuple, tuple[solver.CoalitionSolver, threading.Lock]] = {}
        self._state_cap = state_cap
        self._persist_path = Path(persist_path) if persist_path else None
        if self._persist_path and self._persist_path.exists():
            self._load_snapshots()

    # -- persistence ----------------------------------------------------

    def _load_snapshots(self) -> None:
        assert self._persist_path is not None
        latest: dict[str, dict] = {}
        with self._persist_path.open() as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                latest[obj["id"]] = obj
        for obj in latest.values():
            seating = SeatingConfig.from_alliances(obj["alliances"])
            session = engine.new_session(obj["n"], seating)
            for token in obj["moves"]:
                session = engine.session_apply(session, engine.parse_move(token))
            record = SessionRecord(
                id=obj["id"],
                session=session,
                human_players=tuple(obj.get("human_players", [])),
                created_at=obj["created_at"],
                updated_at=obj["updated_at"],
            )
            self._records[record.id] = record
            self._session_locks[record.id] = threading.Lock()
        log.info("restored %d session(s) from %s", len(latest), self._persist_path)

    def _snapshot(self, record: SessionRecord) -> None:
        if self._persist_path is None:
            return
        obj = {
            "id": record.id,
            "n": record.session.state.n,
            "players": record.session.seating.p,
            "alliances": record.session.seating.to_alliances(),
            "human_players": list(record.human_players),
            "moves": [m.token() for m in record.session.moves_played],
            "created_at": record.created_at,
            "updated_at": record.updated_at,
        }
        with self._persist_path.open("a") as fh:
            fh.write(json.dumps(obj) + "\n")

    # -- sessions -------------------------------------------------------

    def create(self, n: int, seating: SeatingConfig, human_players: tuple[int, ...]) -> SessionRecord:
        now = _now()
        record = SessionRecord(
            id=secrets.token_hex(8),
            session=engine.new_session(n, seating),
            human_players=human_players,
            created_at=now,
            updated_at=now,
        )
        with self._store_lock:
            self._records[record.id] = record
            self._session_locks[record.id] = threading.Lock()
            self._snapshot(record)
        return record

    def get(self, session_id: str) -> SessionRecord:
        record = self._records.get(session_id)
        if record is None:
            raise ApiError(404, f"no session {session_id!r}")
        return record

    def apply_move(self, session_id: str, token: str, expected_turn: int | None) -> SessionRecord:
        record = self.get(session_id)
        try:
            move = engine.parse_move(token)
        except ValueError as exc:
            raise ApiError(422, str(exc), field="move") from None
        lock = self._session_locks[session_id]
        with lock:
            session = record.session
            if expected_turn is not None and expected_turn != session.turn:
                raise ApiError(
                    409,
                    f"stale turn: move was prepared for turn {expected_turn}, "
                    f"session is at turn {session.turn}",
                    field="turn",
                )
            try:
                record.session = engine.session_apply(session, move)
            except GameOverError as exc:
                raise ApiError(409, str(exc)) from None
            except IllegalMoveError as exc:
                raise ApiError(409, str(exc), field="move") from None
            record.updated_at = _now()
            with self._store_lock:
                self._snapshot(record)
        return record

    # -- analysis -------------------------------------------------------

    def analysis(self, session_id: str, coalition_spec: str) -> dict:
        record = self.get(session_id)
        session = record.session
        try:
            coalition = parse_coalition_spec(coalition_spec, session.seating)
        except ValueError as exc:
            raise ApiError(400, str(exc), field="coalition") from None
        if session.finished:
            won = session.winner in coalition
            return {
                "coalition": sorted(coalition),
                "win": won,
                "best_move": None,
                "finished": True,
            }
        key = (session.state.n, session.seating.team_of, coalition)
        with self._store_lock:
            entry = self._analysis.get(key)
            if entry is None:
                entry = (
                    solver.CoalitionSolver(
                        session.state.n, session.seating, coalition, self._state_cap
                    ),
                    threading.Lock(),
                )
                self._analysis[key] = entry
        table, lock = entry
        try:
            with lock:
                best = table.best_move(session.state, session.turn)
        except solver.CapacityError as exc:
            raise ApiError(503, str(exc)) from None
        return {
            "coalition": sorted(coalition),
            "win": best.win,
            "best_move": best.move.token(),
            "finished": False,
        }


def _validate_new_game(body: dict) -> tuple[int, SeatingConfig, tuple[int, ...]]:
    if not isinstance(body, dict):
        raise ApiError(400, "body must be a JSON object")
    n = body.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ApiError(400, "n must be a positive integer", field="n")
    players = body.get("players")
    if not isinstance(players, int) or isinstance(players, bool) or players < 1:
        raise ApiError(400, "players must be a positive integer", field="players")
    alliances = body.get("alliances")
    if alliances is None:
        seating = SeatingConfig.singles(players)
    else:
        if not isinstance(alliances, list) or not all(
            isinstance(team, list) and all(isinstance(m, int) for m in team)
            for team in alliances
        ):
            raise ApiError(400, "alliances must be a list of player lists", field="alliances")
        try:
            seating = SeatingConfig.from_alliances(alliances)
        except ValueError as exc:
            raise ApiError(400, str(exc), field="alliances") from None
        if seating.p != players:
            raise ApiError(
                400,
                f"alliances name {seating.p} players but players is {players}",
                field="alliances",
            )
    raw_humans = body.get("human_players", [])
    if not isinstance(raw_humans, list) or not all(isinstance(m, int) for m in raw_humans):
        raise ApiError(400, "human_players must be a list of players", field="human_players")
    for m in raw_humans:
        if not 1 <= m <= players:
            raise ApiError(400, f"human player {m} out of range 1..{players}", field="human_players")
    try:
        fibzeck._check_n(n)
    except ValueError as exc:
        raise ApiError(400, str(exc), field="n") from None
    return n, seating, tuple(raw_humans)


class ApiHandler(BaseHTTPRequestHandler):
    """Routes requests to the store; owns no game logic."""

    server_version = "zeckgame"
    store: GameStore  # assigned by make_server
    static_dir: Path | None = None

    _ROUTES = (
        (re.compile(r"^/games$"), "games"),
        (re.compile(r"^/games/(?P<id>[0-9a-f]+)$"), "game"),
        (re.compile(r"^/games/(?P<id>[0-9a-f]+)/legal$"), "legal"),
        (re.compile(r"^/games/(?P<id>[0-9a-f]+)/moves$"), "moves"),
        (re.compile(r"^/games/(?P<id>[0-9a-f]+)/analysis$"), "analysis"),
    )

    # -- plumbing ---------------------------------------------------------

    def log_message(self, format: str, *args) -> None:
        log.debug("%s - %s", self.address_string(), format % args)

    def _send_json(self, status: int, payload: dict | list) -> None:
        data = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self._cors()
        self.end_headers()
        self.wfile.write(data)

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            raise ApiError(400, "request body must be JSON")
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ApiError(400, f"invalid JSON body: {exc}") from None
        if not isinstance(body, dict):
            raise ApiError(400, "body must be a JSON object")
        return body

    def _route(self) -> tuple[str, dict[str, str], dict[str, list[str]]]:
        parsed = urlparse(self.path)
        for pattern, name in self._ROUTES:
            match = pattern.match(parsed.path)
            if match:
                return name, match.groupdict(), parse_qs(parsed.query)
        return "", {}, {}

    # -- methods ----------------------------------------------------------

    def do_OPTIONS(self) -> None:  # noqa: N802 (stdlib naming)
        self.send_response(204)
        self._cors()
        self.end_headers()

    def do_GET(self) -> None:  # noqa: N802
        try:
            name, params, query = self._route()
            if name == "game":
                self._send_json(200, self.store.get(params["id"]).view())
            elif name == "legal":
                record = self.store.get(params["id"])
                moves = engine.legal_moves(record.session.state)
                self._send_json(200, {"moves": [m.token() for m in moves]})
            elif name == "analysis":
                spec = query.get("coalition", [""])[0]
                if not spec:
                    raise ApiError(400, "missing coalition query parameter", field="coalition")
                self._send_json(200, self.store.analysis(params["id"], spec))
            elif name in ("games", "moves"):
                raise ApiError(405, "use POST here")
            else:
                self._serve_static()
        except ApiError as exc:
            self._send_json(exc.status, exc.payload)

    def do_POST(self) -> None:  # noqa: N802
        try:
            name, params, _ = self._route()
            if name == "games":
                body = self._read_body()
                n, seating, humans = _validate_new_game(body)
                record = self.store.create(n, seating, humans)
                view = record.view()
                self._send_json(
                    201, {"id": record.id, "state": view["state"], "to_move": view["to_move"]}
                )
            elif name == "moves":
                body = self._read_body()
                token = body.get("move")
                if not isinstance(token, str):
                    raise ApiError(400, "move token must be a string", field="move")
                expected_turn = body.get("turn")
                if expected_turn is not None and (
                    not isinstance(expected_turn, int) or isinstance(expected_turn, bool)
                ):
                    raise ApiError(400, "turn must be an integer", field="turn")
                record = self.store.apply_move(params["id"], token, expected_turn)
                self._send_json(200, record.view())
            elif name:
                raise ApiError(405, "use GET here")
            else:
                raise ApiError(404, "unknown endpoint")
        except ApiError as exc:
            self._send_json(exc.status, exc.payload)

    # -- static assets ------------------------------------------------------

    def _serve_static(self) -> None:
        if self.static_dir is None:
            raise ApiError(404, "unknown endpoint")
        root = self.static_dir.resolve()
        rel = urlparse(self.path).path.lstrip("/") or "index.html"
        target = (root / rel).resolve()
        if root not in target.parents and target != root:
            raise ApiError(404, "unknown path")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            raise ApiError(404, f"no such asset {rel!r}")
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        data = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self._cors()
        self.end_headers()
        self.wfile.write(data)


def make_server(
    port: int = DEFAULT_PORT,
    persist_path: str | None = None,
    static_dir: str | None = None,
    state_cap: int | None = None,
) -> ThreadingHTTPServer:
    """Build a ready-to-run server; port 0 picks a free port (for tests)."""
    handler = type(
        "BoundApiHandler",
        (ApiHandler,),
        {
            "store": GameStore(persist_path=persist_path, state_cap=state_cap),
            "static_dir": Path(static_dir) if static_dir else None,
        },
    )
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def run_server(
    port: int = DEFAULT_PORT,
    persist_path: str | None = None,
    static_dir: str | None = None,
    state_cap: int | None = None,
) -> None:
    httpd = make_server(port, persist_path, static_dir, state_cap)
    host, bound_port = httpd.server_address[:2]
    print(f"zeckgame API on http://{host}:{bound_port}/ (Ctrl+C to stop)")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
