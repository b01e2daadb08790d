"""Timed experiment sessions over a persisted response log.

The service owns one experiment definition (an ordered list of worlds with
their statements), serves rendered stages without truth values, enforces a
server-side per-stage deadline, and appends every accepted answer to a
newline-delimited log before acknowledging it.  Scoring replays that log, so
results survive restarts byte for byte.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import cnl, scoring
from .logic import AnswerKey, AnswerKeyError, generate_answer_key
from .render import DEFAULT_CONFIG, RenderConfig, render
from .scoring import ResponseRecord, ScoreReport
from .world import (FormatError, Lexicon, Ontograph, load_lexicon, load_ontograph,
                    validate, validate_lexicon)

RESPONSES_FILE = "responses.ndjson"
SESSIONS_FILE = "sessions.ndjson"


class ServiceError(Exception):
    """Domain error surfaced over the wire as {code, reason} with an HTTP status."""

    def __init__(self, code: str, reason: str, status: int = 400):
        super().__init__(f"{code}: {reason}")
        self.code = code
        self.reason = reason
        self.status = status


def _not_found(code: str, reason: str) -> ServiceError:
    return ServiceError(code, reason, status=404)


def _conflict(code: str, reason: str) -> ServiceError:
    return ServiceError(code, reason, status=409)


@dataclass(frozen=True)
class StageDef:
    world: Ontograph
    statements: tuple[tuple[str, str], ...]
    svg: str
    key: AnswerKey


@dataclass(frozen=True)
class ExperimentDef:
    id: str
    stages: tuple[StageDef, ...]
    lexicon: Lexicon
    time_limit_seconds: float = 300.0
    exclude: frozenset[str] = frozenset()

    def combined_key(self) -> AnswerKey:
        entries: list[tuple[str, bool]] = []
        for stage in self.stages:
            entries.extend(stage.key.entries)
        return AnswerKey(self.id, tuple(entries))


def build_experiment(experiment_id: str, stages: list[tuple[Ontograph, list[tuple[str, str]]]],
                     lexicon: Lexicon, time_limit_seconds: float = 300.0,
                     exclude: frozenset[str] = frozenset(),
                     render_config: RenderConfig = DEFAULT_CONFIG) -> ExperimentDef:
    """Assemble and check an experiment: worlds valid, statements parse, ids unique."""
    if time_limit_seconds <= 0:
        raise ValueError("time_limit_seconds must be positive")
    built: list[StageDef] = []
    seen_statements: set[str] = set()
    for world, statements in stages:
        problems = validate(world)
        if problems:
            first = problems[0]
            raise ValueError(f"ontograph {world.id!r}: {first.code} at {first.subject}")
        problems = validate_lexicon(lexicon, world.legend)
        if problems:
            first = problems[0]
            raise ValueError(f"lexicon vs {world.id!r}: {first.code} at {first.subject}")
        key = generate_answer_key(world, statements, lexicon)
        for sid, _ in statements:
            if sid in seen_statements:
                raise ValueError(f"statement id {sid!r} used in more than one stage")
            seen_statements.add(sid)
        built.append(StageDef(world, tuple(statements), render(world, render_config), key))
    if not built:
        raise ValueError("an experiment needs at least one stage")
    return ExperimentDef(experiment_id, tuple(built), lexicon, float(time_limit_seconds), exclude)


def load_experiment(directory: str | Path, *, time_limit_override: float | None = None,
                    render_config: RenderConfig = DEFAULT_CONFIG) -> ExperimentDef:
    """Load an experiment directory: experiment.json manifest plus the files it names."""
    directory = Path(directory)
    manifest_path = directory / "experiment.json"
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise FormatError(f"no experiment.json in {directory}")
    except json.JSONDecodeError as exc:
        raise FormatError(f"experiment.json: invalid JSON: {exc}") from exc
    if not isinstance(manifest, dict):
        raise FormatError("experiment.json: expected an object")
    for key in manifest:
        if key not in ("id", "stages", "lexicon", "time_limit_seconds", "exclude"):
            raise FormatError(f"experiment.json: unknown key {key!r}")
    for key in ("id", "stages", "lexicon"):
        if key not in manifest:
            raise FormatError(f"experiment.json: missing key {key!r}")

    lexicon = load_lexicon(directory / manifest["lexicon"])
    stages: list[tuple[Ontograph, list[tuple[str, str]]]] = []
    for entry in manifest["stages"]:
        if not isinstance(entry, dict) or set(entry) - {"ontograph", "statements", "key"}:
            raise FormatError("experiment.json: stages must be {ontograph, statements}")
        world = load_ontograph(directory / entry["ontograph"])
        statements = cnl.load_statements(directory / entry["statements"])
        stages.append((world, statements))

    time_limit = manifest.get("time_limit_seconds", 300.0)
    if time_limit_override is not None:
        time_limit = time_limit_override
    exclude = frozenset(manifest.get("exclude", ()))
    try:
        return build_experiment(manifest["id"], stages, lexicon, time_limit, exclude,
                                render_config)
    except (ValueError, AnswerKeyError) as exc:
        raise FormatError(f"experiment {manifest['id']!r}: {exc}") from exc


@dataclass
class Session:
    id: str
    subject: str
    stage_index: int
    stage_started: float
    answered: dict[str, str] = field(default_factory=dict)
    finished: bool = False


@dataclass(frozen=True)
class StageView:
    stage: int
    stages_total: int
    svg: str
    statements: tuple[tuple[str, str], ...]
    remaining_seconds: float


class ExperimentService:
    """Session state machine with an append-only log as the source of truth.

    Deadlines come from the injected monotonic clock only; client-supplied
    times are never consulted.  Every accepted answer is flushed and fsynced
    before the call returns.
    """

    def __init__(self, experiment: ExperimentDef, data_dir: str | Path, *,
                 grace_seconds: float = 2.0, clock=time.monotonic):
        self.experiment = experiment
        self.grace_seconds = float(grace_seconds)
        self.clock = clock
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.responses_path = self.data_dir / RESPONSES_FILE
        self.sessions_path = self.data_dir / SESSIONS_FILE
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._recover()
        self._responses_fh = open(self.responses_path, "a", encoding="utf-8")
        self._sessions_fh = open(self.sessions_path, "a", encoding="utf-8")

    def close(self) -> None:
        self._responses_fh.close()
        self._sessions_fh.close()

    # -- persistence --------------------------------------------------------------

    def _recover(self) -> None:
        """Rebuild session states from the journals.

        Stage clocks cannot survive a restart (they are monotonic-clock
        readings), so recovered in-flight stages restart their countdown.
        """
        now = self.clock()
        if self.sessions_path.exists():
            for line in self.sessions_path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                event = json.loads(line)
                if event["event"] == "created":
                    self._sessions[event["session"]] = Session(
                        event["session"], event["subject"], 0, now)
                elif event["event"] == "advanced":
                    state = self._sessions[event["session"]]
                    state.stage_index = event["to_stage"]
                    state.stage_started = now
                    if state.stage_index >= len(self.experiment.stages):
                        state.finished = True
        if self.responses_path.exists():
            for record in scoring.read_response_log(self.responses_path):
                state = self._sessions.get(record.session)
                if state is None or state.finished:
                    continue
                current = {sid for sid, _ in self.experiment.stages[state.stage_index].statements}
                if record.statement in current:
                    state.answered.setdefault(record.statement, record.answer)

    def _append(self, fh, line: str) -> None:
        fh.write(line)
        fh.flush()
        os.fsync(fh.fileno())

    def _journal(self, event: dict) -> None:
        self._append(self._sessions_fh, json.dumps(event, separators=(", ", ": ")) + "\n")

    def _log_response(self, record: ResponseRecord) -> None:
        self._append(self._responses_fh, scoring.format_response_line(record))

    # -- operations ----------------------------------------------------------------

    def _session(self, session_id: str) -> Session:
        state = self._sessions.get(session_id)
        if state is None:
            raise _not_found("unknown_session", f"no session {session_id!r}")
        return state

    def _stage(self, state: Session) -> StageDef:
        return self.experiment.stages[state.stage_index]

    def create_session(self, experiment_id: str, subject_id: str) -> str:
        if experiment_id != self.experiment.id:
            raise _not_found("unknown_experiment", f"no experiment {experiment_id!r}")
        subject_id = subject_id.strip()
        if not subject_id:
            raise ServiceError("bad_subject", "subject id must be nonempty", status=422)
        with self._lock:
            session_id = secrets.token_urlsafe(12)
            while session_id in self._sessions:
                session_id = secrets.token_urlsafe(12)
            self._journal({"event": "created", "session": session_id, "subject": subject_id})
            self._sessions[session_id] = Session(session_id, subject_id, 0, self.clock())
            return session_id

    def get_stage(self, session_id: str) -> StageView:
        with self._lock:
            state = self._session(session_id)
            if state.finished:
                raise _conflict("session_finished", "session has completed all stages")
            stage = self._stage(state)
            elapsed = self.clock() - state.stage_started
            remaining = max(0.0, self.experiment.time_limit_seconds - elapsed)
            return StageView(state.stage_index, len(self.experiment.stages), stage.svg,
                             stage.statements, remaining)

    def submit_answer(self, session_id: str, statement_id: str, answer: str) -> int:
        """Record one answer; returns the server-measured elapsed milliseconds."""
        if answer not in (scoring.ANSWER_TRUE, scoring.ANSWER_FALSE, scoring.ANSWER_DONT_KNOW):
            raise ServiceError("bad_answer", "answer must be true, false, or dont_know",
                               status=422)
        with self._lock:
            state = self._session(session_id)
            if state.finished:
                raise _conflict("session_finished", "session has completed all stages")
            stage = self._stage(state)
            if statement_id not in {sid for sid, _ in stage.statements}:
                raise _not_found("unknown_statement",
                                 f"statement {statement_id!r} is not part of the current stage")
            if statement_id in state.answered:
                raise _conflict("duplicate_answer", "statement already answered")
            elapsed = self.clock() - state.stage_started
            if elapsed > self.experiment.time_limit_seconds + self.grace_seconds:
                raise _conflict("deadline_passed", "the stage time limit has passed")
            elapsed_ms = int(elapsed * 1000)
            record = ResponseRecord(session_id, state.subject, stage.world.id,
                                    statement_id, answer, elapsed_ms)
            self._log_response(record)
            state.answered[statement_id] = answer
            return elapsed_ms

    def advance(self, session_id: str, confirm_dont_know: bool = False) -> int | None:
        """Close the current stage and open the next; None means the session finished.

        Past the deadline, unanswered statements are logged as time_exceeded.
        Before it, advancing with unanswered statements requires the explicit
        confirmation flag, which records them as dont_know.
        """
        with self._lock:
            state = self._session(session_id)
            if state.finished:
                return None
            stage = self._stage(state)
            elapsed = self.clock() - state.stage_started
            unanswered = [sid for sid, _ in stage.statements if sid not in state.answered]
            if unanswered:
                if elapsed >= self.experiment.time_limit_seconds:
                    for sid in unanswered:
                        self._log_response(ResponseRecord(
                            session_id, state.subject, stage.world.id, sid,
                            scoring.ANSWER_TIME_EXCEEDED))
                        state.answered[sid] = scoring.ANSWER_TIME_EXCEEDED
                elif confirm_dont_know:
                    elapsed_ms = int(elapsed * 1000)
                    for sid in unanswered:
                        self._log_response(ResponseRecord(
                            session_id, state.subject, stage.world.id, sid,
                            scoring.ANSWER_DONT_KNOW, elapsed_ms))
                        state.answered[sid] = scoring.ANSWER_DONT_KNOW
                else:
                    raise _conflict("confirm_required",
                                    f"{len(unanswered)} statements are unanswered; "
                                    "confirm to record them as dont_know")
            next_index = state.stage_index + 1
            self._journal({"event": "advanced", "session": session_id, "to_stage": next_index})
            state.stage_index = next_index
            state.answered = {}
            if next_index >= len(self.experiment.stages):
                state.finished = True
                return None
            state.stage_started = self.clock()
            return next_index

    def results(self, experiment_id: str) -> ScoreReport:
        """Replay the persisted log through the scorer; pure in the log and the key."""
        if experiment_id != self.experiment.id:
            raise _not_found("unknown_experiment", f"no experiment {experiment_id!r}")
        with self._lock:
            if self.responses_path.exists():
                records = scoring.read_response_log(self.responses_path)
            else:
                records = []
        return scoring.score(records, self.experiment.combined_key(), self.experiment.exclude)
