"""HTTP JSON API over the experiment service.

Subject endpoints never include truth values; the results endpoint is for the
experimenter and requires a token.  Errors use {code, reason} bodies.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, Header, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .experiment import ExperimentService, ServiceError
from .scoring import report_to_dict


class CreateSessionRequest(BaseModel):
    experiment: str
    subject: str


class CreateSessionResponse(BaseModel):
    session: str


class StatementItem(BaseModel):
    id: str
    text: str


class StageResponse(BaseModel):
    stage: int
    stages_total: int
    ontograph: str
    statements: list[StatementItem]
    remaining_seconds: float


class AnswerRequest(BaseModel):
    statement: str
    answer: Literal["true", "false", "dont_know"]


class AnswerResponse(BaseModel):
    accepted: bool
    elapsed_ms: int
    remaining_seconds: float


class AdvanceRequest(BaseModel):
    confirm_dont_know: bool = False


class AdvanceResponse(BaseModel):
    finished: bool
    stage: int | None = None
    stages_total: int


def create_app(service: ExperimentService, *, results_token: str,
               ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="ontographs experiment service", docs_url=None, redoc_url=None)

    @app.exception_handler(ServiceError)
    async def service_error(request: Request, exc: ServiceError) -> JSONResponse:
        return JSONResponse({"code": exc.code, "reason": exc.reason}, status_code=exc.status)

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse({"code": "invalid_request", "reason": str(exc.errors())},
                            status_code=422)

    @app.post("/sessions", response_model=CreateSessionResponse)
    def create_session(body: CreateSessionRequest) -> CreateSessionResponse:
        session_id = service.create_session(body.experiment, body.subject)
        return CreateSessionResponse(session=session_id)

    @app.get("/sessions/{session_id}/stage", response_model=StageResponse)
    def get_stage(session_id: str) -> StageResponse:
        view = service.get_stage(session_id)
        return StageResponse(
            stage=view.stage,
            stages_total=view.stages_total,
            ontograph=view.svg,
            statements=[StatementItem(id=sid, text=text) for sid, text in view.statements],
            remaining_seconds=view.remaining_seconds,
        )

    @app.post("/sessions/{session_id}/answers", response_model=AnswerResponse)
    def submit_answer(session_id: str, body: AnswerRequest) -> AnswerResponse:
        elapsed_ms = service.submit_answer(session_id, body.statement, body.answer)
        limit = service.experiment.time_limit_seconds
        remaining = max(0.0, limit - elapsed_ms / 1000.0)
        return AnswerResponse(accepted=True, elapsed_ms=elapsed_ms,
                              remaining_seconds=remaining)

    @app.post("/sessions/{session_id}/advance", response_model=AdvanceResponse)
    def advance(session_id: str, body: AdvanceRequest | None = None) -> AdvanceResponse:
        confirm = bool(body.confirm_dont_know) if body else False
        next_stage = service.advance(session_id, confirm)
        total = len(service.experiment.stages)
        if next_stage is None:
            return AdvanceResponse(finished=True, stage=None, stages_total=total)
        return AdvanceResponse(finished=False, stage=next_stage, stages_total=total)

    @app.get("/experiments/{experiment_id}/results")
    def results(experiment_id: str,
                token: str | None = Query(default=None),
                x_results_token: str | None = Header(default=None)) -> JSONResponse:
        supplied = token or x_results_token
        if supplied != results_token:
            raise ServiceError("forbidden", "valid results token required", status=403)
        report = service.results(experiment_id)
        return JSONResponse(report_to_dict(report))

    if ui_dir is not None:
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
