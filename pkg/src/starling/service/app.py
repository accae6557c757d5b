"""HTTP API: accounts, job queue with live event streams, story repository.

All endpoints live under /api and speak UTF-8 JSON except the job event
stream, which is text/event-stream.  Errors are {"error": code,
"message": text}.  Every endpoint except register/login requires an
Authorization: Bearer token.
"""

from __future__ import annotations

import json
from contextlib import asynccontextmanager
from typing import Any, Iterator

from fastapi import Depends, FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from ..engine.model import TraceKind
from .config import ServiceConfig, load_config
from .store import Store
from .worker import MAX_RAW_THROTTLE, WorkerPool


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class Credentials(BaseModel):
    username: str
    password: str


class JobRequest(BaseModel):
    source: str
    report: list[str] = []
    horizon_slack: int = 2
    session: int | None = None
    raw_throttle: float = 0.0


class StoryRequest(BaseModel):
    title: str
    source: str


class StoryUpdate(BaseModel):
    title: str | None = None
    source: str | None = None


class CommentRequest(BaseModel):
    body: str


def _job_view(job: dict[str, Any]) -> dict[str, Any]:
    view = {
        "id": job["id"],
        "state": job["state"],
        "submitted_at": job["submitted_at"],
        "started_at": job["started_at"],
        "finished_at": job["finished_at"],
    }
    if job["state"] == "done":
        view["result"] = json.loads(job["result"])
    elif job["state"] == "failed":
        view["error"] = job["error"]
    return view


def _story_view(story: dict[str, Any]) -> dict[str, Any]:
    view = {
        "id": story["id"],
        "owner": story["owner_name"],
        "title": story["title"],
        "source": story["source"],
        "visibility": story["visibility"],
        "created_at": story["created_at"],
        "updated_at": story["updated_at"],
    }
    if "comment_count" in story:
        view["comment_count"] = story["comment_count"]
    return view


def _comment_view(comment: dict[str, Any]) -> dict[str, Any]:
    return {
        "id": comment["id"],
        "story_id": comment["story_id"],
        "author": comment["author_name"],
        "body": comment["body"],
        "created_at": comment["created_at"],
    }


def _sse_frame(seq: int, event: str, data: str) -> str:
    lines = [f"id: {seq}", f"event: {event}"]
    lines.extend(f"data: {part}" for part in (data.split("\n") if data else [""]))
    return "\n".join(lines) + "\n\n"


def _validate_job_request(body: JobRequest, max_source: int) -> dict[str, Any]:
    if not body.source.strip():
        raise ApiError(422, "empty-source", "source must be non-empty")
    if len(body.source.encode("utf-8")) > max_source:
        raise ApiError(413, "oversize", f"source exceeds {max_source} bytes")
    valid = {k.value for k in TraceKind}
    for name in body.report:
        if name not in valid:
            raise ApiError(422, "bad-report", f"unknown report category {name!r}")
    if body.horizon_slack < 0:
        raise ApiError(422, "bad-slack", "horizon_slack must be non-negative")
    if body.session is not None and body.session < 0:
        raise ApiError(422, "bad-session", "session must be non-negative")
    if not 0 <= body.raw_throttle <= MAX_RAW_THROTTLE:
        raise ApiError(
            422, "bad-throttle", f"raw_throttle must be in [0, {MAX_RAW_THROTTLE}]"
        )
    return {
        "report": sorted(body.report),
        "horizon_slack": body.horizon_slack,
        "session": body.session,
        "raw_throttle": body.raw_throttle,
    }


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or load_config()
    store = Store(config.store)
    pool = WorkerPool(store, config.worker_count)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        store.recover()
        store.purge_expired(config.job_ttl)
        pool.start()
        yield
        pool.stop()

    app = FastAPI(title="starling", lifespan=lifespan)
    app.state.store = store
    app.state.config = config

    @app.exception_handler(ApiError)
    async def on_api_error(_: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            {"error": exc.code, "message": exc.message}, status_code=exc.status
        )

    @app.exception_handler(RequestValidationError)
    async def on_invalid(_: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            {"error": "invalid-request", "message": str(exc.errors()[:1])},
            status_code=422,
        )

    def current_user(authorization: str | None = Header(default=None)) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise ApiError(401, "unauthenticated", "bearer token required")
        user_id = store.user_for_token(authorization[len("Bearer ") :].strip())
        if user_id is None:
            raise ApiError(401, "unauthenticated", "unknown or revoked token")
        return user_id

    # --- accounts -----------------------------------------------------

    @app.post("/api/register", status_code=201)
    def register(body: Credentials) -> dict[str, str]:
        if not body.username or not body.password:
            raise ApiError(422, "bad-credentials", "username and password required")
        user_id = store.create_user(body.username, body.password)
        if user_id is None:
            raise ApiError(409, "username-taken", f"{body.username!r} already exists")
        return {"token": store.issue_token(user_id)}

    @app.post("/api/login")
    def login(body: Credentials) -> dict[str, str]:
        user_id = store.verify_user(body.username, body.password)
        if user_id is None:
            raise ApiError(401, "bad-credentials", "wrong username or password")
        return {"token": store.issue_token(user_id)}

    # --- jobs -----------------------------------------------------------

    @app.post("/api/jobs", status_code=202)
    def submit_job(body: JobRequest, user: str = Depends(current_user)) -> dict:
        options = _validate_job_request(body, config.max_source)
        store.purge_expired(config.job_ttl)
        job_id = store.submit_job(user, body.source, options)
        return {"job_id": job_id}

    def _owned_job(job_id: str, user: str) -> dict[str, Any]:
        job = store.get_job(job_id)
        if job is None:
            raise ApiError(404, "not-found", "no such job")
        if job["owner"] != user:
            raise ApiError(403, "forbidden", "job belongs to another user")
        return job

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str, user: str = Depends(current_user)) -> dict:
        return _job_view(_owned_job(job_id, user))

    @app.get("/api/jobs/{job_id}/events")
    def stream_job(
        job_id: str, request: Request, user: str = Depends(current_user)
    ) -> StreamingResponse:
        job = _owned_job(job_id, user)
        resume = request.headers.get("last-event-id")

        def generate() -> Iterator[str]:
            # A client naming its position (standard SSE Last-Event-ID)
            # resumes right after it; "0" therefore means the full stream,
            # which is how a submitter avoids racing a fast worker.
            # Otherwise completed jobs replay from the start and live ones
            # tail from the current position onward.
            seq = 0
            if resume is not None and resume.lstrip("-").isdigit():
                seq = max(int(resume), 0)
            elif job["state"] not in ("done", "failed"):
                seq = store.last_seq(job_id)
            while True:
                rows = store.events_after(job_id, seq)
                for row in rows:
                    seq = row["seq"]
                    yield _sse_frame(seq, row["event"], row["data"])
                    if row["event"] in ("done", "error"):
                        return
                if not rows:
                    store.wait_for_change(0.2)

        return StreamingResponse(
            generate(),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    # --- stories --------------------------------------------------------

    def _readable_story(story_id: str, user: str) -> dict[str, Any]:
        story = store.get_story(story_id)
        if story is None:
            raise ApiError(404, "not-found", "no such story")
        if story["visibility"] != "public" and story["owner"] != user:
            raise ApiError(403, "forbidden", "story is personal")
        return story

    def _owned_story(story_id: str, user: str) -> dict[str, Any]:
        story = store.get_story(story_id)
        if story is None:
            raise ApiError(404, "not-found", "no such story")
        if story["owner"] != user:
            raise ApiError(403, "forbidden", "story belongs to another user")
        return story

    @app.post("/api/stories", status_code=201)
    def save_story(body: StoryRequest, user: str = Depends(current_user)) -> dict:
        if not body.title.strip():
            raise ApiError(422, "bad-title", "title must be non-empty")
        return _story_view(store.create_story(user, body.title, body.source))

    @app.get("/api/stories")
    def list_stories(user: str = Depends(current_user)) -> list[dict]:
        return [_story_view(s) for s in store.list_stories(user)]

    @app.get("/api/public-stories")
    def list_public(user: str = Depends(current_user)) -> list[dict]:
        return [_story_view(s) for s in store.list_public_stories()]

    @app.get("/api/stories/{story_id}")
    def get_story(story_id: str, user: str = Depends(current_user)) -> dict:
        return _story_view(_readable_story(story_id, user))

    @app.put("/api/stories/{story_id}")
    def update_story(
        story_id: str, body: StoryUpdate, user: str = Depends(current_user)
    ) -> dict:
        _owned_story(story_id, user)
        return _story_view(store.update_story(story_id, body.title, body.source))

    @app.post("/api/stories/{story_id}/share")
    def share_story(story_id: str, user: str = Depends(current_user)) -> dict:
        _owned_story(story_id, user)
        return _story_view(store.share_story(story_id))

    @app.post("/api/stories/{story_id}/copy", status_code=201)
    def copy_story(story_id: str, user: str = Depends(current_user)) -> dict:
        story = _readable_story(story_id, user)
        if story["visibility"] != "public":
            raise ApiError(409, "not-public", "only public stories can be copied")
        return _story_view(store.copy_story(story_id, user))

    @app.post("/api/stories/{story_id}/comments", status_code=201)
    def add_comment(
        story_id: str, body: CommentRequest, user: str = Depends(current_user)
    ) -> dict:
        story = _readable_story(story_id, user)
        if story["visibility"] != "public":
            raise ApiError(409, "not-public", "comments attach to public stories")
        if not body.body.strip():
            raise ApiError(422, "empty-comment", "comment body must be non-empty")
        return _comment_view(store.add_comment(story_id, user, body.body))

    @app.get("/api/stories/{story_id}/comments")
    def list_comments(story_id: str, user: str = Depends(current_user)) -> list[dict]:
        _readable_story(story_id, user)
        return [_comment_view(c) for c in store.list_comments(story_id)]

    return app


def serve(config: ServiceConfig | None = None) -> None:
    """Run the service under uvicorn until interrupted."""
    import uvicorn

    config = config or load_config()
    uvicorn.run(create_app(config), host=config.host, port=config.port)
