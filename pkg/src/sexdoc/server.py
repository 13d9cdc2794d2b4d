"""HTTP serving of an exported manual with per-topic, on-demand delivery.

The exported xdata.json is hydrated into an in-memory keyed store once at
startup; afterwards the server is a read-only snapshot. /api/index returns
the xindex.json bytes exactly as written, and /api/topic/{key} returns the
single stored record, so clients see the same payloads either way.
"""

from __future__ import annotations

import json
import mimetypes
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request, Response
from pydantic import BaseModel

from .export import canonical_json
from .keys import TopicKeyError, decode_key

DEFAULT_PORT = 8372
DEFAULT_HOST = "127.0.0.1"

_REQUIRED_FILES = ("manifest.json", "xdata.json", "xindex.json", "index.html")


class TopicRecord(BaseModel):
    name: str
    package: str
    parents: list[str]
    children: list[str]
    short_html: str
    long_html: str
    origin: str
    importance: int


class ErrorBody(BaseModel):
    error: str
    key: str


class ManualDirError(Exception):
    pass


class TopicStore:
    """Immutable keyed view of an exported manual directory."""

    def __init__(self, manual_dir: Path):
        self.root = Path(manual_dir).resolve()
        for name in _REQUIRED_FILES:
            if not (self.root / name).is_file():
                raise ManualDirError(f"{self.root} is missing {name}; build the manual first")
        raw = json.loads((self.root / "xdata.json").read_bytes())
        self.topics: dict[str, dict] = {}
        for key, record in raw.items():
            TopicRecord.model_validate(record)
            self.topics[key] = record
        self.index_bytes = (self.root / "xindex.json").read_bytes()
        manifest_bytes = (self.root / "manifest.json").read_bytes()
        import hashlib

        self.etag = '"' + hashlib.sha256(manifest_bytes).hexdigest() + '"'

    def get(self, key: str) -> dict | None:
        return self.topics.get(key)

    def static_path(self, relative: str) -> Path | None:
        candidate = (self.root / relative).resolve()
        if not str(candidate).startswith(str(self.root)):
            return None
        return candidate if candidate.is_file() else None


def _json_response(store: TopicStore, payload: bytes, status: int = 200) -> Response:
    return Response(
        content=payload,
        status_code=status,
        media_type="application/json",
        headers={"ETag": store.etag},
    )


def create_app(manual_dir: Path) -> FastAPI:
    store = TopicStore(Path(manual_dir))
    app = FastAPI(title="sexdoc manual server", version="0.1.0")
    app.state.store = store

    def cached(request: Request, build: Callable[[], Response]) -> Response:
        if request.headers.get("if-none-match") == store.etag:
            return Response(status_code=304, headers={"ETag": store.etag})
        return build()

    @app.get("/api/index")
    def api_index(request: Request) -> Response:
        return cached(request, lambda: _json_response(store, store.index_bytes))

    @app.get("/api/topic/{key}", responses={404: {"model": ErrorBody}, 400: {"model": ErrorBody}})
    def api_topic(key: str, request: Request) -> Response:
        try:
            decode_key(key)
        except TopicKeyError:
            body = canonical_json({"error": "malformed key", "key": key})
            return _json_response(store, body, status=400)
        record = store.get(key)
        if record is None:
            body = canonical_json({"error": "unknown topic", "key": key})
            return _json_response(store, body, status=404)
        return cached(request, lambda: _json_response(store, canonical_json(record)))

    @app.get("/")
    def home(request: Request) -> Response:
        return static("index.html", request)

    @app.get("/{path:path}")
    def static(path: str, request: Request) -> Response:
        target = store.static_path(path)
        if target is None:
            body = canonical_json({"error": "not found", "key": path})
            return _json_response(store, body, status=404)

        def build() -> Response:
            media_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
            return Response(
                content=target.read_bytes(),
                media_type=media_type,
                headers={"ETag": store.etag},
            )

        return cached(request, build)

    return app


def serve(manual_dir: Path, port: int = DEFAULT_PORT, host: str = DEFAULT_HOST) -> None:
    """Run the manual server until terminated."""
    import uvicorn

    app = create_app(manual_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
