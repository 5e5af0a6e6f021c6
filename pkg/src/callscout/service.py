"""HTTP service exposing upload, analysis, sweeps, and graph export.

Binaries are stored on disk under their SHA-256, so uploads are idempotent
and stored bytes never change.  Each analysis persists its serialized result
next to the binary; the graph endpoint serves the latest analysis.  Endpoints
doing real work are plain (threadpool) handlers so health checks stay
responsive during long analyses.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile

from fastapi import Body, FastAPI, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .graph import export_graph, graph_from_dict
from .params import ParamError, parse_int, params_from_wire
from .pipeline import result_to_json, run_analysis
from .scoring import AnalysisError
from .stream import BinaryImage, StreamError
from .sweep import SweepSpec, run_sweep, sweep_to_dict

STORAGE_ENV = "CALLSCOUT_STORAGE"
MAX_UPLOAD_ENV = "CALLSCOUT_MAX_UPLOAD_BYTES"
DEFAULT_MAX_UPLOAD = 64 * 1024 * 1024

_ID_PATTERN = re.compile(r"^[0-9a-f]{64}$")
_UPLOAD_CHUNK = 1 << 20


class _Store:
    """Content-addressed binary store with one latest-result slot per binary."""

    def __init__(self, root: str):
        self.root = root
        os.makedirs(root, exist_ok=True)

    def _dir(self, binary_id: str) -> str:
        return os.path.join(self.root, binary_id)

    def binary_path(self, binary_id: str) -> str:
        return os.path.join(self._dir(binary_id), "bin")

    def result_path(self, binary_id: str) -> str:
        return os.path.join(self._dir(binary_id), "latest.json")

    def has(self, binary_id: str) -> bool:
        return _ID_PATTERN.match(binary_id) is not None and os.path.isfile(
            self.binary_path(binary_id)
        )

    def load(self, binary_id: str) -> bytes:
        with open(self.binary_path(binary_id), "rb") as fh:
            return fh.read()

    def save(self, data: bytes) -> str:
        binary_id = hashlib.sha256(data).hexdigest()
        directory = self._dir(binary_id)
        os.makedirs(directory, exist_ok=True)
        path = self.binary_path(binary_id)
        if not os.path.isfile(path):
            self._atomic_write(path, data)
        return binary_id

    def save_result(self, binary_id: str, text: str):
        self._atomic_write(self.result_path(binary_id), text.encode())

    def load_result(self, binary_id: str) -> dict | None:
        try:
            with open(self.result_path(binary_id)) as fh:
                return json.load(fh)
        except FileNotFoundError:
            return None

    def _atomic_write(self, path: str, data: bytes):
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path))
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"message": message}})


def _param_error(exc: ParamError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"error": {"details": exc.as_details()}})


def create_app(
    storage_dir: str | None = None,
    ui_dir: str | None = None,
    max_upload_bytes: int | None = None,
) -> FastAPI:
    storage_dir = storage_dir or os.environ.get(STORAGE_ENV) or "callscout-store"
    if max_upload_bytes is None:
        max_upload_bytes = int(os.environ.get(MAX_UPLOAD_ENV, DEFAULT_MAX_UPLOAD))
    store = _Store(storage_dir)
    app = FastAPI(title="callscout", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        details = [
            {"field": ".".join(str(p) for p in err.get("loc", [])), "message": err.get("msg", "")}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=422, content={"error": {"details": details}})

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.post("/binaries")
    def upload(file: UploadFile):
        digest = hashlib.sha256()
        chunks = []
        size = 0
        while True:
            chunk = file.file.read(_UPLOAD_CHUNK)
            if not chunk:
                break
            size += len(chunk)
            if size > max_upload_bytes:
                return _error(413, f"upload exceeds limit of {max_upload_bytes} bytes")
            digest.update(chunk)
            chunks.append(chunk)
        data = b"".join(chunks)
        if not data:
            return _error(422, "uploaded file is empty")
        binary_id = store.save(data)
        return {"binaryId": binary_id, "sha256": digest.hexdigest(), "size": size}

    @app.post("/binaries/{binary_id}/analyze")
    def analyze(binary_id: str, payload: dict = Body(...)):
        if not store.has(binary_id):
            return _error(404, "unknown binaryId")
        try:
            params = params_from_wire(payload)
        except ParamError as exc:
            return _param_error(exc)
        image = BinaryImage(data=store.load(binary_id), path=binary_id)
        try:
            result = run_analysis(image, params)
        except (StreamError, AnalysisError) as exc:
            return _error(422, str(exc))
        text = result_to_json(result)
        store.save_result(binary_id, text)
        return Response(content=text, media_type="application/json")

    @app.post("/binaries/{binary_id}/sweep")
    def sweep(binary_id: str, payload: dict = Body(...)):
        if not store.has(binary_id):
            return _error(404, "unknown binaryId")
        try:
            params = params_from_wire(payload.get("params", {}))
            parameter = payload.get("parameter")
            if not isinstance(parameter, str):
                raise ParamError([("parameter", "required string")])
            raw_values = payload.get("values")
            if not isinstance(raw_values, list) or not raw_values:
                raise ParamError([("values", "must be a non-empty list")])
            values = tuple(parse_int(v, parameter) for v in raw_values)
            top_n = payload.get("topN", 1)
            if not isinstance(top_n, int) or isinstance(top_n, bool):
                raise ParamError([("topN", "expected an integer")])
            spec = SweepSpec(parameter=parameter, values=values, top_n=top_n)
        except ParamError as exc:
            return _param_error(exc)
        image = BinaryImage(data=store.load(binary_id), path=binary_id)
        try:
            result = run_sweep(image, params, spec)
        except (StreamError, AnalysisError) as exc:
            return _error(422, str(exc))
        text = json.dumps(sweep_to_dict(result), indent=2) + "\n"
        return Response(content=text, media_type="application/json")

    @app.get("/binaries/{binary_id}/candidates/{rank}/graph")
    def candidate_graph(binary_id: str, rank: int, format: str = "json"):
        if format not in ("json", "dot"):
            return _error(422, "format must be 'json' or 'dot'")
        if not store.has(binary_id):
            return _error(404, "unknown binaryId")
        result = store.load_result(binary_id)
        if result is None:
            return _error(404, "no analysis stored for this binary; POST the analyze endpoint first")
        candidates = result.get("candidates", [])
        if not 0 <= rank < len(candidates):
            return _error(404, f"no candidate at rank {rank}")
        graph = graph_from_dict(candidates[rank]["graph"])
        text = export_graph(graph, format)
        media = "application/json" if format == "json" else "text/plain"
        return Response(content=text, media_type=media)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app
