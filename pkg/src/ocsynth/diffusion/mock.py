"""In-process stand-in for the generation service.

Serves the same wire contract as a real backend so the orchestrator, CLI,
and tests run without any model. By default it answers with the request's
own ip_image resized to the requested resolution — a deterministic,
plausible "generated background". A queue of scripted behaviors lets tests
drive failure paths: each incoming request consumes one entry, and an empty
queue falls back to the echo behavior.

Scripted behaviors:
    ("status", 500)       answer with that HTTP status
    ("sleep", 0.2)        stall before answering normally
    ("fixture", image)    answer with exactly this Image
    ("wrong_resolution",) answer with an image 8 px too wide
    ("garbage",)          answer 200 with a non-JSON body
"""

from __future__ import annotations

import base64
import io
import json
import threading
import time
from collections import deque
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Iterable

import numpy as np
from PIL import Image as PilImage

from ..imaging import Image
from .wire import png_bytes

Behavior = tuple


class MockDiffusionService:
    """Context-managed local HTTP server implementing the wire contract."""

    def __init__(self, behaviors: Iterable[Behavior] = ()) -> None:
        self._behaviors = deque(behaviors)
        self._lock = threading.Lock()
        self.requests: list[dict] = []
        self._server: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    @property
    def endpoint(self) -> str:
        assert self._server is not None, "service not started"
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    @property
    def request_count(self) -> int:
        with self._lock:
            return len(self.requests)

    def __enter__(self) -> "MockDiffusionService":
        service = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self) -> None:  # noqa: N802 (http.server API)
                service._handle(self)

            def log_message(self, *args) -> None:  # keep test output clean
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._server.daemon_threads = True
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def __exit__(self, *exc_info) -> None:
        assert self._server is not None
        self._server.shutdown()
        self._server.server_close()
        assert self._thread is not None
        self._thread.join()

    # --- request handling ----------------------------------------------------

    def _handle(self, handler: BaseHTTPRequestHandler) -> None:
        if handler.path != "/generate":
            handler.send_error(404)
            return
        length = int(handler.headers.get("Content-Length", "0"))
        raw = handler.rfile.read(length)
        try:
            doc = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            handler.send_error(400, "body is not JSON")
            return

        with self._lock:
            self.requests.append(doc)
            behavior = self._behaviors.popleft() if self._behaviors else ("echo",)

        kind = behavior[0]
        if kind == "status":
            handler.send_error(int(behavior[1]))
            return
        if kind == "sleep":
            time.sleep(float(behavior[1]))
        if kind == "garbage":
            body = b"this is not json"
            handler.send_response(200)
            handler.send_header("Content-Length", str(len(body)))
            handler.end_headers()
            handler.wfile.write(body)
            return

        width, height = int(doc["width"]), int(doc["height"])
        if kind == "fixture":
            image: Image = behavior[1]
            pixels = image.rgb()
        elif kind == "wrong_resolution":
            pixels = self._echo_pixels(doc, width + 8, height)
        else:
            pixels = self._echo_pixels(doc, width, height)

        body = json.dumps(
            {"image": base64.b64encode(png_bytes(pixels)).decode("ascii"),
             "seed": doc.get("seed", 0)}
        ).encode("utf-8")
        handler.send_response(200)
        handler.send_header("Content-Type", "application/json")
        handler.send_header("Content-Length", str(len(body)))
        handler.end_headers()
        handler.wfile.write(body)

    @staticmethod
    def _echo_pixels(doc: dict, width: int, height: int) -> np.ndarray:
        raw = base64.b64decode(doc["ip_image"])
        with PilImage.open(io.BytesIO(raw)) as pil:
            rgb = pil.convert("RGB")
            if rgb.size != (width, height):
                rgb = rgb.resize((width, height), PilImage.BILINEAR)
            return np.asarray(rgb, dtype=np.uint8).copy()
