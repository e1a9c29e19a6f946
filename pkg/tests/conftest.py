import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN


def random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def deterministic_vector(text: str, dim: int) -> list[float]:
    """Stable per-text vector for the fake embedding server."""
    seed = sum(ord(c) * (i + 1) for i, c in enumerate(text)) % 9973 + 1
    return [((seed * (j + 3)) % 101) / 101.0 + 0.05 for j in range(dim)]


class EmbedServerState:
    """Mutable knobs for the in-process embedding server."""

    def __init__(self):
        self.dim = 4
        self.hits = 0
        self.fail_next = 0          # respond with fail_status this many times
        self.fail_status = 500
        self.drop_last_vector = False
        self.respond_dim = None     # override the reported/effective dim
        self.fail_marker = None     # fail any batch containing this text
        self.lock = threading.Lock()
        self.seen_batches: list[list[str]] = []


@pytest.fixture
def embed_server():
    state = EmbedServerState()

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            if self.path != "/embed":
                self.send_error(404)
                return
            length = int(self.headers.get("Content-Length", 0))
            body = json.loads(self.rfile.read(length))
            texts = body["texts"]
            with state.lock:
                state.hits += 1
                state.seen_batches.append(list(texts))
                failing = state.fail_next > 0
                if failing:
                    state.fail_next -= 1
            if failing or (state.fail_marker and state.fail_marker in texts):
                self.send_response(state.fail_status)
                self.end_headers()
                return
            dim = state.respond_dim or state.dim
            vectors = [deterministic_vector(t, dim) for t in texts]
            if state.drop_last_vector:
                vectors = vectors[:-1]
            payload = json.dumps({"dim": dim, "vectors": vectors}).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def log_message(self, *args):
            pass

    server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    state.url = f"http://127.0.0.1:{server.server_address[1]}"
    try:
        yield state
    finally:
        server.shutdown()
        thread.join(timeout=5)
