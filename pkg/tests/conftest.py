import json
import socket
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest
from hypothesis import settings

from kpeval import HashProvider, LowercaseNormalizer, RussianStemNormalizer

settings.register_profile("suite", max_examples=50, deadline=None)
settings.load_profile("suite")

DATA = Path(__file__).parent / "data"

_LOOPBACK = ("127.0.0.1", "::1", "localhost")

# verdict lines appended by the acceptance tests, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_configure(config):
    config._suite_start = time.monotonic()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pytest_collection_modifyitems(config, items):
    # acceptance gate last: its timing check then spans the whole run
    items.sort(key=lambda item: item.path.name == "test_acceptance.py")


@pytest.fixture(autouse=True, scope="session")
def _no_external_network():
    """Fail any test that tries to leave the loopback interface."""
    real_connect = socket.socket.connect

    def guarded(self, address):
        if self.family in (socket.AF_INET, socket.AF_INET6):
            host = address[0]
            if host not in _LOOPBACK:
                raise AssertionError(
                    f"external network access attempted: {address!r}"
                )
        return real_connect(self, address)

    socket.socket.connect = guarded
    try:
        yield
    finally:
        socket.socket.connect = real_connect


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


# Session scope keeps these usable inside hypothesis-driven tests
# (function-scoped fixtures there trip a health check); all three are
# deterministic and safe to share.
@pytest.fixture(scope="session")
def stem_norm():
    return RussianStemNormalizer()


@pytest.fixture(scope="session")
def lower_norm():
    return LowercaseNormalizer()


@pytest.fixture(scope="session")
def hash_provider():
    return HashProvider(dim=16, seed=42)


class _StubState:
    """Mutable knobs + counters for the in-process embedding server."""

    def __init__(self):
        self.behavior = "ok"  # ok | wrong_count | error500
        self.requests = 0
        self.backend = HashProvider(dim=8, seed=99)


class _StubHandler(BaseHTTPRequestHandler):
    state: _StubState = None

    def log_message(self, *args):  # keep test output clean
        pass

    def do_POST(self):
        state = self.state
        state.requests += 1
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length))
        if state.behavior == "error500":
            self.send_response(500)
            self.end_headers()
            return
        mode, inputs = body["mode"], body["inputs"]
        if mode == "text":
            vectors = [state.backend.embed_text(t).tolist() for t in inputs]
            if state.behavior == "wrong_count":
                vectors = vectors[:-1] if vectors else [[0.0] * 8]
            payload = {"dim": state.backend.dim, "vectors": vectors}
        else:
            token_vectors = [
                [v.tolist() for _, v in state.backend.embed_tokens(t)]
                for t in inputs
            ]
            payload = {"dim": state.backend.dim, "token_vectors": token_vectors}
        data = json.dumps(payload).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


@pytest.fixture()
def stub_server():
    """In-process embedding service; yields (base_url, state)."""
    state = _StubState()
    handler = type("Handler", (_StubHandler,), {"state": state})
    server = ThreadingHTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    url = f"http://127.0.0.1:{server.server_address[1]}"
    try:
        yield url, state
    finally:
        server.shutdown()
        thread.join(timeout=5)
