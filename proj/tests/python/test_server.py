# Copyright 2026 The Coins Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import urllib.request

import pytest

import coins


@pytest.fixture
def server(tmp_path):
    web = tmp_path / "web"
    web.mkdir()
    (web / "index.html").write_text("<!doctype html><title>coins</title>")
    (web / "main.css").write_text("body{}")
    srv = coins.StudyServer(1, log_dir=str(tmp_path / "logs"), static_dir=str(web), tick_ms=2,
                            config={"coplay": {"horizon": 20}, "tutorial": {"horizon": 20}})
    port = srv.start()
    yield srv, f"127.0.0.1:{port}"
    srv.stop()


def get(url):
    with urllib.request.urlopen(url) as r:
        return r.status, r.headers.get("Content-Type"), r.read().decode()


def test_static_bundle_and_health(server):
    _, host = server
    assert get(f"http://{host}/healthz")[2] == "ok\n"
    status, ctype, body = get(f"http://{host}/")
    assert status == 200 and ctype.startswith("text/html") and "coins" in body
    assert get(f"http://{host}/main.css")[1] == "text/css"
    with pytest.raises(urllib.error.HTTPError) as err:
        get(f"http://{host}/nothing.js")
    assert err.value.code == 404


def test_session_blob(server, validate):
    srv, host = server
    req = urllib.request.Request(f"http://{host}/api/sessions", method="POST",
                                 data=json.dumps({"participant_id": "p1"}).encode())
    with urllib.request.urlopen(req) as r:
        assert r.status == 201
        blob = json.loads(r.read())
    validate(blob, "session_blob")
    assert srv.session_count == 1


def test_websocket_handshake(server, validate):
    sync = pytest.importorskip("websockets.sync.client")
    _, host = server
    participant = coins.ScriptedParticipant(3)
    with sync.connect(f"ws://{host}/ws") as ws:
        ws.send(json.dumps(participant.hello()))
        raw = [ws.recv(timeout=10) for _ in range(3)]
        for text in raw:
            message = json.loads(text)
            validate(message, "server_message")
            assert text == json.dumps(message, sort_keys=True, separators=(",", ":"))
        validate(json.loads(raw[0]), "welcome")
        ws.send(json.dumps({"type": "response", "v": 1, "kind": "perception", "prompt_id": 1,
                            "items": {}}))
        error = json.loads(ws.recv(timeout=10))
        validate(error, "error")
