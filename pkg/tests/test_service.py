"""HTTP service: auth, job queue, event streams, durability, stories."""

import json
import sqlite3
import time

import pytest
from fastapi.testclient import TestClient

from starling.cli import main as cli_main
from starling.modelio import parse_model_document
from starling.service import ServiceConfig, Store
from starling.service.app import create_app
from starling.service.worker import run_job

TINY = "s(0) :: f at 1.\n"


def make_config(tmp_path, **overrides):
    options = {"workers": 1, "job_ttl": 3600, "store": str(tmp_path / "svc.db")}
    options.update(overrides)
    return ServiceConfig(**options)


@pytest.fixture()
def client(tmp_path):
    with TestClient(create_app(make_config(tmp_path))) as c:
        yield c


def register(client, name="alice", password="pw"):
    response = client.post(
        "/api/register", json={"username": name, "password": password}
    )
    assert response.status_code == 201, response.text
    return {"Authorization": f"Bearer {response.json()['token']}"}


def submit(client, auth, source, **options):
    body = {"source": source, **options}
    response = client.post("/api/jobs", json=body, headers=auth)
    assert response.status_code == 202, response.text
    return response.json()["job_id"]


def wait_done(client, auth, job_id, timeout=30.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        job = client.get(f"/api/jobs/{job_id}", headers=auth).json()
        if job["state"] in ("done", "failed"):
            return job
        time.sleep(0.02)
    raise AssertionError(f"job {job_id} still {job['state']} after {timeout}s")


def parse_sse(text):
    """[(seq, event, data)] from a text/event-stream body."""
    frames = []
    for block in text.split("\n\n"):
        if not block.strip():
            continue
        seq = event = None
        data = []
        for line in block.split("\n"):
            if line.startswith("id: "):
                seq = int(line[4:])
            elif line.startswith("event: "):
                event = line[7:]
            elif line.startswith("data: "):
                data.append(line[6:])
            elif line == "data:":
                data.append("")
        frames.append((seq, event, "\n".join(data)))
    return frames


class TestAccounts:
    def test_register_returns_token(self, client):
        auth = register(client, "carol")
        assert client.get("/api/stories", headers=auth).status_code == 200

    def test_duplicate_username_conflicts(self, client):
        register(client, "dave")
        response = client.post(
            "/api/register", json={"username": "dave", "password": "other"}
        )
        assert response.status_code == 409
        assert response.json()["error"] == "username-taken"

    def test_login(self, client):
        register(client, "erin", "secret")
        ok = client.post("/api/login", json={"username": "erin", "password": "secret"})
        assert ok.status_code == 200
        auth = {"Authorization": f"Bearer {ok.json()['token']}"}
        assert client.get("/api/stories", headers=auth).status_code == 200

    def test_wrong_password_rejected(self, client):
        register(client, "frank", "right")
        bad = client.post("/api/login", json={"username": "frank", "password": "wrong"})
        assert bad.status_code == 401
        assert bad.json()["error"] == "bad-credentials"

    def test_unknown_user_rejected(self, client):
        bad = client.post("/api/login", json={"username": "ghost", "password": "x"})
        assert bad.status_code == 401

    def test_empty_credentials_rejected(self, client):
        response = client.post("/api/register", json={"username": "", "password": ""})
        assert response.status_code == 422

    def test_passwords_not_stored_in_clear(self, tmp_path):
        config = make_config(tmp_path)
        with TestClient(create_app(config)) as client:
            register(client, "harry", "hunter2")
        rows = sqlite3.connect(config.store).execute(
            "SELECT credential FROM users"
        ).fetchall()
        assert rows and all("hunter2" not in row[0] for row in rows)


PROTECTED = [
    ("post", "/api/jobs"),
    ("get", "/api/jobs/x"),
    ("get", "/api/jobs/x/events"),
    ("post", "/api/stories"),
    ("get", "/api/stories"),
    ("get", "/api/public-stories"),
    ("get", "/api/stories/x"),
    ("put", "/api/stories/x"),
    ("post", "/api/stories/x/share"),
    ("post", "/api/stories/x/copy"),
    ("post", "/api/stories/x/comments"),
    ("get", "/api/stories/x/comments"),
]


class TestAuthTotality:
    @pytest.mark.parametrize("method,path", PROTECTED)
    def test_missing_token_is_401(self, client, method, path):
        kwargs = {"json": {}} if method in ("post", "put") else {}
        response = getattr(client, method)(path, **kwargs)
        assert response.status_code == 401
        assert response.json()["error"] == "unauthenticated"

    @pytest.mark.parametrize("header", ["Bearer bogus", "Basic dXNlcjpwdw=="])
    def test_bad_token_is_401(self, client, header):
        response = client.get("/api/stories", headers={"Authorization": header})
        assert response.status_code == 401


class TestJobs:
    def test_submit_and_complete(self, client, story_text):
        auth = register(client)
        job_id = submit(client, auth, story_text)
        job = wait_done(client, auth, job_id)
        assert job["state"] == "done"
        assert job["started_at"] >= job["submitted_at"]
        assert job["finished_at"] >= job["started_at"]
        doc = job["result"]
        assert parse_model_document(doc) == doc
        [session] = doc["sessions"]
        assert session["answers"][1] == {
            "question": 2,
            "selected": 0,
            "values": ["true", "false"],
        }

    def test_result_matches_cli_document(self, client, story_path, capsys):
        auth = register(client)
        job = wait_done(client, auth, submit(client, auth, story_path.read_text()))
        assert cli_main(["read", str(story_path), "--format", "model"]) == 0
        assert job["result"] == json.loads(capsys.readouterr().out)

    def test_queued_state_visible_before_completion(self, client, story_text):
        auth = register(client)
        job_id = submit(client, auth, story_text, raw_throttle=0.05)
        job = client.get(f"/api/jobs/{job_id}", headers=auth).json()
        assert job["state"] in ("queued", "running")
        assert "result" not in job
        wait_done(client, auth, job_id)

    def test_other_users_job_is_forbidden(self, client):
        alice = register(client, "alice")
        bob = register(client, "bob")
        job_id = submit(client, alice, TINY)
        assert client.get(f"/api/jobs/{job_id}", headers=bob).status_code == 403
        assert (
            client.get(f"/api/jobs/{job_id}/events", headers=bob).status_code == 403
        )
        wait_done(client, alice, job_id)

    def test_unknown_job_is_404(self, client):
        auth = register(client)
        assert client.get("/api/jobs/deadbeef", headers=auth).status_code == 404

    def test_parse_failure_reports_diagnostics(self, client):
        auth = register(client)
        job = wait_done(client, auth, submit(client, auth, "p(1) :: a implies b"))
        assert job["state"] == "failed"
        assert "result" not in job
        assert job["error"].startswith("error 1:")

    def test_engine_failure_reports_message(self, client):
        auth = register(client)
        source = "fluents([f]).\ns(0) :: -f at 0.\np(1) :: -f implies f.\n"
        job = wait_done(client, auth, submit(client, auth, source))
        assert job["state"] == "failed"
        assert "no fixed point at t=1 within 4 sweeps" in job["error"]

    def test_session_option_selects_one_session(self, client, revision_path):
        auth = register(client)
        source = revision_path.read_text()
        job = wait_done(client, auth, submit(client, auth, source, session=1))
        assert [s["id"] for s in job["result"]["sessions"]] == [1]

    def test_report_option_carries_trace(self, client, story_text):
        auth = register(client)
        job = wait_done(
            client, auth, submit(client, auth, story_text, report=["qualified"])
        )
        [session] = job["result"]["sessions"]
        assert session["report"]["qualified"] == [
            ["p(23)#1@4", "p(22)#1@4"],
            ["c(33)#13@6", "p(23)#1@6"],
        ]


class TestJobValidation:
    def test_empty_source(self, client):
        auth = register(client)
        response = client.post("/api/jobs", json={"source": "  \n"}, headers=auth)
        assert response.status_code == 422
        assert response.json()["error"] == "empty-source"

    def test_oversize_source(self, tmp_path):
        config = make_config(tmp_path, max_source=64)
        with TestClient(create_app(config)) as client:
            auth = register(client)
            response = client.post(
                "/api/jobs", json={"source": "s(0) :: f at 1." * 20}, headers=auth
            )
            assert response.status_code == 413
            assert response.json()["error"] == "oversize"

    @pytest.mark.parametrize(
        "body,code",
        [
            ({"source": TINY, "report": ["bogus"]}, "bad-report"),
            ({"source": TINY, "horizon_slack": -1}, "bad-slack"),
            ({"source": TINY, "session": -1}, "bad-session"),
            ({"source": TINY, "raw_throttle": 5.0}, "bad-throttle"),
        ],
    )
    def test_bad_options(self, client, body, code):
        auth = register(client)
        response = client.post("/api/jobs", json=body, headers=auth)
        assert response.status_code == 422
        assert response.json()["error"] == code

    def test_missing_source_field(self, client):
        auth = register(client)
        response = client.post("/api/jobs", json={}, headers=auth)
        assert response.status_code == 422
        assert response.json()["error"] == "invalid-request"


class TestEventStream:
    def test_replay_sequence(self, client, story_text):
        auth = register(client)
        job_id = submit(client, auth, story_text)
        job = wait_done(client, auth, job_id)
        frames = parse_sse(
            client.get(f"/api/jobs/{job_id}/events", headers=auth).text
        )
        ids = [seq for seq, _, _ in frames]
        assert ids == list(range(1, len(ids) + 1))
        events = [event for _, event, _ in frames]
        raw_count = events.count("raw")
        assert raw_count > 0
        assert events == ["status", "status"] + ["raw"] * raw_count + [
            "model",
            "status",
            "done",
        ]
        assert frames[0][2] == "queued"
        assert frames[1][2] == "running"
        assert frames[-2][2] == "done"
        model = next(data for _, event, data in frames if event == "model")
        assert json.loads(model) == job["result"]

    def test_replay_matches_cli_bytes(self, client, story_path, capsys):
        auth = register(client)
        job_id = submit(client, auth, story_path.read_text())
        wait_done(client, auth, job_id)
        frames = parse_sse(
            client.get(f"/api/jobs/{job_id}/events", headers=auth).text
        )
        raw = [data for _, event, data in frames if event == "raw"]
        assert cli_main(["read", str(story_path)]) == 0
        assert "\n".join(raw) + "\n" == capsys.readouterr().out

    def test_replay_is_repeatable(self, client):
        auth = register(client)
        job_id = submit(client, auth, TINY)
        wait_done(client, auth, job_id)
        url = f"/api/jobs/{job_id}/events"
        first = client.get(url, headers=auth).text
        second = client.get(url, headers=auth).text
        assert first == second

    def test_failed_job_stream_ends_with_error(self, client):
        auth = register(client)
        job_id = submit(client, auth, "p(1) :: a implies b")
        wait_done(client, auth, job_id)
        frames = parse_sse(
            client.get(f"/api/jobs/{job_id}/events", headers=auth).text
        )
        assert [event for _, event, _ in frames] == [
            "status",
            "status",
            "status",
            "error",
        ]
        assert [data for _, event, data in frames if event == "status"] == [
            "queued",
            "running",
            "failed",
        ]
        assert frames[-1][2].startswith("error 1:")

    def test_midrun_tail_starts_at_current_position(self, tmp_path, story_text):
        with TestClient(create_app(make_config(tmp_path))) as client:
            auth = register(client)
            job_id = submit(client, auth, story_text, raw_throttle=0.04)
            store = client.app.state.store
            deadline = time.monotonic() + 10
            while store.last_seq(job_id) < 6 and time.monotonic() < deadline:
                time.sleep(0.005)
            assert (
                client.get(f"/api/jobs/{job_id}", headers=auth).json()["state"]
                == "running"
            )
            tail = parse_sse(
                client.get(f"/api/jobs/{job_id}/events", headers=auth).text
            )
            first = tail[0][0]
            assert first > 1
            ids = [seq for seq, _, _ in tail]
            assert ids == list(range(first, first + len(ids)))
            assert tail[-1][1] == "done"
            # tail is exactly the suffix of the full replay
            full = parse_sse(
                client.get(f"/api/jobs/{job_id}/events", headers=auth).text
            )
            assert full[first - 1 :] == tail

    def test_last_event_id_zero_replays_head_while_running(self, tmp_path, story_text):
        # a submitter naming position 0 gets the whole stream even when the
        # worker got ahead of it, so a fast job cannot drop its first lines
        with TestClient(create_app(make_config(tmp_path))) as client:
            auth = register(client)
            job_id = submit(client, auth, story_text, raw_throttle=0.04)
            store = client.app.state.store
            deadline = time.monotonic() + 10
            while store.last_seq(job_id) < 6 and time.monotonic() < deadline:
                time.sleep(0.005)
            assert (
                client.get(f"/api/jobs/{job_id}", headers=auth).json()["state"]
                == "running"
            )
            resumed = parse_sse(
                client.get(
                    f"/api/jobs/{job_id}/events",
                    headers={**auth, "Last-Event-ID": "0"},
                ).text
            )
            assert resumed[0] == (1, "status", "queued")
            assert resumed[-1][1] == "done"
            full = parse_sse(
                client.get(f"/api/jobs/{job_id}/events", headers=auth).text
            )
            assert resumed == full

    def test_last_event_id_resumes_after_named_position(self, client):
        auth = register(client)
        job_id = submit(client, auth, TINY)
        wait_done(client, auth, job_id)
        full = parse_sse(client.get(f"/api/jobs/{job_id}/events", headers=auth).text)
        cut = full[2][0]
        suffix = parse_sse(
            client.get(
                f"/api/jobs/{job_id}/events",
                headers={**auth, "Last-Event-ID": str(cut)},
            ).text
        )
        assert suffix == full[3:]

    def test_last_event_id_garbage_falls_back_to_default(self, client):
        auth = register(client)
        job_id = submit(client, auth, TINY)
        wait_done(client, auth, job_id)
        full = parse_sse(client.get(f"/api/jobs/{job_id}/events", headers=auth).text)
        replay = parse_sse(
            client.get(
                f"/api/jobs/{job_id}/events",
                headers={**auth, "Last-Event-ID": "not-a-number"},
            ).text
        )
        assert replay == full

    def test_stream_content_type(self, client):
        auth = register(client)
        job_id = submit(client, auth, TINY)
        wait_done(client, auth, job_id)
        response = client.get(f"/api/jobs/{job_id}/events", headers=auth)
        assert response.headers["content-type"].startswith("text/event-stream")
        assert response.headers["cache-control"] == "no-cache"


class TestQueueDiscipline:
    def test_fifo_with_single_worker(self, client):
        auth = register(client)
        job_ids = [submit(client, auth, TINY) for _ in range(10)]
        jobs = [wait_done(client, auth, job_id) for job_id in job_ids]
        started = [job["started_at"] for job in jobs]
        assert started == sorted(started)

    def test_at_most_once_with_many_workers(self, tmp_path):
        config = make_config(tmp_path, workers=4)
        with TestClient(create_app(config)) as client:
            auth = register(client)
            job_ids = [submit(client, auth, TINY) for _ in range(10)]
            for job_id in job_ids:
                assert wait_done(client, auth, job_id)["state"] == "done"
            for job_id in job_ids:
                frames = parse_sse(
                    client.get(f"/api/jobs/{job_id}/events", headers=auth).text
                )
                statuses = [data for _, event, data in frames if event == "status"]
                assert statuses == ["queued", "running", "done"]
                assert [e for _, e, _ in frames].count("done") == 1


class TestDurability:
    def test_queued_job_survives_restart(self, tmp_path):
        db = str(tmp_path / "restart.db")
        store = Store(db)
        user = store.create_user("u", "pw")
        job_id = store.submit_job(user, TINY, {})
        store.close()

        with TestClient(create_app(make_config(tmp_path, store=db))) as client:
            token = client.post(
                "/api/login", json={"username": "u", "password": "pw"}
            ).json()["token"]
            auth = {"Authorization": f"Bearer {token}"}
            assert wait_done(client, auth, job_id)["state"] == "done"

    def test_running_job_requeued_after_crash(self, tmp_path):
        db = str(tmp_path / "crash.db")
        store = Store(db)
        user = store.create_user("u", "pw")
        job_id = store.submit_job(user, TINY, {})
        claimed = store.claim_next_job()
        assert claimed["id"] == job_id
        # partial progress that a crash would strand
        store.append_event(job_id, "status", "running")
        store.append_event(job_id, "raw", "session s(0)")
        store.close()

        with TestClient(create_app(make_config(tmp_path, store=db))) as client:
            token = client.post(
                "/api/login", json={"username": "u", "password": "pw"}
            ).json()["token"]
            auth = {"Authorization": f"Bearer {token}"}
            assert wait_done(client, auth, job_id)["state"] == "done"
            frames = parse_sse(
                client.get(f"/api/jobs/{job_id}/events", headers=auth).text
            )
            ids = [seq for seq, _, _ in frames]
            assert ids == list(range(1, len(ids) + 1))
            assert frames[0][1:] == ("status", "queued")
            running = [1 for _, event, data in frames if data == "running"]
            assert len(running) == 1
            assert frames[-1][1] == "done"

    def test_ttl_purge_removes_old_terminal_jobs(self, tmp_path):
        db = str(tmp_path / "ttl.db")
        store = Store(db)
        user = store.create_user("u", "pw")
        job_id = store.submit_job(user, TINY, {})
        run_job(store, store.claim_next_job())
        assert store.get_job(job_id)["state"] == "done"
        keep_id = store.submit_job(user, TINY, {})

        conn = sqlite3.connect(db)
        with conn:
            conn.execute(
                "UPDATE jobs SET finished_at = finished_at - 10000 WHERE id = ?",
                (job_id,),
            )
        conn.close()
        assert store.purge_expired(3600) == 1
        assert store.get_job(job_id) is None
        assert store.events_after(job_id, 0) == []
        assert store.get_job(keep_id) is not None

    def test_purge_runs_on_submit(self, tmp_path):
        config = make_config(tmp_path, job_ttl=0)
        with TestClient(create_app(config)) as client:
            auth = register(client)
            old_id = submit(client, auth, TINY)
            wait_done(client, auth, old_id)
            time.sleep(0.02)
            submit(client, auth, TINY)
            assert client.get(f"/api/jobs/{old_id}", headers=auth).status_code == 404


def bob_sees_nothing_public(client, bob):
    return client.get("/api/public-stories", headers=bob).json() == []


class TestStories:
    def test_create_and_read(self, client):
        auth = register(client, "alice")
        story = client.post(
            "/api/stories", json={"title": "Doorbell", "source": TINY}, headers=auth
        ).json()
        assert story["owner"] == "alice"
        assert story["visibility"] == "personal"
        fetched = client.get(f"/api/stories/{story['id']}", headers=auth).json()
        assert fetched == story

    def test_empty_title_rejected(self, client):
        auth = register(client)
        response = client.post(
            "/api/stories", json={"title": " ", "source": TINY}, headers=auth
        )
        assert response.status_code == 422
        assert response.json()["error"] == "bad-title"

    def test_list_is_newest_first(self, client):
        auth = register(client)
        first = client.post(
            "/api/stories", json={"title": "one", "source": "a."}, headers=auth
        ).json()
        time.sleep(0.01)
        second = client.post(
            "/api/stories", json={"title": "two", "source": "b."}, headers=auth
        ).json()
        titles = [s["title"] for s in client.get("/api/stories", headers=auth).json()]
        assert titles == ["two", "one"]
        assert first["created_at"] <= second["created_at"]

    def test_personal_story_is_private(self, client):
        alice = register(client, "alice")
        bob = register(client, "bob")
        story = client.post(
            "/api/stories", json={"title": "mine", "source": TINY}, headers=alice
        ).json()
        sid = story["id"]
        assert client.get(f"/api/stories/{sid}", headers=bob).status_code == 403
        assert (
            client.put(f"/api/stories/{sid}", json={"title": "x"}, headers=bob)
        ).status_code == 403
        assert client.post(f"/api/stories/{sid}/share", headers=bob).status_code == 403
        assert bob_sees_nothing_public(client, bob)

    def test_unknown_story_is_404(self, client):
        auth = register(client)
        assert client.get("/api/stories/none", headers=auth).status_code == 404

    def test_update(self, client):
        auth = register(client)
        story = client.post(
            "/api/stories", json={"title": "draft", "source": "a."}, headers=auth
        ).json()
        updated = client.put(
            f"/api/stories/{story['id']}", json={"title": "final"}, headers=auth
        ).json()
        assert updated["title"] == "final"
        assert updated["source"] == "a."
        assert updated["updated_at"] >= story["updated_at"]
        updated = client.put(
            f"/api/stories/{story['id']}", json={"source": "b."}, headers=auth
        ).json()
        assert updated["title"] == "final"
        assert updated["source"] == "b."

    def test_share_copy_comment_flow(self, client):
        alice = register(client, "alice")
        bob = register(client, "bob")
        story = client.post(
            "/api/stories", json={"title": "Doorbell", "source": TINY}, headers=alice
        ).json()
        sid = story["id"]

        # personal stories cannot be copied or commented on, even by the owner
        assert client.post(f"/api/stories/{sid}/copy", headers=alice).status_code == 409
        comment = client.post(
            f"/api/stories/{sid}/comments", json={"body": "hi"}, headers=alice
        )
        assert comment.status_code == 409

        shared = client.post(f"/api/stories/{sid}/share", headers=alice).json()
        assert shared["visibility"] == "public"
        again = client.post(f"/api/stories/{sid}/share", headers=alice)
        assert again.status_code == 200
        assert again.json()["visibility"] == "public"

        # now readable and commentable by others
        assert client.get(f"/api/stories/{sid}", headers=bob).status_code == 200
        listed = client.get("/api/public-stories", headers=bob).json()
        assert [s["id"] for s in listed] == [sid]
        assert listed[0]["comment_count"] == 0

        client.post(f"/api/stories/{sid}/comments", json={"body": "first"}, headers=bob)
        time.sleep(0.01)
        client.post(
            f"/api/stories/{sid}/comments", json={"body": "second"}, headers=alice
        )
        comments = client.get(f"/api/stories/{sid}/comments", headers=alice).json()
        assert [(c["author"], c["body"]) for c in comments] == [
            ("alice", "second"),
            ("bob", "first"),
        ]
        listed = client.get("/api/public-stories", headers=bob).json()
        assert listed[0]["comment_count"] == 2

        copy = client.post(f"/api/stories/{sid}/copy", headers=bob).json()
        assert copy["id"] != sid
        assert copy["owner"] == "bob"
        assert copy["visibility"] == "personal"
        assert copy["title"] == "Doorbell"
        assert copy["source"] == TINY
        mine = client.get("/api/stories", headers=bob).json()
        assert [s["id"] for s in mine] == [copy["id"]]

    def test_empty_comment_rejected(self, client):
        auth = register(client)
        story = client.post(
            "/api/stories", json={"title": "t", "source": "a."}, headers=auth
        ).json()
        client.post(f"/api/stories/{story['id']}/share", headers=auth)
        response = client.post(
            f"/api/stories/{story['id']}/comments", json={"body": "  "}, headers=auth
        )
        assert response.status_code == 422
        assert response.json()["error"] == "empty-comment"


class TestConfig:
    def test_defaults(self):
        config = ServiceConfig()
        assert config.port == 8000
        assert config.worker_count >= 1

    def test_explicit_workers(self):
        assert ServiceConfig(workers=3).worker_count == 3

    def test_environment_fallback(self, monkeypatch, tmp_path):
        from starling.service import load_config

        monkeypatch.setenv("STARLING_PORT", "9001")
        monkeypatch.setenv("STARLING_STORE", str(tmp_path / "env.db"))
        config = load_config()
        assert config.port == 9001
        assert config.store == str(tmp_path / "env.db")

    def test_explicit_overrides_environment(self, monkeypatch):
        from starling.service import load_config

        monkeypatch.setenv("STARLING_PORT", "9001")
        assert load_config(port=7000).port == 7000

    def test_bad_environment_value(self, monkeypatch):
        from starling.service import load_config

        monkeypatch.setenv("STARLING_PORT", "not-a-number")
        with pytest.raises(RuntimeError, match="STARLING_PORT"):
            load_config()
