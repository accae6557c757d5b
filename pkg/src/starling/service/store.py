"""Durable embedded store for users, tokens, jobs, events, stories, comments.

SQLite in WAL mode, one connection per thread.  The job queue is FIFO by
insertion order and the claim is a single UPDATE..RETURNING statement, so
each job moves Queued -> Running exactly once even with many workers.
Credentials are stored as scrypt hashes and API tokens as SHA-256 digests;
nothing secret is persisted in the clear.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import secrets
import sqlite3
import threading
import time
from typing import Any

_SCHEMA = """
CREATE TABLE IF NOT EXISTS users (
    id TEXT PRIMARY KEY,
    username TEXT NOT NULL UNIQUE,
    credential TEXT NOT NULL,
    created_at REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS tokens (
    token_hash TEXT PRIMARY KEY,
    user_id TEXT NOT NULL REFERENCES users(id),
    created_at REAL NOT NULL,
    revoked INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS jobs (
    id TEXT PRIMARY KEY,
    owner TEXT NOT NULL REFERENCES users(id),
    source TEXT NOT NULL,
    options TEXT NOT NULL DEFAULT '{}',
    state TEXT NOT NULL DEFAULT 'queued',
    submitted_at REAL NOT NULL,
    started_at REAL,
    finished_at REAL,
    result TEXT,
    error TEXT
);
CREATE INDEX IF NOT EXISTS jobs_by_state ON jobs(state);
CREATE TABLE IF NOT EXISTS job_events (
    job_id TEXT NOT NULL REFERENCES jobs(id) ON DELETE CASCADE,
    seq INTEGER NOT NULL,
    event TEXT NOT NULL,
    data TEXT NOT NULL,
    PRIMARY KEY (job_id, seq)
);
CREATE TABLE IF NOT EXISTS stories (
    id TEXT PRIMARY KEY,
    owner TEXT NOT NULL REFERENCES users(id),
    title TEXT NOT NULL,
    source TEXT NOT NULL,
    visibility TEXT NOT NULL DEFAULT 'personal',
    created_at REAL NOT NULL,
    updated_at REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS comments (
    id TEXT PRIMARY KEY,
    story_id TEXT NOT NULL REFERENCES stories(id) ON DELETE CASCADE,
    author TEXT NOT NULL REFERENCES users(id),
    body TEXT NOT NULL,
    created_at REAL NOT NULL
);
"""

_SCRYPT_N = 1 << 14
_SCRYPT_R = 8
_SCRYPT_P = 1


def _hash_password(password: str) -> str:
    salt = secrets.token_bytes(16)
    digest = hashlib.scrypt(
        password.encode("utf-8"),
        salt=salt,
        n=_SCRYPT_N,
        r=_SCRYPT_R,
        p=_SCRYPT_P,
        dklen=32,
    )
    return f"scrypt:{_SCRYPT_N}:{_SCRYPT_R}:{_SCRYPT_P}:{salt.hex()}:{digest.hex()}"


def _check_password(password: str, credential: str) -> bool:
    try:
        scheme, n, r, p, salt_hex, digest_hex = credential.split(":")
        if scheme != "scrypt":
            return False
        digest = hashlib.scrypt(
            password.encode("utf-8"),
            salt=bytes.fromhex(salt_hex),
            n=int(n),
            r=int(r),
            p=int(p),
            dklen=len(digest_hex) // 2,
        )
    except (ValueError, TypeError):
        return False
    return hmac.compare_digest(digest.hex(), digest_hex)


def _token_hash(token: str) -> str:
    return hashlib.sha256(token.encode("utf-8")).hexdigest()


def _new_id() -> str:
    return secrets.token_hex(16)


class Store:
    """Thread-safe persistence facade; one sqlite connection per thread."""

    def __init__(self, path: str):
        self._path = path
        self._local = threading.local()
        # Single condition backs both worker wake-up and event tailing.
        self._cond = threading.Condition()
        self._connection().executescript(_SCHEMA)

    def _connection(self) -> sqlite3.Connection:
        conn = getattr(self._local, "conn", None)
        if conn is None:
            conn = sqlite3.connect(self._path, timeout=30, isolation_level=None)
            conn.row_factory = sqlite3.Row
            conn.execute("PRAGMA journal_mode=WAL")
            conn.execute("PRAGMA synchronous=NORMAL")
            conn.execute("PRAGMA foreign_keys=ON")
            conn.execute("PRAGMA busy_timeout=30000")
            self._local.conn = conn
        return conn

    def close(self) -> None:
        conn = getattr(self._local, "conn", None)
        if conn is not None:
            conn.close()
            self._local.conn = None

    def _notify(self) -> None:
        with self._cond:
            self._cond.notify_all()

    # --- users and tokens ---------------------------------------------

    def create_user(self, username: str, password: str) -> str | None:
        """Create an account; returns the user id, or None if the name is taken."""
        user_id = _new_id()
        try:
            self._connection().execute(
                "INSERT INTO users (id, username, credential, created_at)"
                " VALUES (?, ?, ?, ?)",
                (user_id, username, _hash_password(password), time.time()),
            )
        except sqlite3.IntegrityError:
            return None
        return user_id

    def verify_user(self, username: str, password: str) -> str | None:
        row = self._connection().execute(
            "SELECT id, credential FROM users WHERE username = ?", (username,)
        ).fetchone()
        if row is None or not _check_password(password, row["credential"]):
            return None
        return row["id"]

    def username(self, user_id: str) -> str | None:
        row = self._connection().execute(
            "SELECT username FROM users WHERE id = ?", (user_id,)
        ).fetchone()
        return None if row is None else row["username"]

    def issue_token(self, user_id: str) -> str:
        token = secrets.token_urlsafe(32)
        self._connection().execute(
            "INSERT INTO tokens (token_hash, user_id, created_at) VALUES (?, ?, ?)",
            (_token_hash(token), user_id, time.time()),
        )
        return token

    def user_for_token(self, token: str) -> str | None:
        row = self._connection().execute(
            "SELECT user_id FROM tokens WHERE token_hash = ? AND revoked = 0",
            (_token_hash(token),),
        ).fetchone()
        return None if row is None else row["user_id"]

    def revoke_token(self, token: str) -> None:
        self._connection().execute(
            "UPDATE tokens SET revoked = 1 WHERE token_hash = ?",
            (_token_hash(token),),
        )

    # --- jobs and events ------------------------------------------------

    def submit_job(self, owner: str, source: str, options: dict[str, Any]) -> str:
        """Persist a queued job plus its first status event, then wake workers."""
        job_id = _new_id()
        conn = self._connection()
        conn.execute("BEGIN IMMEDIATE")
        try:
            conn.execute(
                "INSERT INTO jobs (id, owner, source, options, state, submitted_at)"
                " VALUES (?, ?, ?, ?, 'queued', ?)",
                (job_id, owner, source, json.dumps(options), time.time()),
            )
            conn.execute(
                "INSERT INTO job_events (job_id, seq, event, data)"
                " VALUES (?, 1, 'status', 'queued')",
                (job_id,),
            )
            conn.execute("COMMIT")
        except BaseException:
            conn.execute("ROLLBACK")
            raise
        self._notify()
        return job_id

    def claim_next_job(self) -> dict[str, Any] | None:
        """Atomically move the oldest queued job to running and return it."""
        row = self._connection().execute(
            "UPDATE jobs SET state = 'running', started_at = ?"
            " WHERE id = (SELECT id FROM jobs WHERE state = 'queued'"
            "             ORDER BY rowid LIMIT 1)"
            " RETURNING id, owner, source, options",
            (time.time(),),
        ).fetchone()
        return None if row is None else dict(row)

    def get_job(self, job_id: str) -> dict[str, Any] | None:
        row = self._connection().execute(
            "SELECT * FROM jobs WHERE id = ?", (job_id,)
        ).fetchone()
        return None if row is None else dict(row)

    def finish_job(self, job_id: str, result: str) -> None:
        self._connection().execute(
            "UPDATE jobs SET state = 'done', finished_at = ?, result = ?"
            " WHERE id = ?",
            (time.time(), result, job_id),
        )
        self._notify()

    def fail_job(self, job_id: str, error: str) -> None:
        self._connection().execute(
            "UPDATE jobs SET state = 'failed', finished_at = ?, error = ?"
            " WHERE id = ?",
            (time.time(), error, job_id),
        )
        self._notify()

    def append_event(self, job_id: str, event: str, data: str) -> int:
        conn = self._connection()
        conn.execute("BEGIN IMMEDIATE")
        try:
            seq = conn.execute(
                "SELECT COALESCE(MAX(seq), 0) + 1 FROM job_events WHERE job_id = ?",
                (job_id,),
            ).fetchone()[0]
            conn.execute(
                "INSERT INTO job_events (job_id, seq, event, data) VALUES (?, ?, ?, ?)",
                (job_id, seq, event, data),
            )
            conn.execute("COMMIT")
        except BaseException:
            conn.execute("ROLLBACK")
            raise
        self._notify()
        return seq

    def events_after(self, job_id: str, after_seq: int) -> list[dict[str, Any]]:
        rows = self._connection().execute(
            "SELECT seq, event, data FROM job_events"
            " WHERE job_id = ? AND seq > ? ORDER BY seq",
            (job_id, after_seq),
        ).fetchall()
        return [dict(r) for r in rows]

    def last_seq(self, job_id: str) -> int:
        row = self._connection().execute(
            "SELECT COALESCE(MAX(seq), 0) FROM job_events WHERE job_id = ?",
            (job_id,),
        ).fetchone()
        return row[0]

    def wait_for_change(self, timeout: float) -> None:
        """Block until any submit/event/state change, or the timeout."""
        with self._cond:
            self._cond.wait(timeout)

    def recover(self) -> list[str]:
        """Requeue jobs left running by a crash, dropping their partial events.

        The reasoner is pure, so rerunning from scratch is safe; partial
        event logs are deleted so the eventual replay starts clean.
        """
        conn = self._connection()
        conn.execute("BEGIN IMMEDIATE")
        try:
            rows = conn.execute(
                "SELECT id FROM jobs WHERE state = 'running'"
            ).fetchall()
            ids = [r["id"] for r in rows]
            for job_id in ids:
                conn.execute(
                    "DELETE FROM job_events WHERE job_id = ? AND seq > 1", (job_id,)
                )
                conn.execute(
                    "UPDATE jobs SET state = 'queued', started_at = NULL"
                    " WHERE id = ?",
                    (job_id,),
                )
            conn.execute("COMMIT")
        except BaseException:
            conn.execute("ROLLBACK")
            raise
        if ids:
            self._notify()
        return ids

    def purge_expired(self, ttl_seconds: int) -> int:
        """Delete terminal jobs (and their events) older than the TTL."""
        cursor = self._connection().execute(
            "DELETE FROM jobs WHERE state IN ('done', 'failed')"
            " AND finished_at < ?",
            (time.time() - ttl_seconds,),
        )
        return cursor.rowcount

    # --- stories and comments -------------------------------------------

    def _story_row(self, row: sqlite3.Row | None) -> dict[str, Any] | None:
        if row is None:
            return None
        story = dict(row)
        story["owner_name"] = self.username(story["owner"])
        return story

    def create_story(self, owner: str, title: str, source: str) -> dict[str, Any]:
        story_id = _new_id()
        now = time.time()
        self._connection().execute(
            "INSERT INTO stories (id, owner, title, source, visibility,"
            " created_at, updated_at) VALUES (?, ?, ?, ?, 'personal', ?, ?)",
            (story_id, owner, title, source, now, now),
        )
        return self.get_story(story_id)

    def get_story(self, story_id: str) -> dict[str, Any] | None:
        row = self._connection().execute(
            "SELECT * FROM stories WHERE id = ?", (story_id,)
        ).fetchone()
        return self._story_row(row)

    def list_stories(self, owner: str) -> list[dict[str, Any]]:
        rows = self._connection().execute(
            "SELECT * FROM stories WHERE owner = ?"
            " ORDER BY created_at DESC, rowid DESC",
            (owner,),
        ).fetchall()
        return [self._story_row(r) for r in rows]

    def list_public_stories(self) -> list[dict[str, Any]]:
        rows = self._connection().execute(
            "SELECT s.*, COUNT(c.id) AS comment_count FROM stories s"
            " LEFT JOIN comments c ON c.story_id = s.id"
            " WHERE s.visibility = 'public'"
            " GROUP BY s.id ORDER BY s.created_at DESC, s.rowid DESC"
        ).fetchall()
        return [self._story_row(r) for r in rows]

    def update_story(
        self, story_id: str, title: str | None, source: str | None
    ) -> dict[str, Any] | None:
        sets = ["updated_at = ?"]
        params: list[Any] = [time.time()]
        if title is not None:
            sets.append("title = ?")
            params.append(title)
        if source is not None:
            sets.append("source = ?")
            params.append(source)
        params.append(story_id)
        self._connection().execute(
            f"UPDATE stories SET {', '.join(sets)} WHERE id = ?", params
        )
        return self.get_story(story_id)

    def share_story(self, story_id: str) -> dict[str, Any] | None:
        self._connection().execute(
            "UPDATE stories SET visibility = 'public', updated_at = ?"
            " WHERE id = ?",
            (time.time(), story_id),
        )
        return self.get_story(story_id)

    def copy_story(self, story_id: str, new_owner: str) -> dict[str, Any] | None:
        original = self.get_story(story_id)
        if original is None:
            return None
        return self.create_story(new_owner, original["title"], original["source"])

    def add_comment(self, story_id: str, author: str, body: str) -> dict[str, Any]:
        comment_id = _new_id()
        self._connection().execute(
            "INSERT INTO comments (id, story_id, author, body, created_at)"
            " VALUES (?, ?, ?, ?, ?)",
            (comment_id, story_id, author, body, time.time()),
        )
        row = self._connection().execute(
            "SELECT * FROM comments WHERE id = ?", (comment_id,)
        ).fetchone()
        comment = dict(row)
        comment["author_name"] = self.username(comment["author"])
        return comment

    def list_comments(self, story_id: str) -> list[dict[str, Any]]:
        rows = self._connection().execute(
            "SELECT c.*, u.username AS author_name FROM comments c"
            " JOIN users u ON u.id = c.author"
            " WHERE c.story_id = ? ORDER BY c.created_at DESC, c.rowid DESC",
            (story_id,),
        ).fetchall()
        return [dict(r) for r in rows]
