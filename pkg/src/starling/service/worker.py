"""Background workers: claim queued jobs, run comprehension, persist events.

Each worker thread loops on the store's FIFO claim.  A claimed job runs
parse -> validate -> ground -> sessions in isolation; every raw line is
persisted as a `raw` event as it is produced, so live subscribers see the
same byte stream a later replay reconstructs.
"""

from __future__ import annotations

import json
import threading
import time
from typing import Any

from ..engine import EngineError, TraceKind, iter_session_results
from ..engine.semantics import _declared_sessions
from ..lang import has_errors, parse_domain, validate_domain
from ..modelio import iter_raw_lines, render_model_document
from .store import Store

# Upper bound on the per-line pacing a job may request; the knob exists
# so integration tests can observe a run in flight.
MAX_RAW_THROTTLE = 1.0


def _job_options(raw: str) -> dict[str, Any]:
    try:
        options = json.loads(raw)
    except ValueError:
        options = {}
    return options if isinstance(options, dict) else {}


def run_job(store: Store, job: dict[str, Any]) -> None:
    """Execute one claimed job to its terminal state, persisting events."""
    job_id = job["id"]
    options = _job_options(job["options"])
    store.append_event(job_id, "status", "running")
    try:
        report = frozenset(TraceKind(k) for k in options.get("report", ()))
        slack = int(options.get("horizon_slack", 2))
        session_sel = options.get("session")
        throttle = min(float(options.get("raw_throttle", 0.0)), MAX_RAW_THROTTLE)

        domain, diagnostics = parse_domain(job["source"])
        diagnostics = diagnostics + validate_domain(domain)
        if has_errors(diagnostics):
            _fail(store, job_id, "\n".join(str(d) for d in diagnostics))
            return
        visible = {decl.session: decl.visible for decl in _declared_sessions(domain)}
        results = []
        for result in iter_session_results(domain, slack, report):
            if session_sel is not None and result.session != session_sel:
                continue
            results.append(result)
            for line in iter_raw_lines(result, visible, report):
                store.append_event(job_id, "raw", line)
                if throttle > 0:
                    time.sleep(throttle)
        document = render_model_document(results, visible)
        store.finish_job(job_id, json.dumps(document))
        store.append_event(job_id, "model", json.dumps(document))
        store.append_event(job_id, "status", "done")
        store.append_event(job_id, "done", "")
    except EngineError as exc:
        _fail(store, job_id, str(exc))
    except Exception as exc:  # a crashed job must still reach a terminal state
        _fail(store, job_id, f"internal error: {exc}")


def _fail(store: Store, job_id: str, message: str) -> None:
    store.fail_job(job_id, message)
    store.append_event(job_id, "status", "failed")
    store.append_event(job_id, "error", message)


class WorkerPool:
    def __init__(self, store: Store, count: int):
        self._store = store
        self._count = max(1, count)
        self._threads: list[threading.Thread] = []
        self._stop = threading.Event()

    def start(self) -> None:
        if self._threads:
            return
        self._stop.clear()
        for n in range(self._count):
            thread = threading.Thread(
                target=self._loop, name=f"starling-worker-{n}", daemon=True
            )
            thread.start()
            self._threads.append(thread)

    def stop(self) -> None:
        self._stop.set()
        # Workers block on the store condition; nudge them awake.
        self._store._notify()
        for thread in self._threads:
            thread.join(timeout=5)
        self._threads = []

    def _loop(self) -> None:
        while not self._stop.is_set():
            job = self._store.claim_next_job()
            if job is None:
                self._store.wait_for_change(0.2)
                continue
            run_job(self._store, job)
