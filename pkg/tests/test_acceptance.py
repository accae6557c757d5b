"""Acceptance gate: one PASS/FAIL line per criterion.

Each test prints its verdict to the real stdout (visible with -s) and
records it for the terminal summary (visible on any run), and still fails
the suite on any miss.
"""

import functools
import json
import subprocess
import sys
import time

from fastapi.testclient import TestClient

from starling.cli import main as cli_main
from starling.engine import ALL_TRACES, TruthValue, run_sessions
from starling.lang import format_domain, has_errors, parse_domain, validate_domain
from starling.lang.ast import RuleKind, RuleLabel
from starling.modelio import export_bk_graph
from starling.service import ServiceConfig, Store
from starling.service.app import create_app

import test_properties
from test_reasoner import INVENTORY, SETTLED
from test_service import parse_sse, register, submit, wait_done

from conftest import REPO


# read by conftest's terminal-summary hook
VERDICTS = []


def criterion(name):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                VERDICTS.append(f"FAIL: {name}")
                print(VERDICTS[-1], file=sys.__stdout__, flush=True)
                raise
            VERDICTS.append(f"PASS: {name}")
            print(VERDICTS[-1], file=sys.__stdout__, flush=True)

        return run

    return wrap


def clean_parse(text):
    domain, diagnostics = parse_domain(text)
    assert not has_errors(diagnostics + validate_domain(domain)), diagnostics
    return domain


@criterion("parser corpus: story file round-trips in under a second")
def test_parser_corpus(story_text):
    start = time.perf_counter()
    domain = clean_parse(story_text)

    assert len(domain.questions) == 2
    assert len(domain.rules) >= 3
    labels = {rule.label for rule in domain.rules}
    assert {
        RuleLabel(RuleKind.PROPERTY, 22),
        RuleLabel(RuleKind.PROPERTY, 23),
        RuleLabel(RuleKind.CAUSAL, 33),
    } <= labels
    assert [(str(p.stronger), str(p.weaker)) for p in domain.priorities] == [
        ("p(23)", "p(22)"),
        ("c(33)", "p(23)"),
    ]

    reparsed, diagnostics = parse_domain(format_domain(domain))
    assert diagnostics == []
    assert reparsed.observations == domain.observations
    assert reparsed.questions == domain.questions
    assert reparsed.rules == domain.rules
    assert reparsed.priorities == domain.priorities
    assert reparsed.sessions == domain.sessions
    assert reparsed.fluents == domain.fluents
    assert time.perf_counter() - start < 1.0


FRAGMENT = """\
fluents([in_flat(_), afraid(_), wants(_,_)]).
s(0) :: in_flat(mary) at 3.
s(0) :: walk_to(mary,door) at 4.
s(0) :: afraid(mary) at 4.
p(22) :: walk_to(Person,door), in_flat(Person) implies wants(Person,open(door)).
p(23) :: afraid(Person), in_flat(Person) implies -wants(Person,open(door)).
p(23) >> p(22).
"""

EXTENSION = """\
s(0) :: flatmate(mary,ann) at always.
s(0) :: see_at(mary,ann,door) at 5.
c(33) :: see_at(Person,Other,door), flatmate(Person,Other) causes wants(Person,open(door)).
c(33) >> p(23).
"""


@criterion("priority semantics: fragment, extension, and the full story grid")
def test_priority_semantics(story_text):
    [fragment] = run_sessions(clean_parse(FRAGMENT))
    wants = next(
        c for c in fragment.model.concepts if str(c) == "wants(mary,open(door))"
    )
    assert fragment.model.value(wants, 4) is TruthValue.FALSE

    [extended] = run_sessions(clean_parse(FRAGMENT + EXTENSION))
    wants = next(
        c for c in extended.model.concepts if str(c) == "wants(mary,open(door))"
    )
    assert extended.model.value(wants, 4) is TruthValue.FALSE
    assert extended.model.value(wants, 6) is TruthValue.TRUE

    # full story: every cell equals the hand-computed fixed point
    [story] = run_sessions(clean_parse(story_text))
    assert [str(c) for c in story.model.concepts] == INVENTORY
    assert story.model.horizon == 7
    for concept in story.model.concepts:
        for t in range(8):
            cell = story.model.cell(concept, t)
            value, provenance, observed = SETTLED.get(
                (str(concept), t), ("unknown", "none", False)
            )
            where = f"{concept}@{t}"
            assert cell.value.value == value, where
            assert str(cell.provenance) == provenance, where
            assert cell.observed is observed, where
    assert [a.selected for a in story.answers] == [None, 0]


@criterion("property suites: five randomized invariants, 500+ cases, under 60s")
def test_property_suites():
    assert test_properties.COMMON["max_examples"] >= 500
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "tests/test_properties.py", "-q",
         "-p", "no:warnings"],
        cwd=REPO,
        capture_output=True,
        text=True,
    )
    elapsed = time.perf_counter() - start
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "5 passed" in proc.stdout
    assert elapsed < 60.0, f"property suites took {elapsed:.1f}s"


@criterion("report coherence: retraction, delta disjointness, qualified winners")
def test_report_coherence(revision_path, story_text):
    text = revision_path.read_text(encoding="utf-8")
    first, second = run_sessions(clean_parse(text), trace=ALL_TRACES)
    assert "p(1)#0@1" in second.report.retracted
    assert not (second.report.retracted & second.report.elaborated)

    for result in (first, second, *run_sessions(clean_parse(story_text), trace=ALL_TRACES)):
        for winner, loser in result.report.qualified:
            assert winner in result.report.acceptable
            assert loser not in result.report.acceptable


@criterion("graph export: edge-count laws and the dashed priority edge")
def test_graph_export(graph_demo_path):
    domain = parse_domain(graph_demo_path.read_text(encoding="utf-8"))[0]
    graph = export_bk_graph(domain)
    body = [e for e in graph["edges"] if e["role"] == "body"]
    head = [e for e in graph["edges"] if e["role"] == "head"]
    dashed = [e for e in graph["edges"] if e["style"] == "dashed"]
    assert len(body) == sum(len(r.body) for r in domain.rules) == 4
    assert len(head) == len(domain.rules) == 3
    assert len(dashed) == len(domain.priorities) == 1
    assert dashed[0]["from"] == "r(1)" and dashed[0]["to"] == "r(2)"
    assert len(graph["concept_nodes"]) == 5
    assert len(graph["rule_nodes"]) == 3


@criterion("service lifecycle: FIFO completion, byte-exact replay, restart safety")
def test_service_lifecycle(tmp_path, story_path, capsys):
    start = time.perf_counter()
    config = ServiceConfig(workers=1, job_ttl=3600, store=str(tmp_path / "gate.db"))

    with TestClient(create_app(config)) as client:
        auth = register(client, "gate")

        job_ids = [submit(client, auth, "s(0) :: f at 1.") for _ in range(10)]
        jobs = [wait_done(client, auth, job_id) for job_id in job_ids]
        assert all(job["state"] == "done" for job in jobs)
        finished = [job["finished_at"] for job in jobs]
        started = [job["started_at"] for job in jobs]
        assert started == sorted(started)
        assert finished == sorted(finished)

        story_job = submit(client, auth, story_path.read_text(encoding="utf-8"))
        wait_done(client, auth, story_job)
        frames = parse_sse(
            client.get(f"/api/jobs/{story_job}/events", headers=auth).text
        )
        raw = [data for _, event, data in frames if event == "raw"]
        assert cli_main(["read", str(story_path)]) == 0
        assert "\n".join(raw) + "\n" == capsys.readouterr().out

    # crash with work still queued; a fresh process must drain it
    db = str(tmp_path / "restart.db")
    store = Store(db)
    user = store.create_user("gate", "pw")
    queued = [store.submit_job(user, "s(0) :: f at 1.", {}) for _ in range(3)]
    store.close()
    with TestClient(create_app(ServiceConfig(workers=1, store=db))) as client:
        token = client.post(
            "/api/login", json={"username": "gate", "password": "pw"}
        ).json()["token"]
        auth = {"Authorization": f"Bearer {token}"}
        for job_id in queued:
            assert wait_done(client, auth, job_id)["state"] == "done"

    assert time.perf_counter() - start < 30.0
