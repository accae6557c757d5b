"""Grounding: universe collection, instance enumeration, the n^k law."""

from starling.ground import (
    collect_universe,
    ground_domain,
    ground_rule,
    rule_variables,
)
from starling.lang import parse_domain


def parsed(text):
    domain, diagnostics = parse_domain(text)
    assert diagnostics == []
    return domain


def test_universe_is_argument_subterms_in_first_appearance_order():
    d = parsed(
        "s(0) :: person(ann) at always.\n"
        "s(0) :: request(go_to(shops)) at always.\n"
        "q(1) ?? has(ann,doorkeys) at 1.\n"
        "p(1) :: person(X) implies wants(X,open(door)).\n"
    )
    u = collect_universe(d)
    assert [str(c) for c in u.constants] == [
        "ann",
        "go_to(shops)",
        "shops",
        "doorkeys",
        "open(door)",
        "door",
    ]


def test_universe_excludes_predicate_heads():
    d = parsed("s(0) :: raining at 1.")
    assert collect_universe(d).constants == ()


def test_universe_story(story_text):
    u = collect_universe(parsed(story_text))
    names = [str(c) for c in u.constants]
    assert len(names) == 13
    assert names[0] == "ann"
    assert "find_out_who_at(door)" in names
    assert "doorbell" in names


def test_rule_variables_first_occurrence_body_before_head():
    d = parsed("p(1) :: sees(B,A), near(A) implies knows(B).")
    [rule] = d.rules
    assert list(rule_variables(rule)) == ["B", "A"]


def test_ground_rule_count_is_n_to_the_k():
    d = parsed(
        "s(0) :: f(k1) at 1.\n"
        "s(0) :: f(k2) at 1.\n"
        "s(0) :: f(k3) at 1.\n"
        "p(1) :: f(X), f(Y) implies g(X).\n"
    )
    u = collect_universe(d)
    assert len(u.constants) == 3
    instances = ground_rule(d.rules[0], u)
    assert len(instances) == 9
    assert [g.instance_id for g in instances] == list(range(9))


def test_ground_rule_substitutes_consistently():
    d = parsed("s(0) :: f(k1) at 1.\np(1) :: f(X) implies g(X,X).")
    u = collect_universe(d)
    [g] = ground_rule(d.rules[0], u)
    assert str(g.head) == "g(k1,k1)"
    assert str(g.body[0]) == "f(k1)"


def test_ground_rule_nested_substitution():
    d = parsed("s(0) :: f(k1) at 1.\np(1) :: f(X) implies wants(X,open(X)).")
    u = collect_universe(d)
    [g] = ground_rule(d.rules[0], u)
    assert str(g.head) == "wants(k1,open(k1))"


def test_ground_rule_without_variables_single_instance():
    d = parsed("s(0) :: f(k1) at 1.\np(1) :: raining implies wet.")
    [g] = ground_rule(d.rules[0], collect_universe(d))
    assert g.instance_id == 0
    assert str(g.head) == "wet"


def test_empty_universe_with_variables_grounds_to_nothing():
    d = parsed("s(0) :: raining at 1.\np(1) :: sees(X) implies wet.")
    assert list(ground_rule(d.rules[0], collect_universe(d))) == []


def test_ground_domain_story_totals(story_text):
    g = ground_domain(parsed(story_text))
    assert len(g.universe) == 13
    # one single-variable rule contributes 13, the two-variable rule 169
    per_label = {}
    for rule in g.rules:
        per_label[str(rule.origin)] = per_label.get(str(rule.origin), 0) + 1
    assert per_label["c(33)"] == 169
    assert per_label["p(22)"] == 13
    assert len(g.rules) == sum(per_label.values()) == 221


def test_ground_domain_carries_declarations(story_text):
    d = parsed(story_text)
    g = ground_domain(d)
    assert g.observations == tuple(d.observations)
    assert g.priorities == tuple(d.priorities)
    assert g.fluents is d.fluents
