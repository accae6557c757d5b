"""Recursive-descent parser for STAR domain files.

Parsing is total: a malformed statement produces an error diagnostic and the
parser resynchronizes at the next `.`, so one pass reports every problem in
the file. Statement introducers (`s(`, `q(`, rule labels, `session(`,
`fluents(`) are only special at statement start; inside terms the same words
are ordinary functors.
"""

from __future__ import annotations

import re

from .ast import (
    ALWAYS,
    Compound,
    Connective,
    Constant,
    Diagnostic,
    Domain,
    FluentsDecl,
    Literal,
    Observation,
    Priority,
    Question,
    Rule,
    RuleKind,
    RuleLabel,
    SessionDecl,
    Severity,
    Span,
    Term,
    TimeRef,
    Variable,
    Visibility,
    is_variable_name,
)
from .lexer import Token, TokenKind, tokenize

_COMPACT_LABEL_RE = re.compile(r"([pcr])(\d+)\Z")
_CONNECTIVES = {
    "implies": Connective.IMPLIES,
    "causes": Connective.CAUSES,
    "precludes": Connective.PRECLUDES,
}


class _ParseIssue(Exception):
    def __init__(self, code: str, message: str, token: Token):
        super().__init__(message)
        self.code = code
        self.message = message
        self.token = token


def parse_domain(text: str) -> tuple[Domain, list[Diagnostic]]:
    """Parse all well-formed statements; failures become error diagnostics."""
    return _Parser(text).parse()


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.domain = Domain()
        self.diagnostics: list[Diagnostic] = []
        self._fluents_seen = False

    # token plumbing

    def peek(self, offset: int = 0) -> Token:
        pos = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def expect(self, kind: TokenKind, what: str) -> Token:
        tok = self.peek()
        if tok.kind is not kind:
            raise _ParseIssue("parse-expected", f"expected {what}", tok)
        return self.advance()

    def error(self, code: str, message: str, token: Token | None = None) -> _ParseIssue:
        return _ParseIssue(code, message, token if token is not None else self.peek())

    def diagnose(self, issue: _ParseIssue) -> None:
        tok = issue.token
        self.diagnostics.append(
            Diagnostic(
                Severity.ERROR,
                issue.code,
                issue.message,
                tok.line,
                tok.col,
                max(1, len(tok.text)),
            )
        )

    def sync_to_dot(self) -> None:
        while self.peek().kind not in (TokenKind.DOT, TokenKind.EOF):
            self.advance()
        if self.peek().kind is TokenKind.DOT:
            self.advance()

    # statements

    def parse(self) -> tuple[Domain, list[Diagnostic]]:
        while self.peek().kind is not TokenKind.EOF:
            try:
                self.statement()
            except _ParseIssue as issue:
                self.diagnose(issue)
                self.sync_to_dot()
        return self.domain, self.diagnostics

    def statement(self) -> None:
        tok = self.peek()
        if tok.kind is not TokenKind.NAME:
            raise self.error("parse-statement", "expected a statement", tok)
        name = tok.text
        if name == "session" and self.peek(1).kind is TokenKind.LPAREN:
            self.session_decl(tok)
        elif name == "fluents" and self.peek(1).kind is TokenKind.LPAREN:
            self.fluents_decl(tok)
        elif name == "s" and self.peek(1).kind is TokenKind.LPAREN:
            self.observation(tok)
        elif name == "q" and self.peek(1).kind is TokenKind.LPAREN:
            self.question(tok)
        elif self.at_rule_label(tok):
            self.rule_or_priority(tok)
        else:
            raise self.error("parse-statement", f"unrecognized statement start {name!r}", tok)

    def at_rule_label(self, tok: Token) -> bool:
        if _COMPACT_LABEL_RE.match(tok.text):
            return True
        return tok.text in ("p", "c", "r") and self.peek(1).kind is TokenKind.LPAREN

    def end_statement(self, start: Token) -> Span:
        dot = self.expect(TokenKind.DOT, "'.' at end of statement")
        return Span(start.line, start.col, dot.line, dot.col)

    def observation(self, start: Token) -> None:
        self.advance()  # s
        self.expect(TokenKind.LPAREN, "'('")
        session = self.nonneg_int("session number")
        self.expect(TokenKind.RPAREN, "')'")
        self.expect(TokenKind.COLONCOLON, "'::'")
        literal = self.literal()
        self.keyword("at")
        time = self.time_ref(allow_always=True)
        span = self.end_statement(start)
        self.domain.observations.append(Observation(session, literal, time, span))

    def question(self, start: Token) -> None:
        self.advance()  # q
        self.expect(TokenKind.LPAREN, "'('")
        qid = self.nonneg_int("question number")
        self.expect(TokenKind.RPAREN, "')'")
        self.expect(TokenKind.QQ, "'??'")
        choices: list[tuple[Literal, int]] = []
        while True:
            literal = self.literal()
            self.keyword("at")
            time = self.time_ref(allow_always=False)
            choices.append((literal, time.t))  # type: ignore[arg-type]
            if self.peek().kind is TokenKind.SEMI:
                self.advance()
                continue
            break
        span = self.end_statement(start)
        self.domain.questions.append(Question(qid, tuple(choices), span))

    def rule_or_priority(self, start: Token) -> None:
        label = self.rule_label()
        tok = self.peek()
        if tok.kind is TokenKind.COLONCOLON:
            self.advance()
            body = self.rule_body()
            verb = self.connective()
            head = self.literal()
            span = self.end_statement(start)
            self.domain.rules.append(Rule(label, verb, tuple(body), head, span))
        elif tok.kind is TokenKind.GTGT:
            self.advance()
            weaker = self.rule_label()
            span = self.end_statement(start)
            self.domain.priorities.append(Priority(label, weaker, span))
        else:
            raise self.error("parse-expected", "expected '::' or '>>' after rule label", tok)

    def rule_label(self) -> RuleLabel:
        tok = self.expect(TokenKind.NAME, "rule label")
        compact = _COMPACT_LABEL_RE.match(tok.text)
        if compact:
            return RuleLabel(RuleKind(compact.group(1)), int(compact.group(2)))
        if tok.text in ("p", "c", "r") and self.peek().kind is TokenKind.LPAREN:
            self.advance()
            index = self.nonneg_int("rule index")
            self.expect(TokenKind.RPAREN, "')'")
            return RuleLabel(RuleKind(tok.text), index)
        raise self.error("parse-label", f"invalid rule label {tok.text!r}", tok)

    def rule_body(self) -> list[Literal]:
        tok = self.peek()
        if tok.kind is TokenKind.NAME and tok.text == "true" and self.peek(1).kind is not TokenKind.LPAREN:
            nxt = self.peek(1)
            if nxt.kind is TokenKind.NAME and nxt.text in _CONNECTIVES:
                self.advance()
                return []
        body = [self.literal()]
        while self.peek().kind is TokenKind.COMMA:
            self.advance()
            body.append(self.literal())
        return body

    def connective(self) -> Connective:
        tok = self.expect(TokenKind.NAME, "'implies', 'causes' or 'precludes'")
        verb = _CONNECTIVES.get(tok.text)
        if verb is None:
            raise self.error(
                "parse-connective", f"expected 'implies', 'causes' or 'precludes', got {tok.text!r}", tok
            )
        return verb

    def session_decl(self, start: Token) -> None:
        self.advance()  # session
        self.expect(TokenKind.LPAREN, "'('")
        self.keyword("s")
        self.expect(TokenKind.LPAREN, "'('")
        session = self.nonneg_int("session number")
        self.expect(TokenKind.RPAREN, "')'")
        self.expect(TokenKind.COMMA, "','")
        self.expect(TokenKind.LBRACK, "'['")
        questions: list[int] = []
        if self.peek().kind is not TokenKind.RBRACK:
            while True:
                self.keyword("q")
                self.expect(TokenKind.LPAREN, "'('")
                questions.append(self.nonneg_int("question number"))
                self.expect(TokenKind.RPAREN, "')'")
                if self.peek().kind is TokenKind.COMMA:
                    self.advance()
                    continue
                break
        self.expect(TokenKind.RBRACK, "']'")
        self.expect(TokenKind.COMMA, "','")
        visible = self.visibility()
        self.expect(TokenKind.RPAREN, "')'")
        span = self.end_statement(start)
        self.domain.sessions.append(SessionDecl(session, tuple(questions), visible, span))

    def visibility(self) -> Visibility:
        tok = self.peek()
        if tok.kind is TokenKind.NAME and tok.text == "all":
            self.advance()
            return Visibility.everything()
        if tok.kind is TokenKind.LBRACK:
            return Visibility.concepts(tuple(self.pattern_list()))
        raise self.error("parse-visibility", "expected 'all' or a concept list", tok)

    def fluents_decl(self, start: Token) -> None:
        self.advance()  # fluents
        self.expect(TokenKind.LPAREN, "'('")
        patterns = self.pattern_list()
        self.expect(TokenKind.RPAREN, "')'")
        span = self.end_statement(start)
        # Later declarations merge into the first; duplicate (functor, arity)
        # patterns are dropped to keep the declaration set canonical.
        merged = list(self.domain.fluents.patterns)
        seen = {_pattern_key(p) for p in merged}
        for p in patterns:
            key = _pattern_key(p)
            if key not in seen:
                seen.add(key)
                merged.append(p)
        kept_span = self.domain.fluents.span if self._fluents_seen else span
        self.domain.fluents = FluentsDecl(tuple(merged), kept_span)
        self._fluents_seen = True

    def pattern_list(self) -> list[Term]:
        self.expect(TokenKind.LBRACK, "'['")
        patterns: list[Term] = []
        if self.peek().kind is not TokenKind.RBRACK:
            while True:
                patterns.append(self.term())
                if self.peek().kind is TokenKind.COMMA:
                    self.advance()
                    continue
                break
        self.expect(TokenKind.RBRACK, "']'")
        return patterns

    # terms, literals, times

    def literal(self) -> Literal:
        positive = True
        tok = self.peek()
        if tok.kind is TokenKind.MINUS:
            minus = self.advance()
            nxt = self.peek()
            if nxt.line != minus.line or nxt.col != minus.col + 1:
                raise self.error("parse-negation", "no whitespace allowed after '-'", minus)
            positive = False
        atom = self.term()
        if isinstance(atom, Variable):
            raise self.error("parse-literal", f"literal cannot be a bare variable {atom.name!r}", tok)
        return Literal(positive, atom)

    def term(self) -> Term:
        tok = self.expect(TokenKind.NAME, "a term")
        if self.peek().kind is TokenKind.LPAREN:
            if is_variable_name(tok.text):
                raise self.error("parse-term", f"variable {tok.text!r} cannot take arguments", tok)
            self.advance()
            args: list[Term] = [self.term()]
            while self.peek().kind is TokenKind.COMMA:
                self.advance()
                args.append(self.term())
            self.expect(TokenKind.RPAREN, "')'")
            return Compound(tok.text, tuple(args))
        if is_variable_name(tok.text):
            return Variable(tok.text)
        return Constant(tok.text)

    def time_ref(self, allow_always: bool) -> TimeRef:
        tok = self.peek()
        if tok.kind is TokenKind.INT:
            self.advance()
            return TimeRef(int(tok.text))
        if tok.kind is TokenKind.NAME and tok.text == "always":
            if not allow_always:
                raise self.error("parse-question-always", "questions require a numeric time-point", tok)
            self.advance()
            return ALWAYS
        raise self.error("parse-time", "expected a time-point", tok)

    def nonneg_int(self, what: str) -> int:
        tok = self.expect(TokenKind.INT, what)
        return int(tok.text)

    def keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind is not TokenKind.NAME or tok.text != word:
            raise self.error("parse-expected", f"expected '{word}'", tok)
        return self.advance()


def _pattern_key(p: Term) -> tuple[str, int]:
    if isinstance(p, Compound):
        return p.functor, len(p.args)
    return str(p), 0
