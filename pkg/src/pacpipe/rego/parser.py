"""Recursive-descent parser for the Rego subset.

Grammar (newline- or ``;``-separated body expressions):

    policy   := "package" dotted-name (import-line | rule)*
    import   := "import" dotted-name          # only rego.v1 / future.keywords*
    rule     := NAME "[" term "]" "if" "{" body "}"
              | NAME "contains" term "if" "{" body "}"
    body     := expr ((NEWLINE | ";") expr)*
    expr     := "not" simple-expr | simple-expr | VAR ":=" term
    simple   := term (CMP term)? | call | ref
    term     := STRING | NUMBER | BOOL | array | call | ref | VAR | "_"
    ref      := ("input" | VAR) ("." IDENT | "[" key "]")*
    key      := "_" | STRING | INT | VAR

Anything outside the subset produces an explicit "unsupported" diagnostic;
nothing is silently accepted. Parsing stops at the first error, so a failed
parse carries exactly one diagnostic.

A semantic pass enforces left-to-right variable safety: a variable must be
bound (by ``:=`` or by appearing in a reference bracket) before it is used
as a bare operand, inside ``not``, as a reference root, or in the rule's
message term.
"""

from __future__ import annotations

from . import ast
from .ast import (
    ArrayLit, AssignExpr, BoolLit, Call, ComparisonExpr, DenyRule,
    Diagnostic, IndexSeg, KeySeg, NotExpr, NumberLit, PolicyDocument, Pos,
    Ref, StringLit, TruthyExpr, Var, VarSeg, WildSeg,
)
from .lexer import EOF, IDENT, NEWLINE, NUMBER, PUNCT, STRING, Token, tokenize
from ..errors import PolicyParseError

_ACCEPTED_IMPORTS_PREFIXES = ("rego.v1", "future.keywords")

# Constructs we recognize well enough to name in a diagnostic.
_KNOWN_UNSUPPORTED_KEYWORDS = {
    "some", "every", "default", "else", "with", "as", "in",
}


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.i = 0

    # --- token helpers ---

    def peek(self, offset: int = 0) -> Token:
        j = min(self.i + offset, len(self.tokens) - 1)
        return self.tokens[j]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != EOF:
            self.i += 1
        return tok

    def at_punct(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == PUNCT and tok.value == value

    def at_ident(self, value: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == IDENT and (value is None or tok.value == value)

    def expect_punct(self, value: str, what: str) -> Token:
        tok = self.peek()
        if not self.at_punct(value):
            raise self.error(tok.pos, f"expected {value!r} {what}, found {_describe(tok)}")
        return self.next()

    def skip_newlines(self) -> None:
        while self.peek().kind == NEWLINE:
            self.next()

    def error(self, pos: Pos, message: str) -> PolicyParseError:
        return PolicyParseError([Diagnostic(pos.line, pos.col, message)])

    # --- grammar ---

    def parse(self) -> PolicyDocument:
        self.skip_newlines()
        tok = self.peek()
        if not self.at_ident("package"):
            raise self.error(tok.pos, "missing package declaration")
        self.next()
        package = self.parse_dotted_name("package name")
        rules: list[DenyRule] = []
        while True:
            self.skip_newlines()
            tok = self.peek()
            if tok.kind == EOF:
                break
            if self.at_ident("import"):
                self.parse_import()
                continue
            if tok.kind == IDENT and tok.value in _KNOWN_UNSUPPORTED_KEYWORDS:
                raise self.error(tok.pos, f"unsupported construct: {tok.value!r}")
            if tok.kind != IDENT:
                raise self.error(tok.pos, f"expected a rule, found {_describe(tok)}")
            rules.append(self.parse_rule())
        doc = PolicyDocument(source=self.source, package_name=package, rules=tuple(rules))
        _validate(doc)
        return doc

    def parse_dotted_name(self, what: str) -> str:
        tok = self.peek()
        if tok.kind != IDENT:
            raise self.error(tok.pos, f"expected {what}, found {_describe(tok)}")
        parts = [self.next().value]
        while self.at_punct("."):
            self.next()
            tok = self.peek()
            if tok.kind != IDENT:
                raise self.error(tok.pos, f"expected identifier after '.' in {what}")
            parts.append(self.next().value)
        return ".".join(parts)

    def parse_import(self) -> None:
        tok = self.next()  # "import"
        path = self.parse_dotted_name("import path")
        if not any(path == p or path.startswith(p + ".") for p in _ACCEPTED_IMPORTS_PREFIXES):
            raise self.error(
                tok.pos,
                f"unsupported import {path!r}: only rego.v1 and future.keywords are accepted",
            )
        # accepted future-keyword imports carry no semantics here

    def parse_rule(self) -> DenyRule:
        name_tok = self.next()
        head_name = name_tok.value
        if self.at_ident("contains"):
            self.next()
            message = self.parse_term()
        elif self.at_punct("["):
            self.next()
            message = self.parse_term()
            self.expect_punct("]", "after rule message term")
        elif self.at_punct("(") :
            raise self.error(name_tok.pos, "unsupported construct: function definitions")
        else:
            tok = self.peek()
            raise self.error(
                tok.pos,
                f"expected '[' or 'contains' in rule head, found {_describe(tok)}",
            )
        if not isinstance(message, (Var, StringLit, NumberLit, BoolLit)):
            raise self.error(
                _term_pos(message), "rule message must be a variable or a literal"
            )
        tok = self.peek()
        if self.at_punct("{"):
            raise self.error(
                tok.pos,
                "legacy rule syntax without 'if' is unsupported; write NAME[msg] if { ... }",
            )
        if not self.at_ident("if"):
            raise self.error(tok.pos, f"expected 'if' before rule body, found {_describe(tok)}")
        self.next()
        self.expect_punct("{", "to open the rule body")
        body = self.parse_body()
        if not body:
            raise self.error(self.peek().pos, "rule body must contain at least one expression")
        self.expect_punct("}", "to close the rule body")
        return DenyRule(
            head_name=head_name, message=message, body=tuple(body), pos=_pos(name_tok)
        )

    def parse_body(self) -> list:
        exprs: list = []
        while True:
            while self.peek().kind == NEWLINE or self.at_punct(";"):
                self.next()
            if self.at_punct("}") or self.peek().kind == EOF:
                return exprs
            exprs.append(self.parse_expr())

    def parse_expr(self):
        tok = self.peek()
        if tok.kind == IDENT and tok.value in _KNOWN_UNSUPPORTED_KEYWORDS:
            raise self.error(tok.pos, f"unsupported construct: {tok.value!r}")
        if self.at_ident("not"):
            not_tok = self.next()
            if self.at_ident("not"):
                raise self.error(self.peek().pos, "nested 'not' is unsupported")
            inner = self.parse_simple_expr()
            if isinstance(inner, AssignExpr):
                raise self.error(_pos(not_tok), "cannot negate an assignment")
            return NotExpr(inner=inner, pos=_pos(not_tok))
        # assignment requires VAR := ...
        if tok.kind == IDENT and self.peek(1).kind == PUNCT and self.peek(1).value == ":=":
            if tok.value == "_":
                raise self.error(tok.pos, "cannot assign to wildcard '_'")
            self.next()
            self.next()
            value = self.parse_term()
            self._end_of_expr()
            return AssignExpr(target=tok.value, value=value, pos=_pos(tok))
        expr = self.parse_simple_expr()
        self._end_of_expr()
        return expr

    def parse_simple_expr(self):
        left = self.parse_term()
        tok = self.peek()
        if tok.kind == PUNCT and tok.value == ":=":
            raise self.error(tok.pos, "':=' target must be a plain variable")
        if tok.kind == PUNCT and tok.value == "=":
            raise self.error(tok.pos, "unification '=' is unsupported; use ':=' or '=='")
        if tok.kind == PUNCT and tok.value in ast.COMPARISON_OPS:
            op_tok = self.next()
            right = self.parse_term()
            return ComparisonExpr(op=op_tok.value, left=left, right=right, pos=_pos(op_tok))
        if isinstance(left, (Ref, Var, Call)):
            return TruthyExpr(term=left, pos=_term_pos(left))
        raise self.error(
            _term_pos(left), "a literal is not a valid expression on its own"
        )

    def _end_of_expr(self) -> None:
        tok = self.peek()
        if tok.kind in (NEWLINE, EOF):
            return
        if tok.kind == PUNCT and tok.value in (";", "}"):
            return
        raise self.error(tok.pos, f"expected end of expression, found {_describe(tok)}")

    # --- terms ---

    def parse_term(self):
        tok = self.peek()
        if tok.kind == STRING:
            self.next()
            return StringLit(value=tok.value, pos=_pos(tok))
        if tok.kind == NUMBER:
            self.next()
            return NumberLit(value=tok.number, pos=_pos(tok))
        if self.at_punct("["):
            return self.parse_array_literal()
        if tok.kind == IDENT:
            if tok.value in ("true", "false"):
                self.next()
                return BoolLit(value=tok.value == "true", pos=_pos(tok))
            if tok.value == "null":
                raise self.error(tok.pos, "unsupported literal 'null'")
            if tok.value in _KNOWN_UNSUPPORTED_KEYWORDS:
                raise self.error(tok.pos, f"unsupported construct: {tok.value!r}")
            if tok.value == "_":
                raise self.error(
                    tok.pos, "wildcard '_' is only supported inside reference brackets"
                )
            return self.parse_ref_or_call()
        raise self.error(tok.pos, f"expected a term, found {_describe(tok)}")

    def parse_array_literal(self) -> ArrayLit:
        open_tok = self.next()
        items: list = []
        self.skip_newlines()
        if self.at_punct("]"):
            self.next()
            return ArrayLit(items=(), pos=_pos(open_tok))
        while True:
            item = self.parse_term()
            if not isinstance(item, (StringLit, NumberLit, BoolLit, ArrayLit)):
                raise self.error(
                    _term_pos(item), "array literals may only contain literals"
                )
            items.append(item)
            self.skip_newlines()
            if self.at_punct(","):
                self.next()
                self.skip_newlines()
                if self.at_punct("]"):  # trailing comma
                    self.next()
                    break
                continue
            self.expect_punct("]", "to close the array literal")
            break
        return ArrayLit(items=tuple(items), pos=_pos(open_tok))

    def parse_ref_or_call(self):
        root_tok = self.next()
        # builtin call?
        if self.at_punct("("):
            if root_tok.value in ast.BUILTINS:
                return self.parse_call(root_tok)
            raise self.error(
                root_tok.pos, f"unsupported builtin {root_tok.value!r}"
            )
        segments: list = []
        dotted = [root_tok.value]
        while True:
            if self.at_punct("."):
                self.next()
                tok = self.peek()
                if tok.kind != IDENT:
                    raise self.error(tok.pos, "expected field name after '.'")
                self.next()
                segments.append(KeySeg(key=tok.value))
                dotted.append(tok.value)
                continue
            if self.at_punct("["):
                self.next()
                segments.append(self.parse_bracket_segment())
                self.expect_punct("]", "to close the reference bracket")
                dotted.append("[]")
                continue
            break
        if self.at_punct("("):
            raise self.error(
                root_tok.pos, f"unsupported builtin {'.'.join(dotted)!r}"
            )
        if not segments:
            return Var(name=root_tok.value, pos=_pos(root_tok))
        return Ref(root=root_tok.value, segments=tuple(segments), pos=_pos(root_tok))

    def parse_bracket_segment(self):
        tok = self.peek()
        if tok.kind == STRING:
            self.next()
            return KeySeg(key=tok.value)
        if tok.kind == NUMBER:
            self.next()
            if isinstance(tok.number, float) and not float(tok.number).is_integer():
                raise self.error(tok.pos, "array index must be an integer")
            if tok.number < 0:
                raise self.error(tok.pos, "array index must be non-negative")
            return IndexSeg(index=int(tok.number))
        if tok.kind == IDENT:
            self.next()
            if tok.value == "_":
                return WildSeg()
            return VarSeg(name=tok.value)
        raise self.error(tok.pos, f"expected an index, key, or variable, found {_describe(tok)}")

    def parse_call(self, func_tok: Token) -> Call:
        self.expect_punct("(", "to open the call")
        args: list = []
        self.skip_newlines()
        if not self.at_punct(")"):
            while True:
                arg = self.parse_term()
                if isinstance(arg, Call):
                    raise self.error(_term_pos(arg), "nested builtin calls are unsupported")
                args.append(arg)
                self.skip_newlines()
                if self.at_punct(","):
                    self.next()
                    self.skip_newlines()
                    continue
                break
        self.expect_punct(")", "to close the call")
        arity = {"count": 1, "contains": 2}[func_tok.value]
        if len(args) != arity:
            raise self.error(
                func_tok.pos,
                f"{func_tok.value} takes {arity} argument(s), got {len(args)}",
            )
        return Call(func=func_tok.value, args=tuple(args), pos=_pos(func_tok))


def _pos(tok: Token) -> Pos:
    return tok.pos


def _term_pos(term) -> Pos:
    return getattr(term, "pos", Pos(1, 1))


def _describe(tok: Token) -> str:
    if tok.kind == EOF:
        return "end of input"
    if tok.kind == NEWLINE:
        return "end of line"
    return repr(tok.value)


# --- semantic validation (left-to-right variable safety) ------------------


def _validate(doc: PolicyDocument) -> None:
    for rule in doc.rules:
        _validate_rule(rule)


def _validate_rule(rule: DenyRule) -> None:
    bound: set[str] = set()
    for expr in rule.body:
        if isinstance(expr, AssignExpr):
            if expr.target in bound:
                raise _semantic_error(
                    expr.pos, f"variable {expr.target!r} already assigned"
                )
            _check_term(expr.value, bound, binding_allowed=True, pos=expr.pos)
            bound.add(expr.target)
        elif isinstance(expr, ComparisonExpr):
            _check_term(expr.left, bound, binding_allowed=True, pos=expr.pos)
            _check_term(expr.right, bound, binding_allowed=True, pos=expr.pos)
        elif isinstance(expr, TruthyExpr):
            _check_term(expr.term, bound, binding_allowed=True, pos=expr.pos)
        elif isinstance(expr, NotExpr):
            inner = expr.inner
            if isinstance(inner, ComparisonExpr):
                _check_term(inner.left, bound, binding_allowed=False, pos=expr.pos)
                _check_term(inner.right, bound, binding_allowed=False, pos=expr.pos)
            else:
                _check_term(inner.term, bound, binding_allowed=False, pos=expr.pos)
        else:  # pragma: no cover - parser produces only the above
            raise _semantic_error(rule.pos, "unknown expression kind")
    msg = rule.message
    if isinstance(msg, Var) and msg.name not in bound:
        raise _semantic_error(
            msg.pos, f"unbound message variable {msg.name!r}"
        )


def _check_term(term, bound: set[str], binding_allowed: bool, pos: Pos) -> None:
    """Walk a term, binding bracket variables or flagging unsafe ones.

    Inside ``not`` (binding_allowed=False) named variables must already be
    bound; wildcards stay existential within the negation.
    """
    if isinstance(term, Var):
        if term.name not in bound:
            raise _semantic_error(
                term.pos, f"unsafe variable {term.name!r}: not bound by an earlier expression"
            )
    elif isinstance(term, Ref):
        if term.root != "input" and term.root not in bound:
            raise _semantic_error(
                term.pos,
                f"reference root {term.root!r} must be 'input' or a bound variable",
            )
        for seg in term.segments:
            if isinstance(seg, VarSeg) and seg.name not in bound:
                if not binding_allowed:
                    raise _semantic_error(
                        term.pos,
                        f"variable {seg.name!r} inside 'not' must be bound earlier",
                    )
                bound.add(seg.name)
    elif isinstance(term, Call):
        for arg in term.args:
            _check_term(arg, bound, binding_allowed, pos)
    # literals and wildcards need no checks


def _semantic_error(pos: Pos, message: str) -> PolicyParseError:
    return PolicyParseError([Diagnostic(pos.line, pos.col, message)])


# --- public API ------------------------------------------------------------


def parse_policy(source: str) -> PolicyDocument:
    """Parse policy source; raises PolicyParseError carrying diagnostics."""
    return _Parser(source).parse()


def check_syntax(source: str) -> list[Diagnostic]:
    """Return [] iff the source parses; otherwise the parse diagnostics."""
    try:
        parse_policy(source)
    except PolicyParseError as exc:
        return list(exc.diagnostics)
    return []
