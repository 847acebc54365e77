"""Parser for the mini-HCL subset used by the pipeline.

Supported: top-level ``resource "TYPE" "NAME" { ... }`` blocks whose bodies
contain literal attributes (string, number, bool, homogeneous list) and
one level of repeatable nested blocks with literal attributes. ``#`` and
``//`` comments are skipped. Everything else (variables, interpolation,
references, providers, deeper nesting) is rejected with a positioned
diagnostic instead of being silently dropped.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from ..errors import HclParseError
from ..rego.ast import Diagnostic

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*")
_NUMBER_RE = re.compile(r"-?[0-9]+(\.[0-9]+)?")


@dataclass(frozen=True)
class NestedBlock:
    name: str
    attributes: dict  # attr -> scalar or list
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class ResourceBlock:
    type: str
    name: str
    attributes: dict
    nested: tuple  # of NestedBlock, source order preserved
    line: int = field(compare=False, default=0)

    @property
    def address(self) -> str:
        return f"{self.type}.{self.name}"


@dataclass(frozen=True)
class InfraFile:
    source: str = field(compare=False)
    blocks: tuple = ()  # of ResourceBlock


@dataclass(frozen=True)
class _Tok:
    kind: str  # IDENT STRING NUMBER BOOL PUNCT NL EOF
    value: object
    line: int
    col: int


def _tokenize(source: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col, i, n = 1, 1, 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            if not toks or toks[-1].kind != "NL":
                toks.append(_Tok("NL", "\n", line, col))
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#" or source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
                col += 1
            continue
        if source.startswith("${", i):
            raise _err(line, col, "unsupported expression: interpolation")
        if ch == '"':
            j = i + 1
            out = []
            while j < n and source[j] != '"':
                if source[j] == "\n":
                    raise _err(line, col, "unterminated string")
                if source[j] == "\\" and j + 1 < n:
                    esc = source[j + 1]
                    out.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(esc, esc))
                    j += 2
                    continue
                if source.startswith("${", j):
                    raise _err(line, col, "unsupported expression: interpolation")
                out.append(source[j])
                j += 1
            if j >= n:
                raise _err(line, col, "unterminated string")
            toks.append(_Tok("STRING", "".join(out), line, col))
            width = j - i + 1
            i = j + 1
            col += width
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and source[i + 1].isdigit()):
            m = _NUMBER_RE.match(source, i)
            text = m.group(0)
            value = float(text) if "." in text else int(text)
            toks.append(_Tok("NUMBER", value, line, col))
            i += len(text)
            col += len(text)
            continue
        m = _IDENT_RE.match(source, i)
        if m:
            text = m.group(0)
            if text in ("true", "false"):
                toks.append(_Tok("BOOL", text == "true", line, col))
            else:
                toks.append(_Tok("IDENT", text, line, col))
            i += len(text)
            col += len(text)
            continue
        if ch in "{}[]=,.()":
            toks.append(_Tok("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        raise _err(line, col, f"unexpected character {ch!r}")
    toks.append(_Tok("EOF", "", line, max(1, col - 1) if col > 1 else 1))
    return toks


def _err(line: int, col: int, message: str) -> HclParseError:
    return HclParseError([Diagnostic(line, col, message)])


class _HclParser:
    def __init__(self, source: str):
        self.source = source
        self.toks = _tokenize(source)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def skip_nl(self) -> None:
        while self.peek().kind == "NL":
            self.next()

    def expect(self, kind: str, value=None, what: str = "") -> _Tok:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind.lower()
            raise _err(tok.line, tok.col, f"expected {want!r} {what}".strip())
        return self.next()

    def parse(self) -> InfraFile:
        blocks: list[ResourceBlock] = []
        while True:
            self.skip_nl()
            tok = self.peek()
            if tok.kind == "EOF":
                break
            if tok.kind == "IDENT" and tok.value == "resource":
                blocks.append(self.parse_resource())
                continue
            if tok.kind == "IDENT":
                raise _err(
                    tok.line, tok.col,
                    f"unsupported top-level block {tok.value!r}: only 'resource' is supported",
                )
            raise _err(tok.line, tok.col, "expected a resource block")
        return InfraFile(source=self.source, blocks=tuple(blocks))

    def parse_resource(self) -> ResourceBlock:
        head = self.next()  # 'resource'
        rtype = self.expect("STRING", what="for the resource type").value
        rname = self.expect("STRING", what="for the resource name").value
        self.expect("PUNCT", "{", "to open the resource block")
        attributes: dict = {}
        nested: list[NestedBlock] = []
        while True:
            self.skip_nl()
            tok = self.peek()
            if tok.kind == "PUNCT" and tok.value == "}":
                self.next()
                break
            if tok.kind == "EOF":
                raise _err(head.line, head.col, "unbalanced braces: resource block never closed")
            if tok.kind != "IDENT":
                raise _err(tok.line, tok.col, "expected an attribute or nested block")
            name_tok = self.next()
            nxt = self.peek()
            if nxt.kind == "PUNCT" and nxt.value == "=":
                self.next()
                value = self.parse_value()
                if name_tok.value in attributes or any(b.name == name_tok.value for b in nested):
                    raise _err(name_tok.line, name_tok.col,
                               f"duplicate attribute {name_tok.value!r}")
                attributes[name_tok.value] = value
            elif nxt.kind == "PUNCT" and nxt.value == "{":
                if name_tok.value in attributes:
                    raise _err(name_tok.line, name_tok.col,
                               f"{name_tok.value!r} is both an attribute and a block")
                nested.append(self.parse_nested(name_tok))
            else:
                raise _err(nxt.line, nxt.col, "expected '=' or '{' after the name")
        return ResourceBlock(
            type=rtype, name=rname, attributes=attributes,
            nested=tuple(nested), line=head.line,
        )

    def parse_nested(self, name_tok: _Tok) -> NestedBlock:
        self.expect("PUNCT", "{", "to open the nested block")
        attributes: dict = {}
        while True:
            self.skip_nl()
            tok = self.peek()
            if tok.kind == "PUNCT" and tok.value == "}":
                self.next()
                break
            if tok.kind == "EOF":
                raise _err(name_tok.line, name_tok.col,
                           "unbalanced braces: nested block never closed")
            if tok.kind != "IDENT":
                raise _err(tok.line, tok.col, "expected an attribute")
            attr_tok = self.next()
            nxt = self.peek()
            if nxt.kind == "PUNCT" and nxt.value == "{":
                raise _err(nxt.line, nxt.col,
                           "blocks nested below one level are unsupported")
            self.expect("PUNCT", "=", f"after attribute {attr_tok.value!r}")
            if attr_tok.value in attributes:
                raise _err(attr_tok.line, attr_tok.col,
                           f"duplicate attribute {attr_tok.value!r}")
            attributes[attr_tok.value] = self.parse_value()
        return NestedBlock(name=name_tok.value, attributes=attributes, line=name_tok.line)

    def parse_value(self):
        tok = self.peek()
        if tok.kind in ("STRING", "NUMBER", "BOOL"):
            self.next()
            return tok.value
        if tok.kind == "PUNCT" and tok.value == "[":
            return self.parse_list()
        if tok.kind == "IDENT":
            raise _err(tok.line, tok.col,
                       f"unsupported expression {tok.value!r}: only literal values are supported")
        raise _err(tok.line, tok.col, "expected a literal value")

    def parse_list(self) -> list:
        open_tok = self.next()
        items: list = []
        kinds: set[str] = set()
        while True:
            self.skip_nl()
            tok = self.peek()
            if tok.kind == "PUNCT" and tok.value == "]":
                self.next()
                break
            if tok.kind == "EOF":
                raise _err(open_tok.line, open_tok.col, "unterminated list")
            if tok.kind not in ("STRING", "NUMBER", "BOOL"):
                if tok.kind == "IDENT":
                    raise _err(tok.line, tok.col,
                               f"unsupported expression {tok.value!r} in list")
                raise _err(tok.line, tok.col, "expected a scalar list element")
            self.next()
            kinds.add("NUMBER" if tok.kind == "NUMBER" else tok.kind)
            if len(kinds) > 1:
                raise _err(tok.line, tok.col, "list elements must share one type")
            items.append(tok.value)
            self.skip_nl()
            if self.peek().kind == "PUNCT" and self.peek().value == ",":
                self.next()
        return items


def parse_hcl_mini(source: str) -> InfraFile:
    """Parse mini-HCL source; raises HclParseError carrying diagnostics."""
    return _HclParser(source).parse()


def check_hcl(source: str) -> list[Diagnostic]:
    try:
        parse_hcl_mini(source)
    except HclParseError as exc:
        return list(exc.diagnostics)
    return []


def render_value(value) -> str:
    """Render an attribute value back to HCL literal syntax."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return json.dumps(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, list):
        return "[" + ", ".join(render_value(v) for v in value) + "]"
    raise TypeError(f"not an HCL value: {value!r}")
