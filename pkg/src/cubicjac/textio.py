"""Text interchange format for polynomial maps.

::

    # comment
    field: Q          (or F5, F7, ...; optional, default Q)
    nvars: 4          (optional, default max(highest variable index, number of components))
    H1 = 1*x3*x1^2 - 2/3*x2^3
    H2 = 0

Terms are ``c*x1^a*x2^b``; ``*`` between factors and ``^`` before exponents are
required (``^1`` may be omitted).  Lines may also be separated by ``;``.
Components named ``F1, F2, ...`` denote a map F = x + H instead of H.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .fields import QQ, Field, PrimeField, field_from_spec
from .polymap import PolyMap
from .polynomial import Polynomial


@dataclass(frozen=True)
class MapDocument:
    name: str
    map: PolyMap
    field: Field


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x(?P<idx>\d+))|(?P<op>[-+*^/]))")


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", line, col0 + bad)
        start = m.start(m.lastgroup if m.lastgroup != "idx" else "var")
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), col0 + start))
        elif m.group("var") is not None:
            tokens.append(("var", int(m.group("idx")), col0 + m.start("var")))
        else:
            tokens.append(("op", m.group("op"), col0 + m.start("op")))
        pos = m.end()
    tokens.append(("end", None, col0 + len(text.rstrip())))
    return tokens


class _PolyParser:
    def __init__(self, tokens, line, field):
        self.toks = tokens
        self.i = 0
        self.line = line
        self.field = field

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2])

    def expect_num(self, after):
        t = self.peek()
        if t[0] != "num":
            self.error(f"expected a number after {after!r}", self.toks[self.i - 1] if t[0] == "end" else t)
        return int(self.take()[1])

    def parse(self):
        """Returns a list of (coefficient, {var: exp}) terms."""
        terms = []
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            sign = -1 if t[1] == "-" else 1
            self.take()
        terms.append(self.term(sign))
        while self.peek()[0] != "end":
            t = self.take()
            if t[0] != "op" or t[1] not in "+-":
                self.error("expected '+' or '-' between terms", t)
            terms.append(self.term(-1 if t[1] == "-" else 1))
        return terms

    def term(self, sign):
        t = self.peek()
        coeff = self.field(sign)
        exps: dict = {}
        if t[0] == "num":
            num = int(self.take()[1])
            den = 1
            if self.peek()[:2] == ("op", "/"):
                self.take()
                den = self.expect_num("/")
                if den == 0:
                    self.error("zero denominator", self.toks[self.i - 1])
            try:
                coeff = self.field.div(self.field(sign * num), self.field(den))
            except ZeroDivisionError:
                self.error(f"denominator {den} is not invertible in {self.field}", self.toks[self.i - 1])
            if self.peek()[:2] != ("op", "*"):
                return coeff, exps
            self.take()
            self.factor(exps)
        elif t[0] == "var":
            self.factor(exps)
        else:
            self.error("expected a term")
        while self.peek()[:2] == ("op", "*"):
            self.take()
            self.factor(exps)
        return coeff, exps

    def factor(self, exps):
        t = self.peek()
        if t[0] != "var":
            self.error("expected a variable x<i>")
        self.take()
        idx = t[1]
        if idx < 1:
            self.error("variables are numbered from x1", t)
        e = 1
        if self.peek()[:2] == ("op", "^"):
            caret = self.take()
            nxt = self.peek()
            if nxt[0] != "num":
                raise ParseError("expected an exponent after '^'", self.line, caret[2])
            e = int(self.take()[1])
        exps[idx] = exps.get(idx, 0) + e
        t2 = self.peek()
        if t2[0] in ("var", "num"):
            self.error("factors must be separated by '*'", t2)


_LINE = re.compile(r"^\s*(?P<name>[A-Za-z]+)(?P<idx>\d+)\s*=(?P<body>.*)$")
_HEADER = re.compile(r"^\s*(?P<key>field|nvars)\s*:\s*(?P<val>.*?)\s*$")


def parse_document(text: str, field: Field | None = None, nvars: int | None = None) -> MapDocument:
    """Parse a map; ``field`` (e.g. from ``--field``) must agree with any header."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        col = 1
        for chunk in raw.split(";"):
            lines.append((lineno, col, chunk))
            col += len(chunk) + 1
    header_field = None
    header_nvars = None
    raw_components = []
    for lineno, col, chunk in lines:
        body = chunk.split("#", 1)[0]
        if not body.strip():
            continue
        h = _HEADER.match(body)
        if h:
            if h.group("key") == "field":
                try:
                    header_field = field_from_spec(h.group("val"))
                except ParseError as exc:
                    raise ParseError(str(exc), lineno, col) from None
            else:
                if not h.group("val").isdigit():
                    raise ParseError("nvars must be a non-negative integer", lineno, col)
                header_nvars = int(h.group("val"))
            continue
        m = _LINE.match(body)
        if not m:
            raise ParseError("expected 'name<i> = polynomial' or a header", lineno, col)
        raw_components.append((lineno, col + m.start("body"), m.group("name"), int(m.group("idx")), m.group("body")))
    if field is not None and header_field is not None and field != header_field:
        raise ParseError(f"field header {header_field} disagrees with requested field {field}")
    K = header_field or field or QQ
    if not raw_components:
        raise ParseError("no components")
    names = {c[2] for c in raw_components}
    if len(names) != 1:
        raise ParseError(f"mixed component names {sorted(names)}")
    name = names.pop()
    indices = sorted(c[3] for c in raw_components)
    if indices != list(range(1, len(indices) + 1)):
        raise ParseError(f"component indices must be 1..{len(indices)} exactly once")
    parsed = {}
    max_var = 0
    for lineno, col, _, idx, body in raw_components:
        toks = _tokenize(body, lineno, col)
        if toks[0][0] == "end":
            raise ParseError("empty polynomial", lineno, col)
        terms = _PolyParser(toks, lineno, K).parse()
        for _, exps in terms:
            if exps:
                max_var = max(max_var, max(exps))
        parsed[idx] = terms
    m_count = len(parsed)
    n = header_nvars if header_nvars is not None else (nvars if nvars is not None else max(max_var, m_count))
    if max_var > n:
        raise ParseError(f"unknown variable x{max_var} (nvars is {n})")
    comps = []
    for idx in range(1, m_count + 1):
        acc = Polynomial.zero(n, K)
        for coeff, exps in parsed[idx]:
            mono = tuple(exps.get(i + 1, 0) for i in range(n))
            acc = acc + Polynomial({mono: coeff}, n, K)
        comps.append(acc)
    return MapDocument(name, PolyMap(comps, n, K), K)


def parse_map(text: str, field: Field | None = None, nvars: int | None = None) -> PolyMap:
    return parse_document(text, field, nvars).map


def parse_polynomial(text: str, nvars: int, field: Field = QQ) -> Polynomial:
    return parse_map(f"H1 = {text}", field, nvars)[0]


def format_coefficient(c, field: Field) -> str:
    return field.format(c)


def _term_text(mono, coeff, field: Field) -> str:
    parts = [format_coefficient(coeff, field)]
    for i, e in enumerate(mono):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    out = []
    signed = f.field.characteristic == 0
    for k, (mono, c) in enumerate(f.sorted_terms()):
        if signed and c < 0:
            body = _term_text(mono, -c, f.field)
            out.append(("-" if k == 0 else " - ") + body)
        else:
            body = _term_text(mono, c, f.field)
            out.append(body if k == 0 else " + " + body)
    return "".join(out)


def format_map(H: PolyMap, name: str = "H", header: bool = True) -> str:
    lines = []
    if header:
        lines.append(f"field: {H.field.name}")
        lines.append(f"nvars: {H.nvars}")
    for i, c in enumerate(H, start=1):
        lines.append(f"{name}{i} = {format_polynomial(c)}")
    return "\n".join(lines) + "\n"


__all__ = ["MapDocument", "parse_document", "parse_map", "parse_polynomial", "format_polynomial", "format_map", "PrimeField"]
