"""Textual syntax for terms, queries, programs, type definitions, signatures.

Terms use Prolog-like notation:

    variables   X, Rest, _ (each _ is a distinct variable)
    constants   42, -3, 1.5, "text", atom, 'quoted atom', []
    compounds   f(X, g(1)), X + 1, [1, 2 | T]

[a, b | T] is sugar for cons(a, cons(b, T)); the functor '.'/2 is accepted as
an alias for cons on input.  `=` and `is` are goal-level infix operators; an
`=` nested inside a term argument is a parse error.

Type definitions:       tsym(A, B) --> ctor1 + ctor2(A, list(B)).
Signature declarations: length : list(A) * int -> bool.
Context declarations:   X : list(int).

Clause terminators are dots followed by layout or end of input, so floats and
the cons alias do not collide with them.  Comments run from % to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .syntax import (
    BASE_KINDS,
    Base,
    Bool,
    Compound,
    Const,
    CtorApp,
    SourceSpan,
    SymApp,
    TVar,
    Term,
    TypeExpr,
    TypeScheme,
    FuncType,
    Var,
    free_type_vars,
    mk_list,
)
from .typedefs import BUILTIN_LIST, SignatureEnv, TypeDef, TypeDefSet

_TOKEN_TABLE = [
    ("WS", r"[ \t\r\n]+"),
    ("COMMENT", r"%[^\n]*"),
    ("ARROW2", r"-->"),
    ("ARROW", r"->"),
    ("NECK", r":-"),
    ("QNECK", r"\?-"),
    ("FLOAT", r"-?\d+\.\d+(?:[eE][+-]?\d+)?"),
    ("INT", r"-?\d+"),
    ("STRING", r'"(?:[^"\\\n]|\\.)*"'),
    ("QATOM", r"'(?:[^'\\\n]|\\.)*'"),
    ("VAR", r"_#\d+|[A-Z_][A-Za-z0-9_]*"),
    ("ATOM", r"[a-z][A-Za-z0-9_]*"),
    ("DOT", r"\.(?=[ \t\r\n%]|$)"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("LBRACK", r"\["),
    ("RBRACK", r"\]"),
    ("COMMA", r","),
    ("PIPE", r"\|"),
    ("PLUS", r"\+"),
    ("STAR", r"\*"),
    ("EQ", r"="),
    ("COLON", r":"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{k}>{p})" for k, p in _TOKEN_TABLE))

_ESCAPES = {"\\\\": "\\", "\\'": "'", '\\"': '"', "\\n": "\n", "\\t": "\t"}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    span: SourceSpan


def _unescape(body: str) -> str:
    return re.sub(r"\\.", lambda m: _ESCAPES.get(m.group(0), m.group(0)[1]), body)


def tokenize(text: str, source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", SourceSpan(source, line, col)
            )
        kind = m.lastgroup
        value = m.group(0)
        if kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, value, SourceSpan(source, line, col)))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(Token("EOF", "", SourceSpan(source, line, col)))
    return tokens


class _Parser:
    def __init__(self, text: str, source: str):
        self.tokens = tokenize(text, source)
        self.pos = 0
        self.anon_count = 0

    # -- token plumbing --

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (value is None or tok.value == value)

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            shown = tok.value or "end of input"
            raise ParseError(f"expected {what or kind}, found {shown!r}", tok.span)
        return self.advance()

    def fail(self, message: str):
        raise ParseError(message, self.peek().span)

    # -- terms --

    def term(self) -> Term:
        left = self.primary()
        while self.at("PLUS"):
            self.advance()
            right = self.primary()
            left = Compound("+", (left, right))
        return left

    def primary(self) -> Term:
        tok = self.peek()
        if tok.kind == "VAR":
            self.advance()
            name = tok.value
            if name == "_":
                self.anon_count += 1
                name = f"_#{self.anon_count}"
            return Var(name, span=tok.span)
        if tok.kind == "INT":
            self.advance()
            return Const(int(tok.value), "int", span=tok.span)
        if tok.kind == "FLOAT":
            self.advance()
            return Const(float(tok.value), "float", span=tok.span)
        if tok.kind == "STRING":
            self.advance()
            return Const(_unescape(tok.value[1:-1]), "string", span=tok.span)
        if tok.kind in ("ATOM", "QATOM"):
            self.advance()
            name = tok.value if tok.kind == "ATOM" else _unescape(tok.value[1:-1])
            if self.at("LPAREN"):
                args = self.paren_args(self.term)
                if name == "." and len(args) == 2:
                    name = "cons"
                return Compound(name, args, span=tok.span)
            return Const(name, "atom", span=tok.span)
        if tok.kind == "LBRACK":
            return self.list_term()
        if tok.kind == "LPAREN":
            self.advance()
            inner = self.term()
            self.expect("RPAREN")
            return inner
        self.fail(f"expected a term, found {tok.value!r}" if tok.value else "unexpected end of input")

    def paren_args(self, parse_one) -> tuple:
        self.expect("LPAREN")
        args = [parse_one()]
        while self.at("COMMA"):
            self.advance()
            args.append(parse_one())
        self.expect("RPAREN")
        return tuple(args)

    def list_term(self) -> Term:
        open_tok = self.expect("LBRACK")
        if self.at("RBRACK"):
            self.advance()
            return Const("[]", "atom", span=open_tok.span)
        items = [self.term()]
        while self.at("COMMA"):
            self.advance()
            items.append(self.term())
        tail: Term = Const("[]", "atom")
        if self.at("PIPE"):
            self.advance()
            tail = self.term()
        self.expect("RBRACK")
        return mk_list(items, tail)

    # -- goals, queries, clauses --

    def goal(self) -> Term:
        left = self.term()
        if self.at("EQ"):
            self.advance()
            right = self.term()
            return Compound("=", (left, right))
        if self.at("ATOM", "is"):
            self.advance()
            right = self.term()
            return Compound("is", (left, right))
        if isinstance(left, Var):
            self.fail("a goal cannot be a bare variable")
        if isinstance(left, Const) and left.kind != "atom":
            self.fail("a goal cannot be a literal")
        return left

    def goals(self) -> tuple[Term, ...]:
        out = [self.goal()]
        while self.at("COMMA"):
            self.advance()
            out.append(self.goal())
        return tuple(out)

    def clause(self):
        from .resolution import Clause

        head = self.term()
        if isinstance(head, Var) or (isinstance(head, Const) and head.kind != "atom"):
            self.fail("a clause head must be an atom or compound")
        if isinstance(head, Compound) and head.functor == "=":
            self.fail("the equality predicate cannot be redefined")
        body: tuple[Term, ...] = ()
        if self.at("NECK"):
            self.advance()
            body = self.goals()
        self.expect("DOT", "'.' at end of clause")
        return Clause(head, body)

    # -- types --

    def raw_type(self) -> TypeExpr:
        tok = self.peek()
        if tok.kind == "VAR":
            self.advance()
            if tok.value == "_":
                self.fail("anonymous variables are not allowed in types")
            return TVar(tok.value, span=tok.span)
        if tok.kind in ("ATOM", "QATOM"):
            self.advance()
            name = tok.value if tok.kind == "ATOM" else _unescape(tok.value[1:-1])
            args: tuple[TypeExpr, ...] = ()
            if self.at("LPAREN"):
                args = self.paren_args(self.raw_type)
            # resolved into Base/Bool/SymApp/CtorApp after all heads are known
            return CtorApp(name, args, span=tok.span)
        if tok.kind == "LBRACK":
            self.advance()
            self.expect("RBRACK")
            return CtorApp("[]", span=tok.span)
        self.fail(
            f"expected a type, found {tok.value!r}" if tok.value else "unexpected end of input"
        )

    def typedef(self) -> TypeDef:
        head = self.expect("ATOM", "type symbol")
        params: list[str] = []
        if self.at("LPAREN"):
            self.expect("LPAREN")
            params.append(self.expect("VAR", "type parameter").value)
            while self.at("COMMA"):
                self.advance()
                params.append(self.expect("VAR", "type parameter").value)
            self.expect("RPAREN")
        self.expect("ARROW2", "'-->'")
        summands = [self.raw_type()]
        while self.at("PLUS"):
            self.advance()
            summands.append(self.raw_type())
        self.expect("DOT", "'.' at end of definition")
        return TypeDef(head.value, tuple(params), tuple(summands))


_RESERVED_TYPE_NAMES = set(BASE_KINDS) | {"bool"}


def _resolve_type(ty: TypeExpr, symbols: dict[str, int]) -> TypeExpr:
    """Turn raw constructor applications into base/bool/symbol nodes by name."""
    if isinstance(ty, TVar):
        return ty
    assert isinstance(ty, CtorApp)
    args = tuple(_resolve_type(a, symbols) for a in ty.args)
    if ty.ctor == "bool":
        if args:
            raise ParseError("bool takes no arguments", ty.span)
        return Bool(span=ty.span)
    if ty.ctor in BASE_KINDS:
        if args:
            raise ParseError(f"{ty.ctor} takes no arguments", ty.span)
        return Base(ty.ctor, span=ty.span)
    if ty.ctor in symbols:
        return SymApp(ty.ctor, args, span=ty.span)
    return CtorApp(ty.ctor, args, span=ty.span)


def _builtin_symbols() -> dict[str, int]:
    return {"list": 1}


# --- public entry points -----------------------------------------------------


def parse_term(text: str, source: str = "<term>") -> Term:
    p = _Parser(text, source)
    term = p.term()
    if p.at("DOT"):
        p.advance()
    p.expect("EOF", "end of input")
    return term


def parse_equation(text: str, source: str = "<equation>"):
    """Parse `t1 = t2` into a pair, or a bare term into the term itself."""
    p = _Parser(text, source)
    left = p.term()
    if p.at("EQ"):
        p.advance()
        right = p.term()
        if p.at("DOT"):
            p.advance()
        p.expect("EOF", "end of input")
        return (left, right)
    if p.at("DOT"):
        p.advance()
    p.expect("EOF", "end of input")
    return left


def parse_query(text: str, source: str = "<query>") -> tuple[Term, ...]:
    p = _Parser(text, source)
    if p.at("QNECK"):
        p.advance()
    goals = p.goals()
    if p.at("DOT"):
        p.advance()
    p.expect("EOF", "end of input")
    return goals


def parse_program(text: str, source: str = "<program>"):
    p = _Parser(text, source)
    clauses = []
    while not p.at("EOF"):
        clauses.append(p.clause())
    return tuple(clauses)


def parse_typedefs(text: str, source: str = "<types>") -> list[TypeDef]:
    """Parse definitions; summand names resolve against the file's own heads
    plus the built-in list.  Validation happens separately in typedefs.validate.
    """
    p = _Parser(text, source)
    raw_defs: list[TypeDef] = []
    while not p.at("EOF"):
        raw_defs.append(p.typedef())
    symbols = _builtin_symbols()
    for d in raw_defs:
        if d.symbol in _RESERVED_TYPE_NAMES:
            raise ParseError(f"{d.symbol} is a reserved type name")
        symbols[d.symbol] = len(d.params)
    resolved = []
    for d in raw_defs:
        resolved.append(
            TypeDef(
                d.symbol,
                d.params,
                tuple(_resolve_type(s, symbols) for s in d.summands),
            )
        )
    return resolved


def parse_type(text: str, defs: TypeDefSet | None = None, source: str = "<type>") -> TypeExpr:
    p = _Parser(text, source)
    raw = p.raw_type()
    if p.at("DOT"):
        p.advance()
    p.expect("EOF", "end of input")
    symbols = _builtin_symbols()
    if defs is not None:
        for d in defs.defs():
            symbols[d.symbol] = len(d.params)
    return _resolve_type(raw, symbols)


def _scheme_from_parts(domain, codomain) -> TypeScheme:
    body = FuncType(tuple(domain), codomain) if domain else codomain
    return TypeScheme(tuple(free_type_vars(body)), body)


def parse_signatures(
    text: str, defs: TypeDefSet | None = None, source: str = "<signatures>"
) -> SignatureEnv:
    """Parse override declarations into a signature container.

    `p : t1 * ... * tn -> bool.` declares a predicate, any other codomain a
    function, and `k : t.` a constant.
    """
    p = _Parser(text, source)
    symbols = _builtin_symbols()
    if defs is not None:
        for d in defs.defs():
            symbols[d.symbol] = len(d.params)
    constants: dict[str, TypeScheme] = {}
    functions: dict[tuple[str, int], TypeScheme] = {}
    predicates: dict[tuple[str, int], TypeScheme] = {}
    while not p.at("EOF"):
        tok = p.peek()
        if tok.kind not in ("ATOM", "QATOM"):
            p.fail("expected a symbol name")
        p.advance()
        name = tok.value if tok.kind == "ATOM" else _unescape(tok.value[1:-1])
        p.expect("COLON", "':'")
        parts = [_resolve_type(p.raw_type(), symbols)]
        while p.at("STAR"):
            p.advance()
            parts.append(_resolve_type(p.raw_type(), symbols))
        codomain: TypeExpr | None = None
        if p.at("ARROW"):
            p.advance()
            codomain = _resolve_type(p.raw_type(), symbols)
        p.expect("DOT", "'.' at end of declaration")
        if codomain is None:
            if len(parts) != 1:
                raise ParseError("a constant declaration takes a single type", tok.span)
            constants[name] = _scheme_from_parts((), parts[0])
        elif isinstance(codomain, Bool):
            predicates[(name, len(parts))] = _scheme_from_parts(parts, codomain)
        else:
            functions[(name, len(parts))] = _scheme_from_parts(parts, codomain)
    return SignatureEnv(constants=constants, functions=functions, predicates=predicates)


def parse_context(
    text: str, defs: TypeDefSet | None = None, source: str = "<context>"
) -> dict[str, TypeExpr]:
    """Parse `X : type.` lines into a typing context."""
    p = _Parser(text, source)
    symbols = _builtin_symbols()
    if defs is not None:
        for d in defs.defs():
            symbols[d.symbol] = len(d.params)
    ctx: dict[str, TypeExpr] = {}
    while not p.at("EOF"):
        var = p.expect("VAR", "variable name")
        p.expect("COLON", "':'")
        ty = _resolve_type(p.raw_type(), symbols)
        p.expect("DOT", "'.' at end of entry")
        ctx[var.value] = ty
    return ctx
