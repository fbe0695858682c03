"""First-order terms, regular type expressions, and substitutions.

Terms are variables, constants (tagged with their literal kind), or compound
applications.  Type expressions mirror the shape of terms: type variables,
base types, bool, applications of declared type symbols, and applications of
term constructors used as type terms.  Both families are immutable and
hashable so they can sit in sets, dict keys, and constraint multisets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union


@dataclass(frozen=True)
class SourceSpan:
    """Position of a parsed node in its source text."""

    source: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.source}:{self.line}:{self.column}"


# --- terms -----------------------------------------------------------------

# Literal kinds a constant can carry.  Atoms cover both plain atoms and the
# list terminator "[]".
CONST_KINDS = ("int", "float", "string", "atom")


@dataclass(frozen=True)
class Var:
    """Term variable, e.g. X."""

    name: str
    span: SourceSpan | None = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Const:
    """Constant: an int/float/string literal or an atom."""

    symbol: Union[int, float, str]
    kind: str
    span: SourceSpan | None = field(default=None, compare=False, repr=False, kw_only=True)

    def __post_init__(self):
        if self.kind not in CONST_KINDS:
            raise ValueError(f"bad constant kind {self.kind!r}")


@dataclass(frozen=True)
class Compound:
    """Function application f(t1, ..., tn) with n >= 1."""

    functor: str
    args: tuple["Term", ...]
    span: SourceSpan | None = field(default=None, compare=False, repr=False, kw_only=True)

    @property
    def arity(self) -> int:
        return len(self.args)


Term = Union[Var, Const, Compound]

NIL = Const("[]", "atom")


def mk_int(n: int) -> Const:
    return Const(n, "int")


def mk_float(x: float) -> Const:
    return Const(x, "float")


def mk_string(s: str) -> Const:
    return Const(s, "string")


def mk_atom(name: str) -> Const:
    return Const(name, "atom")


def cons(head: Term, tail: Term) -> Compound:
    return Compound("cons", (head, tail))


def mk_list(items, tail: Term = NIL) -> Term:
    out = tail
    for item in reversed(list(items)):
        out = cons(item, out)
    return out


# --- type expressions ------------------------------------------------------

BASE_KINDS = ("int", "float", "string", "atom")

# Suffix marking the implicit type symbol that types an undeclared functor.
# The parser never accepts it in identifiers, so these names cannot collide
# with anything a user writes.
FREE_CTOR_SUFFIX = "°"


@dataclass(frozen=True)
class TVar:
    """Type variable."""

    name: str
    span: SourceSpan | None = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Base:
    """Base type: int, float, string, or atom."""

    kind: str
    span: SourceSpan | None = field(default=None, compare=False, repr=False, kw_only=True)

    def __post_init__(self):
        if self.kind not in BASE_KINDS:
            raise ValueError(f"bad base type {self.kind!r}")


@dataclass(frozen=True)
class Bool:
    """The type of equations and predicate applications."""

    span: SourceSpan | None = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class SymApp:
    """Application of a declared type symbol, e.g. list(int)."""

    symbol: str
    args: tuple["TypeExpr", ...] = ()
    span: SourceSpan | None = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class CtorApp:
    """A term constructor used as a type term, e.g. cons(int, list(int)) or []."""

    ctor: str
    args: tuple["TypeExpr", ...] = ()
    span: SourceSpan | None = field(default=None, compare=False, repr=False, kw_only=True)


TypeExpr = Union[TVar, Base, Bool, SymApp, CtorApp]

INT = Base("int")
FLOAT = Base("float")
STRING = Base("string")
ATOM = Base("atom")
BOOL = Bool()


def free_ctor_symbol(functor: str) -> str:
    return functor + FREE_CTOR_SUFFIX


def free_ctor_functor(symbol: str) -> str | None:
    """Inverse of free_ctor_symbol; None if the name is not of that shape."""
    if symbol.endswith(FREE_CTOR_SUFFIX):
        return symbol[: -len(FREE_CTOR_SUFFIX)]
    return None


@dataclass(frozen=True)
class FuncType:
    """Signature body for a function or predicate symbol: domain -> codomain."""

    domain: tuple[TypeExpr, ...]
    codomain: TypeExpr

    def __post_init__(self):
        if len(self.domain) < 1:
            raise ValueError("function types need at least one domain type")


@dataclass(frozen=True)
class TypeScheme:
    """Universally quantified type: generics are the variables of the body."""

    generics: tuple[str, ...]
    body: Union[TypeExpr, FuncType]

    def __post_init__(self):
        if len(set(self.generics)) != len(self.generics):
            raise ValueError("duplicate generic variable in scheme")


# --- substitutions ---------------------------------------------------------

# A term substitution maps variable names to terms; a type substitution maps
# type-variable names to type expressions.  Both are used as plain dicts.
Subst = dict[str, Term]
TypeSubst = dict[str, TypeExpr]


def apply_subst(subst: Subst, term: Term) -> Term:
    """Replace every bound variable in `term`; unbound variables stay."""
    if isinstance(term, Var):
        return subst.get(term.name, term)
    if isinstance(term, Const):
        return term
    return Compound(term.functor, tuple(apply_subst(subst, a) for a in term.args))


def apply_type_subst(subst: TypeSubst, ty: TypeExpr) -> TypeExpr:
    if isinstance(ty, TVar):
        return subst.get(ty.name, ty)
    if isinstance(ty, (Base, Bool)):
        return ty
    if isinstance(ty, SymApp):
        return SymApp(ty.symbol, tuple(apply_type_subst(subst, a) for a in ty.args))
    return CtorApp(ty.ctor, tuple(apply_type_subst(subst, a) for a in ty.args))


def apply_type_subst_func(subst: TypeSubst, ft: FuncType) -> FuncType:
    return FuncType(
        tuple(apply_type_subst(subst, d) for d in ft.domain),
        apply_type_subst(subst, ft.codomain),
    )


def term_vars(term: Term) -> Iterator[str]:
    """Yield variable names in first-occurrence order (with repeats)."""
    if isinstance(term, Var):
        yield term.name
    elif isinstance(term, Compound):
        for arg in term.args:
            yield from term_vars(arg)


def free_vars(term: Term) -> list[str]:
    """Distinct variable names of a term in first-occurrence order."""
    seen: dict[str, None] = {}
    for name in term_vars(term):
        seen.setdefault(name)
    return list(seen)


def occurs_in(name: str, term: Term) -> bool:
    return any(v == name for v in term_vars(term))


def type_vars(ty: Union[TypeExpr, FuncType]) -> Iterator[str]:
    if isinstance(ty, TVar):
        yield ty.name
    elif isinstance(ty, (SymApp, CtorApp)):
        for arg in ty.args:
            yield from type_vars(arg)
    elif isinstance(ty, FuncType):
        for d in ty.domain:
            yield from type_vars(d)
        yield from type_vars(ty.codomain)


def free_type_vars(ty: Union[TypeExpr, FuncType]) -> list[str]:
    seen: dict[str, None] = {}
    for name in type_vars(ty):
        seen.setdefault(name)
    return list(seen)


def type_occurs_in(name: str, ty: TypeExpr) -> bool:
    return any(v == name for v in type_vars(ty))


def term_size(term: Term) -> int:
    """Node count; used for rewrite budgets."""
    if isinstance(term, Compound):
        return 1 + sum(term_size(a) for a in term.args)
    return 1


def term_depth(term: Term) -> int:
    """Constructor-application depth; leaves sit at 0."""
    if isinstance(term, Compound):
        return 1 + max(term_depth(a) for a in term.args)
    return 0


def type_size(ty: TypeExpr) -> int:
    if isinstance(ty, (SymApp, CtorApp)):
        return 1 + sum(type_size(a) for a in ty.args)
    return 1
