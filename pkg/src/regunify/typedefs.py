"""Regular type definitions and the signature environment derived from them.

A definition names a type symbol over distinct parameters and lists its
summands, each a constructor constant or constructor application:

    tree(A) --> leaf + node(A, tree(A), tree(A)).

A definition set is deterministic: every constructor belongs to at most one
definition.  The built-in definition

    list(A) --> [] + cons(A, list(A)).

is always present; a user file may restate it verbatim but not change it.

From a validated set we derive signatures: each constructor gets a scheme
whose codomain is its owning type symbol.  Symbols outside the definitions
fall back to defaults: literals type as their base type, undeclared atoms as
atom, an undeclared functor f/n as a free constructor with its own implicit
type symbol f°, and an undeclared predicate p/n as a predicate over n generic
argument types.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import ArityMismatch, ConflictingOverride, TypeValidationError, UnknownSymbol
from .syntax import (
    ATOM,
    Base,
    Bool,
    Const,
    CtorApp,
    FuncType,
    SymApp,
    TVar,
    TypeExpr,
    TypeScheme,
    apply_type_subst,
    apply_type_subst_func,
    free_ctor_symbol,
    free_type_vars,
    type_vars,
)


@dataclass(frozen=True)
class TypeDef:
    """One definition: symbol(params) --> summands."""

    symbol: str
    params: tuple[str, ...]
    summands: tuple[CtorApp, ...]


BUILTIN_LIST = TypeDef(
    "list",
    ("A",),
    (CtorApp("[]"), CtorApp("cons", (TVar("A"), SymApp("list", (TVar("A"),))))),
)


@dataclass(frozen=True)
class Violation:
    """A single validation problem, tagged with a stable kind name."""

    kind: str
    symbol: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} in {self.symbol}: {self.detail}"


def _alpha_equal_def(a: TypeDef, b: TypeDef) -> bool:
    if a.symbol != b.symbol or len(a.params) != len(b.params):
        return False
    ren = dict(zip(a.params, (TVar(p) for p in b.params)))
    renamed = tuple(apply_type_subst(ren, s) for s in a.summands)
    return renamed == b.summands


def _check_summand_shape(ty: TypeExpr, symbol: str, out: list[Violation], top: bool) -> None:
    if top and not isinstance(ty, CtorApp):
        out.append(
            Violation("IllegalSummand", symbol, f"summand {ty!r} is not a constructor term")
        )
        return
    if isinstance(ty, Bool):
        out.append(Violation("IllegalSummand", symbol, "bool cannot appear inside a summand"))
    elif isinstance(ty, (SymApp, CtorApp)):
        for arg in ty.args:
            _check_summand_shape(arg, symbol, out, top=False)


class TypeDefSet:
    """A validated, deterministic collection of type definitions.

    Build one through validate(); direct construction skips validation and is
    reserved for internal use.  Instances are immutable after construction.
    """

    def __init__(self, defs: dict[str, TypeDef]):
        self._defs = dict(defs)
        # constructor name -> owning definition
        self._owner: dict[str, TypeDef] = {}
        for d in self._defs.values():
            for s in d.summands:
                self._owner[s.ctor] = d

    def lookup(self, symbol: str) -> TypeDef | None:
        return self._defs.get(symbol)

    def lookup_free(self, symbol: str, arity: int) -> TypeDef | None:
        """Implicit definition backing a free-constructor type symbol."""
        from .syntax import free_ctor_functor

        functor = free_ctor_functor(symbol)
        if functor is None:
            return None
        params = tuple(f"A{i + 1}" for i in range(arity))
        return TypeDef(symbol, params, (CtorApp(functor, tuple(TVar(p) for p in params)),))

    def owner_of(self, ctor: str) -> TypeDef | None:
        return self._owner.get(ctor)

    def symbols(self) -> tuple[str, ...]:
        return tuple(self._defs)

    def defs(self) -> tuple[TypeDef, ...]:
        return tuple(self._defs.values())

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._defs


def validate(defs) -> TypeDefSet:
    """Check well-formedness and determinism; raise TypeValidationError listing
    every violation, otherwise return the definition set (built-ins included).
    """
    out: list[Violation] = []
    accepted: dict[str, TypeDef] = {"list": BUILTIN_LIST}
    ctor_owner: dict[str, str] = {s.ctor: "list" for s in BUILTIN_LIST.summands}

    for d in defs:
        if d.symbol in accepted:
            if d.symbol == "list" and _alpha_equal_def(d, BUILTIN_LIST):
                continue
            out.append(
                Violation(
                    "DuplicateTypeSymbol",
                    d.symbol,
                    "type symbol already defined"
                    + (" (built-in list may only be restated verbatim)" if d.symbol == "list" else ""),
                )
            )
            continue
        if len(set(d.params)) != len(d.params):
            out.append(Violation("DuplicateParam", d.symbol, "parameters must be distinct"))
        if not d.summands:
            out.append(Violation("IllegalSummand", d.symbol, "definition has no summands"))

        used: set[str] = set()
        for s in d.summands:
            _check_summand_shape(s, d.symbol, out, top=True)
            if isinstance(s, CtorApp):
                if s.ctor != "[]" and not _plain_atom_name(s.ctor):
                    out.append(
                        Violation(
                            "IllegalSummand",
                            d.symbol,
                            f"constructor {s.ctor!r} must be an atom, not a literal",
                        )
                    )
                for v in type_vars(s):
                    used.add(v)
                    if v not in d.params:
                        out.append(
                            Violation(
                                "UnboundTypeVar",
                                d.symbol,
                                f"variable {v} does not appear in the parameter list",
                            )
                        )
                prev = ctor_owner.get(s.ctor)
                if prev is not None:
                    out.append(
                        Violation(
                            "DuplicateConstructor",
                            d.symbol,
                            f"constructor {s.ctor} already belongs to {prev}",
                        )
                    )
                else:
                    ctor_owner[s.ctor] = d.symbol
        for p in d.params:
            if p not in used:
                out.append(
                    Violation("UnusedParam", d.symbol, f"parameter {p} is unused on the right side")
                )
        accepted[d.symbol] = d

    # Summand arguments naming type symbols must reference defined ones with
    # the right arity; unknown names parse as constructor terms, so only
    # arity errors on known symbols remain to check here.
    for d in accepted.values():
        for s in d.summands:
            _check_symapp_arities(s, accepted, d.symbol, out)

    if out:
        raise TypeValidationError(out)
    return TypeDefSet(accepted)


def _plain_atom_name(name: str) -> bool:
    return bool(name) and (name[0].islower() or not name[0].isalnum())


def _check_symapp_arities(ty: TypeExpr, defs: dict[str, TypeDef], where: str, out: list[Violation]):
    if isinstance(ty, SymApp):
        d = defs.get(ty.symbol)
        if d is not None and len(d.params) != len(ty.args):
            out.append(
                Violation(
                    "IllegalSummand",
                    where,
                    f"{ty.symbol} expects {len(d.params)} arguments, got {len(ty.args)}",
                )
            )
    if isinstance(ty, (SymApp, CtorApp)):
        for a in ty.args:
            _check_symapp_arities(a, defs, where, out)


# --- signature environment ---------------------------------------------------


@dataclass(frozen=True)
class SignatureEnv:
    """Schemes for constants, functions, and predicates.

    Lookups fall back to the defaults described in the module docstring when
    `defaults_enabled` is set; otherwise a missing symbol raises UnknownSymbol.
    """

    constants: dict[str, TypeScheme] = field(default_factory=dict)
    functions: dict[tuple[str, int], TypeScheme] = field(default_factory=dict)
    predicates: dict[tuple[str, int], TypeScheme] = field(default_factory=dict)
    defaults_enabled: bool = True

    def lookup_constant(self, const: Const) -> TypeScheme:
        if const.kind == "int":
            return TypeScheme((), Base("int"))
        if const.kind == "float":
            return TypeScheme((), Base("float"))
        if const.kind == "string":
            return TypeScheme((), Base("string"))
        name = const.symbol
        scheme = self.constants.get(name)
        if scheme is not None:
            return scheme
        if any(f == name for (f, _n) in self.functions):
            raise ArityMismatch(f"{name} is a declared functor, not a constant")
        if not self.defaults_enabled:
            raise UnknownSymbol(f"constant {name} has no declared type")
        return TypeScheme((), ATOM)

    def lookup_function(self, functor: str, arity: int) -> TypeScheme:
        scheme = self.functions.get((functor, arity))
        if scheme is not None:
            return scheme
        if functor in self.constants or any(f == functor for (f, _n) in self.functions):
            raise ArityMismatch(f"{functor} is declared with a different arity")
        if not self.defaults_enabled:
            raise UnknownSymbol(f"functor {functor}/{arity} has no declared type")
        params = tuple(f"A{i + 1}" for i in range(arity))
        args = tuple(TVar(p) for p in params)
        return TypeScheme(params, FuncType(args, SymApp(free_ctor_symbol(functor), args)))

    def lookup_predicate(self, name: str, arity: int) -> TypeScheme:
        scheme = self.predicates.get((name, arity))
        if scheme is not None:
            return scheme
        if not self.defaults_enabled:
            raise UnknownSymbol(f"predicate {name}/{arity} has no declared type")
        params = tuple(f"A{i + 1}" for i in range(arity))
        return TypeScheme(params, FuncType(tuple(TVar(p) for p in params), Bool()))

    def with_function(self, functor: str, arity: int) -> "SignatureEnv":
        """Extended copy with the default scheme for functor/arity made explicit.

        Used to seed enumeration vocabularies with free constructors.
        """
        scheme = self.lookup_function(functor, arity)
        functions = dict(self.functions)
        functions[(functor, arity)] = scheme
        return replace(self, functions=functions)

    def with_constant(self, name: str) -> "SignatureEnv":
        scheme = self.lookup_constant(Const(name, "atom"))
        constants = dict(self.constants)
        constants[name] = scheme
        return replace(self, constants=constants)


def derive_signatures(defs: TypeDefSet, overrides: SignatureEnv | None = None) -> SignatureEnv:
    """Constructor schemes from the definitions, plus user overrides.

    Overrides may add predicate signatures freely and may restate constructor
    schemes only at the declared arity; anything contradicting a derived
    constructor scheme's arity, or naming a numeric/string literal, is
    rejected with ConflictingOverride.
    """
    constants: dict[str, TypeScheme] = {}
    functions: dict[tuple[str, int], TypeScheme] = {}
    for d in defs.defs():
        codomain = SymApp(d.symbol, tuple(TVar(p) for p in d.params))
        for s in d.summands:
            if s.args:
                scheme = TypeScheme(d.params, FuncType(s.args, codomain))
                # the codomain mentions every parameter, so generics and body
                # variables coincide
                assert set(free_type_vars(scheme.body)) == set(d.params)
                functions[(s.ctor, len(s.args))] = scheme
            else:
                constants[s.ctor] = TypeScheme(d.params, codomain)

    predicates: dict[tuple[str, int], TypeScheme] = {}
    if overrides is not None:
        for name in overrides.constants:
            if not isinstance(name, str) or not _plain_atom_name(name):
                raise ConflictingOverride(f"cannot override the type of literal {name!r}")
            if name in constants or any(f == name for (f, _n) in functions):
                raise ConflictingOverride(f"{name} is a declared constructor")
            constants[name] = overrides.constants[name]
        for (name, arity), scheme in overrides.functions.items():
            declared = [n for (f, n) in functions if f == name]
            if declared and declared != [arity]:
                raise ConflictingOverride(
                    f"{name} is a declared constructor of arity {declared[0]}, not {arity}"
                )
            if declared:
                raise ConflictingOverride(f"{name} is a declared constructor")
            functions[(name, arity)] = scheme
        predicates.update(overrides.predicates)

    return SignatureEnv(constants=constants, functions=functions, predicates=predicates)


def instantiate(scheme: TypeScheme, fresh) -> TypeExpr | FuncType:
    """Replace the scheme's generics with variables from the fresh supply."""
    mapping = {g: fresh.tvar() for g in scheme.generics}
    if isinstance(scheme.body, FuncType):
        return apply_type_subst_func(mapping, scheme.body)
    return apply_type_subst(mapping, scheme.body)
