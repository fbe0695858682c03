"""Syntax-directed type checking against a context and signature.

check decides whether `term : ty` is derivable under a context that assigns
each variable a type:

    variable    its context entry must equal the candidate type
    constant    some instance of its scheme must equal the candidate type
    compound    some instance of its scheme must have the candidate type as
                codomain and type every argument recursively

The candidate type and the context are taken literally: their type variables
are rigid, and only the variables introduced by instantiating schemes may be
bound while matching.  That makes the procedure a decision method rather than
inference: checking cons(X, []) against list(atom) under {X : int} fails even
though the term is typeable under another context.

check_equation decides whether the two sides share some type (the equation
then has type bool), and is_instance whether one typing is a substitution
instance of another.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import (
    Base,
    Bool,
    Compound,
    Const,
    CtorApp,
    FuncType,
    SymApp,
    TVar,
    Term,
    TypeExpr,
    apply_type_subst,
    apply_type_subst_func,
    Var,
)
from .errors import UnboundVariable
from .typedefs import SignatureEnv

Context = dict[str, TypeExpr]


@dataclass
class _MatchState:
    """Bindings for match variables created by scheme instantiation."""

    flexible: set[str] = field(default_factory=set)
    bindings: dict[str, TypeExpr] = field(default_factory=dict)
    counter: int = 0
    failure: tuple[Term, TypeExpr] | None = None

    def fresh(self) -> TVar:
        self.counter += 1
        name = f"?{self.counter}"
        self.flexible.add(name)
        return TVar(name)

    def resolve(self, ty: TypeExpr) -> TypeExpr:
        while isinstance(ty, TVar) and ty.name in self.bindings:
            ty = self.bindings[ty.name]
        return ty

    def deep_resolve(self, ty: TypeExpr) -> TypeExpr:
        ty = self.resolve(ty)
        if isinstance(ty, SymApp):
            return SymApp(ty.symbol, tuple(self.deep_resolve(a) for a in ty.args))
        if isinstance(ty, CtorApp):
            return CtorApp(ty.ctor, tuple(self.deep_resolve(a) for a in ty.args))
        return ty


def _occurs(name: str, ty: TypeExpr, st: _MatchState) -> bool:
    ty = st.resolve(ty)
    if isinstance(ty, TVar):
        return ty.name == name
    if isinstance(ty, (SymApp, CtorApp)):
        return any(_occurs(name, a, st) for a in ty.args)
    return False


def _match(a: TypeExpr, b: TypeExpr, st: _MatchState) -> bool:
    """Unify allowing bindings only on flexible variables; everything else,
    including the rigid type variables of the candidate, acts as a constant.
    """
    a, b = st.resolve(a), st.resolve(b)
    if a == b:
        return True
    if isinstance(a, TVar) and a.name in st.flexible:
        if _occurs(a.name, b, st):
            return False
        st.bindings[a.name] = b
        return True
    if isinstance(b, TVar) and b.name in st.flexible:
        if _occurs(b.name, a, st):
            return False
        st.bindings[b.name] = a
        return True
    if isinstance(a, SymApp) and isinstance(b, SymApp) and a.symbol == b.symbol:
        return len(a.args) == len(b.args) and all(
            _match(x, y, st) for x, y in zip(a.args, b.args)
        )
    if isinstance(a, CtorApp) and isinstance(b, CtorApp) and a.ctor == b.ctor:
        return len(a.args) == len(b.args) and all(
            _match(x, y, st) for x, y in zip(a.args, b.args)
        )
    return False


def _instantiate_flexible(scheme, st: _MatchState):
    mapping = {g: st.fresh() for g in scheme.generics}
    if isinstance(scheme.body, FuncType):
        return apply_type_subst_func(mapping, scheme.body)
    return apply_type_subst(mapping, scheme.body)


def _check(ctx: Context, sig: SignatureEnv, term: Term, ty: TypeExpr, st: _MatchState) -> bool:
    if isinstance(term, Var):
        try:
            declared = ctx[term.name]
        except KeyError:
            raise UnboundVariable(f"variable {term.name} is not in the context") from None
        ok = _match(declared, ty, st)
    elif isinstance(term, Const):
        body = _instantiate_flexible(sig.lookup_constant(term), st)
        ok = _match(body, ty, st)
    else:
        ft = _instantiate_flexible(sig.lookup_function(term.functor, term.arity), st)
        assert isinstance(ft, FuncType)
        ok = _match(ft.codomain, ty, st) and all(
            _check(ctx, sig, arg, dom_ty, st) for arg, dom_ty in zip(term.args, ft.domain)
        )
    if not ok and st.failure is None:
        st.failure = (term, st.deep_resolve(ty))
    return ok


def check(ctx: Context, sig: SignatureEnv, term: Term, ty: TypeExpr) -> bool:
    """Whether `term : ty` is derivable under the context."""
    return _check(ctx, sig, term, ty, _MatchState())


def check_explain(ctx: Context, sig: SignatureEnv, term: Term, ty: TypeExpr):
    """Like check, but on failure also return the first sub-judgment that
    could not be derived, as a (subterm, expected type) pair.
    """
    st = _MatchState()
    ok = _check(ctx, sig, term, ty, st)
    return ok, (None if ok else st.failure)


def check_equation(ctx: Context, sig: SignatureEnv, lhs: Term, rhs: Term) -> bool:
    """Whether lhs = rhs types as bool: both sides derivable at a common type."""
    ok, _ = check_equation_explain(ctx, sig, lhs, rhs)
    return ok


def check_equation_explain(ctx: Context, sig: SignatureEnv, lhs: Term, rhs: Term):
    st = _MatchState()
    shared = st.fresh()
    ok = _check(ctx, sig, lhs, shared, st) and _check(ctx, sig, rhs, shared, st)
    return ok, (None if ok else st.failure)


# --- typing instances ---------------------------------------------------------


def _match_rigid(pairs) -> dict[str, TypeExpr] | None:
    """One-sided matching: a substitution on the left-hand types making each
    pair equal, treating right-hand sides as fixed.  None when impossible.
    """
    out: dict[str, TypeExpr] = {}
    stack = list(pairs)
    while stack:
        a, b = stack.pop()
        if isinstance(a, TVar):
            bound = out.get(a.name)
            if bound is None:
                out[a.name] = b
            elif bound != b:
                return None
            continue
        if isinstance(a, (Base, Bool)):
            if a != b:
                return None
            continue
        if isinstance(a, SymApp):
            if not (isinstance(b, SymApp) and a.symbol == b.symbol and len(a.args) == len(b.args)):
                return None
            stack.extend(zip(a.args, b.args))
            continue
        assert isinstance(a, CtorApp)
        if not (isinstance(b, CtorApp) and a.ctor == b.ctor and len(a.args) == len(b.args)):
            return None
        stack.extend(zip(a.args, b.args))
    return out


def is_instance(candidate: tuple[Context, TypeExpr], principal: tuple[Context, TypeExpr]) -> bool:
    """Whether one substitution carries the principal typing onto the
    candidate: same variables, and a single type substitution maps the
    principal context and type pointwise onto the candidate's.
    """
    cand_ctx, cand_ty = candidate
    prin_ctx, prin_ty = principal
    if set(cand_ctx) != set(prin_ctx):
        return False
    pairs = [(prin_ty, cand_ty)]
    pairs += [(prin_ctx[name], cand_ctx[name]) for name in prin_ctx]
    return _match_rigid(pairs) is not None
