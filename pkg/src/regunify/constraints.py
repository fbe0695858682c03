"""Constraint generation for terms and equations.

Walking a term bottom-up, left to right, produces its type plus the
constraints that must hold for the term to be well-typed:

    variable X          the type the context assigns to X; no constraints
    constant k          a fresh instance of k's scheme; no constraints
    f(t1, ..., tn)      instantiate f's scheme with fresh variables, emit each
                        subterm's constraints, then one constraint per
                        argument equating the subterm type with the scheme's
                        domain type; the result is the instantiated codomain

An equation t1 = t2 contributes the term constraint t1 = t2 plus both sides'
constraints and the type constraint equating the two result types; its own
type is bool.  Term walks never produce term constraints themselves, but the
union in gen_equation is written generally all the same.  Constraint order is
the generation order above, which the solver and its traces rely on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnboundVariable
from .syntax import (
    Compound,
    Const,
    FuncType,
    TVar,
    Term,
    TypeExpr,
    Var,
    free_vars,
    term_size,
    type_size,
)
from .typedefs import SignatureEnv, instantiate


@dataclass(frozen=True)
class TermConstraint:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class TypeConstraint:
    lhs: TypeExpr
    rhs: TypeExpr


@dataclass(frozen=True)
class ConstraintState:
    """A pair of ordered constraint multisets: terms (C) and types (T)."""

    terms: tuple[TermConstraint, ...]
    types: tuple[TypeConstraint, ...]

    def size(self) -> int:
        return sum(term_size(c.lhs) + term_size(c.rhs) for c in self.terms) + sum(
            type_size(c.lhs) + type_size(c.rhs) for c in self.types
        )


class FreshSupply:
    """Generates variable names guaranteed fresh for the whole session.

    Generated names start with '$', which the parser rejects, so they can
    never collide with names from source text.  The counter only moves
    forward; a supply never hands out the same name twice.
    """

    def __init__(self):
        self._count = 0

    def tvar(self, hint: str = "t") -> TVar:
        self._count += 1
        return TVar(f"${hint}{self._count}")

    def var(self, hint: str = "g") -> Var:
        self._count += 1
        return Var(f"${hint}{self._count}")

    def tvar_for(self, var_name: str) -> TVar:
        """The canonical type variable for a term variable.  Distinct term
        variables map to distinct names without consuming the counter.
        """
        return TVar(f"${var_name}")


Context = dict[str, TypeExpr]


def generic_context(terms, fresh: FreshSupply) -> Context:
    """A context assigning every variable of the given terms its own type
    variable, in first-occurrence order.
    """
    ctx: Context = {}
    for t in terms:
        for name in free_vars(t):
            if name not in ctx:
                ctx[name] = fresh.tvar_for(name)
    return ctx


def gen_term(
    ctx: Context, sig: SignatureEnv, term: Term, fresh: FreshSupply
) -> tuple[TypeExpr, list[TermConstraint], list[TypeConstraint]]:
    """Type, term constraints, and type constraints of a term under a context.
    The term-constraint component of a plain term walk is always empty.
    """
    if isinstance(term, Var):
        try:
            return ctx[term.name], [], []
        except KeyError:
            raise UnboundVariable(f"variable {term.name} is not in the context") from None
    if isinstance(term, Const):
        ty = instantiate(sig.lookup_constant(term), fresh)
        return ty, [], []
    scheme = sig.lookup_function(term.functor, term.arity)
    ft = instantiate(scheme, fresh)
    assert isinstance(ft, FuncType) and len(ft.domain) == term.arity
    term_cs: list[TermConstraint] = []
    type_cs: list[TypeConstraint] = []
    arg_pairs = []
    for arg, dom_ty in zip(term.args, ft.domain):
        arg_ty, arg_term_cs, arg_type_cs = gen_term(ctx, sig, arg, fresh)
        term_cs.extend(arg_term_cs)
        type_cs.extend(arg_type_cs)
        arg_pairs.append(TypeConstraint(arg_ty, dom_ty))
    type_cs.extend(arg_pairs)
    return ft.codomain, term_cs, type_cs


def gen_equation(
    ctx: Context, sig: SignatureEnv, lhs: Term, rhs: Term, fresh: FreshSupply
) -> ConstraintState:
    """Constraints of the equation lhs = rhs: both sides' constraints, the
    term constraint itself, and the equality of the two types.
    """
    lhs_ty, lhs_term_cs, lhs_type_cs = gen_term(ctx, sig, lhs, fresh)
    rhs_ty, rhs_term_cs, rhs_type_cs = gen_term(ctx, sig, rhs, fresh)
    terms = tuple(lhs_term_cs + rhs_term_cs + [TermConstraint(lhs, rhs)])
    types = tuple(lhs_type_cs + rhs_type_cs + [TypeConstraint(lhs_ty, rhs_ty)])
    return ConstraintState(terms=terms, types=types)


def gen_atom(
    ctx: Context, sig: SignatureEnv, atom: Term, fresh: FreshSupply
) -> list[TypeConstraint]:
    """Type constraints of a predicate application (a goal or clause head).

    The atom itself has type bool; each argument's type is constrained by the
    predicate's domain type.  Zero-arity atoms contribute nothing.
    """
    if isinstance(atom, Const):
        return []
    assert isinstance(atom, Compound)
    scheme = sig.lookup_predicate(atom.functor, atom.arity)
    ft = instantiate(scheme, fresh)
    assert isinstance(ft, FuncType) and len(ft.domain) == atom.arity
    type_cs: list[TypeConstraint] = []
    arg_pairs = []
    for arg, dom_ty in zip(atom.args, ft.domain):
        arg_ty, _arg_term_cs, arg_type_cs = gen_term(ctx, sig, arg, fresh)
        type_cs.extend(arg_type_cs)
        arg_pairs.append(TypeConstraint(arg_ty, dom_ty))
    type_cs.extend(arg_pairs)
    return type_cs
