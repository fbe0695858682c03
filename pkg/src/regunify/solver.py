"""Rewriting solver for term/type constraint pairs.

The solver rewrites a state (C, T) of term constraints C and type constraints
T with twelve rules.  Rules 1-6 act on T, rules 7-12 mirror them on C:

    1/7   decompose   f(a1..an) = f(b1..bn)  ->  a1 = b1, ..., an = bn
    2/8   delete      s = s                  ->  (removed)
    3/9   clash       f(...) = g(...), f/n distinct from g/m:
                      wrong on types, false on terms
    4/10  orient      s = v, s not a variable, v a variable  ->  v = s
    5/11  eliminate   v = s, v not in s, v occurs in the rest:
                      substitute s for v in every other constraint
    6/12  occurs      v = s, v inside s:  wrong on types, false on terms

A rule applies only when no lower-numbered rule applies anywhere, and fires
on the leftmost constraint it matches; so the type phase always reaches its
fixpoint before the first term rule, and a type error (wrong) preempts any
term disagreement (false).  The eliminate rules carry the side condition
"occurs in the rest", without which they would loop rewriting nothing.

At a fixpoint both constraint sets are in solved form: every constraint binds
a distinct variable that appears nowhere else, so reading them off gives
idempotent substitutions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import BudgetExceeded
from .syntax import (
    Base,
    Bool,
    Compound,
    Const,
    CtorApp,
    SymApp,
    TVar,
    Term,
    TypeExpr,
    Var,
    apply_subst,
    apply_type_subst,
    occurs_in,
    type_occurs_in,
)
from .constraints import (
    ConstraintState,
    Context,
    FreshSupply,
    TermConstraint,
    TypeConstraint,
    gen_equation,
    gen_term,
    generic_context,
)
from .typedefs import SignatureEnv, TypeDefSet, derive_signatures

# Rewrite budget: steps never exceed size**2 * BUDGET_FACTOR for an input of
# that size.  solve() enforces it as a hard cap when none is given.
BUDGET_FACTOR = 64


@dataclass(frozen=True)
class Solved:
    """Both constraint sets solved: a term unifier and a type unifier."""

    subst: dict[str, Term]
    type_subst: dict[str, TypeExpr]


@dataclass(frozen=True)
class SolveFalse:
    """Terms disagree but their types unify: ordinary failure."""

    type_subst: dict[str, TypeExpr]
    witness: TermConstraint


@dataclass(frozen=True)
class SolveWrong:
    """The type constraints are unsolvable: a run-time type error."""

    witness: TypeConstraint


SolveResult = Union[Solved, SolveFalse, SolveWrong]


@dataclass(frozen=True)
class TraceStep:
    """One rewrite: which rule fired, on what, and the state afterwards."""

    rule: int
    target: Union[TermConstraint, TypeConstraint]
    state: ConstraintState


@dataclass(frozen=True)
class SolveRun:
    result: SolveResult
    steps: int
    trace: tuple[TraceStep, ...]


def _type_head(ty: TypeExpr):
    """Rigid head key, or None for a variable."""
    if isinstance(ty, TVar):
        return None
    if isinstance(ty, Base):
        return ("base", ty.kind, 0)
    if isinstance(ty, Bool):
        return ("bool", "", 0)
    if isinstance(ty, SymApp):
        return ("sym", ty.symbol, len(ty.args))
    return ("ctor", ty.ctor, len(ty.args))


def _term_head(t: Term):
    if isinstance(t, Var):
        return None
    if isinstance(t, Const):
        return ("const", (t.symbol, t.kind), 0)
    return ("fn", t.functor, len(t.args))


def _type_rule(c: TypeConstraint, counts: dict[str, int]) -> Optional[int]:
    lh, rh = _type_head(c.lhs), _type_head(c.rhs)
    if lh is not None and rh is not None:
        if lh == rh and lh[2] >= 1:
            return 1
        if c.lhs == c.rhs:
            return 2
        return 3  # same 0-arity heads are structurally equal, so this is a clash
    if c.lhs == c.rhs:
        return 2
    if lh is not None:  # value on the left, variable on the right
        return 4
    name = c.lhs.name
    if type_occurs_in(name, c.rhs):
        return 6
    if counts.get(name, 0) > 1:
        return 5
    return None


def _term_rule(c: TermConstraint, counts: dict[str, int]) -> Optional[int]:
    lh, rh = _term_head(c.lhs), _term_head(c.rhs)
    if lh is not None and rh is not None:
        if lh == rh and lh[2] >= 1:
            return 7
        if c.lhs == c.rhs:
            return 8
        return 9
    if c.lhs == c.rhs:
        return 8
    if lh is not None:
        return 10
    name = c.lhs.name
    if occurs_in(name, c.rhs):
        return 12
    if counts.get(name, 0) > 1:
        return 11
    return None


def _tvar_counts(types) -> dict[str, int]:
    counts: dict[str, int] = {}
    stack = []
    for c in types:
        stack.append(c.lhs)
        stack.append(c.rhs)
    while stack:
        ty = stack.pop()
        if isinstance(ty, TVar):
            counts[ty.name] = counts.get(ty.name, 0) + 1
        elif isinstance(ty, (SymApp, CtorApp)):
            stack.extend(ty.args)
    return counts


def _var_counts(terms) -> dict[str, int]:
    counts: dict[str, int] = {}
    stack = []
    for c in terms:
        stack.append(c.lhs)
        stack.append(c.rhs)
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            counts[t.name] = counts.get(t.name, 0) + 1
        elif isinstance(t, Compound):
            stack.extend(t.args)
    return counts


def _find_redex(terms, types):
    """Lowest applicable rule and the leftmost constraint it applies to."""
    best = None
    counts = _tvar_counts(types)
    for i, c in enumerate(types):
        rule = _type_rule(c, counts)
        if rule is not None and (best is None or rule < best[0]):
            best = (rule, i)
            if rule == 1:
                break
    if best is not None:
        return best
    counts = _var_counts(terms)
    for i, c in enumerate(terms):
        rule = _term_rule(c, counts)
        if rule is not None and (best is None or rule < best[0]):
            best = (rule, i)
            if rule == 7:
                break
    return best


def _apply_type_rule(rule: int, i: int, types: list) -> Optional[SolveWrong]:
    c = types[i]
    if rule == 1:
        children = [TypeConstraint(a, b) for a, b in zip(c.lhs.args, c.rhs.args)]
        types[i : i + 1] = children
    elif rule == 2:
        del types[i]
    elif rule == 3:
        return SolveWrong(witness=c)
    elif rule == 4:
        types[i] = TypeConstraint(c.rhs, c.lhs)
    elif rule == 5:
        binding = {c.lhs.name: c.rhs}
        for j, other in enumerate(types):
            if j != i:
                types[j] = TypeConstraint(
                    apply_type_subst(binding, other.lhs),
                    apply_type_subst(binding, other.rhs),
                )
    else:  # rule 6
        return SolveWrong(witness=c)
    return None


def _apply_term_rule(rule: int, i: int, terms: list) -> Optional[TermConstraint]:
    c = terms[i]
    if rule == 7:
        children = [TermConstraint(a, b) for a, b in zip(c.lhs.args, c.rhs.args)]
        terms[i : i + 1] = children
    elif rule == 8:
        del terms[i]
    elif rule == 9:
        return c
    elif rule == 10:
        terms[i] = TermConstraint(c.rhs, c.lhs)
    elif rule == 11:
        binding = {c.lhs.name: c.rhs}
        for j, other in enumerate(terms):
            if j != i:
                terms[j] = TermConstraint(
                    apply_subst(binding, other.lhs), apply_subst(binding, other.rhs)
                )
    else:  # rule 12
        return c
    return None


def step(state: ConstraintState):
    """Apply one rewrite.  Returns None at a fixpoint, a SolveWrong or
    SolveFalse when a clash/occurs rule fires, and otherwise a TraceStep
    holding the rule, the rewritten constraint, and the new state.
    """
    terms, types = list(state.terms), list(state.types)
    redex = _find_redex(terms, types)
    if redex is None:
        return None
    rule, i = redex
    if rule <= 6:
        target = types[i]
        bad = _apply_type_rule(rule, i, types)
        if bad is not None:
            return bad
    else:
        target = terms[i]
        failed = _apply_term_rule(rule, i, terms)
        if failed is not None:
            return SolveFalse(type_subst=_read_type_subst(types), witness=failed)
    return TraceStep(rule, target, ConstraintState(tuple(terms), tuple(types)))


def _read_type_subst(types) -> dict[str, TypeExpr]:
    out: dict[str, TypeExpr] = {}
    for c in types:
        assert isinstance(c.lhs, TVar), "type constraints not in solved form"
        out[c.lhs.name] = c.rhs
    return out


def _read_subst(terms) -> dict[str, Term]:
    out: dict[str, Term] = {}
    for c in terms:
        assert isinstance(c.lhs, Var), "term constraints not in solved form"
        out[c.lhs.name] = c.rhs
    return out


def solve(
    state: ConstraintState, trace: bool = False, max_steps: int | None = None
) -> SolveRun:
    """Rewrite to a fixpoint and read off the result.

    When the type constraints are unsolvable the result is wrong; when they
    solve but the term constraints cannot, false together with the type
    unifier; otherwise both unifiers.  `max_steps` defaults to
    size(state)**2 * 64, which no input should ever reach.
    """
    if max_steps is None:
        max_steps = max(1, state.size()) ** 2 * BUDGET_FACTOR
    terms, types = list(state.terms), list(state.types)
    steps = 0
    trace_steps: list[TraceStep] = []
    while True:
        redex = _find_redex(terms, types)
        if redex is None:
            break
        steps += 1
        if steps > max_steps:
            raise BudgetExceeded(f"rewriting exceeded {max_steps} steps")
        rule, i = redex
        if rule <= 6:
            target = types[i]
            bad = _apply_type_rule(rule, i, types)
            if bad is not None:
                return SolveRun(bad, steps, tuple(trace_steps))
        else:
            target = terms[i]
            failed = _apply_term_rule(rule, i, terms)
            if failed is not None:
                result = SolveFalse(type_subst=_read_type_subst(types), witness=failed)
                return SolveRun(result, steps, tuple(trace_steps))
        if trace:
            trace_steps.append(
                TraceStep(rule, target, ConstraintState(tuple(terms), tuple(types)))
            )
    result = Solved(subst=_read_subst(terms), type_subst=_read_type_subst(types))
    return SolveRun(result, steps, tuple(trace_steps))


# --- whole-problem entry points ------------------------------------------------


@dataclass(frozen=True)
class UnifyRun:
    """A typed-unification session: the generated constraints, the solver
    outcome, and the per-variable types under the solution.
    """

    result: SolveResult
    context: Context
    initial: ConstraintState
    steps: int
    trace: tuple[TraceStep, ...]

    @property
    def var_types(self) -> Optional[dict[str, TypeExpr]]:
        """Each variable's type under the solution's type unifier; None when
        the outcome is wrong.
        """
        if isinstance(self.result, SolveWrong):
            return None
        mu = self.result.type_subst
        return {name: apply_type_subst(mu, ty) for name, ty in self.context.items()}

    @property
    def principal(self) -> Optional[tuple[dict[str, TypeExpr], Bool]]:
        """Principal typing of the unified equation: the solved context at
        type bool.  None unless the outcome is solved.
        """
        if not isinstance(self.result, Solved):
            return None
        return (self.var_types, Bool())


def typed_unify(
    lhs: Term,
    rhs: Term,
    defs: TypeDefSet,
    overrides: SignatureEnv | None = None,
    trace: bool = False,
    max_steps: int | None = None,
) -> UnifyRun:
    """Unify two terms under the generic context that types each variable
    with its own type variable.
    """
    sig = derive_signatures(defs, overrides)
    fresh = FreshSupply()
    ctx = generic_context([lhs, rhs], fresh)
    state = gen_equation(ctx, sig, lhs, rhs, fresh)
    run = solve(state, trace=trace, max_steps=max_steps)
    return UnifyRun(run.result, ctx, state, run.steps, run.trace)


@dataclass(frozen=True)
class PrincipalTyping:
    """A typing every other derivable typing of the term instantiates."""

    context: Context
    type: TypeExpr


def principal_typing(
    term: Term,
    defs: TypeDefSet,
    overrides: SignatureEnv | None = None,
) -> Union[PrincipalTyping, SolveWrong]:
    """Most general typing of a term, or wrong when it has none."""
    sig = derive_signatures(defs, overrides)
    fresh = FreshSupply()
    ctx = generic_context([term], fresh)
    ty, term_cs, type_cs = gen_term(ctx, sig, term, fresh)
    assert not term_cs
    run = solve(ConstraintState(terms=(), types=tuple(type_cs)))
    if isinstance(run.result, SolveWrong):
        return run.result
    assert isinstance(run.result, Solved)
    mu = run.result.type_subst
    principal_ctx = {name: apply_type_subst(mu, t) for name, t in ctx.items()}
    return PrincipalTyping(principal_ctx, apply_type_subst(mu, ty))
