"""Typed unification over regular tree types, with a small resolution engine.

The package answers one question in three ways: do two first-order terms
agree?  `solved` when they unify and their semantic domains do too, `false`
when the terms differ but live in a common domain, and `wrong` when no
domain is shared, so the comparison itself is meaningless.  Everything else
here supports that split: a grammar of deterministic type definitions, a
constraint generator, a priority-driven rewriting solver that returns a
term/type unifier pair, a declarative checker for candidate typings, a
ground-value semantics used as an oracle, and a typed resolution engine
that reports which of the three ways a query failed.
"""

from .constraints import (
    ConstraintState,
    FreshSupply,
    TermConstraint,
    TypeConstraint,
    gen_atom,
    gen_equation,
    gen_term,
    generic_context,
)
from .errors import (
    ArityMismatch,
    BudgetExceeded,
    ConflictingOverride,
    NonGroundType,
    ParseError,
    RegunifyError,
    TypeValidationError,
    UnboundVariable,
    UnknownSymbol,
)
from .parser import (
    parse_context,
    parse_equation,
    parse_program,
    parse_query,
    parse_signatures,
    parse_term,
    parse_type,
    parse_typedefs,
)
from .pretty import (
    display_renaming,
    pp_context,
    pp_goal,
    pp_scheme,
    pp_subst,
    pp_term,
    pp_type,
    pp_type_subst,
    pp_typing,
)
from .resolution import (
    Clause,
    NoFalse,
    NoUnknown,
    NoWrong,
    ResolutionBudget,
    ResolveReport,
    Yes,
    rename_clause,
    resolve,
)
from .semantics import (
    DEFAULT_POOL,
    LiteralPool,
    dom,
    enumerate_ground_terms,
    eq_values,
    eval_term,
    member,
    random_term,
    stratified_pairs,
)
from .solver import (
    PrincipalTyping,
    Solved,
    SolveFalse,
    SolveWrong,
    TraceStep,
    UnifyRun,
    principal_typing,
    solve,
    typed_unify,
)
from .syntax import (
    NIL,
    Base,
    Bool,
    Compound,
    Const,
    CtorApp,
    FuncType,
    SourceSpan,
    SymApp,
    TVar,
    Term,
    TypeExpr,
    TypeScheme,
    Var,
    apply_subst,
    apply_type_subst,
    cons,
    free_type_vars,
    free_vars,
    mk_atom,
    mk_float,
    mk_int,
    mk_list,
    mk_string,
)
from .typecheck import (
    check,
    check_equation,
    check_equation_explain,
    check_explain,
    is_instance,
)
from .typedefs import (
    BUILTIN_LIST,
    SignatureEnv,
    TypeDef,
    TypeDefSet,
    Violation,
    derive_signatures,
    instantiate,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "ArityMismatch",
    "BUILTIN_LIST",
    "Base",
    "Bool",
    "BudgetExceeded",
    "Clause",
    "Compound",
    "ConflictingOverride",
    "Const",
    "ConstraintState",
    "CtorApp",
    "DEFAULT_POOL",
    "FreshSupply",
    "FuncType",
    "LiteralPool",
    "NIL",
    "NoFalse",
    "NoUnknown",
    "NoWrong",
    "NonGroundType",
    "ParseError",
    "PrincipalTyping",
    "RegunifyError",
    "ResolutionBudget",
    "ResolveReport",
    "SignatureEnv",
    "SolveFalse",
    "SolveWrong",
    "Solved",
    "SourceSpan",
    "SymApp",
    "TVar",
    "Term",
    "TermConstraint",
    "TraceStep",
    "TypeConstraint",
    "TypeDef",
    "TypeDefSet",
    "TypeExpr",
    "TypeScheme",
    "TypeValidationError",
    "UnboundVariable",
    "UnifyRun",
    "UnknownSymbol",
    "Var",
    "Violation",
    "Yes",
    "apply_subst",
    "apply_type_subst",
    "check",
    "check_equation",
    "check_equation_explain",
    "check_explain",
    "cons",
    "derive_signatures",
    "display_renaming",
    "dom",
    "enumerate_ground_terms",
    "eq_values",
    "eval_term",
    "free_type_vars",
    "free_vars",
    "gen_atom",
    "gen_equation",
    "gen_term",
    "generic_context",
    "instantiate",
    "is_instance",
    "member",
    "mk_atom",
    "mk_float",
    "mk_int",
    "mk_list",
    "mk_string",
    "parse_context",
    "parse_equation",
    "parse_program",
    "parse_query",
    "parse_signatures",
    "parse_term",
    "parse_type",
    "parse_typedefs",
    "pp_context",
    "pp_goal",
    "pp_scheme",
    "pp_subst",
    "pp_term",
    "pp_type",
    "pp_type_subst",
    "pp_typing",
    "principal_typing",
    "random_term",
    "rename_clause",
    "resolve",
    "solve",
    "stratified_pairs",
    "typed_unify",
    "validate",
]
