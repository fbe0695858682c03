"""Ground evaluation, domains, three-valued equality, membership, enumeration."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from regunify import (
    Base,
    BudgetExceeded,
    Compound,
    LiteralPool,
    NIL,
    SymApp,
    TVar,
    Var,
    cons,
    derive_signatures,
    enumerate_ground_terms,
    eq_values,
    eval_term,
    mk_atom,
    mk_float,
    mk_int,
    mk_list,
    member,
    parse_term,
    parse_type,
    stratified_pairs,
    validate,
)
from regunify.errors import NonGroundType, UnboundVariable
from regunify.semantics import (
    AtmV,
    BoolV,
    ConsV,
    IntV,
    NilV,
    TreeV,
    WrongV,
    dom,
    dom_tag,
    domains_intersect,
    mk_cons,
)
from regunify.syntax import term_depth


def test_eval_list():
    got = eval_term(mk_list([mk_int(1), mk_int(2)]))
    assert got == ConsV(IntV(1), ConsV(IntV(2), NilV()))


def test_eval_cons_of_nonlist_is_wrong():
    assert eval_term(cons(mk_int(1), mk_int(2))) == WrongV()


def test_eval_state_lookup():
    got = eval_term(cons(Var("Y"), mk_int(2)), {"Y": IntV(1)})
    assert got == WrongV()
    with pytest.raises(UnboundVariable):
        eval_term(Var("Z"))


def test_eval_mixed_element_list_is_wrong():
    assert eval_term(mk_list([mk_int(1), mk_atom("a")])) == WrongV()


def test_eval_wrong_absorbs():
    inner = cons(mk_int(1), mk_int(2))
    assert eval_term(Compound("f", (inner,))) == WrongV()
    assert eval_term(cons(inner, NIL)) == WrongV()


def test_eval_free_tree():
    got = eval_term(Compound("f", (mk_int(1), mk_atom("a"))))
    assert got == TreeV("f", (IntV(1), AtmV("a")))


def test_dom_singleton_but_nil():
    assert len(dom(IntV(3))) == 1
    assert len(dom(WrongV())) == 1
    nil_tag = dom_tag(NilV())
    # the wildcard element stands for membership in every list domain
    assert domains_intersect(nil_tag, dom_tag(eval_term(mk_list([mk_int(1)]))))
    assert domains_intersect(nil_tag, dom_tag(eval_term(mk_list([mk_atom("a")]))))


def test_eq_values_basic():
    assert eq_values(IntV(1), IntV(1)) == "true"
    assert eq_values(IntV(1), AtmV("a")) == "wrong"
    # derived by direct domain evaluation: both sides in List(Int), unequal
    assert eq_values(
        eval_term(mk_list([mk_int(1)])), eval_term(mk_list([mk_int(2)]))
    ) == "false"


def test_eq_values_wrong_operand():
    assert eq_values(WrongV(), WrongV()) == "wrong"
    assert eq_values(IntV(0), WrongV()) == "wrong"


def test_eq_values_nil_vs_lists():
    assert eq_values(NilV(), eval_term(mk_list([mk_int(1)]))) == "false"
    assert eq_values(NilV(), NilV()) == "true"


def test_mk_cons_construction_rules():
    assert mk_cons(IntV(1), NilV()) == ConsV(IntV(1), NilV())
    assert mk_cons(IntV(1), IntV(2)) == WrongV()
    assert mk_cons(BoolV(True), NilV()) == WrongV()
    assert mk_cons(WrongV(), NilV()) == WrongV()


def test_member_base_and_lists(defs):
    assert member(IntV(1), Base("int"), defs)
    assert not member(IntV(1), Base("float"), defs)
    assert member(eval_term(mk_list([mk_int(1)])), parse_type("list(int)"), defs)
    assert member(NilV(), parse_type("list(float)"), defs)
    assert not member(IntV(1), parse_type("list(int)"), defs)
    assert not member(eval_term(mk_list([mk_int(1)])), parse_type("list(atom)"), defs)


def test_member_wrong_never(defs):
    assert not member(WrongV(), Base("int"), defs)
    assert not member(WrongV(), parse_type("list(int)"), defs)


def test_member_requires_ground(defs):
    with pytest.raises(NonGroundType):
        member(IntV(1), TVar("A"), defs)


def test_member_user_definition(tree_defs):
    leaf = eval_term(parse_term("leaf(1)"))
    node = eval_term(parse_term("node(leaf(1), leaf(2))"))
    ty = parse_type("tree(int)", tree_defs)
    assert member(leaf, ty, tree_defs)
    assert member(node, ty, tree_defs)
    assert not member(leaf, parse_type("tree(atom)", tree_defs), tree_defs)
    assert not member(IntV(1), ty, tree_defs)


def test_member_free_constructor(defs):
    sig = derive_signatures(defs)
    v = eval_term(parse_term("g(1, a)"))
    scheme = sig.lookup_function("g", 2)
    ground = parse_type("int"), parse_type("atom")
    body = scheme.body
    ty = SymApp(body.codomain.symbol, ground)
    assert member(v, ty, defs)
    assert not member(v, SymApp(body.codomain.symbol, (ground[1], ground[0])), defs)


# --- enumeration ---------------------------------------------------------------


def _vocab_sig(defs):
    return derive_signatures(defs).with_function("f", 1)


def test_enumerate_depth0(defs):
    pool = LiteralPool(ints=(0, 1), floats=(), strings=(), atoms=("a",))
    got = list(enumerate_ground_terms(_vocab_sig(defs), 0, pool))
    assert got == [mk_int(0), mk_int(1), mk_atom("a"), NIL]


def test_enumerate_depth2_contains(defs):
    pool = LiteralPool(ints=(1,), floats=(), strings=(), atoms=())
    got = list(enumerate_ground_terms(_vocab_sig(defs), 2, pool))
    assert mk_int(1) in got
    assert NIL in got
    assert cons(mk_int(1), NIL) in got
    assert cons(cons(mk_int(1), NIL), NIL) in got


def test_enumerate_unique_and_depth_stratified(defs):
    pool = LiteralPool(ints=(0, 1), floats=(), strings=(), atoms=("a",))
    got = list(enumerate_ground_terms(_vocab_sig(defs), 2, pool))
    assert len(got) == len(set(got))
    depths = [term_depth(t) for t in got]
    assert sorted(depths) == depths  # levels stream in depth order
    assert max(depths) == 2


def test_enumerate_budget(defs):
    pool = LiteralPool(ints=(0, 1), floats=(), strings=(), atoms=("a",))
    with pytest.raises(BudgetExceeded):
        list(enumerate_ground_terms(_vocab_sig(defs), 3, pool, max_terms=1000))


def test_stratified_pairs_deterministic(defs):
    pool = LiteralPool(ints=(0, 1), floats=(), strings=(), atoms=("a",))
    terms = list(enumerate_ground_terms(_vocab_sig(defs), 2, pool))
    p1 = stratified_pairs(terms, max_pairs=500)
    p2 = stratified_pairs(terms, max_pairs=500)
    assert p1 == p2
    kept = {a for a, _ in p1}
    # the cartesian square of the kept sample, every shallow term included
    assert len(p1) == len(kept) ** 2
    assert all(t in kept for t in terms if term_depth(t) <= 1)


# --- oracle invariants: wrong absorption, symmetry, reflexivity -------------------


_pool = LiteralPool(ints=(0, 1), floats=(0.5,), strings=("s",), atoms=("a",))


def _small_values(defs):
    sig = _vocab_sig(defs)
    return [eval_term(t) for t in enumerate_ground_terms(sig, 1, _pool)]


def test_eq_symmetric_and_reflexive():
    defs = validate(())
    values = _small_values(defs)
    for v1, v2 in itertools.product(values, repeat=2):
        assert eq_values(v1, v2) == eq_values(v2, v1)
    for v in values:
        if v != WrongV():
            assert eq_values(v, v) == "true"


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_eq_ints(a, b):
    assert eq_values(IntV(a), IntV(b)) == ("true" if a == b else "false")


def test_int_float_domains_disjoint():
    assert eq_values(IntV(1), eval_term(mk_float(1.0))) == "wrong"


def test_evaluation_typing_coherence(defs, sig):
    """Ground terms with a derivable ground typing evaluate into that type."""
    from regunify import check, principal_typing
    from regunify.solver import SolveWrong

    pool = LiteralPool(ints=(0, 1), floats=(), strings=(), atoms=("a",))
    count = 0
    for t in enumerate_ground_terms(derive_signatures(defs), 2, pool):
        pt = principal_typing(t, defs)
        if isinstance(pt, SolveWrong):
            continue
        ty = pt.type
        from regunify.syntax import free_type_vars

        if free_type_vars(ty):
            continue  # only ground types are decidable by member
        assert check({}, sig, t, ty)
        assert member(eval_term(t), ty, defs)
        count += 1
    # most cons combinations are ill-typed and nil is polymorphic, so the
    # ground-typed residue is small but must cover every depth
    assert count >= 15
