"""Typing disciplines: simple inference, affine and sub-affine usage checks."""

from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from lambcoin import (
    AffinityViolation, Arrow, BOOL, CalculusVariant, Discipline, FreeVar,
    NonBoolCondition, NonFunctionApplied, OccursCheck, TypeMismatch,
    UnboundVariable, UnificationFailure, count_occurrences, format_inferred,
    ground, infer_simple, instantiate, parse, parse_type, redexes, step_at,
    typecheck,
)

from genterms import closed_typed

seeds = st.integers(min_value=0, max_value=2**32 - 1)

FIG1 = "(\\x.\\y. y x x) coin"
SECTION4 = "(\\x.\\y. if y then x else ((\\z. if z then 0 else 1) x)) coin"


def test_infer_coin_is_bool():
    assert infer_simple({}, parse("coin")) == BOOL


def test_infer_identity_principal():
    ty = infer_simple({}, parse("\\x. x"))
    assert format_inferred(ty) == "'a -> 'a"
    assert ground(ty) == Arrow(BOOL, BOOL)


def test_infer_zero_applied_fails():
    with pytest.raises(UnificationFailure):
        infer_simple({}, parse("0 0"))
    with pytest.raises(NonFunctionApplied):
        infer_simple({}, parse("0 0"))


def test_infer_self_application_occurs_check():
    with pytest.raises(OccursCheck):
        infer_simple({}, parse("\\x. x x"))


def test_infer_unbound_variable():
    with pytest.raises(UnboundVariable):
        infer_simple({}, parse("y"))
    assert infer_simple({"y": BOOL}, parse("y")) == BOOL


def test_simple_accepts_figure_one_term():
    ty = typecheck({}, parse(FIG1), Discipline.SIMPLE)
    assert ty == parse_type("(B -> B -> B) -> B")


def test_typecheck_against_goal():
    goal = parse_type("(B -> B -> B) -> B")
    assert typecheck({}, parse(FIG1), Discipline.SIMPLE, goal) == goal
    with pytest.raises(TypeMismatch):
        typecheck({}, parse(FIG1), Discipline.SIMPLE, parse_type("B -> B"))


def test_affine_rejects_figure_one_term():
    with pytest.raises(AffinityViolation) as err:
        typecheck({}, parse(FIG1), Discipline.AFFINE)
    assert "'x'" in str(err.value)
    assert err.value.rule == "->e"


def test_subaffine_accepts_section_four_term():
    ty = typecheck({}, parse(SECTION4), Discipline.SUBAFFINE)
    assert ty == parse_type("B -> B")


def test_affine_rejects_section_four_term():
    with pytest.raises(AffinityViolation) as err:
        typecheck({}, parse(SECTION4), Discipline.AFFINE)
    assert err.value.rule == "if"


def test_subaffine_still_splits_condition():
    # the same variable in the condition and a branch is rejected
    t = parse("\\x. if x then x else 0")
    with pytest.raises(AffinityViolation) as err:
        typecheck({}, t, Discipline.SUBAFFINE)
    assert err.value.rule == "if_s"
    assert typecheck({}, t, Discipline.SIMPLE) == parse_type("B -> B")


def test_affine_accepts_plain_conditional_split():
    t = parse("\\x. \\y. \\z. if x then y else z")
    for d in Discipline:
        assert typecheck({}, t, d) == parse_type("B -> B -> B -> B")


def test_non_bool_condition():
    with pytest.raises(NonBoolCondition):
        typecheck({}, parse("if (\\x. x) then 0 else 1"))


def test_branch_mismatch():
    with pytest.raises(TypeMismatch):
        typecheck({}, parse("if coin then 0 else (\\x. x)"))


def test_error_records_are_structured():
    try:
        typecheck({}, parse(FIG1), Discipline.AFFINE)
    except AffinityViolation as err:
        record = err.record()
        assert record["error"] == "AffinityViolation"
        assert record["rule"] == "->e"
        assert record["path"].startswith("fun.body")
    else:
        pytest.fail("expected an affinity violation")


def test_choice_typing_shares_context():
    t = parse("\\x. x +[1/2] x", CalculusVariant.INTERNALIZED)
    for d in Discipline:
        assert typecheck({}, t, d) == parse_type("B -> B")


def test_choice_alternatives_must_agree():
    t = parse("0 +[1/2] (\\x. x)", CalculusVariant.INTERNALIZED)
    with pytest.raises(TypeMismatch):
        typecheck({}, t)


def test_context_variables_respect_affinity():
    ctx = {"f": parse_type("B -> B -> B"), "u": BOOL}
    assert typecheck(ctx, parse("f u u"), Discipline.SIMPLE) == BOOL
    with pytest.raises(AffinityViolation):
        typecheck(ctx, parse("f u u"), Discipline.AFFINE)


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_discipline_hierarchy(seed):
    # affine success implies sub-affine success implies simple success,
    # all at the same type
    rng = Random(seed)
    term, goal = closed_typed(rng, Discipline.AFFINE, size=rng.randint(3, 10))
    ty_affine = typecheck({}, term, Discipline.AFFINE)
    ty_sub = typecheck({}, term, Discipline.SUBAFFINE)
    ty_simple = typecheck({}, term, Discipline.SIMPLE)
    assert ty_affine == ty_sub == ty_simple
    assert typecheck({}, term, Discipline.SIMPLE, goal) == goal


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_subaffine_implies_simple(seed):
    rng = Random(seed)
    term, _ = closed_typed(rng, Discipline.SUBAFFINE, size=rng.randint(3, 10))
    ty_sub = typecheck({}, term, Discipline.SUBAFFINE)
    assert typecheck({}, term, Discipline.SIMPLE) == ty_sub


def _binder_occurrences(t) -> list[int]:
    """Occurrence count of every binder in a plain term, via fresh opening."""
    counter = [0]
    counts = []

    def walk(u):
        from lambcoin import App, If, Lam, Oplus
        match u:
            case Lam(body):
                counter[0] += 1
                probe = f"probe{counter[0]}"
                opened = instantiate(body, FreeVar(probe))
                counts.append(count_occurrences(opened, probe))
                walk(opened)
            case App(fun, arg):
                walk(fun)
                walk(arg)
            case If(cond, then, orelse):
                walk(cond)
                walk(then)
                walk(orelse)
            case Oplus(_, left, right):
                walk(left)
                walk(right)
            case _:
                pass

    walk(t)
    return counts


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_affine_usage_bound(seed):
    # in the plain calculus, affine typing bounds every binder at one use
    rng = Random(seed)
    term, _ = closed_typed(rng, Discipline.AFFINE, size=rng.randint(3, 10))
    typecheck({}, term, Discipline.AFFINE)
    assert all(count <= 1 for count in _binder_occurrences(term))


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_subject_reduction(seed):
    rng = Random(seed)
    discipline = rng.choice(list(Discipline))
    term, goal = closed_typed(rng, discipline, size=rng.randint(3, 10))
    ty = typecheck({}, term, discipline, goal)
    for pos in redexes(term):
        for _, reduct in step_at(term, pos).outcomes:
            assert typecheck({}, reduct, discipline, ty) == ty
