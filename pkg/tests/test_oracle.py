"""Reference semantics: reduct, answer-set test, exhaustive enumeration."""

import itertools
import random

import pytest
from helpers import interchangeable4, named_program, p1, p2, random_program

from symbreak import oracle
from symbreak.program import Program, UnexpandedRule, rule, shift


def test_reduct_p1():
    assert oracle.reduct(p1(), {1}).rules == (rule((1,)),)
    assert oracle.reduct(p1(), set()).rules == (rule((1,)), rule((2,)))


def test_reduct_p2():
    red = oracle.reduct(p2(), {1})
    assert red.rules == (rule((1, 2)), rule((), (1, 2)))


def test_reduct_rejects_unexpanded():
    p = named_program([], 1)
    q = Program((rule((1,)),), 1)
    from symbreak.program import CHOICE, Rule
    with pytest.raises(UnexpandedRule):
        oracle.reduct(named_program([Rule(CHOICE, (1,), (), ())], 1), set())


def test_is_answer_set_example_programs():
    assert oracle.is_answer_set(p1(), {1})
    assert oracle.is_answer_set(p1(), {2})
    assert not oracle.is_answer_set(p1(), {1, 2})
    assert not oracle.is_answer_set(p1(), set())
    assert oracle.is_answer_set(p2(), {1})
    assert not oracle.is_answer_set(p2(), {1, 2})


def test_empty_program_empty_set():
    assert oracle.is_answer_set(named_program([], 1), set())


def test_compute_sections_respected():
    p = Program((rule((1,), (), (2,)), rule((2,), (), (1,))), 2,
                {1: "a", 2: "b"}, compute_false=frozenset({1}))
    assert oracle.enumerate_answer_sets(p) == [frozenset({2})]
    q = Program((rule((1,), (), (2,)), rule((2,), (), (1,))), 2,
                {1: "a", 2: "b"}, compute_true=frozenset({1}))
    assert oracle.enumerate_answer_sets(q) == [frozenset({1})]


def test_enumerate_p1_lex_order():
    assert oracle.enumerate_answer_sets(p1()) == [frozenset({2}), frozenset({1})]


def test_enumerate_interchangeable4():
    sets = oracle.enumerate_answer_sets(interchangeable4())
    assert len(sets) == 15  # every subset except the full one
    assert frozenset({1, 2, 3, 4}) not in sets


def test_enumerate_respects_budget():
    p = named_program([rule((i,), (), ()) for i in range(1, 9)], 8)
    with pytest.raises(oracle.TooLarge):
        oracle.enumerate_answer_sets(p, atom_budget=4)


def definition_check(p, m):
    """Independent answer-set test straight from the definition, checking
    minimality against every subset of the reduct's atom universe."""
    red = oracle.reduct(p, m)
    atoms = sorted({a for r in red.rules for a in r.atoms()} | set(m))

    def is_model(s):
        for r in red.rules:
            if s.issuperset(r.body_pos) and s.isdisjoint(r.head):
                return False
        return True

    if not oracle.respects_compute(p, m):
        return False
    if not is_model(frozenset(m)):
        return False
    for k in range(len(atoms) + 1):
        for combo in itertools.combinations(atoms, k):
            s = frozenset(combo)
            if s < frozenset(m) and is_model(s):
                return False
    return True


def test_enumeration_matches_definition_on_random_suite():
    rng = random.Random(3)
    for _ in range(40):
        p = random_program(rng, n_atoms=4, n_rules=5)
        expected = []
        atoms = sorted(p.atoms())
        n = len(atoms)
        for bits in range(1 << n):
            m = frozenset(atoms[i] for i in range(n) if bits >> (n - 1 - i) & 1)
            if definition_check(p, m):
                expected.append(m)
        got = oracle.enumerate_answer_sets(p)
        assert sorted(got) == sorted(expected)


def test_shift_preserves_answer_sets_on_tight_suite():
    from symbreak.program import is_tight
    rng = random.Random(5)
    checked = 0
    while checked < 30:
        p = random_program(rng, n_atoms=5, n_rules=5)
        if not is_tight(p):
            continue
        checked += 1
        assert oracle.enumerate_answer_sets(shift(p)) == \
            oracle.enumerate_answer_sets(p)
