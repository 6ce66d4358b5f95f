"""Program model, normalisation, shifting, expansion, tightness."""

import random

import pytest
from helpers import named_program, p1, random_program

from symbreak import oracle
from symbreak.program import (CARDINALITY, CHOICE, CardinalityDuplicate,
                              Program, Rule, UnexpandedRule, expand,
                              expand_cardinality, expand_choice, is_tight,
                              normalize, rule, shift)


def test_rule_canonical_order():
    r = rule((2, 1), (5, 3), (4,))
    assert r.head == (1, 2)
    assert r.body_pos == (3, 5)


def test_rule_rejects_duplicate_heads():
    with pytest.raises(ValueError):
        rule((1, 1))


def test_normalize_dedups_body_literals():
    p = named_program([rule((1,), (2, 2))], 2)
    assert normalize(p).rules == (rule((1,), (2,)),)


def test_normalize_drops_inapplicable_body():
    p = named_program([rule((1,), (2,), (2,))], 2)
    assert normalize(p).rules == ()


def test_normalize_keeps_p1_unchanged():
    p = p1()
    assert normalize(p) == p


def test_normalize_drops_duplicate_rules_keep_first():
    p = named_program([rule((1,), (2,)), rule((1,), (2, 2)), rule((2,))], 2)
    assert normalize(p).rules == (rule((1,), (2,)), rule((2,)))


def test_normalize_tautology_flag():
    p = named_program([rule((1,), (1,)), rule((2,))], 2)
    assert normalize(p).rules == p.rules
    assert normalize(p, drop_tautologies=True).rules == (rule((2,)),)


def test_normalize_idempotent_on_random_suite():
    rng = random.Random(7)
    for _ in range(50):
        p = random_program(rng, n_atoms=5, n_rules=6)
        q = normalize(p)
        assert normalize(q) == q


def test_normalize_cardinality_duplicate_is_an_error():
    p = named_program([Rule(CARDINALITY, (), (1, 1, 2), (), 2)], 2)
    with pytest.raises(CardinalityDuplicate):
        normalize(p)


def test_normalize_keeps_cardinality_with_mixed_signs():
    p = named_program([Rule(CARDINALITY, (), (1,), (1,), 2)], 1)
    assert normalize(p).rules == p.rules


def test_shift_two_atom_disjunction():
    p = named_program([rule((1, 2))], 2)
    assert shift(p).rules == (rule((1,), (), (2,)), rule((2,), (), (1,)))


def test_shift_fixes_singletons_and_constraints():
    p = named_program([rule((1,), (3,)), rule((), (1, 2))], 3)
    assert shift(p).rules == p.rules


def test_shift_three_atom_disjunction_counts():
    p = named_program([rule((1, 2, 3))], 3)
    shifted = shift(p)
    assert len(shifted.rules) == 3
    assert all(len(r.body_neg) == 2 for r in shifted.rules)
    assert oracle.enumerate_answer_sets(shifted) == \
        oracle.enumerate_answer_sets(p)


def test_shift_rejects_unexpanded():
    p = named_program([Rule(CHOICE, (1,), (), ())], 1)
    with pytest.raises(UnexpandedRule):
        shift(p)


def test_binomial_single_subset():
    p = named_program([Rule(CARDINALITY, (), (1, 2), (), 2)], 2)
    assert expand_cardinality(p, "binomial").rules == (rule((), (1, 2)),)


def test_binomial_three_choose_two():
    p = named_program([Rule(CARDINALITY, (), (1, 2, 3), (), 2)], 3)
    assert expand_cardinality(p, "binomial").rules == (
        rule((), (1, 2)), rule((), (1, 3)), rule((), (2, 3)))


def test_ladder_size_and_equivalence():
    guess = [Rule(CHOICE, (1, 2, 3), (), ())]
    card = [Rule(CARDINALITY, (), (1, 2, 3), (), 2)]
    p = named_program(guess + card, 3)
    ladder = expand_cardinality(p, "ladder")
    n_new = len(ladder.rules) - len(guess)
    assert n_new <= 3 * 3 * 2 + 1
    binom = expand_cardinality(p, "binomial")
    assert oracle.enumerate_answer_sets(ladder) == \
        oracle.enumerate_answer_sets(binom)


def test_cardinality_bound_zero_forbids_everything():
    p = named_program([Rule(CHOICE, (1,), (), ()),
                       Rule(CARDINALITY, (), (1,), (), 0)], 1)
    assert oracle.enumerate_answer_sets(p) == []


def test_cardinality_bound_above_size_never_fires():
    p = named_program([Rule(CHOICE, (1,), (), ()),
                       Rule(CARDINALITY, (), (1,), (), 5)], 1)
    for mode in ("binomial", "ladder"):
        q = expand_cardinality(p, mode)
        assert oracle.enumerate_answer_sets(q) == [frozenset(), frozenset({1})]


def test_headed_cardinality_derives():
    # h <- 2{a, b}: h holds exactly when both hold
    p = Program((Rule(CHOICE, (1, 2), (), ()),
                 Rule(CARDINALITY, (3,), (1, 2), (), 2)), 3,
                {1: "a", 2: "b", 3: "h"})
    for mode in ("binomial", "ladder"):
        sets = oracle.enumerate_answer_sets(expand_cardinality(p, mode))
        assert frozenset({1, 2, 3}) in sets
        assert frozenset({1, 2}) not in sets
        assert frozenset({1}) in sets


def test_expand_choice_singleton():
    p = named_program([Rule(CHOICE, (1,), (), ())], 1)
    q = expand_choice(p)
    assert q.atom_count == 2
    assert q.rules == (rule((1,), (), (2,)), rule((2,), (), (1,)))
    assert oracle.enumerate_answer_sets(q) == [frozenset(), frozenset({1})]


def test_expand_choice_two_atoms_all_subsets():
    p = named_program([Rule(CHOICE, (1, 2), (), ())], 2)
    sets = oracle.enumerate_answer_sets(expand_choice(p))
    assert len(sets) == 4


def test_expand_choice_empty_head_removed():
    p = named_program([Rule(CHOICE, (), (3,), ()), rule((3,))], 3)
    assert normalize(expand_choice(p)).rules == (rule((3,)),)


def test_expansion_modes_agree_on_random_cardinality_suite():
    # the ladder adds n*k hidden atoms, so keep the brute-force space small
    rng = random.Random(11)
    for _ in range(12):
        n = rng.randint(1, 3)
        atoms = list(range(1, n + 1))
        bound = rng.randint(0, min(n, 2))
        pos = tuple(a for a in atoms if rng.random() < 0.7)
        neg = tuple(a for a in atoms if a not in pos)
        p = named_program([Rule(CHOICE, tuple(atoms), (), ()),
                           Rule(CARDINALITY, (), pos, neg, bound)], n)
        sets_b = oracle.enumerate_answer_sets(expand_cardinality(p, "binomial"))
        sets_l = oracle.enumerate_answer_sets(expand_cardinality(p, "ladder"))
        assert sets_b == sets_l


def test_is_tight():
    assert is_tight(p1())
    cyc = named_program([rule((1,), (2,)), rule((2,), (1,))], 2)
    assert not is_tight(cyc)
    self_loop = named_program([rule((1,), (1,))], 1)
    assert not is_tight(self_loop)


def test_is_tight_requires_expansion():
    p = named_program([Rule(CHOICE, (1,), (), ())], 1)
    with pytest.raises(UnexpandedRule):
        is_tight(p)
    assert is_tight(expand(p))
