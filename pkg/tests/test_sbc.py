"""Permutation constraints: shape, lex contract, orbit retention."""

import random

import pytest
from helpers import (interchangeable4, named_program, p1, pc_violated,
                     symmetric_program)

from symbreak import oracle
from symbreak.permgroup import Permutation, group_closure, parse_cycles
from symbreak.program import rule
from symbreak.sbc import (FULL, IdentityPermutation, NotASymmetry, PcConfig,
                          assignment_image, build_pc, build_sbc,
                          lexleader_oracle, selected_indices, violates_lex)


def test_transposition_yields_single_rule():
    p = p1()
    rules, chain = build_pc(p, parse_cycles("(1 2)"))
    assert rules == [rule((), (1,), (2,))]
    assert chain == []


def test_identity_and_non_symmetry_rejected():
    p = p1()
    with pytest.raises(IdentityPermutation):
        build_pc(p, Permutation.identity())
    q = named_program([rule((1,), (), (2,))], 2)
    with pytest.raises(NotASymmetry):
        build_pc(q, parse_cycles("(1 2)"))


def test_rotation_constraint_block():
    p = interchangeable4()
    rules, chain = build_pc(p, parse_cycles("(1 2 3 4)"))
    assert len(chain) == 2  # supports 1,2,3 after dropping the cycle max
    c2, c3 = chain
    assert rule((), (1,), (2,)) in rules
    assert rule((), (c2,), ()) in rules
    assert rule((c2,), (1, 2), (3,)) in rules
    assert rule((c3,), (2, 3), (4,)) in rules
    assert rule((c2,), (1, c3), ()) in rules
    assert rule((c2,), (c3,), (2,)) in rules
    # the tail is false: nothing may reference a chain atom beyond c3
    assert all(max(r.atoms(), default=0) <= c3 for r in rules)


def test_rotation_keeps_both_expected_sets():
    p = interchangeable4()
    gens = [parse_cycles("(1 2)"), parse_cycles("(1 2 3 4)")]
    extended = build_sbc(p, gens)
    retained = oracle.enumerate_answer_sets(extended)
    assert frozenset({2, 4}) in retained
    assert frozenset({3, 4}) in retained


def test_transposition_chain_breaks_all():
    p = interchangeable4()
    gens = [parse_cycles("(1 2)"), parse_cycles("(2 3)"), parse_cycles("(3 4)")]
    retained = oracle.enumerate_answer_sets(build_sbc(p, gens))
    assert retained == lexleader_oracle(p, gens)
    assert len(retained) == 4  # one orbit per cardinality 0..3


def test_sbc_empty_generators_is_identity():
    p = p1()
    assert build_sbc(p, []) == p


def test_p1_sbc_keeps_lex_leader_only():
    p = p1()
    extended = build_sbc(p, [parse_cycles("(1 2)")])
    assert extended.rules == p.rules + (rule((), (1,), (2,)),)
    assert oracle.enumerate_answer_sets(extended) == [frozenset({2})]
    assert lexleader_oracle(p, [parse_cycles("(1 2)")]) == [frozenset({2})]


def test_lexleader_oracle_trivial_group():
    p = p1()
    assert lexleader_oracle(p, []) == oracle.enumerate_answer_sets(p)


def test_rotation_pc_contract_all_assignments():
    p = interchangeable4()
    perm = parse_cycles("(1 2 3)")
    cfg = FULL
    rules, chain = build_pc(p, perm, cfg)
    seq = selected_indices(p, perm, cfg)
    assert seq == [1, 2, 3, 4]
    for bits in range(16):
        m = {a for i, a in enumerate((1, 2, 3, 4)) if bits >> i & 1}
        assert pc_violated(rules, m) == violates_lex(m, perm, seq)


def test_pc_contract_random_suite():
    rng = random.Random(71)
    for _ in range(80):
        p, perm = symmetric_program(rng, n_atoms=5, n_rules=4)
        cfg = PcConfig(k_supports=rng.choice([0, 0, 1, 2]))
        rules, _ = build_pc(p, perm, cfg)
        seq = selected_indices(p, perm, cfg)
        atoms = sorted(p.atoms())
        for bits in range(1 << len(atoms)):
            m = {a for i, a in enumerate(atoms) if bits >> i & 1}
            assert pc_violated(rules, m) == violates_lex(m, perm, seq)


def test_full_group_sbc_is_exact_on_random_suite():
    rng = random.Random(73)
    done = 0
    while done < 12:
        p, perm = symmetric_program(rng, n_atoms=5, n_rules=4)
        closure = group_closure([perm])
        gens = sorted((g for g in closure if not g.is_identity()), key=repr)
        extended = build_sbc(p, gens)
        try:
            retained = oracle.enumerate_answer_sets(extended, atom_budget=14)
        except oracle.TooLarge:
            continue  # too many chain atoms for brute force; next sample
        assert retained == lexleader_oracle(p, [perm])
        done += 1


def test_generator_only_sbc_sound_and_covering():
    rng = random.Random(79)
    done = 0
    while done < 12:
        p, perm = symmetric_program(rng, n_atoms=5, n_rules=4)
        answer_sets = oracle.enumerate_answer_sets(p)
        extended = build_sbc(p, [perm])
        retained = set(oracle.enumerate_answer_sets(extended))
        assert retained <= set(answer_sets)
        visible = sorted(p.visible_atoms())
        closure = group_closure([perm])
        orbits = {frozenset(assignment_image(m, g, visible) for g in closure)
                  for m in answer_sets}
        for orb in orbits:
            assert orb & retained, "an orbit lost all its members"
        assert len(retained) >= len(orbits)
        done += 1


def test_k_support_monotone():
    p = interchangeable4()
    gens = [parse_cycles("(1 2 3 4)")]
    sizes = []
    for k in (1, 2, 3, 0):
        cfg = PcConfig(k_supports=k)
        retained = oracle.enumerate_answer_sets(build_sbc(p, gens, cfg))
        sizes.append(set(retained))
    assert sizes[3] <= sizes[2] <= sizes[1] <= sizes[0]


def test_satisfiability_preserved_both_ways():
    sat = p1()
    gens = [parse_cycles("(1 2)")]
    assert oracle.enumerate_answer_sets(build_sbc(sat, gens))
    unsat = named_program([rule((1, 2)), rule((), (1,)), rule((), (2,))], 2)
    assert oracle.enumerate_answer_sets(unsat) == []
    assert oracle.enumerate_answer_sets(build_sbc(unsat, gens)) == []


def test_custom_atom_order_contract():
    # the order is configurable; the lex contract must follow the order given
    p = interchangeable4()
    perm = parse_cycles("(1 2 3)")
    order = [4, 3, 2, 1]
    rules, _ = build_pc(p, perm, FULL, order=order)
    seq = selected_indices(p, perm, FULL, order=order)
    assert seq == order
    for bits in range(16):
        m = {a for i, a in enumerate((1, 2, 3, 4)) if bits >> i & 1}
        vec = tuple(1 if a in m else 0 for a in seq)
        img = tuple(1 if perm(a) in m else 0 for a in seq)
        assert pc_violated(rules, m) == (vec > img)


def test_fact_pair_reduction():
    p = named_program([rule((1,)), rule((2,)), rule((3,), (1,)),
                       rule((4,), (2,))], 4)
    perm = parse_cycles("(1 2)(3 4)")
    seq = selected_indices(p, perm, PcConfig())
    assert 1 not in seq and 2 not in seq  # both sides of the swap are facts
    assert 3 in seq
