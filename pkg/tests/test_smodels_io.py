"""Reader/writer fidelity for the smodels format and the text notation."""

import random

import pytest
from helpers import named_program, p1, random_program

from symbreak.program import CARDINALITY, CHOICE, Program, Rule, rule
from symbreak.smodels_io import (ParseError, UnsupportedRuleType, read_smodels,
                                 read_text, write_smodels, write_text)

P1_BYTES = b"1 1 1 1 2\n1 2 1 1 1\n0\n1 a\n2 b\n0\nB+\n0\nB-\n0\n1\n"


def test_p1_fixture_bytes_parse():
    assert read_smodels(P1_BYTES) == p1()


def test_p1_writer_reproduces_fixture_bytes():
    assert write_smodels(p1()) == P1_BYTES


def test_empty_rules_section():
    p = read_smodels(b"0\n1 a\n0\nB+\n0\nB-\n0\n1\n")
    assert p.rules == ()
    assert p.symbols == {1: "a"}


def test_weight_rule_rejected():
    data = b"5 1 2 2 1 2 3 1 1\n0\n0\nB+\n0\nB-\n0\n1\n"
    with pytest.raises(UnsupportedRuleType):
        read_smodels(data)


def test_trailing_garbage_rejected():
    with pytest.raises(ParseError):
        read_smodels(P1_BYTES + b"junk\n")


def test_malformed_counts_rejected():
    with pytest.raises(ParseError):
        read_smodels(b"1 1 2 1 2\n0\n0\nB+\n0\nB-\n0\n1\n")


def test_choice_and_cardinality_round_trip():
    p = Program((Rule(CHOICE, (1, 2), (3,), ()),
                 Rule(CARDINALITY, (4,), (1, 2), (3,), 2),
                 rule((3,))), 4, {1: "a", 2: "b", 3: "c", 4: "d"})
    assert read_smodels(write_smodels(p)) == p


def test_integrity_constraint_falsity_allocation():
    p = named_program([rule((), (1, 2))], 2)
    data = write_smodels(p)
    # fresh hidden falsity atom 3 heads the constraint and lands in B-
    assert b"1 3 2 0 1 2" in data
    assert b"B-\n3\n0" in data
    assert read_smodels(data) == p


def test_integrity_constraint_reuses_unreferenced_hidden_false_atom():
    p = Program((rule((), (1, 2)), rule((4,))), 4, {1: "a", 2: "b", 4: "d"},
                compute_false=frozenset({3}))
    data = write_smodels(p)
    assert b"1 3 2 0 1 2" in data
    assert read_smodels(data) == p


def test_falsity_never_reuses_top_id():
    # atom 3 is hidden and in B-, but it is the highest id the bytes carry,
    # so the writer must allocate 4 to keep the round trip exact
    p = Program((rule((), (1, 2)),), 3, {1: "a", 2: "b"},
                compute_false=frozenset({3}))
    data = write_smodels(p)
    assert b"1 4 2 0 1 2" in data
    assert read_smodels(data) == p


def test_compute_sections_preserved():
    p = Program((rule((1,), (), (2,)), rule((2,), (), (1,))), 2,
                {1: "a", 2: "b"}, compute_true=frozenset({1}),
                compute_false=frozenset({2}), models_requested=0)
    q = read_smodels(write_smodels(p))
    assert q == p


def test_round_trip_random_suite_and_byte_stability():
    rng = random.Random(9)
    for _ in range(60):
        p = random_program(rng, n_atoms=5, n_rules=6)
        data = write_smodels(p)
        q = read_smodels(data)
        assert q == p
        assert write_smodels(q) == data


def test_text_p1():
    p = read_text("a :- not b.\nb :- not a.\n")
    assert p == p1()


def test_text_interchangeable_program():
    p = read_text("{a1,a2,a3,a4}.\n:- a1,a2,a3,a4.\n")
    assert p.rules == (Rule(CHOICE, (1, 2, 3, 4), (), ()),
                       rule((), (1, 2, 3, 4)))
    assert p.symbols[1] == "a1"


def test_text_cardinality():
    p = read_text(":- 2 {p(1,1), p(2,1)}.")
    assert p.rules == (Rule(CARDINALITY, (), (1, 2), (), 2),)
    assert p.symbols == {1: "p(1,1)", 2: "p(2,1)"}


def test_text_disjunction_and_comments():
    p = read_text("% guess\na ; b :- c, not d.\n")
    assert p.rules == (rule((1, 2), (3,), (4,)),)


def test_text_round_trip():
    src = "a :- not b.\nb :- not a.\nc ; d :- a.\n{e} :- c.\n:- 2 {c, d}.\n"
    p = read_text(src)
    assert read_text(write_text(p)) == p


def test_text_rejects_garbage():
    with pytest.raises(ParseError):
        read_text("a :- $$$.\n")
    with pytest.raises(ParseError):
        read_text("a :- b\n")  # missing period


def test_reader_fuzz_never_leaks_raw_errors():
    rng = random.Random(0)
    base = write_smodels(p1())
    for _ in range(1500):
        mutated = bytearray(base)
        for _ in range(rng.randint(1, 4)):
            i = rng.randrange(len(mutated))
            mutated[i] = rng.choice(b"0123456789 \nab-")
        try:
            read_smodels(bytes(mutated))
        except ParseError:
            pass
    text = "a :- not b.\n{c, d} :- a.\n:- 2 {c, not d}.\n"
    for _ in range(1500):
        chars = list(text)
        for _ in range(rng.randint(1, 3)):
            i = rng.randrange(len(chars))
            chars[i] = rng.choice("abc{}();,.:- 123%not")
        try:
            read_text("".join(chars))
        except ParseError:
            pass
