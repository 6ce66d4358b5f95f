"""Automorphism search vs brute force; projection to atom permutations."""

import random

from helpers import named_program, p1, random_program

from symbreak.autgrp import (brute_force_automorphisms, detect_symmetries,
                             find_automorphisms, project_to_atoms)
from symbreak.graphenc import ColouredGraph, EncodeOptions, encode_graph
from symbreak.permgroup import (PermGroup, Permutation, group_closure,
                                is_program_symmetry, parse_cycles)


def graph(n, edges, colours=None):
    return ColouredGraph(n, list(colours or [1] * n), frozenset(edges),
                         {})


def two_cell_example():
    # three vertices u,v,w (0,1,2), partition {u,v} vs {w}
    return graph(3, {(0, 1), (0, 2), (1, 0), (1, 2)}, [1, 1, 2])


def test_example_graph_single_swap():
    g = two_cell_example()
    gens = find_automorphisms(g)
    grp = group_closure(gens)
    assert grp == {Permutation.identity(), parse_cycles("(0 1)")}


def test_brute_force_example():
    auts = brute_force_automorphisms(two_cell_example())
    assert len(auts) == 2


def test_brute_force_trivia():
    assert brute_force_automorphisms(graph(1, set())) == [Permutation.identity()]
    auts = brute_force_automorphisms(graph(2, set()))
    assert len(auts) == 2


def test_rigid_coloured_path():
    g = graph(3, {(0, 1), (1, 2)}, [1, 2, 3])
    assert find_automorphisms(g) == []


def test_p1_graph_group_order_two():
    g = encode_graph(p1())
    gens = find_automorphisms(g)
    assert PermGroup(gens).order() == 2
    projected = [project_to_atoms(g, gamma) for gamma in gens]
    assert parse_cycles("(1 2)") in projected


def test_projection_identity_is_none():
    g = encode_graph(p1())
    assert project_to_atoms(g, Permutation.identity()) is None


def test_projection_of_body_only_swap_is_none():
    # two rules with identical bodies: their body vertices swap while every
    # literal vertex stays put, so the atom projection is the identity
    from symbreak.autgrp import _is_automorphism
    from symbreak.graphenc import COLOUR_BODY
    from symbreak.program import rule
    p = named_program([rule((1,), (2, 3)), rule((1,), (2, 3))], 3)
    g = encode_graph(p, EncodeOptions(direct_single=False))
    b1, b2 = [v for v in range(g.vertex_count)
              if g.colours[v] == COLOUR_BODY]
    swap = list(range(g.vertex_count))
    swap[b1], swap[b2] = b2, b1
    assert _is_automorphism(g, swap)
    assert project_to_atoms(g, Permutation({b1: b2, b2: b1})) is None


def random_coloured_digraph(rng, max_n=8):
    n = rng.randint(1, max_n)
    colours = [rng.randint(1, 3) for _ in range(n)]
    edges = set()
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < 0.3:
                edges.add((u, v))
    return graph(n, edges, colours)


def same_group(gens_a, elements_b):
    grp_a = group_closure(gens_a)
    return grp_a == set(elements_b)


def test_search_matches_brute_force_on_random_digraphs():
    rng = random.Random(47)
    for _ in range(60):
        g = random_coloured_digraph(rng)
        found = find_automorphisms(g)
        brute = brute_force_automorphisms(g)
        assert same_group(found, brute)


def test_search_deterministic():
    rng = random.Random(53)
    g = random_coloured_digraph(rng)
    assert find_automorphisms(g) == find_automorphisms(g)


def program_symmetries_brute(p):
    atoms = sorted(p.atoms())
    out = []
    import itertools
    for image in itertools.permutations(atoms):
        perm = Permutation(dict(zip(atoms, image)))
        if is_program_symmetry(p, perm):
            out.append(perm)
    return out


def test_detection_matches_program_symmetries_on_random_programs():
    rng = random.Random(59)
    for _ in range(25):
        p = random_program(rng, n_atoms=4, n_rules=4)
        if not p.rules:
            continue
        gens, _ = detect_symmetries(p)
        expected = set(program_symmetries_brute(p))
        assert group_closure(gens) == expected


def test_optimisations_do_not_change_projected_group():
    rng = random.Random(61)
    full = EncodeOptions()
    off = EncodeOptions(fact_colour=False, direct_single=False,
                        bottom_vertex=False)
    for _ in range(20):
        p = random_program(rng, n_atoms=4, n_rules=5)
        if not p.rules:
            continue
        with_opts, _ = detect_symmetries(p, full)
        without, _ = detect_symmetries(p, off)
        assert group_closure(with_opts) == group_closure(without)


def test_mate_consistency_checked_on_every_generator():
    rng = random.Random(67)
    for _ in range(20):
        p = random_program(rng, n_atoms=5, n_rules=5)
        g = encode_graph(p)
        for gamma in find_automorphisms(g):
            pi = project_to_atoms(g, gamma)  # raises on inconsistency
            if pi is not None:
                assert is_program_symmetry(p, pi)
