"""Deterministic generators for the benchmark families.

All generators emit fully named atoms in a fixed order, never produce
duplicate body literals, and depend only on their parameters (plus the seed
where one exists).
"""

import itertools
import random

from .program import CARDINALITY, CHOICE, DISJUNCTIVE, Program, Rule
from .valsym import AllDifferent, CspSpec, Table


class _Names:
    def __init__(self):
        self.ids = {}

    def __call__(self, name):
        if name not in self.ids:
            self.ids[name] = len(self.ids) + 1
        return self.ids[name]

    def symbols(self):
        return {i: n for n, i in self.ids.items()}


def _program(names, rules, models=1):
    return Program(tuple(rules), len(names.ids), names.symbols(),
                   models_requested=models)


def gen_pigeons(n, variant="disjunctive", holes=None):
    """Place n pigeons into holes (default n-1), one per hole.

    disjunctive: guess by disjunction; support: choice plus at-least-one plus
    at-most-one cardinality.  Both add pairwise hole-exclusion constraints.
    """
    if n < 1:
        raise ValueError("need at least one pigeon")
    holes = n - 1 if holes is None else holes
    names = _Names()
    atom = lambda i, j: names(f"p({i},{j})")
    rules = []
    for i in range(1, n + 1):
        row = [atom(i, j) for j in range(1, holes + 1)]
        if variant == "disjunctive":
            rules.append(Rule(DISJUNCTIVE, tuple(row), (), ()))
        elif variant == "support":
            rules.append(Rule(CHOICE, tuple(row), (), ()))
            rules.append(Rule(DISJUNCTIVE, (), (), tuple(row)))
            rules.append(Rule(CARDINALITY, (), tuple(row), (), 2))
        else:
            raise ValueError(f"unknown pigeon variant {variant!r}")
    for j in range(1, holes + 1):
        for i, k in itertools.combinations(range(1, n + 1), 2):
            rules.append(Rule(DISJUNCTIVE, (), (atom(i, j), atom(k, j)), ()))
    return _program(names, rules)


def gen_allint(n):
    """All-interval series of size n: a permutation of 0..n-1 whose adjacent
    differences are also pairwise distinct."""
    if n < 3:
        raise ValueError("series needs n >= 3")
    names = _Names()
    v = lambda i, j: names(f"v({i},{j})")
    d = lambda k, l: names(f"d({k},{l})")
    for i in range(1, n + 1):
        for j in range(n):
            v(i, j)
    for k in range(1, n):
        for l in range(1, n):
            d(k, l)
    rules = []
    for i in range(1, n + 1):
        rules.append(Rule(DISJUNCTIVE, tuple(v(i, j) for j in range(n)), (), ()))
    for k in range(n):
        for i, j in itertools.combinations(range(1, n + 1), 2):
            rules.append(Rule(DISJUNCTIVE, (), (v(i, k), v(j, k)), ()))
    for i in range(1, n):
        for j in range(n):
            for k in range(n):
                if j != k:
                    rules.append(Rule(DISJUNCTIVE, (d(i, abs(j - k)),),
                                      (v(i, j), v(i + 1, k)), ()))
    for l in range(1, n):
        for i, j in itertools.combinations(range(1, n), 2):
            rules.append(Rule(DISJUNCTIVE, (), (d(i, l), d(j, l)), ()))
    return _program(names, rules)


def gen_ramsey(k, m, n):
    """Two-colour the edges of K_n avoiding a red k-clique and a blue m-clique."""
    if k < 2 or m < 2 or n < 2:
        raise ValueError("clique sizes and vertex count must be at least 2")
    names = _Names()
    blue = lambda i, j: names(f"blue({i},{j})")
    red = lambda i, j: names(f"red({i},{j})")
    rules = []
    for i, j in itertools.combinations(range(1, n + 1), 2):
        rules.append(Rule(DISJUNCTIVE, (blue(i, j), red(i, j)), (), ()))
    for clique in itertools.combinations(range(1, n + 1), k):
        rules.append(Rule(DISJUNCTIVE, (),
                          tuple(red(i, j)
                                for i, j in itertools.combinations(clique, 2)),
                          ()))
    for clique in itertools.combinations(range(1, n + 1), m):
        rules.append(Rule(DISJUNCTIVE, (),
                          tuple(blue(i, j)
                                for i, j in itertools.combinations(clique, 2)),
                          ()))
    return _program(names, rules)


def gen_schur(n, k):
    """Partition 1..n into k classes with no monochromatic x + y = z
    (x and y not necessarily distinct)."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    names = _Names()
    inpart = lambda x, c: names(f"inpart({x},{c})")
    rules = []
    for x in range(1, n + 1):
        row = [inpart(x, c) for c in range(1, k + 1)]
        rules.append(Rule(CHOICE, tuple(row), (), ()))
        rules.append(Rule(DISJUNCTIVE, (), (), tuple(row)))
        rules.append(Rule(CARDINALITY, (), tuple(row), (), 2))
    for x in range(1, n + 1):
        for y in range(x, n + 1):
            z = x + y
            if z > n:
                break
            for c in range(1, k + 1):
                body = sorted({inpart(x, c), inpart(y, c), inpart(z, c)})
                rules.append(Rule(DISJUNCTIVE, (), tuple(body), ()))
    return _program(names, rules)


def random_graph(n, density, seed):
    """Simple undirected graph: each pair becomes an edge with the given
    probability, deterministic under the seed."""
    rng = random.Random(seed)
    edges = []
    for i, j in itertools.combinations(range(1, n + 1), 2):
        if rng.random() < density:
            edges.append((i, j))
    return edges


def gen_colouring(edges, k, n_vertices=None):
    """Proper k-colouring of the given simple undirected graph."""
    vertices = sorted({u for e in edges for u in e})
    if n_vertices is not None:
        vertices = sorted(set(vertices) | set(range(1, n_vertices + 1)))
    names = _Names()
    colour = lambda v, c: names(f"colour({v},{c})")
    rules = []
    for v in vertices:
        row = [colour(v, c) for c in range(1, k + 1)]
        rules.append(Rule(CHOICE, tuple(row), (), ()))
        rules.append(Rule(DISJUNCTIVE, (), (), tuple(row)))
        rules.append(Rule(CARDINALITY, (), tuple(row), (), 2))
    for u, w in sorted(set(map(tuple, map(sorted, edges)))):
        if u == w:
            raise ValueError("self-loops make colouring unsatisfiable")
        for c in range(1, k + 1):
            rules.append(Rule(DISJUNCTIVE, (), (colour(u, c), colour(w, c)), ()))
    return _program(names, rules)


def _double_wheel_edges(n):
    edges = []
    hub = 2 * n + 1
    for copy in (0, 1):
        base = copy * n
        for i in range(1, n + 1):
            j = base + i
            nxt = base + (i % n) + 1
            edges.append(tuple(sorted((j, nxt))))
            edges.append((j, hub))
    return sorted(set(edges))


def _clique_path_edges(n, m):
    edges = []
    vid = lambda copy, v: copy * n + v
    for copy in range(m):
        for a, b in itertools.combinations(range(1, n + 1), 2):
            edges.append((vid(copy, a), vid(copy, b)))
    for copy in range(m - 1):
        for v in range(1, n + 1):
            edges.append((vid(copy, v), vid(copy + 1, v)))
    return sorted(set(edges))


def gen_graceful(family, n, m=None):
    """Graceful-labelling instance as a CSP.

    DW(n): two n-cycles joined to one hub.  KP(n, m): m copies of the clique
    K_n whose corresponding vertices form paths.  Vertex labels 0..|E| are
    encoded shifted by one (value x stands for label x-1); edge labels carry
    the absolute difference of their endpoints and must be all-different.
    """
    if family == "DW":
        if n < 3:
            raise ValueError("double wheel needs n >= 3")
        edges = _double_wheel_edges(n)
        n_vertices = 2 * n + 1
    elif family == "KP":
        if m is None or n < 2 or m < 2:
            raise ValueError("clique-path needs n >= 2 and m >= 2")
        edges = _clique_path_edges(n, m)
        n_vertices = n * m
    else:
        raise ValueError(f"unknown graceful family {family!r}")
    n_edges = len(edges)
    names = []
    domains = []
    for v in range(1, n_vertices + 1):
        names.append(f"f{v}")
        domains.append(n_edges + 1)  # value x encodes label x-1
    for e in range(1, n_edges + 1):
        names.append(f"l{e}")
        domains.append(n_edges)
    constraints = [AllDifferent(tuple(range(n_vertices)))]
    for e, (u, w) in enumerate(edges):
        allowed = frozenset(
            (a, b, abs(a - b))
            for a, b in itertools.permutations(range(1, n_edges + 2), 2))
        constraints.append(
            Table((u - 1, w - 1, n_vertices + e), allowed))
    constraints.append(
        AllDifferent(tuple(range(n_vertices, n_vertices + n_edges))))
    return CspSpec(tuple(names), tuple(domains), tuple(constraints))


def shuffle_atoms(p, seed):
    """Renumber atoms randomly but reproducibly; symbols follow along."""
    rng = random.Random(seed)
    ids = list(range(1, p.atom_count + 1))
    shuffled = ids[:]
    rng.shuffle(shuffled)
    remap = dict(zip(ids, shuffled))
    rules = tuple(
        Rule(r.kind,
             tuple(remap[a] for a in r.head),
             tuple(remap[a] for a in r.body_pos),
             tuple(remap[a] for a in r.body_neg),
             r.bound) for r in p.rules)
    symbols = {remap[a]: nm for a, nm in p.symbols.items()}
    return Program(rules, p.atom_count, dict(sorted(symbols.items())),
                   frozenset(remap[a] for a in p.compute_true),
                   frozenset(remap[a] for a in p.compute_false),
                   p.models_requested)
