"""Automorphism-group generators for coloured digraphs, plus a brute-force
oracle and the projection from graph symmetries down to atom permutations.

The search individualises members of the first smallest non-singleton cell
after equitable refinement.  The first leaf fixes a base labelling; along the
base path, siblings already reachable by discovered generators are skipped,
and every other branch only needs to produce a single matching leaf.
"""

import itertools

from .graphenc import encode_graph, EncodeOptions
from .kernel import refine_partition
from .permgroup import Permutation, is_program_symmetry


class SearchBudgetExceeded(Exception):
    pass


class TooLarge(Exception):
    pass


class InconsistentProjection(Exception):
    """A graph automorphism broke the positive/negative vertex pairing."""


def _initial_cells(g):
    by_colour = {}
    for v in range(g.vertex_count):
        by_colour.setdefault(g.colours[v], []).append(v)
    return [sorted(by_colour[c]) for c in sorted(by_colour)]


def _first_branch_cell(cells):
    best = None
    for i, cell in enumerate(cells):
        if len(cell) > 1 and (best is None or len(cell) < len(cells[best])):
            best = i
    return best


def _individualise(cells, idx, v):
    cell = cells[idx]
    rest = [u for u in cell if u != v]
    return cells[:idx] + [[v], rest] + cells[idx + 1:]


def _is_automorphism(g, perm):
    """Independent edge-preservation check for a candidate vertex map."""
    edges = g.edges
    for u, v in edges:
        if (perm[u], perm[v]) not in edges:
            return False
    for v in range(g.vertex_count):
        if g.colours[perm[v]] != g.colours[v]:
            return False
    return True


class _Orbits:
    """Union-find over vertices; tracks orbits of the generators found so far."""

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def absorb(self, perm):
        for v, w in enumerate(perm):
            if v != w:
                self.union(v, w)


def find_automorphisms(g, node_budget=200000):
    """Generators of the automorphism group, deterministic for a fixed input."""
    n = g.vertex_count
    if n == 0:
        return []
    nodes = [0]

    def refined(cells):
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise SearchBudgetExceeded(f"more than {node_budget} search nodes")
        return refine_partition(n, g.out_nbrs, g.in_nbrs, cells)

    root = refined(_initial_cells(g))
    base_path = []   # per depth: (cells, branch cell index, branch vertex)
    cells = root
    while True:
        idx = _first_branch_cell(cells)
        if idx is None:
            break
        v = cells[idx][0]
        base_path.append((cells, idx, v))
        cells = refined(_individualise(cells, idx, v))
    base_leaf = [c[0] for c in cells]
    shapes = [tuple(len(c) for c in step[0]) for step in base_path]
    shapes.append(tuple(1 for _ in base_leaf))  # leaves must be discrete here

    generators = []
    orbits = _Orbits(n)

    def leaf_perm(leaf):
        perm = [0] * n
        for i, v in enumerate(leaf):
            perm[base_leaf[i]] = v
        return perm

    def search_one(cells, depth):
        """Find a single automorphism leaf below this node, or None."""
        if depth >= len(shapes) or tuple(len(c) for c in cells) != shapes[depth]:
            return None
        idx = _first_branch_cell(cells)
        if idx is None:
            perm = leaf_perm([c[0] for c in cells])
            return perm if _is_automorphism(g, perm) else None
        for v in cells[idx]:
            found = search_one(refined(_individualise(cells, idx, v)),
                               depth + 1)
            if found is not None:
                return found
        return None

    for depth in range(len(base_path) - 1, -1, -1):
        cells, idx, base_v = base_path[depth]
        explored = [base_v]  # roots shift as generators merge orbits: re-find
        for v in cells[idx]:
            if v == base_v:
                continue
            rv = orbits.find(v)
            if any(orbits.find(u) == rv for u in explored):
                explored.append(v)
                continue
            found = search_one(refined(_individualise(cells, idx, v)),
                               depth + 1)
            if found is not None:
                generators.append(found)
                orbits.absorb(found)
            explored.append(v)

    return [Permutation({u: q[u] for u in range(n)}) for q in generators]


def brute_force_automorphisms(g, budget=5 * 10 ** 6):
    """Every colour- and edge-preserving vertex permutation, by enumeration."""
    n = g.vertex_count
    cells = _initial_cells(g)
    work = 1
    for c in cells:
        for k in range(2, len(c) + 1):
            work *= k
    if work > budget:
        raise TooLarge(f"{work} colour-respecting candidates exceed budget")
    out = []
    for images in itertools.product(*(itertools.permutations(c) for c in cells)):
        perm = [0] * n
        for cell, image in zip(cells, images):
            for u, w in zip(cell, image):
                perm[u] = w
        if _is_automorphism(g, perm):
            out.append(Permutation({v: perm[v] for v in range(n)}))
    return out


def project_to_atoms(g, gamma):
    """Atom permutation induced by a graph automorphism; None if identity."""
    mapping = {}
    vertex_atom = {}
    for a, (pv, nv) in g.atom_map.items():
        vertex_atom[pv] = a
    for a, (pv, nv) in g.atom_map.items():
        image = gamma(pv)
        if image not in vertex_atom:
            raise InconsistentProjection(
                f"positive vertex of atom {a} maps to non-atom vertex {image}")
        b = vertex_atom[image]
        if gamma(nv) != g.atom_map[b][1]:
            raise InconsistentProjection(
                f"negative mate of atom {a} does not follow its positive vertex")
        if a != b:
            mapping[a] = b
    if not mapping:
        return None
    return Permutation(mapping)


def detect_symmetries(p, opts=None, node_budget=200000, check=True):
    """Full detection pipeline: encode, search, project, sanity-check.

    Returns (atom permutations, graph).  Generators whose projection is the
    identity (pure body-vertex moves) are dropped.
    """
    g = encode_graph(p, opts or EncodeOptions())
    gens = []
    for gamma in find_automorphisms(g, node_budget):
        pi = project_to_atoms(g, gamma)
        if pi is None:
            continue
        if check and not is_program_symmetry(p, pi):
            raise InconsistentProjection(
                f"projected permutation {pi} is not a program symmetry")
        if pi not in gens:
            gens.append(pi)
    return gens, g
