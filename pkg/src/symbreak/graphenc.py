"""Reduction of program-symmetry detection to coloured-graph automorphism.

Each atom contributes a positive and a negative literal vertex joined by a
consistency edge; each rule contributes a body vertex coloured by its kind,
with literal->body and body->head edges.  Single-head facts, single-literal
rules, and single-literal integrity constraints are collapsed per the
optimisation switches.
"""

from dataclasses import dataclass, field

from .program import CHOICE, DISJUNCTIVE

COLOUR_POS = 1
COLOUR_NEG = 2
COLOUR_BODY = 3
COLOUR_FACT = 4
COLOUR_CHOICE = 5
COLOUR_BOTTOM = 6
_COLOUR_CARD_BASE = 7  # card bound k gets 7 + k; keeps bounds apart and
                       # avoids the collision of "k + 5" with the choice colour


def card_colour(bound):
    return _COLOUR_CARD_BASE + bound


class DuplicateEdge(Exception):
    def __init__(self, edge, first_rule, second_rule):
        super().__init__(
            f"edge {edge} produced by rules {first_rule} and {second_rule}; "
            "normalize the program first")
        self.edge = edge
        self.rules = (first_rule, second_rule)


@dataclass
class EncodeOptions:
    fact_colour: bool = True        # facts lose their body vertex
    direct_single: bool = True      # 1-literal single-head rules become an edge
    bottom_vertex: bool = True      # 1-literal constraints point at a sink


@dataclass
class ColouredGraph:
    vertex_count: int
    colours: list
    edges: frozenset
    atom_map: dict  # atom -> (positive vertex, negative vertex)
    out_nbrs: list = field(repr=False, default=None)
    in_nbrs: list = field(repr=False, default=None)

    def __post_init__(self):
        if self.out_nbrs is None:
            outs = [[] for _ in range(self.vertex_count)]
            ins = [[] for _ in range(self.vertex_count)]
            for u, v in sorted(self.edges):
                outs[u].append(v)
                ins[v].append(u)
            self.out_nbrs = outs
            self.in_nbrs = ins

    def edge_count(self):
        return len(self.edges)


def encode_graph(p, opts=None):
    """Build the coloured digraph whose automorphisms are p's symmetries."""
    opts = opts or EncodeOptions()
    atoms = sorted(p.atoms())
    pos = {}
    neg = {}
    colours = []
    for a in atoms:
        pos[a] = len(colours)
        colours.append(COLOUR_POS)
        neg[a] = len(colours)
        colours.append(COLOUR_NEG)

    fact_atoms = set()
    if opts.fact_colour:
        for r in p.rules:
            if r.kind == DISJUNCTIVE and r.is_fact:
                fact_atoms.add(r.head[0])
        for a in fact_atoms:
            colours[pos[a]] = COLOUR_FACT

    edges = {}

    def lit_vertex(atom, positive):
        return pos[atom] if positive else neg[atom]

    def add_edge(u, v, ri):
        if u == v:
            raise DuplicateEdge((u, v), ri, ri)
        if (u, v) in edges:
            raise DuplicateEdge((u, v), edges[(u, v)], ri)
        edges[(u, v)] = ri

    bottom = None

    def bottom_vertex():
        nonlocal bottom
        if bottom is None:
            bottom = len(colours)
            colours.append(COLOUR_BOTTOM)
        return bottom

    for ri, r in enumerate(p.rules):
        body = [(a, True) for a in r.body_pos] + [(a, False) for a in r.body_neg]
        if r.kind == DISJUNCTIVE:
            if opts.fact_colour and r.is_fact:
                continue  # encoded by the head vertex colour alone
            if (opts.direct_single and len(r.head) == 1 and len(body) == 1
                    and lit_vertex(*body[0]) != pos[r.head[0]]):
                add_edge(lit_vertex(*body[0]), pos[r.head[0]], ri)
                continue
            if opts.bottom_vertex and not r.head and len(body) == 1:
                add_edge(lit_vertex(*body[0]), bottom_vertex(), ri)
                continue
            colour = COLOUR_BODY
        elif r.kind == CHOICE:
            colour = COLOUR_CHOICE
        else:
            colour = card_colour(r.bound)
        bv = len(colours)
        colours.append(colour)
        for a, positive in body:
            add_edge(lit_vertex(a, positive), bv, ri)
        for a in r.head:
            add_edge(bv, pos[a], ri)

    for a in atoms:
        add_edge(pos[a], neg[a], -1)  # consistency: a and ~a move together

    atom_map = {a: (pos[a], neg[a]) for a in atoms}
    return ColouredGraph(len(colours), colours, frozenset(edges), atom_map)


def dump_graph(g):
    """Debug dump: `p cgraph V E`, `n vertex colour` lines, `e u v` lines."""
    lines = [f"p cgraph {g.vertex_count} {len(g.edges)}"]
    for v in range(g.vertex_count):
        lines.append(f"n {v} {g.colours[v]}")
    for u, v in sorted(g.edges):
        lines.append(f"e {u} {v}")
    return "\n".join(lines) + "\n"
