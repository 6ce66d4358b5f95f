"""Nogood construction, unit propagation, and a backtracking solver for tight
programs.

The assignment domain covers the program's atoms and its distinct rule bodies.
`unit_propagate` is the order-injectable reference procedure; the solver runs
on the kernel engine instead (same semantics, cross-checked in tests).
"""

from dataclasses import dataclass

from . import oracle
from .kernel import NogoodEngine
from .program import (UnexpandedRule, expand, is_expanded, is_tight,
                      normalize, shift)


class TautologyPresent(Exception):
    """Nogood construction requires tautological rules to be removed first."""


class NotTight(Exception):
    """The solver only covers tight programs; use the oracle otherwise."""


@dataclass(frozen=True)
class BodyKey:
    pos: tuple
    neg: tuple


@dataclass(frozen=True)
class Lit:
    target: object  # AtomId or BodyKey
    positive: bool

    def complement(self):
        return Lit(self.target, not self.positive)


def T(target):
    return Lit(target, True)


def F(target):
    return Lit(target, False)


class NogoodBasis:
    """Nogoods of a program plus the integer encoding the kernel engine uses."""

    def __init__(self, atoms, bodies, nogoods, shifted, source):
        self.atoms = tuple(atoms)
        self.bodies = tuple(bodies)
        self.elements = self.atoms + self.bodies
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.nogoods = tuple(nogoods)
        self.shifted_program = shifted
        self.source_program = source

    def lit_to_int(self, lit):
        return 2 * self.index[lit.target] + (0 if lit.positive else 1)

    def int_to_lit(self, code):
        return Lit(self.elements[code >> 1], not code & 1)

    def int_nogoods(self):
        return [tuple(sorted(self.lit_to_int(l) for l in ng))
                for ng in self.nogoods]

    def engine(self, extra_nogoods=()):
        ngs = self.int_nogoods()
        for ng in extra_nogoods:
            ngs.append(tuple(sorted(self.lit_to_int(l) for l in ng)))
        return NogoodEngine(len(self.elements), ngs)


def build_nogoods(p):
    """Completion-style nogoods: body definitions, head support, atom support.

    Expects an expanded program with tautologies removed; shifting is applied
    internally so singleton support is read off the shifted rules.
    """
    if not is_expanded(p):
        raise UnexpandedRule("build_nogoods needs an expanded program")
    for r in p.rules:
        if set(r.head) & set(r.body_pos):
            raise TautologyPresent(f"tautological rule {r}")
    shifted = normalize(shift(p))
    atoms = sorted(p.atoms() | shifted.atoms())

    body_keys = []
    seen = set()
    for r in shifted.rules:
        key = BodyKey(r.body_pos, r.body_neg)
        if key not in seen:
            seen.add(key)
            body_keys.append(key)
    body_keys.sort(key=lambda k: (k.pos, k.neg))

    nogoods = []
    for key in body_keys:
        base = [T(b) for b in key.pos] + [F(c) for c in key.neg]
        nogoods.append(frozenset(base + [F(key)]))
        for b in key.pos:
            nogoods.append(frozenset([F(b), T(key)]))
        for c in key.neg:
            nogoods.append(frozenset([T(c), T(key)]))

    for r in shifted.rules:
        key = BodyKey(r.body_pos, r.body_neg)
        nogoods.append(frozenset([T(key)] + [F(a) for a in r.head]))

    support = {a: [] for a in atoms}
    for r in shifted.rules:
        for a in r.head:
            support[a].append(BodyKey(r.body_pos, r.body_neg))
    for a in atoms:
        nogoods.append(frozenset([T(a)] + [F(k) for k in support[a]]))

    uniq = []
    seen = set()
    for ng in nogoods:
        if ng not in seen:
            seen.add(ng)
            uniq.append(ng)
    return NogoodBasis(atoms, body_keys, uniq, shifted, p)


VIOLATING = "violating"
SUCCESS = "success"


def unit_propagate(nogoods, assignment, order=None):
    """Reference unit propagation: extend the assignment to a fixpoint.

    Returns (assignment, status).  `order` picks among the currently unit
    nogoods (an index function or a seeded Random); the fixpoint is the same
    for every order, which the tests exercise.
    """
    if isinstance(order, int):
        import random
        order = random.Random(order)
    nogoods = list(nogoods)
    a = set(assignment)
    while True:
        for ng in nogoods:
            if ng.issubset(a):
                return a, VIOLATING
        unit = []
        for ng in nogoods:
            rest = ng - a
            if len(rest) == 1:
                (sigma,) = rest
                if sigma.complement() not in a:
                    unit.append(sigma)
        if not unit:
            return a, SUCCESS
        unit.sort(key=_lit_sort_key)
        if order is None:
            pick = unit[0]
        elif hasattr(order, "randrange"):
            pick = unit[order.randrange(len(unit))]
        else:
            pick = unit[order(len(unit))]
        a.add(pick.complement())


def _lit_sort_key(lit):
    t = lit.target
    if isinstance(t, BodyKey):
        return (1, t.pos, t.neg, lit.positive)
    return (0, t, lit.positive)


def _project_true_atoms(basis, engine):
    n_atoms = len(basis.atoms)
    return frozenset(basis.atoms[i] for i in range(n_atoms)
                     if engine.value(i) == 1)


def _compute_nogoods(p, basis):
    out = []
    for a in sorted(p.compute_true):
        if a not in basis.index:
            return None  # required atom that nothing derives: unsatisfiable
        out.append(frozenset([F(a)]))
    for a in sorted(p.compute_false):
        if a in basis.index:
            out.append(frozenset([T(a)]))
    return out


def solve_tight(p, limit=None, card_mode="binomial", verify=True):
    """Enumerate answer sets of a tight program by propagate-and-branch search.

    Branching takes the lowest unassigned element, true first, and backtracks
    chronologically.  Every candidate is re-checked against the reference
    semantics before it is reported.  Output is projected to named atoms and
    ordered like the oracle's enumeration.
    """
    q = normalize(expand(p, card_mode), drop_tautologies=True)
    if not is_tight(q):
        raise NotTight("program has a positive dependency cycle")
    basis = build_nogoods(q)
    extra = _compute_nogoods(q, basis)
    if extra is None:
        return []
    engine = basis.engine(extra)

    visible = sorted(p.visible_atoms())
    results = []
    seen = set()

    def record():
        full = _project_true_atoms(basis, engine)
        if verify and not oracle.is_answer_set(basis.shifted_program, full):
            raise AssertionError(
                f"solver produced a non-answer-set {sorted(full)}")
        proj = frozenset(a for a in full if a in p.symbols)
        if proj not in seen:
            seen.add(proj)
            results.append(proj)
        return limit is not None and limit > 0 and len(results) >= limit

    if engine.root_propagate():
        decisions = []  # (element, tried_false)
        done = False
        while not done:
            v = engine.next_unassigned()
            if v < 0:
                if record():
                    break
                conflict = True  # exhaust this branch, explore the rest
            else:
                decisions.append([v, False])
                conflict = not engine.assume([2 * v])
            while conflict:
                while decisions and decisions[-1][1]:
                    engine.backtrack()
                    decisions.pop()
                if not decisions:
                    done = True
                    break
                engine.backtrack()
                decisions[-1][1] = True
                conflict = not engine.assume([2 * decisions[-1][0] + 1])

    key = oracle._charvec_key(visible)
    results.sort(key=key)
    return results


def solution_count(p, card_mode="binomial"):
    return len(solve_tight(p, card_mode=card_mode))
