"""Ground-program data model and the standard source-level transformations.

Atoms are positive integers (1-based).  A rule stores its head and body as
sorted tuples; duplicate literals are kept until `normalize` removes them, so
that cleanup of raw grounder output is an explicit, testable step.
"""

import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property

DISJUNCTIVE = "disjunctive"
CHOICE = "choice"
CARDINALITY = "cardinality"


class ProgramError(Exception):
    pass


class UnexpandedRule(ProgramError):
    """A choice or cardinality rule where only basic rules are allowed."""


class CardinalityDuplicate(ProgramError):
    """A cardinality body repeats a literal, which would need weight semantics."""


@dataclass(frozen=True)
class Rule:
    kind: str
    head: tuple
    body_pos: tuple
    body_neg: tuple
    bound: int = 0

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(sorted(self.head)))
        object.__setattr__(self, "body_pos", tuple(sorted(self.body_pos)))
        object.__setattr__(self, "body_neg", tuple(sorted(self.body_neg)))
        if self.kind not in (DISJUNCTIVE, CHOICE, CARDINALITY):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if len(set(self.head)) != len(self.head):
            raise ValueError("head atoms must be pairwise distinct")
        if self.kind == CHOICE and not self.head:
            pass  # permitted transiently; normalize drops empty choices
        if self.kind == CARDINALITY and len(self.head) > 1:
            raise ValueError("cardinality rules take at most one head atom")
        if self.kind != CARDINALITY and self.bound:
            raise ValueError("bound is only meaningful for cardinality rules")
        if self.bound < 0:
            raise ValueError("bound must be non-negative")
        for a in itertools.chain(self.head, self.body_pos, self.body_neg):
            if a < 1:
                raise ValueError("atom ids are 1-based positive integers")

    @property
    def is_integrity(self):
        return self.kind == DISJUNCTIVE and not self.head

    @property
    def is_fact(self):
        return (self.kind == DISJUNCTIVE and len(self.head) == 1
                and not self.body_pos and not self.body_neg)

    def atoms(self):
        return set(self.head) | set(self.body_pos) | set(self.body_neg)


def rule(head=(), pos=(), neg=()):
    """Shorthand for a disjunctive rule (the common case in tests)."""
    return Rule(DISJUNCTIVE, tuple(head), tuple(pos), tuple(neg))


@dataclass(frozen=True)
class Program:
    rules: tuple
    atom_count: int
    symbols: dict = field(default_factory=dict)
    compute_true: frozenset = frozenset()
    compute_false: frozenset = frozenset()
    models_requested: int = 1

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "compute_true", frozenset(self.compute_true))
        object.__setattr__(self, "compute_false", frozenset(self.compute_false))
        referenced = max((max(r.atoms(), default=0) for r in self.rules), default=0)
        known = set(self.symbols) | self.compute_true | self.compute_false
        top = max(referenced, max(known, default=0))
        if self.atom_count < top:
            raise ValueError(f"atom_count {self.atom_count} below highest atom id {top}")
        names = list(self.symbols.values())
        if len(set(names)) != len(names):
            raise ValueError("symbol names must be unique")

    @cached_property
    def _atoms(self):
        out = set()
        for r in self.rules:
            out |= r.atoms()
        return frozenset(out)

    def atoms(self):
        """atom(P): the atoms referenced by some rule."""
        return self._atoms

    def bodies(self):
        """body(P): the distinct (body_pos, body_neg) pairs, duplicates merged."""
        return {(r.body_pos, r.body_neg) for r in self.rules}

    def visible_atoms(self):
        return frozenset(a for a in self._atoms if a in self.symbols)

    def is_hidden(self, atom):
        return atom not in self.symbols

    def with_rules(self, rules):
        return replace(self, rules=tuple(rules))


def _dedup(seq):
    seen = set()
    out = []
    for x in seq:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return tuple(out)


def _has_dup(seq):
    return len(set(seq)) != len(seq)


def normalize(p, drop_tautologies=False):
    """Remove duplicate body literals, inapplicable rules, and duplicate rules.

    Tautology removal (head meets positive body) is opt-in: detection must see
    the program as written, while nogood construction requires it on.
    Idempotent; answer sets are preserved either way.
    """
    seen = set()
    out = []
    for r in p.rules:
        if r.kind == CARDINALITY:
            if _has_dup(r.body_pos) or _has_dup(r.body_neg):
                raise CardinalityDuplicate(
                    f"cardinality body repeats a literal: {r}")
            # an atom and its negation in one cardinality body contribute
            # exactly one satisfied literal; the rule stays applicable
            r2 = r
        else:
            pos = _dedup(r.body_pos)
            neg = _dedup(r.body_neg)
            if set(pos) & set(neg):
                continue  # body never satisfiable
            if r.kind == CHOICE and not r.head:
                continue
            if (drop_tautologies and r.kind == DISJUNCTIVE
                    and set(r.head) & set(pos)):
                continue
            r2 = Rule(r.kind, r.head, pos, neg)
        if r2 in seen:
            continue
        seen.add(r2)
        out.append(r2)
    return p.with_rules(out)


def shift(p):
    """Rewrite each disjunctive rule into one normal rule per head atom.

    a1;...;al <- B becomes ai <- B, ~a1,...,~a(i-1),~a(i+1),...,~al.
    """
    out = []
    for r in p.rules:
        if r.kind != DISJUNCTIVE:
            raise UnexpandedRule(f"shift expects basic rules only, got {r.kind}")
        if len(r.head) <= 1:
            out.append(r)
            continue
        for a in r.head:
            mates = tuple(b for b in r.head if b != a)
            out.append(Rule(DISJUNCTIVE, (a,), r.body_pos, r.body_neg + mates))
    return p.with_rules(out)


def _signed_body(r):
    return [(a, True) for a in r.body_pos] + [(a, False) for a in r.body_neg]


def expand_cardinality(p, mode="binomial"):
    """Replace cardinality rules by basic rules.

    binomial: one rule per k-subset of the body.  ladder: counting atoms
    l(i,j) meaning "at least j of the literals with index >= i hold", three
    rule schemata plus head <- l(1,k); needs O(nk) rules.  Both are modular:
    answer sets projected to the original atoms are unchanged.
    """
    if mode not in ("binomial", "ladder"):
        raise ValueError(f"unknown expansion mode {mode!r}")
    out = []
    next_atom = p.atom_count
    for r in p.rules:
        if r.kind != CARDINALITY:
            out.append(r)
            continue
        lits = _signed_body(r)
        k = r.bound
        if k == 0:
            out.append(Rule(DISJUNCTIVE, r.head, (), ()))
            continue
        if mode == "binomial":
            for subset in itertools.combinations(lits, k):
                pos = tuple(a for a, s in subset if s)
                neg = tuple(a for a, s in subset if not s)
                out.append(Rule(DISJUNCTIVE, r.head, pos, neg))
            continue
        n = len(lits)
        if k > n:
            continue  # threshold unreachable; the rule never fires
        level = {}
        for i in range(1, n + 1):
            for j in range(1, k + 1):
                next_atom += 1
                level[i, j] = next_atom
        for i in range(1, n + 1):
            a, s = lits[i - 1]
            one = Rule(DISJUNCTIVE, (level[i, 1],),
                       (a,) if s else (), () if s else (a,))
            out.append(one)
            if i == n:
                continue
            for j in range(1, k + 1):
                out.append(Rule(DISJUNCTIVE, (level[i, j],), (level[i + 1, j],), ()))
            for j in range(1, k):
                out.append(Rule(DISJUNCTIVE, (level[i, j + 1],),
                                (a, level[i + 1, j]) if s else (level[i + 1, j],),
                                () if s else (a,)))
        out.append(Rule(DISJUNCTIVE, r.head, (level[1, k],), ()))
    return replace(p, rules=tuple(out), atom_count=next_atom)


def expand_choice(p):
    """Replace each choice rule by head/mate rule pairs with fresh hidden atoms.

    {a1,...,al} <- B becomes, per head atom, ai <- B, ~ai' and ai' <- ~ai.
    """
    out = []
    next_atom = p.atom_count
    for r in p.rules:
        if r.kind != CHOICE:
            out.append(r)
            continue
        for a in r.head:
            next_atom += 1
            mate = next_atom
            out.append(Rule(DISJUNCTIVE, (a,), r.body_pos, r.body_neg + (mate,)))
            out.append(Rule(DISJUNCTIVE, (mate,), (), (a,)))
    return replace(p, rules=tuple(out), atom_count=next_atom)


def expand(p, card_mode="binomial"):
    """Expand cardinality and choice rules, leaving only basic rules."""
    return expand_choice(expand_cardinality(p, card_mode))


def is_expanded(p):
    return all(r.kind == DISJUNCTIVE for r in p.rules)


def positive_dependency_edges(p):
    """Edges a -> b where a rule has a in the head and b in the positive body."""
    edges = {}
    for r in p.rules:
        for a in r.head:
            edges.setdefault(a, set()).update(r.body_pos)
    return edges


def is_tight(p):
    """True iff the positive atom dependency graph is acyclic."""
    if not is_expanded(p):
        raise UnexpandedRule("tightness is defined after expansion")
    edges = positive_dependency_edges(p)
    state = {}  # 1 = on stack, 2 = done
    for root in edges:
        if state.get(root):
            continue
        stack = [(root, iter(edges.get(root, ())))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                s = state.get(nxt)
                if s == 1:
                    return False
                if s is None:
                    state[nxt] = 1
                    stack.append((nxt, iter(edges.get(nxt, ()))))
                    advanced = True
                    break
            if not advanced:
                state[node] = 2
                stack.pop()
    return True
