"""Brute-force reference semantics: reduct, answer-set test, enumeration.

Everything here is deliberately naive; the rest of the package is tested
against these functions at desk scale.
"""

from .program import DISJUNCTIVE, Rule, expand, is_expanded, UnexpandedRule

DEFAULT_ATOM_BUDGET = 24


class TooLarge(Exception):
    """The interpretation space exceeds the configured brute-force budget."""


def reduct(p, m):
    """P^M: drop rules blocked by m, strip negation from the rest."""
    if not is_expanded(p):
        raise UnexpandedRule("reduct is defined on expanded programs")
    m = frozenset(m)
    kept = []
    for r in p.rules:
        if m.isdisjoint(r.body_neg):
            kept.append(Rule(DISJUNCTIVE, r.head, r.body_pos, ()))
    return p.with_rules(kept)


def _is_classical_model(rules, m):
    # an empty head is never intersected: integrity constraints forbid their body
    for r in rules:
        if m.issuperset(r.body_pos) and m.isdisjoint(r.head):
            return False
    return True


def _least_fixpoint(rules):
    derived = set()
    changed = True
    while changed:
        changed = False
        for r in rules:
            if len(r.head) == 1 and derived.issuperset(r.body_pos):
                a = r.head[0]
                if a not in derived:
                    derived.add(a)
                    changed = True
    return derived


def respects_compute(p, m):
    return p.compute_true.issubset(m) and p.compute_false.isdisjoint(m)


def is_answer_set(p, m, atom_budget=DEFAULT_ATOM_BUDGET):
    """True iff m is a subset-minimal classical model of reduct(p, m).

    Reducts whose rules all have at most one head atom are decided by the
    least fixpoint of immediate consequences; otherwise minimality falls back
    to enumerating proper subsets of m (hence the atom budget).
    """
    m = frozenset(m)
    if not respects_compute(p, m):
        return False
    red = reduct(p, m)
    if not _is_classical_model(red.rules, m):
        return False
    if all(len(r.head) <= 1 for r in red.rules):
        return _least_fixpoint(red.rules) == m
    if len(m) > atom_budget:
        raise TooLarge(f"minimality check over 2^{len(m)} subsets refused")
    atoms = sorted(m)
    for bits in range((1 << len(atoms)) - 1):
        sub = frozenset(a for i, a in enumerate(atoms) if bits >> i & 1)
        if _is_classical_model(red.rules, sub):
            return False
    return True


def _charvec_key(visible_sorted):
    def key(m):
        return tuple(1 if a in m else 0 for a in visible_sorted)
    return key


def enumerate_answer_sets(p, limit=None, atom_budget=DEFAULT_ATOM_BUDGET):
    """All answer sets projected to named atoms, lexicographically ordered.

    The characteristic vector over ascending atom ids orders the output, the
    smallest atom being most significant.  Expansion of choice and cardinality
    rules happens internally; their auxiliary atoms stay out of the result.
    """
    q = expand(p)
    candidates = sorted({a for r in q.rules for a in r.head})
    if not q.compute_true.issubset(candidates):
        return []  # an atom no rule can derive is required true
    if len(candidates) > atom_budget:
        raise TooLarge(
            f"{len(candidates)} derivable atoms exceed budget {atom_budget}")
    visible = sorted(p.visible_atoms())
    key = _charvec_key(visible)
    found = []
    seen = set()
    n = len(candidates)
    for bits in range(1 << n):
        m = frozenset(candidates[i] for i in range(n) if bits >> (n - 1 - i) & 1)
        if is_answer_set(q, m, atom_budget):
            proj = frozenset(a for a in m if a in p.symbols)
            if proj not in seen:
                seen.add(proj)
                found.append(proj)
    found.sort(key=key)
    if limit is not None and limit > 0:
        found = found[:limit]
    return found
