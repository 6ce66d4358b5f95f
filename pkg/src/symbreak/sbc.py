"""Lex-leader constraints for detected symmetries.

A permutation constraint keeps exactly the assignments whose selected-index
subvector is lexicographically no greater than its image under the
permutation, atom order ascending, position one most significant, true as
bit 1.  The chain tail is false: with a true tail the all-false assignment
(a fixed point of every permutation) would be rejected, losing orbit
representatives.
"""

from dataclasses import dataclass, replace

from . import oracle
from .permgroup import group_closure, is_program_symmetry
from .program import DISJUNCTIVE, Rule


class NotASymmetry(Exception):
    pass


class IdentityPermutation(Exception):
    pass


@dataclass(frozen=True)
class PcConfig:
    k_supports: int = 0          # 0 = unlimited
    restrict_to_support: bool = True
    exclude_cycle_max: bool = True
    skip_fact_pairs: bool = True


FULL = PcConfig(restrict_to_support=False, exclude_cycle_max=False,
                skip_fact_pairs=False)


def atom_order(p):
    """The canonical total order used for lex comparisons: ascending id."""
    return sorted(p.atoms())


def selected_indices(p, perm, cfg, order=None):
    """The subsequence of atoms a permutation constraint actually ranges over.

    Reductions, in order: restrict to the support, drop the largest atom of
    each cycle, drop positions where the atom and its image are both facts,
    truncate to the first k supports.
    """
    atoms = list(order) if order is not None else atom_order(p)
    rank = {a: i for i, a in enumerate(atoms)}
    if cfg.restrict_to_support:
        atoms = [a for a in atoms if a in perm.support]
    if cfg.exclude_cycle_max:
        cycle_max = {max(c, key=lambda a: rank.get(a, a))
                     for c in perm.cycles()}
        atoms = [a for a in atoms if a not in cycle_max]
    if cfg.skip_fact_pairs:
        facts = {r.head[0] for r in p.rules if r.is_fact}
        atoms = [a for a in atoms if not (a in facts and perm(a) in facts)]
    if cfg.k_supports:
        atoms = atoms[:cfg.k_supports]
    return atoms


def _applicable(pos, neg):
    return not set(pos) & set(neg)


def build_pc(p, perm, cfg=PcConfig(), order=None, first_aux=None):
    """Rules of one permutation constraint; returns (rules, chain_atom_ids).

    Chain atoms are allocated from first_aux upward (default: above the
    program's atom count).  Rules whose body contains an atom both positively
    and negatively are never applicable and are not emitted.
    """
    if perm.is_identity():
        raise IdentityPermutation("cannot break the identity")
    if not is_program_symmetry(p, perm):
        raise NotASymmetry(f"{perm} does not map the program to itself")
    seq = selected_indices(p, perm, cfg, order)
    if not seq:
        return [], []
    if first_aux is None:
        first_aux = p.atom_count + 1
    q = len(seq)
    rules = [Rule(DISJUNCTIVE, (), (seq[0],), (perm(seq[0]),))]
    if q == 1:
        return rules, []
    chain = {i: first_aux + (i - 2) for i in range(2, q + 1)}
    rules.append(Rule(DISJUNCTIVE, (), (chain[2],), ()))
    for i in range(2, q + 1):
        prev, cur = seq[i - 2], seq[i - 1]
        prev_img, cur_img = perm(prev), perm(cur)
        c = chain[i]
        if _applicable((prev, cur), (cur_img,)):
            rules.append(Rule(DISJUNCTIVE, (c,), (prev, cur), (cur_img,)))
        if _applicable((cur,), (prev_img, cur_img)):
            rules.append(Rule(DISJUNCTIVE, (c,), (cur,), (prev_img, cur_img)))
        if i <= q - 1:
            nxt = chain[i + 1]
            rules.append(Rule(DISJUNCTIVE, (c,), (prev, nxt), ()))
            if _applicable((nxt,), (prev_img,)):
                rules.append(Rule(DISJUNCTIVE, (c,), (nxt,), (prev_img,)))
        # no rules mention chain atom q+1: the tail of the chain stays false
    return rules, [chain[i] for i in range(2, q + 1)]


def build_sbc(p, generators, cfg=PcConfig(), order=None):
    """Extend the program with one permutation constraint per generator.

    Identity generators are skipped; chain atoms are hidden and fresh per
    constraint.  Projected answer sets shrink to at most the originals, and
    every orbit keeps at least one member.
    """
    rules = list(p.rules)
    next_aux = p.atom_count
    for g in generators:
        if g.is_identity():
            continue
        new_rules, chain = build_pc(p, g, cfg, order, first_aux=next_aux + 1)
        rules.extend(new_rules)
        next_aux += len(chain)
    return replace(p, rules=tuple(rules), atom_count=next_aux)


def assignment_image(m, perm, atoms):
    """The composed assignment: atom a holds in the image iff perm(a) held."""
    m = frozenset(m)
    return frozenset(a for a in atoms if perm(a) in m)


def violates_lex(m, perm, seq):
    """Direct statement of the constraint: selected subvector > its image."""
    vec = tuple(1 if a in m else 0 for a in seq)
    img = tuple(1 if perm(a) in m else 0 for a in seq)
    return vec > img


def lexleader_oracle(p, generators, answer_sets=None, closure_limit=10 ** 6,
                     atom_budget=oracle.DEFAULT_ATOM_BUDGET):
    """Reference lex-leaders: one minimum per orbit under the full closure.

    Enumerates answer sets with the brute-force oracle unless a precomputed
    list is supplied (e.g. from the solver for larger tight instances).
    """
    if answer_sets is None:
        answer_sets = oracle.enumerate_answer_sets(p, atom_budget=atom_budget)
    closure = group_closure(generators, closure_limit)
    visible = sorted(p.visible_atoms())

    def key(m):
        return tuple(1 if a in m else 0 for a in visible)

    leaders = set()
    for m in answer_sets:
        images = {assignment_image(m, g, visible) for g in closure}
        leaders.add(min(images, key=key))
    return sorted(leaders, key=key)
