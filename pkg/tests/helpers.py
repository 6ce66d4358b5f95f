"""Shared test utilities: tiny fixture programs and random-suite generators."""

from symbreak.permgroup import Permutation
from symbreak.program import DISJUNCTIVE, Program, Rule, normalize, rule


def pc_violated(rules, true_atoms):
    """Evaluate a constraint block under an assignment: chain atoms take
    their least fixpoint, then any integrity body that holds violates."""
    derived = set(true_atoms)
    changed = True
    while changed:
        changed = False
        for r in rules:
            if (r.head and set(r.body_pos) <= derived
                    and not set(r.body_neg) & derived
                    and r.head[0] not in derived):
                derived.add(r.head[0])
                changed = True
    return any(not r.head and set(r.body_pos) <= derived
               and not set(r.body_neg) & derived for r in rules)


def named_program(rules, n_atoms, prefix="a"):
    """Program with atoms 1..n named a1..an (all visible)."""
    symbols = {i: f"{prefix}{i}" for i in range(1, n_atoms + 1)}
    return Program(tuple(rules), n_atoms, symbols)


def p1():
    """a <- ~b.  b <- ~a."""
    return Program((rule((1,), (), (2,)), rule((2,), (), (1,))), 2,
                   {1: "a", 2: "b"})


def p2():
    """a;b <-.  <- a,b."""
    return Program((rule((1, 2)), rule((), (1, 2))), 2, {1: "a", 2: "b"})


def interchangeable4():
    """Choice over a1..a4 with the full set forbidden (all atoms swappable)."""
    return Program((Rule("choice", (1, 2, 3, 4), (), ()),
                    rule((), (1, 2, 3, 4))), 4,
                   {i: f"a{i}" for i in range(1, 5)})


def random_program(rng, n_atoms=4, n_rules=5, p_neg=0.4, with_constraints=True):
    """Random normal/disjunctive program over named atoms 1..n."""
    rules = []
    for _ in range(n_rules):
        head_size = rng.choice([0, 1, 1, 1, 2] if with_constraints
                               else [1, 1, 1, 2])
        head = rng.sample(range(1, n_atoms + 1), min(head_size, n_atoms))
        nbody = rng.randint(0, min(3, n_atoms))
        body = rng.sample(range(1, n_atoms + 1), nbody)
        pos = tuple(a for a in body if rng.random() > p_neg)
        neg = tuple(a for a in body if a not in pos)
        try:
            rules.append(Rule(DISJUNCTIVE, tuple(head), pos, neg))
        except ValueError:
            continue
    return normalize(named_program(rules, n_atoms))


def random_permutation(rng, points):
    """Random permutation of the given points (possibly the identity)."""
    points = list(points)
    images = points[:]
    rng.shuffle(images)
    return Permutation(dict(zip(points, images)))


def symmetric_program(rng, n_atoms=5, n_rules=4):
    """(program, symmetry): closing a random program under a random
    permutation makes that permutation a symmetry by construction."""
    while True:
        base = random_program(rng, n_atoms, n_rules)
        perm = random_permutation(rng, range(1, n_atoms + 1))
        rules = list(base.rules)
        seen = set(rules)
        frontier = list(base.rules)
        while frontier:
            r = frontier.pop()
            img = perm.image_rule(r)
            if img not in seen:
                seen.add(img)
                rules.append(img)
                frontier.append(img)
        p = normalize(named_program(rules, n_atoms))
        # atom(p) is closed under the permutation, so cycles lie fully in
        # or fully outside it; keep the inside part only
        atoms = p.atoms()
        inside = {k: v for k, v in ((a, perm(a)) for a in atoms)}
        restricted = Permutation({k: v for k, v in inside.items() if k != v})
        if not restricted.is_identity() and p.rules:
            return p, restricted
