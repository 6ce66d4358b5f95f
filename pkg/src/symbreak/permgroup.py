"""Permutations over integer points, cycle notation, and group machinery.

Groups are represented by generators; order and membership come from a
deterministic stabilizer chain (ascending base points, sorted orbit
traversal), so repeated runs agree exactly.
"""

import re

from .program import Rule


class OverlappingCycles(Exception):
    pass


class MalformedCycle(Exception):
    pass


class SupportTooLarge(Exception):
    pass


class ClosureTooLarge(Exception):
    pass


class Permutation:
    """Finite-support bijection on positive integers, identity elsewhere."""

    __slots__ = ("_map",)

    def __init__(self, mapping=()):
        m = dict(mapping)
        for k, v in list(m.items()):
            if k == v:
                del m[k]
        if sorted(m.keys()) != sorted(m.values()):
            raise ValueError("mapping is not a bijection on its domain")
        self._map = m

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def from_cycles(cls, cycles):
        m = {}
        for cyc in cycles:
            if len(set(cyc)) != len(cyc):
                raise MalformedCycle(f"repeated point in cycle {cyc}")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if a in m:
                    raise OverlappingCycles(f"point {a} in two cycles")
                m[a] = b
        return cls(m)

    def __call__(self, x):
        return self._map.get(x, x)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __bool__(self):
        return bool(self._map)

    def __repr__(self):
        return f"Permutation({format_cycles(self)})"

    @property
    def support(self):
        return frozenset(self._map)

    def is_identity(self):
        return not self._map

    def compose(self, other):
        """Left-to-right product: (self.compose(other))(x) == other(self(x))."""
        m = {}
        for x in self.support | other.support:
            m[x] = other(self(x))
        return Permutation(m)

    def inverse(self):
        return Permutation({v: k for k, v in self._map.items()})

    def image_set(self, xs):
        return frozenset(self(x) for x in xs)

    def image_rule(self, r):
        return Rule(r.kind,
                    tuple(self(a) for a in r.head),
                    tuple(self(a) for a in r.body_pos),
                    tuple(self(a) for a in r.body_neg),
                    r.bound)

    def cycles(self):
        """Disjoint cycles sorted by least element, fixed points omitted."""
        seen = set()
        out = []
        for start in sorted(self._map):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self(x)
            out.append(tuple(cyc))
        return out


def compose(*perms):
    out = Permutation.identity()
    for p in perms:
        out = out.compose(p)
    return out


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text, name_to_id=None):
    """Parse cycle notation; points are integers or names from name_to_id."""
    stripped = text.strip()
    if not stripped:
        raise MalformedCycle("empty permutation text")
    rest = _CYCLE_RE.sub("", stripped)
    if rest.strip():
        raise MalformedCycle(f"stray text {rest.strip()!r} outside cycles")
    cycles = []
    for body in _CYCLE_RE.findall(stripped):
        parts = [p for p in re.split(r"[,\s]+", body.strip()) if p]
        if not parts:
            continue
        if len(parts) < 2:
            raise MalformedCycle(f"cycle ({body}) needs at least two points")
        points = []
        for p in parts:
            if p.isdigit():
                points.append(int(p))
            elif name_to_id and p in name_to_id:
                points.append(name_to_id[p])
            else:
                raise MalformedCycle(f"unknown point {p!r}")
        cycles.append(points)
    return Permutation.from_cycles(cycles)


def format_cycles(perm, id_to_name=None):
    """Print as disjoint cycles sorted by least element; identity is ()."""
    def show(x):
        if id_to_name and x in id_to_name:
            return str(id_to_name[x])
        return str(x)

    cycles = perm.cycles()
    if not cycles:
        return "()"
    return "".join("(" + " ".join(show(x) for x in cyc) + ")" for cyc in cycles)


def is_program_symmetry(p, perm):
    """True iff the permuted rule multiset equals the program's own."""
    if not perm.support <= p.atoms():
        raise ValueError("permutation moves atoms outside the program")
    original = sorted(_rule_key(r) for r in p.rules)
    imaged = sorted(_rule_key(perm.image_rule(r)) for r in p.rules)
    return original == imaged


def _rule_key(r):
    return (r.kind, r.bound, tuple(sorted(set(r.head))),
            tuple(sorted(set(r.body_pos))), tuple(sorted(set(r.body_neg))))


def orbit(x, generators):
    """All points reachable from x under the generators and their inverses."""
    seen = {x}
    frontier = [x]
    while frontier:
        y = frontier.pop()
        for g in generators:
            for z in (g(y), g.inverse()(y)):
                if z not in seen:
                    seen.add(z)
                    frontier.append(z)
    return frozenset(seen)


def group_closure(generators, limit=10 ** 6):
    """Every element of the generated group, identity included."""
    elems = {Permutation.identity()}
    frontier = [Permutation.identity()]
    gens = [g for g in generators if not g.is_identity()]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = cur.compose(g)
            if nxt not in elems:
                if len(elems) >= limit:
                    raise ClosureTooLarge(f"group exceeds {limit} elements")
                elems.add(nxt)
                frontier.append(nxt)
    return elems


class PermGroup:
    """Generators plus a lazily built stabilizer chain.

    The chain certifies order as the product of basic orbit lengths and
    decides membership by sifting.  Internally permutations act on a compact
    0..n-1 relabelling of the moved points, stored as tuples.
    """

    def __init__(self, generators, max_support=4096):
        self.generators = [g for g in generators if not g.is_identity()]
        support = set()
        for g in self.generators:
            support |= g.support
        if len(support) > max_support:
            raise SupportTooLarge(
                f"{len(support)} moved points exceed limit {max_support}")
        self._points = sorted(support)
        self._index = {p: i for i, p in enumerate(self._points)}
        self._chain = None

    def _to_array(self, perm):
        return tuple(self._index[perm(p)] for p in self._points)

    def _build_chain(self):
        """Deterministic Schreier-Sims over the compact point set.

        A level's orbit is computed under the generators of that level and
        every deeper one (all of which stabilize the shorter base prefix).
        Closure pushes each Schreier generator exactly once per (point, gen).
        """
        n = len(self._points)
        ident = tuple(range(n))

        def comp(a, b):  # apply a, then b
            return tuple(b[x] for x in a)

        def inv(a):
            out = [0] * n
            for i, j in enumerate(a):
                out[j] = i
            return tuple(out)

        levels = []

        def gens_from(j):
            return [g for lv in levels[j:] for g in lv["gens"]]

        def rebuild_transversal(j):
            lv = levels[j]
            gens = gens_from(j)
            trans = {lv["base"]: ident}
            frontier = [lv["base"]]
            while frontier:
                frontier.sort()
                x = frontier.pop(0)
                rx = trans[x]
                for g in gens:
                    y = g[x]
                    if y not in trans:
                        trans[y] = comp(rx, g)
                        frontier.append(y)
            lv["trans"] = trans

        def sift(g, start):
            j = start
            while j < len(levels):
                lv = levels[j]
                rep = lv["trans"].get(g[lv["base"]])
                if rep is None:
                    return g, j
                g = comp(g, inv(rep))
                j += 1
            return g, len(levels)

        def add_gen(g, start):
            g, j = sift(g, start)
            if g == ident:
                return False
            if j == len(levels):
                base = min(i for i in range(n) if g[i] != i)
                levels.append({"base": base, "gens": [], "trans": {},
                               "done": set()})
            levels[j]["gens"].append(g)
            for k in range(j, -1, -1):
                rebuild_transversal(k)
            return True

        for g in sorted(self._to_array(g) for g in self.generators):
            add_gen(g, 0)

        changed = True
        while changed:
            changed = False
            j = 0
            while j < len(levels):
                lv = levels[j]
                gens = gens_from(j)
                for x in sorted(lv["trans"]):
                    rep = lv["trans"][x]
                    for g in gens:
                        key = (x, g)
                        if key in lv["done"]:
                            continue
                        lv["done"].add(key)
                        u = lv["trans"][g[x]]
                        schreier = comp(comp(rep, g), inv(u))
                        if schreier != ident and add_gen(schreier, j + 1):
                            changed = True
                j += 1
        self._chain = levels

    @property
    def chain(self):
        if self._chain is None:
            self._build_chain()
        return self._chain

    def order(self):
        total = 1
        for lv in self.chain:
            total *= len(lv["trans"])
        return total

    def __contains__(self, perm):
        if perm.is_identity():
            return True
        if not perm.support <= set(self._points):
            return False
        g = self._to_array(perm)
        n = len(self._points)

        def comp(a, b):
            return tuple(b[x] for x in a)

        def inv(a):
            out = [0] * n
            for i, j in enumerate(a):
                out[j] = i
            return tuple(out)

        for lv in self.chain:
            rep = lv["trans"].get(g[lv["base"]])
            if rep is None:
                return False
            g = comp(g, inv(rep))
        return g == tuple(range(n))

    def orbit(self, x):
        return orbit(x, self.generators)


def group_order(generators, max_support=4096):
    return PermGroup(generators, max_support).order()


def member(generators, perm, max_support=4096):
    return perm in PermGroup(generators, max_support)


def irredundant_filter(generators, max_support=4096):
    """Greedily drop generators contained in the group of the remaining ones."""
    gens = [g for g in generators if not g.is_identity()]
    # drop duplicates first, keeping first occurrences
    uniq = []
    for g in gens:
        if g not in uniq:
            uniq.append(g)
    gens = uniq
    i = 0
    while i < len(gens):
        rest = gens[:i] + gens[i + 1:]
        if rest and gens[i] in PermGroup(rest, max_support):
            gens = rest
        else:
            i += 1
    return gens
