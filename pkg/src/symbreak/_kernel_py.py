"""Pure-Python kernel: counter-based nogood propagation and partition
refinement.  `symbreak._kernel` is the compiled twin; both must behave
identically (the test suite cross-checks them when the extension is built).

Literal encoding: element e asserted true is literal 2*e, asserted false is
2*e + 1; the complement flips the low bit.
"""

BACKEND = "python"


class NogoodEngine:
    """Tracks an assignment over 2*nvars literals against a fixed nogood set.

    A nogood is violated when all of its literals are in the assignment; when
    all but one are in and the leftover's complement is unassigned, the
    complement becomes unit-resulting.
    """

    def __init__(self, nvars, nogoods):
        self.nvars = nvars
        self.nogoods = [tuple(ng) for ng in nogoods]
        self.val = [0] * nvars          # 0 unassigned, 1 true, 2 false
        self.count = [0] * len(self.nogoods)
        self.occ = [[] for _ in range(2 * nvars)]
        for gi, ng in enumerate(self.nogoods):
            for lit in ng:
                self.occ[lit].append(gi)
        self.trail = []
        self.marks = []
        self.qhead = 0
        self.failed = any(not ng for ng in self.nogoods)

    def value(self, var):
        return self.val[var]

    def lit_holds(self, lit):
        return self.val[lit >> 1] == 1 + (lit & 1)

    def next_unassigned(self, start=0):
        val = self.val
        for v in range(start, self.nvars):
            if not val[v]:
                return v
        return -1

    def _enqueue(self, lit):
        var = lit >> 1
        want = 1 + (lit & 1)
        have = self.val[var]
        if have:
            return have == want
        self.val[var] = want
        self.trail.append(lit)
        return True

    def _propagate(self):
        occ = self.occ
        count = self.count
        nogoods = self.nogoods
        val = self.val
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            conflict = False
            pending = []
            for gi in occ[lit]:
                c = count[gi] + 1
                count[gi] = c
                size = len(nogoods[gi])
                if c == size:
                    conflict = True
                elif c == size - 1:
                    pending.append(gi)
            if conflict:
                return False
            for gi in pending:
                if count[gi] != len(nogoods[gi]) - 1:
                    continue
                missing = -1
                for l in nogoods[gi]:
                    if val[l >> 1] != 1 + (l & 1):
                        missing = l
                        break
                if missing < 0:
                    return False  # became fully contained meanwhile
                if val[missing >> 1] == 0:
                    if not self._enqueue(missing ^ 1):
                        return False
                # else: complement holds, nogood can no longer be violated
        return True

    def root_propagate(self):
        """Propagate unconditionally-unit nogoods; call once before search."""
        if self.failed:
            return False
        for gi, ng in enumerate(self.nogoods):
            if len(ng) == 1:
                if not self._enqueue(ng[0] ^ 1):
                    return False
        return self._propagate()

    def assume(self, lits):
        """Open a decision level, assert lits, propagate.  False on conflict."""
        self.marks.append(len(self.trail))
        for lit in lits:
            if not self._enqueue(lit):
                return False
        return self._propagate()

    def backtrack(self):
        """Undo the most recent decision level."""
        if not self.marks:
            return False
        mark = self.marks.pop()
        trail = self.trail
        count = self.count
        occ = self.occ
        val = self.val
        limit = min(self.qhead, len(trail))
        for i in range(len(trail) - 1, -1, -1):
            if i < mark:
                break
            lit = trail[i]
            val[lit >> 1] = 0
            if i < limit:
                for gi in occ[lit]:
                    count[gi] -= 1
        del trail[mark:]
        self.qhead = mark
        return True

    def forced_literals(self, since=0):
        return list(self.trail[since:])


def refine_partition(n, outs, ins, cells):
    """Split cells until vertices in a cell agree on neighbour-cell counts.

    `outs`/`ins` are adjacency lists; `cells` is an ordered partition (lists of
    vertices).  Splitting keeps subcells in signature order at the parent's
    position, so the result is canonical for isomorphic inputs.
    """
    cells = [sorted(c) for c in cells]
    label = [0] * n
    while True:
        for idx, cell in enumerate(cells):
            for v in cell:
                label[v] = idx
        changed = False
        nxt = []
        for cell in cells:
            if len(cell) == 1:
                nxt.append(cell)
                continue
            keyed = []
            for v in cell:
                sig = (tuple(sorted(label[u] for u in outs[v])),
                       tuple(sorted(label[u] for u in ins[v])))
                keyed.append((sig, v))
            keyed.sort()
            groups = []
            cur_sig = None
            for sig, v in keyed:
                if sig != cur_sig:
                    groups.append([])
                    cur_sig = sig
                groups[-1].append(v)
            if len(groups) > 1:
                changed = True
            nxt.extend(groups)
        cells = nxt
        if not changed:
            return cells
