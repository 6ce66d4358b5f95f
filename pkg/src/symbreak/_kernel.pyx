# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel: counter-based nogood propagation and partition refinement.

Mirrors symbreak._kernel_py exactly; the test suite cross-checks the two.
"""

from cpython cimport array
import array

BACKEND = "c"

cdef array.array _INT_TEMPLATE = array.array('i', [])


cdef class NogoodEngine:
    cdef public int nvars
    cdef list nogoods_list        # original tuples, for size lookups
    cdef int n_nogoods
    cdef int[:] val
    cdef int[:] count
    cdef int[:] size
    cdef int[:] occ_flat
    cdef int[:] occ_start
    cdef int[:] ng_flat
    cdef int[:] ng_start
    cdef public list trail
    cdef public list marks
    cdef public int qhead
    cdef public bint failed

    def __init__(self, nvars, nogoods):
        cdef int gi, lit, total, i
        self.nvars = nvars
        self.nogoods_list = [tuple(ng) for ng in nogoods]
        self.n_nogoods = len(self.nogoods_list)
        self.val = array.clone(_INT_TEMPLATE, nvars, zero=True)
        self.count = array.clone(_INT_TEMPLATE, self.n_nogoods, zero=True)
        self.size = array.clone(_INT_TEMPLATE, self.n_nogoods, zero=True)
        occ_counts = array.clone(_INT_TEMPLATE, 2 * nvars + 1, zero=True)
        total = 0
        for gi in range(self.n_nogoods):
            ng = self.nogoods_list[gi]
            self.size[gi] = len(ng)
            total += len(ng)
            for lit in ng:
                occ_counts[lit + 1] += 1
        self.ng_flat = array.clone(_INT_TEMPLATE, total, zero=True)
        self.ng_start = array.clone(_INT_TEMPLATE, self.n_nogoods + 1, zero=True)
        i = 0
        for gi in range(self.n_nogoods):
            self.ng_start[gi] = i
            for lit in self.nogoods_list[gi]:
                self.ng_flat[i] = lit
                i += 1
        self.ng_start[self.n_nogoods] = i
        self.occ_start = array.clone(_INT_TEMPLATE, 2 * nvars + 1, zero=True)
        for i in range(1, 2 * nvars + 1):
            self.occ_start[i] = self.occ_start[i - 1] + occ_counts[i]
        self.occ_flat = array.clone(_INT_TEMPLATE, total, zero=True)
        fill = array.clone(_INT_TEMPLATE, 2 * nvars, zero=True)
        for gi in range(self.n_nogoods):
            for lit in self.nogoods_list[gi]:
                self.occ_flat[self.occ_start[lit] + fill[lit]] = gi
                fill[lit] += 1
        self.trail = []
        self.marks = []
        self.qhead = 0
        self.failed = False
        for gi in range(self.n_nogoods):
            if self.size[gi] == 0:
                self.failed = True

    def value(self, int var):
        return self.val[var]

    def lit_holds(self, int lit):
        return self.val[lit >> 1] == 1 + (lit & 1)

    def next_unassigned(self, int start=0):
        cdef int v
        for v in range(start, self.nvars):
            if self.val[v] == 0:
                return v
        return -1

    cdef bint _enqueue(self, int lit):
        cdef int var = lit >> 1
        cdef int want = 1 + (lit & 1)
        cdef int have = self.val[var]
        if have != 0:
            return have == want
        self.val[var] = want
        self.trail.append(lit)
        return True

    cdef bint _propagate(self):
        cdef int lit, gi, c, sz, j, l, missing
        cdef bint conflict
        cdef list pending = []
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            conflict = False
            del pending[:]
            for j in range(self.occ_start[lit], self.occ_start[lit + 1]):
                gi = self.occ_flat[j]
                c = self.count[gi] + 1
                self.count[gi] = c
                sz = self.size[gi]
                if c == sz:
                    conflict = True
                elif c == sz - 1:
                    pending.append(gi)
            if conflict:
                return False
            for gi in pending:
                if self.count[gi] != self.size[gi] - 1:
                    continue
                missing = -1
                for j in range(self.ng_start[gi], self.ng_start[gi + 1]):
                    l = self.ng_flat[j]
                    if self.val[l >> 1] != 1 + (l & 1):
                        missing = l
                        break
                if missing < 0:
                    return False
                if self.val[missing >> 1] == 0:
                    if not self._enqueue(missing ^ 1):
                        return False
        return True

    def root_propagate(self):
        cdef int gi
        if self.failed:
            return False
        for gi in range(self.n_nogoods):
            if self.size[gi] == 1:
                if not self._enqueue(self.ng_flat[self.ng_start[gi]] ^ 1):
                    return False
        return self._propagate()

    def assume(self, lits):
        cdef int lit
        self.marks.append(len(self.trail))
        for lit in lits:
            if not self._enqueue(lit):
                return False
        return self._propagate()

    def backtrack(self):
        cdef int mark, i, lit, j, limit
        if not self.marks:
            return False
        mark = self.marks.pop()
        limit = self.qhead
        if limit > len(self.trail):
            limit = len(self.trail)
        for i in range(len(self.trail) - 1, mark - 1, -1):
            lit = self.trail[i]
            self.val[lit >> 1] = 0
            if i < limit:
                for j in range(self.occ_start[lit], self.occ_start[lit + 1]):
                    self.count[self.occ_flat[j]] -= 1
        del self.trail[mark:]
        self.qhead = mark
        return True

    def forced_literals(self, since=0):
        return list(self.trail[since:])


def refine_partition(int n, outs, ins, cells):
    """Split cells until vertices in a cell agree on neighbour-cell counts.

    Same splitting and ordering discipline as the pure-Python kernel.
    """
    cdef int idx, v, u
    cdef array.array label_arr = array.clone(_INT_TEMPLATE, n, zero=True)
    cdef int[:] label = label_arr
    cells = [sorted(c) for c in cells]
    cdef bint changed
    while True:
        for idx in range(len(cells)):
            for v in cells[idx]:
                label[v] = idx
        changed = False
        nxt = []
        for cell in cells:
            if len(cell) == 1:
                nxt.append(cell)
                continue
            keyed = []
            for v in cell:
                out_sig = sorted([label[u] for u in outs[v]])
                in_sig = sorted([label[u] for u in ins[v]])
                keyed.append(((tuple(out_sig), tuple(in_sig)), v))
            keyed.sort()
            groups = []
            cur_group = None
            cur_sig = None
            for sig, v in keyed:
                if sig != cur_sig:
                    cur_group = []
                    groups.append(cur_group)
                    cur_sig = sig
                cur_group.append(v)
            if len(groups) > 1:
                changed = True
            nxt.extend(groups)
        cells = nxt
        if not changed:
            return cells
