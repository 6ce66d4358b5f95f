"""Finite-domain CSP encoders into ground programs, value-precedence
symmetry-breaking encodings, brute-force consistency oracles, and the
propagation-strength comparison harness.

Variables take contiguous domains 1..d.  Every encoder shares one atom layout:
e(v,i) atoms first, variable-major, then encoder-specific auxiliaries.
"""

import itertools
import random
import re
from dataclasses import dataclass, field

from . import propagation
from .program import (CARDINALITY, CHOICE, DISJUNCTIVE, Program, Rule,
                      expand, normalize)


class CspError(Exception):
    pass


class NonBinaryConstraint(CspError):
    pass


class TooLarge(Exception):
    pass


@dataclass(frozen=True)
class Table:
    scope: tuple            # variable indices (0-based)
    allowed: frozenset      # tuples of values

    def holds(self, values):
        return tuple(values) in self.allowed


@dataclass(frozen=True)
class AllDifferent:
    scope: tuple

    def holds(self, values):
        return len(set(values)) == len(values)


@dataclass(frozen=True)
class PrecedencePair:
    d_j: int
    d_k: int
    scope: tuple

    def holds(self, values):
        n = len(values)
        first_j = min((i for i, v in enumerate(values) if v == self.d_j),
                      default=n)
        first_k = min((i for i, v in enumerate(values) if v == self.d_k),
                      default=n + 1)
        return first_j < first_k


@dataclass(frozen=True)
class PrecedenceGlobal:
    values: tuple           # ascending
    scope: tuple

    def holds(self, values):
        for j, k in itertools.combinations(self.values, 2):
            if not PrecedencePair(j, k, self.scope).holds(values):
                return False
        return True


@dataclass(frozen=True)
class CspSpec:
    names: tuple
    domains: tuple          # sizes; variable i ranges over 1..domains[i]
    constraints: tuple = ()

    def __post_init__(self):
        if len(self.names) != len(self.domains):
            raise CspError("one domain size per variable required")
        if any(d < 1 for d in self.domains):
            raise CspError("domains are contiguous 1..d with d >= 1")
        for c in self.constraints:
            for v in c.scope:
                if not 0 <= v < len(self.names):
                    raise CspError(f"constraint scope references variable {v}")
            if isinstance(c, Table):
                for t in c.allowed:
                    if len(t) != len(c.scope):
                        raise CspError("tuple arity differs from scope")
                    for v, val in zip(c.scope, t):
                        if not 1 <= val <= self.domains[v]:
                            raise CspError(f"tuple value {val} outside domain")

    @property
    def n(self):
        return len(self.names)


def solutions(spec, domains=None):
    """Brute-force CSP solving over the given (or full) current domains."""
    domains = domains or [range(1, d + 1) for d in spec.domains]
    out = []
    for values in itertools.product(*domains):
        if all(c.holds([values[v] for v in c.scope]) for c in spec.constraints):
            out.append(values)
    return out


# ------------------------------------------------------------- atom layout

class VarAtomMap:
    """Deterministic (variable, value) -> atom id table, variable-major."""

    def __init__(self, spec):
        self.spec = spec
        self.ids = {}
        self.names = {}
        nxt = 0
        for v, d in enumerate(spec.domains):
            for i in range(1, d + 1):
                nxt += 1
                self.ids[v, i] = nxt
                self.names[nxt] = f"e({spec.names[v]},{i})"
        self.count = nxt

    def __call__(self, v, i):
        return self.ids[v, i]


class _Builder:
    def __init__(self, amap):
        self.amap = amap
        self.rules = []
        self.symbols = dict(amap.names)
        self.count = amap.count

    def fresh(self, name=None):
        self.count += 1
        if name is not None:
            self.symbols[self.count] = name
        return self.count

    def add(self, kind, head=(), pos=(), neg=(), bound=0):
        self.rules.append(Rule(kind, tuple(head), tuple(pos), tuple(neg), bound))

    def program(self):
        return Program(tuple(self.rules), self.count, dict(self.symbols))


def _base_rules(b):
    """Choice, at-least-one, and at-most-one rules for every variable."""
    spec = b.amap.spec
    for v, d in enumerate(spec.domains):
        cells = [b.amap(v, i) for i in range(1, d + 1)]
        b.add(CHOICE, head=cells)
        b.add(DISJUNCTIVE, neg=cells)
        b.add(CARDINALITY, pos=cells, bound=2)


def _forbidden_tuple_rules(b, c):
    spec = b.amap.spec
    doms = [range(1, spec.domains[v] + 1) for v in c.scope]
    for combo in itertools.product(*doms):
        if combo not in c.allowed:
            b.add(DISJUNCTIVE,
                  pos=[b.amap(v, i) for v, i in zip(c.scope, combo)])


def encode_direct(spec):
    """Direct encoding: exactly-one per variable, one constraint per
    forbidden tuple."""
    b = _Builder(VarAtomMap(spec))
    _base_rules(b)
    for c in spec.constraints:
        if isinstance(c, Table):
            _forbidden_tuple_rules(b, c)
        elif isinstance(c, AllDifferent):
            for x, y in itertools.combinations(c.scope, 2):
                top = min(spec.domains[x], spec.domains[y])
                for i in range(1, top + 1):
                    b.add(DISJUNCTIVE, pos=[b.amap(x, i), b.amap(y, i)])
        else:
            raise CspError(f"direct encoding does not cover {type(c).__name__}")
    return b.program()


def encode_support(spec):
    """Support encoding of binary table constraints: taking a value forces one
    of its supporting partner values."""
    b = _Builder(VarAtomMap(spec))
    _base_rules(b)
    for c in spec.constraints:
        if not isinstance(c, Table) or len(c.scope) != 2:
            raise NonBinaryConstraint(
                "support encoding requires binary table constraints")
        for (v, other), flip in (((c.scope[0], c.scope[1]), False),
                                 ((c.scope[1], c.scope[0]), True)):
            for i in range(1, spec.domains[v] + 1):
                supports = sorted(
                    {(t[0] if flip else t[1]) for t in c.allowed
                     if (t[1] if flip else t[0]) == i})
                b.add(DISJUNCTIVE, pos=[b.amap(v, i)],
                      neg=[b.amap(other, s) for s in supports])
    return b.program()


def encode_alldiff(spec):
    """All-different via one at-most-one cardinality constraint per value."""
    b = _Builder(VarAtomMap(spec))
    _base_rules(b)
    for c in spec.constraints:
        if isinstance(c, AllDifferent):
            top = max(spec.domains[v] for v in c.scope)
            for i in range(1, top + 1):
                cells = [b.amap(v, i) for v in c.scope
                         if spec.domains[v] >= i]
                if len(cells) >= 2:
                    b.add(CARDINALITY, pos=cells, bound=2)
        elif isinstance(c, Table):
            _forbidden_tuple_rules(b, c)
        else:
            raise CspError(f"alldiff encoding does not cover {type(c).__name__}")
    return b.program()


# ----------------------------------------------------- precedence fragments

def precedence_pair_fragment(b, d_j, d_k, scope):
    """Flag chain b_i: true once d_j has occurred strictly earlier."""
    spec = b.amap.spec
    n = len(scope)
    flags = [b.fresh() for _ in range(n)]
    b.add(CHOICE, head=flags)
    for i in range(n - 1):
        v = scope[i]
        ej = b.amap(v, d_j) if d_j <= spec.domains[v] else None
        if ej is not None:
            b.add(DISJUNCTIVE, pos=[ej], neg=[flags[i + 1]])
            b.add(DISJUNCTIVE, pos=[flags[i]], neg=[ej, flags[i + 1]])
            b.add(DISJUNCTIVE, pos=[flags[i + 1]], neg=[ej, flags[i]])
        else:
            b.add(DISJUNCTIVE, pos=[flags[i]], neg=[flags[i + 1]])
            b.add(DISJUNCTIVE, pos=[flags[i + 1]], neg=[flags[i]])
    for i in range(n):
        v = scope[i]
        if d_k <= spec.domains[v]:
            b.add(DISJUNCTIVE, pos=[b.amap(v, d_k)], neg=[flags[i]])
    b.add(DISJUNCTIVE, pos=[flags[0]])


def precedence_dfa_fragment(b, values, scope):
    """Automaton states: the largest value-list prefix seen so far."""
    spec = b.amap.spec
    n, m = len(scope), len(values)
    state = {}
    for i in range(1, n + 1):
        for j in range(m + 1):
            state[i, j] = b.fresh()
    b.add(DISJUNCTIVE, head=[state[1, 0]])
    for i in range(1, n):
        v = scope[i - 1]
        for j in range(m + 1):
            if j < m and values[j] <= spec.domains[v]:
                nxt = b.amap(v, values[j])
                b.add(DISJUNCTIVE, head=[state[i + 1, j + 1]],
                      pos=[state[i, j], nxt])
                b.add(DISJUNCTIVE, head=[state[i + 1, j]],
                      pos=[state[i, j]], neg=[nxt])
            else:
                b.add(DISJUNCTIVE, head=[state[i + 1, j]], pos=[state[i, j]])
    for i in range(1, n + 1):
        v = scope[i - 1]
        for j in range(m + 1):
            for k in range(j + 2, m + 1):  # the next new value is the only
                if values[k - 1] <= spec.domains[v]:  # one allowed above state j
                    b.add(DISJUNCTIVE,
                          pos=[state[i, j], b.amap(v, values[k - 1])])


def precedence_allowed_fragment(b, values, scope):
    """Monotone allowed(v,d) relation instead of automaton states."""
    spec = b.amap.spec
    n, m = len(scope), len(values)
    allowed = {}
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            allowed[i, j] = b.fresh()
    b.add(DISJUNCTIVE, head=[allowed[1, 1]])
    for i in range(1, n):
        v = scope[i - 1]
        for j in range(1, m):
            if values[j - 1] <= spec.domains[v]:
                b.add(DISJUNCTIVE, head=[allowed[i + 1, j + 1]],
                      pos=[b.amap(v, values[j - 1])])
        for j in range(1, m + 1):
            b.add(DISJUNCTIVE, head=[allowed[i + 1, j]], pos=[allowed[i, j]])
    for i in range(1, n + 1):
        v = scope[i - 1]
        for j in range(1, m + 1):
            if values[j - 1] <= spec.domains[v]:
                b.add(DISJUNCTIVE,
                      pos=[b.amap(v, values[j - 1])], neg=[allowed[i, j]])


def precedence_pairwise_fragment(b, values, scope):
    for d_j, d_k in itertools.combinations(values, 2):
        precedence_pair_fragment(b, d_j, d_k, scope)


_PRECEDENCE_FRAGMENTS = {
    "pair": None,  # handled specially: needs d_j, d_k
    "dfa": precedence_dfa_fragment,
    "allowed": precedence_allowed_fragment,
    "pairwise": precedence_pairwise_fragment,
}


def _fragment_program(spec, append, first_aux=None):
    b = _Builder(VarAtomMap(spec))
    if first_aux is not None:
        if first_aux <= b.count:
            raise CspError("auxiliary atoms would collide with value atoms")
        b.count = first_aux - 1
    append(b)
    return b.program()


def encode_precedence_pair(spec, d_j, d_k, scope, first_aux=None):
    """Standalone fragment over the spec's value atoms plus fresh flags.

    Compose fragments by picking non-overlapping first_aux offsets, or use
    `encode`, which threads one builder through everything.
    """
    return _fragment_program(
        spec, lambda b: precedence_pair_fragment(b, d_j, d_k, scope),
        first_aux)


def encode_precedence_dfa(spec, values, scope, first_aux=None):
    return _fragment_program(
        spec, lambda b: precedence_dfa_fragment(b, values, scope), first_aux)


def encode_precedence_allowed(spec, values, scope, first_aux=None):
    return _fragment_program(
        spec, lambda b: precedence_allowed_fragment(b, values, scope),
        first_aux)


def encode_precedence_pairwise(spec, values, scope, first_aux=None):
    return _fragment_program(
        spec, lambda b: precedence_pairwise_fragment(b, values, scope),
        first_aux)


def encode(spec, method="direct", precedence="dfa"):
    """Full program: base plus table handling plus precedence fragments."""
    if method == "support":
        base = encode_support
    elif method == "alldiff":
        base = encode_alldiff
    elif method == "direct":
        base = encode_direct
    else:
        raise CspError(f"unknown encoding method {method!r}")
    plain = CspSpec(spec.names, spec.domains, tuple(
        c for c in spec.constraints
        if not isinstance(c, (PrecedencePair, PrecedenceGlobal))))
    prog = base(plain)
    b = _Builder(VarAtomMap(spec))
    b.rules = list(prog.rules)
    b.count = prog.atom_count
    b.symbols = dict(prog.symbols)
    for c in spec.constraints:
        if isinstance(c, PrecedencePair):
            precedence_pair_fragment(b, c.d_j, c.d_k, c.scope)
        elif isinstance(c, PrecedenceGlobal):
            if precedence == "pair":
                raise CspError("pair variant needs a PrecedencePair constraint")
            _PRECEDENCE_FRAGMENTS[precedence](b, c.values, c.scope)
    return b.program()


# ------------------------------------------------------ consistency oracles

AC_BINARY = "ac-binary-decomposition"
GAC = "gac"


def _binary_decomposition(constraint, domains):
    """Pairwise projections used by the decomposition-level oracle."""
    if isinstance(constraint, Table):
        if len(constraint.scope) == 2:
            return [constraint]
        out = []
        for a, b in itertools.combinations(range(len(constraint.scope)), 2):
            pairs = frozenset((t[a], t[b]) for t in constraint.allowed)
            out.append(Table((constraint.scope[a], constraint.scope[b]), pairs))
        return out
    if isinstance(constraint, AllDifferent):
        out = []
        for x, y in itertools.combinations(constraint.scope, 2):
            pairs = frozenset(
                (i, j)
                for i in range(1, domains[x] + 1)
                for j in range(1, domains[y] + 1) if i != j)
            out.append(Table((x, y), pairs))
        return out
    if isinstance(constraint, PrecedenceGlobal):
        return [PrecedencePair(j, k, constraint.scope)
                for j, k in itertools.combinations(constraint.values, 2)]
    raise CspError(f"no binary decomposition for {type(constraint).__name__}")


def consistency_oracle(constraint, domains, level=GAC, budget=10 ** 7):
    """Prune unsupported values by brute force; returns new domain sets.

    GAC keeps value i of v iff some assignment of the constraint's scope
    within current domains satisfies it with v=i; AC works on the binary
    decomposition instead.  Iterates to a fixpoint either way.
    """
    domains = [set(d) for d in domains]
    if level == AC_BINARY:
        parts = _binary_decomposition(constraint, [max(d, default=0)
                                                   for d in domains])
        changed = True
        while changed:
            changed = False
            for c in parts:
                if isinstance(c, Table) and len(c.scope) == 2:
                    x, y = c.scope
                    for v, other, idx in ((x, y, 0), (y, x, 1)):
                        for i in sorted(domains[v]):
                            ok = any(((i, j) if idx == 0 else (j, i))
                                     in c.allowed for j in domains[other])
                            if not ok:
                                domains[v].discard(i)
                                changed = True
                else:
                    narrowed = consistency_oracle(c, domains, GAC, budget)
                    for v in c.scope:
                        if narrowed[v] != domains[v]:
                            domains[v] = narrowed[v]
                            changed = True
        return domains
    if level != GAC:
        raise CspError(f"unknown consistency level {level!r}")
    scope = constraint.scope
    work = 1
    for v in scope:
        work *= max(1, len(domains[v]))
    if work > budget:
        raise TooLarge(f"support search over {work} tuples refused")
    changed = True
    while changed:
        changed = False
        for pos, v in enumerate(scope):
            for i in sorted(domains[v]):
                others = [sorted(domains[u]) if u != v else [i] for u in scope]
                if not any(constraint.holds(t)
                           for t in itertools.product(*others)):
                    domains[v].discard(i)
                    changed = True
    return domains


# -------------------------------------------------------- strength harness

@dataclass
class StrengthReport:
    trials: int = 0
    equal: int = 0
    up_weaker: int = 0
    up_stronger: int = 0
    weaker_witnesses: list = field(default_factory=list)

    def summary(self):
        return (f"trials={self.trials} equal={self.equal} "
                f"up-weaker={self.up_weaker} up-stronger={self.up_stronger}")


def _random_spec(kind, rng, n, d, m):
    names = tuple(f"v{i + 1}" for i in range(n))
    domains = (d,) * n
    if kind == "table":
        scope = (0, 1) if n >= 2 else (0,)
        tuples = [t for t in itertools.product(range(1, d + 1),
                                               repeat=len(scope))
                  if rng.random() < 0.55]
        if not tuples:
            tuples = [tuple(rng.randint(1, d) for _ in scope)]
        constraint = Table(tuple(scope), frozenset(tuples))
    elif kind == "alldiff":
        constraint = AllDifferent(tuple(range(n)))
    elif kind == "precedence-pair":
        vals = sorted(rng.sample(range(1, d + 1), 2))
        constraint = PrecedencePair(vals[0], vals[1], tuple(range(n)))
    elif kind == "precedence":
        vals = tuple(range(1, min(m, d) + 1))
        constraint = PrecedenceGlobal(vals, tuple(range(n)))
    else:
        raise CspError(f"unknown constraint kind {kind!r}")
    return CspSpec(names, domains, (constraint,)), constraint


def _encode_for(encoder, spec):
    if encoder in ("direct", "support", "alldiff"):
        return encode(spec, method=encoder)
    if encoder in ("pair", "dfa", "allowed", "pairwise"):
        kind = spec.constraints[0]
        if isinstance(kind, PrecedencePair):
            return encode(spec, method="direct")
        return encode(spec, method="direct", precedence=encoder)
    raise CspError(f"unknown encoder {encoder!r}")


def _random_domains(rng, spec):
    doms = []
    for d in spec.domains:
        keep = [i for i in range(1, d + 1) if rng.random() < 0.7]
        if not keep:
            keep = [rng.randint(1, d)]
        doms.append(set(keep))
    return doms


def up_pruned_values(program, amap, domains):
    """Run unit propagation with removed values asserted false; report which
    still-present values get forced false (None signals a conflict)."""
    basis = propagation.build_nogoods(
        normalize(expand(program), drop_tautologies=True))
    engine = basis.engine()
    if not engine.root_propagate():
        return None
    assumed = []
    spec = amap.spec
    for v, dom in enumerate(domains):
        for i in range(1, spec.domains[v] + 1):
            if i not in dom:
                atom = amap(v, i)
                if atom in basis.index:
                    assumed.append(2 * basis.index[atom] + 1)
    if not engine.assume(assumed):
        return None
    pruned = set()
    for v, dom in enumerate(domains):
        for i in sorted(dom):
            atom = amap(v, i)
            if atom in basis.index and engine.value(basis.index[atom]) == 2:
                pruned.add((v, i))
    return pruned


def strength_compare(encoder, constraint_kind, trials=100, seed=0,
                     n=3, d=3, m=3):
    """Compare unit propagation on an encoding against the matching oracle.

    Per trial: fresh random instance and random current domains; UP runs with
    the removed values asserted false; the oracle prunes by brute force.
    UP-stronger events indicate an unsound encoding and must never occur.
    """
    rng = random.Random(seed)
    level = AC_BINARY if encoder in ("direct", "support", "alldiff") else GAC
    report = StrengthReport()
    for _ in range(trials):
        spec, constraint = _random_spec(constraint_kind, rng, n, d, m)
        program = _encode_for(encoder, spec)
        amap = VarAtomMap(spec)
        domains = _random_domains(rng, spec)
        oracle_doms = consistency_oracle(constraint, domains, level)
        oracle_pruned = {(v, i)
                         for v, dom in enumerate(domains)
                         for i in dom if i not in oracle_doms[v]}
        oracle_wipeout = any(not dom for dom in oracle_doms)
        up = up_pruned_values(program, amap, domains)
        report.trials += 1
        if up is None:
            if oracle_wipeout:
                report.equal += 1
            else:
                report.up_stronger += 1
        elif oracle_wipeout:
            report.up_weaker += 1
            if len(report.weaker_witnesses) < 5:
                report.weaker_witnesses.append((spec, domains))
        elif up == oracle_pruned:
            report.equal += 1
        elif up <= oracle_pruned:
            report.up_weaker += 1
            if len(report.weaker_witnesses) < 5:
                report.weaker_witnesses.append((spec, domains))
        else:
            report.up_stronger += 1
    return report


# -------------------------------------------------------------- text format

_VAR_RE = re.compile(r"var\s+(\w+)\s+1\.\.(\d+)\s*\.")
_ALLDIFF_RE = re.compile(r"alldiff((?:\s+\w+)+)\s*\.")
_TABLE_RE = re.compile(r"table\s*\(([^)]*)\)\s*\{(.*)\}\s*\.")
_PREC_RE = re.compile(r"precedence\s*\[([^\]]*)\]\s*\(([^)]*)\)\s*\.")
_PAIR_BODY_RE = re.compile(r"\(([^)]*)\)")


def parse_cspspec(text):
    """Parse the statement-per-line CSP text format."""
    names = []
    domains = []
    index = {}
    constraints = []

    def var_index(tok, no):
        tok = tok.strip()
        if tok not in index:
            raise CspError(f"line {no}: unknown variable {tok!r}")
        return index[tok]

    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        m = _VAR_RE.fullmatch(line)
        if m:
            name, d = m.group(1), int(m.group(2))
            if name in index:
                raise CspError(f"line {no}: duplicate variable {name!r}")
            index[name] = len(names)
            names.append(name)
            domains.append(d)
            continue
        m = _ALLDIFF_RE.fullmatch(line)
        if m:
            scope = tuple(var_index(t, no) for t in m.group(1).split())
            constraints.append(AllDifferent(scope))
            continue
        m = _TABLE_RE.fullmatch(line)
        if m:
            scope = tuple(var_index(t, no) for t in m.group(1).split(","))
            tuples = []
            for body in _PAIR_BODY_RE.findall(m.group(2)):
                tuples.append(tuple(int(x) for x in body.split(",")))
            constraints.append(Table(scope, frozenset(tuples)))
            continue
        m = _PREC_RE.fullmatch(line)
        if m:
            vals_text = m.group(1).strip()
            if ".." in vals_text:
                lo, hi = vals_text.split("..")
                values = tuple(range(int(lo), int(hi) + 1))
            else:
                values = tuple(int(x) for x in vals_text.split(","))
            scope = tuple(var_index(t, no) for t in m.group(2).split(","))
            if len(values) == 2:
                constraints.append(
                    PrecedencePair(values[0], values[1], scope))
            else:
                constraints.append(PrecedenceGlobal(values, scope))
            continue
        raise CspError(f"line {no}: unrecognised statement {line!r}")
    return CspSpec(tuple(names), tuple(domains), tuple(constraints))


def format_cspspec(spec):
    lines = []
    for name, d in zip(spec.names, spec.domains):
        lines.append(f"var {name} 1..{d}.")
    for c in spec.constraints:
        scope_names = [spec.names[v] for v in c.scope]
        if isinstance(c, AllDifferent):
            lines.append("alldiff " + " ".join(scope_names) + ".")
        elif isinstance(c, Table):
            tuples = ",".join("(" + ",".join(map(str, t)) + ")"
                              for t in sorted(c.allowed))
            lines.append(f"table ({','.join(scope_names)}) {{{tuples}}}.")
        elif isinstance(c, PrecedencePair):
            lines.append(f"precedence [{c.d_j},{c.d_k}] "
                         f"({','.join(scope_names)}).")
        elif isinstance(c, PrecedenceGlobal):
            vals = f"{c.values[0]}..{c.values[-1]}" \
                if c.values == tuple(range(c.values[0], c.values[-1] + 1)) \
                else ",".join(map(str, c.values))
            lines.append(f"precedence [{vals}] ({','.join(scope_names)}).")
    return "\n".join(lines) + "\n"
