"""Bit-exact smodels intermediate format I/O plus a small text notation.

Accepted rule lines: `1 h n m NEG POS`, `2 h n m bound NEG POS`,
`3 t HEADS n m NEG POS`, `8 t HEADS n m NEG POS`, with a `0` terminator,
then `id name` symbol lines, `0`, `B+` ids `0`, `B-` ids `0`, and a trailing
model count.  All integers are decimal and whitespace-separated within a line.

The format cannot express an empty rule head, so integrity constraints ride a
designated falsity atom: the writer emits them as rules deriving a hidden atom
listed in B-, and the reader folds that shape back into headless rules.
"""

import io
import re

from .program import CARDINALITY, CHOICE, DISJUNCTIVE, Program, Rule


class ParseError(Exception):
    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class UnsupportedRuleType(ParseError):
    """Weight (5) and minimize (6) statements are out of scope."""


# ---------------------------------------------------------------- smodels in

class _Lines:
    def __init__(self, text):
        self.lines = text.splitlines()
        self.pos = 0

    def next(self):
        while self.pos < len(self.lines):
            raw = self.lines[self.pos]
            self.pos += 1
            if raw.strip():
                return self.pos, raw
        return self.pos, None

    def exhausted(self):
        return all(not l.strip() for l in self.lines[self.pos:])


def _ints(no, raw, reason="malformed integer line"):
    try:
        return [int(t) for t in raw.split()]
    except ValueError:
        raise ParseError(no, reason) from None


def _take(no, vals, count, what):
    if len(vals) < count:
        raise ParseError(no, f"truncated {what}")
    return vals[:count], vals[count:]


def _positive(no, vals, what):
    for v in vals:
        if v < 1:
            raise ParseError(no, f"{what} must be positive, got {v}")
    return vals


def _read_rule(no, vals):
    rtype, rest = vals[0], vals[1:]
    if rtype in (5, 6):
        raise UnsupportedRuleType(no, f"rule type {rtype} (weights) not supported")
    if rtype == 1:
        (h,), rest = _take(no, rest, 1, "rule head")
        return _basic(no, DISJUNCTIVE, (h,), rest, bounded=False)
    if rtype == 2:
        (h,), rest = _take(no, rest, 1, "rule head")
        return _basic(no, CARDINALITY, (h,), rest, bounded=True)
    if rtype in (3, 8):
        (t,), rest = _take(no, rest, 1, "head count")
        if t < 0:
            raise ParseError(no, "negative head count")
        heads, rest = _take(no, rest, t, "head atoms")
        kind = CHOICE if rtype == 3 else DISJUNCTIVE
        if kind == CHOICE and t == 0:
            raise ParseError(no, "choice rule with empty head")
        return _basic(no, kind, tuple(heads), rest, bounded=False)
    raise ParseError(no, f"unknown rule type {rtype}")


def _basic(no, kind, heads, rest, bounded):
    (n, m), rest = _take(no, rest, 2, "literal counts")
    if m < 0 or n < m:
        raise ParseError(no, f"bad literal counts n={n} m={m}")
    bound = 0
    if bounded:
        (bound,), rest = _take(no, rest, 1, "bound")
        if bound < 0:
            raise ParseError(no, "negative bound")
    neg, rest = _take(no, rest, m, "negative body")
    pos, rest = _take(no, rest, n - m, "positive body")
    if rest:
        raise ParseError(no, "trailing integers on rule line")
    _positive(no, heads + tuple(neg) + tuple(pos), "atom id")
    try:
        return Rule(kind, heads, tuple(pos), tuple(neg), bound)
    except ValueError as exc:
        raise ParseError(no, str(exc)) from None


def _read_compute(lines, tag):
    no, raw = lines.next()
    if raw is None or raw.strip() != tag:
        raise ParseError(no, f"expected {tag} section")
    ids = []
    while True:
        no, raw = lines.next()
        if raw is None:
            raise ParseError(no, f"unterminated {tag} section")
        vals = _ints(no, raw, f"malformed id in {tag}")
        if vals == [0]:
            return ids
        ids.extend(_positive(no, vals, "atom id"))


def _fold_falsity(rules, symbols, bplus, bminus, atom_count):
    """Undo the writer's falsity idiom: hidden B- atoms that only occur as
    rule heads become empty heads again."""
    heads = set()
    bodies = set()
    for r in rules:
        heads.update(r.head)
        bodies.update(r.body_pos)
        bodies.update(r.body_neg)
    folded = set()
    for f in bminus:
        if f in symbols or f in bodies or f not in heads or f in bplus:
            continue
        folded.add(f)
    if not folded:
        return rules, bminus, atom_count
    out = []
    for r in rules:
        if len(r.head) == 1 and r.head[0] in folded:
            out.append(Rule(r.kind, (), r.body_pos, r.body_neg, r.bound))
        else:
            out.append(r)
    # a freshly allocated falsity atom is the top id and otherwise unused:
    # drop it from the program entirely so writing round-trips
    top = atom_count
    if top in folded and top not in bplus:
        bminus = [b for b in bminus if b != top]
        referenced = {a for r in out for a in r.atoms()}
        referenced |= set(symbols) | set(bplus) | set(bminus)
        atom_count = max(referenced, default=0)
    return out, bminus, atom_count


def read_smodels(data):
    """Parse smodels-format bytes (or text) into a Program."""
    if isinstance(data, (bytes, bytearray)):
        text = data.decode("ascii")
    elif isinstance(data, str):
        text = data
    else:
        text = data.read()
        if isinstance(text, bytes):
            text = text.decode("ascii")
    lines = _Lines(text)

    rules = []
    while True:
        no, raw = lines.next()
        if raw is None:
            raise ParseError(no, "unterminated rules section")
        vals = _ints(no, raw)
        if vals == [0]:
            break
        if not vals:
            continue
        rules.append(_read_rule(no, vals))

    symbols = {}
    while True:
        no, raw = lines.next()
        if raw is None:
            raise ParseError(no, "unterminated symbol table")
        stripped = raw.strip()
        if stripped == "0":
            break
        m = re.fullmatch(r"(\d+)\s+(\S.*?)\s*", stripped)
        if not m:
            raise ParseError(no, f"malformed symbol line {stripped!r}")
        ident, name = int(m.group(1)), m.group(2)
        if ident < 1:
            raise ParseError(no, "atom id must be positive")
        if ident in symbols:
            raise ParseError(no, f"duplicate symbol for atom {ident}")
        if name in symbols.values():
            raise ParseError(no, f"duplicate symbol name {name!r}")
        symbols[ident] = name

    bplus = _read_compute(lines, "B+")
    bminus = _read_compute(lines, "B-")

    no, raw = lines.next()
    if raw is None:
        raise ParseError(no, "missing model count")
    vals = _ints(no, raw, "malformed model count")
    if len(vals) != 1 or vals[0] < 0:
        raise ParseError(no, "model count must be one non-negative integer")
    models = vals[0]
    if not lines.exhausted():
        no, raw = lines.next()
        raise ParseError(no, f"unexpected trailing data {raw.strip()!r}")

    referenced = {a for r in rules for a in r.atoms()}
    referenced |= set(symbols) | set(bplus) | set(bminus)
    atom_count = max(referenced, default=0)
    rules, bminus, atom_count = _fold_falsity(
        rules, symbols, bplus, bminus, atom_count)
    return Program(tuple(rules), atom_count, dict(sorted(symbols.items())),
                   frozenset(bplus), frozenset(bminus), models)


# --------------------------------------------------------------- smodels out

def _falsity_atom(p):
    """Pick the atom standing in for an empty head, allocating if needed.

    An existing hidden B- atom is reused only when no rule mentions it and it
    is not the highest id the output will carry; otherwise reading the output
    back could not tell it apart from a fresh allocation.
    """
    needs = any(not r.head for r in p.rules)
    if not needs:
        return None
    referenced = {a for r in p.rules for a in r.atoms()}
    mentioned = referenced | set(p.symbols) | p.compute_true
    for f in sorted(p.compute_false):
        if f in p.symbols or f in referenced or f in p.compute_true:
            continue
        top = max(mentioned | (p.compute_false - {f}), default=0)
        if f < top:
            return f
    return max(mentioned | p.compute_false, default=0) + 1


def write_smodels(p, stream=None):
    """Serialize deterministically; returns bytes when no stream is given."""
    falsity = _falsity_atom(p)
    out = []
    for r in p.rules:
        head = r.head if r.head else (falsity,)
        neg, pos = r.body_neg, r.body_pos
        n, m = len(neg) + len(pos), len(neg)
        if r.kind == CARDINALITY:
            out.append([2, head[0], n, m, r.bound, *neg, *pos])
        elif r.kind == CHOICE:
            out.append([3, len(head), *head, n, m, *neg, *pos])
        elif len(head) == 1:
            out.append([1, head[0], n, m, *neg, *pos])
        else:
            out.append([8, len(head), *head, n, m, *neg, *pos])
    buf = io.StringIO()
    for row in out:
        buf.write(" ".join(map(str, row)))
        buf.write("\n")
    buf.write("0\n")
    for ident in sorted(p.symbols):
        buf.write(f"{ident} {p.symbols[ident]}\n")
    buf.write("0\nB+\n")
    for a in sorted(p.compute_true):
        buf.write(f"{a}\n")
    buf.write("0\nB-\n")
    bminus = set(p.compute_false)
    if falsity is not None:
        bminus.add(falsity)
    for a in sorted(bminus):
        buf.write(f"{a}\n")
    buf.write("0\n")
    buf.write(f"{p.models_requested}\n")
    data = buf.getvalue().encode("ascii")
    if stream is None:
        return data
    if hasattr(stream, "buffer"):
        stream.buffer.write(data)
    elif isinstance(stream, io.TextIOBase):
        stream.write(data.decode("ascii"))
    else:
        stream.write(data)
    return None


# -------------------------------------------------------------- text notation

_NAME = r"[A-Za-z_][A-Za-z0-9_]*(?:\([^()]*\))?"
_TOKEN = re.compile(r"\s*(:-|\{|\}|;|,|\.|\d+|" + _NAME + r")")


def _tokenize(text, errors_at):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(errors_at, f"bad token near {text[pos:pos+20]!r}")
            break
        toks.append(m.group(1))
        pos = m.end()
    return toks


class _TextParser:
    def __init__(self):
        self.ids = {}
        self.rules = []

    def atom(self, name):
        if name not in self.ids:
            self.ids[name] = len(self.ids) + 1
        return self.ids[name]

    def parse_statement(self, toks, no):
        head_kind = DISJUNCTIVE
        heads = []
        bound = 0
        i = 0

        def peek():
            return toks[i] if i < len(toks) else None

        if peek() == "{":
            head_kind = CHOICE
            i += 1
            while peek() != "}":
                if peek() is None:
                    raise ParseError(no, "unterminated choice head")
                heads.append(self.atom(toks[i]))
                i += 1
                if peek() == ",":
                    i += 1
            i += 1
        elif peek() != ":-":
            while True:
                if peek() is None:
                    raise ParseError(no, "missing '.'")
                heads.append(self.atom(toks[i]))
                i += 1
                if peek() == ";":
                    i += 1
                    continue
                break

        pos, neg = [], []
        if peek() == ":-":
            i += 1
            if peek() is not None and peek().isdigit():
                head_kind = CARDINALITY
                bound = int(toks[i])
                i += 1
                if peek() != "{":
                    raise ParseError(no, "expected '{' after cardinality bound")
                i += 1
                closing = "}"
            else:
                closing = None
            while peek() is not None and peek() != "." and peek() != closing:
                negated = False
                if peek() == "not":
                    negated = True
                    i += 1
                if peek() is None or peek() in (",", ".", "}"):
                    raise ParseError(no, "expected literal")
                a = self.atom(toks[i])
                i += 1
                (neg if negated else pos).append(a)
                if peek() == ",":
                    i += 1
            if closing:
                if peek() != closing:
                    raise ParseError(no, "unterminated cardinality body")
                i += 1
        if peek() != ".":
            raise ParseError(no, "statement must end with '.'")
        if toks[i + 1:]:
            raise ParseError(no, "trailing tokens after '.'")
        if head_kind == CARDINALITY and len(heads) > 1:
            raise ParseError(no, "cardinality rules take at most one head atom")
        try:
            self.rules.append(
                Rule(head_kind, tuple(heads), tuple(pos), tuple(neg), bound))
        except ValueError as exc:
            raise ParseError(no, str(exc)) from None


def read_text(text):
    """Parse the one-rule-per-line text notation into a Program."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    parser = _TextParser()
    pending = []
    pending_line = 0
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0]
        if not line.strip():
            continue
        toks = _tokenize(line, no)
        for t in toks:
            if not pending:
                pending_line = no
            pending.append(t)
            if t == ".":
                parser.parse_statement(pending, pending_line)
                pending = []
    if pending:
        raise ParseError(pending_line, "unterminated statement")
    symbols = {i: name for name, i in parser.ids.items()}
    return Program(tuple(parser.rules), len(parser.ids),
                   dict(sorted(symbols.items())))


def _name(p, a):
    return p.symbols.get(a, f"_{a}")


def write_text(p):
    """Render a Program in the text notation (hidden atoms print as _id)."""
    lines = []
    for r in p.rules:
        body = [_name(p, a) for a in r.body_pos]
        body += [f"not {_name(p, a)}" for a in r.body_neg]
        if r.kind == CHOICE:
            head = "{" + ", ".join(_name(p, a) for a in r.head) + "}"
        else:
            head = " ; ".join(_name(p, a) for a in r.head)
        if r.kind == CARDINALITY:
            inner = ", ".join(body)
            tail = f":- {r.bound} {{{inner}}}"
            lines.append(f"{head} {tail}.".strip())
        elif body:
            lines.append(f"{head} :- {', '.join(body)}.".strip())
        else:
            lines.append(f"{head}.")
    return "\n".join(lines) + "\n"
