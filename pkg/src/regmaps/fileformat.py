"""Line-oriented automaton files.

One directive per line; ``#`` starts a comment::

    kind word|tree
    semiring boolean|natural|tropical|real|unit-interval|chain:<k>
    alphabet <sym> <sym> ...
    states <n>
    exits <p>                                  # optional, default 1 or max exit + 1
    edge <src> <sym|@eps|"word"> <dst> [<weight>]   # word automata
    edge <src> <sym> <left> <right> [<weight>]      # tree automata
    final <state> [<exit-index>] [<weight>]
    entry <name> <state>
    label <state> <display>

States are 0-based.  A quoted multi-symbol label on a word edge becomes a
chain through fresh states appended after the declared ones; the edge
weight sits on the first link.  Weights default to the semiring's one.
"""
from __future__ import annotations

import re
from typing import Union

from . import algebra
from .errors import ParseError, ValidationError
from .tree import TreeAutomaton
from .word import WordAutomaton, as_word

Automaton = Union[WordAutomaton, TreeAutomaton]

_TOKEN = re.compile(r'"([^"]*)"|(\S+)')
EPS = "@eps"


def _tokens(line: str, lineno: int) -> list[tuple[str, bool]]:
    """Split a line into ``(text, quoted)`` pairs, dropping any comment."""
    out = []
    pos = 0
    while pos < len(line):
        while pos < len(line) and line[pos].isspace():
            pos += 1
        if pos >= len(line) or line[pos] == "#":
            break
        if line[pos] == '"':
            end = line.find('"', pos + 1)
            if end < 0:
                raise ParseError(lineno, "unterminated quote")
            out.append((line[pos + 1:end], True))
            pos = end + 1
        else:
            m = re.compile(r"[^\s#]+").match(line, pos)
            out.append((m.group(0), False))
            pos = m.end()
    return out


def _int(tok, lineno, what):
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(lineno, f"{what}: expected an integer, got {tok!r}") from None
    if v < 0:
        raise ParseError(lineno, f"{what}: negative value {v}")
    return v


def parse_automaton(text: str) -> Automaton:
    header = {}
    edges = []
    finals = []
    entries = []
    labels = {}
    exits = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw, lineno)
        if not toks:
            continue
        (head, quoted), args = toks[0], toks[1:]
        if quoted:
            raise ParseError(lineno, "directive expected")
        vals = [t for t, _ in args]
        if head in ("kind", "semiring", "states"):
            if head in header:
                raise ParseError(lineno, f"duplicate {head!r}")
            if len(vals) != 1:
                raise ParseError(lineno, f"{head!r} takes one argument")
            header[head] = (vals[0], lineno)
        elif head == "alphabet":
            if "alphabet" in header:
                raise ParseError(lineno, "duplicate 'alphabet'")
            header["alphabet"] = (vals, lineno)
        elif head == "exits":
            if len(vals) != 1:
                raise ParseError(lineno, "'exits' takes one argument")
            exits = _int(vals[0], lineno, "exits")
        elif head == "edge":
            edges.append((args, lineno))
        elif head == "final":
            if not 1 <= len(vals) <= 3:
                raise ParseError(lineno, "'final' takes a state, optional exit index and optional weight")
            finals.append((vals, lineno))
        elif head == "entry":
            if len(vals) != 2:
                raise ParseError(lineno, "'entry' takes a name and a state")
            entries.append((vals[0], _int(vals[1], lineno, "entry"), lineno))
        elif head == "label":
            if len(vals) != 2:
                raise ParseError(lineno, "'label' takes a state and a display name")
            labels[_int(vals[0], lineno, "label")] = (vals[1], lineno)
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")

    for required in ("kind", "semiring", "alphabet", "states"):
        if required not in header:
            raise ParseError(0, f"missing {required!r} directive")
    kind, kline = header["kind"]
    if kind not in ("word", "tree"):
        raise ParseError(kline, f"kind must be 'word' or 'tree', got {kind!r}")
    token, sline = header["semiring"]
    try:
        spec = algebra.by_name(token)
    except KeyError:
        raise ParseError(sline, f"unknown semiring {token!r}") from None
    alphabet = tuple(header["alphabet"][0])
    if len(set(alphabet)) != len(alphabet):
        raise ParseError(header["alphabet"][1], "duplicate alphabet symbol")
    if EPS in alphabet:
        raise ParseError(header["alphabet"][1], f"{EPS} is reserved")
    n = _int(header["states"][0], header["states"][1], "states")

    def weight(tok, lineno):
        try:
            v = spec.parse_value(tok)
        except (ValueError, ArithmeticError) as exc:
            raise ParseError(lineno, f"bad {spec.name} weight {tok!r}: {exc}") from None
        if not spec.contains(v):
            raise ParseError(lineno, f"{tok!r} is not a {spec.name} value")
        return v

    def state(tok, lineno, bound):
        q = _int(tok, lineno, "state")
        if q >= bound:
            raise ValidationError(f"line {lineno}: state {q} outside 0..{bound - 1}")
        return q

    fin = []
    for vals, lineno in finals:
        q = state(vals[0], lineno, n)
        j = _int(vals[1], lineno, "exit") if len(vals) > 1 else 0
        w = weight(vals[2], lineno) if len(vals) > 2 else spec.one
        fin.append((q, j, w))
    p = exits if exits is not None else max([j + 1 for _, j, _ in fin] + [1])
    for q, j, _ in fin:
        if j >= p:
            raise ValidationError(f"exit index {j} but only {p} exits declared")

    for q, (_, lineno) in labels.items():
        if q >= n:
            raise ValidationError(f"line {lineno}: label for state {q} outside 0..{n - 1}")
    for name, q, lineno in entries:
        if q >= n:
            raise ValidationError(f"line {lineno}: entry {name} -> state {q} outside 0..{n - 1}")

    if kind == "tree":
        parsed = []
        for args, lineno in edges:
            vals = [t for t, _ in args]
            if len(vals) not in (4, 5):
                raise ParseError(lineno, "tree edge: edge <src> <sym> <left> <right> [<weight>]")
            src, sym, left, right = vals[:4]
            if sym not in alphabet:
                raise ValidationError(f"line {lineno}: symbol {sym!r} not in alphabet")
            w = weight(vals[4], lineno) if len(vals) == 5 else spec.one
            parsed.append((state(src, lineno, n), sym, state(left, lineno, n), state(right, lineno, n), w))
        return TreeAutomaton.from_edges(
            spec, n, alphabet, parsed, fin, exits=p,
            labels=tuple(labels[q][0] if q in labels else f"q{q}" for q in range(n)) if labels else (),
            entries=tuple((name, q) for name, q, _ in entries))

    parsed = []
    fresh = n
    for args, lineno in edges:
        if len(args) not in (3, 4):
            raise ParseError(lineno, 'word edge: edge <src> <sym|@eps|"word"> <dst> [<weight>]')
        (src, _), (lab, quoted), (dst, _) = args[:3]
        w = weight(args[3][0], lineno) if len(args) == 4 else spec.one
        s, d = state(src, lineno, n), state(dst, lineno, n)
        if not quoted and lab == EPS:
            parsed.append((s, None, d, w))
            continue
        word = as_word(lab, alphabet) if quoted else (lab,)
        for a in word:
            if a not in alphabet:
                raise ValidationError(f"line {lineno}: symbol {a!r} not in alphabet")
        if not word:
            parsed.append((s, None, d, w))
        elif len(word) == 1:
            parsed.append((s, word[0], d, w))
        else:
            chain = [s] + list(range(fresh, fresh + len(word) - 1)) + [d]
            fresh += len(word) - 1
            for k, a in enumerate(word):
                parsed.append((chain[k], a, chain[k + 1], w if k == 0 else spec.one))
    total = fresh
    lab_t = ()
    if labels:
        lab_t = tuple(labels[q][0] if q in labels else f"q{q}" for q in range(total))
    return WordAutomaton.from_edges(spec, total, alphabet, parsed, fin, exits=p, labels=lab_t,
                                    entries=tuple((name, q) for name, q, _ in entries))


def render(A: Automaton) -> str:
    """Serialise an automaton; ``parse_automaton(render(A))`` rebuilds it."""
    spec = A.spec
    fmt = spec.format_value
    is_word = isinstance(A, WordAutomaton)
    lines = [
        f"kind {'word' if is_word else 'tree'}",
        f"semiring {spec.name}",
        "alphabet " + " ".join(A.alphabet),
        f"states {A.n}",
    ]
    if A.exits != 1:
        lines.append(f"exits {A.exits}")
    for q, lab in enumerate(A.labels):
        lines.append(f"label {q} {lab}")

    def wsuffix(w):
        return "" if w == spec.one else f" {fmt(w)}"

    if is_word:
        for a in A.alphabet:
            m = A.letters[a]
            for i in range(A.n):
                for j in range(A.n):
                    if m[i, j] != spec.zero:
                        lines.append(f"edge {i} {a} {j}{wsuffix(m[i, j])}")
        if A.eps is not None:
            for i in range(A.n):
                for j in range(A.n):
                    if A.eps[i, j] != spec.zero:
                        lines.append(f"edge {i} {EPS} {j}{wsuffix(A.eps[i, j])}")
    else:
        for (q, s), pairs in sorted(A.delta.items(), key=lambda kv: (kv[0][0], A.alphabet.index(kv[0][1]))):
            for (q1, q2), w in sorted(pairs.items()):
                if w != spec.zero:
                    lines.append(f"edge {q} {s} {q1} {q2}{wsuffix(w)}")
    for q in range(A.n):
        for j in range(A.exits):
            w = A.finals[q, j]
            if w == spec.zero:
                continue
            if j == 0 and w == spec.one:
                lines.append(f"final {q}")
            elif w == spec.one:
                lines.append(f"final {q} {j}")
            else:
                lines.append(f"final {q} {j} {fmt(w)}")
    for name, q in A.entries:
        lines.append(f"entry {name} {q}")
    return "\n".join(lines) + "\n"


def load(path) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        return parse_automaton(fh.read())
