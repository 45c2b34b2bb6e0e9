"""``aut`` command-line front end.

Exit status: 0 on success, 1 when a law or oracle check fails, 2 on usage,
parse or validation errors.
"""
from __future__ import annotations

import argparse
import random
import sys
from typing import Sequence

from . import algebra, laws, regex
from .errors import AutomataError, ParseError
from .fileformat import load, render
from .theory import generate_theory, recognize_membership, recognizing_subset
from .tree import TreeAutomaton, accepts, parse_term, saturation_slice_trees
from .word import (RegularWordMap, WordAutomaton, as_word, compose_regular, format_word,
                   saturation_slice, weight)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def print_help(self, file=None):
        # hand the text back to run_command instead of printing it
        raise _HelpExit(0, self.format_help())

    def exit(self, status=0, message=None):
        raise _HelpExit(status, message)


class _HelpExit(Exception):
    def __init__(self, status, message):
        self.status = status
        self.message = message


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aut", description="Weighted word and tree automata over semirings.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("weight", help="language weight of a word or tree from a state")
    w.add_argument("file")
    w.add_argument("--state", required=True)
    g = w.add_mutually_exclusive_group(required=True)
    g.add_argument("--word")
    g.add_argument("--term")

    e = sub.add_parser("enumerate", help="saturation slice from a state")
    e.add_argument("file")
    e.add_argument("--state", required=True)
    g = e.add_mutually_exclusive_group(required=True)
    g.add_argument("--max-len", type=int)
    g.add_argument("--max-height", type=int)

    t = sub.add_parser("theory", help="finite theory of state-set functions (boolean only)")
    t.add_argument("file")
    t.add_argument("--emit-table", action="store_true",
                   help="print only the TSV table, without summary comments")
    t.add_argument("--cap", type=int, default=100_000)

    r = sub.add_parser("recognize", help="membership through the finite theory")
    r.add_argument("file")
    r.add_argument("--state", required=True)
    g = r.add_mutually_exclusive_group(required=True)
    g.add_argument("--word")
    g.add_argument("--term")

    lw = sub.add_parser("laws", help="run law suites against an automaton")
    lw.add_argument("file")
    lw.add_argument("--suite", choices=list(laws.SUITES) + ["all"], default="all")
    lw.add_argument("--seed", type=int, default=0)
    lw.add_argument("--samples", type=int, default=200)

    c = sub.add_parser("compile", help="compile a regular expression to an automaton file")
    c.add_argument("regex")
    c.add_argument("--alphabet", nargs="+", required=True)
    c.add_argument("--semiring", default="boolean")
    c.add_argument("-o", "--output")

    m = sub.add_parser("compose", help="sequential composite of two regular maps")
    m.add_argument("file1")
    m.add_argument("file2")
    m.add_argument("-o", "--output")
    return p


def _resolve_state(A, token: str) -> int:
    if A.labels and token in A.labels:
        return A.labels.index(token)
    for name, q in A.entries:
        if name == token:
            return q
    try:
        q = int(token)
    except ValueError:
        raise UsageError(f"unknown state {token!r}") from None
    if not 0 <= q < A.n:
        raise UsageError(f"state {q} outside 0..{A.n - 1}")
    return q


def _word_arg(A, text: str):
    if text in ("", "ε", "@eps"):
        return ()
    return as_word(text, A.alphabet)


def _fmt(spec, values) -> str:
    return "\t".join(spec.format_value(v) for v in values)


def _need(A, kind, option):
    if kind == "word" and not isinstance(A, WordAutomaton):
        raise UsageError(f"{option} needs a word automaton")
    if kind == "tree" and not isinstance(A, TreeAutomaton):
        raise UsageError(f"{option} needs a tree automaton")


def _cmd_weight(args, out):
    A = load(args.file)
    i = _resolve_state(A, args.state)
    if args.word is not None:
        _need(A, "word", "--word")
        out.append(_fmt(A.spec, weight(A, i, _word_arg(A, args.word))))
    else:
        _need(A, "tree", "--term")
        out.append(A.spec.format_value(accepts(A, i, parse_term(args.term))))
    return 0


def _cmd_enumerate(args, out):
    A = load(args.file)
    i = _resolve_state(A, args.state)
    labels = [A.label(q) for q in range(A.n)]
    if args.max_len is not None:
        _need(A, "word", "--max-len")
        out.append("\t".join(["word"] + labels))
        for w, row in saturation_slice(A, i, args.max_len).items():
            out.append(format_word(w) + "\t" + _fmt(A.spec, row))
    else:
        _need(A, "tree", "--max-height")
        out.append("\t".join(["term"] + labels))
        for t, vec in saturation_slice_trees(A, i, args.max_height).items():
            out.append(f"{t}\t{_fmt(A.spec, vec)}")
    return 0


def _cmd_theory(args, out):
    A = load(args.file)
    th = generate_theory(A, args.cap)
    labels = [A.label(q) for q in range(A.n)]
    if not args.emit_table:
        out.append(f"# elements\t{len(th)}")
        for i in range(A.n):
            rec = recognizing_subset(A, i, th)
            out.append(f"# recognizing {labels[i]}\t" + ",".join(th.name(g) for g in rec.membership))
            out.append(f"# recognizing-equality {labels[i]}\t" + ",".join(th.name(g) for g in rec.equality))
    out.append(th.to_tsv(labels))
    return 0


def _cmd_recognize(args, out):
    A = load(args.file)
    i = _resolve_state(A, args.state)
    if args.word is not None:
        _need(A, "word", "--word")
        term = _word_arg(A, args.word)
    else:
        _need(A, "tree", "--term")
        term = parse_term(args.term)
    out.append("true" if recognize_membership(A, i, term) else "false")
    return 0


def _cmd_laws(args, out):
    A = load(args.file)
    rng = random.Random(args.seed)
    chosen = laws.SUITES if args.suite == "all" else (args.suite,)
    ok = True
    for suite in chosen:
        if suite == "duality":
            rep = laws.duality_suite(A, rng, args.samples)
        elif suite == "em":
            rep = laws.em_suite(A)
        elif suite == "saturation":
            rep = laws.saturation_suite(A)
        else:
            if A.spec.name != "boolean" or A.exits != 1:
                out.append("SKIP\trecognition\tneeds a boolean automaton with one exit")
                continue
            rep = laws.recognition_suite(A)
        for r in rep:
            out.append(f"{r}")
        ok = ok and rep.ok
    return 0 if ok else 1


def _write(text, path, out):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.append(text.rstrip("\n"))


def _with_entries(A, entries):
    cls = type(A)
    kw = {f: getattr(A, f) for f in A.__dataclass_fields__}
    kw["entries"] = tuple(entries)
    return cls(**kw)


def _cmd_compile(args, out):
    try:
        spec = algebra.by_name(args.semiring)
    except KeyError:
        raise UsageError(f"unknown semiring {args.semiring!r}") from None
    alphabet = [s for tok in args.alphabet for s in tok.replace(",", " ").split()]
    e = regex.parse_regex(args.regex, spec)
    r = regex.compile(e, spec, alphabet)
    A = _with_entries(r.automaton, [("main", r.entry[0])])
    _write(render(A), args.output, out)
    return 0


def _as_regular(A) -> RegularWordMap:
    if not isinstance(A, WordAutomaton):
        raise UsageError("compose needs word automata")
    entry = tuple(q for _, q in A.entries) or (0,)
    return RegularWordMap(entry, A)


def _cmd_compose(args, out):
    A1, A2 = load(args.file1), load(args.file2)
    r = compose_regular(_as_regular(A1), _as_regular(A2))
    names = [name for name, _ in A1.entries] or ["main"]
    A = _with_entries(r.automaton, list(zip(names, r.entry)))
    _write(render(A), args.output, out)
    return 0


COMMANDS = {
    "weight": _cmd_weight,
    "enumerate": _cmd_enumerate,
    "theory": _cmd_theory,
    "recognize": _cmd_recognize,
    "laws": _cmd_laws,
    "compile": _cmd_compile,
    "compose": _cmd_compose,
}


def run_command(argv: Sequence[str]) -> tuple[int, str]:
    """Run one ``aut`` invocation; returns the exit code and rendered output."""
    out: list[str] = []
    try:
        args = _parser().parse_args(list(argv))
        code = COMMANDS[args.command](args, out)
    except _HelpExit as h:
        return h.status, (h.message or "").rstrip("\n")
    except UsageError as exc:
        return 2, f"error: {exc}"
    except ParseError as exc:
        return 2, f"parse error: {exc}"
    except (AutomataError, OSError) as exc:
        return 2, f"error: {exc}"
    return code, "\n".join(out)


def main(argv: Sequence[str] | None = None) -> int:
    code, text = run_command(sys.argv[1:] if argv is None else argv)
    if text:
        print(text, file=sys.stderr if code == 2 else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
