import random
import shutil
import subprocess
from pathlib import Path

import pytest

from regmaps.algebra import BOOLEAN, NATURAL, TROPICAL
from regmaps.cli import run_command
from regmaps.errors import ParseError, ValidationError
from regmaps.fileformat import parse_automaton, render
from regmaps.tree import TreeAutomaton
from regmaps.word import WordAutomaton, weight, words_upto

from strategies import random_tree_automaton, random_word_automaton

DATA = Path(__file__).parent / "data"
WORKED = str(DATA / "worked-tree.aut")


# file format

def test_worked_file_parses():
    A = parse_automaton((DATA / "worked-tree.aut").read_text())
    assert isinstance(A, TreeAutomaton)
    assert A.labels == ("1", "2")
    assert A.weight_of(1, "a", 1, 1) is True
    assert A.weight_of(1, "b", 0, 0) is True
    assert A.transitions("a") == [(1, 1, 1, True)]
    assert A.finals.column(0) == (True, False)


def test_empty_edge_section():
    A = parse_automaton("kind word\nsemiring natural\nalphabet a b\nstates 2\n")
    assert all(v == 0 for m in A.letters.values() for row in m.entries for v in row)
    assert A.eps is None


def test_word_edges_and_weights():
    text = """
    kind word
    semiring natural
    alphabet a b
    states 2
    edge 0 a 1 4      # weighted
    edge 1 @eps 0
    edge 0 "ab" 1 2
    final 1 0 3
    entry main 0
    """
    A = parse_automaton(text)
    assert A.n == 3  # one fresh state for the quoted word
    assert A.letters["a"][0, 1] == 4
    assert A.eps[1, 0] == 1
    assert A.entries == (("main", 0),)
    # by hand: the only path is the quoted edge (2), then exit 3
    assert weight(A, 0, "ab") == (6,)


@pytest.mark.parametrize("text,exc", [
    ("kind word\nsemiring quaternion\nalphabet a\nstates 1\n", ParseError),
    ("kind graph\nsemiring boolean\nalphabet a\nstates 1\n", ParseError),
    ("semiring boolean\nalphabet a\nstates 1\n", ParseError),
    ("kind word\nsemiring boolean\nalphabet a\nstates 1\nedge 0 a\n", ParseError),
    ("kind word\nsemiring boolean\nalphabet a\nstates 1\nfrob 1\n", ParseError),
    ("kind word\nsemiring natural\nalphabet a\nstates 1\nedge 0 a 0 -2\n", ParseError),
    ('kind word\nsemiring boolean\nalphabet a\nstates 1\nedge 0 "a 0\n', ParseError),
    ("kind word\nsemiring boolean\nalphabet a\nstates 1\nedge 0 a 1\n", ValidationError),
    ("kind word\nsemiring boolean\nalphabet a\nstates 1\nedge 0 b 0\n", ValidationError),
    ("kind tree\nsemiring boolean\nalphabet a\nstates 1\nedge 0 a 0 3\n", ValidationError),
    ("kind word\nsemiring boolean\nalphabet a\nstates 1\nfinal 0 2\nexits 1\n", ValidationError),
])
def test_malformed_files(text, exc):
    with pytest.raises(exc):
        parse_automaton(text)


def test_parse_error_carries_line():
    with pytest.raises(ParseError) as info:
        parse_automaton("kind word\nsemiring nope\nalphabet a\nstates 1\n")
    assert info.value.line == 2


def test_render_round_trip():
    rng = random.Random(61)
    for spec in (BOOLEAN, NATURAL, TROPICAL):
        for _ in range(10):
            A = random_word_automaton(spec, rng, eps=True, exits=rng.randint(1, 2))
            B = parse_automaton(render(A))
            assert isinstance(B, WordAutomaton)
            assert B.letters == A.letters and B.finals == A.finals
            # an all-zero internal-move matrix comes back as no matrix
            assert B.eps_closure == A.eps_closure
            T = random_tree_automaton(spec, rng)
            U = parse_automaton(render(T))
            assert {k: v for k, v in U.delta.items()} == {k: v for k, v in T.delta.items() if v}
            assert U.finals == T.finals


# commands

def test_weight_command():
    assert run_command(["weight", WORKED, "--state", "2", "--term", "(b x0 x0)"]) == (0, "true")
    assert run_command(["weight", WORKED, "--state", "2", "--term", "(a x0 x0)"]) == (0, "false")
    assert run_command(["weight", WORKED, "--state", "1", "--term", "x0"]) == (0, "true")


def test_theory_command():
    code, out = run_command(["theory", WORKED, "--emit-table"])
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()]
    header = rows[0]
    assert header[0] == "input" and "a_A" in header and "b_A" in header
    a_col = [r[header.index("a_A")] for r in rows[1:]]
    b_col = [r[header.index("b_A")] for r in rows[1:]]
    assert a_col == ["{}", "{}", "{2}", "{2}"]
    assert b_col == ["{}", "{2}", "{}", "{2}"]
    code, out = run_command(["theory", WORKED])
    assert code == 0
    assert "# recognizing 2\tb_A" in out.splitlines()


def test_recognize_command():
    assert run_command(["recognize", WORKED, "--state", "2", "--term", "(b x0 x0)"]) == (0, "true")
    assert run_command(["recognize", WORKED, "--state", "2", "--term", "x0"]) == (0, "false")


def test_laws_command():
    code, out = run_command(["laws", WORKED, "--suite", "all"])
    assert code == 0, out
    assert all(line.startswith(("PASS", "SKIP")) for line in out.splitlines())


def test_laws_command_reports_failures(tmp_path):
    # the natural-number counit fails, which the duality suite must surface
    f = tmp_path / "nat.aut"
    f.write_text("kind word\nsemiring natural\nalphabet a\nstates 2\nedge 0 a 1\nfinal 1\n")
    code, out = run_command(["laws", str(f), "--suite", "duality", "--samples", "50"])
    assert code == 1
    assert any(line.startswith("FAIL\tcounit") for line in out.splitlines())


def test_enumerate_command(tmp_path):
    code, out = run_command(["enumerate", WORKED, "--state", "2", "--max-height", "1"])
    assert code == 0
    terms = {line.split("\t")[0] for line in out.splitlines()[1:]}
    assert terms == {"x1", "(a x1 x1)", "(b x0 x0)"}
    f = tmp_path / "ab.aut"
    f.write_text("kind word\nsemiring boolean\nalphabet a b\nstates 2\nedge 0 a 0\nedge 0 b 1\nfinal 1\n")
    code, out = run_command(["enumerate", str(f), "--state", "0", "--max-len", "1"])
    assert code == 0
    assert out.splitlines() == ["word\tq0\tq1", "ε\ttrue\tfalse", "a\ttrue\tfalse", "b\tfalse\ttrue"]


def test_compile_and_compose(tmp_path):
    a_file, b_file = tmp_path / "a.aut", tmp_path / "b.aut"
    assert run_command(["compile", "a{2}", "--alphabet", "a", "b", "--semiring", "natural",
                        "-o", str(a_file)]) == (0, "")
    assert run_command(["compile", "b{3}", "--alphabet", "a,b", "--semiring", "natural",
                        "-o", str(b_file)])[0] == 0
    code, out = run_command(["compose", str(a_file), str(b_file)])
    assert code == 0
    C = parse_automaton(out)
    entry = dict(C.entries)["main"]
    assert weight(C, entry, "ab") == (6,)
    assert all(weight(C, entry, w) == (0,) for w in words_upto("ab", 3) if w != ("a", "b"))
    assert run_command(["weight", str(a_file), "--state", "main", "--word", "a"]) == (0, "2")


def test_usage_errors(tmp_path):
    assert run_command([])[0] == 2
    assert run_command(["weight", WORKED, "--state", "2"])[0] == 2
    assert run_command(["weight", WORKED, "--state", "9", "--term", "x0"])[0] == 2
    assert run_command(["weight", WORKED, "--state", "2", "--word", "ab"])[0] == 2
    assert run_command(["weight", WORKED, "--state", "2", "--term", "(a x0"])[0] == 2
    assert run_command(["weight", str(tmp_path / "missing.aut"), "--state", "0", "--word", "a"])[0] == 2
    bad = tmp_path / "bad.aut"
    bad.write_text("kind word\nsemiring quaternion\nalphabet a\nstates 1\n")
    code, out = run_command(["weight", str(bad), "--state", "0", "--word", "a"])
    assert code == 2 and "line 2" in out
    assert run_command(["compile", "a|", "--alphabet", "a"])[0] == 2
    assert run_command(["compile", "a", "--alphabet", "a", "--semiring", "nope"])[0] == 2


def test_help_exits_cleanly():
    code, out = run_command(["--help"])
    assert code == 0 and "weight" in out


@pytest.mark.skipif(shutil.which("aut") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["aut", "weight", WORKED, "--state", "2", "--term", "(b x0 x0)"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "true"
    proc = subprocess.run(["aut", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stderr
