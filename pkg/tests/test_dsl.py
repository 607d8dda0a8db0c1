from pathlib import Path

import pytest

from opgsolve.diagram import Atom, Seq, Sum
from opgsolve.dsl import format_source, parse_source, tokenize
from opgsolve.errors import ParseError
from opgsolve.generate import GenSpec, generate_random
from opgsolve.opg import InterfaceType, fronts_equal, solve_pareto_fronts, validate_opg
from opgsolve.parity import Player

RUNNING = (Path(__file__).parent / "data" / "running_example.opg").read_text()

UNITS = """
opg A : (1, 0) -> (1, 0) { node x E; in.r1 -> x @ 0; x -> out.r1 @ 1; }
opg B : (1, 0) -> (1, 0) { in.r1 -> out.r1 @ 2; }
opg C : (0, 0) -> (0, 0) { node u A; u -> u @ 1; }
"""


def test_running_example():
    src = parse_source(RUNNING)
    c = src.opgs["C"]
    assert len(c.game.owners) == 7
    assert c.type == InterfaceType((1, 1), (1, 0))
    assert validate_opg(c) == []
    assert c.game.owners[c.node("b")] is Player.FORALL
    assert set(src.diagrams) == {"running", "closed"}


def test_precedence():
    src = parse_source(UNITS + "diagram d = A ; (B + C);\ndiagram e = A ; B + C ; A;")
    a, b, c = (Atom(n, src.opgs[n]) for n in "ABC")
    assert src.diagrams["d"] == Seq(a, Sum(b, c))
    assert src.diagrams["e"] == Seq(Seq(a, Sum(b, c)), a)


def test_default_maxprio_covers_edges():
    src = parse_source("opg X : (1, 0) -> (0, 0) { node v E; in.r1 -> v @ 0; v -> v @ 5; }")
    assert src.opgs["X"].max_priority == 6


def test_implicit_exit_loops():
    x = parse_source(UNITS).opgs["B"]
    out = x.node("out.r1")
    assert x.game.successors[out] == ((out, 0),)


@pytest.mark.parametrize("text,needle", [
    ("opg X : (1, 0) -> (1, 0) { in.r1 -> out.r1 @ 0; out.r1 -> in.r1 @ 0; }", "exit must be a sink"),
    ("opg X : (1, 0) -> (0, 0) { in.r1 -> y @ 0; }", "unknown node"),
    ("opg X : (1, 0) -> (1, 0) { in.r1 -> out.r1 @ 0; in.r1 -> out.r1 @ 2; }", "duplicate edge"),
    ("opg X : (1, 0) -> (1, 0) { maxprio 2; in.r1 -> out.r1 @ 3; }", "exceeds maxprio"),
    ("opg X : (1, 0) -> (1, 0) { maxprio 3; in.r1 -> out.r1 @ 0; }", "maxprio must be even"),
    ("opg X : (1, 0) -> (0, 0) { node v Q; }", "owner must be E or A"),
    ("opg X : (1, 0) -> (0, 0) { node v E; in.r1 -> v @ 0; }", "no successor"),
    (UNITS + "diagram d = A ; Z;", "unknown open game"),
    (UNITS + "diagram d = A ; C;", "middle arities differ"),
    (UNITS + "diagram A = B;", "duplicate definition"),
])
def test_errors(text, needle):
    with pytest.raises(ParseError, match=needle):
        parse_source(text)


def test_error_position():
    text = "opg X : (1, 0) -> (0, 0) {\n  in.r1 -> y @ 0;\n}"
    with pytest.raises(ParseError) as info:
        parse_source(text)
    assert (info.value.line, info.value.column) == (2, 3)
    assert info.value.definition == "X"


def test_tokenizer_rejects_garbage():
    with pytest.raises(ParseError):
        tokenize("opg $")


def test_round_trip_running_example():
    src = parse_source(RUNNING)
    again = parse_source(format_source(src))
    assert again.diagrams == src.diagrams
    for name, a in src.opgs.items():
        assert again.opgs[name].structural_key == a.structural_key


@pytest.mark.parametrize("seed", range(15))
def test_round_trip_generated(seed):
    src = generate_random(GenSpec(depth=3, seed=seed, arity=((1, 1), (1, 1)), duplicate_rate=0.3))
    text = format_source(src)
    again = parse_source(text)
    assert format_source(again) == text
    assert again.diagrams == src.diagrams


def test_round_trip_preserves_fronts():
    src = parse_source(UNITS)
    again = parse_source(format_source(src))
    for name in src.opgs:
        assert fronts_equal(solve_pareto_fronts(src.opgs[name]), solve_pareto_fronts(again.opgs[name]))
