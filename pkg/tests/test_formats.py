import pytest
from hypothesis import given

from conftest import digraphs
from dicolor.digraph import Digraph
from dicolor.formats import (
    ParseError,
    format_coloring,
    format_digraph,
    parse_coloring,
    parse_coloring_file,
    parse_digraph,
    parse_digraph_file,
    write_coloring_file,
    write_digraph_file,
)
from dicolor.oracles import Coloring, verify_coloring


def test_parse_triangle():
    D = parse_digraph("p dgf 3 3\na 1 2\na 2 3\na 3 1\n")
    assert D == Digraph(3, [(0, 1), (1, 2), (2, 0)])


def test_parse_single_vertex():
    assert parse_digraph("p dgf 1 0\n") == Digraph(1)


def test_comments_are_ignored():
    assert parse_digraph("c hello\nc\np dgf 2 1\nc mid\na 2 1\n") == Digraph(2, [(1, 0)])


@pytest.mark.parametrize(
    "text, line, kind",
    [
        ("p dgf 2 2\na 1 2\na 2 1\n", 3, "anti-parallel arc"),
        ("p dgf 2 2\na 1 2\na 1 2\n", 3, "duplicate arc"),
        ("p dgf 2 1\na 1 1\n", 2, "loop"),
        ("p dgf 3 2\na 1 2\n", 2, "arc count mismatch"),
        ("p dgf 3 1\na 1 2\na 2 3\n", 3, "arc count mismatch"),
        ("a 1 2\n", 1, "missing header"),
        ("c only\n", 1, "missing header"),
        ("p dgf 3 1\na 1 x\n", 2, "bad token"),
        ("p dgf 3 1\na 1 4\n", 2, "bad token"),
        ("p dgf 3 1\na 1  2\n", 2, "bad token"),
        ("p dgf 3 0\n\n", 2, "bad token"),
        ("p dgf 3 0\np dgf 3 0\n", 2, "bad token"),
        ("p dgf 3 0", 1, "bad token"),
        ("p graph 3 0\n", 1, "bad token"),
        ("p dgf -3 0\n", 1, "bad token"),
    ],
)
def test_parse_errors_name_line_and_kind(text, line, kind):
    with pytest.raises(ParseError) as err:
        parse_digraph(text)
    assert err.value.line == line
    assert err.value.kind == kind
    assert f"line {line}" in str(err.value)


def test_coloring_format_examples():
    assert format_coloring(Coloring((0,))) == "s colors 1\nv 1 0\n"
    text = format_coloring(Coloring((0, 0, 1)))
    assert text.count("\nv ") == 3 and text.startswith("s colors 2\n")


@given(digraphs())
def test_digraph_round_trip(D):
    text = format_digraph(D, comment="generated")
    assert parse_digraph(text) == D
    assert format_digraph(parse_digraph(text), comment="generated") == text


def test_file_round_trip(tmp_path):
    D = Digraph(3, [(0, 1), (1, 2), (2, 0)])
    write_digraph_file(D, tmp_path / "g.dgf")
    assert parse_digraph_file(tmp_path / "g.dgf") == D
    col = Coloring((0, 0, 1))
    write_coloring_file(col, tmp_path / "c.col")
    back = parse_coloring_file(tmp_path / "c.col")
    assert back == col and verify_coloring(D, back)[0]
    assert (tmp_path / "c.col").read_bytes() == b"s colors 2\nv 1 0\nv 2 0\nv 3 1\n"


def test_parse_coloring_rejects_gaps():
    with pytest.raises(ParseError):
        parse_coloring("s colors 1\nv 2 0\n")
    with pytest.raises(ParseError):
        parse_coloring("s colors 3\nv 1 0\n")
    with pytest.raises(ParseError):
        parse_coloring("v 1 0\n")
