"""Text formats for digraphs (``p dgf``) and colorings.

Digraph files are UTF-8, newline-terminated, with 1-based vertices::

    c optional comment lines
    p dgf <n> <m>
    a <u> <v>        (exactly m arc lines, arc u -> v)

Coloring files list ``s colors <k>`` followed by ``v <vertex> <color>`` per
vertex, vertices 1-based and sorted, colors 0-based.
"""
from __future__ import annotations

from pathlib import Path

from .digraph import Digraph
from .oracles import Coloring

__all__ = [
    "ParseError",
    "parse_digraph",
    "parse_digraph_file",
    "format_digraph",
    "write_digraph_file",
    "format_coloring",
    "write_coloring_file",
    "parse_coloring",
    "parse_coloring_file",
]


class ParseError(ValueError):
    def __init__(self, line: int, kind: str, message: str):
        self.line = line
        self.kind = kind
        super().__init__(f"line {line}: {kind}: {message}")


def _int_token(tok: str, lineno: int) -> int:
    if not tok.isdigit() or not tok.isascii():
        raise ParseError(lineno, "bad token", f"expected a non-negative integer, got {tok!r}")
    return int(tok)


def parse_digraph(text: str) -> Digraph:
    if not text.endswith("\n"):
        last = text.count("\n") + 1
        raise ParseError(last, "bad token", "missing trailing newline")
    lines = text.split("\n")[:-1]
    n = m = None
    seen: dict[tuple[int, int], tuple[int, tuple[int, int]]] = {}
    arcs: list[tuple[int, int]] = []
    for lineno, line in enumerate(lines, start=1):
        if line == "c" or line.startswith("c "):
            continue
        toks = line.split(" ")
        if toks[0] == "p":
            if n is not None:
                raise ParseError(lineno, "bad token", "second header line")
            if len(toks) != 4 or toks[1] != "dgf":
                raise ParseError(lineno, "bad token", f"malformed header {line!r}")
            n = _int_token(toks[2], lineno)
            m = _int_token(toks[3], lineno)
        elif toks[0] == "a":
            if n is None:
                raise ParseError(lineno, "missing header", "arc line before 'p dgf' header")
            if len(toks) != 3:
                raise ParseError(lineno, "bad token", f"malformed arc line {line!r}")
            u = _int_token(toks[1], lineno)
            v = _int_token(toks[2], lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(lineno, "bad token", f"endpoint out of range 1..{n} in {line!r}")
            if u == v:
                raise ParseError(lineno, "loop", f"loop arc {u} -> {v}")
            if len(arcs) == m:
                raise ParseError(lineno, "arc count mismatch", f"more than the declared {m} arcs")
            pair = (min(u, v), max(u, v))
            if pair in seen:
                first, earlier = seen[pair]
                kind = "duplicate arc" if earlier == (u - 1, v - 1) else "anti-parallel arc"
                raise ParseError(lineno, kind, f"{u} {v} conflicts with the arc on line {first}")
            seen[pair] = (lineno, (u - 1, v - 1))
            arcs.append((u - 1, v - 1))
        else:
            raise ParseError(lineno, "bad token", f"unrecognised line {line!r}")
    if n is None:
        raise ParseError(len(lines), "missing header", "no 'p dgf' header")
    if len(arcs) != m:
        raise ParseError(len(lines), "arc count mismatch", f"header declares {m} arcs, found {len(arcs)}")
    return Digraph(n, arcs)


def parse_digraph_file(path) -> Digraph:
    return parse_digraph(Path(path).read_bytes().decode("utf-8"))


def format_digraph(D: Digraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines += [f"c {c}" if c else "c" for c in comment.split("\n")]
    lines.append(f"p dgf {D.n} {D.num_arcs}")
    lines += [f"a {u + 1} {v + 1}" for u, v in D.arcs]
    return "\n".join(lines) + "\n"


def write_digraph_file(D: Digraph, path, comment: str | None = None) -> None:
    Path(path).write_bytes(format_digraph(D, comment).encode("utf-8"))


def format_coloring(coloring: Coloring) -> str:
    lines = [f"s colors {coloring.num_colors}"]
    lines += [f"v {v + 1} {c}" for v, c in enumerate(coloring.colors)]
    return "\n".join(lines) + "\n"


def write_coloring_file(coloring: Coloring, path) -> None:
    Path(path).write_bytes(format_coloring(coloring).encode("utf-8"))


def parse_coloring(text: str) -> Coloring:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].startswith("s colors "):
        raise ParseError(1, "missing header", "expected 's colors <k>'")
    k = _int_token(lines[0].split(" ")[2], 1)
    colors = []
    for lineno, line in enumerate(lines[1:], start=2):
        toks = line.split(" ")
        if len(toks) != 3 or toks[0] != "v":
            raise ParseError(lineno, "bad token", f"malformed vertex line {line!r}")
        v = _int_token(toks[1], lineno)
        if v != len(colors) + 1:
            raise ParseError(lineno, "bad token", f"expected vertex {len(colors) + 1}, got {v}")
        colors.append(_int_token(toks[2], lineno))
    coloring = Coloring(tuple(colors))
    if coloring.num_colors != k:
        raise ParseError(1, "bad token", f"header declares {k} colors, found {coloring.num_colors}")
    return coloring


def parse_coloring_file(path) -> Coloring:
    return parse_coloring(Path(path).read_bytes().decode("utf-8"))
