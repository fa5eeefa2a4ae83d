"""Simple loopless digraphs on dense integer labels.

Vertex sets are handled two ways: the public functions take and return
``frozenset`` objects, while the algorithms in this package work on Python
ints used as bitsets (bit ``v`` set means vertex ``v`` is a member).
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator

import numpy as np

__all__ = [
    "Digraph",
    "DigraphError",
    "LoopError",
    "VertexRangeError",
    "SimplicityError",
    "new_digraph",
    "neighborhoods",
    "common_out",
    "common_in",
    "induced",
    "is_acyclic",
    "topological_order",
    "find_cycle",
    "find_directed_triangle",
    "reverse",
    "iter_bits",
    "to_mask",
    "to_set",
]


class DigraphError(ValueError):
    """Invalid digraph construction or query."""


class LoopError(DigraphError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"loop arc {pair}")


class VertexRangeError(DigraphError):
    def __init__(self, what, n):
        self.what = what
        super().__init__(f"{what} out of range for n={n}")


class SimplicityError(DigraphError):
    def __init__(self, pair, existing):
        self.pair = pair
        self.existing = existing
        super().__init__(f"arc {pair} conflicts with existing arc {existing}")


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def to_set(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


class Digraph:
    """Immutable simple digraph on vertices ``0..n-1``.

    ``out_masks[v]`` and ``in_masks[v]`` are bitsets of the out- and
    in-neighbours of ``v``.
    """

    __slots__ = ("n", "out_masks", "in_masks", "_matrix")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise DigraphError(f"negative vertex count {n}")
        out = [0] * n
        inn = [0] * n
        for pair in arcs:
            u, v = pair
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"arc {(u, v)}", n)
            if u == v:
                raise LoopError((u, v))
            if out[u] >> v & 1:
                raise SimplicityError((u, v), (u, v))
            if out[v] >> u & 1:
                raise SimplicityError((u, v), (v, u))
            out[u] |= 1 << v
            inn[v] |= 1 << u
        self.n = n
        self.out_masks = tuple(out)
        self.in_masks = tuple(inn)
        self._matrix = None

    @classmethod
    def _from_masks(cls, n: int, out: list[int], inn: list[int]) -> Digraph:
        d = cls.__new__(cls)
        d.n = n
        d.out_masks = tuple(out)
        d.in_masks = tuple(inn)
        d._matrix = None
        return d

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u in range(self.n) for v in iter_bits(self.out_masks[u]))

    @property
    def num_arcs(self) -> int:
        return sum(m.bit_count() for m in self.out_masks)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out_masks[u] >> v & 1)

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.out_masks[u] | self.in_masks[u]) >> v & 1)

    def nbr_mask(self, v: int) -> int:
        return self.out_masks[v] | self.in_masks[v]

    def non_mask(self, v: int) -> int:
        """Vertices other than ``v`` not adjacent to ``v``."""
        return self.all_mask & ~(self.nbr_mask(v) | (1 << v))

    def adjacency_matrix(self) -> np.ndarray:
        """Symmetric 0/1 float32 matrix of the underlying graph (cached)."""
        if self._matrix is None:
            a = np.zeros((self.n, self.n), dtype=np.float32)
            for u, v in self.arcs:
                a[u, v] = a[v, u] = 1.0
            a.flags.writeable = False
            self._matrix = a
        return self._matrix

    def is_tournament(self) -> bool:
        full = self.all_mask
        return all(self.nbr_mask(v) | (1 << v) == full for v in range(self.n))

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.out_masks == other.out_masks

    def __hash__(self):
        return hash((self.n, self.out_masks))

    def __repr__(self):
        return f"Digraph(n={self.n}, arcs={list(self.arcs)})"


def new_digraph(n: int, arc_list: Iterable[tuple[int, int]]) -> Digraph:
    return Digraph(n, arc_list)


def _check_vertex(D: Digraph, v: int) -> None:
    if not 0 <= v < D.n:
        raise VertexRangeError(f"vertex {v}", D.n)


def _check_set(D: Digraph, X: Iterable[int]) -> int:
    m = 0
    for v in X:
        _check_vertex(D, v)
        m |= 1 << v
    return m


def neighborhoods(D: Digraph, v: int) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """Return ``(out, in, non)`` neighbourhoods of ``v``."""
    _check_vertex(D, v)
    return to_set(D.out_masks[v]), to_set(D.in_masks[v]), to_set(D.non_mask(v))


def common_out_mask(D: Digraph, mask: int) -> int:
    acc = D.all_mask
    for x in iter_bits(mask):
        acc &= D.out_masks[x]
    return acc


def common_in_mask(D: Digraph, mask: int) -> int:
    acc = D.all_mask
    for x in iter_bits(mask):
        acc &= D.in_masks[x]
    return acc


def common_out(D: Digraph, X: Iterable[int]) -> frozenset[int]:
    """Vertices seen by every member of ``X``. The empty ``X`` gives ``V(D)``."""
    return to_set(common_out_mask(D, _check_set(D, X)))


def common_in(D: Digraph, X: Iterable[int]) -> frozenset[int]:
    """Vertices seeing every member of ``X``. The empty ``X`` gives ``V(D)``."""
    return to_set(common_in_mask(D, _check_set(D, X)))


def induced_mask(D: Digraph, mask: int) -> tuple[Digraph, tuple[int, ...]]:
    labels = tuple(iter_bits(mask))
    pos = {v: i for i, v in enumerate(labels)}
    out = [0] * len(labels)
    inn = [0] * len(labels)
    for i, v in enumerate(labels):
        for w in iter_bits(D.out_masks[v] & mask):
            j = pos[w]
            out[i] |= 1 << j
            inn[j] |= 1 << i
    return Digraph._from_masks(len(labels), out, inn), labels


def induced(D: Digraph, S: Iterable[int]) -> tuple[Digraph, tuple[int, ...]]:
    """Induced subdigraph on ``S``, relabelled ``0..|S|-1`` in increasing order.

    The second element maps new labels back to the original ones.
    """
    return induced_mask(D, _check_set(D, S))


def topological_order_mask(D: Digraph, mask: int) -> list[int] | None:
    """Topological order of ``D[mask]`` (least available source first), or None."""
    remaining = mask
    order = []
    while remaining:
        for v in iter_bits(remaining):
            if not D.in_masks[v] & remaining:
                order.append(v)
                remaining &= ~(1 << v)
                break
        else:
            return None
    return order


def is_acyclic_mask(D: Digraph, mask: int) -> bool:
    # peel sinks and sources until stuck; cheaper than building an order
    remaining = mask
    while remaining:
        peeled = 0
        for v in iter_bits(remaining):
            if not D.in_masks[v] & remaining or not D.out_masks[v] & remaining:
                peeled |= 1 << v
        if not peeled:
            return False
        remaining &= ~peeled
    return True


def find_cycle_mask(D: Digraph, mask: int) -> tuple[int, ...] | None:
    """A directed cycle inside ``D[mask]``, found by DFS from the least vertex."""
    WHITE, GREY, BLACK = 0, 1, 2
    state = dict.fromkeys(iter_bits(mask), WHITE)
    for root in iter_bits(mask):
        if state[root] != WHITE:
            continue
        path = [root]
        stack = [iter_bits(D.out_masks[root] & mask)]
        state[root] = GREY
        while stack:
            for w in stack[-1]:
                if state[w] == GREY:
                    return tuple(path[path.index(w):])
                if state[w] == WHITE:
                    state[w] = GREY
                    path.append(w)
                    stack.append(iter_bits(D.out_masks[w] & mask))
                    break
            else:
                stack.pop()
                state[path.pop()] = BLACK
    return None


def is_acyclic(D: Digraph) -> bool:
    return is_acyclic_mask(D, D.all_mask)


def topological_order(D: Digraph) -> list[int] | None:
    return topological_order_mask(D, D.all_mask)


def find_cycle(D: Digraph) -> tuple[int, ...] | None:
    return find_cycle_mask(D, D.all_mask)


def find_triangle_mask(D: Digraph, mask: int) -> tuple[int, int, int] | None:
    """Lexicographically least vertex triple of ``D[mask]`` inducing a directed triangle.

    Returned in cycle order starting at its least vertex.
    """
    for a in iter_bits(mask):
        above_a = mask & ~((2 << a) - 1)
        for b in iter_bits((D.out_masks[a] | D.in_masks[a]) & above_a):
            above_b = mask & ~((2 << b) - 1)
            if D.out_masks[a] >> b & 1:
                cs = D.out_masks[b] & D.in_masks[a] & above_b
                if cs:
                    c = (cs & -cs).bit_length() - 1
                    return (a, b, c)
            else:
                cs = D.out_masks[a] & D.in_masks[b] & above_b
                if cs:
                    c = (cs & -cs).bit_length() - 1
                    return (a, c, b)
    return None


def find_directed_triangle(D: Digraph) -> tuple[int, int, int] | None:
    return find_triangle_mask(D, D.all_mask)


def reverse(D: Digraph) -> Digraph:
    return Digraph._from_masks(D.n, list(D.in_masks), list(D.out_masks))
