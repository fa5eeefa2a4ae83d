"""Exact exponential-time solvers used to check the coloring algorithm.

All searches count visited nodes against a budget. When the budget runs out
they raise :class:`BudgetExhausted` instead of reporting a value they have
not proven.
"""
from __future__ import annotations

import os
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .digraph import (
    Digraph,
    find_cycle_mask,
    induced_mask,
    iter_bits,
    to_mask,
)

__all__ = [
    "Coloring",
    "OracleResult",
    "BudgetExhausted",
    "CapExceeded",
    "DEFAULT_BUDGET",
    "default_budget",
    "verify_coloring",
    "dichromatic_number",
    "independence_number",
    "max_acyclic_set",
    "find_induced_copy",
    "is_t_local",
]

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "DICOLOR_ORACLE_BUDGET"


def default_budget() -> int:
    value = os.environ.get(BUDGET_ENV)
    return int(value) if value else DEFAULT_BUDGET


class BudgetExhausted(RuntimeError):
    """The search hit its node budget before deciding the answer."""

    def __init__(self, what: str, explored: int):
        self.what = what
        self.explored = explored
        super().__init__(f"{what}: undecided after {explored} search nodes")


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    """Colour ids ``colors[v]`` for every vertex, contiguous from 0."""

    colors: tuple[int, ...]

    def __post_init__(self):
        used = set(self.colors)
        if used != set(range(len(used))):
            raise ValueError(f"colour ids are not contiguous from 0: {sorted(used)}")

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[int, int]) -> Coloring:
        """Build from a vertex -> colour map, renumbering colours by first use."""
        missing = [v for v in range(n) if v not in mapping]
        if missing:
            raise ValueError(f"uncolored vertex {missing[0]}")
        relabel: dict[int, int] = {}
        out = []
        for v in range(n):
            c = mapping[v]
            if c not in relabel:
                relabel[c] = len(relabel)
            out.append(relabel[c])
        return cls(tuple(out))

    @property
    def num_colors(self) -> int:
        return max(self.colors) + 1 if self.colors else 0

    def classes(self) -> list[frozenset[int]]:
        groups: list[set[int]] = [set() for _ in range(self.num_colors)]
        for v, c in enumerate(self.colors):
            groups[c].add(v)
        return [frozenset(g) for g in groups]


@dataclass
class OracleResult:
    value: int
    witness: object
    explored: int = 0


def verify_coloring(D: Digraph, coloring: Coloring | Sequence[int]) -> tuple[bool, tuple[int, ...] | None]:
    """Check every colour class is acyclic; returns ``(ok, cycle)``."""
    colors = coloring.colors if isinstance(coloring, Coloring) else tuple(coloring)
    if len(colors) != D.n:
        raise ValueError(f"uncolored vertex {len(colors)}" if len(colors) < D.n else "coloring longer than vertex set")
    masks: dict[int, int] = {}
    for v, c in enumerate(colors):
        if c is None:
            raise ValueError(f"uncolored vertex {v}")
        masks[c] = masks.get(c, 0) | 1 << v
    for c in sorted(masks):
        cycle = find_cycle_mask(D, masks[c])
        if cycle is not None:
            return False, cycle
    return True, None


def _closes_cycle(D: Digraph, v: int, cls: int) -> bool:
    """Would adding ``v`` to the acyclic set ``cls`` create a directed cycle?"""
    target = D.in_masks[v] & cls
    if not target:
        return False
    reach = frontier = D.out_masks[v] & cls
    while frontier:
        if reach & target:
            return True
        nxt = 0
        for w in iter_bits(frontier):
            nxt |= D.out_masks[w]
        frontier = nxt & cls & ~reach
        reach |= frontier
    return bool(reach & target)


class _Counter:
    def __init__(self, what: str, budget: int | None):
        self.what = what
        self.budget = default_budget() if budget is None else budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted(self.what, self.nodes - 1)


def dichromatic_number(D: Digraph, budget: int | None = None) -> OracleResult:
    """Exact dichromatic number by iterative deepening on ``k``.

    Vertices are coloured in order ``0..n-1``; a vertex may only open the next
    unused colour, so vertex 0 always gets colour 0.
    """
    counter = _Counter("dichromatic_number", budget)
    n = D.n
    if n == 0:
        return OracleResult(0, Coloring(()), 0)
    colors = [0] * n

    def search(v: int, classes: list[int], k: int) -> bool:
        counter.tick()
        if v == n:
            return True
        for c in range(len(classes)):
            if not _closes_cycle(D, v, classes[c]):
                classes[c] |= 1 << v
                colors[v] = c
                if search(v + 1, classes, k):
                    return True
                classes[c] &= ~(1 << v)
        if len(classes) < k:
            classes.append(1 << v)
            colors[v] = len(classes) - 1
            if search(v + 1, classes, k):
                return True
            classes.pop()
        return False

    for k in range(1, n + 1):
        if search(0, [], k):
            return OracleResult(k, Coloring(tuple(colors)), counter.nodes)
    raise AssertionError("unreachable: n colours always suffice")


def _mis_mask(D: Digraph, cand: int, counter: _Counter) -> int:
    best = 0

    def nbr_closed(v):
        return D.out_masks[v] | D.in_masks[v] | (1 << v)

    def rec(cand: int, chosen: int):
        nonlocal best
        counter.tick()
        if not cand:
            if chosen.bit_count() > best.bit_count():
                best = chosen
            return
        if chosen.bit_count() + cand.bit_count() <= best.bit_count():
            return
        # branch on the candidate of maximum degree inside cand
        v = max(iter_bits(cand), key=lambda w: ((nbr_closed(w) & cand).bit_count(), -w))
        rec(cand & ~nbr_closed(v), chosen | 1 << v)
        if nbr_closed(v) & cand != 1 << v:
            rec(cand & ~(1 << v), chosen)

    rec(cand, 0)
    return best


def independence_number(D: Digraph, budget: int | None = None) -> OracleResult:
    """Maximum stable set of the underlying graph, by branch and bound."""
    counter = _Counter("independence_number", budget)
    best = _mis_mask(D, D.all_mask, counter)
    return OracleResult(best.bit_count(), frozenset(iter_bits(best)), counter.nodes)


def max_acyclic_set(D: Digraph, budget: int | None = None) -> OracleResult:
    """Largest vertex set inducing an acyclic subdigraph."""
    counter = _Counter("max_acyclic_set", budget)
    n = D.n
    best = 0

    def rec(v: int, chosen: int):
        nonlocal best
        counter.tick()
        if chosen.bit_count() + (n - v) <= best.bit_count():
            return
        if v == n:
            best = chosen
            return
        if not _closes_cycle(D, v, chosen):
            rec(v + 1, chosen | 1 << v)
        rec(v + 1, chosen)

    rec(0, 0)
    return OracleResult(best.bit_count(), frozenset(iter_bits(best)), counter.nodes)


def find_induced_copy(D: Digraph, H: Digraph, cap: int = 8) -> tuple[int, ...] | None:
    """Injection ``V(H) -> V(D)`` preserving arcs and non-adjacency, or None.

    Returned as a tuple ``phi`` with ``phi[h]`` the image of ``h``; the
    lexicographically least such tuple is returned.
    """
    if H.n > cap:
        raise CapExceeded(f"pattern has {H.n} vertices, cap is {cap}")
    phi: list[int] = []

    def compatible(h: int, d: int) -> bool:
        for g in range(h):
            e = phi[g]
            if H.has_arc(g, h) != D.has_arc(e, d) or H.has_arc(h, g) != D.has_arc(d, e):
                return False
        return True

    def rec(h: int) -> bool:
        if h == H.n:
            return True
        used = to_mask(phi)
        for d in range(D.n):
            if not used >> d & 1 and compatible(h, d):
                phi.append(d)
                if rec(h + 1):
                    return True
                phi.pop()
        return False

    return tuple(phi) if rec(0) else None


def is_t_local(D: Digraph, t: int, budget: int | None = None) -> tuple[bool, int | None]:
    """Whether every out-neighbourhood has dichromatic number at most ``t``.

    Returns ``(ok, v)`` where ``v`` is the least violating vertex.
    """
    for v in range(D.n):
        sub, _ = induced_mask(D, D.out_masks[v])
        if dichromatic_number(sub, budget).value > t:
            return False, v
    return True, None
