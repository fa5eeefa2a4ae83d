"""Polynomial-time coloring of C3-free digraphs with bounded independence number.

A digraph with no directed triangle and independence number at most ``a`` is
colored with at most ``35**(a-1) * a!`` acyclic classes. The recursion never
needs ``a``: every subset handed to a recursive call is contained in the
non-neighbourhood of some vertex outside it, so its independence number is
strictly smaller and the recursion depth is at most ``a``.

Terminology used below:

* a *bag* is a set ``B`` such that any three vertices outside ``B`` have a
  common neighbour (in either direction) inside ``B``;
* a bag is *poor* if every ``v`` in it has ``N-(v) & B`` or ``N+(v) & B``
  failing to be a bag;
* a *chain* is a sequence of disjoint bags with no arc from a later bag to
  an earlier one, and *zone* ``Z_i`` holds the non-chain vertices whose
  highest-indexed in-neighbour bag is ``B_i`` (``Z_0`` when there is none).
"""
from __future__ import annotations

import math
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

import numpy as np

from .digraph import (
    Digraph,
    find_cycle_mask,
    find_triangle_mask,
    induced_mask,
    is_acyclic_mask,
    iter_bits,
    reverse,
    to_mask,
    to_set,
)
from .oracles import Coloring, verify_coloring

__all__ = [
    "NotC3FreeError",
    "NotAcyclicError",
    "NotABagError",
    "InvariantViolation",
    "ChainResult",
    "ZonePartition",
    "RunReport",
    "color_budget",
    "stable_dominating_set",
    "acyclic_dominating_set",
    "out_quasi_dominating_set",
    "is_bag",
    "is_poor_bag",
    "split_non_bag",
    "color_poor_bag",
    "find_chain",
    "assign_zones",
    "chain_zone_violations",
    "splice_chain",
    "color_c3_free",
]

# below this many outside vertices the bag test runs on Python ints
_SMALL_BAG_TEST = 24


class NotC3FreeError(ValueError):
    def __init__(self, triangle):
        self.triangle = triangle
        super().__init__(f"digraph contains a directed triangle {triangle}")


class NotAcyclicError(ValueError):
    def __init__(self, cycle):
        self.cycle = cycle
        super().__init__(f"digraph contains a directed cycle {cycle}")


class NotABagError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    pass


def color_budget(alpha: int) -> int:
    """Certified color count ``35**(alpha-1) * alpha!``."""
    if alpha < 1:
        raise ValueError("independence bound must be >= 1")
    return 35 ** (alpha - 1) * math.factorial(alpha)


@dataclass(frozen=True)
class ChainResult:
    """Output of :func:`find_chain`.

    ``dropped[j]`` holds the vertices discarded when ``separators[j]`` was
    chosen, i.e. its non-neighbours inside the set being split.
    """

    bags: tuple[frozenset[int], ...]
    separators: tuple[int, ...]
    dropped: tuple[frozenset[int], ...]

    @property
    def kind(self) -> str:
        return "single" if len(self.bags) == 1 else "chain"


@dataclass(frozen=True)
class ZonePartition:
    assignment: dict[int, int]
    num_zones: int

    def zones(self) -> list[frozenset[int]]:
        out: list[set[int]] = [set() for _ in range(self.num_zones)]
        for v, i in self.assignment.items():
            out[i].add(v)
        return [frozenset(z) for z in out]


@dataclass
class RunReport:
    n: int
    arcs: int
    c3free: bool = True
    colors_used: int = 0
    valid: bool | None = None
    violations: list[str] = field(default_factory=list)
    chain_length: int = 0
    splice_iterations: int = 0
    recursive_calls: int = 0
    max_depth: int = 0
    nonbag_chain_splits: int = 0
    timings: dict[str, float] = field(default_factory=dict)
    instance: dict | None = None
    alpha: dict = field(default_factory=lambda: {"kind": "undecided", "value": None})
    budget: int | None = None
    oracle_chi: int | None = None

    @property
    def invariant_violations(self) -> int:
        return len(self.violations)

    def set_alpha(self, kind: str, value: int | None) -> None:
        self.alpha = {"kind": kind, "value": value}
        self.budget = color_budget(value) if value else None

    @property
    def within_budget(self) -> bool | None:
        return None if self.budget is None else self.colors_used <= self.budget

    def to_json(self, timings: bool = True) -> dict:
        out = {
            "instance": self.instance,
            "n": self.n,
            "arcs": self.arcs,
            "c3free": self.c3free,
            "alpha": self.alpha,
            "colors_used": self.colors_used,
            "budget": self.budget,
            "oracle_chi": self.oracle_chi,
            "valid": self.valid,
            "invariant_violations": self.invariant_violations,
            "violations": list(self.violations),
            "chain_length": self.chain_length,
            "splice_iterations": self.splice_iterations,
            "recursive_calls": self.recursive_calls,
            "max_depth": self.max_depth,
            "nonbag_chain_splits": self.nonbag_chain_splits,
        }
        if timings:
            out["wall_time"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out


# ---------------------------------------------------------------------------
# dominating sets


def _stable_dominating_mask(D: Digraph, mask: int) -> int:
    chosen = 0
    rest = mask
    while rest:
        for v in iter_bits(rest):
            if not D.in_masks[v] & rest:
                break
        else:
            raise NotAcyclicError(find_cycle_mask(D, rest))
        chosen |= 1 << v
        rest &= D.non_mask(v)
    return chosen


def _acyclic_dominating_mask(D: Digraph, mask: int) -> int:
    chosen = 0
    rest = mask
    while rest:
        v = (rest & -rest).bit_length() - 1
        chosen |= 1 << v
        rest &= D.non_mask(v) | D.in_masks[v]
    return chosen


def _quasi_dominating_mask(D: Digraph, mask: int) -> int:
    return _stable_dominating_mask(D, _acyclic_dominating_mask(D, mask))


def stable_dominating_set(D: Digraph) -> frozenset[int]:
    """Stable dominating set of an acyclic digraph.

    Repeatedly takes the least source and keeps only its non-neighbours.
    """
    return to_set(_stable_dominating_mask(D, D.all_mask))


def acyclic_dominating_set(D: Digraph) -> frozenset[int]:
    """Dominating set inducing an acyclic subdigraph.

    Takes the least vertex ``v`` and continues inside ``N°(v) | N-(v)``, so
    ``v`` never sees a later pick.
    """
    return to_set(_acyclic_dominating_mask(D, D.all_mask))


def out_quasi_dominating_set(D: Digraph) -> frozenset[int]:
    """Set ``Y`` with ``V = Y | N°(Y) | N+(Y)``; needs a C3-free digraph."""
    tri = find_triangle_mask(D, D.all_mask)
    if tri is not None:
        raise NotC3FreeError(tri)
    return to_set(_quasi_dominating_mask(D, D.all_mask))


# ---------------------------------------------------------------------------
# bag tests


def _bag_violation_small(D: Digraph, mask: int) -> tuple[int, int, int] | None:
    outside = list(iter_bits(D.all_mask & ~mask))
    nb = [D.nbr_mask(x) & mask for x in outside]
    m = len(outside)
    for i in range(m - 2):
        a = nb[i]
        for j in range(i + 1, m - 1):
            ab = a & nb[j]
            for k in range(j + 1, m):
                if not ab & nb[k]:
                    return outside[i], outside[j], outside[k]
    return None


def _bag_violation_dense(D: Digraph, mask: int) -> tuple[int, int, int] | None:
    outside = np.fromiter(iter_bits(D.all_mask & ~mask), dtype=np.intp)
    inside = np.fromiter(iter_bits(mask), dtype=np.intp)
    m = outside.size
    if inside.size == 0:
        return tuple(int(x) for x in outside[:3])
    adj = D.adjacency_matrix()[np.ix_(outside, inside)]
    upper = np.triu(np.ones((m, m), dtype=bool), k=1)
    for i in range(m - 2):
        cols = np.flatnonzero(adj[i])
        if cols.size == 0:
            return int(outside[i]), int(outside[i + 1]), int(outside[i + 2])
        rest = adj[i + 1:, cols]
        # common[j, k] = number of common neighbours of outside[i], [i+1+j], [i+1+k]
        common = rest @ rest.T
        s = rest.shape[0]
        bad = (common == 0) & upper[:s, :s]
        if bad.any():
            j, k = divmod(int(np.argmax(bad)), s)
            return int(outside[i]), int(outside[i + 1 + j]), int(outside[i + 1 + k])
    return None


def _bag_violation(D: Digraph, mask: int) -> tuple[int, int, int] | None:
    """Lexicographically least outside triple with no common neighbour in ``mask``."""
    m = D.n - mask.bit_count()
    if m < 3:
        return None
    if m <= _SMALL_BAG_TEST:
        return _bag_violation_small(D, mask)
    return _bag_violation_dense(D, mask)


def is_bag(D: Digraph, B: Iterable[int]) -> tuple[bool, tuple[int, int, int] | None]:
    """``(True, None)`` if ``B`` is a bag, else ``(False, least failing triple)``."""
    triple = _bag_violation(D, to_mask(B))
    return triple is None, triple


def is_poor_bag(D: Digraph, B: Iterable[int]) -> bool:
    return _Engine(D).is_poor(to_mask(B))


def split_non_bag(D: Digraph, S: Iterable[int]) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """Split a non-bag ``S`` into three parts of smaller independence number."""
    return tuple(to_set(p) for p in _Engine(D).split(to_mask(S)))


# ---------------------------------------------------------------------------
# the recursive engine


class _Stats:
    def __init__(self, instrument: bool):
        self.instrument = instrument
        self.violations: list[str] = []
        self.splice_iterations = 0
        self.recursive_calls = 0
        self.max_depth = 0
        self.nonbag_chain_splits = 0
        self.top_chain_length = 0

    def violation(self, message: str) -> None:
        self.violations.append(message)


def _ncolors(coloring: dict[int, int]) -> int:
    return max(coloring.values()) + 1 if coloring else 0


class _Palette:
    """Accumulates a coloring from independently coloured pieces."""

    def __init__(self):
        self.colors: dict[int, int] = {}
        self.size = 0

    def private(self, piece: dict[int, int]) -> int:
        offset = self.size
        for v, c in piece.items():
            self.colors[v] = offset + c
        self.size += _ncolors(piece)
        return offset

    def shared(self, pieces: list[dict[int, int]]) -> int:
        """Place pieces on one common palette (caller guarantees no back arcs)."""
        offset = self.size
        width = 0
        for piece in pieces:
            for v, c in piece.items():
                self.colors[v] = offset + c
            width = max(width, _ncolors(piece))
        self.size += width
        return offset

    def fresh(self) -> int:
        self.size += 1
        return self.size - 1


Recurse = Callable[[int], dict[int, int]]


class _Engine:
    def __init__(self, D: Digraph, stats: _Stats | None = None, depth: int = 0):
        self.D = D
        self.stats = stats or _Stats(instrument=True)
        self.depth = depth
        self._bags: dict[int, tuple | None] = {}
        self._chains: dict[int, tuple[list[int], list[int], list[int]]] = {}
        self._reversed: Digraph | None = None

    # -- bag predicates

    def violation(self, mask: int):
        try:
            return self._bags[mask]
        except KeyError:
            triple = self._bags[mask] = _bag_violation(self.D, mask)
            return triple

    def is_bag(self, mask: int) -> bool:
        return self.violation(mask) is None

    def is_poor(self, mask: int) -> bool:
        if not self.is_bag(mask):
            raise NotABagError(f"{sorted(iter_bits(mask))} is not a bag")
        D = self.D
        return all(
            not self.is_bag(D.in_masks[v] & mask) or not self.is_bag(D.out_masks[v] & mask)
            for v in iter_bits(mask)
        )

    def split(self, mask: int) -> tuple[int, int, int]:
        triple = self.violation(mask)
        if triple is None:
            raise NotABagError(f"{sorted(iter_bits(mask))} is a bag and cannot be split")
        x, y, z = triple
        D = self.D
        s1 = mask & D.non_mask(x)
        s2 = mask & D.non_mask(y) & ~s1
        s3 = mask & ~s1 & ~s2
        if self.stats.instrument and s3 & ~D.non_mask(z):
            self.stats.violation(f"split of non-bag left vertices adjacent to all of {triple}")
        return s1, s2, s3

    # -- chains and zones

    def find_chain(self, mask: int) -> tuple[list[int], list[int], list[int]]:
        try:
            return self._chains[mask]
        except KeyError:
            pass
        D = self.D
        result = ([mask], [], [])
        for v in iter_bits(mask):
            low = D.in_masks[v] & mask
            if not self.is_bag(low):
                continue
            high = D.out_masks[v] & mask
            if not self.is_bag(high):
                continue
            if not self.is_bag(mask):
                # subsets of a non-bag are non-bags, so this cannot happen
                self.stats.nonbag_chain_splits += 1
            lb, ls, ld = self.find_chain(low)
            hb, hs, hd = self.find_chain(high)
            result = (lb + hb, ls + [v] + hs, ld + [mask & D.non_mask(v)] + hd)
            break
        self._chains[mask] = result
        return result

    def assign_zones(self, bags: list[int]) -> list[int]:
        D = self.D
        chain = 0
        for b in bags:
            chain |= b
        zones = [0] * (len(bags) + 1)
        zone_of = {}
        for i, b in enumerate(bags, start=1):
            seen = 0
            for u in iter_bits(b):
                seen |= D.out_masks[u]
            for v in iter_bits(seen & ~chain):
                zone_of[v] = i
        for v in iter_bits(D.all_mask & ~chain):
            zones[zone_of.get(v, 0)] |= 1 << v
        return zones

    def check_chain(self, bags: list[int], where: str) -> None:
        D = self.D
        later_out = 0
        for i in range(len(bags) - 1, -1, -1):
            b = bags[i]
            if later_out & b:
                self.stats.violation(f"{where}: arc from a later bag into bag {i + 1}")
            for u in iter_bits(b):
                later_out |= D.out_masks[u]
            if not self.is_bag(b) or not self.is_poor(b):
                self.stats.violation(f"{where}: bag {i + 1} is not a poor bag")

    def check_zones(self, bags: list[int], zones: list[int]) -> None:
        msgs = _scan_chain_zones(self.D, bags, zones)
        for msg in msgs:
            self.stats.violation(msg)

    def long_zone_chain(self, zones: list[int]) -> tuple[int, list[int]] | None:
        """First zone index whose own chain has at least 3 bags, with that chain."""
        for i, z in enumerate(zones):
            if z:
                inner = self.find_chain(z)[0]
                if len(inner) >= 3:
                    return i, inner
        return None

    # -- coloring

    def recurse(self, mask: int) -> dict[int, int]:
        if not mask:
            return {}
        if mask & (mask - 1) == 0:
            return {mask.bit_length() - 1: 0}
        self.stats.recursive_calls += 1
        sub, labels = induced_mask(self.D, mask)
        child = _Engine(sub, self.stats, self.depth + 1)
        return {labels[v]: c for v, c in child.color().items()}

    def reversed_digraph(self) -> Digraph:
        if self._reversed is None:
            self._reversed = reverse(self.D)
        return self._reversed

    def color_poor_bag(self, mask: int, recurse: Recurse | None = None) -> dict[int, int]:
        recurse = recurse or self.recurse
        D = self.D
        left = right = 0
        for v in iter_bits(mask):
            if not self.is_bag(D.in_masks[v] & mask):
                left |= 1 << v
            elif not self.is_bag(D.out_masks[v] & mask):
                right |= 1 << v
            else:
                raise NotABagError(f"vertex {v} has both halves bags; {sorted(iter_bits(mask))} is not poor")
        palette = _Palette()
        for side, host, nbrs in ((right, D, D.out_masks), (left, self.reversed_digraph(), D.in_masks)):
            if not side:
                continue
            ys = _quasi_dominating_mask(host, side)
            if self.stats.instrument:
                covered = ys
                for y in iter_bits(ys):
                    covered |= nbrs[y] | D.non_mask(y)
                if side & ~covered:
                    self.stats.violation("quasi-dominating set does not cover its side")
            taken = ys
            for y in iter_bits(ys):
                ahead = nbrs[y] & side & ~taken
                taken |= ahead
                apart = D.non_mask(y) & side & ~taken
                taken |= apart
                if ahead:
                    for part in self.split(ahead):
                        palette.private(recurse(part))
                if apart:
                    palette.colors[y] = palette.private(recurse(apart))
                else:
                    palette.colors[y] = palette.fresh()
            if side & ~taken:
                raise InvariantViolation("poor bag side not covered by its quasi-dominating set")
        return palette.colors

    def color_zone(self, mask: int) -> dict[int, int]:
        bags, seps, dropped = self.find_chain(mask)
        palette = _Palette()
        if len(bags) == 1:
            if self.is_bag(mask):
                return self.color_poor_bag(mask)
            for part in self.split(mask):
                palette.private(self.recurse(part))
            return palette.colors
        if self.stats.instrument:
            self.check_chain(bags, "zone chain")
        palette.shared([self.color_poor_bag(b) for b in bags])
        for v, apart in zip(seps, dropped):
            if apart:
                palette.colors[v] = palette.private(self.recurse(apart))
            else:
                palette.colors[v] = palette.fresh()
        return palette.colors

    def color(self, timings: dict[str, float] | None = None) -> dict[int, int]:
        D = self.D
        stats = self.stats
        stats.max_depth = max(stats.max_depth, self.depth)
        if D.n == 0:
            return {}
        if is_acyclic_mask(D, D.all_mask):
            return dict.fromkeys(range(D.n), 0)

        clock = time.perf_counter()
        bags = self.find_chain(D.all_mask)[0]
        if stats.instrument:
            self.check_chain(bags, "initial chain")
        zones = self.assign_zones(bags)
        if stats.instrument:
            self.check_zones(bags, zones)
        splices = 0
        while True:
            found = self.long_zone_chain(zones)
            if found is None:
                break
            splices += 1
            new_bags = splice_chain(bags, *found)
            if len(new_bags) <= len(bags) or splices > D.n:
                stats.violation(f"splice {splices} did not make progress ({len(bags)} -> {len(new_bags)} bags)")
                raise InvariantViolation(stats.violations[-1])
            bags = new_bags
            zones = self.assign_zones(bags)
            if stats.instrument:
                self.check_chain(bags, f"splice {splices}")
                self.check_zones(bags, zones)
        stats.splice_iterations += splices
        if self.depth == 0:
            stats.top_chain_length = len(bags)

        mid = time.perf_counter()
        palette = _Palette()
        palette.shared([self.color_poor_bag(b) for b in bags])
        # zones three apart have no back arcs, so they share palettes by index mod 3
        groups: list[list[dict[int, int]]] = [[], [], []]
        for i, z in enumerate(zones):
            if z:
                groups[i % 3].append(self.color_zone(z))
        for group in groups:
            palette.shared(group)
        if timings is not None:
            timings["chain"] = mid - clock
            timings["color"] = time.perf_counter() - mid
        return palette.colors


def splice_chain(bags: list, i: int, inner: list) -> list:
    """Replace the bags around zone ``i`` by the chain ``inner`` found inside it.

    With bags numbered from 1, the result is ``B_1..B_{i-2}``, then ``inner``,
    then ``B_{i+1}..B_t``. Bags ``B_{i-1}`` and ``B_i`` fall back into zones.
    """
    return list(bags[: max(i - 2, 0)]) + list(inner) + list(bags[i:])


def _scan_chain_zones(D: Digraph, bags: list[int], zones: list[int]) -> list[str]:
    """Check that no arc goes backwards between chain bags and zones.

    Bags are indexed from 1 and zones from 0. Forbidden arcs: bag j -> bag i
    (j > i), bag j -> zone i (j > i), zone j -> bag i (j >= i + 2) and
    zone j -> zone i (j >= i + 3).
    """
    t = len(bags)
    bag = [0] + list(bags)

    def out_of(mask):
        acc = 0
        for u in iter_bits(mask):
            acc |= D.out_masks[u]
        return acc

    bag_out = [out_of(b) for b in bag]
    zone_out = [out_of(z) for z in zones]
    msgs = []
    for i in range(t + 1):
        later_bags = 0
        for j in range(i + 1, t + 1):
            later_bags |= bag_out[j]
        far_zones = 0
        for j in range(i + 2, t + 1):
            far_zones |= zone_out[j]
        farther_zones = 0
        for j in range(i + 3, t + 1):
            farther_zones |= zone_out[j]
        if i >= 1 and later_bags & bag[i]:
            msgs.append(f"(a) arc from a bag after B{i} into B{i}")
        if later_bags & zones[i]:
            msgs.append(f"(b) arc from a bag after B{i} into Z{i}")
        if i >= 1 and far_zones & bag[i]:
            msgs.append(f"(c) arc from a zone Z{i + 2}+ into B{i}")
        if farther_zones & zones[i]:
            msgs.append(f"(d) arc from a zone Z{i + 3}+ into Z{i}")
    return msgs


def chain_zone_violations(D: Digraph, bags: list[Iterable[int]], zones: ZonePartition | list[Iterable[int]]) -> list[str]:
    """Arc-scan of a chain and its zones; an empty list means no violation."""
    if isinstance(zones, ZonePartition):
        zones = zones.zones()
    return _scan_chain_zones(D, [to_mask(b) for b in bags], [to_mask(z) for z in zones])


# ---------------------------------------------------------------------------
# public wrappers


def color_poor_bag(D: Digraph, B: Iterable[int], recurse: Callable[[Digraph, frozenset[int]], dict[int, int]] | None = None) -> dict[int, int]:
    """Color a poor bag; returns vertex -> color over ``B``.

    ``recurse(D, S)`` must color a subset of smaller independence number;
    the default colors ``D[S]`` with :func:`color_c3_free`'s recursion.
    """
    eng = _Engine(D)
    mask = to_mask(B)
    if not eng.is_bag(mask):
        raise NotABagError(f"{sorted(B)} is not a bag")
    hook = None if recurse is None else (lambda m: dict(recurse(D, to_set(m))))
    return eng.color_poor_bag(mask, hook)


def find_chain(D: Digraph, B: Iterable[int]) -> ChainResult:
    """Split ``B`` at the least vertex whose in- and out-halves are both bags, recursively."""
    bags, seps, dropped = _Engine(D).find_chain(to_mask(B))
    return ChainResult(tuple(map(to_set, bags)), tuple(seps), tuple(map(to_set, dropped)))


def assign_zones(D: Digraph, chain: ChainResult | list[Iterable[int]]) -> ZonePartition:
    bags = chain.bags if isinstance(chain, ChainResult) else chain
    zones = _Engine(D).assign_zones([to_mask(b) for b in bags])
    assignment = {v: i for i, z in enumerate(zones) for v in iter_bits(z)}
    return ZonePartition(assignment, len(zones))


def color_c3_free(D: Digraph, *, instrument: bool = True, verify: bool = True) -> tuple[Coloring, RunReport]:
    """Color a C3-free digraph; raises :class:`NotC3FreeError` otherwise."""
    report = RunReport(n=D.n, arcs=D.num_arcs)
    clock = time.perf_counter()
    tri = find_triangle_mask(D, D.all_mask)
    report.timings["c3_check"] = time.perf_counter() - clock
    if tri is not None:
        report.c3free = False
        raise NotC3FreeError(tri)
    stats = _Stats(instrument)
    mapping = _Engine(D, stats).color(report.timings)
    coloring = Coloring.from_mapping(D.n, mapping)
    report.colors_used = coloring.num_colors
    report.violations = stats.violations
    report.chain_length = stats.top_chain_length
    report.splice_iterations = stats.splice_iterations
    report.recursive_calls = stats.recursive_calls
    report.max_depth = stats.max_depth
    report.nonbag_chain_splits = stats.nonbag_chain_splits
    if verify:
        clock = time.perf_counter()
        report.valid, cycle = verify_coloring(D, coloring)
        report.timings["verify"] = time.perf_counter() - clock
        if not report.valid:
            report.violations.append(f"color class contains cycle {cycle}")
    return coloring, report
