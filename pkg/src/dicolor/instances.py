"""Seeded test-digraph generators.

Randomness comes from :class:`random.Random` (MT19937) seeded with the
64-bit integer seed. Only ``random()``, ``randrange()`` and ``shuffle()`` are
used; all three produce the same stream for the same integer seed on every
platform and on every CPython release since 3.2. Each generator consumes
the stream in a fixed documented order, so an InstanceSpec always yields the same
digraph.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass

from .digraph import Digraph, find_triangle_mask, iter_bits

__all__ = [
    "FAMILIES",
    "InstanceSpec",
    "gen_random_tournament",
    "gen_random_digraph",
    "gen_c3free_layered",
    "repair_to_c3_free",
    "generate",
    "layered_suite",
]

FAMILIES = ("transitive", "random-digraph", "random-tournament", "c3free-layered")
SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    n: int
    seed: int = 0
    alpha: int | None = None
    p: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.seed <= SEED_MASK:
            raise ValueError("seed must fit in 64 bits")
        if self.family == "c3free-layered":
            if self.alpha is None or not 1 <= self.alpha <= self.n:
                raise ValueError("c3free-layered needs 1 <= alpha <= n")
        if self.family in ("random-digraph", "c3free-layered"):
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError(f"{self.family} needs 0 <= p <= 1")

    @property
    def ident(self) -> str:
        parts = [self.family, f"n{self.n}"]
        if self.alpha is not None:
            parts.append(f"a{self.alpha}")
        if self.p is not None:
            parts.append(f"p{self.p:g}")
        parts.append(f"s{self.seed}")
        return "-".join(parts)

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_json(cls, obj: dict) -> InstanceSpec:
        unknown = set(obj) - {"family", "n", "seed", "alpha", "p"}
        if unknown:
            raise ValueError(f"unknown instance fields {sorted(unknown)}")
        return cls(
            family=obj["family"],
            n=int(obj["n"]),
            seed=int(obj.get("seed", 0)),
            alpha=None if obj.get("alpha") is None else int(obj["alpha"]),
            p=None if obj.get("p") is None else float(obj["p"]),
        )


def gen_random_tournament(n: int, seed: int) -> Digraph:
    """One ``random()`` draw per pair ``i < j`` in lexicographic order picks the direction."""
    rng = random.Random(seed)
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            arcs.append((i, j) if rng.random() < 0.5 else (j, i))
    return Digraph(n, arcs)


def gen_random_digraph(n: int, p: float, seed: int) -> Digraph:
    """Per pair ``i < j``: one draw decides presence, a second the direction."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                arcs.append((i, j) if rng.random() < 0.5 else (j, i))
    return Digraph(n, arcs)


def gen_c3free_layered(n: int, alpha: int, p: float, seed: int) -> Digraph:
    """C3-free digraph covered by ``alpha`` transitive tournaments.

    The vertex labels are shuffled; vertex ``perm[k]`` joins part ``k % alpha``
    and each part is ordered transitively by position in ``perm``. Any
    ``alpha + 1`` vertices put two in one part, so the independence number is
    at most ``alpha``. Ordered cross-part pairs are then shuffled and each,
    if its endpoints are still non-adjacent, is kept with probability ``p``
    unless it would close a directed triangle.
    """
    if not 1 <= alpha <= n:
        raise ValueError(f"need 1 <= alpha <= n, got alpha={alpha}, n={n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    perm = list(range(n))
    rng.shuffle(perm)
    part = [0] * n
    for k, v in enumerate(perm):
        part[v] = k % alpha
    out = [0] * n
    inn = [0] * n

    def add(u, v):
        out[u] |= 1 << v
        inn[v] |= 1 << u

    for k, u in enumerate(perm):
        for v in perm[k + alpha::alpha]:
            add(u, v)
    cross = [(u, v) for u in range(n) for v in range(n) if part[u] != part[v]]
    rng.shuffle(cross)
    for u, v in cross:
        if (out[u] | inn[u]) >> v & 1:
            continue
        if rng.random() >= p:
            continue
        # u -> v closes a triangle iff some w has v -> w -> u
        if out[v] & inn[u]:
            continue
        add(u, v)
    D = Digraph(n, [(u, v) for u in range(n) for v in iter_bits(out[u])])
    if find_triangle_mask(D, D.all_mask) is not None:
        raise AssertionError("layered generator produced a directed triangle")
    return D


def repair_to_c3_free(D: Digraph, seed: int) -> Digraph:
    """Delete arcs of directed triangles until none is left.

    Each round takes the least remaining triangle and removes one of its three
    arcs chosen by ``randrange(3)`` (0: first->second, 1: second->third,
    2: third->first in cycle order).
    """
    rng = random.Random(seed)
    out = list(D.out_masks)
    while True:
        cur = Digraph(D.n, [(u, v) for u in range(D.n) for v in iter_bits(out[u])])
        tri = find_triangle_mask(cur, cur.all_mask)
        if tri is None:
            return cur
        k = rng.randrange(3)
        u, v = tri[k], tri[(k + 1) % 3]
        out[u] &= ~(1 << v)


def generate(spec: InstanceSpec) -> Digraph:
    from .structure import transitive_tournament

    if spec.family == "transitive":
        return transitive_tournament(spec.n)
    if spec.family == "random-tournament":
        return gen_random_tournament(spec.n, spec.seed)
    if spec.family == "random-digraph":
        return gen_random_digraph(spec.n, spec.p, spec.seed)
    return gen_c3free_layered(spec.n, spec.alpha, spec.p, spec.seed)


def layered_suite(seeds=range(1, 501), n_min: int = 4, n_max: int = 14) -> list[InstanceSpec]:
    """Layered C3-free specs cycling alpha over 1..3, n over ``n_min..n_max`` and p over 0.3/0.5/0.8."""
    specs = []
    sizes = n_max - n_min + 1
    for s in seeds:
        alpha = 1 + s % 3
        n = max(n_min + s % sizes, alpha)
        p = (0.3, 0.5, 0.8)[(s // 3) % 3]
        specs.append(InstanceSpec("c3free-layered", n, seed=s, alpha=alpha, p=p))
    return specs
