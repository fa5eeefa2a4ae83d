"""Tournament constructors and detectors for thick arcs, cliques and mountains.

A 1-mountain is a single vertex. An arc ``uv`` is r-thick when
``N-(u) & N+(v)`` contains an r-mountain (its certificate). An (r, s)-clique
is an s-set whose pairs are all joined by r-thick arcs, and an
(r+1)-mountain is an (r, r+1)-clique together with one certificate per pair.
Mountains are searched inside induced subdigraphs; a mountain of ``D[X]`` is
exactly a mountain of ``D`` contained in ``X``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .digraph import Digraph, VertexRangeError, induced_mask
from .oracles import CapExceeded

__all__ = [
    "MountainCertificate",
    "transitive_tournament",
    "compose_arrow",
    "compose_delta",
    "is_r_thick",
    "find_rs_clique",
    "find_mountain",
    "check_certificate",
]

MOUNTAIN_CAP = 3
CLIQUE_R_CAP = 2
CLIQUE_S_CAP = 4


@dataclass(frozen=True)
class MountainCertificate:
    r: int
    clique: tuple[int, ...]
    # keyed by the arc (u, v) of the clique, certificate inside N-(u) & N+(v)
    certificates: dict[tuple[int, int], MountainCertificate] = field(default_factory=dict)

    @property
    def vertices(self) -> frozenset[int]:
        vs = set(self.clique)
        for sub in self.certificates.values():
            vs |= sub.vertices
        return frozenset(vs)

    def relabel(self, labels) -> MountainCertificate:
        return MountainCertificate(
            self.r,
            tuple(labels[v] for v in self.clique),
            {(labels[u], labels[v]): c.relabel(labels) for (u, v), c in self.certificates.items()},
        )

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "clique": list(self.clique),
            "vertices": sorted(self.vertices),
            "certificates": [
                {"arc": [u, v], "certificate": c.to_json()} for (u, v), c in sorted(self.certificates.items())
            ],
        }


def transitive_tournament(k: int) -> Digraph:
    if k < 1:
        raise ValueError("transitive tournament needs k >= 1")
    return Digraph(k, ((i, j) for i in range(k) for j in range(i + 1, k)))


def _disjoint_union(parts):
    offsets, arcs, n = [], [], 0
    for h in parts:
        offsets.append(n)
        arcs.extend((u + n, v + n) for u, v in h.arcs)
        n += h.n
    return n, offsets, arcs


def compose_arrow(h1: Digraph, h2: Digraph) -> Digraph:
    """``h1 => h2``: disjoint union with every arc from ``h1`` to ``h2``."""
    n, (o1, o2), arcs = _disjoint_union([h1, h2])
    arcs += [(o1 + a, o2 + b) for a in range(h1.n) for b in range(h2.n)]
    return Digraph(n, arcs)


def compose_delta(h1: Digraph, h2: Digraph, h3: Digraph) -> Digraph:
    """Disjoint union with complete arcs h1 -> h2, h2 -> h3 and h3 -> h1."""
    parts = [h1, h2, h3]
    n, offs, arcs = _disjoint_union(parts)
    for i in range(3):
        j = (i + 1) % 3
        arcs += [(offs[i] + a, offs[j] + b) for a in range(parts[i].n) for b in range(parts[j].n)]
    return Digraph(n, arcs)


def _mountain_in(D: Digraph, mask: int, r: int) -> MountainCertificate | None:
    """Least r-mountain of ``D`` inside ``mask``, in original labels."""
    if r == 1:
        if not mask:
            return None
        return MountainCertificate(1, ((mask & -mask).bit_length() - 1,))
    if mask.bit_count() < r:
        return None
    sub, labels = induced_mask(D, mask)
    found = _clique(sub, r - 1, r)
    if found is None:
        return None
    clique, certs = found
    return MountainCertificate(r, clique, certs).relabel(labels)


def _thick_cert(D: Digraph, u: int, v: int, r: int) -> MountainCertificate | None:
    return _mountain_in(D, D.in_masks[u] & D.out_masks[v], r)


def _clique(D: Digraph, r: int, s: int):
    """Lexicographically least (r, s)-clique of ``D`` with its certificates."""
    thick: dict[tuple[int, int], MountainCertificate | None] = {}

    def cert(a: int, b: int):
        u, v = (a, b) if D.has_arc(a, b) else (b, a)
        if (u, v) not in thick:
            thick[(u, v)] = _thick_cert(D, u, v, r)
        return (u, v), thick[(u, v)]

    chosen: list[int] = []
    certs: dict[tuple[int, int], MountainCertificate] = {}

    def rec(start: int) -> bool:
        if len(chosen) == s:
            return True
        for w in range(start, D.n):
            added = []
            ok = True
            for x in chosen:
                if not D.adjacent(x, w):
                    ok = False
                    break
                arc, c = cert(x, w)
                if c is None:
                    ok = False
                    break
                added.append((arc, c))
            if not ok:
                continue
            chosen.append(w)
            certs.update(added)
            if rec(w + 1):
                return True
            chosen.pop()
            for arc, _ in added:
                del certs[arc]
        return False

    if rec(0):
        return tuple(chosen), dict(certs)
    return None


def is_r_thick(D: Digraph, u: int, v: int, r: int, cap: int = MOUNTAIN_CAP) -> MountainCertificate | None:
    """Certificate of r-thickness of the arc ``uv``, or None."""
    for w in (u, v):
        if not 0 <= w < D.n:
            raise VertexRangeError(f"vertex {w}", D.n)
    if not D.has_arc(u, v):
        raise ValueError(f"{(u, v)} is not an arc")
    if r < 1:
        raise ValueError("r must be >= 1")
    if r > cap:
        raise CapExceeded(f"r={r} exceeds cap {cap}")
    return _thick_cert(D, u, v, r)


def find_rs_clique(D: Digraph, r: int, s: int, r_cap: int = CLIQUE_R_CAP, s_cap: int = CLIQUE_S_CAP):
    """Least (r, s)-clique as ``(vertices, certificates)`` or None."""
    if r < 1 or s < 1:
        raise ValueError("r and s must be >= 1")
    if r > r_cap or s > s_cap:
        raise CapExceeded(f"(r, s)=({r}, {s}) exceeds caps ({r_cap}, {s_cap})")
    found = _clique(D, r, s)
    if found is None:
        return None
    clique, certs = found
    return frozenset(clique), certs


def find_mountain(D: Digraph, r: int, cap: int = MOUNTAIN_CAP) -> MountainCertificate | None:
    if r < 1:
        raise ValueError("r must be >= 1")
    if r > cap:
        raise CapExceeded(f"r={r} exceeds cap {cap}")
    return _mountain_in(D, D.all_mask, r)


def check_certificate(D: Digraph, cert: MountainCertificate, within: int | None = None) -> list[str]:
    """Re-validate a certificate from the bottom up; returns a list of problems."""
    problems = []
    within = D.all_mask if within is None else within
    r = cert.r
    if any(not within >> v & 1 for v in cert.clique):
        problems.append(f"level {r}: clique {cert.clique} leaves its allowed set")
    if r == 1:
        if len(cert.clique) != 1 or cert.certificates:
            problems.append("level 1 must be a single vertex without sub-certificates")
        return problems
    if len(set(cert.clique)) != r:
        problems.append(f"level {r}: clique has {len(set(cert.clique))} vertices, expected {r}")
    seen = set()
    for i, a in enumerate(cert.clique):
        for b in cert.clique[i + 1:]:
            arc = (a, b) if D.has_arc(a, b) else (b, a)
            if not D.has_arc(*arc):
                problems.append(f"level {r}: {a} and {b} are not adjacent")
                continue
            seen.add(arc)
            sub = cert.certificates.get(arc)
            if sub is None:
                problems.append(f"level {r}: no certificate for arc {arc}")
                continue
            if sub.r != r - 1:
                problems.append(f"level {r}: certificate for {arc} has level {sub.r}")
            u, v = arc
            problems += check_certificate(D, sub, within & D.in_masks[u] & D.out_masks[v])
    extra = set(cert.certificates) - seen
    if extra:
        problems.append(f"level {r}: certificates for non-clique arcs {sorted(extra)}")
    if len(cert.vertices) > math.factorial(r) ** 2:
        problems.append(f"level {r}: {len(cert.vertices)} vertices exceeds (r!)^2")
    return problems


def mountain_mask(cert: MountainCertificate) -> int:
    m = 0
    for v in cert.vertices:
        m |= 1 << v
    return m

