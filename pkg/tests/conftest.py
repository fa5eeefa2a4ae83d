"""Shared strategies and brute-force reference checks.

The brute-force helpers here deliberately avoid the library's own search
code: acyclicity is decided by trying every vertex ordering and stability by
checking every pair.
"""
import itertools
import os
import random

from hypothesis import settings, strategies as st

from dicolor.digraph import Digraph

settings.register_profile("default", max_examples=60, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def C3():
    return Digraph(3, [(0, 1), (1, 2), (2, 0)])


def star_out(k=3):
    """Centre 0 sees leaves 1..k."""
    return Digraph(k + 1, [(0, i) for i in range(1, k + 1)])


@st.composite
def digraphs(draw, min_n=0, max_n=8, density=None):
    n = draw(st.integers(min_n, max_n))
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            kind = draw(st.sampled_from([0, 1, 2] if density is None else [1, 2]))
            if kind == 1:
                arcs.append((i, j))
            elif kind == 2:
                arcs.append((j, i))
    return Digraph(n, arcs)


def tournaments(min_n=1, max_n=8):
    return digraphs(min_n=min_n, max_n=max_n, density="full")


def random_digraph(rng: random.Random, n: int, p: float) -> Digraph:
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                arcs.append((i, j) if rng.random() < 0.5 else (j, i))
    return Digraph(n, arcs)


def brute_acyclic(D: Digraph, S) -> bool:
    S = list(S)
    arcs = [(u, v) for u in S for v in S if D.has_arc(u, v)]
    if not arcs:
        return True
    for order in itertools.permutations(S):
        pos = {v: i for i, v in enumerate(order)}
        if all(pos[u] < pos[v] for u, v in arcs):
            return True
    return False


def brute_has_cycle_enum(D: Digraph) -> bool:
    """Look for a directed cycle by enumerating vertex sequences."""
    for k in range(2, D.n + 1):
        for seq in itertools.permutations(range(D.n), k):
            if all(D.has_arc(seq[i], seq[(i + 1) % k]) for i in range(k)):
                return True
    return False


def brute_alpha(D: Digraph) -> int:
    for k in range(D.n, 0, -1):
        for S in itertools.combinations(range(D.n), k):
            if all(not D.adjacent(u, v) for u, v in itertools.combinations(S, 2)):
                return k
    return 0


def brute_alpha_of(D: Digraph, S) -> int:
    S = list(S)
    for k in range(len(S), 0, -1):
        for T in itertools.combinations(S, k):
            if all(not D.adjacent(u, v) for u, v in itertools.combinations(T, 2)):
                return k
    return 0


def brute_beta(D: Digraph) -> int:
    for k in range(D.n, 0, -1):
        for S in itertools.combinations(range(D.n), k):
            if brute_acyclic(D, S):
                return k
    return 0


def _partitions(items, k):
    """Set partitions of ``items`` into at most ``k`` blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest, k):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        if len(part) < k:
            yield [[first]] + part


def brute_chi(D: Digraph) -> int:
    if D.n == 0:
        return 0
    for k in range(1, D.n + 1):
        for part in _partitions(list(range(D.n)), k):
            if all(brute_acyclic(D, block) for block in part):
                return k
    raise AssertionError


def brute_triangles(D: Digraph):
    out = []
    for a, b, c in itertools.combinations(range(D.n), 3):
        if (D.has_arc(a, b) and D.has_arc(b, c) and D.has_arc(c, a)) or (
            D.has_arc(a, c) and D.has_arc(c, b) and D.has_arc(b, a)
        ):
            out.append((a, b, c))
    return out


def brute_bag_violation(D: Digraph, B):
    B = set(B)
    outside = [v for v in range(D.n) if v not in B]
    for x, y, z in itertools.combinations(outside, 3):
        if not any(D.adjacent(b, x) and D.adjacent(b, y) and D.adjacent(b, z) for b in B):
            return (x, y, z)
    return None


def colour_classes(colors):
    classes = {}
    for v, c in enumerate(colors):
        classes.setdefault(c, []).append(v)
    return list(classes.values())


@st.composite
def c3_free_digraphs(draw, max_n=10):
    """C3-free digraphs, either layered or repaired random ones."""
    from dicolor.instances import gen_c3free_layered, repair_to_c3_free

    seed = draw(st.integers(0, 2**32))
    if draw(st.booleans()):
        n = draw(st.integers(1, max_n))
        alpha = draw(st.integers(1, min(3, n)))
        p = draw(st.sampled_from([0.2, 0.5, 0.9]))
        return gen_c3free_layered(n, alpha, p, seed)
    return repair_to_c3_free(draw(digraphs(max_n=max_n)), seed)


# acceptance criteria report one line each at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
