"""Eulerian orientations of the complete bipartite graph K_{2,n-2}.

Left vertices u1, u2; right vertices r_0 .. r_{n-3}, each joined to both
left vertices.  An orientation assigns each edge a direction bit
(1 = out of the left vertex).  It is Eulerian iff every right vertex has
in-degree 1 (one of its two edges points in) and u1 has out-degree
(n-2)/2, which forces u2's balance as well.

The decomposition splits the right vertices into k balanced groups; the
specification claims, per group, how many edges leave u1 into it.  A
group's sub-property fixes the per-vertex balance and that claimed count
over the group's 2*(group size) direction bits.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..amplify import ConfigurationError
from ..protocol import Decomposition


def edge_index(n, left, j):
    """Bit position of edge {u_left, r_j}: u1 edges first, then u2 edges."""
    return left * (n - 2) + j


def orientation_bits(n):
    return 2 * (n - 2)


def is_eulerian(bits, n):
    bits = np.asarray(bits, dtype=np.int64)
    r = n - 2
    b1, b2 = bits[:r], bits[r:]
    if not np.all(b1 + b2 == 1):
        return False
    return int(b1.sum()) == r // 2


def distance_to_eulerian(bits, n):
    """Exact relative distance to the Eulerian orientations (min bit flips
    over per-vertex repairs and the u1 balance, by a count DP)."""
    bits = np.asarray(bits, dtype=np.int64)
    r = n - 2
    if n % 2 != 0:
        raise ConfigurationError("Eulerian orientations need n even")
    target = r // 2
    inf = 10 ** 9
    dp = {0: 0}  # u1-out count -> min flips
    for j in range(r):
        pair = (int(bits[j]), int(bits[r + j]))
        menu = []
        for t1, t2 in ((1, 0), (0, 1)):
            menu.append((t1, abs(pair[0] - t1) + abs(pair[1] - t2)))
        nxt = {}
        for c, flips in dp.items():
            for t1, cost in menu:
                key = c + t1
                val = flips + cost
                if val < nxt.get(key, inf):
                    nxt[key] = val
        dp = nxt
    best = dp.get(target, inf)
    return best / orientation_bits(n)


def _right_groups(n, k):
    r = n - 2
    base, extra = divmod(r, k)
    groups = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        groups.append(np.arange(start, start + size))
        start += size
    return groups


def eulerian_decomposition(n, k):
    if n % 2 != 0:
        raise ConfigurationError("Eulerian orientations of K_{2,n-2} need n even")
    r = n - 2
    if not 1 <= k <= r:
        raise ConfigurationError(f"need 1 <= k <= n-2, got k={k}")
    groups = _right_groups(n, k)
    sizes = [len(g) for g in groups]
    index_arrays = [
        np.concatenate((g, g + r)) for g in groups  # u1 bits then u2 bits
    ]
    lengths = [2 * s for s in sizes]

    def spec_ok(y):
        if not isinstance(y, tuple) or len(y) != k:
            return False
        if any(not isinstance(c, int) or c < 0 or c > sizes[i]
               for i, c in enumerate(y)):
            return False
        return sum(y) == r // 2

    def block_member(y, i, values):
        s = sizes[i]
        b1, b2 = values[:s], values[s:]
        if not np.all(np.asarray(b1) + np.asarray(b2) == 1):
            return False
        return int(np.sum(b1)) == y[i]

    def block_distance(y, i, values):
        s = sizes[i]
        b1 = np.asarray(values[:s], dtype=np.int64)
        b2 = np.asarray(values[s:], dtype=np.int64)
        inf = 10 ** 9
        dp = {0: 0}
        for j in range(s):
            nxt = {}
            for t1, t2 in ((1, 0), (0, 1)):
                cost = abs(int(b1[j]) - t1) + abs(int(b2[j]) - t2)
                for c, flips in dp.items():
                    key, val = c + t1, flips + cost
                    if val < nxt.get(key, inf):
                        nxt[key] = val
            dp = nxt
        best = dp.get(y[i], inf)
        return best / (2 * s)

    def enumerate_specs():
        for y in itertools.product(*[range(s + 1) for s in sizes]):
            if sum(y) == r // 2:
                yield tuple(int(c) for c in y)

    def honest_spec(bits):
        bits = np.asarray(bits, dtype=np.int64)
        counts = tuple(int(bits[g].sum()) for g in groups)
        return counts if sum(counts) == r // 2 else None

    return Decomposition(
        n=orientation_bits(n),
        k=k,
        spec_bits=k * max(1, math.ceil(math.log2(n))),
        block_lengths=lengths,
        spec_ok=spec_ok,
        block_indices=lambda y, i: index_arrays[i],
        block_member=block_member,
        block_distance=block_distance,
        enumerate_specs=enumerate_specs,
        honest_spec=honest_spec,
        b=1,
        c_dec=1.0,
    )


def random_eulerian(n, rng):
    """A uniform-ish Eulerian orientation: per right vertex choose the
    in-edge, conditioned on the u1 balance by rejection."""
    r = n - 2
    while True:
        b1 = np.asarray(rng.integers(0, 2, size=r), dtype=np.uint8)
        if int(b1.sum()) == r // 2:
            return np.concatenate((b1, 1 - b1))
