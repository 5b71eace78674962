"""Bounded-degree graphs, seeded lazy walks, and rapid-mixing checks.

A lazy walk step consumes a fixed-width chunk of seed bits: the chunk,
reduced mod the power of two above 2d, selects a slot; slots below d
trigger one adjacency probe (move on a neighbour, stay on an empty
slot), larger slots stay put.  Every neighbour is therefore selected
with exactly probability 1/M for M = 2^ceil(log2(2d)), the chain is
doubly stochastic, and the exact transition matrix matches the sampled
walk bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .amplify import ConfigurationError
from .oracle import GraphOracle


@dataclass
class WalkOutcome:
    endpoint: int
    parity: int
    seed: np.ndarray


def step_seed_bits(degree_bound):
    return 2 * max(1, math.ceil(math.log2(degree_bound))) + 1


def walk_seed_bits(degree_bound, length):
    return step_seed_bits(degree_bound) * length


def _slot_modulus(degree_bound):
    return 2 ** math.ceil(math.log2(2 * degree_bound))


def lazy_walk(oracle, start, length, seed):
    """Walk `length` lazy steps from `start`, driven by the seed bits.

    Charges one query per probed slot; lazy steps are free.  Returns the
    endpoint and the number of moves mod 2.
    """
    if length < 1:
        raise ConfigurationError("walk length must be >= 1")
    d = oracle.degree_bound
    width = step_seed_bits(d)
    seed = np.asarray(seed, dtype=np.uint8)
    if len(seed) != width * length:
        raise ConfigurationError(f"seed must have {width * length} bits")
    modulus = _slot_modulus(d)
    v = start
    parity = 0
    for t in range(length):
        chunk = seed[t * width:(t + 1) * width]
        c = 0
        for b in chunk:
            c = (c << 1) | int(b)
        slot = c % modulus
        if slot < d:
            w = oracle.read(v, slot)
            if w is not None:
                v = w
                parity ^= 1
    return WalkOutcome(endpoint=v, parity=parity, seed=seed)


def transition_matrix(adjacency, degree_bound):
    """Exact single-step matrix of the seeded lazy walk."""
    adj = np.asarray(adjacency)
    n = adj.shape[0]
    modulus = _slot_modulus(degree_bound)
    p = np.zeros((n, n))
    for v in range(n):
        stay = 1.0 - degree_bound / modulus
        for slot in range(degree_bound):
            w = adj[v, slot]
            if w >= 0:
                p[v, w] += 1.0 / modulus
            else:
                stay += 1.0 / modulus
        p[v, v] += stay
    return p


def parity_transition_matrix(adjacency, degree_bound):
    """Chain over (vertex, parity): moves flip the parity bit."""
    p = transition_matrix(adjacency, degree_bound)
    n = p.shape[0]
    move = p.copy()
    np.fill_diagonal(move, 0.0)
    stay = np.diag(np.diag(p))
    top = np.hstack((stay, move))
    bottom = np.hstack((move, stay))
    return np.vstack((top, bottom))


def walk_distribution(adjacency, degree_bound, length):
    """Exact endpoint-and-parity distributions after `length` steps.

    Returns (even, odd): even[v, w] = P[walk from v ends at w with an even
    number of moves]."""
    m2 = parity_transition_matrix(adjacency, degree_bound)
    power = np.linalg.matrix_power(m2, length)
    n = adjacency.shape[0]
    return power[:n, :n], power[:n, n:]


def rapid_mixing_check(graph, length):
    """True iff every entry of the exact `length`-step walk matrix lies in
    [1/(2n), 2/n]."""
    adj = graph.adjacency if isinstance(graph, GraphOracle) else np.asarray(graph)
    n = adj.shape[0]
    if n > 4096:
        raise ConfigurationError("exact chain capped at n <= 4096")
    d = adj.shape[1]
    p = np.linalg.matrix_power(transition_matrix(adj, d), length)
    return bool(p.min() >= 1 / (2 * n) and p.max() <= 2 / n)


def default_walk_length(n, c_mix=10.0):
    return max(1, math.ceil(c_mix * math.log2(max(2, n))))


# ---------------------------------------------------------------------------
# generators


def _adjacency_from_edges(n, d, edges):
    """Slot-form adjacency from an edge list; None if degrees exceed d."""
    slots = [[] for _ in range(n)]
    for u, v in edges:
        slots[u].append(v)
        slots[v].append(u)
    if any(len(s) > d for s in slots):
        return None
    adj = np.full((n, d), -1, dtype=np.int64)
    for v, neigh in enumerate(slots):
        for i, w in enumerate(neigh):
            adj[v, i] = w
    return adj


def _is_simple(edges):
    seen = set()
    for u, v in edges:
        if u == v:
            return False
        key = (min(u, v), max(u, v))
        if key in seen:
            return False
        seen.add(key)
    return True


def gen_bipartite_expander(n, d, rng, c_mix=10.0, max_tries=300):
    """Union of d random perfect matchings between the two halves,
    resampled until simple and passing the rapid-mixing check."""
    if n % 2 != 0:
        raise ConfigurationError("bipartite generator needs n even")
    half = n // 2
    length = default_walk_length(n, c_mix)
    for _ in range(max_tries):
        edges = []
        for _ in range(d):
            perm = rng.permutation(half)
            edges.extend((i, half + int(perm[i])) for i in range(half))
        if not _is_simple(edges):
            continue
        adj = _adjacency_from_edges(n, d, edges)
        if adj is None:
            continue
        if rapid_mixing_check(adj, length):
            return GraphOracle(adj)
    raise RuntimeError(
        f"bipartite expander generation exhausted {max_tries} tries "
        f"(n={n}, d={d}, walk length {length})")


def min_bipartition_violations(adjacency):
    """Exhaustive scan over bipartitions: the fewest edges with both
    endpoints on one side (n <= 24)."""
    adj = np.asarray(adjacency)
    n = adj.shape[0]
    if n > 24:
        raise ConfigurationError("exhaustive bipartition scan capped at n <= 24")
    edges = []
    for v in range(n):
        for w in adj[v]:
            if w >= 0 and w > v:
                edges.append((v, int(w)))
    best = len(edges) + 1
    for mask in range(2 ** (n - 1)):  # vertex n-1 fixed on side 0
        mono = 0
        for u, v in edges:
            su = (mask >> u) & 1 if u < n - 1 else 0
            sv = (mask >> v) & 1 if v < n - 1 else 0
            if su == sv:
                mono += 1
                if mono >= best:
                    break
        best = min(best, mono)
        if best == 0:
            break
    return best


def bipartite_distance(adjacency, degree_bound):
    """Certified relative distance from bipartite: each offending edge
    must change in both of its adjacency slots."""
    adj = np.asarray(adjacency)
    n = adj.shape[0]
    return 2 * min_bipartition_violations(adj) / (n * degree_bound)


def gen_far_nonbipartite(n, d, eps_target, rng, c_mix=10.0, max_tries=400):
    """Random d-regular graph certified eps-far from bipartite (exhaustive
    scan, so n <= 24) and rapidly mixing; returns (oracle, distance)."""
    if n % 2 != 0:
        raise ConfigurationError("regular generator needs n even")
    length = default_walk_length(n, c_mix)
    failures = {"not_simple": 0, "not_far": 0, "not_mixing": 0}
    for _ in range(max_tries):
        edges = []
        for _ in range(d):
            perm = rng.permutation(n)
            edges.extend((int(perm[2 * i]), int(perm[2 * i + 1])) for i in range(n // 2))
        if not _is_simple(edges):
            failures["not_simple"] += 1
            continue
        adj = _adjacency_from_edges(n, d, edges)
        if adj is None:
            failures["not_simple"] += 1
            continue
        dist = bipartite_distance(adj, d)
        if dist < eps_target:
            failures["not_far"] += 1
            continue
        if not rapid_mixing_check(adj, length):
            failures["not_mixing"] += 1
            continue
        return GraphOracle(adj), dist
    raise RuntimeError(
        f"far-nonbipartite generation exhausted {max_tries} tries "
        f"(n={n}, d={d}, eps={eps_target}, rejections={failures})")


# ---------------------------------------------------------------------------
# adjacency-list text format


def save_graph(oracle, path):
    with open(path, "w") as fh:
        for v in range(oracle.n):
            neigh = [str(int(w)) for w in oracle.adjacency[v] if w >= 0]
            fh.write(f"{v}: {' '.join(neigh)}\n")


def load_graph(path, degree_bound=None):
    rows = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            head, _, rest = line.partition(":")
            rows[int(head)] = [int(w) for w in rest.split()]
    n = max(rows) + 1
    d = degree_bound or max((len(v) for v in rows.values()), default=1)
    adj = np.full((n, d), -1, dtype=np.int64)
    for v, neigh in rows.items():
        for i, w in enumerate(neigh):
            adj[v, i] = w
    return GraphOracle(adj)
