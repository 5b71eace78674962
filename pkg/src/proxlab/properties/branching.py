"""Layered branching programs: evaluation, segment decomposition, and the
proximity-oblivious segment verifier for read-once programs.

A specification for the segment decomposition lists one claimed node per
segment boundary (the last one accepting); each block checks that the
input routes the sub-program between its claimed endpoints.  The blocks
partition the layers into k nearly-equal segments.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..amplify import ConfigurationError
from ..protocol import Decomposition, POMap


@dataclass
class LayeredBP:
    """Width-bounded layered branching program.

    var[j][u] is the variable read at node u of layer j; next0/next1 give
    the successor node index in layer j+1.  Layer 0 has a single source;
    accepting is the set of accepting sink indices in layer `length`.
    """

    n_vars: int
    layer_sizes: list
    var: list
    next0: list
    next1: list
    accepting: frozenset
    read_once: bool = False

    @property
    def length(self):
        return len(self.var)

    @property
    def width(self):
        return max(self.layer_sizes)

    def step(self, layer, node, bit):
        return self.next1[layer][node] if bit else self.next0[layer][node]

    def evaluate(self, x):
        x = np.asarray(x)
        node = 0
        for j in range(self.length):
            node = self.step(j, node, int(x[self.var[j][node]]))
        return node in self.accepting

    def route(self, x, start_layer, end_layer, start_node):
        """Follow x from start_node at start_layer; return the node reached."""
        x = np.asarray(x)
        node = start_node
        for j in range(start_layer, end_layer):
            node = self.step(j, node, int(x[self.var[j][node]]))
        return node


def parity_bp(n):
    """Width-2 program accepting even-parity strings; node index = parity so far."""
    sizes = [1] + [2] * n
    var = [[j] * sizes[j] for j in range(n)]
    next0 = [[0, 1][: sizes[j]] for j in range(n)]
    next1 = [[1, 0][: sizes[j]] for j in range(n)]
    return LayeredBP(n_vars=n, layer_sizes=sizes, var=var, next0=next0,
                     next1=next1, accepting=frozenset({0}), read_once=True)


def template_bp(n, rng, match_fraction=0.5):
    """Width-2 read-once program accepting strings that agree with a random
    template on a random subset of positions (node 0 = still matching,
    node 1 = dead).  Its accepted set is sparse enough that random strings
    land at constant distance from it."""
    checked = rng.random(n) < match_fraction
    template = rng.integers(0, 2, size=n)
    sizes = [1] + [2] * n
    var = []
    next0 = []
    next1 = []
    for j in range(n):
        w_in = sizes[j]
        var.append([j] * w_in)
        zero_ok = (not checked[j]) or template[j] == 0
        one_ok = (not checked[j]) or template[j] == 1
        n0 = [0 if zero_ok else 1]
        n1 = [0 if one_ok else 1]
        if w_in == 2:  # dead node absorbs
            n0.append(1)
            n1.append(1)
        next0.append(n0)
        next1.append(n1)
    return LayeredBP(n_vars=n, layer_sizes=sizes, var=var, next0=next0,
                     next1=next1, accepting=frozenset({0}), read_once=True)


def random_ordered_bp(n, width, rng, accept_fraction=0.5):
    """Random read-once layered program reading variable j at layer j."""
    sizes = [1] + [width] * n
    var = []
    next0 = []
    next1 = []
    for j in range(n):
        w_in, w_out = sizes[j], sizes[j + 1]
        var.append([j] * w_in)
        next0.append([int(v) for v in rng.integers(0, w_out, size=w_in)])
        next1.append([int(v) for v in rng.integers(0, w_out, size=w_in)])
    n_acc = max(1, int(round(accept_fraction * width)))
    accepting = frozenset(int(v) for v in rng.choice(width, size=n_acc, replace=False))
    return LayeredBP(n_vars=n, layer_sizes=sizes, var=var, next0=next0,
                     next1=next1, accepting=accepting, read_once=True)


def _segment_cuts(length, k):
    """Balanced split of layers 0..length into k segments."""
    base, extra = divmod(length, k)
    cuts = [0]
    for i in range(k):
        cuts.append(cuts[-1] + base + (1 if i < extra else 0))
    return cuts


def segment_variables(bp, a, b):
    """Sorted distinct variables readable in layers [a, b)."""
    seen = set()
    for j in range(a, b):
        seen.update(bp.var[j])
    return np.array(sorted(seen), dtype=np.int64)


def _route_on_block(bp, a, b, start_node, block_vars, values):
    lookup = {int(v): int(x) for v, x in zip(block_vars, values)}
    node = start_node
    for j in range(a, b):
        node = bp.step(j, node, lookup[bp.var[j][node]])
    return node


def bp_decomposition(bp, k):
    if not 1 <= k <= bp.length:
        raise ConfigurationError(f"need 1 <= k <= length, got k={k}")
    cuts = _segment_cuts(bp.length, k)
    block_vars = [segment_variables(bp, cuts[i], cuts[i + 1]) for i in range(k)]
    lengths = [max(1, len(v)) for v in block_vars]

    def spec_ok(y):
        if not isinstance(y, tuple) or len(y) != k:
            return False
        for i, node in enumerate(y):
            if not 0 <= node < bp.layer_sizes[cuts[i + 1]]:
                return False
        return y[-1] in bp.accepting

    def block_member(y, i, values):
        start = 0 if i == 0 else y[i - 1]
        end = _route_on_block(bp, cuts[i], cuts[i + 1], start, block_vars[i], values)
        return end == y[i]

    def block_distance(y, i, values):
        m = len(values)
        if m > 20:
            raise ConfigurationError("exact block distance needs m <= 20")
        if block_member(y, i, values):
            return 0.0
        best = None
        for cand in itertools.product((0, 1), repeat=m):
            if block_member(y, i, np.array(cand, dtype=np.uint8)):
                d = sum(int(a != b) for a, b in zip(cand, values))
                best = d if best is None else min(best, d)
        return 1.0 if best is None else best / m

    def enumerate_specs():
        ranges = [range(bp.layer_sizes[cuts[i + 1]]) for i in range(k)]
        for y in itertools.product(*ranges):
            if y[-1] in bp.accepting:
                yield y

    def honest_spec(x):
        node = 0
        y = []
        for i in range(k):
            node = bp.route(x, cuts[i], cuts[i + 1], node)
            y.append(node)
        return tuple(y) if y[-1] in bp.accepting else None

    spec_bits = k * max(1, math.ceil(math.log2(max(2, bp.width))))
    return Decomposition(
        n=bp.n_vars,
        k=k,
        spec_bits=spec_bits,
        block_lengths=lengths,
        spec_ok=spec_ok,
        block_indices=lambda y, i: block_vars[i],
        block_member=block_member,
        block_distance=block_distance,
        enumerate_specs=enumerate_specs,
        honest_spec=honest_spec,
        b=1,
        c_dec=0.5,
    )


def distance_to_accepted(bp, x):
    """Exact relative distance of x from the set accepted by a read-once
    program, by a min-flip dynamic program over (layer, node)."""
    if not bp.read_once:
        return _distance_brute(bp, x)
    x = np.asarray(x)
    inf = bp.n_vars + 1
    dist = [0]  # per node of current layer
    for j in range(bp.length):
        nxt = [inf] * bp.layer_sizes[j + 1]
        for u, d in enumerate(dist):
            if d >= inf:
                continue
            bit = int(x[bp.var[j][u]])
            for b in (0, 1):
                v = bp.step(j, u, b)
                cost = d + (b != bit)
                if cost < nxt[v]:
                    nxt[v] = cost
        dist = nxt
    best = min((dist[v] for v in bp.accepting), default=inf)
    return best / bp.n_vars if best < inf else 1.0


def _distance_brute(bp, x):
    if bp.n_vars > 16:
        raise ConfigurationError("brute-force distance needs n <= 16")
    x = np.asarray(x, dtype=np.uint8)
    best = None
    for cand in itertools.product((0, 1), repeat=bp.n_vars):
        arr = np.array(cand, dtype=np.uint8)
        if bp.evaluate(arr):
            d = int(np.sum(arr != x))
            best = d if best is None else min(best, d)
    return 1.0 if best is None else best / bp.n_vars


def segment_reachability(bp, cuts):
    """reach[i][u] = nodes at cut i+1 reachable from node u at cut i."""
    reach = []
    for i in range(len(cuts) - 1):
        table = []
        for u in range(bp.layer_sizes[cuts[i]]):
            frontier = {u}
            for j in range(cuts[i], cuts[i + 1]):
                frontier = {bp.step(j, v, b) for v in frontier for b in (0, 1)}
            table.append(frozenset(frontier))
        reach.append(table)
    return reach


def robp_pomap(bp, k):
    """Proximity-oblivious proof-aided verifier for a read-once program:
    the proof claims the k boundary nodes of an accepting run; one run
    checks a uniformly random segment and rejects on a routing mismatch.

    Claims whose transitions no assignment can realise are rejected
    outright (a proof-only check); for the remaining proofs a segment
    mismatch can be repaired by rewriting just that segment's variables,
    so the fraction of mismatched segments, and hence the detection
    probability on eps-far inputs, is at least eps."""
    if not bp.read_once:
        raise ConfigurationError("segment verifier requires a read-once program")
    cuts = _segment_cuts(bp.length, k)
    queries = max(cuts[i + 1] - cuts[i] for i in range(k))
    reach = segment_reachability(bp, cuts)

    def _spec_ok(proof):
        if not isinstance(proof, tuple) or len(proof) != k:
            return False
        if any(not 0 <= v < bp.layer_sizes[cuts[i + 1]] for i, v in enumerate(proof)):
            return False
        if proof[-1] not in bp.accepting:
            return False
        prev = 0
        for i, v in enumerate(proof):
            if v not in reach[i][prev]:
                return False
            prev = v
        return True

    def _segment_ok(x, proof, i):
        start = 0 if i == 0 else proof[i - 1]
        return bp.route(x, cuts[i], cuts[i + 1], start) == proof[i]

    def reject_probability(oracle, proof):
        if not _spec_ok(proof):
            return 1.0
        x = oracle.bits
        bad = sum(0 if _segment_ok(x, proof, i) else 1 for i in range(k))
        return bad / k

    def run(oracle, proof, rng):
        if not _spec_ok(proof):
            return False
        i = int(rng.integers(k))
        start = 0 if i == 0 else proof[i - 1]
        node = start
        for j in range(cuts[i], cuts[i + 1]):
            node = bp.step(j, node, oracle.read(bp.var[j][node]))
        return node == proof[i]

    return POMap(
        proof_length=k * max(1, math.ceil(math.log2(max(2, bp.width)))),
        queries_per_run=queries,
        detection=lambda eps: eps,
        reject_probability=reject_probability,
        run=run,
    )


def honest_boundary_proof(bp, k, x):
    """Boundary nodes of the true run (valid only when x is accepted)."""
    cuts = _segment_cuts(bp.length, k)
    node = 0
    proof = []
    for i in range(k):
        node = bp.route(x, cuts[i], cuts[i + 1], node)
        proof.append(node)
    return tuple(proof)
