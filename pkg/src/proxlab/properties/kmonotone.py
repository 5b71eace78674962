"""k-monotonicity of Boolean functions on the line [n].

f is k-monotone when every alternating value sequence that starts at 1
has length at most k.  Equivalently f splits into consecutive monotone
pieces, alternating between nondecreasing and nonincreasing, where a
split starting with a nonincreasing piece spends one extra unit of the
alternation budget.

A specification fixes exactly k blocks: k-1 interior boundary points
(blocks share their endpoints) and one direction bit per block.
Adjacent blocks may share a direction, in which case they glue into a
single monotone piece; the budget is charged on the glued pieces.  This
keeps the family closed under the deterministic midpoint padding used
to stretch a minimal split to exactly k blocks.

Each block's sub-property is anchored: the nearest monotone word must
agree with the block's own first symbol, which pins the shared endpoint
between adjacent blocks when distances are charged per block.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..amplify import ConfigurationError
from ..protocol import Decomposition, SubVerifierSpec

NONDECREASING, NONINCREASING = 0, 1


@dataclass(frozen=True)
class KMonotoneSpec:
    directions: tuple  # one direction bit per block
    boundaries: tuple  # strictly increasing interior points in (0, n-1)


def runs(f):
    f = np.asarray(f)
    if len(f) == 0:
        return []
    change = np.flatnonzero(np.diff(f.astype(np.int8)) != 0)
    starts = np.concatenate(([0], change + 1))
    return [(int(s), int(f[s])) for s in starts]


def is_k_monotone(f, k):
    """Longest alternating value sequence starting at value 1 has length <= k."""
    f = np.asarray(f)
    r = runs(f)
    if not r:
        return True
    count = len(r) if r[0][1] == 1 else len(r) - 1
    return count <= k


def distance_to_k_monotone(f, k):
    """Exact relative Hamming distance to the k-monotone functions.

    Dynamic program over (current value, alternation budget used), where
    the budget counts runs from the first 1-valued run onward.
    """
    f = np.asarray(f, dtype=np.int8)
    n = len(f)
    if n == 0:
        return 0.0
    inf = n + 1
    # dp[v][c]: min flips so far with current value v and count c
    dp = np.full((2, k + 1), inf, dtype=np.int64)
    dp[0][0] = int(f[0] != 0)
    if k >= 1:
        dp[1][1] = int(f[0] != 1)
    for t in range(1, n):
        nxt = np.full((2, k + 1), inf, dtype=np.int64)
        for v in (0, 1):
            cost = int(f[t] != v)
            np.minimum(nxt[v], dp[v] + cost, out=nxt[v])
            # starting a new run always consumes one alternation unit
            np.minimum(nxt[v][1:], (dp[1 - v] + cost)[:-1], out=nxt[v][1:])
        dp = nxt
    best = int(dp.min())
    return best / n


def anchored_monotone_distance(values, direction):
    """Min flips to make the block monotone in `direction`, keeping its
    first symbol fixed, divided by block length."""
    w = np.asarray(values, dtype=np.int8)
    if direction == NONINCREASING:
        w = 1 - w
    m = len(w)
    if m == 0:
        return 0.0
    if w[0] == 1:
        # nondecreasing anchored at 1: must be all ones
        return float(np.sum(w[1:] == 0)) / m
    ones_before = np.concatenate(([0], np.cumsum(w)))  # ones in w[:t]
    zeros_after = np.concatenate((np.cumsum((1 - w)[::-1])[::-1], [0]))  # zeros in w[t:]
    costs = ones_before[1:m + 1] + zeros_after[1:m + 1]  # switch point t in [1, m]
    return float(costs.min()) / m


def is_monotone(values, direction):
    w = np.asarray(values, dtype=np.int8)
    if direction == NONINCREASING:
        w = 1 - w
    return bool(np.all(np.diff(w) >= 0))


def _glued_budget(directions):
    """Alternation units consumed by the glued direction pattern."""
    pieces = [d for d, _ in itertools.groupby(directions)]
    return len(pieces) + (1 if pieces[0] == NONINCREASING else 0)


def spec_blocks(n, spec):
    """Inclusive [start, end] bounds per block; adjacent blocks share endpoints."""
    cuts = (0,) + tuple(spec.boundaries) + (n - 1,)
    return [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)]


def kmonotone_decomposition(n, k):
    if not 1 <= k <= n - 1:
        raise ConfigurationError(f"need 1 <= k <= n-1, got k={k}, n={n}")

    def spec_ok(y):
        if not isinstance(y, KMonotoneSpec):
            return False
        if len(y.directions) != k or len(y.boundaries) != k - 1:
            return False
        if any(d not in (0, 1) for d in y.directions):
            return False
        cuts = (0,) + tuple(y.boundaries) + (n - 1,)
        if any(cuts[i] >= cuts[i + 1] for i in range(len(cuts) - 1)):
            return False
        return _glued_budget(y.directions) <= k

    def lengths(y):
        return [b - a + 1 for a, b in spec_blocks(n, y)]

    def block_indices(y, i):
        a, b = spec_blocks(n, y)[i]
        return np.arange(a, b + 1)

    def block_member(y, i, values):
        return is_monotone(values, y.directions[i])

    def block_distance(y, i, values):
        return anchored_monotone_distance(values, y.directions[i])

    def enumerate_specs():
        for bounds in itertools.combinations(range(1, n - 1), k - 1):
            for dirs in itertools.product((0, 1), repeat=k):
                y = KMonotoneSpec(directions=dirs, boundaries=bounds)
                if spec_ok(y):
                    yield y

    spec_bits = k + (k - 1) * max(1, math.ceil(math.log2(n)))
    return Decomposition(
        n=n,
        k=k,
        spec_bits=spec_bits,
        block_lengths=lengths,
        spec_ok=spec_ok,
        block_indices=block_indices,
        block_member=block_member,
        block_distance=block_distance,
        enumerate_specs=enumerate_specs,
        honest_spec=lambda f: honest_spec(f, k),
        b=1,
        # overlapping anchored blocks undercount the global distance by up
        # to one flip per boundary; 0.25 holds exhaustively for n <= 12
        c_dec=0.25,
    )


def _minimal_split(f):
    """Boundaries and directions of the minimal alternating monotone split."""
    f = np.asarray(f)
    r = runs(f)
    n = len(f)
    run_starts = [s for s, _ in r] + [n]
    if len(r) == 1:
        # constant: nondecreasing is the budget-cheaper reading
        return [], [NONDECREASING]
    first_dir = NONINCREASING if r[0][1] == 1 else NONDECREASING
    # the first piece absorbs two runs when it can (01 for ND, 10 for NI)
    boundaries = []
    directions = [first_dir]
    for idx in range(2, len(r)):
        boundaries.append(run_starts[idx] - 1)  # last index of run idx-1 (0-based)
        directions.append(1 - directions[-1])
    return boundaries, directions


def pad_spec(n, k, boundaries, directions):
    """Midpoint-split the largest block until there are exactly k blocks."""
    bounds = list(boundaries)
    dirs = list(directions)
    while len(dirs) < k:
        cuts = [0] + bounds + [n - 1]
        sizes = [cuts[i + 1] - cuts[i] + 1 for i in range(len(dirs))]
        order = sorted(range(len(dirs)), key=lambda i: (-sizes[i], i))
        split = next((i for i in order if sizes[i] >= 3), None)
        if split is None:
            raise ConfigurationError(f"cannot pad split to {k} blocks at n={n}")
        mid = (cuts[split] + cuts[split + 1]) // 2
        bounds.insert(split, mid)
        bounds.sort()
        dirs.insert(split, dirs[split])
    return KMonotoneSpec(directions=tuple(dirs), boundaries=tuple(bounds))


def honest_spec(f, k):
    """A valid specification for a k-monotone f, or None."""
    if not is_k_monotone(f, k):
        return None
    boundaries, directions = _minimal_split(f)
    return pad_spec(len(f), k, boundaries, directions)


def sorted_sample_accept_probability(values, direction, samples):
    """Exact acceptance probability of the sampled violation search:
    `samples` iid uniform positions accept iff no sampled 1 precedes a
    sampled 0 (after direction normalisation)."""
    w = np.asarray(values, dtype=np.int8)
    if direction == NONINCREASING:
        w = 1 - w
    m = len(w)
    zeros = (w == 0).astype(np.int64)
    ones = (w == 1).astype(np.int64)
    z_up_to = np.concatenate(([0], np.cumsum(zeros)))  # zeros at positions < t
    o_from = np.concatenate((np.cumsum(ones[::-1])[::-1], [0]))  # ones at positions >= t
    # cut after position t-1: all sampled zeros below, sampled ones above
    sizes = z_up_to + o_from  # |C_t| for t = 0..m
    inter = z_up_to[:-1] + o_from[1:]  # |C_t ∩ C_{t+1}|
    p = (sizes / m) ** samples
    q = (inter / m) ** samples
    return float(p.sum() - q.sum())


def monotone_line_test(oracle, eps, rng, c_mono=8.0, direction=NONDECREASING,
                       indices=None):
    """One-sided sampled monotonicity test: draw ceil(c_mono/eps) uniform
    positions, reject iff some sampled pair violates the direction."""
    if not 0 < eps <= 1:
        raise ConfigurationError(f"proximity {eps} outside (0, 1]")
    idx = np.arange(oracle.n) if indices is None else np.asarray(indices)
    m = len(idx)
    r = math.ceil(c_mono / eps)
    draws = np.sort(rng.integers(0, m, size=r))
    vals = oracle.read_many(idx[draws])
    if direction == NONINCREASING:
        vals = 1 - vals
    seen_one = False
    for v in vals:
        if v == 1:
            seen_one = True
        elif seen_one:
            return False
    return True


def monotone_sub_verifier(c_mono=8.0):
    """Sampled monotonicity tester as a block sub-verifier: q = ceil(c_mono/eps),
    clamped to the exact full read when that is cheaper."""

    def query_budget(m, eps):
        if eps is None:
            return m
        return min(m, math.ceil(c_mono / eps))

    def reject_probability(dec, y, i, values, eps, sub_proof=None):
        m = len(values)
        r = query_budget(m, eps)
        d = y.directions[i]
        if r >= m:
            return 0.0 if is_monotone(values, d) else 1.0
        return 1.0 - sorted_sample_accept_probability(values, d, r)

    def run(dec, y, i, oracle, indices, eps, rng, sub_proof=None):
        m = len(indices)
        r = query_budget(m, eps)
        d = y.directions[i]
        if r >= m:
            return is_monotone(oracle.read_many(indices), d)
        return monotone_line_test(oracle, eps, rng, c_mono=c_mono,
                                  direction=d, indices=indices)

    return SubVerifierSpec(
        name="monotone-sample",
        alpha=0.0,
        beta=1.0,
        query_budget=query_budget,
        reject_probability=reject_probability,
        run=run,
    )


def make_far_input(n, k, eps, rng, max_tries=200):
    """A function at certified distance >= eps from the k-monotone family,
    built by planting alternations and verified with the exact DP."""
    for _ in range(max_tries):
        f = (np.arange(n) // max(1, int(round(1 / (2.2 * eps))))) % 2
        noise = rng.random(n) < 0.5 * eps
        f = np.asarray((f + noise) % 2, dtype=np.uint8)
        if distance_to_k_monotone(f, k) >= eps:
            return f
    raise RuntimeError(f"no certified eps-far input found (n={n}, k={k}, eps={eps})")
