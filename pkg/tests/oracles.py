"""Independent test oracles.

These deliberately avoid the package's own closed forms: the
amplification oracle is a literal statevector simulation (phase flip on
marked elements, reflection about the uniform state), the combinatorial
oracles are exhaustive enumerations.  Expected values frozen into tests
come from these.
"""

from __future__ import annotations

import itertools

import numpy as np


def statevector_amplified_success(domain_size, marked_count, iterations):
    """Success probability of Grover-style amplification, by explicit
    statevector evolution over `domain_size` elements."""
    n, m = domain_size, marked_count
    if not 0 <= m <= n:
        raise ValueError("marked count outside range")
    state = np.full(n, 1.0 / np.sqrt(n))
    uniform = np.full(n, 1.0 / np.sqrt(n))
    marked = np.zeros(n, dtype=bool)
    marked[:m] = True
    for _ in range(iterations):
        state = np.where(marked, -state, state)  # oracle phase flip
        state = 2.0 * uniform * (uniform @ state) - state  # reflect about start
    return float(np.sum(state[marked] ** 2))


def alternating_from_one_length(f):
    """Longest alternating value subsequence of f that starts at value 1,
    by direct dynamic programming over subsequences."""
    f = list(f)
    best = 0
    # longest alternating subsequence ending at position i with f[i] as last
    ending = [0] * len(f)
    for i, v in enumerate(f):
        cand = 1 if v == 1 else 0
        for j in range(i):
            if ending[j] and f[j] != v:
                cand = max(cand, ending[j] + 1)
        ending[i] = cand
        best = max(best, cand)
    return best


def is_k_monotone_direct(f, k):
    return alternating_from_one_length(f) <= k


def brute_distance_k_monotone(f, k):
    """Min Hamming distance to any k-monotone function by full enumeration."""
    f = list(f)
    n = len(f)
    best = n + 1
    for cand in itertools.product((0, 1), repeat=n):
        if is_k_monotone_direct(cand, k):
            best = min(best, sum(a != b for a, b in zip(cand, f)))
    return best / n


def brute_sorted_sample_accept(values, samples):
    """Exact acceptance probability of the sampled violation search, by
    enumerating every draw tuple."""
    m = len(values)
    good = 0
    for draw in itertools.product(range(m), repeat=samples):
        ordered = sorted(draw)
        seen_one = False
        ok = True
        for pos in ordered:
            if values[pos] == 1:
                seen_one = True
            elif seen_one:
                ok = False
                break
        good += ok
    return good / m ** samples


def brute_monotone_distance_anchored(values, direction):
    """Min flips to a monotone word with the first symbol pinned."""
    vals = list(values)
    m = len(vals)
    best = m + 1
    for cand in itertools.product((0, 1), repeat=m):
        if cand[0] != vals[0]:
            continue
        w = cand if direction == 0 else tuple(1 - c for c in cand)
        if all(w[i] <= w[i + 1] for i in range(m - 1)):
            best = min(best, sum(a != b for a, b in zip(cand, vals)))
    return best / m


def hamming_distance_to_set(x, strings):
    x = np.asarray(x)
    best = None
    for s in strings:
        d = int(np.sum(np.asarray(s) != x))
        best = d if best is None else min(best, d)
    return best
