"""Even parity of a bit string as a block-decomposable property.

The specification is a k-bit string of even parity claiming the parity
of each contiguous block; a string has even parity iff some valid
specification matches every block.  Block sizes are balanced (they
differ by at most one) so the worst-case block read stays near n/k.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..amplify import ConfigurationError
from ..protocol import Decomposition


def _block_bounds(n, k):
    """Balanced contiguous blocks: sizes differ by at most one."""
    base, extra = divmod(n, k)
    bounds = [0]
    for i in range(k):
        bounds.append(bounds[-1] + base + (1 if i < extra else 0))
    return bounds


def block_parities(x, n, k):
    bounds = _block_bounds(n, k)
    x = np.asarray(x, dtype=np.uint8)
    sums = np.add.reduceat(x.astype(np.int64), bounds[:-1])
    return tuple(int(s) & 1 for s in sums)


def parity_decomposition(n, k):
    if not 1 <= k <= n:
        raise ConfigurationError(f"need 1 <= k <= n, got k={k}, n={n}")
    bounds = _block_bounds(n, k)
    lengths = [bounds[i + 1] - bounds[i] for i in range(k)]
    index_arrays = [np.arange(bounds[i], bounds[i + 1]) for i in range(k)]

    def spec_ok(y):
        if not isinstance(y, tuple) or len(y) != k:
            return False
        if any(b not in (0, 1) for b in y):
            return False
        return sum(y) % 2 == 0

    def block_member(y, i, values):
        return int(np.sum(values)) % 2 == y[i]

    def block_distance(y, i, values):
        # one flip fixes a block's parity
        return 0.0 if block_member(y, i, values) else 1.0 / lengths[i]

    def enumerate_specs():
        for bits in itertools.product((0, 1), repeat=k - 1):
            yield bits + (sum(bits) % 2,)

    def honest_spec(x):
        return block_parities(x, n, k)

    return Decomposition(
        n=n,
        k=k,
        spec_bits=k,
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


def is_even_parity(x):
    return int(np.sum(np.asarray(x, dtype=np.int64))) % 2 == 0


def distance_to_even_parity(x):
    """Exact relative distance of x from the even-parity strings."""
    n = len(x)
    return 0.0 if is_even_parity(x) else 1.0 / n
