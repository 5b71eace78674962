"""Oracle access with exact query accounting.

Every verifier in this package reads its input exclusively through a
counting oracle.  A read of one coordinate charges the per-symbol bit
cost of the payload type:

* bit strings: 1 bit-query per coordinate,
* strings over F_q: ceil(log2 q) bit-queries per symbol (2 for F_3),
* function tables [n] -> [n]: ceil(log2 n) bit-queries per value,
* bounded-degree adjacency lists: 1 query per (vertex, slot) probe.

Modeled quantum queries are charged separately by the amplification and
collision-finding wrappers; the oracle only stores the counter.
"""

from __future__ import annotations

import math

import numpy as np


class OracleIndexError(IndexError):
    """Out-of-range coordinate: a programming bug, never a protocol verdict."""


class CountingOracle:
    """Base class: immutable payload plus two monotone counters."""

    def __init__(self):
        self.query_count = 0
        self.modeled_quantum = 0

    def charge(self, n_reads, cost_per_read=None):
        cost = self.bit_cost if cost_per_read is None else cost_per_read
        self.query_count += int(n_reads) * int(cost)

    def charge_modeled(self, amount):
        self.modeled_quantum += int(math.ceil(amount))

    def reset_counters(self):
        self.query_count = 0
        self.modeled_quantum = 0

    def clone(self):
        """Fresh counters over the same (shared, read-only) payload."""
        dup = object.__new__(type(self))
        dup.__dict__.update(self.__dict__)
        dup.query_count = 0
        dup.modeled_quantum = 0
        return dup


class BitOracle(CountingOracle):
    """Oracle for x in {0,1}^n."""

    bit_cost = 1

    def __init__(self, bits):
        super().__init__()
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 1 or not np.isin(arr, (0, 1)).all():
            raise ValueError("payload must be a flat 0/1 string")
        arr.flags.writeable = False
        self.bits = arr
        self.n = len(arr)

    def read(self, i):
        if not 0 <= i < self.n:
            raise OracleIndexError(f"index {i} out of range [0, {self.n})")
        self.charge(1)
        return int(self.bits[i])

    def read_many(self, indices):
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.n):
            raise OracleIndexError("index out of range")
        self.charge(idx.size)
        return self.bits[idx]


class FieldOracle(CountingOracle):
    """Oracle for w in F_q^n with q a small prime (default 3)."""

    def __init__(self, symbols, q=3):
        super().__init__()
        arr = np.asarray(symbols, dtype=np.int64)
        if arr.ndim != 1 or arr.min(initial=0) < 0 or arr.max(initial=0) >= q:
            raise ValueError(f"symbols must lie in [0, {q})")
        arr.flags.writeable = False
        self.symbols = arr
        self.q = q
        self.n = len(arr)
        self.bit_cost = max(1, math.ceil(math.log2(q)))

    def read(self, i):
        if not 0 <= i < self.n:
            raise OracleIndexError(f"index {i} out of range [0, {self.n})")
        self.charge(1)
        return int(self.symbols[i])

    def read_many(self, indices):
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.n):
            raise OracleIndexError("index out of range")
        self.charge(idx.size)
        return self.symbols[idx]


class FunctionOracle(CountingOracle):
    """Oracle for a table f: [n] -> [n]; one read costs ceil(log2 n) bits."""

    def __init__(self, table):
        super().__init__()
        arr = np.asarray(table, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("table must be flat")
        arr.flags.writeable = False
        self.table = arr
        self.n = len(arr)
        self.bit_cost = max(1, math.ceil(math.log2(max(2, self.n))))

    def read(self, i):
        if not 0 <= i < self.n:
            raise OracleIndexError(f"index {i} out of range [0, {self.n})")
        self.charge(1)
        return int(self.table[i])


class GraphOracle(CountingOracle):
    """Bounded-degree adjacency-list oracle: (v, slot) -> neighbour or None.

    The adjacency is stored as an n x d integer array with -1 for empty
    slots.  Probing any slot, empty or not, costs one query.
    """

    bit_cost = 1

    def __init__(self, adjacency):
        super().__init__()
        arr = np.asarray(adjacency, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("adjacency must be an n x d array (-1 = no neighbour)")
        arr.flags.writeable = False
        self.adjacency = arr
        self.n, self.degree_bound = arr.shape

    def read(self, v, slot):
        if not (0 <= v < self.n and 0 <= slot < self.degree_bound):
            raise OracleIndexError(f"probe ({v}, {slot}) out of range")
        self.charge(1)
        w = int(self.adjacency[v, slot])
        return None if w < 0 else w
