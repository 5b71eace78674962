import numpy as np
import pytest

from proxlab.oracle import (BitOracle, FieldOracle, FunctionOracle, GraphOracle,
                            OracleIndexError)


def test_bit_read_counts():
    o = BitOracle([0, 1, 1, 0])
    assert o.read(2) == 1
    assert o.query_count == 1
    for i in range(4):
        o.read(i)
    assert o.query_count == 5


def test_read_all_coordinates_counts_n():
    o = BitOracle(np.zeros(17, dtype=np.uint8))
    o.read_many(np.arange(17))
    assert o.query_count == 17


def test_out_of_range_is_hard_error():
    o = BitOracle([0, 1])
    with pytest.raises(OracleIndexError):
        o.read(2)
    with pytest.raises(OracleIndexError):
        o.read_many([0, 5])


def test_field_symbols_cost_two_bits():
    o = FieldOracle([0, 1, 2], q=3)
    o.read(1)
    assert o.query_count == 2
    o.read_many([0, 2])
    assert o.query_count == 6


def test_function_values_cost_log_n_bits():
    o = FunctionOracle(list(range(8)))
    o.read(3)
    assert o.query_count == 3  # ceil(log2 8)


def test_graph_probe_semantics():
    # two left vertices fully joined to four right ones, degree bound 5
    adj = np.full((6, 5), -1, dtype=np.int64)
    adj[0, :4] = [2, 3, 4, 5]
    adj[1, :4] = [2, 3, 4, 5]
    for r in range(2, 6):
        adj[r, :2] = [0, 1]
    o = GraphOracle(adj)
    assert o.read(0, 4) is None  # fifth slot of a degree-4 vertex
    assert o.read(0, 0) == 2
    assert o.query_count == 2


def test_payload_immutable():
    o = BitOracle([0, 1])
    with pytest.raises(ValueError):
        o.bits[0] = 1


def test_clone_shares_payload_fresh_counters():
    o = BitOracle([0, 1, 0])
    o.read(0)
    dup = o.clone()
    assert dup.query_count == 0 and dup.modeled_quantum == 0
    assert dup.read(1) == 1
    assert o.query_count == 1


def test_counters_never_decrease():
    o = BitOracle([1] * 8)
    last = 0
    for i in range(8):
        o.read(i)
        assert o.query_count > last
        last = o.query_count
