import itertools

import numpy as np
import pytest

from proxlab.harness import rng_stream
from proxlab.properties.eulerian import (distance_to_eulerian, edge_index,
                                         eulerian_decomposition, is_eulerian,
                                         orientation_bits, random_eulerian)


def orientation_from_edges(n, directed_edges):
    """directed_edges: list of (tail, head) with tails/heads in
    {'u1','u2'} x right index."""
    bits = np.zeros(orientation_bits(n), dtype=np.uint8)
    for tail, head in directed_edges:
        if tail in ("u1", "u2"):
            left = 0 if tail == "u1" else 1
            bits[edge_index(n, left, head)] = 1
        else:
            left = 0 if head == "u1" else 1
            bits[edge_index(n, left, tail)] = 0
    return bits


def test_hand_built_eulerian_n6():
    # u1->r0, r0->u2, u2->r1, r1->u1, u1->r2, r2->u2, u2->r3, r3->u1
    n = 6
    edges = [("u1", 0), (0, "u2"), ("u2", 1), (1, "u1"),
             ("u1", 2), (2, "u2"), ("u2", 3), (3, "u1")]
    bits = orientation_from_edges(n, edges)
    assert is_eulerian(bits, n)
    dec = eulerian_decomposition(n, 2)
    y = dec.honest_spec(bits)
    assert y is not None and dec.spec_ok(y)
    for i in range(2):
        assert dec.block_member(y, i, dec.block_view(bits, y, i))


def test_all_edges_out_of_u1_is_far():
    n = 8
    bits = np.zeros(orientation_bits(n), dtype=np.uint8)
    bits[: n - 2] = 1  # all u1 edges outgoing
    assert not is_eulerian(bits, n)
    dec = eulerian_decomposition(n, 2)
    for y in dec.enumerate_specs():
        assert not all(dec.block_member(y, i, dec.block_view(bits, y, i))
                       for i in range(2))


def test_membership_equals_degree_check_exhaustive():
    # n=8, k=2: all 2^12 orientations
    n, k = 8, 2
    dec = eulerian_decomposition(n, k)
    specs = list(dec.enumerate_specs())
    for bits_tuple in itertools.product((0, 1), repeat=orientation_bits(n)):
        bits = np.array(bits_tuple, dtype=np.uint8)
        witnessed = any(
            all(dec.block_member(y, i, dec.block_view(bits, y, i))
                for i in range(k))
            for y in specs)
        direct = is_eulerian(bits, n)
        assert witnessed == direct


def test_decomposition_law_exhaustive():
    n, k = 8, 2
    dec = eulerian_decomposition(n, k)
    specs = list(dec.enumerate_specs())
    for bits_tuple in itertools.product((0, 1), repeat=orientation_bits(n)):
        bits = np.array(bits_tuple, dtype=np.uint8)
        eps = distance_to_eulerian(bits, n)
        if eps == 0.0:
            continue
        for y in specs:
            assert dec.mean_block_distance(bits, y) >= dec.c_dec * eps - 1e-12


def test_distance_oracle_matches_brute_force():
    n = 6
    dec_bits = orientation_bits(n)
    eulerians = [np.array(b, dtype=np.uint8)
                 for b in itertools.product((0, 1), repeat=dec_bits)
                 if is_eulerian(np.array(b), n)]
    for bits_tuple in itertools.product((0, 1), repeat=dec_bits):
        bits = np.array(bits_tuple, dtype=np.uint8)
        brute = min(int(np.sum(bits != e)) for e in eulerians) / dec_bits
        assert distance_to_eulerian(bits, n) == pytest.approx(brute)


def test_random_eulerian_is_member():
    for t in range(50):
        bits = random_eulerian(10, rng_stream(1, t))
        assert is_eulerian(bits, 10)


def test_invalid_counts_not_in_spec_set():
    dec = eulerian_decomposition(8, 2)
    assert not dec.spec_ok((4, -1))
    assert not dec.spec_ok((2, 2))  # sums to 4 != 3
    assert dec.spec_ok((2, 1))
