import itertools
import math

import numpy as np
import pytest

from proxlab.bipartite import (BipartiteParams, accept_probability,
                               bipartite_verify, collision_relation,
                               exact_base_rejection, honest_side_proof,
                               run_base_once)
from proxlab.graphs import (gen_bipartite_expander, gen_far_nonbipartite,
                            lazy_walk, walk_seed_bits)
from proxlab.harness import rng_stream


def test_relation_matches_contract_and_is_symmetric():
    outcomes = [(a, b) for a in (0, 1) for b in (0, 1)]
    for x in outcomes:
        for y in outcomes:
            assert collision_relation(x, y) == collision_relation(y, x)
            assert collision_relation(x, y) == (x[0] == 1 and y[0] == 1
                                                and x[1] != y[1])


def test_completeness_exact_no_opposite_parity_pairs():
    # bipartite G, honest one-side S: exhaust 64 fixed seeds from every
    # start vertex; no two walks reach S with different parities
    g = gen_bipartite_expander(12, 3, rng_stream(1, 0))
    proof = honest_side_proof(g, 4)
    in_set = frozenset(proof)
    length = 10
    bits = walk_seed_bits(3, length)
    rng = rng_stream(2, 0)
    seeds = [rng.integers(0, 2, size=bits, dtype=np.uint8) for _ in range(64)]
    for v in range(g.n):
        outcomes = []
        for seed in seeds:
            out = lazy_walk(g.clone(), v, length, seed)
            outcomes.append((1 if out.endpoint in in_set else 0, out.parity))
        for a, b in itertools.combinations(outcomes, 2):
            assert not collision_relation(a, b)


def test_exact_rejection_zero_on_bipartite_with_honest_proof():
    g = gen_bipartite_expander(16, 3, rng_stream(3, 0))
    params = BipartiteParams(eps=0.1, k=4)
    proof = honest_side_proof(g, 4)
    assert exact_base_rejection(g, proof, params) == 0.0


def test_verifier_completeness_always_accepts():
    g = gen_bipartite_expander(64, 3, rng_stream(4, 0))
    params = BipartiteParams(eps=0.125, k=8)
    proof = honest_side_proof(g, 8)
    for t in range(400):
        assert bipartite_verify(g, proof, params, rng_stream(5, t)).accept


def test_executed_base_run_agrees_on_completeness():
    g = gen_bipartite_expander(16, 3, rng_stream(6, 0))
    params = BipartiteParams(eps=0.25, k=4)
    proof = honest_side_proof(g, 4)
    for t in range(20):
        assert run_base_once(g, proof, params, rng_stream(7, t))


def test_far_graph_rejected_for_every_proof():
    g, dist = gen_far_nonbipartite(16, 3, 0.05, rng_stream(8, 0))
    k = 4
    params = BipartiteParams(eps=min(0.05, dist), k=k)
    worst_acc = 0.0
    for proof in itertools.combinations(range(16), k):
        worst_acc = max(worst_acc, accept_probability(g, proof, params))
    assert worst_acc <= 1 / 3
    # Monte Carlo on the worst proof agrees with the exact probability
    best_proof = max(itertools.combinations(range(16), k),
                     key=lambda s: accept_probability(g, s, params))
    hits = sum(bipartite_verify(g, best_proof, params, rng_stream(9, t)).accept
               for t in range(2000))
    assert hits / 2000 == pytest.approx(
        accept_probability(g, best_proof, params), abs=0.03)


def test_malformed_proof_rejected():
    g = gen_bipartite_expander(16, 3, rng_stream(10, 0))
    params = BipartiteParams(eps=0.1, k=4)
    for bad in (None, (1, 2), (1, 1, 2, 3), (0, 1, 2, 99), "abc"):
        assert not bipartite_verify(g, bad, params, rng_stream(11, 0)).accept


def test_counters_reconcile():
    # classical reads of one executed base run stay below the modeled
    # budget (batch walks each probing at most the walk length)
    g = gen_bipartite_expander(16, 3, rng_stream(12, 0))
    params = BipartiteParams(eps=0.25, k=4)
    proof = honest_side_proof(g, 4)
    before_q = g.query_count
    trace = bipartite_verify(g, proof, params, rng_stream(13, 0),
                             execute_base=True)
    t = params.batch_size(16)
    length = params.walk_length(16)
    assert trace.classical_queries == g.query_count - before_q
    assert trace.classical_queries <= t * length
    assert trace.modeled_quantum_queries >= \
        math.ceil(t ** (2 / 3) * 8) * length  # one invocation at least


def test_exact_rejection_matches_sampled_base_runs():
    g, dist = gen_far_nonbipartite(14, 3, 0.03, rng_stream(14, 0))
    params = BipartiteParams(eps=0.03, k=3)
    proof = (0, 1, 2)
    p = exact_base_rejection(g, proof, params)
    rejects = sum(not run_base_once(g, proof, params, rng_stream(15, t))
                  for t in range(400))
    assert rejects / 400 == pytest.approx(p, abs=0.07)
