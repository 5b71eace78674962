import numpy as np

from proxlab.collision import (CollisionInstance, find_collision,
                               modeled_collision_cost)
from proxlab.harness import rng_stream


def pair_relation(a, b):
    return a[0] == 1 and b[0] == 1 and a[1] != b[1]


def test_constant_map_never_collides():
    inst = CollisionInstance(domain=list(range(10)),
                             map_fn=lambda t: (1, 0),
                             relation=lambda a, b: a[1] != b[1])
    for t in range(100):
        pair, _ = find_collision(inst, rng_stream(1, t))
        assert pair is None


def test_unique_collision_found_often():
    inst = CollisionInstance(domain=["t1", "t2"],
                             map_fn=lambda t: (1, 0) if t == "t1" else (1, 1),
                             relation=pair_relation)
    hits = 0
    trials = 2000
    for t in range(trials):
        pair, _ = find_collision(inst, rng_stream(2, t))
        if pair is not None:
            assert pair == ("t1", "t2")
            hits += 1
    phat = hits / trials
    low = phat - 1.96 * np.sqrt(phat * (1 - phat) / trials)
    assert low >= 2 / 3


def test_planted_pair_detection_rate():
    rng = rng_stream(3, 0)
    domain = list(range(256))
    values = [(0, int(b)) for b in rng.integers(0, 2, size=256)]
    values[17] = (1, 0)
    values[200] = (1, 1)
    inst = CollisionInstance(domain=domain, map_fn=lambda t: values[t],
                             relation=pair_relation)
    # ground truth by exhaustive scan
    truth = [(a, b) for a in domain for b in domain
             if a < b and pair_relation(values[a], values[b])]
    assert truth == [(17, 200)]
    hits = 0
    trials = 2000
    for t in range(trials):
        pair, _ = find_collision(inst, rng_stream(4, t))
        if pair is not None:
            assert pair_relation(values[pair[0]], values[pair[1]])
            hits += 1
    phat = hits / trials
    low = phat - 1.96 * np.sqrt(phat * (1 - phat) / trials)
    assert low >= 2 / 3


def test_no_false_positives():
    rng = rng_stream(5, 0)
    values = [(0, int(b)) for b in rng.integers(0, 2, size=64)]
    inst = CollisionInstance(domain=list(range(64)), map_fn=lambda t: values[t],
                             relation=pair_relation)
    for t in range(500):
        pair, _ = find_collision(inst, rng_stream(6, t))
        assert pair is None


def test_modeled_cost_monotone_in_domain_size():
    costs = [modeled_collision_cost(t, y_bits=2) for t in range(1, 400)]
    assert all(a <= b for a, b in zip(costs, costs[1:]))


def test_modeled_cost_formula():
    assert modeled_collision_cost(64, y_bits=2, c_col=1.0, polylog_exp=3) == \
        int(np.ceil(64 ** (2 / 3) * 8))


def test_charges_modeled_queries_to_oracle():
    from proxlab.oracle import BitOracle
    oracle = BitOracle([0, 1])
    inst = CollisionInstance(domain=list(range(27)), map_fn=lambda t: (0, 0),
                             relation=pair_relation, eval_cost=5)
    _, cost = find_collision(inst, rng_stream(7, 0), oracle=oracle)
    assert oracle.modeled_quantum == cost == int(np.ceil(27 ** (2 / 3) * 8)) * 5
