"""Behavioural simulation of collision finding under a symmetric relation.

The searcher scans the whole seed domain (evaluating the map once per
seed), then reports a related pair with fixed probability when one
exists and never reports a pair when none does.  The modeled quantum
cost charged is ceil(c_col * |T|^(2/3) * (log2 |Y|)^polylog_exp) map
evaluations, converted to oracle queries at the map's declared
per-evaluation cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

DETECTION_RATE = 0.75  # >= 2/3 contract, kept above the bar for test margins


@dataclass
class CollisionInstance:
    domain: Sequence
    map_fn: Callable
    relation: Callable
    eval_cost: float = 1.0  # oracle queries per map evaluation
    y_bits: int = 2  # ceil(log2 |Y|)


def modeled_collision_cost(domain_size, y_bits, c_col=1.0, polylog_exp=3):
    if domain_size < 1:
        raise ValueError("domain must be nonempty")
    return math.ceil(c_col * domain_size ** (2 / 3) * max(1, y_bits) ** polylog_exp)


def find_collision(inst, rng, oracle=None, c_col=1.0, polylog_exp=3,
                   detection=DETECTION_RATE):
    """Return ((seed, seed) or None, modeled query cost).

    Deterministically returns None when no related pair exists; when one
    does, the first pair in canonical scan order is reported with the
    configured detection probability.
    """
    evals = modeled_collision_cost(len(inst.domain), inst.y_bits, c_col, polylog_exp)
    modeled = math.ceil(evals * inst.eval_cost)
    if oracle is not None:
        oracle.charge_modeled(modeled)
    images = [inst.map_fn(t) for t in inst.domain]
    hit = None
    for a in range(len(images)):
        for b in range(a + 1, len(images)):
            if inst.relation(images[a], images[b]):
                hit = (inst.domain[a], inst.domain[b])
                break
        if hit is not None:
            break
    if hit is None:
        return None, modeled
    if rng.random() < detection:
        return hit, modeled
    return None, modeled
