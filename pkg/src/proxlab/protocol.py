"""Verifier framework for proof-aided property testing with quantum speedups.

A decomposable property splits, given an untrusted specification string,
into per-block sub-properties whose distances average to a constant
fraction of the input's distance.  The generic verifier samples a block
proportionally to its length, runs the block's sub-verifier at a guessed
distance scale, and amplifies the combination once per scale level
(precision sampling).

Verdicts are sampled from the exact rejection probability of each
amplified subroutine, which the simulator computes from the payload;
query counters are charged per the amplification cost model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .amplify import (
    AmplifiedRoutine,
    ConfigurationError,
    VerdictTrace,
    run_amplified,
    stage_average_success,
    build_schedule,
)

ProtocolResult = VerdictTrace


def precision_sampling_levels(eps, c_ps=4.0):
    """Distance-scale levels (j, 2^-j, rounds) for unknown per-block distances.

    rounds_j = ceil(c_ps * sqrt(max(1, log2(1/eps)) / (2^j * eps))).
    """
    if not 0 < eps <= 1:
        raise ConfigurationError(f"proximity {eps} outside (0, 1]")
    levels = []
    n_levels = math.ceil(math.log2(1 / eps)) + 1
    log_term = max(1.0, math.log2(1 / eps))
    for j in range(1, n_levels + 1):
        rounds = math.ceil(c_ps * math.sqrt(log_term / (2 ** j * eps)))
        levels.append((j, 2.0 ** -j, rounds))
    return levels


@dataclass
class Decomposition:
    """A property split into k sub-properties selected by a specification.

    block_indices(y, i) gives the input coordinates realising block i
    (b reads per block coordinate, b=1 for every bundled instance);
    block_member / block_distance give exact membership in and relative
    distance to the block's sub-property.  block_lengths is either a
    fixed sequence or a callable of the specification (block boundaries
    may be part of the specification, as for k-monotonicity).
    """

    n: int
    k: int
    spec_bits: int
    block_lengths: object
    spec_ok: Callable
    block_indices: Callable
    block_member: Callable
    block_distance: Callable
    enumerate_specs: Optional[Callable] = None
    honest_spec: Optional[Callable] = None
    b: int = 1
    c_dec: float = 1.0

    def lengths(self, y=None):
        if callable(self.block_lengths):
            return np.asarray(self.block_lengths(y), dtype=np.int64)
        return np.asarray(self.block_lengths, dtype=np.int64)

    def max_block_length(self, y=None):
        if callable(self.block_lengths) and y is None:
            return self.n
        return int(self.lengths(y).max())

    def sampling_weights(self, y=None):
        m = self.lengths(y).astype(float)
        return m / m.sum()

    def block_view(self, payload, y, i):
        return np.asarray(payload)[self.block_indices(y, i)]

    def mean_block_distance(self, payload, y):
        """E_{i<-D}[distance of block i from its sub-property], exactly."""
        w = self.sampling_weights(y)
        return float(sum(
            w[i] * self.block_distance(y, i, self.block_view(payload, y, i))
            for i in range(self.k)
        ))


@dataclass
class SubVerifierSpec:
    """A one-sided tester or proof-aided verifier for the sub-properties.

    query_budget(m, eps) is the per-run read count; reject_probability
    gives the exact per-run rejection rate on a concrete block (0 on
    members); run performs one sampled execution through the oracle.
    Proximity-oblivious sub-verifiers ignore eps in run/reject and
    declare detection(eps, m) instead.
    """

    name: str
    alpha: float
    beta: float
    query_budget: Callable
    reject_probability: Callable  # (dec, y, i, block_values, eps) -> float
    run: Callable  # (dec, y, i, oracle, indices, eps, rng) -> bool
    proof_length: int = 0
    one_sided: bool = True
    proximity_oblivious: bool = False
    detection: Optional[Callable] = None  # rho(eps, m)


def trivial_sub_verifier():
    """Read the whole block and decide membership exactly."""

    def reject_probability(dec, y, i, values, eps, sub_proof=None):
        return 0.0 if dec.block_member(y, i, values) else 1.0

    def run(dec, y, i, oracle, indices, eps, rng, sub_proof=None):
        values = oracle.read_many(indices)
        return dec.block_member(y, i, values)

    return SubVerifierSpec(
        name="trivial",
        alpha=1.0,
        beta=0.0,
        query_budget=lambda m, eps: m,
        reject_probability=reject_probability,
        run=run,
    )


def _payload_array(oracle):
    # ground-truth view used by the exact probability evaluator; uncharged
    for attr in ("bits", "symbols", "table"):
        if hasattr(oracle, attr):
            return getattr(oracle, attr)
    raise TypeError("oracle payload does not expose a flat array")


def parse_proof(proof, dec, sub_proof_len):
    """Split a proof into (spec, sub-proofs); None signals a malformed proof."""
    if not isinstance(proof, tuple) or len(proof) != 2:
        return None
    y, subs = proof
    if sub_proof_len == 0:
        if subs not in ((), None):
            return None
        subs = tuple(None for _ in range(dec.k))
    else:
        if not isinstance(subs, tuple) or len(subs) != dec.k:
            return None
    if not dec.spec_ok(y):
        return None
    return y, tuple(subs)


def _level_gamma_floor(j, eps, c_ps, alpha, beta, m):
    log_term = max(1.0, math.log2(1 / eps))
    gamma = (2.0 ** (j * (1 - beta))) * eps / (c_ps ** 2 * (m ** alpha) * log_term)
    return min(1.0, max(gamma, 1e-300))


def _level_routines(dec, sub, oracle, eps, y, sub_proofs, c_ps, c_amp,
                    proximity_oblivious):
    """One amplified routine per precision-sampling level."""
    payload = _payload_array(oracle)
    weights = dec.sampling_weights(y)
    m_max = dec.max_block_length(y)
    levels = precision_sampling_levels(eps, c_ps)
    routines = []
    for j, eps_j, _rounds in levels:
        if proximity_oblivious:
            gamma = _level_gamma_floor(j, eps, c_ps, sub.alpha, sub.beta, m_max)
            run_eps = None
        else:
            gamma = min(1.0, 2.0 ** j * eps / (c_ps ** 2 * max(1.0, math.log2(1 / eps))))
            run_eps = eps_j
        p_level = 0.0
        for i in range(dec.k):
            block = dec.block_view(payload, y, i)
            p_level += weights[i] * sub.reject_probability(
                dec, y, i, block, run_eps, sub_proofs[i])
        p_level = min(1.0, max(0.0, p_level))
        per_run_queries = dec.b * min(
            m_max, sub.query_budget(m_max, run_eps)) * oracle.bit_cost

        def run_base(rng, _eps=run_eps):
            i = int(rng.choice(dec.k, p=weights))
            indices = dec.block_indices(y, i)
            return sub.run(dec, y, i, oracle, indices, _eps, rng, sub_proofs[i])

        routines.append(AmplifiedRoutine(
            rejection_probability=p_level,
            gamma_floor=gamma,
            cost_multiplier=per_run_queries,
            run_base=run_base,
            c_amp=c_amp,
        ))
    return routines


def _verify_by_levels(dec, sub, oracle, eps, proof, rng, c_ps, c_amp,
                      proximity_oblivious, execute_final):
    proof_bits = dec.spec_bits + dec.k * sub.proof_length
    parsed = parse_proof(proof, dec, sub.proof_length)
    if parsed is None:
        return VerdictTrace(accept=False, classical_queries=0,
                            modeled_quantum_queries=0,
                            proof_bits_consumed=proof_bits)
    y, sub_proofs = parsed
    routines = _level_routines(dec, sub, oracle, eps, y, sub_proofs,
                               c_ps, c_amp, proximity_oblivious)
    accept = True
    classical = 0
    modeled = 0
    for routine in routines:
        t = run_amplified(routine, rng, oracle, execute_final=execute_final)
        accept = accept and t.accept
        classical += t.classical_queries
        modeled += t.modeled_quantum_queries
    return VerdictTrace(accept=accept, classical_queries=classical,
                        modeled_quantum_queries=modeled,
                        proof_bits_consumed=proof_bits)


def decompose_verify(dec, sub, oracle, eps, proof, rng, c_ps=4.0, c_amp=5.0,
                     execute_final=True):
    """Generic verifier for a decomposable property with one-sided sub-verifiers."""
    return _verify_by_levels(dec, sub, oracle, eps, proof, rng, c_ps, c_amp,
                             proximity_oblivious=False,
                             execute_final=execute_final)


def decompose_verify_po(dec, sub, oracle, eps, proof, rng, c_ps=4.0, c_amp=5.0,
                        execute_final=True):
    """Variant for proximity-oblivious sub-verifiers: the sampled subroutine is
    amplified against the floor 2^(j(1-beta)) * eps / (c^2 m^alpha log(1/eps))."""
    if not sub.proximity_oblivious:
        raise ConfigurationError("sub-verifier is not proximity-oblivious")
    return _verify_by_levels(dec, sub, oracle, eps, proof, rng, c_ps, c_amp,
                             proximity_oblivious=True,
                             execute_final=execute_final)


def accept_probability(dec, sub, oracle, eps, proof, c_ps=4.0, c_amp=5.0,
                       proximity_oblivious=False):
    """Exact acceptance probability over all of the verifier's randomness."""
    parsed = parse_proof(proof, dec, sub.proof_length)
    if parsed is None:
        return 0.0
    y, sub_proofs = parsed
    routines = _level_routines(dec, sub, oracle, eps, y, sub_proofs,
                               c_ps, c_amp, proximity_oblivious)
    acc = 1.0
    for routine in routines:
        for cap in routine.schedule:
            acc *= 1.0 - stage_average_success(routine.rejection_probability, cap)
    return acc


def query_budget_bound(dec, sub, eps, bit_cost=1, c_ps=4.0, c_amp=5.0,
                       proximity_oblivious=False):
    """Closed-form worst-case query bound of the level verifier with the
    declared constants; runs never exceed it."""
    m_max = dec.max_block_length()
    total = 0
    for j, eps_j, _ in precision_sampling_levels(eps, c_ps):
        if proximity_oblivious:
            gamma = _level_gamma_floor(j, eps, c_ps, sub.alpha, sub.beta, m_max)
            run_eps = None
        else:
            gamma = min(1.0, 2.0 ** j * eps / (c_ps ** 2 * max(1.0, math.log2(1 / eps))))
            run_eps = eps_j
        invocations = sum(2 * (c - 1) + 1 for c in build_schedule(gamma, c_amp))
        per_run = dec.b * min(m_max, sub.query_budget(m_max, run_eps)) * bit_cost
        total += invocations * per_run
    return total


def exact_decide(dec, oracle, proof, rng, c_amp=5.0, execute_final=True):
    """Exact-decision verifier: sample a uniform block, read it whole, check
    membership; amplified against the floor 1/k."""
    proof_bits = dec.spec_bits
    y = proof
    if not dec.spec_ok(y):
        return VerdictTrace(accept=False, classical_queries=0,
                            modeled_quantum_queries=0,
                            proof_bits_consumed=proof_bits)
    payload = _payload_array(oracle)
    bad = sum(
        0 if dec.block_member(y, i, dec.block_view(payload, y, i)) else 1
        for i in range(dec.k)
    )
    p = bad / dec.k
    m_max = dec.max_block_length(y)

    def run_base(rng_):
        i = int(rng_.integers(dec.k))
        values = oracle.read_many(dec.block_indices(y, i))
        return dec.block_member(y, i, values)

    routine = AmplifiedRoutine(
        rejection_probability=p,
        gamma_floor=1.0 / dec.k,
        cost_multiplier=dec.b * m_max * oracle.bit_cost,
        run_base=run_base,
        c_amp=c_amp,
    )
    t = run_amplified(routine, rng, oracle, execute_final=execute_final)
    t.proof_bits_consumed = proof_bits
    return t


def exact_decide_accept_probability(dec, oracle, proof, c_amp=5.0):
    if not dec.spec_ok(proof):
        return 0.0
    payload = _payload_array(oracle)
    bad = sum(
        0 if dec.block_member(proof, i, dec.block_view(payload, proof, i)) else 1
        for i in range(dec.k)
    )
    p = bad / dec.k
    acc = 1.0
    for cap in build_schedule(1.0 / dec.k, c_amp):
        acc *= 1.0 - stage_average_success(p, cap)
    return acc


@dataclass
class POMap:
    """A whole-input proximity-oblivious proof-aided tester.

    detection(eps) is the promised rejection floor on eps-far inputs;
    reject_probability(oracle, proof) the exact per-run rejection rate
    (uncharged, simulator view); run one sampled execution (charged).
    """

    proof_length: int
    queries_per_run: int
    detection: Callable
    reject_probability: Callable
    run: Callable
    bit_cost: int = 1


def pomap_speedup(pomap, eps, c_amp=5.0):
    """Wrap a one-sided proximity-oblivious verifier in amplitude
    amplification with floor rho(eps), reusing the same proof."""
    rho = pomap.detection(eps)
    if rho <= 0:
        raise ConfigurationError(f"detection floor {rho} must be positive")

    def verify(oracle, proof, rng, execute_final=True):
        p = pomap.reject_probability(oracle, proof)
        routine = AmplifiedRoutine(
            rejection_probability=p,
            gamma_floor=min(1.0, rho),
            cost_multiplier=pomap.queries_per_run * pomap.bit_cost,
            run_base=lambda r: pomap.run(oracle, proof, r),
            c_amp=c_amp,
        )
        t = run_amplified(routine, rng, oracle, execute_final=execute_final)
        t.proof_bits_consumed = pomap.proof_length
        return t

    return verify


def pomap_accept_probability(pomap, eps, oracle, proof, c_amp=5.0):
    p = pomap.reject_probability(oracle, proof)
    acc = 1.0
    for cap in build_schedule(min(1.0, pomap.detection(eps)), c_amp):
        acc *= 1.0 - stage_average_success(p, cap)
    return acc
