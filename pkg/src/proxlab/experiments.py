"""Protocol builders: bind a generated input to a verifier and expose its
proof space to the harness.

Each builder returns (VerifierInstance, info).  Inputs are generated
from the run's master seed; soundness inputs carry an exactly certified
distance in info["distance"].  Runners memoise the per-proof amplified
routines so repeated trials only pay for schedule draws.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .amplify import ConfigurationError, run_amplified
from .bipartite import BipartiteParams, accept_probability as bip_accept, \
    bipartite_verify, honest_side_proof
from .codes import booleanity_accept_probability, booleanity_verify, \
    distance_to_code, hadamard_code, hadamard_encode, random_far_word
from .graphs import gen_bipartite_expander, gen_far_nonbipartite
from .harness import VerifierInstance, rng_stream
from .oracle import BitOracle, FieldOracle
from .properties.branching import LayeredBP, distance_to_accepted, \
    honest_boundary_proof, robp_pomap, template_bp
from .properties.eulerian import distance_to_eulerian, eulerian_decomposition, \
    random_eulerian
from .properties.kmonotone import is_k_monotone, kmonotone_decomposition, \
    make_far_input, monotone_sub_verifier, KMonotoneSpec
from .properties.parity import parity_decomposition
from .protocol import _level_routines, exact_decide_accept_probability, \
    accept_probability as dec_accept_probability, parse_proof, \
    pomap_accept_probability, pomap_speedup
from .amplify import AmplifiedRoutine, VerdictTrace, build_schedule


def _cached_exact_decide(dec, oracle, c_amp):
    from .protocol import _payload_array
    payload = _payload_array(oracle)
    cache = {}

    def run(proof, rng):
        routine = cache.get(proof, "miss")
        if routine == "miss":
            if not dec.spec_ok(proof):
                routine = None
            else:
                bad = sum(
                    0 if dec.block_member(proof, i, dec.block_view(payload, proof, i))
                    else 1 for i in range(dec.k))
                m_max = dec.max_block_length(proof)

                def run_base(rng_, _proof=proof):
                    i = int(rng_.integers(dec.k))
                    vals = oracle.read_many(dec.block_indices(_proof, i))
                    return dec.block_member(_proof, i, vals)

                routine = AmplifiedRoutine(
                    rejection_probability=bad / dec.k,
                    gamma_floor=1.0 / dec.k,
                    cost_multiplier=dec.b * m_max * oracle.bit_cost,
                    run_base=run_base,
                    c_amp=c_amp,
                )
            cache[proof] = routine
        if routine is None:
            return VerdictTrace(accept=False, classical_queries=0,
                                modeled_quantum_queries=0,
                                proof_bits_consumed=dec.spec_bits)
        t = run_amplified(routine, rng, oracle, execute_final=True)
        t.proof_bits_consumed = dec.spec_bits
        return t

    return run


def _cached_decompose(dec, sub, oracle, eps, c_ps, c_amp, proximity_oblivious):
    cache = {}

    def run(proof, rng):
        routines = cache.get(proof, "miss")
        if routines == "miss":
            parsed = parse_proof(proof, dec, sub.proof_length)
            if parsed is None:
                routines = None
            else:
                y, sub_proofs = parsed
                routines = _level_routines(dec, sub, oracle, eps, y, sub_proofs,
                                           c_ps, c_amp, proximity_oblivious)
            cache[proof] = routines
        proof_bits = dec.spec_bits + dec.k * sub.proof_length
        if routines is None:
            return VerdictTrace(accept=False, classical_queries=0,
                                modeled_quantum_queries=0,
                                proof_bits_consumed=proof_bits)
        accept = True
        classical = 0
        modeled = 0
        for routine in routines:
            t = run_amplified(routine, rng, oracle, execute_final=True)
            accept = accept and t.accept
            classical += t.classical_queries
            modeled += t.modeled_quantum_queries
        return VerdictTrace(accept=accept, classical_queries=classical,
                            modeled_quantum_queries=modeled,
                            proof_bits_consumed=proof_bits)

    return run


# ---------------------------------------------------------------------------
# parity


def _random_parity_input(n, parity, rng):
    x = rng.integers(0, 2, size=n, dtype=np.uint8)
    if int(x.sum()) % 2 != parity:
        x[int(rng.integers(n))] ^= 1
    return x


def build_parity(config):
    n = config.n
    k = config.k or max(1, math.ceil(n ** (2 / 3)))
    gen = rng_stream(config.seed, 0)
    member = config.input == "member"
    x = _random_parity_input(n, 0 if member else 1, gen)
    dec = parity_decomposition(n, k)
    oracle = BitOracle(x)
    c_amp = config.constants["c_amp"]

    # acceptance depends only on the number of mismatched blocks
    from .properties.parity import block_parities
    from .amplify import stage_average_success
    true_parities = block_parities(x, n, k)
    schedule = build_schedule(1.0 / k, c_amp)
    acc_by_bad = {}

    def accept_probability(proof):
        if not dec.spec_ok(proof):
            return 0.0
        bad = sum(a != b for a, b in zip(true_parities, proof))
        if bad not in acc_by_bad:
            acc = 1.0
            for cap in schedule:
                acc *= 1.0 - stage_average_success(bad / k, cap)
            acc_by_bad[bad] = acc
        return acc_by_bad[bad]

    def random_proof(rng):
        bits = rng.integers(0, 2, size=k - 1)
        return tuple(int(b) for b in bits) + (int(bits.sum()) % 2,)

    def mutate(proof, rng):
        i, j = rng.choice(k, size=2, replace=False)
        out = list(proof)
        out[int(i)] ^= 1
        out[int(j)] ^= 1
        return tuple(out)

    verifier = VerifierInstance(
        run=_cached_exact_decide(dec, oracle, c_amp),
        honest_proof=dec.honest_spec(x) if member else None,
        accept_probability=accept_probability,
        proof_space=dec.enumerate_specs,
        proof_count=2 ** (k - 1),
        random_proof=random_proof,
        mutate_proof=mutate,
        proof_bits=dec.spec_bits,
    )
    info = {"x": x, "dec": dec, "oracle": oracle, "k": k,
            "distance": 0.0 if member else 1.0 / n}
    return verifier, info


# ---------------------------------------------------------------------------
# k-monotonicity


def _random_k_monotone(n, k, rng):
    while True:
        n_pieces = int(rng.integers(1, k + 1))
        if n_pieces > 1:
            cuts = np.sort(rng.choice(np.arange(1, n), size=n_pieces - 1,
                                      replace=False))
        else:
            cuts = np.array([], dtype=np.int64)
        bounds = np.concatenate(([0], cuts, [n]))
        f = np.zeros(n, dtype=np.uint8)
        direction = 0
        for i in range(n_pieces):
            a, b = int(bounds[i]), int(bounds[i + 1])
            width = b - a
            split = int(rng.integers(width + 1))
            if direction == 0:
                f[a:a + width - split] = 0
                f[a + width - split:b] = 1
            else:
                f[a:a + split] = 1
                f[a + split:b] = 0
            direction ^= 1
        if is_k_monotone(f, k):
            return f


def build_kmono(config):
    n, k, eps = config.n, config.k or 4, config.eps
    gen = rng_stream(config.seed, 0)
    member = config.input == "member"
    if member:
        f = _random_k_monotone(n, k, gen)
        distance = 0.0
    else:
        from .properties.kmonotone import distance_to_k_monotone
        f = make_far_input(n, k, eps, gen)
        distance = distance_to_k_monotone(f, k)
    dec = kmonotone_decomposition(n, k)
    sub = monotone_sub_verifier(config.constants["c_mono"])
    oracle = BitOracle(f)
    c_ps, c_amp = config.constants["c_ps"], config.constants["c_amp"]

    def random_proof(rng):
        bounds = tuple(int(v) for v in np.sort(
            rng.choice(np.arange(1, n - 1), size=k - 1, replace=False)))
        for _ in range(64):
            dirs = tuple(int(b) for b in rng.integers(0, 2, size=k))
            y = KMonotoneSpec(directions=dirs, boundaries=bounds)
            if dec.spec_ok(y):
                return (y, ())
        return ((KMonotoneSpec(directions=(0,) * k, boundaries=bounds)), ())

    def mutate(proof, rng):
        y, _ = proof
        for _ in range(64):
            dirs = list(y.directions)
            bounds = list(y.boundaries)
            if rng.random() < 0.5 or not bounds:
                i = int(rng.integers(len(dirs)))
                dirs[i] ^= 1
            else:
                i = int(rng.integers(len(bounds)))
                shift = int(rng.integers(1, max(2, n // 8)))
                bounds[i] += shift if rng.random() < 0.5 else -shift
                bounds = sorted(set(np.clip(bounds, 1, n - 2).tolist()))
                while len(bounds) < k - 1:
                    cand = int(rng.integers(1, n - 1))
                    if cand not in bounds:
                        bounds.append(cand)
                        bounds.sort()
            cand = KMonotoneSpec(directions=tuple(dirs), boundaries=tuple(bounds))
            if dec.spec_ok(cand):
                return (cand, ())
        return proof

    verifier = VerifierInstance(
        run=_cached_decompose(dec, sub, oracle, eps, c_ps, c_amp, False),
        honest_proof=(dec.honest_spec(f), ()) if member else None,
        accept_probability=lambda proof: dec_accept_probability(
            dec, sub, oracle, eps, proof, c_ps, c_amp),
        proof_space=lambda: ((y, ()) for y in dec.enumerate_specs()),
        proof_count=None,
        random_proof=random_proof,
        mutate_proof=mutate,
        proof_bits=dec.spec_bits,
    )
    info = {"f": f, "dec": dec, "sub": sub, "oracle": oracle, "k": k,
            "distance": distance}
    return verifier, info


# ---------------------------------------------------------------------------
# layered branching programs (exact decision)


def build_layeredbp(config):
    n = config.n
    k = config.k or max(1, math.ceil(n ** (2 / 3)))
    gen = rng_stream(config.seed, 0)
    bp = template_bp(n, gen)
    member = config.input == "member"
    x = _accepted_input(bp, gen) if member else _far_bp_input(bp, config.eps, gen)
    dec = bp_decomposition_cached(bp, k)
    oracle = BitOracle(x)
    c_amp = config.constants["c_amp"]

    def random_proof(rng):
        nodes = []
        cuts_sizes = [dec_layer_size(bp, dec, i) for i in range(k)]
        for i, size in enumerate(cuts_sizes):
            nodes.append(int(rng.integers(size)))
        acc = sorted(bp.accepting)
        nodes[-1] = int(acc[int(rng.integers(len(acc)))])
        return tuple(nodes)

    def mutate(proof, rng):
        out = list(proof)
        i = int(rng.integers(k))
        size = dec_layer_size(bp, dec, i)
        if i == k - 1:
            acc = sorted(bp.accepting)
            out[i] = int(acc[int(rng.integers(len(acc)))])
        else:
            out[i] = int(rng.integers(size))
        return tuple(out)

    verifier = VerifierInstance(
        run=_cached_exact_decide(dec, oracle, c_amp),
        honest_proof=dec.honest_spec(x) if member else None,
        accept_probability=lambda proof: exact_decide_accept_probability(
            dec, oracle, proof, c_amp),
        proof_space=dec.enumerate_specs,
        proof_count=_bp_proof_count(bp, dec, k),
        random_proof=random_proof,
        mutate_proof=mutate,
        proof_bits=dec.spec_bits,
    )
    info = {"x": x, "bp": bp, "dec": dec, "oracle": oracle, "k": k,
            "distance": 0.0 if member else distance_to_accepted(bp, x)}
    return verifier, info


# ---------------------------------------------------------------------------
# read-once BP with the proximity-oblivious segment verifier


def build_robp(config):
    n = config.n
    k = config.k or 32
    eps = config.eps
    gen = rng_stream(config.seed, 0)
    bp = template_bp(n, gen)
    member = config.input == "member"
    x = _accepted_input(bp, gen) if member else _far_bp_input(bp, eps, gen)
    oracle = BitOracle(x)
    pomap = robp_pomap(bp, k)
    verify = pomap_speedup(pomap, eps, c_amp=config.constants["c_amp"])

    def run(proof, rng):
        return verify(oracle, proof, rng)

    def random_proof(rng):
        nodes = [int(v) for v in rng.integers(0, bp.width, size=k)]
        acc = sorted(bp.accepting)
        nodes[-1] = int(acc[int(rng.integers(len(acc)))])
        return tuple(nodes)

    def mutate(proof, rng):
        out = list(proof)
        i = int(rng.integers(k))
        if i == k - 1:
            acc = sorted(bp.accepting)
            out[i] = int(acc[int(rng.integers(len(acc)))])
        else:
            out[i] = int(rng.integers(bp.width))
        return tuple(out)

    verifier = VerifierInstance(
        run=run,
        honest_proof=honest_boundary_proof(bp, k, x) if member else None,
        accept_probability=lambda proof: pomap_accept_probability(
            pomap, eps, oracle, proof, config.constants["c_amp"]),
        proof_space=None,
        proof_count=None,
        random_proof=random_proof,
        mutate_proof=mutate,
        proof_bits=pomap.proof_length,
    )
    info = {"x": x, "bp": bp, "pomap": pomap, "oracle": oracle, "k": k,
            "distance": 0.0 if member else distance_to_accepted(bp, x)}
    return verifier, info


# ---------------------------------------------------------------------------
# Eulerian orientations


def build_eulerian(config):
    n = config.n
    k = config.k or 2
    gen = rng_stream(config.seed, 0)
    member = config.input == "member"
    if member:
        bits = random_eulerian(n, gen)
        distance = 0.0
    else:
        bits, distance = _far_orientation(n, config.eps, gen)
    dec = eulerian_decomposition(n, k)
    oracle = BitOracle(bits)
    c_amp = config.constants["c_amp"]
    r = n - 2
    sizes = [len(dec.block_indices(None, i)) // 2 for i in range(k)]

    def random_proof(rng):
        while True:
            cuts = [int(rng.integers(s + 1)) for s in sizes[:-1]]
            last = r // 2 - sum(cuts)
            if 0 <= last <= sizes[-1]:
                return tuple(cuts) + (last,)

    def mutate(proof, rng):
        out = list(proof)
        i, j = rng.choice(k, size=2, replace=False)
        i, j = int(i), int(j)
        if out[i] < sizes[i] and out[j] > 0:
            out[i] += 1
            out[j] -= 1
        return tuple(out)

    verifier = VerifierInstance(
        run=_cached_exact_decide(dec, oracle, c_amp),
        honest_proof=dec.honest_spec(bits) if member else None,
        accept_probability=lambda proof: exact_decide_accept_probability(
            dec, oracle, proof, c_amp),
        proof_space=dec.enumerate_specs,
        proof_count=sum(1 for _ in dec.enumerate_specs()),
        random_proof=random_proof,
        mutate_proof=mutate,
        proof_bits=dec.spec_bits,
    )
    info = {"bits": bits, "dec": dec, "oracle": oracle, "k": k,
            "distance": distance}
    return verifier, info


def _far_orientation(n, eps, rng, max_tries=200):
    for _ in range(max_tries):
        bits = rng.integers(0, 2, size=2 * (n - 2), dtype=np.uint8)
        d = distance_to_eulerian(bits, n)
        if d >= eps:
            return bits, d
    raise RuntimeError(f"no eps-far orientation found (n={n}, eps={eps})")


# ---------------------------------------------------------------------------
# Booleanity of encoded messages


def build_booleanity(config):
    k_msg = config.msg_len
    eps = config.eps
    gen = rng_stream(config.seed, 0)
    code = hadamard_code(k_msg, q=3)
    mode = config.input  # member | boolean | farword
    if mode == "member":
        z = np.array([int(v) for v in gen.integers(0, 3, size=k_msg)])
        z[int(gen.integers(k_msg))] = 2
        word = code.encode(z)
        distance = 0.0
        honest = int(np.flatnonzero(z == 2)[0])
    elif mode == "boolean":
        z = np.array([int(v) for v in gen.integers(0, 2, size=k_msg)])
        word = code.encode(z)
        distance = None  # far from the sub-code of non-Boolean messages
        honest = None
    elif mode == "farword":
        word = random_far_word(code, eps, gen)
        distance = distance_to_code(word, code)
        honest = None
    else:
        raise ConfigurationError(f"unknown booleanity input mode: {mode}")
    oracle = FieldOracle(word, q=3)
    c_blr = config.constants["c_blr"]

    def run(proof, rng):
        return booleanity_verify(oracle, proof, eps, rng, k_msg, q=3, c_blr=c_blr)

    verifier = VerifierInstance(
        run=run,
        honest_proof=honest,
        accept_probability=lambda proof: booleanity_accept_probability(
            word, proof, eps, k_msg, q=3, c_blr=c_blr),
        proof_space=lambda: iter(range(k_msg)),
        proof_count=k_msg,
        random_proof=lambda rng: int(rng.integers(k_msg)),
        mutate_proof=lambda proof, rng: int(rng.integers(k_msg)),
        proof_bits=max(1, math.ceil(math.log2(max(2, k_msg)))),
    )
    info = {"word": word, "code": code, "oracle": oracle, "distance": distance}
    return verifier, info


# ---------------------------------------------------------------------------
# bipartiteness


def build_bipartite(config):
    n = config.n
    k = config.k or max(1, n // 8)
    gen = rng_stream(config.seed, 0)
    params = BipartiteParams(
        eps=config.eps, k=k,
        c_t=config.constants["c_t"], c_gamma=config.constants["c_gamma"],
        c_mix=config.constants["c_mix"], c_col=config.constants["c_col"],
        c_amp=config.constants["c_amp"])
    member = config.input == "member"
    if member:
        graph = gen_bipartite_expander(n, config.degree, gen, params.c_mix)
        distance = 0.0
        honest = honest_side_proof(graph, k)
    else:
        graph, distance = gen_far_nonbipartite(n, config.degree, config.eps,
                                               gen, params.c_mix)
        honest = None

    def run(proof, rng):
        return bipartite_verify(graph, proof, params, rng)

    def random_proof(rng):
        return tuple(int(v) for v in rng.choice(n, size=k, replace=False))

    def mutate(proof, rng):
        out = list(proof)
        spot = int(rng.integers(k))
        for _ in range(8):
            cand = int(rng.integers(n))
            if cand not in out:
                out[spot] = cand
                break
        return tuple(sorted(out))

    verifier = VerifierInstance(
        run=run,
        honest_proof=honest,
        accept_probability=lambda proof: bip_accept(graph, proof, params),
        proof_space=lambda: itertools.combinations(range(n), k),
        proof_count=math.comb(n, k),
        random_proof=random_proof,
        mutate_proof=mutate,
        proof_bits=k * math.ceil(math.log2(max(2, n))),
    )
    info = {"graph": graph, "params": params, "k": k, "distance": distance}
    return verifier, info


BUILDERS = {
    "parity": build_parity,
    "kmono": build_kmono,
    "layeredbp": build_layeredbp,
    "robp": build_robp,
    "eulerian": build_eulerian,
    "booleanity": build_booleanity,
    "bipartite": build_bipartite,
}


def build(config):
    if config.protocol not in BUILDERS:
        raise ConfigurationError(f"unknown protocol: {config.protocol}")
    return BUILDERS[config.protocol](config)


# ---------------------------------------------------------------------------
# branching-program helpers shared by the builders


def _accepted_input(bp, rng):
    """Construct an accepted string by walking edges that keep an accepting
    sink reachable; free positions are drawn at random."""
    reach = [set(bp.accepting)]
    for j in reversed(range(bp.length)):
        good = {u for u in range(bp.layer_sizes[j])
                if bp.step(j, u, 0) in reach[0] or bp.step(j, u, 1) in reach[0]}
        reach.insert(0, good)
    if 0 not in reach[0]:
        raise RuntimeError("the program accepts no string")
    x = rng.integers(0, 2, size=bp.n_vars, dtype=np.uint8)
    node = 0
    for j in range(bp.length):
        choices = [b for b in (0, 1) if bp.step(j, node, b) in reach[j + 1]]
        b = int(choices[int(rng.integers(len(choices)))])
        x[bp.var[j][node]] = b
        node = bp.step(j, node, b)
    if not bp.evaluate(x):
        raise RuntimeError("constructed input not accepted (shared variables?)")
    return x


def _far_bp_input(bp, eps, rng, max_tries=400):
    for _ in range(max_tries):
        x = rng.integers(0, 2, size=bp.n_vars, dtype=np.uint8)
        if distance_to_accepted(bp, x) >= eps:
            return x
    raise RuntimeError(f"no eps-far input found for the program (eps={eps})")


def bp_decomposition_cached(bp, k):
    from .properties.branching import bp_decomposition
    return bp_decomposition(bp, k)


def dec_layer_size(bp, dec, i):
    from .properties.branching import _segment_cuts
    cuts = _segment_cuts(bp.length, k=dec.k)
    return bp.layer_sizes[cuts[i + 1]]


def _bp_proof_count(bp, dec, k):
    from .properties.branching import _segment_cuts
    cuts = _segment_cuts(bp.length, k)
    count = len(bp.accepting)
    for i in range(k - 1):
        count *= bp.layer_sizes[cuts[i + 1]]
    return count
