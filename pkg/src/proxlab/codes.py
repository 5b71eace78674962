"""Linear-code machinery over small prime fields.

Includes the Hadamard code over F_3 (locally testable by the standard
three-point linearity check and locally decodable with two queries), the
verifier that accepts codewords of non-Boolean messages, random binary
codes with exhaustive dual-distance certification, k-wise independence
checking, and zero-bias dual witnesses.

Field symbols cost ceil(log2 q) bit-queries each; all reported query
counts are bit-queries so protocols over different payload types stay
comparable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .amplify import ConfigurationError, VerdictTrace


# ---------------------------------------------------------------------------
# generic linear codes


@dataclass
class LinearCode:
    """Linear code given by a full-rank generator matrix over F_q."""

    q: int
    generator: np.ndarray  # dim x n

    def __post_init__(self):
        g = np.asarray(self.generator, dtype=np.int64) % self.q
        g.flags.writeable = False
        object.__setattr__(self, "generator", g)
        if matrix_rank_mod(g, self.q) != self.dim:
            raise ConfigurationError("generator matrix must have full rank")

    @property
    def dim(self):
        return self.generator.shape[0]

    @property
    def blocklength(self):
        return self.generator.shape[1]

    def encode(self, message):
        msg = np.asarray(message, dtype=np.int64) % self.q
        return (msg @ self.generator) % self.q

    def codewords(self):
        """All q^dim codewords, one per row (desk scale only)."""
        msgs = np.array(list(itertools.product(range(self.q), repeat=self.dim)),
                        dtype=np.int64)
        return (msgs @ self.generator) % self.q

    def save(self, path):
        with open(path, "w") as fh:
            for row in self.generator:
                fh.write(" ".join(str(int(v)) for v in row) + "\n")

    @classmethod
    def load(cls, path, q=2):
        rows = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    rows.append([int(v) for v in line.split()])
        return cls(q=q, generator=np.array(rows, dtype=np.int64))


def matrix_rank_mod(mat, q):
    m = np.array(mat, dtype=np.int64) % q
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, c] % q), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        inv = pow(int(m[rank, c]), q - 2, q) if q > 2 else 1
        m[rank] = (m[rank] * inv) % q
        for r in range(rows):
            if r != rank and m[r, c] % q:
                m[r] = (m[r] - m[r, c] * m[rank]) % q
        rank += 1
        if rank == rows:
            break
    return rank


def null_space_mod2(generator):
    """Basis of the dual code of a binary code."""
    g = np.array(generator, dtype=np.int64) % 2
    k, n = g.shape
    m = g.copy()
    pivots = []
    rank = 0
    for c in range(n):
        pivot = next((r for r in range(rank, k) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(k):
            if r != rank and m[r, c]:
                m[r] = (m[r] + m[rank]) % 2
        pivots.append(c)
        rank += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        vec = np.zeros(n, dtype=np.int64)
        vec[fcol] = 1
        for r, pcol in enumerate(pivots):
            vec[pcol] = m[r, fcol] % 2
        basis.append(vec)
    return np.array(basis, dtype=np.int64) if basis else np.zeros((0, n), dtype=np.int64)


def dual_distance(code):
    """Minimum weight of a nonzero dual codeword; n+1 for the full space."""
    if code.q != 2:
        raise ConfigurationError("dual distance implemented for binary codes")
    n = code.blocklength
    basis = null_space_mod2(code.generator)
    if basis.shape[0] == 0:
        return n + 1
    if basis.shape[0] > 24:
        raise ConfigurationError("dual enumeration needs co-dimension <= 24")
    best = n + 1
    for coeffs in itertools.product((0, 1), repeat=basis.shape[0]):
        if not any(coeffs):
            continue
        word = np.zeros(n, dtype=np.int64)
        for c, b in zip(coeffs, basis):
            if c:
                word = (word + b) % 2
        best = min(best, int(word.sum()))
    return best


def random_linear_code(n, dim, rng, max_tries=200):
    """Uniform full-rank binary generator matrix."""
    if dim > n:
        raise ConfigurationError(f"dimension {dim} exceeds blocklength {n}")
    for _ in range(max_tries):
        g = rng.integers(0, 2, size=(dim, n), dtype=np.int64)
        if matrix_rank_mod(g, 2) == dim:
            return LinearCode(q=2, generator=g)
    raise RuntimeError("no full-rank generator found")


def is_far_from_set(code, strings, eps):
    """True iff every codeword is at distance > eps*n from every string."""
    words = code.codewords()
    strings = np.asarray(strings, dtype=np.int64)
    n = code.blocklength
    for s in strings:
        dists = np.count_nonzero(words != s[None, :], axis=1)
        if dists.min() <= eps * n:
            return False
    return True


def kwise_check(strings, k):
    """True iff every k coordinates of a uniform element of the set are
    jointly uniform (exact counting)."""
    s = np.asarray(strings, dtype=np.int64)
    size, n = s.shape
    if k == 0:
        return True
    if k > n or size % (2 ** k) != 0:
        return False
    expected = size // (2 ** k)
    weights = 1 << np.arange(k)
    for cols in itertools.combinations(range(n), k):
        packed = s[:, cols] @ weights
        counts = np.bincount(packed, minlength=2 ** k)
        if not np.all(counts == expected):
            return False
    return True


@dataclass
class DualWitness:
    """Zero-bias certificate: the half/half mixture of a property and a
    disjoint companion set correlates with no low-degree monomial."""

    property_set: np.ndarray  # 0/1 rows
    companion: np.ndarray  # 0/1 rows
    level: int  # independence level k


def zero_bias_witness(witness, max_degree):
    """Exact check (integer arithmetic) that the signed expectation under
    the mixture vanishes on all monomials of degree <= max_degree."""
    pi = np.asarray(witness.property_set, dtype=np.int64)
    comp = np.asarray(witness.companion, dtype=np.int64)
    pi_keys = {tuple(row) for row in pi}
    if any(tuple(row) in pi_keys for row in comp):
        raise ConfigurationError("witness sets must be disjoint")
    n = pi.shape[1]
    pi_pm = 1 - 2 * pi  # 0/1 -> +1/-1
    comp_pm = 1 - 2 * comp
    for deg in range(0, max_degree + 1):
        for cols in itertools.combinations(range(n), deg):
            if deg == 0:
                s_pi = pi.shape[0]
                s_comp = comp.shape[0]
            else:
                s_pi = int(np.prod(pi_pm[:, cols], axis=1).sum())
                s_comp = int(np.prod(comp_pm[:, cols], axis=1).sum())
        # E_C[m] == E_Pi[m] cross-multiplied to stay in integers
            if s_comp * pi.shape[0] != s_pi * comp.shape[0]:
                return False
    return True


# ---------------------------------------------------------------------------
# Hadamard code over F_3 and the non-Boolean-message verifier


def index_digits(i, q, k):
    """Little-endian base-q digits of a coordinate index."""
    out = np.empty(k, dtype=np.int64)
    for pos in range(k):
        out[pos] = i % q
        i //= q
    return out


def digits_to_index(digits, q):
    i = 0
    for pos, d in enumerate(digits):
        i += int(d) * q ** pos
    return i


def hadamard_code(k, q=3):
    """Code whose coordinate at index i equals <message, digits(i)> mod q."""
    if k > 10:
        raise ConfigurationError("hadamard blocklength q^k capped at k <= 10")
    n = q ** k
    gen = np.zeros((k, n), dtype=np.int64)
    for i in range(n):
        gen[:, i] = index_digits(i, q, k)
    return LinearCode(q=q, generator=gen)


def hadamard_encode(z, q=3):
    z = np.asarray(z, dtype=np.int64) % q
    return hadamard_code(len(z), q).encode(z)


def _add_index(i, j, q, k):
    return digits_to_index((index_digits(i, q, k) + index_digits(j, q, k)) % q, q)


def local_test_linear(oracle, repetitions, rng, k, q=3):
    """Three-point linearity test, `repetitions` times; one-sided."""
    n = q ** k
    for _ in range(repetitions):
        i = int(rng.integers(n))
        j = int(rng.integers(n))
        s = _add_index(i, j, q, k)
        if (oracle.read(i) + oracle.read(j) - oracle.read(s)) % q != 0:
            return False
    return True


def blr_single_rejection_rate(word, q, k):
    """Exact per-repetition rejection probability of the linearity test."""
    w = np.asarray(word, dtype=np.int64)
    n = q ** k
    digits = np.stack([index_digits(i, q, k) for i in range(n)])  # n x k
    sums = (digits[:, None, :] + digits[None, :, :]) % q
    powers = q ** np.arange(k)
    idx = sums @ powers
    fails = (w[:, None] + w[None, :] - w[idx]) % q != 0
    return float(np.count_nonzero(fails)) / (n * n)


def local_decode(oracle, coordinate, repetitions, rng, k, q=3):
    """Majority of w(i + e_j) - w(i) over uniform i; None without a strict
    majority.  Exact on uncorrupted codewords."""
    n = q ** k
    e_j = q ** coordinate  # index of the unit vector as a coordinate
    votes = np.zeros(q, dtype=np.int64)
    for _ in range(repetitions):
        i = int(rng.integers(n))
        shifted = _add_index(i, e_j, q, k)
        votes[(oracle.read(shifted) - oracle.read(i)) % q] += 1
    top = int(votes.max())
    if np.count_nonzero(votes == top) != 1:
        return None
    return int(votes.argmax())


def decode_vote_distribution(word, coordinate, q, k):
    """Exact distribution of one decoding probe over uniform i."""
    w = np.asarray(word, dtype=np.int64)
    n = q ** k
    e_j = q ** coordinate
    idx = np.array([_add_index(i, e_j, q, k) for i in range(n)])
    diffs = (w[idx] - w) % q
    return np.bincount(diffs, minlength=q) / n


def majority_outcome_probabilities(probe_probs, repetitions):
    """P[strict-majority symbol = v] and P[no strict majority], exactly."""
    q = len(probe_probs)
    outcome = np.zeros(q + 1)  # last slot: bottom
    for counts in itertools.product(range(repetitions + 1), repeat=q - 1):
        rest = repetitions - sum(counts)
        if rest < 0:
            continue
        full = list(counts) + [rest]
        coef = math.factorial(repetitions)
        prob = 1.0
        for c, p in zip(full, probe_probs):
            coef //= math.factorial(c)
            prob *= p ** c
        prob *= coef
        top = max(full)
        winners = [v for v, c in enumerate(full) if c == top]
        if len(winners) == 1:
            outcome[winners[0]] += prob
        else:
            outcome[q] += prob
    return outcome


DEFAULT_DECODE_REPS = 9


def booleanity_verify(oracle, proof_index, eps, rng, k, q=3, c_blr=6.0,
                      decode_reps=DEFAULT_DECODE_REPS):
    """Accept iff the word passes the linearity test and the proof-indexed
    message symbol decodes to a non-Boolean value.  Classical verifier:
    no modeled quantum queries."""
    proof_bits = max(1, math.ceil(math.log2(max(2, k))))
    if not isinstance(proof_index, int) or not 0 <= proof_index < k:
        return VerdictTrace(accept=False, classical_queries=0,
                            modeled_quantum_queries=0,
                            proof_bits_consumed=proof_bits)
    reps = math.ceil(c_blr / eps)
    before = oracle.query_count
    ok = local_test_linear(oracle, reps, rng, k, q)
    decoded = None
    if ok:
        decoded = local_decode(oracle, proof_index, decode_reps, rng, k, q)
    accept = ok and decoded is not None and decoded not in (0, 1)
    return VerdictTrace(accept=accept,
                        classical_queries=oracle.query_count - before,
                        modeled_quantum_queries=0,
                        proof_bits_consumed=proof_bits)


def booleanity_accept_probability(word, proof_index, eps, k, q=3, c_blr=6.0,
                                  decode_reps=DEFAULT_DECODE_REPS):
    """Exact acceptance probability of the verifier on a fixed word."""
    if not isinstance(proof_index, int) or not 0 <= proof_index < k:
        return 0.0
    reps = math.ceil(c_blr / eps)
    pass_test = (1.0 - blr_single_rejection_rate(word, q, k)) ** reps
    votes = decode_vote_distribution(word, proof_index, q, k)
    outcome = majority_outcome_probabilities(votes, decode_reps)
    p_nonboolean = float(outcome[2:q].sum())
    return pass_test * p_nonboolean


def distance_to_code(word, code):
    """Exact relative distance from a word to the nearest codeword."""
    w = np.asarray(word, dtype=np.int64)
    words = code.codewords()
    dists = np.count_nonzero(words != w[None, :], axis=1)
    return int(dists.min()) / code.blocklength


def random_far_word(code, eps, rng, max_tries=200):
    """Uniform word certified eps-far from the whole code."""
    n = code.blocklength
    for _ in range(max_tries):
        w = rng.integers(0, code.q, size=n, dtype=np.int64)
        if distance_to_code(w, code) >= eps:
            return w
    raise RuntimeError("no certified far word found")
