import itertools
import math

import numpy as np
import pytest

from proxlab.amplify import ConfigurationError
from proxlab.codes import (DualWitness, LinearCode, blr_single_rejection_rate,
                           booleanity_accept_probability, booleanity_verify,
                           decode_vote_distribution, distance_to_code,
                           dual_distance, hadamard_code, hadamard_encode,
                           is_far_from_set, kwise_check, local_decode,
                           local_test_linear, majority_outcome_probabilities,
                           random_far_word, random_linear_code,
                           zero_bias_witness)
from proxlab.harness import rng_stream
from proxlab.oracle import FieldOracle


class TestHadamard:
    def test_zero_message_gives_zero_codeword(self):
        assert np.all(hadamard_encode([0, 0, 0]) == 0)

    def test_k1_message_two(self):
        assert hadamard_encode([2]).tolist() == [0, 2, 1]

    def test_linearity_exhaustive_small_k(self):
        for k in (1, 2, 3, 4):
            code = hadamard_code(k, q=3)
            msgs = list(itertools.product(range(3), repeat=k))
            words = {m: code.encode(np.array(m)) for m in msgs}
            for a in msgs:
                for b in msgs:
                    s = tuple((x + y) % 3 for x, y in zip(a, b))
                    assert np.all((words[a] + words[b]) % 3 == words[s])

    def test_blocklength(self):
        assert hadamard_code(6, q=3).blocklength == 729


class TestLocalTest:
    def test_codeword_always_accepts(self):
        code = hadamard_code(3, q=3)
        word = code.encode([1, 2, 0])
        oracle = FieldOracle(word, q=3)
        for t in range(300):
            assert local_test_linear(oracle, 10, rng_stream(1, t), k=3)

    def test_shifted_codeword_rejected(self):
        # codeword with floor(eps * n) coordinates shifted by +1
        k, eps = 5, 0.1
        code = hadamard_code(k, q=3)
        word = code.encode([1, 0, 2, 1, 0]).copy()
        n = code.blocklength
        rng = rng_stream(2, 0)
        corrupt = rng.choice(n, size=int(eps * n), replace=False)
        word[corrupt] = (word[corrupt] + 1) % 3
        assert distance_to_code(word, code) > 0
        oracle = FieldOracle(word, q=3)
        reps = math.ceil(6.0 / eps)
        rejects = sum(
            not local_test_linear(oracle, reps, rng_stream(3, t), k=k)
            for t in range(600))
        phat = rejects / 600
        assert phat - 1.96 * math.sqrt(phat * (1 - phat) / 600) >= 2 / 3

    def test_query_count_three_symbol_reads_per_repetition(self):
        code = hadamard_code(3, q=3)
        oracle = FieldOracle(code.encode([1, 1, 1]), q=3)
        local_test_linear(oracle, 7, rng_stream(4, 0), k=3)
        assert oracle.query_count == 7 * 3 * 2  # 2 bit-queries per symbol

    def test_exact_rejection_rate_matches_sampling(self):
        k = 3
        rng = rng_stream(5, 0)
        word = rng.integers(0, 3, size=27)
        rate = blr_single_rejection_rate(word, q=3, k=k)
        oracle = FieldOracle(word, q=3)
        rejects = sum(not local_test_linear(oracle, 1, rng_stream(6, t), k=k)
                      for t in range(4000))
        assert rejects / 4000 == pytest.approx(rate, abs=0.03)


class TestLocalDecode:
    def test_uncorrupted_decode_is_exact(self):
        code = hadamard_code(2, q=3)
        word = code.encode([2, 1])
        oracle = FieldOracle(word, q=3)
        for t in range(100):
            assert local_decode(oracle, 0, 9, rng_stream(7, t), k=2) == 2
            assert local_decode(oracle, 1, 9, rng_stream(8, t), k=2) == 1

    def test_corrupted_decode_mostly_correct(self):
        k, delta = 4, 0.1
        code = hadamard_code(k, q=3)
        z = [2, 0, 1, 2]
        word = code.encode(z).copy()
        rng = rng_stream(9, 0)
        corrupt = rng.choice(len(word), size=int(delta * len(word)), replace=False)
        word[corrupt] = (word[corrupt] + 1) % 3
        oracle = FieldOracle(word, q=3)
        good = sum(local_decode(oracle, 0, 9, rng_stream(10, t), k=k) == z[0]
                   for t in range(600))
        phat = good / 600
        assert phat - 1.96 * math.sqrt(phat * (1 - phat) / 600) >= 2 / 3

    def test_adversarial_pair_corruption_yields_value_or_bottom(self):
        # corrupt only probe pairs {i, i+e_j}: outcomes stay in {z_j, bottom}
        k, j = 3, 1
        code = hadamard_code(k, q=3)
        z = [0, 2, 1]
        word = code.encode(z).copy()
        rng = rng_stream(11, 0)
        targets = rng.choice(27, size=2, replace=False)
        for i in targets:
            word[i] = (word[i] + 1) % 3  # breaks pairs through i
        oracle = FieldOracle(word, q=3)
        ok = 0
        for t in range(600):
            out = local_decode(oracle, j, 9, rng_stream(12, t), k=k)
            ok += out in (z[j], None)
        phat = ok / 600
        assert phat - 1.96 * math.sqrt(phat * (1 - phat) / 600) >= 2 / 3

    def test_vote_distribution_exact(self):
        k = 3
        rng = rng_stream(13, 0)
        word = rng.integers(0, 3, size=27)
        probs = decode_vote_distribution(word, 1, q=3, k=k)
        assert probs.sum() == pytest.approx(1.0)
        counts = np.zeros(3)
        oracle = FieldOracle(word, q=3)
        for t in range(4000):
            out = local_decode(oracle, 1, 1, rng_stream(14, t), k=k)
            counts[out] += 1
        assert counts / 4000 == pytest.approx(probs, abs=0.03)

    def test_majority_outcomes_sum_to_one(self):
        out = majority_outcome_probabilities([0.2, 0.3, 0.5], 9)
        assert out.sum() == pytest.approx(1.0)


class TestBooleanityVerifier:
    def test_non_boolean_message_honest_index_always_accepts(self):
        k = 2
        word = hadamard_encode([2, 0])
        oracle = FieldOracle(word, q=3)
        for t in range(300):
            trace = booleanity_verify(oracle, 0, 0.1, rng_stream(15, t), k=k)
            assert trace.accept

    def test_boolean_message_rejected_for_every_index(self):
        k = 2
        word = hadamard_encode([1, 0])
        oracle = FieldOracle(word, q=3)
        for proof in range(k):
            rejects = sum(
                not booleanity_verify(oracle, proof, 0.1,
                                      rng_stream(16, proof, t), k=k).accept
                for t in range(400))
            phat = rejects / 400
            assert phat - 1.96 * math.sqrt(phat * (1 - phat) / 400) >= 2 / 3

    def test_far_word_rejected(self):
        k = 4
        code = hadamard_code(k, q=3)
        word = random_far_word(code, 0.1, rng_stream(17, 0))
        oracle = FieldOracle(word, q=3)
        rejects = sum(
            not booleanity_verify(oracle, 0, 0.1, rng_stream(18, t), k=k).accept
            for t in range(400))
        phat = rejects / 400
        assert phat - 1.96 * math.sqrt(phat * (1 - phat) / 400) >= 2 / 3

    def test_proof_bits_and_query_budget(self):
        k, eps = 6, 0.1
        word = hadamard_encode([2, 0, 1, 0, 0, 2])
        oracle = FieldOracle(word, q=3)
        reps = math.ceil(6.0 / eps)
        trace = booleanity_verify(oracle, 0, eps, rng_stream(19, 0), k=k)
        assert trace.proof_bits_consumed == math.ceil(math.log2(6))
        assert trace.classical_queries <= 3 * reps * 2 + 2 * 9 * 2

    def test_malformed_proof_rejects(self):
        word = hadamard_encode([2, 0])
        oracle = FieldOracle(word, q=3)
        for bad in (-1, 2, "x", None):
            assert not booleanity_verify(oracle, bad, 0.1,
                                         rng_stream(20, 0), k=2).accept

    def test_exact_acceptance_matches_sampling(self):
        k = 3
        word = hadamard_encode([1, 2, 0]).copy()
        word[5] = (word[5] + 1) % 3
        oracle = FieldOracle(word, q=3)
        exact = booleanity_accept_probability(word, 1, 0.25, k=k)
        hits = sum(booleanity_verify(oracle, 1, 0.25, rng_stream(21, t), k=k).accept
                   for t in range(3000))
        assert hits / 3000 == pytest.approx(exact, abs=0.03)


class TestRandomCodes:
    def test_even_weight_code_dual_distance(self):
        gen = np.array([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]])
        code = LinearCode(q=2, generator=gen)
        assert dual_distance(code) == 4  # dual = {0000, 1111}
        assert kwise_check(code.codewords(), 3)
        assert not kwise_check(code.codewords(), 4)

    def test_full_space_convention(self):
        code = LinearCode(q=2, generator=np.eye(4, dtype=np.int64))
        assert dual_distance(code) == 5
        assert kwise_check(code.codewords(), 4)

    def test_dual_distance_equals_kwise_level_exhaustive(self):
        # dual_distance(C) > k iff the codeword set is k-wise independent
        rng = rng_stream(22, 0)
        cases = [LinearCode(q=2, generator=np.eye(6, dtype=np.int64))]
        for dim in (2, 3, 4, 5):
            for t in range(4):
                cases.append(random_linear_code(6, dim, rng_stream(23, dim, t)))
        for n, dim, t in ((8, 4, 0), (10, 5, 0), (12, 6, 0), (12, 4, 1)):
            cases.append(random_linear_code(n, dim, rng_stream(24, n, dim, t)))
        for code in cases:
            words = code.codewords()
            dd = dual_distance(code)
            for k in range(0, code.blocklength + 1):
                assert kwise_check(words, k) == (dd > k), (code.generator, k)

    def test_search_finds_far_kwise_code(self):
        rng = rng_stream(25, 0)
        strings = rng.integers(0, 2, size=(4, 16))
        found = False
        for attempt in range(100):
            code = random_linear_code(16, 12, rng_stream(26, attempt))
            if dual_distance(code) >= 3 and is_far_from_set(code, strings, 0.05):
                found = True
                break
        assert found

    def test_generator_roundtrip(self, tmp_path):
        code = random_linear_code(8, 3, rng_stream(27, 0))
        path = tmp_path / "code.txt"
        code.save(path)
        loaded = LinearCode.load(path, q=2)
        assert np.all(loaded.generator == code.generator)


class TestKwise:
    def test_full_cube(self):
        cube = np.array(list(itertools.product((0, 1), repeat=4)))
        for k in range(5):
            assert kwise_check(cube, k)

    def test_even_parity_strings(self):
        for n in (4, 6, 8, 10):
            even = np.array([x for x in itertools.product((0, 1), repeat=n)
                             if sum(x) % 2 == 0])
            assert kwise_check(even, n - 1)
            assert not kwise_check(even, n)

    def test_singleton_fails(self):
        s = np.zeros((1, 5), dtype=np.int64)
        for k in range(1, 6):
            assert not kwise_check(s, k)


class TestZeroBias:
    def test_parity_complement_mixture(self):
        n = 6
        even = np.array([x for x in itertools.product((0, 1), repeat=n)
                         if sum(x) % 2 == 0])
        odd = np.array([x for x in itertools.product((0, 1), repeat=n)
                        if sum(x) % 2 == 1])
        witness = DualWitness(property_set=even, companion=odd, level=n - 1)
        assert zero_bias_witness(witness, n - 2)
        assert not zero_bias_witness(witness, n)  # full-degree monomial biases

    def test_non_kwise_pair_fails_low_degree(self):
        # a singleton companion cannot be unbiased at degree 1
        n = 4
        even = np.array([x for x in itertools.product((0, 1), repeat=n)
                         if sum(x) % 2 == 0])
        single = np.array([[1, 0, 0, 0]])
        witness = DualWitness(property_set=even, companion=single, level=1)
        assert not zero_bias_witness(witness, 1)

    def test_overlapping_sets_are_invalid(self):
        rows = np.array([[0, 0], [1, 1]])
        witness = DualWitness(property_set=rows, companion=rows[:1], level=1)
        with pytest.raises(ConfigurationError):
            zero_bias_witness(witness, 1)
