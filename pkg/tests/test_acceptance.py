"""Acceptance suite: one group of tests per criterion, each tagged with its number.

The conftest prints one PASS/FAIL line per criterion after the run.
"""
import itertools
import math
import random
import time

import pytest

from cantorfup.cantor import Alphabet
from cantorfup.classify import (TAG_SPECTRAL_M, TAG_SPECTRAL_M2_ONLY,
                                construct_case_prime_power_times_q, construct_case_squarefree,
                                construct_case_two_primes, product_form_example, search_dsp,
                                spectral_pairs_in_M2)
from cantorfup.norms import beta_sequence, submatrix_norm, witness_lower_bound
from cantorfup.omega import OmegaSpec, enumerate_omega, omega_formula, superseded_formula
from cantorfup.pairs import (evaluate_pair, is_distributed_spectral_pair, is_spectral_pair,
                             satisfies_dj_condition, verify_block_structure)

from oracles import literal_norm

DJ_A, DJ_B = (0, 1, 9, 10), (0, 2, 8, 10)
# frozen from the oracle run: rescaled_2 = 1.48862753..., rescaled_6 = 3.24316686...
DJ_RESCALED_GAP_THRESHOLD = 1.75


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def _random_alphabet(rng, M, max_size):
    return sorted(rng.sample(range(M), rng.randint(2, min(max_size, M - 1))))


# -- 1 -----------------------------------------------------------------------

@pytest.mark.criterion(1)
def test_spectral_pair_norms_are_most_uncertain():
    A, B = Alphabet(4, [0, 2]), Alphabet(4, [0, 1])
    with Timer() as t:
        norms = [submatrix_norm(A, B, k) for k in range(1, 7)]
    for k, n in zip(range(1, 7), norms):
        assert abs(n - 0.5 ** (k / 2)) <= 1e-9
    # literal matrix agrees where it is cheap
    for k in (1, 2, 3):
        assert abs(literal_norm([0, 2], [0, 1], 4, k) - 0.5 ** (k / 2)) <= 1e-9
    assert t.elapsed < 1.0


# -- 2 -----------------------------------------------------------------------

@pytest.mark.criterion(2)
def test_two_point_pair_m12_verdict():
    v = evaluate_pair([0, 8], [0, 9], 12)
    assert v.distributed_spectral is True
    assert v.spectral_in_M2 is True
    assert v.spectral_in_M is False


@pytest.mark.criterion(2)
def test_two_point_pair_m12_norms():
    A, B = Alphabet(12, [0, 8]), Alphabet(12, [0, 9])
    expected = [math.sqrt(2) * 6 ** (-k / 2) for k in range(1, 7)]
    # oracle first: literal DFT submatrix for small k
    for k in (1, 2, 3):
        assert abs(literal_norm(A.digits, B.digits, 12, k) - expected[k - 1]) <= 1e-8
    with Timer() as t:
        norms = [submatrix_norm(A, B, k) for k in range(1, 7)]
    for n, e in zip(norms, expected):
        assert abs(n - e) <= 1e-8
    assert t.elapsed < 10.0


# -- 3 -----------------------------------------------------------------------

@pytest.mark.criterion(3)
def test_dj_pair_is_not_dsp():
    assert satisfies_dj_condition(DJ_A, DJ_B, 12)
    assert not is_distributed_spectral_pair(DJ_A, DJ_B, 12)


@pytest.mark.criterion(3)
def test_dj_pair_block_structure_fails_at_k3():
    rep = verify_block_structure(Alphabet(12, DJ_A), Alphabet(12, DJ_B), 3)
    assert not rep.passed
    assert rep.off_diagonal_witness is not None and rep.off_diagonal_max > 1e-3


@pytest.mark.criterion(3)
def test_dj_pair_rescaled_norms_grow():
    A, B = Alphabet(12, DJ_A), Alphabet(12, DJ_B)
    with Timer() as t:
        # dense_limit 256: k = 5, 6 (dimension 1024, 4096) go through the matrix-free path
        seq = beta_sequence(A, B, 6, dense_limit=256, tol=1e-12)
    r = seq.rescaled
    assert len(set(round(x, 9) for x in r)) > 1
    assert r[5] - r[1] > DJ_RESCALED_GAP_THRESHOLD
    # oracle cross-check of the small-k values
    for k in (1, 2, 3):
        assert abs(seq.norms[k - 1] - literal_norm(DJ_A, DJ_B, 12, k)) < 1e-9
    assert t.elapsed < 120.0


# -- 4 -----------------------------------------------------------------------

def _ordered_dsp_pairs_m12():
    out = []
    for p in search_dsp(12).pairs:
        out.append((p.A, p.B))
        if p.partner_found and p.A != p.B:
            out.append((p.B, p.A))
    return out


@pytest.mark.criterion(4)
def test_norm_recursion_on_dsp_pairs():
    with Timer() as t:
        cases = [(12, A, B) for A, B in _ordered_dsp_pairs_m12()]
        M, A, B, _ = product_form_example(3)
        cases.append((M, A, B))
        worst = 0.0
        for M, A, B in cases:
            a, b = Alphabet(M, A), Alphabet(M, B)
            sq = {k: submatrix_norm(a, b, k, dense_limit=256, tol=1e-12) ** 2 for k in range(2, 6)}
            for k in range(3, 6):
                worst = max(worst, abs(sq[k] - a.size / M * sq[k - 1]))
    assert len(cases) > 100
    assert worst <= 1e-9
    assert t.elapsed < 60.0


# -- 5 -----------------------------------------------------------------------

@pytest.mark.criterion(5)
def test_omega_grid_enumeration_equals_formula():
    with Timer() as t:
        feasible = mismatches = 0
        for q in range(1, 5):
            for L in range(1, 5):
                for k in range(1, 21):
                    spec = OmegaSpec(q, k, L)
                    feasible += spec.feasible
                    if enumerate_omega(spec) != omega_formula(spec):
                        mismatches += 1
    assert feasible > 0 and mismatches == 0
    assert t.elapsed < 1.0


@pytest.mark.criterion(5)
def test_superseded_omega_formula_disagrees():
    spec = OmegaSpec(2, 10, 3)
    assert enumerate_omega(spec) == 21 == omega_formula(spec)
    assert superseded_formula(spec) != 21


# -- 6 -----------------------------------------------------------------------

def _constructed(M):
    """Independent assembly of the construction cases for the four test moduli."""
    if M == 12:
        base = {(a, b) for a, b, _ in construct_case_prime_power_times_q(2, 3)}
    elif M == 24:
        base = {(a, b) for a, b, _ in construct_case_prime_power_times_q(3, 3)}
    elif M == 40:
        base = {(a, b) for a, b, _ in construct_case_prime_power_times_q(3, 5)}
    elif M == 30:
        base = {construct_case_two_primes(3, 5)}
        for labels in itertools.product(range(3), repeat=2):
            parts = [[p for p, lab in zip((3, 5), labels) if lab == i] for i in range(3)]
            res = construct_case_squarefree([3, 5], *parts)
            if res.accepted:
                base.add((res.a, res.b))
    return base | {(b, a) for a, b in base}


@pytest.mark.criterion(6)
def test_m2_enumeration_matches_constructions():
    with Timer() as t:
        for M in (12, 24, 30, 40):
            fam = spectral_pairs_in_M2(M)
            assert set(fam.pairs) == _constructed(M) and fam.pairs
            for a, b in fam.pairs:
                assert is_spectral_pair([0, a], [0, b], M * M)
                assert is_distributed_spectral_pair([0, a], [0, b], M)
        for M in [20, 28] + list(range(3, 32, 2)):
            assert spectral_pairs_in_M2(M).pairs == []
    assert t.elapsed < 5.0


# -- 7 -----------------------------------------------------------------------

@pytest.mark.criterion(7)
@pytest.mark.parametrize("M", [4, 8, 9, 16, 27, 6, 10, 15])
def test_prime_power_and_two_prime_moduli_only_spectral(M):
    report = search_dsp(M, override=True)
    assert report.pairs
    assert all(p.tag == TAG_SPECTRAL_M for p in report.pairs)
    assert all(p.partner_found for p in report.pairs)
    for p in report.pairs[:: max(1, len(report.pairs) // 50)]:
        assert is_spectral_pair(p.A, p.B, M)


@pytest.mark.criterion(7)
def test_m12_single_extra_duality_class():
    with Timer() as t:
        report = search_dsp(12)
    extra = [p for p in report.pairs if p.tag != TAG_SPECTRAL_M]
    assert [(p.A, p.B, p.tag) for p in extra] == [((0, 8), (0, 9), TAG_SPECTRAL_M2_ONLY)]
    assert extra[0].partner_found
    for p in report.pairs:
        assert is_distributed_spectral_pair(p.A, p.B, 12)
    assert t.elapsed < 600.0


# -- 8 -----------------------------------------------------------------------

@pytest.mark.criterion(8)
def test_witness_bound_below_norm():
    rng = random.Random(0x5EED)
    with Timer() as t:
        for _ in range(200):
            M = rng.randint(3, 12)
            A = Alphabet(M, _random_alphabet(rng, M, 3))
            B = Alphabet(M, _random_alphabet(rng, M, 3))
            k = rng.randint(1, 2)
            b1p, b2p = rng.choice(B.digits), rng.choice(B.digits)
            bound = witness_lower_bound(A, B, k, b1p, b2p)
            assert bound <= submatrix_norm(A, B, 2 * k) ** 2 + 1e-9
    assert t.elapsed < 60.0


# -- 9 -----------------------------------------------------------------------

@pytest.mark.criterion(9)
def test_product_formula_matches_literal_dft():
    rng = random.Random(20241015)
    with Timer() as t:
        done = 0
        while done < 50:
            M = rng.randint(3, 16)
            k = rng.randint(1, 4)
            if M**k > 4096:
                continue
            A = _random_alphabet(rng, M, M - 1)
            B = _random_alphabet(rng, M, M - 1)
            got = submatrix_norm(Alphabet(M, A), Alphabet(M, B), k)
            assert abs(got - literal_norm(A, B, M, k)) <= 1e-8, (M, A, B, k)
            done += 1
    assert t.elapsed < 120.0


# -- 10 ----------------------------------------------------------------------

def _random_suite(n=120, seed=99):
    rng = random.Random(seed)
    for _ in range(n):
        M = rng.randint(3, 12)
        A = _random_alphabet(rng, M, 4)
        B = _random_alphabet(rng, M, 4)
        k = rng.randint(1, 3)
        yield M, A, B, k, rng.randint(-M, 2 * M), rng.randint(-M, 2 * M)


@pytest.mark.criterion(10)
def test_norm_duality():
    with Timer() as t:
        for M, A, B, k, _, _ in _random_suite():
            a, b = Alphabet(M, A), Alphabet(M, B)
            assert abs(submatrix_norm(a, b, k) - submatrix_norm(b, a, k)) <= 1e-9
    assert t.elapsed < 60.0


@pytest.mark.criterion(10)
def test_translation_invariance():
    with Timer() as t:
        for M, A, B, k, s, u in _random_suite():
            At = [x + s for x in A]
            Bt = [x + u for x in B]
            for N in (M, M * M):
                assert is_spectral_pair(A, B, N) == is_spectral_pair(At, Bt, N)
            assert is_distributed_spectral_pair(A, B, M) == is_distributed_spectral_pair(At, Bt, M)
            assert satisfies_dj_condition(A, B, M) == satisfies_dj_condition(At, Bt, M)
            a, b = Alphabet(M, A), Alphabet(M, B)
            at, bt = Alphabet(M, At), Alphabet(M, Bt)
            assert abs(submatrix_norm(a, b, k) - submatrix_norm(at, bt, k)) <= 1e-9
    assert t.elapsed < 60.0
