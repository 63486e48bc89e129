from fractions import Fraction

import pytest

from cantorfup.omega import (OmegaSpec, binom_identity_check, enumerate_omega, omega_formula,
                             omega_grid, superseded_formula)


def test_spec_validation():
    with pytest.raises(ValueError):
        OmegaSpec(0, 5, 1)
    assert not OmegaSpec(3, 5, 2).feasible
    assert OmegaSpec(2, 5, 2).feasible


def test_enumerated_tuples_respect_gaps():
    count, tuples = enumerate_omega(OmegaSpec(3, 12, 2), return_tuples=True)
    assert count == len(tuples) == len(set(tuples))
    for t in tuples:
        assert 0 <= t[0] and t[-1] <= 11
        assert all(b - a >= 3 for a, b in zip(t, t[1:]))


def test_small_counts_by_hand():
    # q = 1 counts the k positions; q = 2, L = 1 counts non-adjacent pairs
    assert enumerate_omega(OmegaSpec(1, 7, 3)) == 7
    assert enumerate_omega(OmegaSpec(2, 5, 1)) == 6
    assert omega_formula(OmegaSpec(2, 5, 1)) == 6
    assert enumerate_omega(OmegaSpec(3, 4, 2)) == 0 == omega_formula(OmegaSpec(3, 4, 2))


def test_superseded_formula_disagrees():
    spec = OmegaSpec(2, 10, 3)
    assert enumerate_omega(spec) == 21
    assert superseded_formula(spec) == Fraction(105)
    assert superseded_formula(OmegaSpec(3, 5, 2)) is None


@pytest.mark.parametrize("N,q", [(1, 1), (5, 2), (12, 3), (30, 4)])
def test_binomial_identity(N, q):
    assert binom_identity_check(N, q)


def test_grid_shape():
    g = omega_grid(2, 2, 6)
    assert g["total"] == 24 and not g["mismatches"]
