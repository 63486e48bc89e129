import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from cantorfup.cantor import (Alphabet, iterate, iterated_values, mu_hat_truncated, nu_hat,
                              nu_hat_is_zero, nu_hat_residues, reduce_mod)

from oracles import iterated_set


def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet(2, [0, 1])
    with pytest.raises(ValueError):
        Alphabet(5, [3])
    with pytest.raises(ValueError):
        Alphabet(4, [0, 1, 2, 3])
    a = Alphabet(12, [9, 0, 8, 0])
    assert a.digits == (0, 8, 9) and a.size == 3
    assert math.isclose(a.delta, math.log(3) / math.log(12))
    assert not Alphabet(4, [-1, 2]).in_standard_range()


def test_iterated_set_order_and_values():
    it = iterate(Alphabet(4, [0, 2]), 3)
    assert len(it) == 8
    assert it.digit_tuples[1] == (0, 0, 2)
    assert sorted(it.values) == sorted(iterated_set([0, 2], 4, 3))
    assert it.elements == [0, 2, 8, 10, 32, 34, 40, 42]
    with pytest.raises(ValueError):
        iterate(Alphabet(4, [0, 2]), 0)


def test_reduce_mod_detects_collisions():
    _, collided = reduce_mod(iterate(Alphabet(3, [0, 1]), 3))
    assert not collided
    residues, collided = reduce_mod(iterate(Alphabet(3, [0, 3]), 2))
    # 0, 3, 9, 12 reduce to 0, 3, 0, 3 mod 9
    assert collided and residues == (0, 3)


def test_nu_hat_exact_phase_matches_definition():
    E = [0, 1, 9, 10]
    for xi in [Fraction(1, 12), Fraction(7, 144), Fraction(-5, 3), 2]:
        direct = sum(cmath.exp(-2j * math.pi * float(xi) * a) for a in E) / len(E)
        assert abs(nu_hat(E, xi) - direct) < 1e-12
    assert abs(nu_hat(E, 0.25) - sum(cmath.exp(-2j * math.pi * 0.25 * a) for a in E) / 4) < 1e-12
    with pytest.raises(ValueError):
        nu_hat([], Fraction(1, 2))


def test_nu_hat_large_exact_argument():
    # phase reduction keeps huge numerators exact: 1e30 * 12 / 12 is an integer
    assert abs(nu_hat([0, 12], Fraction(10**30, 12)) - 1) < 1e-12


def test_vectorized_matches_scalar():
    E = [0, 3, 7]
    r = np.arange(-20, 40)
    vec = nu_hat_residues(E, r, 36)
    for i, x in enumerate(r):
        assert abs(vec[i] - nu_hat(E, Fraction(int(x), 36))) < 1e-12


def test_zero_predicate():
    assert nu_hat_is_zero([0, 8], Fraction(1, 16))
    assert not nu_hat_is_zero([0, 8], Fraction(1, 12))


def test_truncated_product_bound():
    base = Alphabet(4, [0, 2])
    ref = mu_hat_truncated(base, Fraction(3, 7), 40).value
    for J in (2, 5, 10):
        t = mu_hat_truncated(base, Fraction(3, 7), J)
        assert abs(t.value - ref) <= t.error_bound + 1e-15
    with pytest.raises(ValueError):
        mu_hat_truncated(base, 1, 0)


def test_iterated_values_negative_digits():
    assert sorted(iterated_values([-1, 1], 3, 2)) == [-4, -2, 2, 4]
