"""Exact integer polynomials, cyclotomic polynomials and root-of-unity vanishing.

Polynomials are dense tuples of Python ints, constant term first, trailing
zeros trimmed. The zero polynomial is the empty tuple and has degree -1.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

RationalLike = Union[Fraction, int, "tuple[int, int]"]


@dataclass(frozen=True, init=False)
class IntPolynomial:
    """Polynomial with arbitrary-precision integer coefficients.

    >>> IntPolynomial(1, 0, 1)
    IntPolynomial('x^2 + 1')
    """

    coeffs: tuple[int, ...]

    def __init__(self, *coeffs: int):
        end = len(coeffs)
        while end and coeffs[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs[:end]))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]) -> IntPolynomial:
        return cls(*coeffs)

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> IntPolynomial:
        return cls(*([0] * degree + [coeff]))

    @classmethod
    def x_pow_minus_one(cls, n: int) -> IntPolynomial:
        return cls(-1, *([0] * (n - 1)), 1)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __call__(self, x):
        # Horner
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(*out)

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(*(-c for c in self.coeffs))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(*out)

    def divmod_monic(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Quotient and remainder of division by a monic polynomial."""
        if not divisor.is_monic():
            raise ValueError("divisor must be monic and nonzero")
        rem = list(self.coeffs)
        dd = divisor.degree
        dc = divisor.coeffs
        if len(rem) - 1 < dd:
            return IntPolynomial(), self
        quot = [0] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                shift = i - dd
                quot[shift] = c
                for j in range(dd + 1):
                    rem[shift + j] -= c * dc[j]
        return IntPolynomial(*quot), IntPolynomial(*rem[:dd])

    def __floordiv__(self, other: IntPolynomial) -> IntPolynomial:
        return self.divmod_monic(other)[0]

    def __mod__(self, other: IntPolynomial) -> IntPolynomial:
        return self.divmod_monic(other)[1]

    def __repr__(self) -> str:
        if not self.coeffs:
            return "IntPolynomial('0')"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                term = str(mag)
            else:
                var = "x" if i == 1 else f"x^{i}"
                term = var if mag == 1 else f"{mag}{var}"
            if not parts:
                parts.append(term if sign == "+" else "-" + term)
            else:
                parts.append(f" {sign} {term}")
        return f"IntPolynomial('{''.join(parts)}')"


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_factors(n: int) -> list[int]:
    return sorted(_factorize(n))


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in _factorize(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def euler_totient(n: int) -> int:
    if n < 1:
        raise ValueError(f"euler_totient needs n >= 1, got {n}")
    result = n
    for p in _factorize(n):
        result -= result // p
    return result


class CyclotomicCache:
    """Memo of cyclotomic polynomials keyed by n.

    Inserts for n <= ``self_test_bound`` are checked against
    prod_{d | n} Phi_d = x^n - 1. Reads are lock-free; inserts serialize.
    """

    def __init__(self, self_test_bound: int = 64):
        self.self_test_bound = self_test_bound
        self._polys: dict[int, IntPolynomial] = {}
        self._lock = threading.Lock()

    def __contains__(self, n: int) -> bool:
        return n in self._polys

    def __len__(self) -> int:
        return len(self._polys)

    def get(self, n: int) -> IntPolynomial | None:
        return self._polys.get(n)

    def insert(self, n: int, poly: IntPolynomial) -> None:
        with self._lock:
            if n in self._polys:
                return
            self._polys[n] = poly
        if n <= self.self_test_bound:
            prod = IntPolynomial(1)
            for d in divisors(n):
                prod = prod * cyclotomic_poly(d, self)
            if prod != IntPolynomial.x_pow_minus_one(n):
                with self._lock:
                    del self._polys[n]
                raise ArithmeticError(f"cyclotomic self-test failed for n={n}")


_default_cache = CyclotomicCache()


def cyclotomic_poly(n: int, cache: CyclotomicCache | None = None) -> IntPolynomial:
    """Phi_n by exact division of x^n - 1 by the lower cyclotomic factors."""
    if n < 1:
        raise ValueError(f"cyclotomic_poly needs n >= 1, got {n}")
    if cache is None:
        cache = _default_cache
    hit = cache.get(n)
    if hit is not None:
        return hit
    poly = IntPolynomial.x_pow_minus_one(n)
    for d in divisors(n)[:-1]:
        q, r = poly.divmod_monic(cyclotomic_poly(d, cache))
        if not r.is_zero():
            raise ArithmeticError(f"inexact division computing Phi_{n} (by Phi_{d})")
        poly = q
    if poly.degree != euler_totient(n):
        raise ArithmeticError(f"deg Phi_{n} = {poly.degree} != phi({n})")
    cache.insert(n, poly)
    return poly


def mask_polynomial(A: Iterable[int]) -> IntPolynomial:
    """P_A(x) = sum_{a in A} x^a for a set of nonnegative integers."""
    elems = sorted(set(A))
    if elems and elems[0] < 0:
        raise ValueError("mask polynomial needs nonnegative exponents; translate by -min(A) first")
    if not elems:
        return IntPolynomial()
    coeffs = [0] * (elems[-1] + 1)
    for a in elems:
        coeffs[a] = 1
    return IntPolynomial(*coeffs)


def divides(d: IntPolynomial, p: IntPolynomial) -> bool:
    """Exact divisibility of p by a monic d over the integers."""
    if not d.is_monic():
        raise ValueError("only monic divisors are supported")
    return (p % d).is_zero()


def as_fraction(point: RationalLike) -> Fraction:
    if isinstance(point, Fraction):
        return point
    if isinstance(point, int):
        return Fraction(point)
    c, n = point
    if n == 0:
        raise ValueError("denominator must be nonzero")
    return Fraction(int(c), int(n))


def _vanishes_squarefree(terms: dict[int, int], primes: list[int]) -> bool:
    """Is sum_e terms[e] * w^e zero, w a primitive r-th root, r = prod(primes)?

    Exponents are residues mod r. Splits off one prime p via CRT: with
    w = z_p * z_m, the sum is sum_i z_p^i S_i, S_i in Q(z_m), and since
    1, z_p, ..., z_p^(p-2) is a basis over Q(z_m) it vanishes iff all S_i
    coincide.
    """
    if not terms:
        return True
    if not primes:
        return sum(terms.values()) == 0
    p = primes[-1]
    rest = primes[:-1]
    m = 1
    for q in rest:
        m *= q
    classes: dict[int, dict[int, int]] = {}
    for e, c in terms.items():
        bucket = classes.setdefault(e % p, {})
        key = e % m
        bucket[key] = bucket.get(key, 0) + c
    for bucket in classes.values():
        for key in [k for k, v in bucket.items() if v == 0]:
            del bucket[key]
    if len(classes) < p:
        # some S_i is the empty sum, so every S_i must vanish
        return all(_vanishes_squarefree(b, rest) for b in classes.values())
    first = classes[0]
    for i in range(1, p):
        diff = dict(classes[i])
        for key, v in first.items():
            diff[key] = diff.get(key, 0) - v
        diff = {k: v for k, v in diff.items() if v}
        if not _vanishes_squarefree(diff, rest):
            return False
    return True


def sum_vanishes_at_primitive_root(exponents: Iterable[int], d: int) -> bool:
    """Exact test of sum_e w^e == 0 for w a primitive d-th root of unity.

    Equivalent to Phi_d dividing sum_e x^(e mod d). Reduces d to its radical
    r (w^s, s = d/r, is a primitive r-th root and 1, w, ..., w^(s-1) is a
    basis of Q(w) over Q(w^s)), then decides the squarefree case by CRT.
    """
    if d < 1:
        raise ValueError("d must be positive")
    primes = prime_factors(d)
    r = 1
    for p in primes:
        r *= p
    s = d // r
    groups: dict[int, dict[int, int]] = {}
    for e in exponents:
        e %= d
        g = groups.setdefault(e % s, {})
        key = (e // s) % r
        g[key] = g.get(key, 0) + 1
    return all(_vanishes_squarefree(g, primes) for g in groups.values())


def vanishes_at(A: Iterable[int], point: RationalLike) -> bool:
    """Exactly decide sum_{a in A} exp(2 pi i c a / N) == 0 for point = c/N."""
    frac = as_fraction(point)
    elems = list(A)
    d = frac.denominator
    c = frac.numerator % d
    if d == 1:
        return len(elems) == 0
    return sum_vanishes_at_primitive_root((c * a for a in elems), d)


def vanishes_at_by_division(A: Iterable[int], point: RationalLike,
                            cache: CyclotomicCache | None = None) -> bool:
    """Same predicate as :func:`vanishes_at`, decided by explicit Phi_d division."""
    frac = as_fraction(point)
    d = frac.denominator
    c = frac.numerator % d
    coeffs = [0] * d
    for a in A:
        coeffs[(c * a) % d] += 1
    return divides(cyclotomic_poly(d, cache), IntPolynomial(*coeffs))
