"""Cantor alphabets, their iterations, and Fourier transforms of the associated measures."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .cyclotomic import RationalLike, vanishes_at

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Alphabet:
    """Digit set with its modulus. Digits may lie outside {0, ..., M-1}."""

    modulus: int
    digits: tuple[int, ...]

    def __init__(self, modulus: int, digits: Iterable[int]):
        digits = tuple(sorted({int(d) for d in digits}))
        if modulus < 3:
            raise ValueError(f"modulus must be >= 3, got {modulus}")
        if not 1 < len(digits) < modulus:
            raise ValueError(f"need 1 < |digits| < M, got |digits|={len(digits)}, M={modulus}")
        object.__setattr__(self, "modulus", int(modulus))
        object.__setattr__(self, "digits", digits)

    @property
    def size(self) -> int:
        return len(self.digits)

    @property
    def delta(self) -> float:
        return math.log(self.size) / math.log(self.modulus)

    def in_standard_range(self) -> bool:
        return 0 <= self.digits[0] and self.digits[-1] < self.modulus

    def translated(self, t: int) -> Alphabet:
        return Alphabet(self.modulus, (d + t for d in self.digits))


@dataclass(frozen=True)
class IteratedAlphabet:
    """A_k = A + M A + ... + M^(k-1) A, kept as digit tuples.

    ``digit_tuples`` are in lexicographic order of (a_0, ..., a_{k-1}) and
    ``values[i]`` is the integer of ``digit_tuples[i]``. Distinct tuples may
    share a value when digits fall outside {0, ..., M-1}.
    """

    base: Alphabet
    k: int
    digit_tuples: tuple[tuple[int, ...], ...] = field(repr=False)
    values: tuple[int, ...] = field(repr=False)

    @property
    def elements(self) -> list[int]:
        return sorted(self.values)

    def __len__(self) -> int:
        return len(self.values)


def iterated_values(digits: Sequence[int], modulus: int, k: int) -> list[int]:
    """Values of all digit tuples of length k, in lexicographic tuple order."""
    vals = [0]
    for j in range(k):
        scale = modulus**j
        vals = [v + d * scale for v in vals for d in digits]
    return vals


def iterate(base: Alphabet, k: int) -> IteratedAlphabet:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    tuples = tuple(itertools.product(base.digits, repeat=k))
    values = tuple(iterated_values(base.digits, base.modulus, k))
    return IteratedAlphabet(base, k, tuples, values)


def reduce_mod(it: IteratedAlphabet) -> tuple[tuple[int, ...], bool]:
    """Residues of A_k modulo M^k, deduplicated, and whether any collided."""
    n = it.base.modulus**it.k
    residues = [v % n for v in it.values]
    unique = tuple(sorted(set(residues)))
    return unique, len(unique) < len(residues)


def _as_exact(xi) -> Fraction | None:
    if isinstance(xi, (int, np.integer)):
        return Fraction(int(xi))
    if isinstance(xi, Rational):
        return Fraction(xi)
    return None


def nu_hat(E: Iterable[int], xi) -> complex:
    """(1/|E|) sum_{a in E} exp(-2 pi i xi a).

    Rational ``xi`` (Fraction or int) gets exact phase reduction mod 1 before
    the trigonometric evaluation; floats are reduced in floating point.
    """
    elems = list(E)
    if not elems:
        raise ValueError("nu_hat needs a nonempty set")
    exact = _as_exact(xi)
    if exact is not None:
        q = exact.denominator
        p = exact.numerator
        phases = np.array([((p * a) % q) / q for a in elems], dtype=float)
    else:
        xi = float(xi)
        phases = np.array([(xi * a) % 1.0 for a in elems], dtype=float)
    return complex(np.exp(-1j * TWO_PI * phases).mean())


def nu_hat_residues(E: Sequence[int], residues: np.ndarray, modulus: int) -> np.ndarray:
    """Vectorized nu_hat_E(r / modulus) for an integer array of residues r."""
    r = np.asarray(residues)
    if r.dtype == object or modulus > 3_000_000_000:
        r = np.asarray(r, dtype=object) % modulus
        out = np.zeros(r.shape, dtype=complex)
        for a in E:
            ph = ((r * (a % modulus)) % modulus).astype(float) / modulus
            out += np.exp(-1j * TWO_PI * ph)
        return out / len(E)
    r = r.astype(np.int64) % modulus
    out = np.zeros(r.shape, dtype=complex)
    for a in E:
        ph = ((r * (int(a) % modulus)) % modulus).astype(float) / modulus
        out += np.exp(-1j * TWO_PI * ph)
    return out / len(E)


def nu_hat_is_zero(E: Iterable[int], point: RationalLike) -> bool:
    """Exact vanishing of nu_hat_E at a rational point.

    nu_hat uses exp(-2 pi i ...); vanishing is invariant under conjugation,
    so this is the same predicate as :func:`cyclotomic.vanishes_at`.
    """
    return vanishes_at(E, point)


@dataclass(frozen=True)
class TruncatedProduct:
    value: complex
    error_bound: float
    terms: int


def mu_hat_truncated(base: Alphabet, xi, J: int) -> TruncatedProduct:
    """prod_{j=1}^J nu_hat_A(M^-j xi) with a bound on the distance to the infinite product.

    Uses |nu_hat_A(eta) - 1| <= 2 pi |eta| max|a| on every omitted factor.
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    M = base.modulus
    exact = _as_exact(xi)
    value = 1.0 + 0.0j
    for j in range(1, J + 1):
        arg = exact / M**j if exact is not None else float(xi) / M**j
        value *= nu_hat(base.digits, arg)
    amax = max(abs(a) for a in base.digits)
    bound = TWO_PI * abs(float(xi)) * amax * float(M) ** (-J) / (M - 1)
    return TruncatedProduct(value, bound, J)
