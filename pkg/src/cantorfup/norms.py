"""Gram matrices F_k, operator norms of Cantor DFT submatrices, and exponent estimates.

H_k is the submatrix of the unitary DFT on Z_{M^k} with rows A_k and columns
B_k; F_k = H_k^* H_k. Rows and columns are indexed by digit tuples in
lexicographic order (lowest digit slowest), so the leading-digit blocks of
F_k are contiguous.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .cantor import Alphabet, TWO_PI, iterated_values, nu_hat, nu_hat_residues

DEFAULT_DENSE_LIMIT = 4096
RESTART_SEED = 0x5EED
_INT64_SAFE = 3_000_000_000


class DenseLimitError(ValueError):
    """Raised when a dense Gram matrix would exceed the configured size."""


class PowerIterationError(RuntimeError):
    def __init__(self, message: str, last_quotients: tuple[float, float]):
        super().__init__(message)
        self.last_quotients = last_quotients


class NormComputationError(RuntimeError):
    """Failure inside a norm sequence; ``partial`` holds the completed prefix."""

    def __init__(self, message: str, partial: NormSequence):
        super().__init__(message)
        self.partial = partial


def _check_pair(A: Alphabet, B: Alphabet) -> int:
    if A.modulus != B.modulus:
        raise ValueError(f"alphabets use different moduli ({A.modulus} vs {B.modulus})")
    return A.modulus


def _residues(values: np.ndarray | list, modulus: int) -> np.ndarray:
    if modulus <= _INT64_SAFE and all(abs(int(v)) < 2**62 for v in (np.min(values), np.max(values))):
        return np.asarray(values, dtype=np.int64) % modulus
    return np.asarray([int(v) % modulus for v in np.ravel(values)], dtype=object).reshape(np.shape(values))


def _phases(x: Sequence[int], y: Sequence[int], modulus: int) -> np.ndarray:
    """Float array of ((x_i * y_j) mod modulus) / modulus, reduced exactly."""
    if modulus <= _INT64_SAFE:
        xr = np.asarray([int(v) % modulus for v in x], dtype=np.int64)
        yr = np.asarray([int(v) % modulus for v in y], dtype=np.int64)
        return ((xr[:, None] * yr[None, :]) % modulus).astype(float) / modulus
    out = np.empty((len(x), len(y)), dtype=float)
    for i, xv in enumerate(x):
        for j, yv in enumerate(y):
            out[i, j] = ((int(xv) * int(yv)) % modulus) / modulus
    return out


def gram_entry(A: Alphabet, B: Alphabet, k: int,
               b: Sequence[int], bp: Sequence[int]) -> complex:
    """(|A|/M)^k prod_{j=1}^k nu_hat_A((b - b')/M^j) for digit tuples b, b'."""
    M = _check_pair(A, B)
    if len(b) != k or len(bp) != k:
        raise ValueError("digit tuples must have length k")
    diff = sum((x - y) * M**j for j, (x, y) in enumerate(zip(b, bp)))
    value = 1.0 + 0.0j
    for j in range(1, k + 1):
        value *= nu_hat(A.digits, Fraction(diff, M**j))
    return (A.size / M) ** k * value


def scale_table(A: Alphabet, B: Alphabet, j: int) -> np.ndarray:
    """T_j[u, v] = nu_hat_A((u - v) / M^j) over B_j values, Hermitian by construction."""
    M = A.modulus
    vals = iterated_values(B.digits, M, j)
    Q = M**j
    res = _residues(vals, Q)
    diff = (res[:, None] - res[None, :]) % Q
    uniq, inv = np.unique(diff, return_inverse=True)
    table = nu_hat_residues(A.digits, uniq, Q)[inv].reshape(diff.shape)
    upper = np.triu(table, 1)
    out = upper + upper.conj().T
    np.fill_diagonal(out, 1.0)
    return out


@dataclass(frozen=True)
class GramMatrix:
    A: Alphabet
    B: Alphabet
    k: int
    matrix: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def digit_tuples(self) -> list[tuple[int, ...]]:
        import itertools
        return list(itertools.product(self.B.digits, repeat=self.k))


def build_gram(A: Alphabet, B: Alphabet, k: int,
               dense_limit: int = DEFAULT_DENSE_LIMIT) -> GramMatrix:
    """Materialize F_k from the per-scale product formula."""
    M = _check_pair(A, B)
    if k < 1:
        raise ValueError("k must be >= 1")
    n = B.size
    dim = n**k
    if dim > dense_limit:
        raise DenseLimitError(
            f"F_{k} has dimension {dim} > dense limit {dense_limit}; use the matrix-free path "
            "(submatrix_norm with a smaller dense_limit or gram_matvec)")
    F = np.ones((dim, dim), dtype=complex)
    for j in range(1, k + 1):
        T = scale_table(A, B, j)
        view = F.reshape(n**j, n ** (k - j), n**j, n ** (k - j))
        view *= T[:, None, :, None]
    F *= (A.size / M) ** k
    return GramMatrix(A, B, k, F)


class CantorTransform:
    """Matrix-free y = sum_x exp(2 pi i x y / M^k) v(x) from X_k to Y_k.

    Digit recursion: with x = x_low + M^(k-1) x_top and y = y_0 + M y_high,
    x y / M^k = x_top y_0 / M + x_low y_0 / M^k + x_low y_high / M^(k-1) mod 1,
    so each level is a small DFT on the top input digit, a twiddle, and a
    transform of order k-1. Costs O(k n^(k+1)) instead of O(n^(2k)).
    """

    def __init__(self, in_digits: Sequence[int], out_digits: Sequence[int], modulus: int, k: int):
        self.n_in = len(in_digits)
        self.n_out = len(out_digits)
        self.k = k
        self.levels = []
        small = np.exp(1j * TWO_PI * _phases(in_digits, out_digits, modulus))
        for kk in range(k, 0, -1):
            x_low = iterated_values(in_digits, modulus, kk - 1)
            tw = np.exp(1j * TWO_PI * _phases(x_low, out_digits, modulus**kk))
            self.levels.append((small, tw))

    def __call__(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        squeeze = v.ndim == 1
        x = v.reshape(1, -1) if squeeze else v
        batch0 = x.shape[0]
        batch = batch0
        for small, tw in self.levels:
            x = x.reshape(batch, -1, self.n_in) @ small
            x *= tw
            x = x.transpose(0, 2, 1).reshape(batch * self.n_out, -1)
            batch *= self.n_out
        out = x.reshape(batch0, -1)
        return out[0] if squeeze else out


def submatrix_operator(A: Alphabet, B: Alphabet, k: int) -> tuple[Callable, Callable]:
    """Return (H, H^*) as functions for H = 1_{A_k} F_{M^k} 1_{B_k}."""
    M = _check_pair(A, B)
    fwd = CantorTransform(B.digits, A.digits, M, k)
    back = CantorTransform(A.digits, B.digits, M, k)
    norm = float(M) ** (-k / 2)

    def H(v):
        return norm * fwd(v)

    def H_adj(w):
        return norm * np.conj(back(np.conj(w)))

    return H, H_adj


def gram_matvec(A: Alphabet, B: Alphabet, k: int) -> Callable[[np.ndarray], np.ndarray]:
    H, H_adj = submatrix_operator(A, B, k)
    return lambda v: H_adj(H(v))


def power_iteration(matvec: Callable[[np.ndarray], np.ndarray], dim: int, *,
                    scale: float = 1.0, tol: float = 1e-10, max_iter: int = 100_000,
                    consecutive: int = 3, seed: int = RESTART_SEED) -> tuple[float, int]:
    """Largest eigenvalue of a PSD operator; returns (eigenvalue, iterations).

    Starts from the normalized all-ones vector. Converged once successive
    Rayleigh quotients agree to relative ``tol`` on ``consecutive`` steps in
    a row. A start vector annihilated by the operator triggers one restart
    from a seeded random vector.
    """
    v = np.ones(dim, dtype=complex) / math.sqrt(dim)
    restarted = False
    prev = prev2 = float("nan")
    streak = 0
    for it in range(1, max_iter + 1):
        w = matvec(v)
        rq = float(np.vdot(v, w).real)
        wn = float(np.linalg.norm(w))
        if wn <= 1e-13 * scale:
            if restarted:
                return 0.0, it
            rng = np.random.default_rng(seed)
            v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            v /= np.linalg.norm(v)
            restarted = True
            prev = prev2 = float("nan")
            streak = 0
            continue
        if abs(rq - prev) <= tol * abs(rq):
            streak += 1
            if streak >= consecutive:
                return rq, it
        else:
            streak = 0
        prev2, prev = prev, rq
        v = w / wn
    raise PowerIterationError(
        f"power iteration did not converge in {max_iter} iterations", (prev2, prev))


def submatrix_norm(A: Alphabet, B: Alphabet, k: int,
                   dense_limit: int = DEFAULT_DENSE_LIMIT, tol: float = 1e-10,
                   max_iter: int = 100_000) -> float:
    """Largest singular value of H_k = 1_{A_k} F_{M^k} 1_{B_k}."""
    M = _check_pair(A, B)
    if k < 1:
        raise ValueError("k must be >= 1")
    dim = B.size**k
    if dim <= dense_limit:
        F = build_gram(A, B, k, dense_limit).matrix
        lam = float(np.linalg.eigvalsh(F)[-1])
    else:
        lam, _ = power_iteration(gram_matvec(A, B, k), dim,
                                 scale=(A.size / M) ** k, tol=tol, max_iter=max_iter)
    return math.sqrt(max(lam, 0.0))


@dataclass
class NormSequence:
    A: Alphabet
    B: Alphabet
    ks: list[int] = field(default_factory=list)
    norms: list[float] = field(default_factory=list)
    rescaled: list[float | None] = field(default_factory=list)
    betas: list[float | None] = field(default_factory=list)

    @property
    def equal_sizes(self) -> bool:
        return self.A.size == self.B.size

    @property
    def delta(self) -> float | None:
        return self.A.delta if self.equal_sizes else None

    @property
    def most_uncertain_exponent(self) -> float | None:
        """(1 - delta) / 2, the largest possible exponent."""
        return (1.0 - self.A.delta) / 2.0 if self.equal_sizes else None

    def rows(self) -> list[dict]:
        return [
            {"k": k, "norm": n, "rescaled": r, "beta": b}
            for k, n, r, b in zip(self.ks, self.norms, self.rescaled, self.betas)
        ]


def beta_sequence(A: Alphabet, B: Alphabet, k_max: int,
                  dense_limit: int = DEFAULT_DENSE_LIMIT, tol: float = 1e-10) -> NormSequence:
    """Norms, rescaled norms norm_k M^(k(1-delta)/2), and beta_k = -log norm_k / (k log M)."""
    M = _check_pair(A, B)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    seq = NormSequence(A, B)
    for k in range(1, k_max + 1):
        try:
            nk = submatrix_norm(A, B, k, dense_limit=dense_limit, tol=tol)
        except (PowerIterationError, DenseLimitError, MemoryError) as exc:
            raise NormComputationError(f"norm at k={k} failed: {exc}", seq) from exc
        seq.ks.append(k)
        seq.norms.append(nk)
        if seq.equal_sizes:
            # M^(k(1-delta)/2) = (M/|A|)^(k/2)
            seq.rescaled.append(nk * (M / A.size) ** (k / 2))
            seq.betas.append(-math.log(nk) / (k * math.log(M)))
        else:
            seq.rescaled.append(None)
            seq.betas.append(None)
    return seq


WITNESS_ENUMERATION_LIMIT = 10**6


def witness_point(B: Alphabet, k: int, b1p: int, b2p: int) -> int:
    """b' = sum_{j<k} (b1' + M b2') M^(2j), the repeated digit pair of length 2k."""
    M = B.modulus
    block = b1p + M * b2p
    return sum(block * M ** (2 * j) for j in range(k))


def witness_lower_bound(A: Alphabet, B: Alphabet, k: int, b1p: int, b2p: int) -> float:
    """Squared norm of H_{2k}^* applied to the unit exponential vector at b'.

    Equals (|A|/M)^(2k) sum_{b in B_2k} |prod_{j=1}^{2k} nu_hat_A((b - b')/M^j)|^2,
    a lower bound for norm_{2k}^2.
    """
    M = _check_pair(A, B)
    if k < 1:
        raise ValueError("k must be >= 1")
    if b1p not in B.digits or b2p not in B.digits:
        raise ValueError("b1' and b2' must be digits of B")
    count = B.size ** (2 * k)
    if count > WITNESS_ENUMERATION_LIMIT:
        raise DenseLimitError(f"|B|^(2k) = {count} exceeds enumeration limit {WITNESS_ENUMERATION_LIMIT}")
    bp = witness_point(B, k, b1p, b2p)
    vals = iterated_values(B.digits, M, 2 * k)
    prod = np.ones(count, dtype=float)
    for j in range(1, 2 * k + 1):
        Q = M**j
        res = _residues([v - bp for v in vals], Q)
        uniq, inv = np.unique(res, return_inverse=True)
        prod *= np.abs(nu_hat_residues(A.digits, uniq, Q))[inv] ** 2
    return (A.size / M) ** (2 * k) * float(prod.sum())
