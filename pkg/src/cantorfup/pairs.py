"""Exact predicates on alphabet pairs and the block-structure check of the Gram recursion."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cyclotomic import vanishes_at


class _ZeroOracle:
    """Memoized exact test of nu_hat_A(c / N) == 0 for one fixed A."""

    def __init__(self, A: Iterable[int]):
        self.A = tuple(sorted(set(A)))
        self._memo: dict[Fraction, bool] = {}

    def __call__(self, c: int, N: int) -> bool:
        frac = Fraction(c, N)
        frac = Fraction(frac.numerator % frac.denominator, frac.denominator)
        hit = self._memo.get(frac)
        if hit is None:
            hit = vanishes_at(self.A, frac)
            self._memo[frac] = hit
        return hit


def _sorted_set(X: Iterable[int]) -> list[int]:
    return sorted(set(int(x) for x in X))


def _check_modulus(M: int, minimum: int) -> None:
    if M < minimum:
        raise ValueError(f"modulus must be >= {minimum}, got {M}")


def spectral_witness(A: Iterable[int], B: Iterable[int], N: int,
                     zero: _ZeroOracle | None = None) -> tuple[int, int] | None:
    """First ordered (b, b') with b != b' and nu_hat_A((b-b')/N) != 0, or None."""
    _check_modulus(N, 1)
    zero = zero or _ZeroOracle(A)
    Bs = _sorted_set(B)
    for b in Bs:
        for bp in Bs:
            if b != bp and not zero(b - bp, N):
                return (b, bp)
    return None


def is_spectral_pair(A: Iterable[int], B: Iterable[int], N: int) -> bool:
    """Orthogonal columns of (exp(2 pi i a b / N)) with |A| = |B|."""
    if N <= 0:
        raise ValueError(f"N must be positive, got {N}")
    A, B = _sorted_set(A), _sorted_set(B)
    if len(A) != len(B):
        return False
    return spectral_witness(A, B, N) is None


def dsp_witness(A: Iterable[int], B: Iterable[int], M: int,
                zero: _ZeroOracle | None = None) -> tuple[int, int, int, int] | None:
    """First (b1, b1', b2, b2') in lexicographic order breaking the distributed spectral condition.

    For b1 != b1', the condition holds if nu_hat_A((b1-b1')/M) = 0, or if
    nu_hat_A((b1-b1')/M^2 + (b2-b2')/M) = 0 for every b2, b2' in B.
    """
    _check_modulus(M, 3)
    zero = zero or _ZeroOracle(A)
    Bs = _sorted_set(B)
    M2 = M * M
    for b1 in Bs:
        for b1p in Bs:
            if b1 == b1p:
                continue
            d = b1 - b1p
            if zero(d, M):
                continue
            for b2 in Bs:
                for b2p in Bs:
                    if not zero(d + M * (b2 - b2p), M2):
                        return (b1, b1p, b2, b2p)
    return None


def is_distributed_spectral_pair(A: Iterable[int], B: Iterable[int], M: int) -> bool:
    return dsp_witness(A, B, M) is None


def dj_witness(A: Iterable[int], B: Iterable[int], M: int,
               zero: _ZeroOracle | None = None) -> tuple[int, int] | None:
    _check_modulus(M, 3)
    zero = zero or _ZeroOracle(A)
    Bs = _sorted_set(B)
    for b in Bs:
        for bp in Bs:
            if b != bp and not zero(b - bp, M) and not zero(b - bp, M * M):
                return (b, bp)
    return None


def satisfies_dj_condition(A: Iterable[int], B: Iterable[int], M: int) -> bool:
    """nu_hat_A((b-b')/M) * nu_hat_A((b-b')/M^2) = 0 for all b != b'."""
    return dj_witness(A, B, M) is None


@dataclass(frozen=True)
class PairVerdict:
    A: tuple[int, ...]
    B: tuple[int, ...]
    modulus: int
    spectral_in_M: bool
    spectral_in_M2: bool
    distributed_spectral: bool
    dj_condition: bool
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "A": list(self.A),
            "B": list(self.B),
            "M": self.modulus,
            "spectral_in_M": self.spectral_in_M,
            "spectral_in_M2": self.spectral_in_M2,
            "distributed_spectral": self.distributed_spectral,
            "dj_condition": self.dj_condition,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
        }


def evaluate_pair(A: Iterable[int], B: Iterable[int], M: int) -> PairVerdict:
    _check_modulus(M, 3)
    A, B = tuple(_sorted_set(A)), tuple(_sorted_set(B))
    zero = _ZeroOracle(A)
    witnesses: dict[str, tuple] = {}
    equal = len(A) == len(B)

    w = spectral_witness(A, B, M, zero)
    spec_m = equal and w is None
    if w is not None:
        witnesses["spectral_in_M"] = w
    w = spectral_witness(A, B, M * M, zero)
    spec_m2 = equal and w is None
    if w is not None:
        witnesses["spectral_in_M2"] = w
    w = dsp_witness(A, B, M, zero)
    if w is not None:
        witnesses["distributed_spectral"] = w
    dsp = w is None
    w = dj_witness(A, B, M, zero)
    if w is not None:
        witnesses["dj_condition"] = w
    dj = w is None
    return PairVerdict(A, B, M, spec_m, spec_m2, dsp, dj, witnesses)


@dataclass(frozen=True)
class BlockReport:
    """Outcome of the block-diagonal check.

    ``off_diagonal_witness`` is (block row b1, block col b1', row within block,
    col within block) of the largest off-diagonal entry, when it exceeds ``tol``.
    """

    k: int
    off_diagonal_max: float
    diagonal_deviation_max: float
    tol: float
    off_diagonal_witness: tuple[int, int, int, int] | None

    @property
    def passed(self) -> bool:
        return self.off_diagonal_max <= self.tol and self.diagonal_deviation_max <= self.tol


def verify_block_structure(A, B, k: int, tol: float = 1e-10) -> BlockReport:
    """Compare F_k against the block-diagonal form (|A|/M) diag(F_{k-1}, ..., F_{k-1}).

    Blocks are indexed by the lowest digit of the B_k tuples.
    """
    from .norms import build_gram

    if k < 3:
        raise ValueError(f"block verification needs k >= 3, got {k}")
    Fk = build_gram(A, B, k).matrix
    Fk1 = build_gram(A, B, k - 1).matrix
    n = B.size
    s = Fk1.shape[0]
    blocks = Fk.reshape(n, s, n, s)
    scale = A.size / A.modulus

    off = np.abs(blocks).copy()
    idx = np.arange(n)
    off[idx, :, idx, :] = 0.0
    off_max = float(off.max()) if n > 1 else 0.0
    witness = None
    if n > 1 and off_max > tol:
        i, r, j, c = np.unravel_index(int(np.argmax(off)), off.shape)
        witness = (B.digits[i], B.digits[j], int(r), int(c))

    diag_dev = 0.0
    for i in range(n):
        diag_dev = max(diag_dev, float(np.abs(blocks[i, :, i, :] - scale * Fk1).max()))
    return BlockReport(k, off_max, diag_dev, tol, witness)


def unitary_defect(A: Sequence[int], B: Sequence[int], N: int) -> float:
    """max |U*U - I| for U = (1/sqrt|A|)(exp(2 pi i a b / N)); zero for a spectral pair."""
    A, B = _sorted_set(A), _sorted_set(B)
    ab = np.array([[(a * b) % N for b in B] for a in A], dtype=float)
    U = np.exp(2j * np.pi * ab / N) / np.sqrt(len(A))
    return float(np.abs(U.conj().T @ U - np.eye(len(B))).max())
