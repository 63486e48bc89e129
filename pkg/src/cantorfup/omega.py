"""Counting gap-constrained index sets Omega_{q,k,L}.

Omega_{q,k,L} is indexed by tuples 0 <= s_1 < ... < s_q <= k-1 with
consecutive gaps s_{p+1} - s_p >= L + 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial


@dataclass(frozen=True)
class OmegaSpec:
    q: int
    k: int
    L: int

    def __post_init__(self):
        if self.q < 1 or self.k < 1 or self.L < 1:
            raise ValueError(f"q, k, L must all be >= 1, got {self}")

    @property
    def feasible(self) -> bool:
        return self.k - (self.q - 1) * self.L >= self.q


def _gap_tuples(q: int, k: int, L: int, start: int):
    if q == 0:
        yield ()
        return
    # room for the remaining q-1 entries after s
    last = k - 1 - (q - 1) * (L + 1)
    for s in range(start, last + 1):
        for rest in _gap_tuples(q - 1, k, L, s + L + 1):
            yield (s,) + rest


def enumerate_omega(spec: OmegaSpec, return_tuples: bool = False):
    """Depth-first count of the index tuples; optionally also the tuples."""
    if return_tuples:
        tuples = list(_gap_tuples(spec.q, spec.k, spec.L, 0))
        return len(tuples), tuples
    return sum(1 for _ in _gap_tuples(spec.q, spec.k, spec.L, 0))


def omega_formula(spec: OmegaSpec) -> int:
    """C(k - (q-1)L, q), zero when k - (q-1)L < q."""
    n = spec.k - (spec.q - 1) * spec.L
    return comb(n, spec.q) if n >= spec.q else 0


def superseded_formula(spec: OmegaSpec) -> Fraction | None:
    """(k-(q-1)L)! / (q! (k-qL)!), the earlier closed form; None where undefined."""
    top = spec.k - (spec.q - 1) * spec.L
    bottom = spec.k - spec.q * spec.L
    if top < 0 or bottom < 0:
        return None
    return Fraction(factorial(top), factorial(spec.q) * factorial(bottom))


def binom_identity_check(N: int, q: int) -> bool:
    """sum_{a=1}^N C(a+q-1, q) == C(N+q, q+1), both sides exact."""
    if N < 1 or q < 1:
        raise ValueError("N and q must be >= 1")
    return sum(comb(a + q - 1, q) for a in range(1, N + 1)) == comb(N + q, q + 1)


def omega_grid(q_max: int = 4, L_max: int = 4, k_max: int = 20) -> dict:
    """Compare enumeration against the closed form on the full grid."""
    points = []
    mismatches = []
    for q in range(1, q_max + 1):
        for L in range(1, L_max + 1):
            for k in range(1, k_max + 1):
                spec = OmegaSpec(q, k, L)
                enum = enumerate_omega(spec)
                formula = omega_formula(spec)
                points.append({"q": q, "k": k, "L": L, "enumerated": enum,
                               "formula": formula, "feasible": spec.feasible})
                if enum != formula:
                    mismatches.append((q, k, L))
    feasible = sum(1 for p in points if p["feasible"])
    return {
        "points": points,
        "total": len(points),
        "feasible": feasible,
        "matches": len(points) - len(mismatches),
        "mismatches": mismatches,
    }
