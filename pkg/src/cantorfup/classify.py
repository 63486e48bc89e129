"""Spectral pairs in Z_{M^2} and exhaustive search for distributed spectral pairs.

The search only depends on A through which cyclotomic polynomials Phi_d,
d | M^2, divide the mask polynomial P_A (its "signature"): that set fixes
every zero of nu_hat_A at denominators M and M^2. Candidate sets A are
grouped by signature, and the B-side search runs once per group.
"""
from __future__ import annotations

import itertools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb, gcd

import numpy as np

from .cyclotomic import (IntPolynomial, cyclotomic_poly, divisors, euler_totient,
                         prime_factors)
from .pairs import PairVerdict, evaluate_pair, is_distributed_spectral_pair, is_spectral_pair

log = logging.getLogger(__name__)

TAG_SPECTRAL_M = "spectral-in-Z_M"
TAG_SPECTRAL_M2_ONLY = "spectral-in-Z_M2-only"
TAG_OTHER = "other-DSP"
TAGS = (TAG_SPECTRAL_M, TAG_SPECTRAL_M2_ONLY, TAG_OTHER)

DEFAULT_CANDIDATE_LIMIT = 3_000_000
_CHUNK = 100_000


class VerificationError(RuntimeError):
    """A constructed or enumerated object failed its exact re-verification."""


class InfeasibleSearchError(ValueError):
    def __init__(self, message: str, estimate: int):
        super().__init__(message)
        self.estimate = estimate


# ---------------------------------------------------------------------------
# Spectral pairs {0, a}, {0, b} in Z_{M^2}
# ---------------------------------------------------------------------------

PROV_ENUMERATED = "enumerated"
PROV_CASE_1 = "constructed-case-1"
PROV_CASE_2 = "constructed-case-2"
PROV_CASE_3 = "constructed-case-3"


@dataclass
class M2PairFamily:
    modulus: int
    pairs: list[tuple[int, int]] = field(default_factory=list)
    provenance: dict[tuple[int, int], str] = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "M": self.modulus,
            "pairs": [{"a": a, "b": b, "provenance": self.provenance[(a, b)]} for a, b in self.pairs],
            "note": self.note,
        }


def construct_case_prime_power_times_q(alpha: int, q: int) -> list[tuple[int, int, int]]:
    """(a, b, u) = (2^u q^2, 2^(2 alpha - u - 1), u) for each u with 2^(alpha-u-1) < q < 2^(alpha-u)."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    if q % 2 == 0 or prime_factors(q) != [q]:
        raise ValueError(f"q must be an odd prime, got {q}")
    out = []
    for u in range(alpha):
        if 2 ** (alpha - u - 1) < q < 2 ** (alpha - u):
            out.append((2**u * q * q, 2 ** (2 * alpha - u - 1), u))
    return out


@dataclass(frozen=True)
class CaseConstruction:
    a: int | None
    b: int | None
    accepted: bool
    reason: str = ""


def construct_case_squarefree(primes, S0, S1, S2) -> CaseConstruction:
    """a = 2 prod_{S0} p^2 prod_{S1} p, b = prod_{S1} p prod_{S2} p^2 when prod_{S0} < prod_{S2} < 2 prod_{S0}."""
    primes = set(primes)
    S0, S1, S2 = set(S0), set(S1), set(S2)
    if any(p % 2 == 0 or prime_factors(p) != [p] for p in primes):
        raise ValueError("primes must be distinct odd primes")
    if S0 & S1 or S0 & S2 or S1 & S2 or (S0 | S1 | S2) != primes:
        raise ValueError("S0, S1, S2 must partition the primes")
    p0 = _prod(S0)
    p1 = _prod(S1)
    p2 = _prod(S2)
    if not p0 < p2:
        return CaseConstruction(None, None, False, f"prod(S0)={p0} < prod(S2)={p2} fails")
    if not p2 < 2 * p0:
        return CaseConstruction(None, None, False, f"prod(S2)={p2} < 2*prod(S0)={2 * p0} fails")
    return CaseConstruction(2 * p0 * p0 * p1, p1 * p2 * p2, True)


def construct_case_two_primes(p: int, q: int) -> tuple[int, int] | None:
    """(2p^2, q^2) for M = 2pq, p < q, when q < 2p."""
    if not p < q:
        raise ValueError("need p < q")
    return (2 * p * p, q * q) if q < 2 * p else None


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def _factor_exponents(n: int) -> dict[int, int]:
    out = {}
    for p in prime_factors(n):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out[p] = e
    return out


def constructions_for_modulus(M: int) -> tuple[str | None, set[tuple[int, int]]]:
    """All (a, b) the construction cases produce for M, closed under swapping, with the case tag.

    Returns (None, empty) when M has none of the covered shapes.
    """
    fac = _factor_exponents(M)
    odd = {p: e for p, e in fac.items() if p != 2}
    alpha = fac.get(2, 0)
    if alpha == 0:
        return None, set()
    found: set[tuple[int, int]] = set()
    if alpha == 1 and odd and all(e == 1 for e in odd.values()):
        ps = sorted(odd)
        if len(ps) == 2:
            hit = construct_case_two_primes(ps[0], ps[1])
            if hit:
                found.add(hit)
            tag = PROV_CASE_3
        else:
            for labels in itertools.product((0, 1, 2), repeat=len(ps)):
                parts = [[p for p, l in zip(ps, labels) if l == i] for i in range(3)]
                res = construct_case_squarefree(ps, *parts)
                if res.accepted:
                    found.add((res.a, res.b))
            tag = PROV_CASE_2
    elif len(odd) == 1 and next(iter(odd.values())) == 1:
        q = next(iter(odd))
        for a, b, _ in construct_case_prime_power_times_q(alpha, q):
            found.add((a, b))
        tag = PROV_CASE_1
    else:
        return None, set()
    found |= {(b, a) for a, b in found}
    return tag, found


def spectral_pairs_in_M2(M: int) -> M2PairFamily:
    """All ({0,a}, {0,b}) with 0 < a, b < M and 2ab = M^2, each re-verified exactly."""
    if M < 2:
        raise ValueError("M must be >= 2")
    fam = M2PairFamily(M)
    if M % 2:
        fam.note = "M odd: 2ab = M^2 has no integer solution"
        return fam
    half = M * M // 2
    tag, constructed = constructions_for_modulus(M)
    for a in range(1, M):
        if half % a:
            continue
        b = half // a
        if not 0 < b < M:
            continue
        A, B = (0, a), (0, b)
        if not is_spectral_pair(A, B, M * M):
            raise VerificationError(f"({A}, {B}) is not spectral in Z_{M * M}")
        if M >= 3 and not is_distributed_spectral_pair(A, B, M):
            raise VerificationError(f"({A}, {B}) is not a distributed spectral pair in Z_{M}")
        fam.pairs.append((a, b))
        fam.provenance[(a, b)] = tag if (a, b) in constructed else PROV_ENUMERATED
    if tag is not None and set(fam.pairs) != constructed:
        raise VerificationError(
            f"enumeration {sorted(fam.pairs)} disagrees with construction {sorted(constructed)} for M={M}")
    return fam


def product_form_example(m: int) -> tuple[int, tuple[int, ...], tuple[int, ...], PairVerdict]:
    """M = 8m, A = {0, 1, 16, 17}, B = {0, b, 2b, 3b} with b = 2m^2, m odd > 1."""
    if m <= 1 or m % 2 == 0:
        raise ValueError(f"m must be an odd integer > 1, got {m}")
    M = 8 * m
    b = 2 * m * m
    A = (0, 1, 16, 17)
    B = (0, b, 2 * b, 3 * b)
    verdict = evaluate_pair(A, B, M)
    if not verdict.distributed_spectral or verdict.spectral_in_M or verdict.spectral_in_M2:
        raise VerificationError(f"product-form pair for m={m} has unexpected verdict {verdict}")
    return M, A, B, verdict


# ---------------------------------------------------------------------------
# Exhaustive search
# ---------------------------------------------------------------------------

def _residue_rows(M: int, ds: list[int]) -> np.ndarray:
    """Row a holds the coefficients of x^a mod Phi_d for every d in ds, concatenated."""
    blocks = []
    for d in ds:
        phi = cyclotomic_poly(d)
        rows = np.zeros((M, euler_totient(d)), dtype=np.int64)
        for a in range(M):
            r = IntPolynomial.monomial(a) % phi
            rows[a, : len(r.coeffs)] = r.coeffs
        blocks.append(rows)
    return np.concatenate(blocks, axis=1)


def candidate_divisors(M: int) -> list[int]:
    """d | M^2, d > 1, with deg Phi_d <= M - 1 (only these can divide P_A for A in [0, M))."""
    return [d for d in divisors(M * M) if d > 1 and euler_totient(d) <= M - 1]


def _signature_chunks(M: int, s: int):
    """Yield (candidate sets A, divisibility bitmasks) in chunks, A = {0} + (s-1)-subset of {1..M-1}."""
    ds = candidate_divisors(M)
    combos = itertools.combinations(range(1, M), s - 1)
    if not ds:
        while chunk := list(itertools.islice(combos, _CHUNK)):
            yield chunk, np.zeros(len(chunk), dtype=np.int64)
        return
    R = _residue_rows(M, ds)
    bounds = np.cumsum([0] + [euler_totient(d) for d in ds])
    while chunk := list(itertools.islice(combos, _CHUNK)):
        if s > 1:
            idx = np.asarray(chunk, dtype=np.int64).reshape(len(chunk), s - 1)
            sums = R[0] + R[idx].sum(axis=1)
        else:
            sums = np.tile(R[0], (len(chunk), 1))
        mask = np.zeros(len(chunk), dtype=np.int64)
        for i in range(len(ds)):
            seg = sums[:, bounds[i]: bounds[i + 1]]
            mask |= (~seg.any(axis=1)).astype(np.int64) << i
        yield chunk, mask


def signatures_for_size(M: int, s: int) -> dict[int, list[tuple[int, ...]]]:
    """Group all A = {0} + (s-1)-subset of {1..M-1} by divisibility bitmask over candidate_divisors."""
    groups: dict[int, list[tuple[int, ...]]] = {}
    for chunk, mask in _signature_chunks(M, s):
        for sig in np.unique(mask):
            rows = np.nonzero(mask == sig)[0]
            groups.setdefault(int(sig), []).extend((0,) + chunk[r] for r in rows)
    return groups


def zero_set(M: int, signature: int, ds: list[int]) -> np.ndarray:
    """Boolean Z over Z_{M^2}: Z[c] iff nu_hat_A(c / M^2) = 0."""
    N = M * M
    divs = {d for i, d in enumerate(ds) if signature >> i & 1}
    return np.array([N // gcd(c, N) in divs for c in range(N)], dtype=bool)


class _BSearch:
    """Backtracking over B subset of [0, M) with 0 in B, for one zero set.

    ``mode='dsp'``: for every difference e != 0 of B, either nu_hat_A(e/M) = 0
    or e + M (B - B) lies in the zero set; the second branch only depends on
    (B - B) mod M, tracked as a bitmask. ``mode='spectral_M2'``: every
    difference is a zero at denominator M^2. Both properties pass to
    subsets, so partial sets are pruned.
    """

    def __init__(self, M: int, Z: np.ndarray, mode: str):
        self.M = M
        N = M * M
        self.mode = mode
        self.first = [bool(Z[(e * M) % N]) for e in range(M)]
        self.at_m2 = [bool(Z[e % N]) for e in range(M)]
        full = (1 << M) - 1
        self.good_shift = []
        for e in range(M):
            mask = 0
            for t in range(M):
                if Z[(e + M * t) % N]:
                    mask |= 1 << t
            self.good_shift.append(mask)
        self.full = full

    def _pair_ok(self, e: int) -> bool:
        if self.mode == "dsp":
            return self.first[e] or self.at_m2[e]
        return self.at_m2[e]

    def search(self, size: int) -> list[tuple[int, ...]]:
        M = self.M
        out: list[tuple[int, ...]] = []
        if self.mode == "dsp" and not any(self.first[1:]) and not any(self.at_m2[1:]):
            return out

        def diff_mask(B):
            m = 0
            for x in B:
                for y in B:
                    m |= 1 << ((x - y) % M)
            return m

        def ok(B, second_needed, dmask):
            for e in second_needed:
                if dmask & ~self.good_shift[e] & self.full:
                    return False
            return True

        def rec(B, start, second_needed, dmask):
            if len(B) == size:
                out.append(tuple(B))
                return
            for x in range(start, M - (size - len(B)) + 1):
                new_need = list(second_needed)
                good = True
                for y in B:
                    e = x - y
                    if not self._pair_ok(e):
                        good = False
                        break
                    if self.mode == "dsp" and not self.first[e]:
                        new_need.append(e)
                if not good:
                    continue
                B.append(x)
                nmask = dmask
                for y in B:
                    nmask |= 1 << ((x - y) % M) | 1 << ((y - x) % M)
                if self.mode != "dsp" or ok(B, new_need, nmask):
                    rec(B, x + 1, new_need, nmask)
                B.pop()

        rec([0], 1, [], 1)
        return out


@dataclass(frozen=True)
class ClassifiedPair:
    A: tuple[int, ...]
    B: tuple[int, ...]
    tag: str
    partner_found: bool

    def to_dict(self) -> dict:
        return {"A": list(self.A), "B": list(self.B), "tag": self.tag,
                "partner_found": self.partner_found}


@dataclass
class ClassificationReport:
    modulus: int
    sizes: list[int]
    digit_range: tuple[int, int]
    a_candidates: int
    pairs: list[ClassifiedPair] = field(default_factory=list)
    ordered_pairs_found: int = 0
    conjecture_counterexamples: list[ClassifiedPair] = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        out = {t: 0 for t in TAGS}
        for p in self.pairs:
            out[p.tag] += 1
        return out

    def with_tag(self, tag: str) -> list[ClassifiedPair]:
        return [p for p in self.pairs if p.tag == tag]

    def to_dict(self) -> dict:
        return {
            "M": self.modulus,
            "search_space": {
                "digit_range": list(self.digit_range),
                "sizes": self.sizes,
                "canonical": "0 in A and 0 in B; one representative per duality class (A,B)~(B,A)",
                "a_candidates": self.a_candidates,
            },
            "counts": self.counts(),
            "ordered_pairs_found": self.ordered_pairs_found,
            "pairs": [p.to_dict() for p in self.pairs],
            "conjecture_probe": {
                "consistent": not self.conjecture_counterexamples,
                "counterexamples": [p.to_dict() for p in self.conjecture_counterexamples],
            },
        }


def estimate_candidates(M: int, sizes) -> int:
    return sum(comb(M - 1, s - 1) for s in sizes)


def _pairs_for_size(args) -> list[tuple[tuple[int, ...], tuple[int, ...], str]]:
    M, s, mode = args
    ds = candidate_divisors(M)
    # signature -> [(B, tag)], computed once per distinct zero set
    memo: dict[int, list[tuple[tuple[int, ...], str]]] = {0: []}
    found = []
    for chunk, mask in _signature_chunks(M, s):
        for sig in np.unique(mask):
            sig = int(sig)
            if sig not in memo:
                memo[sig] = _tagged_partners(M, sig, ds, mode, s)
            partners = memo[sig]
            if not partners:
                continue
            for r in np.nonzero(mask == sig)[0]:
                A = (0,) + chunk[r]
                found.extend((A, B, tag) for B, tag in partners)
    return found


def _tagged_partners(M: int, sig: int, ds: list[int], mode: str, s: int):
    searcher = _BSearch(M, zero_set(M, sig, ds), mode)
    out = []
    for B in searcher.search(s):
        diffs = [x - y for x in B for y in B if x > y]
        if all(searcher.first[e] for e in diffs):
            tag = TAG_SPECTRAL_M
        elif all(searcher.at_m2[e] for e in diffs):
            tag = TAG_SPECTRAL_M2_ONLY
        else:
            tag = TAG_OTHER
        out.append((B, tag))
    return out


def _run_sizes(M: int, sizes: list[int], mode: str, threads: int):
    jobs = [(M, s, mode) for s in sizes]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_pairs_for_size, jobs))
    else:
        results = [_pairs_for_size(j) for j in jobs]
    return [p for chunk in results for p in chunk]


def _check_feasible(M: int, sizes: list[int], limit: int, override: bool) -> int:
    est = estimate_candidates(M, sizes)
    if est > limit and not override:
        raise InfeasibleSearchError(
            f"search over {est} candidate sets A exceeds limit {limit} for M={M}; "
            "restrict sizes or override", est)
    if est > limit:
        log.warning("running oversized search (%d candidate sets A) for M=%d", est, M)
    return est


def _normalize_sizes(M: int, size_range) -> list[int]:
    sizes = sorted(set(size_range)) if size_range is not None else list(range(2, M))
    return [s for s in sizes if 1 < s < M]


def search_dsp(M: int, size_range=None, *, threads: int = 1,
               candidate_limit: int = DEFAULT_CANDIDATE_LIMIT,
               override: bool = False) -> ClassificationReport:
    """Every distributed spectral pair A, B in [0, M) with 0 in A and B and |A| = |B| in size_range."""
    if M < 3:
        raise ValueError("M must be >= 3")
    sizes = _normalize_sizes(M, size_range)
    est = _check_feasible(M, sizes, candidate_limit, override)
    found = _run_sizes(M, sizes, "dsp", threads)

    ordered = {(A, B): tag for A, B, tag in found}
    report = ClassificationReport(M, sizes, (0, M - 1), est, ordered_pairs_found=len(ordered))
    seen = set()
    for (A, B), tag in sorted(ordered.items(), key=lambda kv: (len(kv[0][0]), kv[0])):
        key = min((A, B), (B, A))
        if key in seen:
            continue
        seen.add(key)
        partner = (B, A) in ordered
        pair = ClassifiedPair(key[0], key[1], ordered.get(key, tag), partner)
        report.pairs.append(pair)
        if pair.tag == TAG_OTHER:
            report.conjecture_counterexamples.append(pair)
            log.warning("conjecture probe: DSP pair neither spectral in Z_M nor Z_M^2: %s", pair)
    return report


def search_spectral_in_M2(M: int, size_range=None, *, threads: int = 1,
                          candidate_limit: int = DEFAULT_CANDIDATE_LIMIT,
                          override: bool = False) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ordered (A, B) in [0, M) with 0 in A and B, |A| = |B|, spectral in Z_{M^2}."""
    sizes = _normalize_sizes(M, size_range)
    _check_feasible(M, sizes, candidate_limit, override)
    return sorted({(A, B) for A, B, _ in _run_sizes(M, sizes, "spectral_M2", threads)})


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CANTORFUP_THREADS", "1")))
    except ValueError:
        return 1
