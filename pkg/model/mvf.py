"""
Canonical sets, the Chinese remainder isomorphism and S-matching vector families.

All inner products are taken over the integers and reduced mod M; family
vectors are stored with entries in [0, M). Target sets always contain 0.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import galois
import numpy as np

from errors import BudgetExceededError, MvfError, ParameterError

logger = logging.getLogger(__name__)

MAX_CANONICAL_MODULUS = 10**6
DEFAULT_BUDGET = 10**6


# =============================================================================
# CANONICAL SETS AND CRT
# =============================================================================

@dataclass(frozen=True)
class CanonicalSet:
    """Idempotents {x : x^2 = x mod m}, sorted, 0 first."""
    modulus: int
    elements: tuple[int, ...]

    def __contains__(self, s: int) -> bool:
        return s % self.modulus in self.elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(s for s in self.elements if s)


def canonical_set(m: int) -> CanonicalSet:
    if m < 2:
        raise ParameterError(f"canonical set needs m >= 2, got {m}")
    if m > MAX_CANONICAL_MODULUS:
        raise ParameterError(f"canonical set enumeration capped at m <= {MAX_CANONICAL_MODULUS}, got {m}")
    x = np.arange(m, dtype=np.int64)
    idempotent = (x * x - x) % m == 0
    return CanonicalSet(m, tuple(int(s) for s in np.flatnonzero(idempotent)))


def crt(m: int, p: int, s1: int, s2: int) -> int:
    """The unique x mod mp with x = s1 mod m and x = s2 mod p."""
    if math.gcd(m, p) != 1:
        raise ParameterError(f"CRT needs coprime moduli, gcd({m}, {p}) = {math.gcd(m, p)}")
    return int(galois.crt([s1 % m, s2 % p], [m, p])) % (m * p)


def crt_split(x: int, m: int, p: int) -> tuple[int, int]:
    if math.gcd(m, p) != 1:
        raise ParameterError(f"CRT needs coprime moduli, gcd({m}, {p}) = {math.gcd(m, p)}")
    return x % m, x % p


# =============================================================================
# MATCHING VECTOR FAMILIES
# =============================================================================

@dataclass(frozen=True)
class MvFamily:
    """
    Pairs (u_i, v_i) over Z_M. The family is an S-matching vector family when
    <u_i, v_i> = 0 and <u_i, v_j> lies in S minus {0} for i != j; that property
    is checked by mvf_validate, not at construction.
    """
    modulus: int
    target: tuple[int, ...]
    u: tuple[tuple[int, ...], ...]
    v: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "target", tuple(sorted({s % self.modulus for s in self.target} | {0})))
        object.__setattr__(self, "u", tuple(tuple(int(x) for x in row) for row in self.u))
        object.__setattr__(self, "v", tuple(tuple(int(x) for x in row) for row in self.v))
        if self.modulus < 2:
            raise MvfError(f"family modulus must be >= 2, got {self.modulus}")
        if not self.u or len(self.u) != len(self.v):
            raise MvfError(f"family needs matching non-empty u and v lists ({len(self.u)} vs {len(self.v)})")
        k = len(self.u[0])
        for row in self.u + self.v:
            if len(row) != k:
                raise MvfError(f"vector {row} does not have dimension {k}")
            if any(not 0 <= x < self.modulus for x in row):
                raise MvfError(f"vector {row} has entries outside [0, {self.modulus})")

    @property
    def k(self) -> int:
        return len(self.u[0])

    @property
    def n(self) -> int:
        return len(self.u)

    def inner(self, i: int, j: int) -> int:
        """<u_i, v_j> mod M, 0-based indices."""
        return sum(a * b for a, b in zip(self.u[i], self.v[j])) % self.modulus

    def truncate(self, n: int) -> "MvFamily":
        if not 1 <= n <= self.n:
            raise MvfError(f"cannot take {n} pairs from a family of size {self.n}")
        return MvFamily(self.modulus, self.target, self.u[:n], self.v[:n])


@dataclass(frozen=True)
class MvfViolation:
    """First failing pair, 1-based, in row-major order."""
    i: int
    j: int
    value: int

    @property
    def reason(self) -> str:
        if self.i == self.j:
            return f"<u_{self.i}, v_{self.i}> = {self.value}, expected 0"
        return f"<u_{self.i}, v_{self.j}> = {self.value}, expected a nonzero element of S"


def mvf_validate(fam: MvFamily) -> Optional[MvfViolation]:
    """None when fam is an S-matching vector family, else its first violation."""
    U = np.array(fam.u, dtype=np.int64)
    V = np.array(fam.v, dtype=np.int64)
    gram = (U @ V.T) % fam.modulus
    allowed = np.zeros(fam.modulus, dtype=bool)
    allowed[[s for s in fam.target if s]] = True
    bad = ~allowed[gram]
    np.fill_diagonal(bad, np.diag(gram) != 0)
    hits = np.argwhere(bad)
    if hits.size == 0:
        return None
    i, j = (int(x) for x in hits[0])
    return MvfViolation(i + 1, j + 1, int(gram[i, j]))


def _dot(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    return sum(x * y for x, y in zip(a, b))


def mvf_bruteforce(
    M: int,
    S: Iterable[int],
    k: int,
    n_target: int,
    budget: int = DEFAULT_BUDGET,
) -> Optional[MvFamily]:
    """
    Depth-first search for an n_target-pair family in Z_M^k.

    Candidate pairs (u, v) with <u, v> = 0 are taken in lexicographic order and
    families are built from increasing candidate indices, so the result is the
    lexicographically first family. Returns None when no family exists; raises
    BudgetExceededError when the space or the number of search steps exceeds
    the budget.
    """
    if k < 1 or n_target < 1:
        raise ParameterError(f"need k >= 1 and n >= 1, got k={k}, n={n_target}")
    space = M ** (2 * k)
    if space > budget:
        raise BudgetExceededError(f"brute-force space {M}^{2 * k} = {space} exceeds budget {budget}")
    target = tuple(sorted({s % M for s in S} | {0}))
    nonzero = frozenset(s for s in target if s)
    vectors = list(itertools.product(range(M), repeat=k))
    candidates = [(u, v) for u in vectors for v in vectors if _dot(u, v) % M == 0]
    logger.debug("bruteforce M=%d k=%d n=%d: %d candidate pairs", M, k, n_target, len(candidates))

    chosen: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    steps = 0

    def extend(start: int) -> bool:
        nonlocal steps
        if len(chosen) == n_target:
            return True
        for index in range(start, len(candidates)):
            steps += 1
            if steps > budget:
                raise BudgetExceededError(f"brute-force search exceeded {budget} steps")
            u, v = candidates[index]
            if all(_dot(u, vj) % M in nonzero and _dot(uj, v) % M in nonzero for uj, vj in chosen):
                chosen.append((u, v))
                if extend(index + 1):
                    return True
                chosen.pop()
        return False

    if not extend(0):
        logger.debug("bruteforce M=%d k=%d n=%d: not found after %d steps", M, k, n_target, steps)
        return None
    fam = MvFamily(M, target, tuple(u for u, _ in chosen), tuple(v for _, v in chosen))
    violation = mvf_validate(fam)
    if violation is not None:
        raise MvfError(f"bruteforce produced an invalid family: {violation.reason}")
    return fam


def mvf_grolmusz(m: int, h: int, weight: int | None = None) -> MvFamily:
    """
    Set-system family over Z_m for squarefree m with at least two prime factors.

    Members are the w-subsets T of [h]; coordinates are the subsets J of [h]
    with |J| <= D. u_T[J] = [J in T] and v_T[J] = c_|J| [J in T], so that
    <u_T, v_T'> = sum_j c_j C(|T n T'|, j). The c_j are Newton coefficients of
    a function that is 0 mod p exactly when |T n T'| = w mod p, for every prime
    p of m, so the inner product is an idempotent and vanishes only on the
    diagonal.
    """
    if m < 2:
        raise MvfError(f"modulus must be >= 2, got {m}")
    primes, multiplicities = galois.factors(m)
    if len(primes) < 2 or any(e != 1 for e in multiplicities):
        raise MvfError(f"modulus {m} is not a squarefree product of at least two distinct primes")
    if h < 2:
        raise MvfError(f"size parameter must be >= 2, got {h}")
    w = weight if weight is not None else min(h // 2, m - 1)
    if not 1 <= w <= min(h - 1, m - 1):
        raise MvfError(f"weight {w} outside [1, {min(h - 1, m - 1)}]")
    degree = min(w, max(primes) - 1)

    coefficients = []
    for j in range(degree + 1):
        residues = []
        for p in primes:
            f = [0 if (i - w) % p == 0 else 1 for i in range(j + 1)]
            residues.append(sum((-1) ** (j - i) * math.comb(j, i) * f[i] for i in range(j + 1)) % p)
        coefficients.append(int(galois.crt(residues, [int(p) for p in primes])) % m)

    coordinates = [J for size in range(degree + 1) for J in itertools.combinations(range(h), size)]
    members = [frozenset(T) for T in itertools.combinations(range(h), w)]
    U = tuple(tuple(1 if T.issuperset(J) else 0 for J in coordinates) for T in members)
    V = tuple(tuple(coefficients[len(J)] if T.issuperset(J) else 0 for J in coordinates) for T in members)
    fam = MvFamily(m, canonical_set(m).elements, U, V)
    logger.debug("grolmusz m=%d h=%d w=%d: n=%d k=%d", m, h, w, fam.n, fam.k)
    violation = mvf_validate(fam)
    if violation is not None:
        raise MvfError(f"construction produced an invalid family: {violation.reason}")
    return fam
