"""
S-decoding polynomials and 0-interpolating sets.

A decoding polynomial P(Y) = sum_j e_j Y^{d_j} satisfies P(1) = 1 and
P(gamma^s) = 0 for s in S minus {0}. Its exponents define the evaluation set
B = {gamma^{d_j}} and its coefficients the recovery functional
E(R|_B) = sum_j e_j R(b_j), which returns R(0) for every R supported on S.
The multiplicity lift turns such a set for S_m into one of multiplicity e
for S_M, M = mp, with the two-stage recovery in recover_constant.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

from algebra.field import FieldElement, FieldSpec, RootOfUnity, primitive_root_of_unity
from algebra.linalg import solve_linear
from algebra.poly import HasseVector, SparseUniPoly, uni_eval
from errors import AlgebraError, BudgetExceededError, LiftError, ParameterError
from model.mvf import CanonicalSet, canonical_set, crt_split

if TYPE_CHECKING:
    from model.fixtures import DecoderCache

logger = logging.getLogger(__name__)

DEFAULT_SEARCH_BUDGET = 10**7


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True)
class DecodingPoly:
    modulus: int
    spec: FieldSpec
    target: tuple[int, ...]
    terms: tuple[tuple[int, FieldElement], ...]

    def __post_init__(self):
        object.__setattr__(self, "target", tuple(sorted({s % self.modulus for s in self.target} | {0})))
        object.__setattr__(self, "terms", tuple(sorted(((int(d) % self.modulus, c) for d, c in self.terms), key=lambda term: term[0])))
        if not self.terms:
            raise AlgebraError("decoding polynomial needs at least one term")
        exponents = [d for d, _ in self.terms]
        if len(set(exponents)) != len(exponents):
            raise AlgebraError(f"repeated exponent in {exponents}")
        if any(c.is_zero() or c.spec != self.spec for _, c in self.terms):
            raise AlgebraError("decoding polynomial coefficients must be nonzero elements of its field")

    @property
    def sparsity(self) -> int:
        return len(self.terms)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.terms)

    @property
    def coefficients(self) -> tuple[FieldElement, ...]:
        return tuple(c for _, c in self.terms)

    @property
    def root(self) -> RootOfUnity:
        return primitive_root_of_unity(self.spec, self.modulus)

    def as_poly(self) -> SparseUniPoly:
        return SparseUniPoly.from_terms(self.spec, self.terms)

    def __str__(self) -> str:
        return str(self.as_poly()).replace("Z", "Y")


@dataclass(frozen=True)
class DecodingViolation:
    s: int
    value: FieldElement

    @property
    def reason(self) -> str:
        if self.s == 0:
            return f"P(1) = {self.value}, expected 1"
        return f"P(gamma^{self.s}) = {self.value}, expected 0"


@dataclass(frozen=True)
class InterpSet:
    """
    Evaluation exponents d_j (B = {gamma_m^{d_j}}), functional coefficients e_j,
    multiplicity e and the target set over Z_target_modulus.
    """
    modulus: int
    spec: FieldSpec
    exponents: tuple[int, ...]
    coefficients: tuple[FieldElement, ...]
    multiplicity: int = 1
    target: tuple[int, ...] = (0,)
    target_modulus: int = 0

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(d) % self.modulus for d in self.exponents))
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if not self.target_modulus:
            object.__setattr__(self, "target_modulus", self.modulus)
        if len(self.exponents) != len(self.coefficients):
            raise AlgebraError(f"{len(self.exponents)} points but {len(self.coefficients)} coefficients")
        if not 1 <= self.multiplicity <= self.spec.p:
            raise AlgebraError(f"multiplicity {self.multiplicity} outside [1, {self.spec.p}]")

    @property
    def size(self) -> int:
        return len(self.exponents)

    @property
    def root(self) -> RootOfUnity:
        return primitive_root_of_unity(self.spec, self.modulus)

    @property
    def points(self) -> tuple[FieldElement, ...]:
        root = self.root
        return tuple(root.power(d) for d in self.exponents)


# =============================================================================
# VALIDATION AND SEARCH
# =============================================================================

def decoding_validate(P: DecodingPoly, S: CanonicalSet | Iterable[int] | None = None) -> Optional[DecodingViolation]:
    """None when P(1) = 1 and P vanishes on gamma^s for every nonzero s in S."""
    targets = P.target if S is None else tuple(sorted({s % P.modulus for s in S} | {0}))
    root = P.root
    poly = P.as_poly()
    for s in targets:
        value = uni_eval(poly, root.power(s))
        expected = P.spec.one if s == 0 else P.spec.zero
        if value != expected:
            return DecodingViolation(s, value)
    return None


def _solve_for(
    exponents: Sequence[int],
    targets: Sequence[int],
    root: RootOfUnity,
) -> Optional[list[FieldElement]]:
    spec = root.spec
    m = root.order
    rows = [[root.power(s * d % m) for d in exponents] for s in targets]
    rhs = [spec.one if s == 0 else spec.zero for s in targets]
    return solve_linear(spec, rows, rhs)


def decoding_from_interp(
    exponents: Sequence[int],
    S: CanonicalSet | Iterable[int],
    spec: FieldSpec,
    m: int | None = None,
) -> Optional[DecodingPoly]:
    """
    Solve e W = w_0 where W[j][s] = gamma^{s d_j}. Returns None when w_0 lies
    outside the row span of W. Zero coefficients in the solution are dropped.
    """
    modulus = m if m is not None else getattr(S, "modulus", None)
    if modulus is None:
        raise ParameterError("modulus m is required when S is a plain set")
    targets = tuple(sorted({s % modulus for s in S} | {0}))
    root = primitive_root_of_unity(spec, modulus)
    solution = _solve_for(exponents, targets, root)
    if solution is None:
        return None
    terms = [(d, c) for d, c in zip(exponents, solution) if not c.is_zero()]
    return DecodingPoly(modulus, spec, targets, tuple(terms))


def trivial_decoding_poly(m: int, S: CanonicalSet | Iterable[int], spec: FieldSpec) -> DecodingPoly:
    """
    The Lagrange polynomial of degree |S| - 1 that is 1 at gamma^0 and 0 at
    every other gamma^s; at most |S| terms.
    """
    targets = tuple(sorted({s % m for s in S} | {0}))
    P = decoding_from_interp(range(len(targets)), targets, spec, m)
    if P is None:
        raise AlgebraError(f"no decoding polynomial supported on S = {targets}")
    return P


def decoding_search(
    m: int,
    S: CanonicalSet | Iterable[int],
    spec: FieldSpec,
    t_max: int,
    budget: int = DEFAULT_SEARCH_BUDGET,
    cache: "DecoderCache | None" = None,
) -> Optional[DecodingPoly]:
    """
    First t-sparse decoding polynomial, t = 1..t_max, in lexicographic order of
    exponent sets {d_1 < ... < d_t}.

    Multiplying a decoding polynomial by Y^c (exponents mod m) gives another
    one, so the lexicographically first exponent set starts at 0 and only sets
    with d_1 = 0 are enumerated. Solutions with a zero coefficient belong to a
    smaller t and are skipped.
    """
    targets = tuple(sorted({s % m for s in S} | {0}))
    if cache is not None:
        cached = cache.lookup(m, targets, spec)
        if cached is not None and cached.sparsity <= t_max:
            logger.debug("decoder cache hit for m=%d over %s", m, spec.label)
            return cached
    root = primitive_root_of_unity(spec, m)
    examined = 0
    for t in range(1, t_max + 1):
        for rest in itertools.combinations(range(1, m), t - 1):
            examined += 1
            if examined > budget:
                raise BudgetExceededError(f"decoder search exceeded {budget} exponent sets at t={t}")
            if examined % 10_000 == 0:
                logger.debug("decoder search m=%d t=%d: %d sets examined", m, t, examined)
            exponents = (0,) + rest
            solution = _solve_for(exponents, targets, root)
            if solution is None or any(c.is_zero() for c in solution):
                continue
            P = DecodingPoly(m, spec, targets, tuple(zip(exponents, solution)))
            logger.info("found %d-sparse decoding polynomial for m=%d: %s", t, m, P)
            if cache is not None:
                cache.store(P)
            return P
    logger.info("no decoding polynomial with at most %d terms for m=%d", t_max, m)
    return None


# =============================================================================
# INTERPOLATING SETS
# =============================================================================

def interp_from_decoding(P: DecodingPoly) -> InterpSet:
    return InterpSet(
        modulus=P.modulus,
        spec=P.spec,
        exponents=P.exponents,
        coefficients=P.coefficients,
        multiplicity=1,
        target=P.target,
        target_modulus=P.modulus,
    )


def lift_multiplicity(I: InterpSet, p: int, e: int, S_M: CanonicalSet | Iterable[int]) -> InterpSet:
    """Same points and functional, multiplicity e, target S_M over Z_{mp}."""
    m = I.modulus
    if math.gcd(m, p) != 1:
        raise ParameterError(f"gcd({m}, {p}) != 1")
    if I.spec.p != p:
        raise ParameterError(f"field characteristic {I.spec.p} differs from p = {p}")
    if not 1 <= e <= p:
        raise ParameterError(f"multiplicity {e} outside [1, {p}]")
    if I.multiplicity != 1:
        raise ParameterError("only multiplicity-1 sets can be lifted")
    M = m * p
    targets = tuple(sorted({s % M for s in S_M}))
    if 0 not in targets:
        raise LiftError("target set must contain 0", 0)
    base = set(I.target)
    for s in targets:
        s_m, s_p = crt_split(s, m, p)
        if s_m not in base or s_p >= e:
            raise LiftError(
                f"residue {s} = ({s_m} mod {m}, {s_p} mod {p}) is outside S_m x [0, {e})", s
            )
    return InterpSet(
        modulus=m,
        spec=I.spec,
        exponents=I.exponents,
        coefficients=I.coefficients,
        multiplicity=e,
        target=targets,
        target_modulus=M,
    )


def recover_constant(I: InterpSet, evals: Sequence[HasseVector]) -> FieldElement:
    """
    Constant term of an S-supported R from R^(<e) at each point of B.

    Stage 1 folds the derivatives at b into R_1(b) = sum_{i<e} R^(i)(b) (-b)^i;
    stage 2 applies the functional: c_0 = sum_j e_j R_1(b_j).
    """
    if len(evals) != I.size:
        raise AlgebraError(f"expected {I.size} evaluation vectors, got {len(evals)}")
    spec = I.spec
    total = spec.zero
    for b, coeff, vec in zip(I.points, I.coefficients, evals):
        if vec.arity != 1 or vec.point[0] != b:
            raise AlgebraError(f"evaluation vector is not at the expected point {b}")
        if len(vec.values) < I.multiplicity:
            raise AlgebraError(f"evaluation vector at {b} has {len(vec.values)} orders, need {I.multiplicity}")
        minus_b = -b
        folded = spec.zero
        for i in range(I.multiplicity):
            folded = folded + vec.values[i] * minus_b**i
        total = total + coeff * folded
    return total


# =============================================================================
# SERVER COUNTS
# =============================================================================

def sparsity_bound(r: int) -> int:
    """Sparsity of the best known decoding polynomials for r prime factors."""
    if r < 1:
        raise ParameterError(f"number of primes must be >= 1, got {r}")
    if r == 1:
        return 2
    if r <= 103:
        return 3 ** (r // 2) if r % 2 == 0 else 8 * 3 ** ((r - 3) // 2)
    return round(Fraction(3, 4) ** 51 * 2**r)


@dataclass(frozen=True)
class ServerCounts:
    c: int
    ours: int
    dvir_gopi: int
    efremenko: int


def server_count_table(c_max: int = 9) -> list[ServerCounts]:
    """Servers for communication exp(O~((log n)^(1/c))), c = 2..c_max."""
    return [
        ServerCounts(c, sparsity_bound(c - 1), 2 ** (c - 1), sparsity_bound(c))
        for c in range(2, c_max + 1)
    ]


def minimal_multiplicity(m: int, p: int, S_m: CanonicalSet | Iterable[int] | None = None) -> Optional[int]:
    """Smallest e <= p with canonical_set(mp) inside crt(S_m x [0, e)), or None."""
    if math.gcd(m, p) != 1:
        raise ParameterError(f"gcd({m}, {p}) != 1")
    base = set(S_m if S_m is not None else canonical_set(m))
    needed = 1
    for s in canonical_set(m * p):
        s_m, s_p = crt_split(s, m, p)
        if s_m not in base:
            return None
        needed = max(needed, s_p + 1)
    return needed if needed <= p else None
