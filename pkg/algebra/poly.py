"""
Sparse univariate and multivariate polynomials over a FieldSpec, Hasse
derivatives, modular reductions and the truncated-series chain rule.

Hasse derivative orders are capped at the characteristic: multiplicity e
means all derivative orders of weight < e, and 1 <= e <= p.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from algebra.field import FieldElement, FieldSpec
from errors import AlgebraError, FieldMismatchError

logger = logging.getLogger(__name__)


def binomial_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas's theorem."""
    if k < 0 or n < 0 or k > n:
        return 0
    result = 1
    while k:
        n, ni = divmod(n, p)
        k, ki = divmod(k, p)
        if ki > ni:
            return 0
        result = result * math.comb(ni, ki) % p
    return result


def _compositions(weight: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (weight,)
        return
    for first in range(weight, -1, -1):
        for rest in _compositions(weight - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def multi_indices(k: int, e: int) -> tuple[tuple[int, ...], ...]:
    """All j in N^k with wt(j) < e, graded by weight, lex-descending within a weight."""
    if k < 1 or e < 1:
        raise AlgebraError(f"need arity >= 1 and multiplicity >= 1, got k={k}, e={e}")
    out = []
    for w in range(e):
        out.extend(_compositions(w, k))
    return tuple(out)


def hasse_length(k: int, e: int) -> int:
    return math.comb(k + e - 1, e - 1)


def _check_multiplicity(spec: FieldSpec, e: int) -> None:
    if not 1 <= e <= spec.p:
        raise AlgebraError(f"derivative multiplicity {e} outside [1, {spec.p}]")


# =============================================================================
# HASSE VECTOR
# =============================================================================

@dataclass(frozen=True)
class HasseVector:
    """
    Hasse derivatives of weight < multiplicity at `point`, laid out in
    multi_indices order. Univariate vectors have a one-coordinate point.
    """
    point: tuple[FieldElement, ...]
    multiplicity: int
    values: tuple[FieldElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "point", tuple(self.point))
        object.__setattr__(self, "values", tuple(self.values))
        if not self.point:
            raise AlgebraError("Hasse vector needs a point")
        if self.multiplicity < 1:
            raise AlgebraError(f"multiplicity must be >= 1, got {self.multiplicity}")
        expected = hasse_length(len(self.point), self.multiplicity)
        if len(self.values) != expected:
            raise AlgebraError(
                f"Hasse vector of arity {len(self.point)}, multiplicity {self.multiplicity} "
                f"needs {expected} values, got {len(self.values)}"
            )

    @property
    def arity(self) -> int:
        return len(self.point)

    @property
    def indices(self) -> tuple[tuple[int, ...], ...]:
        return multi_indices(self.arity, self.multiplicity)

    def __getitem__(self, j) -> FieldElement:
        if isinstance(j, int):
            return self.values[j]
        return self.values[self.indices.index(tuple(j))]

    def __len__(self) -> int:
        return len(self.values)


# =============================================================================
# UNIVARIATE
# =============================================================================

def _combine(spec: FieldSpec, terms, key=lambda s: s) -> dict:
    acc: dict = {}
    for s, c in terms:
        if not isinstance(c, FieldElement):
            c = spec.coerce(int(c))
        elif c.spec != spec:
            raise FieldMismatchError(f"coefficient from {c.spec.label} in a {spec.label} polynomial")
        k = key(s)
        acc[k] = acc[k] + c if k in acc else c
    return {k: c for k, c in acc.items() if not c.is_zero()}


@dataclass(frozen=True)
class SparseUniPoly:
    """Sum of c_s Z^s with exponents strictly increasing and no zero coefficients."""
    spec: FieldSpec
    terms: tuple[tuple[int, FieldElement], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((int(s), c) for s, c in self.terms))
        last = -1
        for s, c in self.terms:
            if s <= last:
                raise AlgebraError("exponents must be non-negative and strictly increasing")
            if c.is_zero():
                raise AlgebraError(f"zero coefficient at Z^{s}")
            if c.spec != self.spec:
                raise FieldMismatchError(f"coefficient from {c.spec.label} in a {self.spec.label} polynomial")
            last = s

    @classmethod
    def from_terms(cls, spec: FieldSpec, terms: Iterable) -> "SparseUniPoly":
        combined = _combine(spec, terms)
        return cls(spec, tuple(sorted(combined.items())))

    @classmethod
    def monomial(cls, spec: FieldSpec, s: int, c=1) -> "SparseUniPoly":
        return cls.from_terms(spec, [(s, c)])

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.terms)

    def coefficient(self, s: int) -> FieldElement:
        for t, c in self.terms:
            if t == s:
                return c
        return self.spec.zero

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SparseUniPoly") -> "SparseUniPoly":
        return SparseUniPoly.from_terms(self.spec, self.terms + other.terms)

    def __neg__(self) -> "SparseUniPoly":
        return SparseUniPoly(self.spec, tuple((s, -c) for s, c in self.terms))

    def __sub__(self, other: "SparseUniPoly") -> "SparseUniPoly":
        return self + (-other)

    def __mul__(self, other) -> "SparseUniPoly":
        if isinstance(other, SparseUniPoly):
            return SparseUniPoly.from_terms(
                self.spec,
                [(s + t, a * b) for s, a in self.terms for t, b in other.terms],
            )
        return SparseUniPoly.from_terms(self.spec, [(s, c * other) for s, c in self.terms])

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SparseUniPoly":
        if n < 0:
            raise AlgebraError("negative polynomial power")
        result = SparseUniPoly.monomial(self.spec, 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for s, c in self.terms:
            mono = "" if s == 0 else ("Z" if s == 1 else f"Z^{s}")
            coeff = str(c)
            if not mono:
                parts.append(coeff)
            elif c.value == 1:
                parts.append(mono)
            else:
                parts.append(f"({coeff}){mono}")
        return " + ".join(parts)


def uni_eval(A: SparseUniPoly, z: FieldElement) -> FieldElement:
    acc = A.spec.zero
    for s, c in A.terms:
        acc = acc + c * z**s
    return acc


def uni_hasse(A: SparseUniPoly, j: int) -> SparseUniPoly:
    """j-th Hasse derivative: Z^s -> C(s, j) Z^(s-j), binomials mod p."""
    p = A.spec.p
    return SparseUniPoly.from_terms(
        A.spec,
        [(s - j, c * binomial_mod(s, j, p)) for s, c in A.terms if s >= j],
    )


def uni_hasse_eval(A: SparseUniPoly, b: FieldElement, e: int) -> HasseVector:
    """A^(<e)(b) evaluated termwise."""
    values = [uni_eval(uni_hasse(A, i), b) for i in range(e)]
    return HasseVector((b,), e, tuple(values))


def uni_mod_cyclotomic(A: SparseUniPoly, M: int) -> SparseUniPoly:
    """A mod (Z^M - 1)."""
    if M < 1:
        raise AlgebraError(f"modulus must be positive, got {M}")
    return SparseUniPoly.from_terms(A.spec, [(s % M, c) for s, c in A.terms])


def uni_mod_linear_power(A: SparseUniPoly, b: FieldElement, p: int) -> HasseVector:
    """
    A^(<p)(b) via reduction mod (Z - b)^p = Z^p - b^p.

    Z^s reduces to Z^(s mod p) * b^(p * floor(s/p)); the Hasse derivatives of
    the reduced polynomial R at b are those of A for every order below p.
    """
    spec = A.spec
    if p != spec.p:
        raise AlgebraError(f"reduction exponent {p} differs from characteristic {spec.p}")
    if b.is_zero():
        raise AlgebraError("reduction point must be nonzero")
    bp = b**p
    reduced = [spec.zero] * p
    for s, c in A.terms:
        reduced[s % p] = reduced[s % p] + c * bp ** (s // p)
    values = []
    for i in range(p):
        acc = spec.zero
        for l in range(i, p):
            if reduced[l].is_zero():
                continue
            acc = acc + reduced[l] * binomial_mod(l, i, p) * b ** (l - i)
        values.append(acc)
    return HasseVector((b,), p, tuple(values))


# =============================================================================
# MULTIVARIATE
# =============================================================================

@dataclass(frozen=True)
class SparseMultiPoly:
    """Sum of a_i X^{u_i} over k variables, terms sorted lexicographically on u."""
    spec: FieldSpec
    arity: int
    terms: tuple[tuple[tuple[int, ...], FieldElement], ...] = ()
    bound: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((tuple(u), c) for u, c in self.terms))
        last = None
        for u, c in self.terms:
            if len(u) != self.arity:
                raise AlgebraError(f"exponent {u} does not have arity {self.arity}")
            if any(x < 0 or (self.bound is not None and x >= self.bound) for x in u):
                raise AlgebraError(f"exponent {u} outside [0, {self.bound})")
            if last is not None and u <= last:
                raise AlgebraError("terms must be strictly increasing in lexicographic order")
            if c.is_zero():
                raise AlgebraError(f"zero coefficient at X^{u}")
            last = u

    @classmethod
    def from_terms(cls, spec: FieldSpec, arity: int, terms: Iterable, bound: int | None = None) -> "SparseMultiPoly":
        combined = _combine(spec, terms, key=tuple)
        return cls(spec, arity, tuple(sorted(combined.items())), bound)

    def evaluate(self, x: Sequence[FieldElement]) -> FieldElement:
        acc = self.spec.zero
        for u, a in self.terms:
            term = a
            for xt, ut in zip(x, u):
                if ut:
                    term = term * xt**ut
            acc = acc + term
        return acc


def multi_hasse_eval(F: SparseMultiPoly, x: Sequence[FieldElement], e: int) -> HasseVector:
    """F^(<e)(x): sum_i a_i prod_t C(u_i(t), j(t)) x_t^(u_i(t) - j(t)) per multi-index j."""
    spec = F.spec
    _check_multiplicity(spec, e)
    x = tuple(x)
    if len(x) != F.arity:
        raise AlgebraError(f"point of arity {len(x)} for a polynomial of arity {F.arity}")
    p = spec.p
    powers: dict[tuple[int, int], FieldElement] = {}

    def power(t: int, n: int) -> FieldElement:
        if (t, n) not in powers:
            powers[t, n] = x[t] ** n
        return powers[t, n]

    values = []
    for j in multi_indices(F.arity, e):
        acc = spec.zero
        for u, a in F.terms:
            coeff = 1
            for ut, jt in zip(u, j):
                if jt:
                    coeff = coeff * binomial_mod(ut, jt, p) % p
                    if not coeff:
                        break
            if not coeff:
                continue
            term = a * coeff
            for t, (ut, jt) in enumerate(zip(u, j)):
                if ut > jt:
                    term = term * power(t, ut - jt)
            acc = acc + term
        values.append(acc)
    return HasseVector(x, e, tuple(values))


# =============================================================================
# CURVES AND THE CHAIN RULE
# =============================================================================

@dataclass(frozen=True)
class Curve:
    """C(Z) = (beta_1 Z^v(1), ..., beta_k Z^v(k))."""
    beta: tuple[FieldElement, ...]
    v: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(self.beta))
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        if len(self.beta) != len(self.v):
            raise AlgebraError(f"curve has {len(self.beta)} coefficients but {len(self.v)} exponents")
        if any(b.is_zero() for b in self.beta):
            raise AlgebraError("curve coefficients must be nonzero")
        if any(x < 0 for x in self.v):
            raise AlgebraError("curve exponents must be non-negative")

    @property
    def arity(self) -> int:
        return len(self.beta)

    @property
    def spec(self) -> FieldSpec:
        return self.beta[0].spec

    def evaluate(self, z: FieldElement) -> tuple[FieldElement, ...]:
        return tuple(bt * z**vt for bt, vt in zip(self.beta, self.v))

    def coordinate(self, t: int) -> SparseUniPoly:
        return SparseUniPoly.monomial(self.spec, self.v[t], self.beta[t])

    def compose(self, F: SparseMultiPoly) -> SparseUniPoly:
        """A(Z) = F(C(Z)) = sum_i a_i beta^{u_i} Z^{<u_i, v>}."""
        if F.arity != self.arity:
            raise AlgebraError(f"curve arity {self.arity} does not match polynomial arity {F.arity}")
        terms = []
        for u, a in F.terms:
            coeff = a
            for bt, ut in zip(self.beta, u):
                if ut:
                    coeff = coeff * bt**ut
            terms.append((sum(ut * vt for ut, vt in zip(u, self.v)), coeff))
        return SparseUniPoly.from_terms(self.spec, terms)


def curve_hasse(C: Curve, b: FieldElement, e: int) -> list[HasseVector]:
    """Orders 0..e-1 of each coordinate beta_t Z^v(t) at b."""
    _check_multiplicity(C.spec, e)
    p = C.spec.p
    out = []
    for bt, vt in zip(C.beta, C.v):
        values = []
        for i in range(e):
            binom = binomial_mod(vt, i, p)
            values.append(bt * binom * b ** (vt - i) if binom else C.spec.zero)
        out.append(HasseVector((b,), e, tuple(values)))
    return out


def _series_mul(a: list[FieldElement], b: list[FieldElement], e: int) -> list[FieldElement]:
    zero = a[0].spec.zero
    out = [zero] * e
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j in range(e - i):
            if not b[j].is_zero():
                out[i + j] = out[i + j] + ai * b[j]
    return out


def compose_hasse(Fvals: HasseVector, C: Curve, b: FieldElement, e: int) -> HasseVector:
    """
    A^(<e)(b) for A = F o C from F^(<e)(C(b)).

    Expands A(b + W) = sum_j F^(j)(C(b)) prod_t (C_t(b + W) - C_t(b))^j(t)
    modulo W^e. Each increment has no constant term, so multi-indices of
    weight >= e never contribute.
    """
    spec = C.spec
    _check_multiplicity(spec, e)
    if Fvals.multiplicity != e:
        raise AlgebraError(f"answer multiplicity {Fvals.multiplicity} differs from {e}")
    if Fvals.arity != C.arity:
        raise AlgebraError(f"answer arity {Fvals.arity} differs from curve arity {C.arity}")
    if Fvals.point != C.evaluate(b):
        raise AlgebraError("answer was not computed at C(b)")
    increments = [[spec.zero] + list(cv.values[1:]) for cv in curve_hasse(C, b, e)]
    result = [spec.zero] * e
    for j, fval in zip(Fvals.indices, Fvals.values):
        if fval.is_zero():
            continue
        series = [spec.one] + [spec.zero] * (e - 1)
        for t, jt in enumerate(j):
            for _ in range(jt):
                series = _series_mul(series, increments[t], e)
        result = [r + fval * s for r, s in zip(result, series)]
    return HasseVector((b,), e, tuple(result))
