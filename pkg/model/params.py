"""
Scheme instantiation: PirParams assembled from a decoding polynomial and a
matching vector family, and the Database served by every server.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from algebra.field import FieldElement, FieldSpec, RootOfUnity, element_from_hex, element_hex, primitive_root_of_unity
from algebra.poly import hasse_length
from errors import ConfigError, MvfError, ParameterError
from model.decoding import (
    DecodingPoly,
    InterpSet,
    decoding_validate,
    interp_from_decoding,
    lift_multiplicity,
)
from model.mvf import CanonicalSet, MvFamily, canonical_set, mvf_validate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PirParams:
    p: int
    m: int
    e: int
    spec: FieldSpec
    root: RootOfUnity
    S_M: CanonicalSet
    family: MvFamily
    decoder: DecodingPoly
    interp: InterpSet

    @property
    def M(self) -> int:
        return self.m * self.p

    @property
    def t(self) -> int:
        """Number of servers, the sparsity of the decoding polynomial."""
        return self.interp.size

    @property
    def k(self) -> int:
        return self.family.k

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def points(self) -> tuple[FieldElement, ...]:
        return self.interp.points

    @property
    def answer_length(self) -> int:
        return hasse_length(self.k, self.e)


def params_build(m: int, p: int, e: int, family: MvFamily, decoder: DecodingPoly) -> PirParams:
    """
    Instantiate the scheme for M = mp: S_M = canonical_set(M) and the
    decoder's interpolating set lifted to multiplicity e over S_M.
    """
    if math.gcd(m, p) != 1:
        raise ParameterError(f"gcd(m, p) = gcd({m}, {p}) = {math.gcd(m, p)}, expected 1")
    if decoder.modulus != m:
        raise ParameterError(f"decoding polynomial is for m = {decoder.modulus}, not {m}")
    spec = decoder.spec
    if spec.p != p:
        raise ParameterError(f"field {spec.label} does not have characteristic {p}")
    root = primitive_root_of_unity(spec, m)

    S_m = canonical_set(m)
    violation = decoding_validate(decoder, S_m)
    if violation is not None:
        raise ParameterError(f"not an S-decoding polynomial for m = {m}: {violation.reason}")
    decoder = DecodingPoly(m, spec, S_m.elements, decoder.terms)

    M = m * p
    S_M = canonical_set(M)
    if family.modulus != M:
        raise MvfError(f"matching vector family is over Z_{family.modulus}, expected Z_{M}")
    stray = sorted(set(family.target) - set(S_M.elements))
    if stray:
        raise MvfError(f"family target set has {stray} outside the canonical set of {M}")
    mvf_violation = mvf_validate(family)
    if mvf_violation is not None:
        raise MvfError(f"invalid matching vector family: {mvf_violation.reason}")

    interp = lift_multiplicity(interp_from_decoding(decoder), p, e, S_M)
    params = PirParams(p, m, e, spec, root, S_M, family, decoder, interp)
    logger.debug(
        "params: p=%d m=%d M=%d e=%d t=%d k=%d n=%d over %s",
        p, m, M, e, params.t, params.k, params.n, spec.label,
    )
    return params


# =============================================================================
# DATABASE
# =============================================================================

@dataclass(frozen=True)
class Database:
    """Symbols a_1..a_n; bit databases embed {0, 1} in the field."""
    spec: FieldSpec
    symbols: tuple[FieldElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ParameterError("database is empty")
        if any(a.spec != self.spec for a in self.symbols):
            raise ParameterError(f"database symbols must lie in {self.spec.label}")

    @property
    def n(self) -> int:
        return len(self.symbols)

    def symbol(self, tau: int) -> FieldElement:
        """a_tau, 1-based."""
        if not 1 <= tau <= self.n:
            raise ParameterError(f"index {tau} outside [1, {self.n}]")
        return self.symbols[tau - 1]

    @classmethod
    def from_bits(cls, spec: FieldSpec, bits) -> "Database":
        return cls(spec, tuple(spec.one if b else spec.zero for b in bits))

    @classmethod
    def random(cls, spec: FieldSpec, n: int, seed: Optional[int] = None) -> "Database":
        rng = np.random.default_rng(seed)
        return cls(spec, tuple(spec.element(int(x)) for x in rng.integers(0, spec.q, size=n)))

    def to_dict(self) -> dict:
        return {
            "field": self.spec.describe(),
            "symbols": [element_hex(a) for a in self.symbols],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Database":
        if not isinstance(data, dict) or set(data) != {"field", "symbols"}:
            raise ConfigError("database needs exactly the keys 'field' and 'symbols'")
        spec = FieldSpec.parse(str(data["field"]))
        return cls(spec, tuple(element_from_hex(spec, str(s)) for s in data["symbols"]))
