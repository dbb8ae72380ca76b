"""
Exact arithmetic in GF(p^d), roots of unity and the fixed-width element encoding.

Elements are stored by their integer representation sum(c_i * p**i) over the
polynomial basis of the field's modulus, which is also how galois indexes
field elements. All arithmetic is delegated to a cached galois field class.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Union

import galois
import numpy as np

from errors import EncodingError, FieldError, FieldMismatchError, ZeroInverseError

logger = logging.getLogger(__name__)

MAX_DEGREE = 16
MAX_CHARACTERISTIC = 1 << 16

_LABEL_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*\^\s*(\d+)\s*\)\s*\[(.+)\]\s*$")


@lru_cache(maxsize=None)
def _galois_field(p: int, d: int, modulus: tuple[int, ...]) -> type[galois.FieldArray]:
    if d == 1:
        return galois.GF(p)
    prime_field = galois.GF(p)
    irreducible = galois.Poly(list(reversed(modulus)), field=prime_field)
    return galois.GF(p**d, irreducible_poly=irreducible)


# =============================================================================
# FIELD SPEC
# =============================================================================

@dataclass(frozen=True)
class FieldSpec:
    """
    GF(p^d) described by its modulus polynomial.

    `modulus` lists the d+1 coefficients low-degree first; it must be monic
    and irreducible over Z_p.
    """
    p: int
    d: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "modulus", tuple(int(c) for c in self.modulus))
        if not isinstance(self.p, int) or self.p < 2 or self.p > MAX_CHARACTERISTIC:
            raise FieldError(f"characteristic must be a prime in [2, {MAX_CHARACTERISTIC}], got {self.p}")
        if not galois.is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if not 1 <= self.d <= MAX_DEGREE:
            raise FieldError(f"extension degree must lie in [1, {MAX_DEGREE}], got {self.d}")
        if len(self.modulus) != self.d + 1:
            raise FieldError(f"modulus needs {self.d + 1} coefficients, got {len(self.modulus)}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise FieldError("modulus coefficients must lie in [0, p)")
        if self.modulus[-1] != 1:
            raise FieldError("modulus polynomial must be monic")
        if not self.poly.is_irreducible():
            raise FieldError(f"modulus {self.poly_text} is reducible over GF({self.p})")

    # -------------------------------------------------------------------------
    # Derived properties
    # -------------------------------------------------------------------------

    @property
    def q(self) -> int:
        return self.p**self.d

    @property
    def bits(self) -> int:
        """Bits per coefficient in the wire encoding, ceil(log2 p)."""
        return (self.p - 1).bit_length()

    @property
    def width(self) -> int:
        """Bytes per encoded element."""
        return math.ceil(self.d * self.bits / 8)

    @property
    def poly(self) -> galois.Poly:
        return galois.Poly(list(reversed(self.modulus)), field=galois.GF(self.p))

    @property
    def poly_text(self) -> str:
        return str(self.poly)

    @property
    def gf(self) -> type[galois.FieldArray]:
        return _galois_field(self.p, self.d, self.modulus)

    @property
    def label(self) -> str:
        """Compact form used in fixture files, e.g. GF(2^9)[x^9 + x^4 + 1]."""
        return f"GF({self.p}^{self.d})[{self.poly_text}]"

    def describe(self) -> str:
        """Config form, e.g. p=2, d=9, modulus=x^9 + x^4 + 1."""
        return f"p={self.p}, d={self.d}, modulus={self.poly_text}"

    # -------------------------------------------------------------------------
    # Element constructors
    # -------------------------------------------------------------------------

    def element(self, value: int) -> FieldElement:
        return FieldElement(self, int(value))

    def coerce(self, n: int) -> FieldElement:
        """The image of an integer under Z -> GF(p^d)."""
        return FieldElement(self, n % self.p)

    def from_coefficients(self, coeffs) -> FieldElement:
        coeffs = list(coeffs)
        if len(coeffs) > self.d or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"invalid coefficient vector {coeffs} for {self.label}")
        return FieldElement(self, sum(int(c) * self.p**i for i, c in enumerate(coeffs)))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> Iterator[FieldElement]:
        for value in range(self.q):
            yield FieldElement(self, value)

    def array(self, values) -> galois.FieldArray:
        """Vectorized view over integer representations."""
        return self.gf(np.asarray(values, dtype=np.int64))

    # -------------------------------------------------------------------------
    # Parsing
    # -------------------------------------------------------------------------

    @classmethod
    def from_poly(cls, p: int, d: int, text: str) -> "FieldSpec":
        try:
            poly = galois.Poly.Str(text.strip(), field=galois.GF(p))
        except (ValueError, TypeError) as e:
            raise FieldError(f"cannot parse modulus '{text}': {e}") from e
        if poly.degree != d:
            raise FieldError(f"modulus '{text}' has degree {poly.degree}, expected {d}")
        return cls(p, d, tuple(int(c) for c in reversed(poly.coeffs)))

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse `p=…, d=…, modulus=…` (comma or newline separated)."""
        values = {}
        for item in re.split(r"[,\n]", text):
            if not item.strip():
                continue
            key, sep, value = item.partition("=")
            if not sep:
                raise FieldError(f"expected key=value in field description, got '{item.strip()}'")
            values[key.strip()] = value.strip()
        unknown = set(values) - {"p", "d", "modulus"}
        if unknown:
            raise FieldError(f"unknown field keys: {', '.join(sorted(unknown))}")
        try:
            p = int(values["p"])
            d = int(values.get("d", "1"))
        except KeyError as e:
            raise FieldError(f"field description lacks {e}") from e
        except ValueError as e:
            raise FieldError(f"bad integer in field description: {e}") from e
        if "modulus" not in values:
            if d != 1:
                raise FieldError("extension fields need a modulus")
            return cls(p, 1, (0, 1))
        return cls.from_poly(p, d, values["modulus"])

    @classmethod
    def from_label(cls, text: str) -> "FieldSpec":
        match = _LABEL_RE.match(text)
        if not match:
            raise FieldError(f"bad field label '{text}'")
        return cls.from_poly(int(match.group(1)), int(match.group(2)), match.group(3))

    def __str__(self) -> str:
        return self.label


# =============================================================================
# FIELD ELEMENT
# =============================================================================

Operand = Union["FieldElement", int]


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise FieldError(f"value {self.value} outside {self.spec.label}")

    def _other(self, other: Operand) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.spec is not self.spec and other.spec != self.spec:
                raise FieldMismatchError(f"cannot combine {self.spec.label} with {other.spec.label}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.spec.coerce(int(other))
        return None

    def _wrap(self, result) -> "FieldElement":
        return FieldElement(self.spec, int(result))

    @property
    def _array(self) -> galois.FieldArray:
        return self.spec.gf(self.value)

    def __add__(self, other: Operand) -> "FieldElement":
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self._wrap(self._array + other._array)

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "FieldElement":
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self._wrap(self._array - other._array)

    def __rsub__(self, other: Operand) -> "FieldElement":
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self) -> "FieldElement":
        return self._wrap(-self._array)

    def __mul__(self, other: Operand) -> "FieldElement":
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self._wrap(self._array * other._array)

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "FieldElement":
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int) -> "FieldElement":
        if n == 0:
            return self.spec.one
        if n < 0:
            return self.inverse() ** (-n)
        if self.value == 0:
            return self
        n %= self.spec.q - 1
        if n == 0:
            return self.spec.one
        return self._wrap(self._array**n)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroInverseError()
        return self._wrap(np.reciprocal(self._array))

    def multiplicative_order(self) -> int:
        if self.value == 0:
            raise FieldError("zero has no multiplicative order")
        return int(self._array.multiplicative_order())

    @property
    def coefficients(self) -> tuple[int, ...]:
        """Coefficient vector of length d, low degree first."""
        v, out = self.value, []
        for _ in range(self.spec.d):
            v, c = divmod(v, self.spec.p)
            out.append(c)
        return tuple(out)

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        terms = []
        for i, c in reversed(list(enumerate(self.coefficients))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"FieldElement({self}, {self.spec.label})"


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def ff_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


# =============================================================================
# ROOTS OF UNITY
# =============================================================================

@dataclass(frozen=True)
class RootOfUnity:
    """gamma_m together with H_m = (gamma^0, ..., gamma^(m-1))."""
    element: FieldElement
    order: int
    powers: tuple[FieldElement, ...]

    @cached_property
    def _index(self) -> dict[int, int]:
        return {h.value: i for i, h in enumerate(self.powers)}

    @property
    def spec(self) -> FieldSpec:
        return self.element.spec

    def power(self, s: int) -> FieldElement:
        return self.powers[s % self.order]

    def contains(self, a: FieldElement) -> bool:
        return a.spec == self.spec and a.value in self._index

    def log(self, a: FieldElement) -> int:
        """Exponent s in [0, m) with gamma^s = a."""
        try:
            return self._index[a.value]
        except KeyError:
            raise FieldError(f"{a} is not an {self.order}-th root of unity") from None


@lru_cache(maxsize=None)
def primitive_element(spec: FieldSpec) -> FieldElement:
    """Smallest element (by integer representation) of order q - 1."""
    for value in range(1, spec.q):
        candidate = FieldElement(spec, value)
        if candidate.multiplicative_order() == spec.q - 1:
            logger.debug("primitive element of %s is %s", spec.label, candidate)
            return candidate
    raise FieldError(f"{spec.label} has no primitive element")


@lru_cache(maxsize=None)
def primitive_root_of_unity(spec: FieldSpec, m: int) -> RootOfUnity:
    if m < 1:
        raise FieldError(f"root of unity order must be positive, got {m}")
    if math.gcd(m, spec.p) != 1 or (spec.q - 1) % m != 0:
        raise FieldError(f"field contains no primitive {m}-th root ({spec.label})")
    gamma = primitive_element(spec) ** ((spec.q - 1) // m)
    powers = [spec.one]
    for _ in range(m - 1):
        powers.append(powers[-1] * gamma)
    return RootOfUnity(gamma, m, tuple(powers))


# =============================================================================
# ENCODING
# =============================================================================

def element_encode(a: FieldElement) -> bytes:
    """Fixed-width little-endian packing, low-degree coefficient first."""
    spec = a.spec
    acc = 0
    for i, c in enumerate(a.coefficients):
        acc |= c << (i * spec.bits)
    return acc.to_bytes(spec.width, "little")


def element_decode(spec: FieldSpec, data: bytes) -> FieldElement:
    if len(data) != spec.width:
        raise EncodingError(f"{spec.label} element needs {spec.width} bytes, got {len(data)}")
    acc = int.from_bytes(data, "little")
    if acc >> (spec.d * spec.bits):
        raise EncodingError(f"bits set beyond degree {spec.d - 1} in {data.hex()}")
    mask = (1 << spec.bits) - 1
    coeffs = [(acc >> (i * spec.bits)) & mask for i in range(spec.d)]
    if any(c >= spec.p for c in coeffs):
        raise EncodingError(f"coefficient out of range in {data.hex()}")
    return spec.from_coefficients(coeffs)


def element_hex(a: FieldElement) -> str:
    return element_encode(a).hex()


def element_from_hex(spec: FieldSpec, text: str) -> FieldElement:
    try:
        data = bytes.fromhex(text.strip())
    except ValueError as e:
        raise EncodingError(f"bad hex element '{text}'") from e
    return element_decode(spec, data)


# =============================================================================
# BUILT-IN FIELDS
# =============================================================================

GF4 = FieldSpec(2, 2, (1, 1, 1))                       # x^2 + x + 1
GF9 = FieldSpec(3, 2, (2, 2, 1))                       # x^2 + 2x + 2
GF512 = FieldSpec(2, 9, (1, 0, 0, 0, 1, 0, 0, 0, 0, 1))  # x^9 + x^4 + 1

BUILTIN_FIELDS = (GF4, GF9, GF512)


def field_for(p: int, m: int) -> FieldSpec:
    """Smallest field of characteristic p containing the m-th roots of unity."""
    if math.gcd(m, p) != 1:
        raise FieldError(f"gcd({m}, {p}) != 1: no field of characteristic {p} has a primitive {m}-th root")
    for spec in BUILTIN_FIELDS:
        if spec.p == p and (spec.q - 1) % m == 0 and all(
            (p**d - 1) % m for d in range(1, spec.d)
        ):
            return spec
    for d in range(1, MAX_DEGREE + 1):
        if (p**d - 1) % m == 0:
            if d == 1:
                return FieldSpec(p, 1, (0, 1))
            poly = galois.primitive_poly(p, d)
            return FieldSpec(p, d, tuple(int(c) for c in reversed(poly.coeffs)))
    raise FieldError(f"no field GF({p}^d) with d <= {MAX_DEGREE} contains a primitive {m}-th root")
