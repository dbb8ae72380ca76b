"""
Plain-text fixture formats.

MVF file:
    M k n S=s1,s2,...
    u_1 ... u_k | v_1 ... v_k        (n lines)

Decoder fixture (one polynomial per line):
    m=3, field=GF(2^2)[x^2 + x + 1], S={0,1}, terms=0:03,1:02
with coefficients in element_encode hex form.
"""
from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Optional

from algebra.field import FieldSpec, element_from_hex, element_hex
from errors import ConfigError, EncodingError, FieldError, MvfError
from model.decoding import DecodingPoly
from model.mvf import MvFamily

logger = logging.getLogger(__name__)

DEFAULT_CACHE = Path(__file__).resolve().parent.parent / "fixtures" / "decoders.txt"

_DECODER_RE = re.compile(
    r"^\s*m=(?P<m>\d+)\s*,\s*field=(?P<field>.+?)\s*,\s*S=\{(?P<S>[\d,\s]*)\}\s*,\s*terms=(?P<terms>.*)$"
)


# =============================================================================
# MATCHING VECTOR FAMILIES
# =============================================================================

def mvf_dumps(fam: MvFamily) -> str:
    lines = [f"{fam.modulus} {fam.k} {fam.n} S={','.join(str(s) for s in fam.target)}"]
    for u, v in zip(fam.u, fam.v):
        lines.append(f"{' '.join(map(str, u))} | {' '.join(map(str, v))}")
    return "\n".join(lines) + "\n"


def mvf_loads(text: str) -> MvFamily:
    rows = [line.strip() for line in text.splitlines()]
    rows = [line for line in rows if line and not line.startswith("#")]
    if not rows:
        raise MvfError("empty MVF file")
    header = rows[0].split()
    if len(header) != 4 or not header[3].startswith("S="):
        raise MvfError(f"bad MVF header '{rows[0]}', expected 'M k n S=…'")
    try:
        M, k, n = (int(x) for x in header[:3])
        S = tuple(int(s) for s in header[3][2:].split(",") if s)
    except ValueError as e:
        raise MvfError(f"bad MVF header '{rows[0]}': {e}") from e
    body = rows[1:]
    if len(body) != n:
        raise MvfError(f"header announces {n} pairs, file has {len(body)}")
    U, V = [], []
    for line in body:
        left, sep, right = line.partition("|")
        if not sep:
            raise MvfError(f"pair line '{line}' lacks the '|' separator")
        try:
            u = tuple(int(x) for x in left.split())
            v = tuple(int(x) for x in right.split())
        except ValueError as e:
            raise MvfError(f"bad pair line '{line}': {e}") from e
        if len(u) != k or len(v) != k:
            raise MvfError(f"pair line '{line}' does not have dimension {k}")
        U.append(u)
        V.append(v)
    return MvFamily(M, S, tuple(U), tuple(V))


def save_mvf(fam: MvFamily, filepath: Path) -> None:
    try:
        Path(filepath).write_text(mvf_dumps(fam))
    except OSError as e:
        raise MvfError(f"cannot write {filepath}: {e}") from e


def load_mvf(filepath: Path) -> MvFamily:
    try:
        text = Path(filepath).read_text()
    except OSError as e:
        raise MvfError(f"cannot read {filepath}: {e}") from e
    return mvf_loads(text)


# =============================================================================
# DECODING POLYNOMIALS
# =============================================================================

def decoder_dumps(P: DecodingPoly) -> str:
    S = ",".join(str(s) for s in P.target)
    terms = ",".join(f"{d}:{element_hex(c)}" for d, c in P.terms)
    return f"m={P.modulus}, field={P.spec.label}, S={{{S}}}, terms={terms}"


def decoder_loads(line: str) -> DecodingPoly:
    match = _DECODER_RE.match(line)
    if not match:
        raise ConfigError(f"bad decoder fixture line '{line.strip()}'")
    try:
        spec = FieldSpec.from_label(match["field"])
        terms = []
        for item in match["terms"].split(","):
            d, sep, coeff = item.strip().partition(":")
            if not sep:
                raise ConfigError(f"bad decoder term '{item.strip()}'")
            terms.append((int(d), element_from_hex(spec, coeff)))
        S = tuple(int(s) for s in match["S"].split(",") if s.strip())
        return DecodingPoly(int(match["m"]), spec, S, tuple(terms))
    except (FieldError, EncodingError, ValueError) as e:
        raise ConfigError(f"bad decoder fixture line '{line.strip()}': {e}") from e


def save_decoder(P: DecodingPoly, filepath: Path) -> None:
    try:
        Path(filepath).write_text(decoder_dumps(P) + "\n")
    except OSError as e:
        raise ConfigError(f"cannot write {filepath}: {e}") from e


def _read_lines(filepath: Path) -> list[str]:
    try:
        text = Path(filepath).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {filepath}: {e}") from e
    return [line for line in text.splitlines() if line.strip() and not line.startswith("#")]


def load_decoder(filepath: Path) -> DecodingPoly:
    lines = _read_lines(filepath)
    if len(lines) != 1:
        raise ConfigError(f"{filepath}: expected exactly one decoder line, found {len(lines)}")
    return decoder_loads(lines[0])


class DecoderCache:
    """Decoder fixtures keyed by (m, S, field), stored one per line."""

    def __init__(self, filepath: Path = DEFAULT_CACHE):
        self.filepath = Path(filepath)

    def entries(self) -> list[DecodingPoly]:
        if not self.filepath.exists():
            return []
        return [decoder_loads(line) for line in _read_lines(self.filepath)]

    def lookup(self, m: int, S, spec: FieldSpec) -> Optional[DecodingPoly]:
        target = tuple(sorted({s % m for s in S} | {0}))
        for P in self.entries():
            if P.modulus == m and P.target == target and P.spec == spec:
                return P
        logger.debug("no cached decoder for m=%d S=%s over %s", m, target, spec.label)
        return None

    def store(self, P: DecodingPoly) -> None:
        kept = [
            Q for Q in self.entries()
            if not (Q.modulus == P.modulus and Q.target == P.target and Q.spec == P.spec)
        ]
        kept.append(P)
        try:
            self.filepath.parent.mkdir(parents=True, exist_ok=True)
            self.filepath.write_text("".join(decoder_dumps(Q) + "\n" for Q in kept))
        except OSError as e:
            raise ConfigError(f"cannot write decoder cache {self.filepath}: {e}") from e
        logger.info("cached %d-sparse decoder for m=%d in %s", P.sparsity, P.modulus, self.filepath)
