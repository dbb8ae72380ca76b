"""
Binary frames exchanged between client and servers.

    frame  = magic "MVP1" | type (1 byte) | payload length (4 bytes LE) | payload
    QUERY  = server index (2 bytes LE) | k (4 bytes LE) | k encoded elements
    ANSWER = server index (2 bytes LE) | length (4 bytes LE) | elements in multi-index order
    ERROR  = UTF-8 message
"""
from __future__ import annotations

import struct
from enum import IntEnum
from typing import Optional

from algebra.field import FieldSpec, RootOfUnity, element_decode, element_encode
from errors import EncodingError, WireError
from model.messages import Answer, Query

MAGIC = b"MVP1"
HEADER = struct.Struct("<4sBI")
HEADER_SIZE = HEADER.size
PREFIX = struct.Struct("<HI")
PREFIX_SIZE = PREFIX.size
MAX_PAYLOAD = 1 << 20

FRAME_OVERHEAD = HEADER_SIZE + PREFIX_SIZE


class FrameType(IntEnum):
    QUERY = 0x01
    ANSWER = 0x02
    ERROR = 0x03


def encode_frame(kind: FrameType, payload: bytes) -> bytes:
    if len(payload) > MAX_PAYLOAD:
        raise WireError(f"payload of {len(payload)} bytes exceeds {MAX_PAYLOAD}")
    return HEADER.pack(MAGIC, int(kind), len(payload)) + payload


def parse_header(header: bytes) -> tuple[FrameType, int]:
    if len(header) != HEADER_SIZE:
        raise WireError(f"frame header needs {HEADER_SIZE} bytes, got {len(header)}")
    magic, kind, length = HEADER.unpack(header)
    if magic != MAGIC:
        raise WireError(f"bad magic {magic!r}")
    try:
        kind = FrameType(kind)
    except ValueError:
        raise WireError(f"unknown frame type 0x{kind:02x}") from None
    if length > MAX_PAYLOAD:
        raise WireError(f"payload length {length} exceeds {MAX_PAYLOAD}")
    return kind, length


def decode_frame(data: bytes) -> tuple[FrameType, bytes]:
    kind, length = parse_header(data[:HEADER_SIZE])
    payload = data[HEADER_SIZE:]
    if len(payload) != length:
        raise WireError(f"header announces {length} payload bytes, frame carries {len(payload)}")
    return kind, payload


def _expect(data: bytes, expected: FrameType) -> bytes:
    kind, payload = decode_frame(data)
    if kind is not expected:
        raise WireError(f"expected a {expected.name} frame, got {kind.name}")
    return payload


def _pack_elements(server: int, elements) -> bytes:
    if not 0 <= server <= 0xFFFF:
        raise WireError(f"server index {server} does not fit the frame")
    return PREFIX.pack(server, len(elements)) + b"".join(element_encode(a) for a in elements)


def _unpack_elements(payload: bytes, spec: FieldSpec) -> tuple[int, tuple]:
    if len(payload) < PREFIX_SIZE:
        raise WireError(f"payload of {len(payload)} bytes is shorter than its {PREFIX_SIZE}-byte prefix")
    server, count = PREFIX.unpack_from(payload)
    body = payload[PREFIX_SIZE:]
    if len(body) != count * spec.width:
        raise WireError(f"{count} elements need {count * spec.width} bytes, payload carries {len(body)}")
    try:
        elements = tuple(
            element_decode(spec, body[i:i + spec.width]) for i in range(0, len(body), spec.width)
        )
    except EncodingError as e:
        raise WireError(str(e)) from e
    return server, elements


# =============================================================================
# QUERY / ANSWER / ERROR
# =============================================================================

def encode_query(q: Query) -> bytes:
    return encode_frame(FrameType.QUERY, _pack_elements(q.server, q.point))


def decode_query(data: bytes, spec: FieldSpec, root: Optional[RootOfUnity] = None) -> Query:
    server, point = _unpack_elements(_expect(data, FrameType.QUERY), spec)
    if not point:
        raise WireError("query carries no coordinates")
    if root is not None and not all(root.contains(x) for x in point):
        raise WireError(f"query coordinate outside H_{root.order}")
    return Query(server, point)


def encode_answer(a: Answer) -> bytes:
    return encode_frame(FrameType.ANSWER, _pack_elements(a.server, a.values))


def decode_answer(data: bytes, spec: FieldSpec, expected_length: Optional[int] = None) -> Answer:
    server, values = _unpack_elements(_expect(data, FrameType.ANSWER), spec)
    if expected_length is not None and len(values) != expected_length:
        raise WireError(f"answer carries {len(values)} values, expected {expected_length}")
    return Answer(server, values)


def encode_error(message: str) -> bytes:
    return encode_frame(FrameType.ERROR, message.encode("utf-8")[:MAX_PAYLOAD])


def decode_error(data: bytes) -> str:
    return _expect(data, FrameType.ERROR).decode("utf-8", errors="replace")
