import numpy as np
import pytest

from algebra.field import GF4, GF9
from errors import WireError
from model.messages import Answer, Query
from protocol.network import AnswerServer
from protocol.wire import (
    FRAME_OVERHEAD,
    HEADER,
    HEADER_SIZE,
    MAGIC,
    FrameType,
    decode_answer,
    decode_error,
    decode_frame,
    decode_query,
    encode_answer,
    encode_error,
    encode_frame,
    encode_query,
    parse_header,
)

G = GF4.element(2)


def test_overhead():
    assert HEADER_SIZE == 9
    assert FRAME_OVERHEAD == 15


def test_toy_query_frame():
    frame = encode_query(Query(1, (G, GF4.one)))
    assert len(frame) == 17
    assert frame[:4] == MAGIC
    assert frame[4] == FrameType.QUERY
    assert frame[5:9] == (8).to_bytes(4, "little")
    assert frame[9:] == b"\x01\x00\x02\x00\x00\x00\x02\x01"
    assert decode_query(frame, GF4) == Query(1, (G, GF4.one))


def test_toy_answer_frame():
    answer = Answer(0, (GF4.zero, GF4.one, G))
    frame = encode_answer(answer)
    assert len(frame) == 18
    assert decode_answer(frame, GF4, 3) == answer


def test_gf9_answer_frame():
    answer = Answer(1, tuple(GF9.element(a) for a in (0, 8, 3, 4, 5, 1)))
    frame = encode_answer(answer)
    assert len(frame) == FRAME_OVERHEAD + 6
    assert decode_answer(frame, GF9, 6) == answer


def test_error_frame():
    frame = encode_error("index out of range")
    assert decode_frame(frame) == (FrameType.ERROR, b"index out of range")
    assert decode_error(frame) == "index out of range"


def test_parse_header():
    assert parse_header(HEADER.pack(MAGIC, 2, 10)) == (FrameType.ANSWER, 10)
    with pytest.raises(WireError, match="magic"):
        parse_header(HEADER.pack(b"XXXX", 1, 0))
    with pytest.raises(WireError, match="unknown frame type"):
        parse_header(HEADER.pack(MAGIC, 9, 0))
    with pytest.raises(WireError):
        parse_header(HEADER.pack(MAGIC, 1, 1 << 21))
    with pytest.raises(WireError):
        parse_header(b"MVP1")


# ----------------------------------------------------------------------------
# Rejections
# ----------------------------------------------------------------------------

def test_length_mismatch():
    frame = encode_query(Query(0, (G, G)))
    with pytest.raises(WireError, match="announces"):
        decode_frame(frame[:-1])
    with pytest.raises(WireError, match="announces"):
        decode_frame(frame + b"\x00")


def test_wrong_frame_kind():
    frame = encode_answer(Answer(0, (G,)))
    with pytest.raises(WireError, match="expected a QUERY frame"):
        decode_query(frame, GF4)


def test_element_count_disagrees_with_payload():
    payload = b"\x00\x00" + (3).to_bytes(4, "little") + b"\x01\x02"
    with pytest.raises(WireError):
        decode_answer(encode_frame(FrameType.ANSWER, payload), GF4)
    with pytest.raises(WireError, match="shorter"):
        decode_answer(encode_frame(FrameType.ANSWER, b"\x00\x00"), GF4)


def test_wrong_answer_length():
    frame = encode_answer(Answer(0, (G, G)))
    with pytest.raises(WireError, match="expected 3"):
        decode_answer(frame, GF4, 3)


def test_element_outside_field():
    payload = b"\x00\x00" + (2).to_bytes(4, "little") + b"\x04\x01"
    with pytest.raises(WireError):
        decode_query(encode_frame(FrameType.QUERY, payload), GF4)


def test_query_outside_roots_of_unity(toy_params):
    frame = encode_query(Query(0, (GF4.zero, G)))
    assert decode_query(frame, GF4).point == (GF4.zero, G)
    with pytest.raises(WireError, match="H_3"):
        decode_query(frame, GF4, toy_params.root)


def test_empty_query():
    with pytest.raises(WireError):
        decode_query(encode_query(Query(0, ())), GF4)


def test_server_index_must_fit():
    with pytest.raises(WireError):
        encode_query(Query(1 << 16, (G,)))


# ----------------------------------------------------------------------------
# Server frame handling
# ----------------------------------------------------------------------------

def test_process_frame_answers(toy_params, toy_db):
    server = AnswerServer(toy_params, toy_db)
    reply = server.process_frame(encode_query(Query(1, (G, GF4.one))))
    assert decode_answer(reply, GF4, 3).values == (GF4.zero, GF4.one, G)


def test_process_frame_reports_errors(toy_params, toy_db):
    server = AnswerServer(toy_params, toy_db, index=0)
    reply = server.process_frame(encode_query(Query(1, (G, GF4.one))))
    assert "server 1" in decode_error(reply)
    reply = server.process_frame(encode_answer(Answer(0, (G,))))
    assert "QUERY" in decode_error(reply)
    reply = server.process_frame(encode_query(Query(0, (G,))))
    assert decode_frame(reply)[0] is FrameType.ERROR


def test_process_frame_never_raises(toy_params, toy_db):
    server = AnswerServer(toy_params, toy_db)
    rng = np.random.default_rng(11)
    valid = encode_query(Query(0, (G, GF4.one)))
    for trial in range(10_000):
        if trial % 2:
            frame = bytes(rng.integers(0, 256, size=int(rng.integers(0, 40)), dtype=np.uint8))
        else:
            frame = bytearray(valid)
            for _ in range(int(rng.integers(1, 4))):
                frame[int(rng.integers(0, len(frame)))] = int(rng.integers(0, 256))
            frame = bytes(frame)
        kind, _ = decode_frame(server.process_frame(frame))
        assert kind in (FrameType.ANSWER, FrameType.ERROR)
