"""
Networked servers and the concurrent remote client over asyncio TCP.
"""
from __future__ import annotations

import asyncio
import logging
from typing import Optional, Sequence

from algebra.field import FieldElement
from errors import ConfigError, ParameterError, PirError, RemoteQueryError, WireError
from model.messages import LinkStats, Transcript
from model.params import Database, PirParams
from protocol.pir import client_query, client_reconstruct, server_answer
from protocol.wire import (
    FRAME_OVERHEAD,
    HEADER,
    HEADER_SIZE,
    MAX_PAYLOAD,
    FrameType,
    decode_answer,
    decode_error,
    decode_frame,
    decode_query,
    encode_answer,
    encode_error,
    encode_query,
    parse_header,
)

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 5.0


def parse_address(address: str) -> tuple[str, int]:
    host, sep, port = address.strip().rpartition(":")
    if not sep or not host:
        raise ConfigError(f"address '{address}' is not host:port")
    try:
        port_number = int(port)
    except ValueError:
        raise ConfigError(f"address '{address}' has a non-numeric port") from None
    if not 0 <= port_number <= 0xFFFF:
        raise ConfigError(f"address '{address}' has an out-of-range port")
    return host, port_number


class AnswerServer:
    """Stateless answering loop over shared read-only params and database."""

    def __init__(
        self,
        params: PirParams,
        db: Database,
        index: Optional[int] = None,
        timeout: float = DEFAULT_TIMEOUT,
    ):
        self.params = params
        self.db = db
        self.index = index
        self.timeout = timeout

    def process_frame(self, data: bytes) -> bytes:
        """Reply frame for one request frame. Never raises."""
        try:
            kind, _ = decode_frame(data)
            if kind is not FrameType.QUERY:
                raise WireError(f"servers only accept QUERY frames, got {kind.name}")
            query = decode_query(data, self.params.spec, self.params.root)
            if self.index is not None and query.server != self.index:
                raise WireError(f"query addressed to server {query.server}, this is server {self.index}")
            return encode_answer(server_answer(self.params, self.db, query))
        except PirError as e:
            logger.warning("rejected frame: %s", e)
            return encode_error(str(e))
        except Exception as e:
            logger.exception("unexpected failure while answering")
            return encode_error(f"internal error: {e}")

    async def handle(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        peer = writer.get_extra_info("peername")
        logger.debug("connection from %s", peer)
        try:
            while True:
                try:
                    header = await reader.readexactly(HEADER_SIZE)
                except asyncio.IncompleteReadError:
                    break
                _, _, length = HEADER.unpack(header)
                if length > MAX_PAYLOAD:
                    writer.write(encode_error(f"payload length {length} exceeds {MAX_PAYLOAD}"))
                    await writer.drain()
                    break
                payload = await asyncio.wait_for(reader.readexactly(length), self.timeout)
                # answers run off the event loop
                reply = await asyncio.get_running_loop().run_in_executor(None, self.process_frame, header + payload)
                writer.write(reply)
                await writer.drain()
        except (asyncio.IncompleteReadError, asyncio.TimeoutError, ConnectionError) as e:
            logger.warning("connection %s dropped: %s", peer, e)
        finally:
            writer.close()
            try:
                await writer.wait_closed()
            except ConnectionError:
                pass

    async def start(self, host: str = "127.0.0.1", port: int = 0) -> asyncio.AbstractServer:
        server = await asyncio.start_server(self.handle, host, port)
        for sock in server.sockets:
            logger.info("server %s listening on %s", self.index, sock.getsockname())
        return server


def serve(params: PirParams, db: Database, address: str, index: Optional[int] = None) -> None:
    """Run one server until interrupted."""
    host, port = parse_address(address)

    async def run() -> None:
        server = await AnswerServer(params, db, index).start(host, port)
        async with server:
            await server.serve_forever()

    asyncio.run(run())


# =============================================================================
# CLIENT
# =============================================================================

async def _exchange(address: str, frame: bytes, timeout: float) -> bytes:
    host, port = parse_address(address)
    try:
        reader, writer = await asyncio.wait_for(asyncio.open_connection(host, port), timeout)
    except (OSError, asyncio.TimeoutError) as e:
        raise RemoteQueryError(f"unreachable ({e.__class__.__name__}: {e})", address) from e
    try:
        writer.write(frame)
        await writer.drain()
        header = await asyncio.wait_for(reader.readexactly(HEADER_SIZE), timeout)
        _, length = parse_header(header)
        payload = await asyncio.wait_for(reader.readexactly(length), timeout)
        return header + payload
    except asyncio.TimeoutError as e:
        raise RemoteQueryError(f"no reply within {timeout} s", address) from e
    except (asyncio.IncompleteReadError, ConnectionError) as e:
        raise RemoteQueryError(f"connection closed ({e.__class__.__name__})", address) from e
    except WireError as e:
        raise RemoteQueryError(f"malformed reply: {e}", address) from e
    finally:
        writer.close()
        try:
            await writer.wait_closed()
        except ConnectionError:
            pass


async def remote_query_async(
    addresses: Sequence[str],
    params: PirParams,
    tau: int,
    seed: Optional[int] = None,
    timeout: float = DEFAULT_TIMEOUT,
) -> tuple[FieldElement, Transcript]:
    """Send the t queries concurrently, join all answers, reconstruct a_tau."""
    if len(addresses) != params.t:
        raise ParameterError(f"scheme needs {params.t} servers, got {len(addresses)} addresses")
    beta, queries = client_query(params, tau, seed)
    frames = [encode_query(q) for q in queries]
    replies = await asyncio.gather(
        *(_exchange(address, frame, timeout) for address, frame in zip(addresses, frames)),
        return_exceptions=True,
    )
    failures = [(address, r) for address, r in zip(addresses, replies) if isinstance(r, BaseException)]
    if failures:
        names = ", ".join(address for address, _ in failures)
        detail = "; ".join(str(r) for _, r in failures)
        raise RemoteQueryError(detail, names)

    transcript = Transcript()
    answers = []
    for address, q, frame, reply in zip(addresses, queries, frames, replies):
        kind, _ = decode_frame(reply)
        if kind is FrameType.ERROR:
            raise RemoteQueryError(f"server error: {decode_error(reply)}", address)
        try:
            answer = decode_answer(reply, params.spec, params.answer_length)
        except WireError as e:
            raise RemoteQueryError(f"malformed answer: {e}", address) from e
        if answer.server != q.server:
            raise RemoteQueryError(f"answer for server {answer.server}, expected {q.server}", address)
        answers.append(answer)
        transcript.links.append(LinkStats(
            server=q.server,
            up_elements=q.k,
            down_elements=len(answer.values),
            up_bytes=len(frame) - FRAME_OVERHEAD,
            down_bytes=len(reply) - FRAME_OVERHEAD,
            up_frame_bytes=len(frame),
            down_frame_bytes=len(reply),
        ))
    value = client_reconstruct(params, tau, beta, answers)
    logger.debug("remote run tau=%d: recovered %s", tau, value)
    return value, transcript


def remote_query(
    addresses: Sequence[str],
    params: PirParams,
    tau: int,
    seed: Optional[int] = None,
    timeout: float = DEFAULT_TIMEOUT,
) -> tuple[FieldElement, Transcript]:
    return asyncio.run(remote_query_async(addresses, params, tau, seed, timeout))
