from .pir import (
    AuditReport,
    BenchRow,
    ServerAudit,
    bench,
    client_query,
    client_reconstruct,
    comm_cost,
    database_poly,
    explicit_a1,
    privacy_audit,
    queries_for_beta,
    run_protocol,
    server_answer,
)
from .wire import (
    FRAME_OVERHEAD,
    FrameType,
    decode_answer,
    decode_query,
    encode_answer,
    encode_query,
)
from .network import AnswerServer, remote_query, remote_query_async, serve

__all__ = [
    # Scheme
    "AuditReport",
    "BenchRow",
    "ServerAudit",
    "bench",
    "client_query",
    "client_reconstruct",
    "comm_cost",
    "database_poly",
    "explicit_a1",
    "privacy_audit",
    "queries_for_beta",
    "run_protocol",
    "server_answer",
    # Wire
    "FRAME_OVERHEAD",
    "FrameType",
    "decode_answer",
    "decode_query",
    "encode_answer",
    "encode_query",
    # Network
    "AnswerServer",
    "remote_query",
    "remote_query_async",
    "serve",
]
