"""
The t-server scheme: query generation, answering, reconstruction, privacy
audit and communication accounting.

The client picks beta uniformly in H_m^k and sends server i the point
C(b_i) = beta * b_i^{v_tau} (coordinatewise). Server i returns F^(<e) at that
point for F = sum_i a_i X^{u_i}. The restriction A = F o C reduced mod
(Z^M - 1) is supported on S_M with constant term beta^{u_tau} a_tau, which
the lifted interpolating set recovers from the answers.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from algebra.field import FieldElement
from algebra.poly import Curve, HasseVector, SparseMultiPoly, SparseUniPoly, compose_hasse, multi_hasse_eval, uni_mod_cyclotomic
from errors import BudgetExceededError, ParameterError, ProtocolError, ReconstructionError
from model.decoding import recover_constant
from model.messages import Answer, CostModel, LinkStats, Query, Transcript
from model.mvf import DEFAULT_BUDGET
from model.params import Database, PirParams
from protocol.wire import FRAME_OVERHEAD, decode_answer, decode_query, encode_answer, encode_query

logger = logging.getLogger(__name__)

Beta = tuple[FieldElement, ...]
QueryFn = Callable[[PirParams, int, Beta], list[Query]]


def _check_tau(params: PirParams, tau: int) -> None:
    if not 1 <= tau <= params.n:
        raise ParameterError(f"index {tau} outside [1, {params.n}]")


def sample_beta(params: PirParams, rng: np.random.Generator) -> Beta:
    exponents = rng.integers(0, params.m, size=params.k)
    return tuple(params.root.power(int(x)) for x in exponents)


def curve_for(params: PirParams, tau: int, beta: Beta) -> Curve:
    return Curve(beta, params.family.v[tau - 1])


# =============================================================================
# CLIENT / SERVER
# =============================================================================

def queries_for_beta(params: PirParams, tau: int, beta: Beta) -> list[Query]:
    _check_tau(params, tau)
    curve = curve_for(params, tau, beta)
    return [Query(i, curve.evaluate(b)) for i, b in enumerate(params.points)]


def client_query(
    params: PirParams,
    tau: int,
    seed: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> tuple[Beta, list[Query]]:
    """beta from a seeded generator (OS entropy when seed is None) and the t queries."""
    _check_tau(params, tau)
    rng = rng if rng is not None else np.random.default_rng(seed)
    beta = sample_beta(params, rng)
    return beta, queries_for_beta(params, tau, beta)


@lru_cache(maxsize=16)
def database_poly(params: PirParams, db: Database) -> SparseMultiPoly:
    """F = sum_i a_i X^{u_i}."""
    if db.n > params.n:
        raise ParameterError(f"database has {db.n} symbols, the family only indexes {params.n}")
    if db.spec != params.spec:
        raise ParameterError(f"database field {db.spec.label} differs from {params.spec.label}")
    terms = [(params.family.u[i], a) for i, a in enumerate(db.symbols)]
    return SparseMultiPoly.from_terms(params.spec, params.k, terms, bound=params.M)


def server_answer(params: PirParams, db: Database, q: Query) -> Answer:
    if q.k != params.k:
        raise ProtocolError(f"query has {q.k} coordinates, expected {params.k}")
    if not all(params.root.contains(x) for x in q.point):
        raise ProtocolError(f"query point is not in H_{params.m}^{params.k}")
    values = multi_hasse_eval(database_poly(params, db), q.point, params.e)
    return Answer(q.server, values.values)


def client_reconstruct(params: PirParams, tau: int, beta: Beta, answers: Sequence[Answer]) -> FieldElement:
    _check_tau(params, tau)
    by_server = {a.server: a for a in answers}
    if len(answers) != params.t or sorted(by_server) != list(range(params.t)):
        raise ReconstructionError(
            f"need one answer from each of servers 0..{params.t - 1}, got {sorted(a.server for a in answers)}"
        )
    curve = curve_for(params, tau, beta)
    derivatives: list[HasseVector] = []
    for i, b in enumerate(params.points):
        answer = by_server[i]
        if len(answer.values) != params.answer_length:
            raise ReconstructionError(
                f"server {i} answered {len(answer.values)} values, expected {params.answer_length}"
            )
        derivatives.append(compose_hasse(answer.at(curve.evaluate(b), params.e), curve, b, params.e))
    c0 = recover_constant(params.interp, derivatives)
    shift = params.spec.one
    for bt, ut in zip(beta, params.family.u[tau - 1]):
        if ut:
            shift = shift * bt**ut
    return c0 * shift.inverse()


def run_protocol(
    params: PirParams,
    db: Database,
    tau: int,
    seed: Optional[int] = None,
) -> tuple[FieldElement, Transcript]:
    """In-process run through the wire codec; raises when the result disagrees with the database."""
    expected = db.symbol(tau)
    beta, queries = client_query(params, tau, seed)
    transcript = Transcript()
    answers = []
    for q in queries:
        up = encode_query(q)
        answer = server_answer(params, db, decode_query(up, params.spec, params.root))
        down = encode_answer(answer)
        answers.append(decode_answer(down, params.spec, params.answer_length))
        transcript.links.append(LinkStats(
            server=q.server,
            up_elements=q.k,
            down_elements=len(answer.values),
            up_bytes=len(up) - FRAME_OVERHEAD,
            down_bytes=len(down) - FRAME_OVERHEAD,
            up_frame_bytes=len(up),
            down_frame_bytes=len(down),
        ))
    value = client_reconstruct(params, tau, beta, answers)
    if value != expected:
        raise ReconstructionError(f"recovered {value} for index {tau}, database holds {expected}")
    logger.debug("run tau=%d seed=%s: recovered %s with %d bytes", tau, seed, value, transcript.total_bytes)
    return value, transcript


def explicit_a1(params: PirParams, db: Database, tau: int, beta: Beta) -> SparseUniPoly:
    """A mod (Z^M - 1) for A = F o C, computed symbolically."""
    A = curve_for(params, tau, beta).compose(database_poly(params, db))
    return uni_mod_cyclotomic(A, params.M)


def comm_cost(params: PirParams) -> CostModel:
    return CostModel(params.t, params.k, params.e, params.spec.width, params.answer_length)


# =============================================================================
# PRIVACY AUDIT
# =============================================================================

@dataclass
class ServerAudit:
    server: int
    identical: Optional[bool]
    uniform: Optional[bool] = None
    first_difference: Optional[tuple[int, ...]] = None
    distance: Optional[float] = None


@dataclass
class AuditReport:
    tau1: int
    tau2: int
    exact: bool
    samples: int
    servers: list[ServerAudit] = field(default_factory=list)

    @property
    def identical(self) -> Optional[bool]:
        """Exact verdict; None for sampled audits, which prove nothing."""
        if not self.exact:
            return None
        return all(s.identical for s in self.servers)

    @property
    def max_distance(self) -> Optional[float]:
        distances = [s.distance for s in self.servers if s.distance is not None]
        return max(distances) if distances else None


def _point_key(q: Query) -> tuple[int, ...]:
    return tuple(x.value for x in q.point)


def privacy_audit(
    params: PirParams,
    tau1: int,
    tau2: int,
    budget: int = DEFAULT_BUDGET,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    query_fn: QueryFn = queries_for_beta,
) -> AuditReport:
    """
    Compare, per server, the distribution of query points for tau1 and tau2.

    Exact mode enumerates every beta in H_m^k and compares multisets. Sampling
    mode draws `samples` betas per index and reports the total variation
    distance between the empirical distributions.
    """
    _check_tau(params, tau1)
    _check_tau(params, tau2)
    t = params.t
    if samples is None:
        space = params.m**params.k
        if space > budget:
            raise BudgetExceededError(
                f"exact audit enumerates {params.m}^{params.k} = {space} points, budget is {budget}; "
                "use sampling mode (--samples N) for a statistical estimate"
            )
        counts = [(Counter(), Counter()) for _ in range(t)]
        for exponents in itertools.product(range(params.m), repeat=params.k):
            beta = tuple(params.root.power(x) for x in exponents)
            for side, tau in enumerate((tau1, tau2)):
                for q in query_fn(params, tau, beta):
                    counts[q.server][side][_point_key(q)] += 1
        report = AuditReport(tau1, tau2, exact=True, samples=space)
        for i, (first, second) in enumerate(counts):
            differing = sorted(key for key in first.keys() | second.keys() if first[key] != second[key])
            uniform = len(first) == space and all(c == 1 for c in first.values())
            report.servers.append(ServerAudit(
                server=i,
                identical=not differing,
                uniform=uniform,
                first_difference=differing[0] if differing else None,
            ))
        logger.debug("exact audit tau=%d vs %d over %d betas: identical=%s", tau1, tau2, space, report.identical)
        return report

    if samples < 1:
        raise ParameterError(f"sample count must be positive, got {samples}")
    rng = np.random.default_rng(seed)
    counts = [(Counter(), Counter()) for _ in range(t)]
    for side, tau in enumerate((tau1, tau2)):
        for _ in range(samples):
            for q in query_fn(params, tau, sample_beta(params, rng)):
                counts[q.server][side][_point_key(q)] += 1
    report = AuditReport(tau1, tau2, exact=False, samples=samples)
    for i, (first, second) in enumerate(counts):
        keys = first.keys() | second.keys()
        distance = 0.5 * sum(abs(first[key] - second[key]) for key in keys) / samples
        report.servers.append(ServerAudit(server=i, identical=None, distance=distance))
    return report


# =============================================================================
# BENCHMARK
# =============================================================================

@dataclass(frozen=True)
class BenchRow:
    """One measured run next to the closed-form counts."""
    trial: int
    tau: int
    up_elements: int
    down_elements: int
    up_bytes: int
    down_bytes: int
    frame_bytes: int
    formula_up: int
    formula_down: int
    baseline_down: int

    @property
    def matches(self) -> bool:
        return self.up_elements == self.formula_up and self.down_elements == self.formula_down


def bench(params: PirParams, db: Database, trials: int, seed: int = 0) -> list[BenchRow]:
    """
    Run `trials` in-process queries over indices 1..db.n in turn. The baseline
    column is the downstream count the same t and k would cost with e = 1.
    """
    if trials < 1:
        raise ParameterError(f"trial count must be positive, got {trials}")
    cost = comm_cost(params)
    rows = []
    for trial in range(trials):
        tau = trial % db.n + 1
        _, transcript = run_protocol(params, db, tau, seed + trial)
        rows.append(BenchRow(
            trial=trial + 1,
            tau=tau,
            up_elements=transcript.up_elements,
            down_elements=transcript.down_elements,
            up_bytes=transcript.up_bytes,
            down_bytes=transcript.down_bytes,
            frame_bytes=transcript.frame_bytes,
            formula_up=cost.up_elements,
            formula_down=cost.down_elements,
            baseline_down=params.t,
        ))
    return rows
