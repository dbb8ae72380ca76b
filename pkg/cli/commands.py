"""
Command-line tools: setup, serve, query, audit, bench and the fixture helpers.

Every command prints its report on stdout through ReportRenderer and returns
the process exit status: 0 on success, 1 on protocol failure, 2 on usage or
configuration errors.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from algebra.field import FieldSpec, field_for
from errors import MvfError, ParameterError, PirError
from model.bundle import Config, load_bundle, write_bundle
from model.decoding import DEFAULT_SEARCH_BUDGET, decoding_search, server_count_table
from model.fixtures import DEFAULT_CACHE, DecoderCache, decoder_dumps, load_mvf
from model.mvf import DEFAULT_BUDGET, MvFamily, canonical_set, mvf_bruteforce, mvf_grolmusz, mvf_validate
from model.params import Database, params_build
from protocol.network import remote_query, serve
from protocol.pir import bench, comm_cost, privacy_audit, run_protocol
from report.renderer import ReportRenderer

logger = logging.getLogger(__name__)

DEFAULT_TMAX = 4
DEFAULT_SIZE = 3
DEFAULT_TRIALS = 10


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _field(text: Optional[str], p: int, m: int) -> FieldSpec:
    if text:
        return FieldSpec.parse(text)
    return field_for(p, m)


# =============================================================================
# SETUP
# =============================================================================

def _build_family(args: argparse.Namespace, M: int) -> MvFamily:
    """Family over Z_M from the requested source, truncated to --n pairs."""
    S_M = canonical_set(M)
    source = args.mvf
    if source == "auto":
        fits = args.k is not None and M ** (2 * args.k) <= args.budget
        source = "bruteforce" if fits else "grolmusz"
        logger.info("mvf source: %s", source)

    if source == "bruteforce":
        if args.k is None or args.n is None:
            raise ParameterError("brute-force families need --k and --n")
        family = mvf_bruteforce(M, S_M, args.k, args.n, args.budget)
        if family is None:
            raise MvfError(f"no {args.n}-pair matching vector family in Z_{M}^{args.k}")
        return family

    family = mvf_grolmusz(M, args.h if args.h is not None else DEFAULT_SIZE, args.weight)
    if args.k is not None and args.k != family.k:
        raise MvfError(f"constructed family has k={family.k}, --k asked for {args.k}")
    if args.n is not None:
        family = family.truncate(args.n)
    return family


def cmd_setup(args: argparse.Namespace) -> int:
    m, p, e = args.m, args.p, args.e
    if math.gcd(m, p) != 1:
        raise ParameterError(f"gcd(m, p) = gcd({m}, {p}) = {math.gcd(m, p)}, expected 1")
    spec = _field(args.field, p, m)
    S_m = canonical_set(m)
    decoder = decoding_search(m, S_m, spec, args.tmax, args.search_budget, DecoderCache(args.cache))
    if decoder is None:
        raise ParameterError(f"no S-decoding polynomial for m={m} with at most {args.tmax} terms")

    family = _build_family(args, m * p)
    params = params_build(m, p, e, family, decoder)
    out_dir = Path(args.out)
    config = Config(
        field=spec.describe(),
        m=m,
        p=p,
        e=e,
        name=out_dir.name or "bundle",
        seed=args.seed,
        budget=args.budget,
    )
    db = Database.random(spec, params.n, args.seed)
    bundle_path = write_bundle(out_dir, config, family, params.decoder, db)
    _emit(ReportRenderer().render_setup(params, comm_cost(params), bundle_path))
    return 0


# =============================================================================
# SERVE / QUERY
# =============================================================================

def cmd_serve(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle)
    if args.db:
        bundle.config.db = str(Path(args.db).resolve())
    db = bundle.load_database()
    address = args.addr or bundle.config.addr
    try:
        serve(bundle.params, db, address, args.index)
    except KeyboardInterrupt:
        logger.info("server %s on %s stopped", args.index, address)
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle)
    params = bundle.params
    seed = args.seed if args.seed is not None else bundle.config.seed
    if args.local:
        value, transcript = run_protocol(params, bundle.load_database(), args.tau, seed)
        mode = "local"
    else:
        servers = args.servers.split(",") if args.servers else bundle.config.servers
        servers = [s.strip() for s in servers if s.strip()]
        value, transcript = remote_query(servers, params, args.tau, seed, args.timeout)
        mode = "remote"
    _emit(ReportRenderer().render_query(args.tau, value, transcript, comm_cost(params), mode))
    return 0


# =============================================================================
# AUDIT / BENCH
# =============================================================================

def cmd_audit(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle)
    budget = args.budget if args.budget is not None else bundle.config.budget
    report = privacy_audit(
        bundle.params,
        args.tau1,
        args.tau2,
        budget=budget,
        samples=args.samples,
        seed=args.seed if args.seed is not None else bundle.config.seed,
    )
    _emit(ReportRenderer().render_audit(report))
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle)
    seed = args.seed if args.seed is not None else bundle.config.seed
    rows = bench(bundle.params, bundle.load_database(), args.trials, seed)
    _emit(ReportRenderer().render_bench(rows, comm_cost(bundle.params), csv=args.csv))
    return 0 if all(row.matches for row in rows) else 1


# =============================================================================
# FIXTURE TOOLS
# =============================================================================

def cmd_search_decoder(args: argparse.Namespace) -> int:
    spec = _field(args.field, args.p, args.m)
    cache = None if args.no_cache else DecoderCache(args.cache)
    P = decoding_search(args.m, canonical_set(args.m), spec, args.tmax, args.budget, cache)
    fixture = decoder_dumps(P) if P is not None else ""
    _emit(ReportRenderer().render_decoder(P, args.m, args.tmax, fixture))
    return 0 if P is not None else 2


def cmd_validate_mvf(args: argparse.Namespace) -> int:
    family = load_mvf(Path(args.file))
    violation = mvf_validate(family)
    _emit(ReportRenderer().render_mvf_check(family, violation, args.file))
    return 0 if violation is None else 2


def cmd_table(args: argparse.Namespace) -> int:
    if args.cmax < 2:
        raise ParameterError(f"--cmax must be >= 2, got {args.cmax}")
    _emit(ReportRenderer().render_server_table(server_count_table(args.cmax)))
    return 0


# =============================================================================
# PARSER
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvpir",
        description="Matching-vector private information retrieval with derivative answers.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="build a params bundle and a random database")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--e", type=int, default=2)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--out", required=True, help="bundle directory")
    p.add_argument("--field", help="'p=.., d=.., modulus=..'; smallest suitable field when omitted")
    p.add_argument("--mvf", choices=("auto", "bruteforce", "grolmusz"), default="auto")
    p.add_argument("--h", type=int, help="ground set size of the constructed family")
    p.add_argument("--weight", type=int, help="member size of the constructed family")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--tmax", type=int, default=DEFAULT_TMAX)
    p.add_argument("--search-budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    p.add_argument("--cache", default=str(DEFAULT_CACHE))
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("serve", help="answer queries for one server index")
    p.add_argument("--bundle", required=True)
    p.add_argument("--db")
    p.add_argument("--index", type=int)
    p.add_argument("--addr")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("query", help="retrieve a_tau from the servers")
    p.add_argument("--bundle", required=True)
    p.add_argument("--servers", help="comma separated host:port list, one per server")
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--timeout", type=float, default=5.0)
    p.add_argument("--local", action="store_true", help="answer with in-process servers")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("audit", help="compare per-server query distributions of two indices")
    p.add_argument("--bundle", required=True)
    p.add_argument("--tau1", type=int, required=True)
    p.add_argument("--tau2", type=int, required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("bench", help="measured communication against the closed form")
    p.add_argument("--bundle", required=True)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("search-decoder", help="find a sparse S-decoding polynomial")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, default=2, help="characteristic when --field is omitted")
    p.add_argument("--field")
    p.add_argument("--tmax", type=int, default=DEFAULT_TMAX)
    p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    p.add_argument("--cache", default=str(DEFAULT_CACHE))
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=cmd_search_decoder)

    p = sub.add_parser("validate-mvf", help="check a matching vector family file")
    p.add_argument("--file", required=True)
    p.set_defaults(func=cmd_validate_mvf)

    p = sub.add_parser("table", help="server counts against earlier schemes")
    p.add_argument("--cmax", type=int, default=9)
    p.set_defaults(func=cmd_table)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except PirError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
