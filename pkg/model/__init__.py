from .mvf import (
    CanonicalSet,
    MvFamily,
    MvfViolation,
    canonical_set,
    crt,
    crt_split,
    mvf_validate,
    mvf_bruteforce,
    mvf_grolmusz,
)
from .decoding import (
    DecodingPoly,
    DecodingViolation,
    InterpSet,
    ServerCounts,
    decoding_validate,
    decoding_search,
    decoding_from_interp,
    interp_from_decoding,
    lift_multiplicity,
    recover_constant,
    sparsity_bound,
    server_count_table,
    minimal_multiplicity,
    trivial_decoding_poly,
)
from .params import PirParams, Database, params_build
from .messages import Query, Answer, LinkStats, Transcript, CostModel
from .fixtures import (
    DecoderCache,
    mvf_dumps,
    mvf_loads,
    load_mvf,
    save_mvf,
    decoder_dumps,
    decoder_loads,
    load_decoder,
    save_decoder,
)
from .bundle import (
    Config,
    Bundle,
    load_config,
    save_config,
    load_bundle,
    load_database,
    save_database,
    write_bundle,
)

__all__ = [
    # Matching vector families
    "CanonicalSet",
    "MvFamily",
    "MvfViolation",
    "canonical_set",
    "crt",
    "crt_split",
    "mvf_validate",
    "mvf_bruteforce",
    "mvf_grolmusz",
    # Decoding
    "DecodingPoly",
    "DecodingViolation",
    "InterpSet",
    "ServerCounts",
    "decoding_validate",
    "decoding_search",
    "decoding_from_interp",
    "interp_from_decoding",
    "lift_multiplicity",
    "recover_constant",
    "sparsity_bound",
    "server_count_table",
    "minimal_multiplicity",
    "trivial_decoding_poly",
    # Scheme
    "PirParams",
    "Database",
    "params_build",
    "Query",
    "Answer",
    "LinkStats",
    "Transcript",
    "CostModel",
    # Fixtures
    "DecoderCache",
    "mvf_dumps",
    "mvf_loads",
    "load_mvf",
    "save_mvf",
    "decoder_dumps",
    "decoder_loads",
    "load_decoder",
    "save_decoder",
    # Bundles
    "Config",
    "Bundle",
    "load_config",
    "save_config",
    "load_bundle",
    "load_database",
    "save_database",
    "write_bundle",
]
