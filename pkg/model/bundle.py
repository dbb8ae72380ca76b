"""
Params bundles on disk.

A bundle is a YAML file naming the field and scheme parameters and
referencing, by path relative to itself, the MVF file, the decoder fixture
and the database:

bundle/
├── bundle.yaml     # this file
├── family.mvf      # matching vector family over Z_M
├── decoder.txt     # S-decoding polynomial for m
└── db.yaml         # database symbols
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, fields
import dataclasses
from pathlib import Path
from typing import Optional

import yaml

from algebra.field import FieldSpec
from errors import ConfigError, PirError
from model.fixtures import load_decoder, load_mvf, save_decoder, save_mvf
from model.decoding import DecodingPoly
from model.mvf import DEFAULT_BUDGET, MvFamily
from model.params import Database, PirParams, params_build

logger = logging.getLogger(__name__)


def _dump_yaml(data: dict, filepath: Path) -> None:
    with open(filepath, "w") as f:
        yaml.dump(
            data,
            f,
            default_flow_style=False,
            sort_keys=False,
            allow_unicode=True,
            indent=2,
        )


def _load_yaml(filepath: Path) -> dict:
    try:
        with open(filepath, "r") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"cannot read {filepath}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"{filepath} is not valid YAML: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{filepath} must hold a mapping")
    return data


@dataclass
class Config:
    """Bundle file contents. Paths are relative to the bundle file."""
    field: str
    m: int
    p: int
    e: int = 2
    name: str = "bundle"
    mvf: str = "family.mvf"
    decoder: str = "decoder.txt"
    db: str = "db.yaml"
    servers: list[str] = dataclasses.field(default_factory=list)
    addr: str = "127.0.0.1:7000"
    seed: int = 0
    budget: int = DEFAULT_BUDGET

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "field": self.field,
            "m": self.m,
            "p": self.p,
            "e": self.e,
            "mvf": self.mvf,
            "decoder": self.decoder,
            "db": self.db,
            "servers": list(self.servers),
            "addr": self.addr,
            "seed": self.seed,
            "budget": self.budget,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown bundle keys: {', '.join(unknown)}")
        missing = [key for key in ("field", "m", "p") if key not in data]
        if missing:
            raise ConfigError(f"bundle lacks required keys: {', '.join(missing)}")
        try:
            servers = data.get("servers") or []
            if isinstance(servers, str):
                servers = [s.strip() for s in servers.split(",") if s.strip()]
            return cls(
                field=str(data["field"]),
                m=int(data["m"]),
                p=int(data["p"]),
                e=int(data.get("e", 2)),
                name=str(data.get("name", "bundle")),
                mvf=str(data.get("mvf", "family.mvf")),
                decoder=str(data.get("decoder", "decoder.txt")),
                db=str(data.get("db", "db.yaml")),
                servers=[str(s) for s in servers],
                addr=str(data.get("addr", "127.0.0.1:7000")),
                seed=int(data.get("seed", 0)),
                budget=int(data.get("budget", DEFAULT_BUDGET)),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"bad bundle value: {e}") from e


@dataclass
class Bundle:
    config: Config
    params: PirParams
    path: Path

    def resolve(self, relative: str) -> Path:
        return (self.path.parent / relative).resolve()

    @property
    def db_path(self) -> Path:
        return self.resolve(self.config.db)

    def load_database(self) -> Database:
        db = load_database(self.db_path)
        if db.spec != self.params.spec:
            raise ConfigError(f"database field {db.spec.label} differs from bundle field {self.params.spec.label}")
        if db.n > self.params.n:
            raise ConfigError(f"database has {db.n} symbols, the family indexes only {self.params.n}")
        return db


def save_config(config: Config, filepath: Path) -> None:
    _dump_yaml(config.to_dict(), filepath)


def load_config(filepath: Path) -> Config:
    return Config.from_dict(_load_yaml(filepath))


def load_bundle(filepath: Path) -> Bundle:
    """Load a bundle; every referenced file must exist and validate."""
    filepath = Path(filepath).resolve()
    config = load_config(filepath)
    base = filepath.parent
    for key in ("mvf", "decoder", "db"):
        target = base / getattr(config, key)
        if not target.exists():
            raise ConfigError(f"bundle key '{key}' references missing file {target}")
    try:
        spec = FieldSpec.parse(config.field)
        family = load_mvf(base / config.mvf)
        decoder = load_decoder(base / config.decoder)
        if decoder.spec != spec:
            raise ConfigError(f"decoder field {decoder.spec.label} differs from bundle field {spec.label}")
        params = params_build(config.m, config.p, config.e, family, decoder)
    except ConfigError:
        raise
    except PirError as e:
        raise ConfigError(f"{filepath}: {e}") from e
    logger.debug("loaded bundle %s (%s)", config.name, filepath)
    return Bundle(config, params, filepath)


def save_database(db: Database, filepath: Path) -> None:
    _dump_yaml(db.to_dict(), filepath)


def load_database(filepath: Path) -> Database:
    try:
        return Database.from_dict(_load_yaml(filepath))
    except ConfigError:
        raise
    except PirError as e:
        raise ConfigError(f"{filepath}: {e}") from e


def write_bundle(
    out_dir: Path,
    config: Config,
    family: MvFamily,
    decoder: DecodingPoly,
    db: Optional[Database] = None,
) -> Path:
    """Write bundle.yaml and its referenced files; returns the bundle path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_mvf(family, out_dir / config.mvf)
    save_decoder(decoder, out_dir / config.decoder)
    if db is not None:
        save_database(db, out_dir / config.db)
    bundle_path = out_dir / "bundle.yaml"
    save_config(config, bundle_path)
    logger.info("wrote bundle %s to %s", config.name, bundle_path)
    return bundle_path
