"""Disk cache for truncated vertex-operator matrices.

An entry is the matrix of ``a_t`` (the ``t``-th mode of a state ``a`` of M on
the NS or R space) restricted to levels ``<= max_weight``.  Keys are SHA-256
hashes of a canonical JSON rendering of ``(schema, sector, state, mode,
max_weight)``; payloads store every nonzero entry with its scalar in canonical
text form, so a hit reproduces the computed matrix exactly.  Files are written
to a temporary name and renamed into place, which keeps readers safe while one
process writes.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .fields import state_action
from .fock import Sector, Vector, basis_upto
from .scalar import format_scalar, half, parse_scalar

SCHEMA_VERSION = 1
ENV_VAR = "ISING_SVOA_CACHE"


def default_cache_dir() -> Path | None:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


def _state_json(a: Vector) -> list:
    return [[list(m), format_scalar(c)] for m, c in sorted(a.terms.items())]


def cache_key(sector: Sector, a: Vector, mode, max_weight) -> str:
    blob = json.dumps(
        [SCHEMA_VERSION, sector.value, _state_json(a), str(Fraction(mode)), str(half(max_weight))],
        separators=(",", ":"),
    )
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class CacheEntry:
    """Sparse matrix ``{(out_monomial, in_monomial): scalar}`` plus its key."""

    key: str
    sector: Sector
    entries: dict

    def to_json(self) -> str:
        rows = [[list(o), list(i), format_scalar(c)] for (o, i), c in sorted(self.entries.items())]
        return json.dumps(
            {"schema": SCHEMA_VERSION, "key": self.key, "sector": self.sector.value, "entries": rows},
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "CacheEntry | None":
        obj = json.loads(text)
        if obj.get("schema") != SCHEMA_VERSION:
            return None
        entries = {(tuple(o), tuple(i)): parse_scalar(c) for o, i, c in obj["entries"]}
        return cls(obj["key"], Sector(obj["sector"]), entries)

    def apply(self, v: Vector) -> Vector:
        out = Vector(self.sector)
        for (o, i), c in self.entries.items():
            x = v.terms.get(i)
            if x:
                out.iadd(Vector.basis_vector(self.sector, o, c), x)
        return out


def compute_matrix(sector: Sector, a: Vector, mode, max_weight) -> dict:
    entries = {}
    for mono in basis_upto(sector, half(max_weight)):
        w = state_action(sector, a, mode, Vector.basis_vector(sector, mono))
        w, _ = w.truncated(half(max_weight))
        for o, c in w.terms.items():
            entries[(o, mono)] = c
    return entries


class OperatorCache:
    """Mode matrices, optionally backed by a directory.

    With ``verify=True`` every hit is recomputed and compared; a mismatch
    raises ``CacheMismatch``.  Entries with a foreign schema are recomputed
    and overwritten.
    """

    def __init__(self, directory=None, verify: bool = False):
        self.directory = Path(directory) if directory else default_cache_dir()
        self.verify = verify
        self.hits = 0
        self.misses = 0

    def _path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def matrix(self, sector, a: Vector, mode, max_weight) -> CacheEntry:
        sector = Sector.parse(sector)
        key = cache_key(sector, a, mode, max_weight)
        if self.directory is not None:
            path = self._path(key)
            if path.exists():
                entry = CacheEntry.from_json(path.read_text())
                if entry is not None and entry.key == key:
                    self.hits += 1
                    if self.verify and entry.entries != compute_matrix(sector, a, mode, max_weight):
                        raise CacheMismatch(f"cache entry {key} differs from recomputation")
                    return entry
        self.misses += 1
        entry = CacheEntry(key, sector, compute_matrix(sector, a, mode, max_weight))
        if self.directory is not None:
            self._write(entry)
        return entry

    def _write(self, entry: CacheEntry):
        path = self._path(entry.key)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(entry.to_json())
        os.replace(tmp, path)


class CacheMismatch(RuntimeError):
    pass
