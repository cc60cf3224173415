"""Built-in reference instances with frozen expected values.

Each entry is one JSON file under ``catalog_data/`` with schema id
``lass.catalog/1``.  ``origin`` tags every expected value with how it was
obtained: ``trivial`` (immediate from the definitions), ``derived`` (computed
by an independent route and frozen), ``classical`` (a standard textbook fact).
A tag may be a single string or a list with one tag per number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .ce import (
    LieAlgebra,
    Representation,
    Subalgebra,
    ce_complex,
    lie_algebra_from_json,
    representation_from_json,
)
from .cochain import betti
from .errors import LassError, StructuralError
from .exactq import ExactMatrix, to_scalar

SCHEMA = "lass.catalog/1"
KINDS = ("lie", "hs", "extension", "jet")
ORIGINS = ("trivial", "derived", "classical")


class UnknownEntry(LassError, KeyError):
    pass


def pq_key(p: int, q: int) -> str:
    return f"{p},{q}"


def parse_pq(key: str) -> tuple:
    p, q = key.split(",")
    return int(p), int(q)


def table_to_json(table: dict) -> dict:
    return {pq_key(*pq): v for pq, v in sorted(table.items())}


def table_from_json(data: dict) -> dict:
    return {parse_pq(k): v for k, v in data.items()}


class Expected(dict):
    """Expected values; keys are also readable as attributes."""

    def __getattr__(self, name):
        if name in self:
            return self[name]
        if name.startswith("d2_rank_at_"):
            p, q = name[len("d2_rank_at_"):].split("_")
            return self["d2_ranks"].get(pq_key(int(p), int(q)), 0)
        raise AttributeError(name)


@dataclass
class CatalogEntry:
    name: str
    kind: str
    description: str
    payload: dict
    expected: Expected
    origin: dict = field(default_factory=dict)

    # payload accessors

    def lie_algebra(self) -> LieAlgebra:
        if self.kind == "jet":
            raise StructuralError(f"{self.name} is a jet algebroid")
        return lie_algebra_from_json(self.payload)

    def representation(self, g: LieAlgebra | None = None) -> Representation:
        g = self.lie_algebra() if g is None else g
        if "representation" in self.payload:
            return representation_from_json(self.payload["representation"], g)
        return Representation.trivial(g)

    def subalgebra(self, g: LieAlgebra | None = None) -> Subalgebra:
        g = self.lie_algebra() if g is None else g
        if "subalgebra" not in self.payload:
            raise StructuralError(f"{self.name} has no subalgebra block")
        return Subalgebra(g, subalgebra_vectors(self.payload["subalgebra"], g.dim))

    def hs_instance(self):
        from .serre import hs_filtration
        g = self.lie_algebra()
        return hs_filtration(g, self.subalgebra(g), self.representation(g))

    def extension(self):
        from .extension import AbelianExtension
        if "subalgebra" not in self.payload:
            raise StructuralError(f"{self.name} has no ideal to extend by")
        g = self.lie_algebra()
        splitting = None
        if "splitting" in self.payload:
            splitting = splitting_from_json(self.payload["splitting"], g.dim)
        return AbelianExtension.build(g, subalgebra_vectors(self.payload["subalgebra"], g.dim),
                                      self.representation(g), splitting)

    def jet_algebroid(self, k: int | None = None):
        from .jets import PolyJetAlgebroid
        if self.kind != "jet":
            raise StructuralError(f"{self.name} is not a jet entry")
        A = PolyJetAlgebroid.from_json(self.payload)
        return A if k is None else A.with_order(k)

    def jet_representation(self) -> Representation:
        n = int(self.payload["fiber_dim"])
        if "representation" in self.payload:
            data = self.payload["representation"]
            m = int(data["dim"])
            return Representation(m, tuple(ExactMatrix.from_rows(a, cols=m) for a in data["matrices"]))
        return Representation(1, tuple(ExactMatrix.zeros(1, 1) for _ in range(n)), ("1",))

    @property
    def orders(self) -> list:
        return list(self.payload.get("orders", [self.payload.get("order", 0)]))

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "name": self.name, "kind": self.kind,
                "description": self.description, "payload": self.payload,
                "expected": dict(self.expected), "origin": self.origin}

    @classmethod
    def from_json(cls, data: dict) -> "CatalogEntry":
        if data.get("schema") != SCHEMA:
            raise StructuralError(f"unknown catalog schema {data.get('schema')!r}")
        if data["kind"] not in KINDS:
            raise StructuralError(f"unknown entry kind {data['kind']!r}")
        for key, tag in data.get("origin", {}).items():
            tags = tag if isinstance(tag, list) else [tag]
            if any(t not in ORIGINS for t in tags):
                raise StructuralError(f"bad origin tag for {key}: {tag}")
        return cls(data["name"], data["kind"], data.get("description", ""), data["payload"],
                   Expected(data["expected"]), data.get("origin", {}))


def subalgebra_vectors(block, dim: int) -> list:
    vectors = block["basis"] if isinstance(block, dict) else block
    out = []
    for v in vectors:
        if len(v) != dim:
            raise StructuralError(f"subalgebra vector of length {len(v)} in dimension {dim}")
        out.append([to_scalar(x) for x in v])
    return out


def splitting_from_json(cols, dim: int) -> ExactMatrix:
    """Columns σ(b_j) in g-coordinates."""
    return ExactMatrix.from_columns([[to_scalar(x) for x in c] for c in cols], dim)


# storage

def data_dir() -> Path:
    return Path(str(resources.files("lass") / "catalog_data"))


def names() -> list:
    return sorted(p.stem for p in data_dir().glob("*.json"))


def load(name: str) -> CatalogEntry:
    path = data_dir() / f"{name}.json"
    if not path.exists():
        raise UnknownEntry(f"no catalog entry named {name!r}")
    return CatalogEntry.from_json(json.loads(path.read_text()))


def load_all(kind: str | None = None) -> list:
    entries = [load(n) for n in names()]
    return [e for e in entries if kind is None or e.kind == kind]


def save(entry: CatalogEntry, directory: Path | None = None) -> Path:
    path = (directory or data_dir()) / f"{entry.name}.json"
    path.write_text(json.dumps(entry.to_json(), indent=1, ensure_ascii=False) + "\n")
    return path


# recomputation

def ss_summary(ss) -> dict:
    stab = ss.stabilization()
    pages = {str(r): table_to_json(ss.nonzero_dims(r)) for r in range(stab + 1)}
    ranks = {}
    for r in range(1, stab + 1):
        nz = {pq: k for pq, k in ss.ranks(r).items() if k}
        if nz:
            ranks[str(r)] = table_to_json(nz)
    return {"stabilization": stab, "pages": pages, "ranks": ranks}


def compute_expected(entry: CatalogEntry) -> dict:
    """All expected values recomputed from the payload."""
    if entry.kind == "jet":
        return _compute_jet(entry)
    g = entry.lie_algebra()
    V = entry.representation(g)
    out = {"betti": list(betti(ce_complex(g, V)))}
    if entry.kind == "lie":
        return out
    from .serre import e1_table_oracle, e2_table_oracle
    inst = entry.hs_instance()
    out.update(ss_summary(inst.ss))
    out["e1_oracle"] = table_to_json(e1_table_oracle(inst))
    if inst.h.is_ideal():
        out["e2_oracle"] = table_to_json(e2_table_oracle(inst))
    if entry.kind == "extension":
        from .extension import d2_cells, extension_class
        ext = entry.extension()
        out["extension_class_zero"] = extension_class(ext).is_zero
        cells = d2_cells(ext, inst)
        out["d2_ranks"] = {pq_key(*c.pq): c.oracle_rank for c in cells if c.oracle_rank}
    return out


def _compute_jet(entry: CatalogEntry) -> dict:
    from .jets import e1_oracle_table, jet_complex
    V = entry.jet_representation()
    per_order = {}
    linear = entry.jet_algebroid().is_linear()
    for k in entry.orders:
        A = entry.jet_algebroid(k)
        jc = jet_complex(A, V)
        summary = {"betti": list(betti(jc.complex))}
        summary.update(ss_summary(jc.ss))
        summary["e1_oracle"] = table_to_json(e1_oracle_table(A, V))
        per_order[str(k)] = summary
    return {"linear": linear, "orders": per_order}


def regenerate(name: str) -> dict:
    return compute_expected(load(name))


def diff(entry: CatalogEntry, recomputed: dict | None = None) -> list:
    """Keys whose stored value differs from the recomputed one."""
    recomputed = compute_expected(entry) if recomputed is None else recomputed
    keys = sorted(set(entry.expected) | set(recomputed))
    return [k for k in keys if entry.expected.get(k) != recomputed.get(k)]
