"""End-to-end enumeration: diagrams -> Kulkarni diagrams -> classified records."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .classification import (
    SubgroupRecord,
    block_systems,
    classify,
    is_congruence,
)
from .core import ProjMatrix
from .diagrams import CONVENTIONS, Coloring, OrientedTree, TreeDiagram, enumerate_tree_diagrams
from .kulkarni import invariants, kulkarni_diagram
from .trees import BivalentTree
from .wordproblem import is_member

__all__ = [
    "RunConfig",
    "MODES",
    "JOBS_ENV",
    "default_jobs",
    "enumerate_subgroups",
    "table1",
    "TABLE1",
    "record_to_dict",
    "diagram_from_dict",
    "write_records",
    "find_record",
    "describe",
    "member_query",
    "congruence_query",
    "overgroups",
]

log = logging.getLogger(__name__)

MODES = ("diagrams", "sl2", "gl2")
JOBS_ENV = "MODSUB_JOBS"

# Published counts (index: diagrams, SL2 classes, GL2 classes).
TABLE1 = {
    2: (1, 1, 1),
    3: (2, 2, 2),
    4: (2, 2, 2),
    5: (1, 1, 1),
    6: (9, 8, 8),
    7: (8, 6, 4),
    8: (8, 7, 6),
    9: (54, 14, 12),
    10: (101, 27, 19),
    11: (80, 26, 16),
    12: (440, 80, 63),
    13: (790, 133, 73),
    14: (770, 170, 106),
    15: (3184, 348, 213),
    16: (6540, 765, 428),
    17: (6582, 1002, 533),
    18: (28958, 2176, 1277),
    19: (61072, 4682, 2410),
    20: (68920, 6931, 3679),
}


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV)
    if raw is None:
        return 1
    try:
        jobs = int(raw)
    except ValueError:
        raise ValueError(f"{JOBS_ENV} must be an integer, got {raw!r}") from None
    if jobs < 1:
        raise ValueError(f"{JOBS_ENV} must be at least 1")
    return jobs


@dataclass(frozen=True)
class RunConfig:
    indices: tuple[int, ...]
    mode: str = "sl2"
    jobs: int = 1
    out: str | None = None
    fmt: str = "jsonl"
    deterministic: bool = True
    convention: str = "table"
    congruence: bool = True
    genus: int | None = None  # keep only this genus (filtered before passports)

    def __post_init__(self) -> None:
        if not self.indices or min(self.indices) < 2:
            raise ValueError("indices must be at least 2")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.fmt not in ("jsonl", "csv"):
            raise ValueError("format must be jsonl or csv")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")

    @classmethod
    def up_to(cls, max_index: int, **kw) -> RunConfig:
        return cls(tuple(range(2, max_index + 1)), **kw)


def _classify_chunk(args: tuple[list[TreeDiagram], bool, int | None]) -> list[SubgroupRecord]:
    diagrams, congruence, genus = args
    out = []
    for D in diagrams:
        K = kulkarni_diagram(D)
        if genus is not None and invariants(K).genus != genus:
            continue
        out.append(classify(K, congruence=congruence))
    return out


def _chunks(items: Sequence, n: int) -> list[list]:
    size = max(1, -(-len(items) // (4 * n)))
    return [list(items[i : i + size]) for i in range(0, len(items), size)]


def _classify_all(
    diagrams: list[TreeDiagram], jobs: int, congruence: bool, genus: int | None
) -> list[SubgroupRecord]:
    if jobs == 1 or len(diagrams) < 64:
        return _classify_chunk((diagrams, congruence, genus))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(_classify_chunk, [(c, congruence, genus) for c in _chunks(diagrams, jobs)])
        return [r for part in parts for r in part]


def _dedup(records: list[SubgroupRecord], mode: str) -> list[SubgroupRecord]:
    records = sorted(records, key=lambda r: (r.key, r.diagram_id))
    if mode == "diagrams":
        return records
    chosen: dict[bytes, SubgroupRecord] = {}
    for r in records:
        chosen.setdefault(r.key if mode == "sl2" else r.gl2, r)
    return sorted(chosen.values(), key=lambda r: (r.key, r.diagram_id))


def enumerate_subgroups(cfg: RunConfig) -> Iterator[SubgroupRecord]:
    """Records for every index of ``cfg``, deduplicated by mode, sorted by (index, key)."""
    for d in sorted(set(cfg.indices)):
        start = time.perf_counter()
        diagrams = enumerate_tree_diagrams(d, cfg.convention)
        records = _classify_all(diagrams, cfg.jobs, cfg.congruence, cfg.genus)
        kept = _dedup(records, cfg.mode)
        log.info("index %d: %d diagrams -> %d records (%.2fs)", d, len(diagrams), len(kept), time.perf_counter() - start)
        yield from kept


def table1(max_index: int, jobs: int = 1, min_index: int = 2) -> list[tuple[int, int, int, int]]:
    """Rows (index, diagram count, SL2 classes, GL2 classes)."""
    if max_index < 2:
        raise ValueError("max_index must be at least 2")
    rows = []
    for d in range(max(2, min_index), max_index + 1):
        start = time.perf_counter()
        diagrams = enumerate_tree_diagrams(d)
        records = _classify_all(diagrams, jobs, False, None)
        rows.append((d, len(diagrams), len({r.key for r in records}), len({r.gl2 for r in records})))
        log.info("table1 row %s (%.2fs)", rows[-1], time.perf_counter() - start)
    return rows


# --- serialization ---------------------------------------------------------


def record_to_dict(r: SubgroupRecord) -> dict:
    D = r.diagram.diagram
    col = D.coloring
    return {
        "index": r.index,
        "tree": [list(e) for e in D.tree.edges()],
        "orientation": [list(c) for c in D.oriented.orientation],
        "coloring": {
            "blue": list(col.blue),
            "red": list(col.red_fixed),
            "pairs": [list(p) for p in col.free_pairs],
        },
        "gfs": r.diagram.gfs.strings(),
        "sigma_s": str(r.passport.sigma_S),
        "sigma_r": str(r.passport.sigma_R),
        "sigma_t": str(r.passport.sigma_T),
        "genus": r.genus,
        "e2": r.e2,
        "e3": r.e3,
        "cusps": [{"members": list(m), "width": w} for m, w in r.cusps],
        "level": r.level,
        "generators": [g.rows() for g in r.generators],
        "congruence": r.congruence,
        "key": r.key.hex(),
        "gl2_key": r.gl2.hex(),
        "diagram_id": r.diagram_id,
    }


def diagram_from_dict(obj: dict) -> TreeDiagram:
    """Rebuild the labelled tree diagram stored in a record."""
    edges = obj["tree"]
    nv = len(edges) + 1
    adj: list[list[int]] = [[] for _ in range(nv)]
    for u, v in edges:
        adj[u - 1].append(v)
        adj[v - 1].append(u)
    m = sum(1 for nb in adj if len(nb) == 3)
    tree = BivalentTree(m, 3, tuple(tuple(sorted(nb)) for nb in adj))
    oriented = OrientedTree(tree, tuple(tuple(c) for c in obj["orientation"]))
    c = obj["coloring"]
    coloring = Coloring(tuple(c["blue"]), tuple(c["red"]), tuple(tuple(p) for p in c["pairs"]))
    return TreeDiagram(oriented, coloring)


_CSV_FIELDS = [
    "index", "key", "gl2_key", "genus", "e2", "e3", "level", "congruence",
    "sigma_s", "sigma_r", "sigma_t", "gfs", "cusps", "generators", "diagram_id",
]


def write_records(records: Iterable[SubgroupRecord], out: io.TextIOBase, fmt: str = "jsonl") -> int:
    n = 0
    if fmt == "jsonl":
        for r in records:
            out.write(json.dumps(record_to_dict(r), separators=(",", ":")) + "\n")
            n += 1
        return n
    writer = csv.DictWriter(out, fieldnames=_CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        row = record_to_dict(r)
        flat = {k: row[k] for k in _CSV_FIELDS}
        flat["gfs"] = " ".join(row["gfs"])
        flat["cusps"] = ";".join(f"{{{','.join(c['members'])}}}:{c['width']}" for c in row["cusps"])
        flat["generators"] = json.dumps(row["generators"], separators=(",", ":"))
        writer.writerow(flat)
        n += 1
    return n


# --- record lookup and queries ---------------------------------------------


def _degree_of_key(key: str) -> int:
    try:
        raw = bytes.fromhex(key)
    except ValueError:
        raise KeyError(f"malformed key {key!r}") from None
    if not raw:
        raise KeyError("empty key")
    d = raw[0]
    if len(raw) == 1 + 2 * d:
        return d
    if len(raw) >= 2 and len(raw) == 2 + 4 * int.from_bytes(raw[:2], "big"):
        return int.from_bytes(raw[:2], "big")
    raise KeyError(f"malformed key {key!r}")


def find_record(key: str, db: str | None = None) -> SubgroupRecord:
    """Locate the SL2 class with this canonical (or GL2) key.

    With ``db`` the record is rebuilt from a JSONL file written by
    ``enumerate``; otherwise the index encoded in the key is re-enumerated.
    """
    key = key.strip().lower()
    if db is not None:
        with open(db, encoding="utf-8") as fh:
            for line in fh:
                obj = json.loads(line)
                if key in (obj["key"], obj.get("gl2_key")):
                    return classify(diagram_from_dict(obj))
        raise KeyError(f"no record with key {key} in {db}")
    d = _degree_of_key(key)
    for r in enumerate_subgroups(RunConfig((d,), mode="sl2")):
        if key in (r.key.hex(), r.gl2.hex()):
            return r
    raise KeyError(f"no subgroup of index {d} has key {key}")


def describe(r: SubgroupRecord) -> str:
    yes = "Yes" if r.congruence else "No"
    lines = [
        f"index       {r.index}",
        f"key         {r.key.hex()}",
        f"gl2 key     {r.gl2.hex()}",
        f"g.F.s.      {{{', '.join(r.diagram.gfs.strings())}}}",
        f"sides       {', '.join(str(x) for x in r.diagram.side_labels)}",
        f"sigma_S     {r.passport.sigma_S}",
        f"sigma_R     {r.passport.sigma_R}",
        f"sigma_T     {r.passport.sigma_T}",
        f"genus       {r.genus}",
        f"e2          {r.e2}",
        f"e3          {r.e3}",
        "cusps       " + ", ".join(f"({{{', '.join(m)}}}, {w})" for m, w in r.cusps),
        f"level       {r.level}",
        "generators  " + ", ".join(str(g) for g in r.generators),
        f"congruence  {yes}",
    ]
    return "\n".join(lines)


def member_query(r: SubgroupRecord, matrix: str) -> bool:
    return is_member(r.diagram, ProjMatrix.parse(matrix))


def congruence_query(r: SubgroupRecord) -> bool:
    return is_congruence(r.diagram)


def overgroups(r: SubgroupRecord, blocks: int) -> list[tuple[tuple[int, ...], ...]]:
    return block_systems(r.passport, blocks)
