"""Corpus ingestion: TSV parsing, dynasty assignment, and signed-graph aggregation.

Input files are UTF-8 tab-separated with fixed headers (see the README data
format section). Multiple relationship records between the same two people
are aggregated into one undirected edge whose sign is decided by majority of
positive vs negative record counts, with ties falling to neutral. The raw
per-code evidence is kept alongside the graph so pair reports can show it.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .graph import Sign, SignedEdge, SignedGraph

log = logging.getLogger(__name__)

SNAPSHOT_FORMAT = "campnet-snapshot"
SNAPSHOT_VERSION = 1

PERSONS_HEADER = ["person_id", "name_cn", "name_en", "dynasty", "birth_year", "death_year"]
RELATIONS_HEADER = ["from_id", "to_id", "rel_code", "rel_name", "count"]
RULES_HEADER = ["rel_code", "sign"]
DYNASTIES_HEADER = ["name", "start_year", "end_year"]


class IngestError(Exception):
    """Fatal ingestion problem: missing file, bad header, duplicate key."""


class SnapshotError(Exception):
    """A graph snapshot file is missing, malformed, or from an unknown version."""


@dataclass(frozen=True)
class PersonRecord:
    person_id: int
    name_cn: str
    name_en: str
    dynasty_label: Optional[str] = None
    birth_year: Optional[int] = None
    death_year: Optional[int] = None


@dataclass(frozen=True)
class RelationRecord:
    from_id: int
    to_id: int
    rel_code: str
    rel_name: str
    count: int


@dataclass(frozen=True)
class SignRule:
    rel_code: str
    sign: Sign


@dataclass(frozen=True)
class DynastySpan:
    name: str
    start_year: int
    end_year: int


@dataclass(frozen=True)
class EvidenceRecord:
    """Per-relationship-code evidence attached to one undirected pair."""

    rel_code: str
    rel_name: str
    sign: Sign
    count: int


@dataclass
class ParseSummary:
    """What happened while reading one file: kept/dropped rows and warnings."""

    path: str
    rows_read: int = 0
    rows_kept: int = 0
    rows_dropped: int = 0
    self_loops_dropped: int = 0
    warnings: List[str] = field(default_factory=list)

    def warn(self, line_no: int, message: str) -> None:
        self.warnings.append(f"{self.path}:{line_no}: {message}")


@dataclass
class BuildSummary:
    """Aggregation-time counters: what was filtered out and why."""

    persons_total: int = 0
    persons_kept: int = 0
    records_kept: int = 0
    missing_endpoint_dropped: int = 0
    excluded_id_dropped: int = 0
    unmapped_codes: List[str] = field(default_factory=list)

    def as_dict(self) -> Dict[str, object]:
        return {
            "persons_total": self.persons_total,
            "persons_kept": self.persons_kept,
            "records_kept": self.records_kept,
            "missing_endpoint_dropped": self.missing_endpoint_dropped,
            "excluded_id_dropped": self.excluded_id_dropped,
            "unmapped_codes": list(self.unmapped_codes),
        }


# -- TSV parsing -------------------------------------------------------------


def _read_rows(path: Path, header: Sequence[str]) -> Iterable[Tuple[int, List[str]]]:
    if not path.exists():
        raise IngestError(f"input file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n").rstrip("\r")
        if first.split("\t") != list(header):
            raise IngestError(
                f"{path}: header mismatch, expected {chr(9).join(header)!r}, got {first!r}"
            )
        for line_no, line in enumerate(fh, start=2):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            yield line_no, line.split("\t")


def _opt_int(text: str) -> Optional[int]:
    return int(text) if text != "" else None


def parse_persons(path: str | Path) -> Tuple[List[PersonRecord], ParseSummary]:
    path = Path(path)
    summary = ParseSummary(str(path))
    persons: List[PersonRecord] = []
    seen: set[int] = set()
    for line_no, cols in _read_rows(path, PERSONS_HEADER):
        summary.rows_read += 1
        if len(cols) != len(PERSONS_HEADER):
            summary.warn(line_no, f"expected {len(PERSONS_HEADER)} columns, got {len(cols)}")
            summary.rows_dropped += 1
            continue
        try:
            pid = int(cols[0])
            birth = _opt_int(cols[4])
            death = _opt_int(cols[5])
        except ValueError:
            summary.warn(line_no, "non-integer person_id or year")
            summary.rows_dropped += 1
            continue
        if pid < 0:
            summary.warn(line_no, f"negative person_id {pid}")
            summary.rows_dropped += 1
            continue
        if birth is not None and death is not None and birth > death:
            summary.warn(line_no, f"birth_year {birth} after death_year {death}")
            summary.rows_dropped += 1
            continue
        if pid in seen:
            raise IngestError(f"{path}:{line_no}: duplicate person_id {pid}")
        seen.add(pid)
        persons.append(PersonRecord(pid, cols[1], cols[2], cols[3] or None, birth, death))
        summary.rows_kept += 1
    return persons, summary


def parse_relations(path: str | Path) -> Tuple[List[RelationRecord], ParseSummary]:
    path = Path(path)
    summary = ParseSummary(str(path))
    records: List[RelationRecord] = []
    for line_no, cols in _read_rows(path, RELATIONS_HEADER):
        summary.rows_read += 1
        if len(cols) != len(RELATIONS_HEADER):
            summary.warn(line_no, f"expected {len(RELATIONS_HEADER)} columns, got {len(cols)}")
            summary.rows_dropped += 1
            continue
        try:
            from_id, to_id, count = int(cols[0]), int(cols[1]), int(cols[4])
        except ValueError:
            summary.warn(line_no, "non-integer id or count")
            summary.rows_dropped += 1
            continue
        if count < 1:
            summary.warn(line_no, f"count must be >= 1, got {count}")
            summary.rows_dropped += 1
            continue
        if from_id == to_id:
            summary.warn(line_no, f"self-relation on person {from_id} dropped")
            summary.self_loops_dropped += 1
            summary.rows_dropped += 1
            continue
        records.append(RelationRecord(from_id, to_id, cols[2], cols[3], count))
        summary.rows_kept += 1
    return records, summary


def parse_sign_rules(path: str | Path) -> Tuple[List[SignRule], ParseSummary]:
    path = Path(path)
    summary = ParseSummary(str(path))
    rules: List[SignRule] = []
    seen: set[str] = set()
    for line_no, cols in _read_rows(path, RULES_HEADER):
        summary.rows_read += 1
        if len(cols) != len(RULES_HEADER):
            summary.warn(line_no, f"expected {len(RULES_HEADER)} columns, got {len(cols)}")
            summary.rows_dropped += 1
            continue
        code, symbol = cols
        if code in seen:
            raise IngestError(f"{path}:{line_no}: duplicate rel_code {code!r}")
        try:
            sign = Sign.from_symbol(symbol)
        except ValueError:
            summary.warn(line_no, f"invalid sign {symbol!r} for code {code!r}")
            summary.rows_dropped += 1
            continue
        seen.add(code)
        rules.append(SignRule(code, sign))
        summary.rows_kept += 1
    return rules, summary


def parse_dynasties(path: str | Path) -> Tuple[List[DynastySpan], ParseSummary]:
    path = Path(path)
    summary = ParseSummary(str(path))
    spans: List[DynastySpan] = []
    for line_no, cols in _read_rows(path, DYNASTIES_HEADER):
        summary.rows_read += 1
        if len(cols) != len(DYNASTIES_HEADER):
            summary.warn(line_no, f"expected {len(DYNASTIES_HEADER)} columns, got {len(cols)}")
            summary.rows_dropped += 1
            continue
        try:
            start, end = int(cols[1]), int(cols[2])
        except ValueError:
            summary.warn(line_no, "non-integer year")
            summary.rows_dropped += 1
            continue
        if start >= end:
            summary.warn(line_no, f"start_year {start} must be before end_year {end}")
            summary.rows_dropped += 1
            continue
        spans.append(DynastySpan(cols[0], start, end))
        summary.rows_kept += 1
    return spans, summary


def default_dynasties() -> List[DynastySpan]:
    """The five dynasty spans shipped with the package (Tang through Qing)."""
    with resources.as_file(resources.files("campnet").joinpath("data/dynasties.tsv")) as p:
        spans, _ = parse_dynasties(p)
    return spans


def parse_corpus(persons_file: str | Path, relations_file: str | Path,
                 rules_file: str | Path) -> Tuple[List[PersonRecord], List[RelationRecord],
                                                  List[SignRule], List[ParseSummary]]:
    """Parse the three corpus files, returning records plus per-file summaries."""
    persons, ps = parse_persons(persons_file)
    relations, rs = parse_relations(relations_file)
    rules, ss = parse_sign_rules(rules_file)
    return persons, relations, rules, [ps, rs, ss]


# -- dynasty assignment -------------------------------------------------------


def assign_dynasty(p: PersonRecord, spans: Sequence[DynastySpan]) -> Optional[str]:
    """Assign a person to a dynasty by label, then birth year, then death year.

    Years falling into overlapping spans resolve to the first matching span in
    table order. Returns None when no rule applies.
    """
    if not spans:
        raise ValueError("spans must be non-empty")
    names = {s.name for s in spans}
    if len(names) != len(spans):
        raise ValueError("dynasty span names must be distinct")
    if p.dynasty_label is not None and p.dynasty_label in names:
        return p.dynasty_label
    for year in (p.birth_year, p.death_year):
        if year is None:
            continue
        for span in spans:
            if span.start_year <= year <= span.end_year:
                return span.name
    return None


# -- aggregation ---------------------------------------------------------------


def _aggregate(persons: Mapping[int, PersonRecord], relations: Sequence[RelationRecord],
               rules: Mapping[str, Sign], exclude_ids: frozenset[int],
               summary: BuildSummary) -> Tuple[Dict[Tuple[int, int], List[EvidenceRecord]],
                                               List[SignedEdge]]:
    unmapped: set[str] = set()
    # pair -> rel_code -> [rel_name, sign, count]
    pair_codes: Dict[Tuple[int, int], Dict[str, List]] = {}
    for rec in relations:
        if rec.from_id in exclude_ids or rec.to_id in exclude_ids:
            summary.excluded_id_dropped += 1
            continue
        if rec.from_id not in persons or rec.to_id not in persons:
            summary.missing_endpoint_dropped += 1
            continue
        sign = rules.get(rec.rel_code)
        if sign is None:
            unmapped.add(rec.rel_code)
            sign = Sign.NEUTRAL
        key = (rec.from_id, rec.to_id) if rec.from_id < rec.to_id else (rec.to_id, rec.from_id)
        codes = pair_codes.setdefault(key, {})
        if rec.rel_code in codes:
            codes[rec.rel_code][2] += rec.count
        else:
            codes[rec.rel_code] = [rec.rel_name, sign, rec.count]
        summary.records_kept += rec.count

    if unmapped:
        summary.unmapped_codes = sorted(unmapped)
        log.warning("treating %d unmapped relationship code(s) as neutral: %s",
                    len(unmapped), ", ".join(summary.unmapped_codes))

    evidence: Dict[Tuple[int, int], List[EvidenceRecord]] = {}
    edges: List[SignedEdge] = []
    for key in sorted(pair_codes):
        recs = [EvidenceRecord(code, name, sign, count)
                for code, (name, sign, count) in sorted(pair_codes[key].items())]
        evidence[key] = recs
        pos = sum(r.count for r in recs if r.sign is Sign.POSITIVE)
        neg = sum(r.count for r in recs if r.sign is Sign.NEGATIVE)
        neu = sum(r.count for r in recs if r.sign is Sign.NEUTRAL)
        edges.append(SignedEdge(key[0], key[1], pos + neg + neu,
                                aggregate_sign(pos, neg), pos, neg, neu))
    return evidence, edges


def aggregate_sign(pos_count: int, neg_count: int) -> Sign:
    """Majority rule over record counts; ties (including 0-0) are neutral."""
    if pos_count > neg_count:
        return Sign.POSITIVE
    if neg_count > pos_count:
        return Sign.NEGATIVE
    return Sign.NEUTRAL


@dataclass(frozen=True)
class Dataset:
    """A built corpus slice: the signed graph plus person and evidence lookups.

    This is the unit of persistence (snapshot files) and the read-only context
    served by the HTTP service.
    """

    graph: SignedGraph
    persons: Mapping[int, PersonRecord]
    evidence: Mapping[Tuple[int, int], Tuple[EvidenceRecord, ...]]
    dynasty: Optional[str] = None
    build: Optional[BuildSummary] = None

    def person(self, pid: int) -> Optional[PersonRecord]:
        return self.persons.get(pid)

    def display_name(self, pid: int) -> str:
        p = self.persons.get(pid)
        if p is None:
            return str(pid)
        return p.name_en or p.name_cn or str(pid)

    def pair_evidence(self, u: int, v: int) -> Tuple[EvidenceRecord, ...]:
        key = (u, v) if u < v else (v, u)
        return self.evidence.get(key, ())

    def restrict(self, node_ids: Iterable[int]) -> "Dataset":
        """The dataset induced on ``node_ids``: subgraph plus matching lookups."""
        wanted = set(node_ids)
        sub = self.graph.induced_subgraph(wanted)
        persons = {pid: p for pid, p in self.persons.items() if pid in wanted}
        evidence = {k: v for k, v in self.evidence.items()
                    if k[0] in wanted and k[1] in wanted}
        return Dataset(sub, persons, evidence, self.dynasty, None)


def build_dataset(persons: Sequence[PersonRecord], relations: Sequence[RelationRecord],
                  rules: Sequence[SignRule], dynasty: Optional[str] = None,
                  spans: Optional[Sequence[DynastySpan]] = None,
                  exclude_ids: Iterable[int] = ()) -> Dataset:
    """Filter persons to ``dynasty`` (when given), aggregate records, build the graph.

    Relations whose endpoints did not survive filtering are dropped with a
    counter; relationship codes without a sign rule default to neutral with a
    warning. Every surviving person becomes a node even if isolated.
    """
    summary = BuildSummary(persons_total=len(persons))
    excluded = frozenset(exclude_ids)
    kept: Dict[int, PersonRecord] = {}
    if dynasty is not None:
        span_list = list(spans) if spans is not None else default_dynasties()
        for p in persons:
            if p.person_id not in excluded and assign_dynasty(p, span_list) == dynasty:
                kept[p.person_id] = p
    else:
        kept = {p.person_id: p for p in persons if p.person_id not in excluded}
    summary.persons_kept = len(kept)

    rule_map = {r.rel_code: r.sign for r in rules}
    evidence, edges = _aggregate(kept, relations, rule_map, excluded, summary)
    graph = SignedGraph(kept.keys(), edges)
    frozen = {k: tuple(v) for k, v in evidence.items()}
    return Dataset(graph, dict(sorted(kept.items())), frozen, dynasty, summary)


def build_graph(persons: Sequence[PersonRecord], relations: Sequence[RelationRecord],
                rules: Sequence[SignRule], dynasty: Optional[str] = None,
                spans: Optional[Sequence[DynastySpan]] = None) -> SignedGraph:
    """The signed graph alone; see build_dataset for the full context."""
    return build_dataset(persons, relations, rules, dynasty, spans).graph


# -- snapshot persistence -------------------------------------------------------


def _person_dict(p: PersonRecord) -> Dict[str, object]:
    return {
        "person_id": p.person_id,
        "name_cn": p.name_cn,
        "name_en": p.name_en,
        "dynasty": p.dynasty_label,
        "birth_year": p.birth_year,
        "death_year": p.death_year,
    }


def dataset_to_dict(ds: Dataset) -> Dict[str, object]:
    """The versioned snapshot structure, with all arrays deterministically sorted."""
    edges = []
    for e in ds.graph.edges():
        records = [
            {"rel_code": r.rel_code, "rel_name": r.rel_name,
             "sign": r.sign.value, "count": r.count}
            for r in ds.pair_evidence(e.u, e.v)
        ]
        edges.append({
            "u": e.u, "v": e.v, "weight": e.weight, "sign": e.sign.value,
            "pos_count": e.pos_count, "neg_count": e.neg_count, "neu_count": e.neu_count,
            "records": records,
        })
    payload: Dict[str, object] = {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "dynasty": ds.dynasty,
        "node_count": ds.graph.node_count(),
        "edge_count": ds.graph.edge_count(),
        "persons": [_person_dict(ds.persons[pid]) for pid in sorted(ds.persons)],
        "edges": edges,
    }
    if ds.build is not None:
        payload["build"] = ds.build.as_dict()
    return payload


def save_snapshot(ds: Dataset, path: str | Path) -> None:
    text = json.dumps(dataset_to_dict(ds), ensure_ascii=False, indent=1)
    Path(path).write_text(text + "\n", encoding="utf-8")


def dataset_from_dict(payload: Mapping[str, object]) -> Dataset:
    if not isinstance(payload, Mapping):
        raise SnapshotError("snapshot root must be a JSON object")
    if payload.get("format") != SNAPSHOT_FORMAT:
        raise SnapshotError(f"not a {SNAPSHOT_FORMAT} file (format={payload.get('format')!r})")
    if payload.get("version") != SNAPSHOT_VERSION:
        raise SnapshotError(f"unsupported snapshot version {payload.get('version')!r}")
    try:
        persons = {
            int(p["person_id"]): PersonRecord(
                int(p["person_id"]), str(p["name_cn"]), str(p["name_en"]),
                p["dynasty"] if p["dynasty"] is None else str(p["dynasty"]),
                p["birth_year"] if p["birth_year"] is None else int(p["birth_year"]),
                p["death_year"] if p["death_year"] is None else int(p["death_year"]))
            for p in payload["persons"]
        }
        edges = []
        evidence: Dict[Tuple[int, int], Tuple[EvidenceRecord, ...]] = {}
        for e in payload["edges"]:
            edge = SignedEdge(int(e["u"]), int(e["v"]), e["weight"], Sign(e["sign"]),
                              int(e["pos_count"]), int(e["neg_count"]), int(e["neu_count"]))
            edges.append(edge)
            evidence[edge.key] = tuple(
                EvidenceRecord(str(r["rel_code"]), str(r["rel_name"]),
                               Sign(r["sign"]), int(r["count"]))
                for r in e.get("records", ()))
        graph = SignedGraph(persons.keys(), edges)
    except (KeyError, TypeError, ValueError) as exc:
        raise SnapshotError(f"malformed snapshot: {exc}") from exc
    dynasty = payload.get("dynasty")
    return Dataset(graph, dict(sorted(persons.items())), evidence,
                   None if dynasty is None else str(dynasty), None)


def load_snapshot(path: str | Path) -> Dataset:
    path = Path(path)
    if not path.exists():
        raise SnapshotError(f"snapshot file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SnapshotError(f"cannot read snapshot {path}: {exc}") from exc
    return dataset_from_dict(payload)
