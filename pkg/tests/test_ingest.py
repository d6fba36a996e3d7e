import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from campnet.graph import Sign
from campnet.ingest import (
    DynastySpan,
    IngestError,
    PersonRecord,
    RelationRecord,
    SignRule,
    SnapshotError,
    aggregate_sign,
    assign_dynasty,
    build_dataset,
    build_graph,
    dataset_from_dict,
    dataset_to_dict,
    default_dynasties,
    load_snapshot,
    parse_corpus,
    parse_persons,
    parse_relations,
    parse_sign_rules,
    save_snapshot,
)

SPANS = [
    DynastySpan("Tang", 618, 907),
    DynastySpan("Song", 960, 1279),
    DynastySpan("Yuan", 1271, 1368),
    DynastySpan("Ming", 1368, 1644),
    DynastySpan("Qing", 1636, 1912),
]


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


PERSONS = (
    "person_id\tname_cn\tname_en\tdynasty\tbirth_year\tdeath_year\n"
    "1762\t王安石\tWang Anshi\tSong\t1021\t1086\n"
    "1384\t欧阳修\tOuyang Xiu\t\t1007\t1072\n"
    "3767\t苏轼\tSu Shi\t\t1037\t1101\n"
)

RELATIONS = (
    "from_id\tto_id\trel_code\trel_name\tcount\n"
    "1762\t1384\tEPITAPH_FOR\tMake epitaph for Y\t2\n"
    "1384\t1762\tIMPEACH\timpeach\t1\n"
    "3767\t3767\tMAIL_TO\tmail to Y\t1\n"
    "3767\t1384\tPREFACE_FOR\tPreface to Y's book\t1\n"
)

RULES = (
    "rel_code\tsign\n"
    "EPITAPH_FOR\t+\n"
    "IMPEACH\t-\n"
    "PREFACE_FOR\t+\n"
    "MAIL_TO\t0\n"
)


@pytest.fixture
def corpus(tmp_path):
    return (
        write(tmp_path, "persons.tsv", PERSONS),
        write(tmp_path, "relations.tsv", RELATIONS),
        write(tmp_path, "rules.tsv", RULES),
    )


# -- parsing -------------------------------------------------------------------


def test_parse_corpus_happy_path(corpus):
    persons, relations, rules, summaries = parse_corpus(*corpus)
    assert [p.person_id for p in persons] == [1762, 1384, 3767]
    assert persons[1].dynasty_label is None  # empty string means absent
    assert len(relations) == 3  # self-relation dropped
    assert {r.rel_code for r in rules} == {"EPITAPH_FOR", "IMPEACH", "PREFACE_FOR", "MAIL_TO"}


def test_parse_empty_relations_file(tmp_path):
    p = write(tmp_path, "r.tsv", "from_id\tto_id\trel_code\trel_name\tcount\n")
    records, summary = parse_relations(p)
    assert records == [] and summary.rows_read == 0


def test_parse_rule_row_carries_code(corpus):
    _, relations, rules, _ = parse_corpus(*corpus)
    impeach = [r for r in relations if r.rel_code == "IMPEACH"]
    assert len(impeach) == 1
    rule = {r.rel_code: r.sign for r in rules}["IMPEACH"]
    assert rule is Sign.NEGATIVE


def test_self_relation_dropped_with_warning(corpus):
    _, relations, _, summaries = parse_corpus(*corpus)
    rel_summary = summaries[1]
    assert rel_summary.self_loops_dropped == 1
    assert all(r.from_id != r.to_id for r in relations)
    assert any("self-relation" in w for w in rel_summary.warnings)


def test_missing_file_is_fatal(tmp_path):
    with pytest.raises(IngestError, match="not found"):
        parse_persons(tmp_path / "nope.tsv")


def test_header_mismatch_is_fatal(tmp_path):
    p = write(tmp_path, "p.tsv", "id\tname\n1\tx\n")
    with pytest.raises(IngestError, match="header mismatch"):
        parse_persons(p)


def test_duplicate_person_id_is_fatal(tmp_path):
    p = write(tmp_path, "p.tsv",
              "person_id\tname_cn\tname_en\tdynasty\tbirth_year\tdeath_year\n"
              "1\ta\tA\t\t\t\n1\tb\tB\t\t\t\n")
    with pytest.raises(IngestError, match="duplicate person_id"):
        parse_persons(p)


def test_duplicate_rule_code_is_fatal(tmp_path):
    p = write(tmp_path, "s.tsv", "rel_code\tsign\nX\t+\nX\t-\n")
    with pytest.raises(IngestError, match="duplicate rel_code"):
        parse_sign_rules(p)


def test_malformed_rows_reported_with_line_numbers(tmp_path):
    p = write(tmp_path, "p.tsv",
              "person_id\tname_cn\tname_en\tdynasty\tbirth_year\tdeath_year\n"
              "1\ta\tA\t\t\t\n"
              "bad\tb\tB\t\t\t\n"
              "3\tc\tC\t\t1200\t1100\n")
    persons, summary = parse_persons(p)
    assert [p.person_id for p in persons] == [1]
    assert summary.rows_dropped == 2
    assert any(w.startswith(f"{p}:3:") for w in summary.warnings)
    assert any(f"{p}:4:" in w for w in summary.warnings)


# -- dynasty assignment -----------------------------------------------------------


def test_dynasty_label_wins():
    p = PersonRecord(1, "x", "X", "Song", None, None)
    assert assign_dynasty(p, SPANS) == "Song"


def test_dynasty_label_beats_conflicting_years():
    # label says Tang even though the years say Song
    p = PersonRecord(1, "x", "X", "Tang", 1021, 1086)
    assert assign_dynasty(p, SPANS) == "Tang"


def test_dynasty_by_birth_year():
    p = PersonRecord(1, "王安石", "Wang Anshi", None, 1021, 1086)
    assert assign_dynasty(p, SPANS) == "Song"


def test_dynasty_by_death_year():
    p = PersonRecord(1, "x", "X", None, None, 1700)
    assert assign_dynasty(p, SPANS) == "Qing"


def test_dynasty_absent_when_no_rule_applies():
    assert assign_dynasty(PersonRecord(1, "x", "X", None, None, None), SPANS) is None
    assert assign_dynasty(PersonRecord(1, "x", "X", "Northern Wei", 400, 450), SPANS) is None


def test_dynasty_overlap_first_span_wins():
    # 1368 belongs to both Yuan and Ming; table order decides
    p = PersonRecord(1, "x", "X", None, 1368, None)
    assert assign_dynasty(p, SPANS) == "Yuan"


def test_default_dynasties_shipped():
    spans = default_dynasties()
    assert [s.name for s in spans] == ["Tang", "Song", "Yuan", "Ming", "Qing"]
    assert spans[1] == DynastySpan("Song", 960, 1279)


# -- aggregation ---------------------------------------------------------------


def persons_for(ids):
    return [PersonRecord(i, f"cn{i}", f"en{i}", None, 1000, 1050) for i in ids]


def test_aggregate_sign_rule():
    assert aggregate_sign(3, 1) is Sign.POSITIVE
    assert aggregate_sign(1, 3) is Sign.NEGATIVE
    assert aggregate_sign(2, 2) is Sign.NEUTRAL
    assert aggregate_sign(0, 0) is Sign.NEUTRAL


def test_build_single_positive_record():
    rules = [SignRule("EPITAPH_FOR", Sign.POSITIVE)]
    relations = [RelationRecord(1, 2, "EPITAPH_FOR", "Make epitaph for Y", 1)]
    g = build_graph(persons_for([1, 2]), relations, rules)
    (e,) = g.edges()
    assert e.sign is Sign.POSITIVE and e.weight == 1


def test_build_tie_is_neutral():
    rules = [SignRule("P", Sign.POSITIVE), SignRule("N", Sign.NEGATIVE)]
    relations = [RelationRecord(1, 2, "P", "p", 2), RelationRecord(2, 1, "N", "n", 2)]
    g = build_graph(persons_for([1, 2]), relations, rules)
    (e,) = g.edges()
    assert e.sign is Sign.NEUTRAL and e.weight == 4


def test_build_majority_negative():
    rules = [SignRule("P", Sign.POSITIVE), SignRule("N", Sign.NEGATIVE)]
    relations = [RelationRecord(1, 2, "P", "p", 1), RelationRecord(1, 2, "N", "n", 3)]
    g = build_graph(persons_for([1, 2]), relations, rules)
    (e,) = g.edges()
    assert e.sign is Sign.NEGATIVE and e.weight == 4
    assert (e.pos_count, e.neg_count, e.neu_count) == (1, 3, 0)


def test_directed_kinds_collapse_to_one_edge():
    rules = [SignRule("EPITAPH_FOR", Sign.POSITIVE), SignRule("EPITAPH_BY", Sign.POSITIVE)]
    relations = [
        RelationRecord(1, 2, "EPITAPH_FOR", "Make epitaph for Y", 1),
        RelationRecord(2, 1, "EPITAPH_BY", "Epitaph made by Y", 1),
    ]
    g = build_graph(persons_for([1, 2]), relations, rules)
    assert g.edge_count() == 1
    (e,) = g.edges()
    assert e.weight == 2


def test_unmapped_code_is_neutral_with_warning():
    ds = build_dataset(persons_for([1, 2]), [RelationRecord(1, 2, "MYSTERY", "m", 1)], [])
    (e,) = ds.graph.edges()
    assert e.sign is Sign.NEUTRAL
    assert ds.build.unmapped_codes == ["MYSTERY"]


def test_missing_endpoint_dropped_not_fatal():
    rules = [SignRule("P", Sign.POSITIVE)]
    relations = [RelationRecord(1, 99, "P", "p", 1), RelationRecord(1, 2, "P", "p", 1)]
    ds = build_dataset(persons_for([1, 2]), relations, rules)
    assert ds.graph.edge_count() == 1
    assert ds.build.missing_endpoint_dropped == 1


def test_isolated_persons_kept_as_nodes():
    ds = build_dataset(persons_for([1, 2, 3]), [], [])
    assert ds.graph.node_count() == 3
    assert ds.graph.edge_count() == 0


def test_dynasty_filter_drops_foreign_relations():
    persons = [
        PersonRecord(1, "a", "A", "Song", None, None),
        PersonRecord(2, "b", "B", "Song", None, None),
        PersonRecord(3, "c", "C", "Tang", None, None),
    ]
    rules = [SignRule("P", Sign.POSITIVE)]
    relations = [RelationRecord(1, 2, "P", "p", 1), RelationRecord(1, 3, "P", "p", 1)]
    ds = build_dataset(persons, relations, rules, dynasty="Song", spans=SPANS)
    assert set(ds.graph.nodes) == {1, 2}
    assert ds.graph.edge_count() == 1


def test_exclude_ids():
    rules = [SignRule("P", Sign.POSITIVE)]
    relations = [RelationRecord(1, 9999, "P", "p", 1), RelationRecord(1, 2, "P", "p", 1)]
    ds = build_dataset(persons_for([1, 2, 9999]), relations, rules, exclude_ids=[9999])
    assert 9999 not in ds.graph
    assert ds.graph.edge_count() == 1


@given(st.integers(0, 100_000))
def test_aggregation_conserves_record_counts(seed):
    import random as _random

    rng = _random.Random(seed)
    ids = list(range(1, rng.randint(3, 9)))
    rules = [SignRule("P", Sign.POSITIVE), SignRule("N", Sign.NEGATIVE), SignRule("U", Sign.NEUTRAL)]
    relations = []
    for _ in range(rng.randint(0, 20)):
        u, v = rng.sample(ids, 2)
        relations.append(RelationRecord(u, v, rng.choice("PNU"), "r", rng.randint(1, 4)))
    ds = build_dataset(persons_for(ids), relations, rules)
    assert sum(e.weight for e in ds.graph.edges()) == sum(r.count for r in relations)
    assert all(e.weight > 0 for e in ds.graph.edges())


# -- snapshot round-trip -----------------------------------------------------------


def test_snapshot_roundtrip(tmp_path, corpus):
    persons, relations, rules, _ = parse_corpus(*corpus)
    ds = build_dataset(persons, relations, rules, dynasty="Song", spans=SPANS)
    path = tmp_path / "snap.json"
    save_snapshot(ds, path)
    loaded = load_snapshot(path)
    assert loaded.graph == ds.graph
    assert loaded.persons == ds.persons
    assert loaded.evidence == ds.evidence
    assert loaded.dynasty == "Song"


def test_snapshot_deterministic_bytes(tmp_path, corpus):
    persons, relations, rules, _ = parse_corpus(*corpus)
    ds = build_dataset(persons, relations, rules)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_snapshot(ds, p1)
    save_snapshot(ds, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_snapshot_rejects_bad_format(tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"format": "other", "version": 1}), encoding="utf-8")
    with pytest.raises(SnapshotError, match="format"):
        load_snapshot(p)
    with pytest.raises(SnapshotError, match="not found"):
        load_snapshot(tmp_path / "missing.json")
    p.write_text("{not json", encoding="utf-8")
    with pytest.raises(SnapshotError):
        load_snapshot(p)


def test_dataset_restrict_filters_everything(corpus):
    persons, relations, rules, _ = parse_corpus(*corpus)
    ds = build_dataset(persons, relations, rules)
    sub = ds.restrict([1762, 1384])
    assert set(sub.graph.nodes) == {1762, 1384}
    assert set(sub.persons) == {1762, 1384}
    assert all(k[0] in {1762, 1384} and k[1] in {1762, 1384} for k in sub.evidence)
    assert sub.pair_evidence(1762, 1384) == ds.pair_evidence(1384, 1762)
