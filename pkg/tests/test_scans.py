"""Exhaustive scans: predicates, canonical forms, survivor sets, parallelism."""

import numpy as np
import pytest

import speclap.scans as scans
from speclap.families import (
    complete,
    complete_bipartite,
    complete_multipartite,
    cycle,
    path,
    pendant_join_family,
    unicyclic,
)
from speclap.graph import from_graph6, to_graph6
from speclap.linalg import cluster_spectrum
from speclap.nlspec import l_spectrum
from speclap.scans import (
    LABELED_CONNECTED_COUNTS,
    ScanHit,
    ScanReport,
    SpectrumPredicate,
    canonical_form,
    graph_from_mask,
    mask_from_graph,
    parse_predicate,
    scan_bipartite_pendant,
    scan_connected,
    scan_unicyclic,
)


def test_parse_predicate_forms():
    p = parse_predicate("distinct:3")
    assert p.kind == "distinct" and p.k == 3
    p = parse_predicate("distinct-with-one:4")
    assert p.kind == "distinct-with-value" and p.k == 4 and p.value == 1.0
    p = parse_predicate("second-least-one")
    assert p.kind == "second-distinct-value" and p.value == 1.0
    for bad in ["", "distinct", "distinct:0", "nope:3", "distinct-with-one:x"]:
        with pytest.raises(ValueError):
            parse_predicate(bad)


def test_predicate_matches_spectrum():
    p = parse_predicate("distinct-with-one:3")
    assert p.matches(l_spectrum(complete_bipartite(2, 2)))
    assert not p.matches(l_spectrum(complete(4)))  # 2 distinct, no 1
    assert not p.matches(l_spectrum(cycle(5)))  # 3 distinct, no 1
    sl = parse_predicate("second-least-one")
    assert sl.matches(l_spectrum(complete_multipartite([2, 2, 2])))
    assert not sl.matches(l_spectrum(path(4)))


def test_predicate_matches_batch_agrees():
    rng = np.random.default_rng(17)
    preds = [
        parse_predicate("distinct:3"),
        parse_predicate("distinct-with-one:3"),
        parse_predicate("second-least-one"),
    ]
    for _ in range(50):
        vals = np.sort(rng.uniform(0, 2, 6))
        spec = cluster_spectrum(vals)
        batch = np.asarray(vals)[None, :]
        for p in preds:
            assert p.matches_batch(batch, 1e-6)[0] == p.matches(spec), (p, vals)


def test_mask_round_trip():
    for g in [path(4), cycle(5), complete(4), complete_bipartite(2, 3)]:
        assert graph_from_mask(g.n, mask_from_graph(g)) == g
    # masks enumerate pairs in a fixed order: mask 1 is the edge (0, 1)
    g = graph_from_mask(3, 1)
    assert list(g.edges()) == [(0, 1)]


def test_canonical_form_is_isomorphism_invariant():
    rng = np.random.default_rng(19)
    g = unicyclic("U6", (1, 1))
    base = canonical_form(g)
    for _ in range(10):
        perm = rng.permutation(g.n)
        edges = [(int(perm[u]), int(perm[v])) for u, v in g.edges()]
        from speclap.graph import from_edge_list

        assert canonical_form(from_edge_list(g.n, edges)) == base
    # distinguishes non-isomorphic graphs with equal degree sums
    assert canonical_form(path(4)) != canonical_form(complete_bipartite(1, 3))


def test_canonical_form_order_limit():
    with pytest.raises(ValueError):
        canonical_form(complete(9))


def test_scan_connected_counts_match_oracle():
    report = scan_connected(6, parse_predicate("distinct-with-one:3"))
    for n in range(1, 7):
        assert report.counts[str(n)]["connected"] == LABELED_CONNECTED_COUNTS[n]
        assert report.counts[str(n)]["scanned"] == 2 ** (n * (n - 1) // 2)


def test_scan_connected_hits_are_the_expected_families():
    report = scan_connected(6, parse_predicate("distinct-with-one:3"))
    expected = set()
    for n in range(2, 7):
        for s in range(1, n // 2 + 1):
            if (s, n) != (1, 2):  # K_{1,1} = K2 has two distinct values
                expected.add((n, canonical_form(complete_bipartite(s, n - s))))
        for r in range(3, n):
            if n % r == 0:
                expected.add((n, canonical_form(complete_multipartite([n // r] * r))))
    assert report.hit_canonicals() == expected


def test_scan_hits_survive_graph6_round_trip():
    report = scan_connected(5, parse_predicate("distinct:3"))
    assert report.hits
    for hit in report.hits:
        g = from_graph6(hit.graph6)
        re_spec = l_spectrum(g, report.cluster_tol)
        assert re_spec.distinct_count == hit.distinct_count
        assert np.allclose(
            np.sort(re_spec.expand()), np.sort(hit.spectrum.expand()), atol=1e-9
        )


def test_scan_connected_parallel_equals_serial(monkeypatch):
    monkeypatch.setattr(scans, "_BLOCK", 1 << 6)
    pred = parse_predicate("distinct:4")
    serial = scan_connected(5, pred, jobs=1)
    parallel = scan_connected(5, pred, jobs=2)
    assert serial.to_json_dict() == parallel.to_json_dict()
    assert serial.to_csv() == parallel.to_csv()


def test_scan_connected_rejects_unguarded_n8():
    with pytest.raises(ValueError):
        scan_connected(8, parse_predicate("distinct:3"))
    with pytest.raises(ValueError):
        scan_connected(9, parse_predicate("distinct:3"), allow_n8=True)


def test_second_least_one_scan_matches_multipartite_catalog():
    report = scan_connected(5, parse_predicate("second-least-one"))
    expected = set()
    for n in range(2, 6):
        seen = set()
        import itertools

        for parts in itertools.chain.from_iterable(
            itertools.combinations_with_replacement(range(1, n), k) for k in range(2, n + 1)
        ):
            if sum(parts) != n or len(parts) < 2:
                continue
            if all(p == 1 for p in parts):
                continue  # complete graph is excluded
            g = complete_multipartite(list(parts))
            seen.add((n, canonical_form(g)))
        expected |= seen
    assert report.hit_canonicals() == expected


def test_scan_unicyclic_three_distinct():
    report = scan_unicyclic(8, parse_predicate("distinct:3"))
    labels = sorted(h.label for h in report.hits)
    assert labels == ["U10", "U7"]  # C5 and C4


def test_scan_unicyclic_four_distinct():
    report = scan_unicyclic(8, parse_predicate("distinct:4"))
    labels = sorted(h.label for h in report.hits)
    assert labels == ["U13", "U14", "U2:1", "U4:1,1,1"]


def test_scan_unicyclic_catalog_mode():
    report = scan_unicyclic(2)
    assert report.predicate == "all members"
    assert report.counts["members"] == len(report.hits)
    assert report.counts["by_n"]
    # every member keeps its constructing label and spectrum
    for hit in report.hits:
        assert hit.label
        g = from_graph6(hit.graph6)
        assert g.n == hit.n


def test_scan_bipartite_pendant_small_orders():
    # n=4: P4 is the only survivor; n=6: nothing survives
    rep4 = scan_bipartite_pendant(n=4)
    assert len(rep4.hits) == 1
    assert rep4.hits[0].canonical == canonical_form(path(4))
    rep6 = scan_bipartite_pendant(n=6)
    assert rep6.hits == ()


def test_scan_report_rejects_duplicate_canonicals():
    g = path(4)
    hit = ScanHit(
        n=4,
        canonical=canonical_form(g),
        graph6=to_graph6(g),
        spectrum=l_spectrum(g),
        distinct_count=4,
    )
    with pytest.raises(ValueError):
        ScanReport(
            scan="test",
            predicate="p",
            n_range=(4, 4),
            hits=(hit, hit),
            counts={},
            borderline=(),
            cluster_tol=1e-6,
        )


def test_scan_report_csv_shape():
    report = scan_connected(4, parse_predicate("distinct:3"))
    lines = report.to_csv().strip().split("\n")
    assert lines[0] == "n,graph6,distinct_count,spectrum"
    assert len(lines) == 1 + len(report.hits)
    for line in lines[1:]:
        n, g6, k, spec = line.split(",")
        assert from_graph6(g6).n == int(n)
        assert len(spec.split(" ")) == int(k)
