"""CLI surface: subcommands, formats, exit codes, pipelining."""

import io
import json
import sys

import numpy as np
import pytest

import speclap.scans as scans
from speclap.cli import main
from speclap.families import parse_family
from speclap.graph import from_graph6
from speclap.linalg import format_value
from speclap.nlspec import l_spectrum


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def feed(monkeypatch, text):
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))


# -- spectrum / construct -------------------------------------------------


def test_spectrum_family_token(capsys):
    code, out, _ = run(capsys, "spectrum", "K4")
    assert code == 0
    assert out.strip() == "1.333333333^3, " + format_value(
        l_spectrum(parse_family("K4")).values[-1]
    )


def test_spectrum_paper_precision(capsys):
    code, out, _ = run(capsys, "spectrum", "U2:1", "--paper-precision")
    assert code == 0
    assert out.strip() == "1.7287, 1.5000, 0.7713, 0.0000"


def test_spectrum_json_and_adjacency(capsys):
    code, out, _ = run(capsys, "spectrum", "C4", "--format", "json", "--adjacency")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 4
    assert data["l_spectrum"]["pairs"][0][0] == pytest.approx(2.0)
    assert data["adjacency_spectrum"]["pairs"][0][0] == pytest.approx(2.0)


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "K4", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "value,multiplicity"
    assert lines[1] == "1.333333333,3"


def test_spectrum_from_stdin_lines(capsys, monkeypatch):
    from speclap.graph import to_graph6
    from speclap.families import cycle, path

    feed(monkeypatch, to_graph6(cycle(4)) + "\n" + to_graph6(path(3)) + "\n")
    code, out, _ = run(capsys, "spectrum", "--paper-precision")
    assert code == 0
    assert out.strip().split("\n") == ["2.0000, 1.0000^2, 0.0000", "2.0000, 1.0000, 0.0000"]


def test_construct_graph6_default(capsys):
    code, out, _ = run(capsys, "construct", "C5")
    assert code == 0
    assert from_graph6(out.strip()) == parse_family("C5")


def test_construct_json(capsys):
    code, out, _ = run(capsys, "construct", "P3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 3 and sorted(map(tuple, data["edges"])) == [(0, 1), (1, 2)]


def test_construct_text(capsys):
    code, out, _ = run(capsys, "construct", "K3", "--format", "text")
    assert code == 0
    assert "n=3" in out and "(0,1)" in out


FAMILY_TOKENS = [
    "K2",
    "K5",
    "Kmulti:2,3",
    "Kmulti:2,2,2",
    "Kmulti:1,1,4",
    "C3",
    "C6",
    "P2",
    "P5",
    "U1",
    "U2:2",
    "U3:1,2",
    "U4:1,1,1",
    "U5:1",
    "U6:2,1",
    "U7",
    "U8:1",
    "U9:1,1",
    "U10",
    "U11:1",
    "U12:1,2",
    "U13",
    "U14",
    "thm41:1",
]


@pytest.mark.parametrize("token", FAMILY_TOKENS)
def test_construct_spectrum_round_trip(token, capsys, monkeypatch):
    """Piping construct into spectrum matches the in-process spectrum."""
    code, out, _ = run(capsys, "construct", token)
    assert code == 0
    feed(monkeypatch, out)
    code, piped, _ = run(capsys, "spectrum")
    assert code == 0
    direct = l_spectrum(parse_family(token))
    expected = ", ".join(
        format_value(v) if m == 1 else f"{format_value(v)}^{m}" for v, m in direct.pairs
    )
    assert piped.strip() == expected


def test_output_to_file(capsys, tmp_path):
    target = tmp_path / "out.g6"
    code, out, _ = run(capsys, "construct", "C4", "-o", str(target))
    assert code == 0 and out == ""
    assert from_graph6(target.read_text().strip()) == parse_family("C4")


# -- hadamard / design ----------------------------------------------------


def test_hadamard_sylvester_text(capsys):
    code, out, _ = run(capsys, "hadamard", "--method", "sylvester", "--order", "4")
    assert code == 0
    rows = out.strip().split("\n")
    assert rows[0] == "++++"
    assert len(rows) == 4 and all(len(r) == 4 for r in rows)


def test_hadamard_paley_json(capsys):
    code, out, _ = run(capsys, "hadamard", "--method", "paley1", "--q", "7", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["order"] == 8 and len(data["rows"]) == 8


def test_hadamard_check_round_trip(capsys, monkeypatch):
    code, out, _ = run(capsys, "hadamard", "--method", "paley2", "--q", "5")
    feed(monkeypatch, out)
    code, out, _ = run(capsys, "hadamard", "--check")
    assert code == 0
    assert json.loads(out) == {"hadamard": True, "order": 12, "normalized": False}


def test_hadamard_check_rejects_non_hadamard(capsys, monkeypatch):
    feed(monkeypatch, "++\n++\n")
    code, out, _ = run(capsys, "hadamard", "--check")
    assert code == 1
    assert json.loads(out)["hadamard"] is False


def test_hadamard_normalize_stdin(capsys, monkeypatch):
    code, out, _ = run(capsys, "hadamard", "--method", "paley1", "--q", "3")
    feed(monkeypatch, out)
    code, out, _ = run(capsys, "hadamard", "--normalize")
    assert code == 0
    rows = out.strip().split("\n")
    assert rows[0] == "++++" and all(r[0] == "+" for r in rows)


def test_hadamard_usage_errors(capsys):
    code, _, err = run(capsys, "hadamard", "--method", "sylvester")
    assert code == 2 and "order" in err
    code, _, err = run(capsys, "hadamard", "--method", "paley1", "--q", "8")
    assert code == 2
    code, _, err = run(capsys, "hadamard", "--method", "sylvester", "--order", "12")
    assert code == 2


def test_design_to_design_example(capsys, monkeypatch):
    code, out, _ = run(capsys, "hadamard", "--method", "paley1", "--q", "7")
    feed(monkeypatch, out)
    code, out, _ = run(capsys, "design", "--to-design")
    assert code == 0
    assert out.strip() == "2-(7, 3, 1) design, symmetric"


def test_design_json_complement_validate_pipeline(capsys, monkeypatch):
    code, h_out, _ = run(capsys, "hadamard", "--method", "sylvester", "--order", "8")
    feed(monkeypatch, h_out)
    code, d_out, _ = run(capsys, "design", "--to-design", "--format", "json")
    assert code == 0
    feed(monkeypatch, d_out)
    code, c_out, _ = run(capsys, "design", "--complement", "--format", "json")
    assert code == 0
    comp = json.loads(c_out)
    assert (comp["v"], comp["k"], comp["lambda"]) == (7, 4, 2)
    feed(monkeypatch, c_out)
    code, v_out, _ = run(capsys, "design", "--validate")
    assert code == 0
    report = json.loads(v_out)
    assert report["valid"] and report["symmetric"]


def test_design_incidence_graph_pipes_to_spectrum(capsys, monkeypatch):
    code, h_out, _ = run(capsys, "hadamard", "--method", "paley1", "--q", "7")
    feed(monkeypatch, h_out)
    code, d_out, _ = run(capsys, "design", "--to-design", "--format", "json")
    feed(monkeypatch, d_out)
    code, g_out, _ = run(capsys, "design", "--incidence-graph")
    assert code == 0
    g = from_graph6(g_out.strip())
    assert g.n == 14
    feed(monkeypatch, g_out)
    code, s_out, _ = run(capsys, "spectrum", "--adjacency", "--paper-precision")
    assert code == 0
    assert "3.0000" in s_out and "-3.0000" in s_out


def test_design_validate_bad_json(capsys, monkeypatch):
    feed(monkeypatch, '{"v": 2, "b": 1, "r": 1, "k": 1, "lambda": 0, "incidence": ["10", "01"]}')
    code, out, _ = run(capsys, "design", "--validate")
    assert code == 1
    assert json.loads(out)["valid"] is False


def test_design_requires_exactly_one_action(capsys, monkeypatch):
    feed(monkeypatch, "")
    code, _, err = run(capsys, "design")
    assert code == 2 and "exactly one" in err
    feed(monkeypatch, "")
    code, _, err = run(capsys, "design", "--to-design", "--validate")
    assert code == 2


# -- verify ----------------------------------------------------------------


def test_verify_thm41(capsys):
    code, out, _ = run(capsys, "verify", "thm41", "--t", "2")
    assert code == 0
    data = json.loads(out)
    assert data["input"] == "thm41:2"
    assert data["report"]["pass"] is True


def test_verify_thm41_requires_t(capsys):
    code, _, err = run(capsys, "verify", "thm41")
    assert code == 2 and "--t" in err
    code, _, err = run(capsys, "verify", "lemma22", "C4", "--t", "1")
    assert code == 2


def test_verify_each_suite_on_fitting_graph(capsys):
    fitting = {
        "lemma22": "C6",
        "eq1": "K4",
        "three-ev": "Kmulti:2,2,2",
        "four-ev": "P4",
        "lemma23": "Kmulti:2,3",
        "lemma24": "C5",
        "thm21": "Kmulti:3,3",
        "cor21": "Kmulti:2,3",
        "cor20": "C5",
    }
    for suite, token in fitting.items():
        code, out, _ = run(capsys, "verify", suite, token)
        assert code == 0, (suite, token)
        data = json.loads(out)
        assert data["report"]["pass"] is True, (suite, token)
        assert data["report"]["applicable"] is True, (suite, token)


def test_verify_inapplicable_is_success(capsys):
    code, out, _ = run(capsys, "verify", "lemma24", "P5")
    assert code == 0
    assert json.loads(out)["report"]["applicable"] is False


def test_verify_multiple_graphs_from_stdin(capsys, monkeypatch):
    from speclap.graph import to_graph6

    lines = "\n".join(to_graph6(parse_family(t)) for t in ["C4", "C6", "P5"])
    feed(monkeypatch, lines + "\n")
    code, out, _ = run(capsys, "verify", "lemma22")
    assert code == 0
    data = json.loads(out)
    assert isinstance(data, list) and len(data) == 3
    assert all(entry["report"]["pass"] for entry in data)


def test_verify_rejects_disconnected_for_eq1(capsys, monkeypatch):
    feed(monkeypatch, "A?\n")  # two isolated vertices
    code, _, err = run(capsys, "verify", "eq1")
    assert code == 2 and "connected" in err


def test_verify_unknown_suite_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "lemma99", "C4"])
    assert exc.value.code == 2
    capsys.readouterr()


# -- enumerate ---------------------------------------------------------------


def test_enumerate_connected_json(capsys):
    code, out, _ = run(capsys, "enumerate", "--scan", "connected", "--nmax", "4")
    assert code == 0
    data = json.loads(out)
    assert data["scan"] == "connected"
    assert data["counts"]["4"]["connected"] == 38
    assert len(data["hits"]) == 3  # P3; K_{1,3} and C4


def test_enumerate_unicyclic_csv(capsys):
    code, out, _ = run(
        capsys,
        "enumerate",
        "--scan",
        "unicyclic",
        "--param-max",
        "8",
        "--predicate",
        "distinct:3",
        "--format",
        "csv",
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,graph6,distinct_count,spectrum"
    assert len(lines) == 3  # C4 and C5


def test_enumerate_jobs_deterministic(capsys, monkeypatch):
    monkeypatch.setattr(scans, "_BLOCK", 1 << 6)
    code, serial, _ = run(capsys, "enumerate", "--scan", "connected", "--nmax", "5")
    code, parallel, _ = run(
        capsys, "enumerate", "--scan", "connected", "--nmax", "5", "--jobs", "2"
    )
    assert serial == parallel


def test_enumerate_bipartite_pendant_fixed_predicate(capsys):
    code, out, _ = run(capsys, "enumerate", "--scan", "bipartite-pendant", "--n", "4")
    assert code == 0
    assert len(json.loads(out)["hits"]) == 1
    code, _, err = run(
        capsys,
        "enumerate",
        "--scan",
        "bipartite-pendant",
        "--n",
        "4",
        "--predicate",
        "distinct:3",
    )
    assert code == 2 and "fixed predicate" in err


# -- tolerances and error mapping -------------------------------------------


def test_cluster_tol_flag_and_env(capsys, monkeypatch):
    # a coarse tolerance merges 0 with 0.691^2 on C5, leaving two clusters
    code, out, _ = run(capsys, "spectrum", "C5", "--tol", "0.75")
    assert code == 0
    assert len(out.strip().split(", ")) == 2
    monkeypatch.setenv("SPECLAP_TOL", "0.75")
    code, out2, _ = run(capsys, "spectrum", "C5")
    assert out2 == out
    # --tol wins over the environment
    monkeypatch.setenv("SPECLAP_TOL", "1e-6")
    code, out3, _ = run(capsys, "spectrum", "C5", "--tol", "0.75")
    assert out3 == out
    monkeypatch.setenv("SPECLAP_TOL", "-1")
    code, _, err = run(capsys, "spectrum", "C5")
    assert code == 2 and "SPECLAP_TOL" in err


def test_unreadable_token_is_usage_error(capsys):
    code, _, err = run(capsys, "spectrum", "ZZZ:9")
    assert code == 2 and "family name or graph6" in err


def test_missing_file_is_io_error(capsys):
    code, _, err = run(capsys, "spectrum", "--file", "/nonexistent/path.g6")
    assert code == 3


def test_empty_stdin_is_usage_error(capsys, monkeypatch):
    feed(monkeypatch, "")
    code, _, err = run(capsys, "spectrum")
    assert code == 2 and "no input" in err
