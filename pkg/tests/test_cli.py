"""Test the command line harness."""
import json

import pytest

from netcoherence.cli import build_parser, main
from netcoherence.graph import read_edge_list, to_edge_list

from .conftest import fixture_path, karate_graph

MINIMAL_ARGS = {
    "generate": ["generate", "--family", "path", "--n", "4"],
    "analyze": ["analyze", "g.txt"],
    "sweep": ["sweep", "--family", "path", "--sizes", "4"],
    "closed-form": ["closed-form", "--family", "clique4", "--g-max", "1"],
    "simulate": ["simulate", "g.txt"],
    "validate": ["validate", "g.txt"],
}


@pytest.fixture
def karate_file(tmp_path):
    """Karate club edge list on disk."""
    path = tmp_path / "karate.txt"
    path.write_text(to_edge_list(karate_graph(), ["Zachary karate club"]), encoding="utf-8")
    return str(path)


def test_generate_writes_edge_list_and_manifest(tmp_path):
    """Test the edge list header and the manifest sidecar."""
    out = tmp_path / "ba.txt"
    argv = ["generate", "--family", "ba", "--n", "60", "--m", "2", "--seed", "3", "--out", str(out)]
    assert main(argv) == 0
    graph, header = read_edge_list(str(out))
    assert (graph.n, graph.m) == (60, 28 + 2 * 52)
    assert header[0] == "family: ba"
    assert "seed: 3" in header
    assert "manifest: ba.txt.manifest.json" in header

    manifest = json.loads((tmp_path / "ba.txt.manifest.json").read_text(encoding="utf-8"))
    assert manifest["command"][:2] == ["netcoherence", "generate"]
    assert manifest["seeds"] == [3]
    assert manifest["metadata"]["seed_graph"] == "K_8"


def test_generate_is_byte_identical(tmp_path):
    """Test repeated runs with the same seed write the same bytes."""
    outputs = []
    for name in ("a.txt", "b.txt"):
        out = tmp_path / name
        argv = ["generate", "--family", "hdran", "--d", "3", "--n", "40", "--seed", "8", "--out", str(out)]
        assert main(argv) == 0
        outputs.append(out.read_text(encoding="utf-8").replace(name, "OUT"))
    assert outputs[0] == outputs[1]


def test_generate_to_stdout(capsys):
    """Test '-' writes to stdout and skips the manifest."""
    assert main(["generate", "--family", "pseudofractal", "--g", "1"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("# family: pseudofractal\n# params: g=1\n")
    assert "# manifest: none" in text
    assert text.rstrip().endswith("2 5")


def test_generate_usage_errors(capsys):
    """Test missing parameters and unknown families exit with 1."""
    assert main(["generate", "--family", "ba", "--n", "60"]) == 1
    assert main(["generate", "--family", "lollipop", "--n", "6"]) == 1
    assert main(["generate", "--family", "ring_lattice", "--n", "6", "--k", "3"]) == 1
    assert main([]) == 1
    assert "netcoherence" in capsys.readouterr().err


def test_generate_capacity_error():
    """Test oversized deterministic families exit with 2."""
    assert main(["generate", "--family", "clique4", "--g", "12"]) == 2


def test_analyze_json(tmp_path):
    """Test the report of K_4."""
    out = tmp_path / "k4.json"
    assert main(["analyze", fixture_path("k4.txt"), "--out", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["n"] == 4
    assert data["h_fo"] == pytest.approx(0.09375)
    assert data["lower_exact"] == pytest.approx(0.09375)
    assert data["upper"] == pytest.approx(0.1875)
    assert data["manifest"] == "k4.json.manifest.json"


def test_analyze_keeps_largest_component(tmp_path):
    """Test dropped vertices are listed in the manifest."""
    out = tmp_path / "tt.csv"
    argv = ["analyze", fixture_path("two_triangles.txt"), "--format", "csv", "--out", str(out)]
    assert main(argv) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# manifest: tt.csv.manifest.json"
    assert lines[1].startswith("n,m,rho,mu,h_fo")
    assert lines[2].startswith("3,3,2,1,")
    manifest = json.loads((tmp_path / "tt.csv.manifest.json").read_text(encoding="utf-8"))
    assert manifest["metadata"]["dropped_labels"] == [20, 21]
    assert manifest["metadata"]["input_n"] == 5


def test_analyze_karate(karate_file, capsys):
    """Test the karate row on stdout."""
    assert main(["analyze", karate_file]) == 0
    data = json.loads(capsys.readouterr().out)
    assert (data["n"], data["m"]) == (34, 78)
    assert data["h_fo"] == pytest.approx(0.203, rel=0.02)


def test_analyze_data_errors(tmp_path):
    """Test malformed, empty and missing inputs exit with 2."""
    assert main(["analyze", fixture_path("malformed.txt")]) == 2
    empty = tmp_path / "empty.txt"
    empty.write_text("% nothing\n", encoding="utf-8")
    assert main(["analyze", str(empty)]) == 2
    assert main(["analyze", str(tmp_path / "missing.txt")]) == 2


def test_analyze_invalid_utf8(tmp_path):
    """Test undecodable input exits with 2."""
    bad = tmp_path / "bad.txt"
    bad.write_bytes(b"0 1\n1 \xff2\n")
    assert main(["analyze", str(bad)]) == 2


def test_analyze_label_out_of_range(tmp_path):
    """Test a label beyond 64 bits exits with 2."""
    big = tmp_path / "big.txt"
    big.write_text("0 1\n1 99999999999999999999\n", encoding="utf-8")
    assert main(["analyze", str(big)]) == 2


def test_closed_form_csv(capsys):
    """Test the closed form table of the 4-clique family."""
    assert main(["closed-form", "--family", "clique4", "--g-max", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "# manifest: none"
    assert lines[1] == "g,n,m,r,r_mul,r_add,h_fo,limit,gap"
    assert lines[2].startswith("0,4,6,3,27,18,0.09375,")
    assert lines[3].startswith("1,16,36,78,1242,630,")
    assert len(lines) == 5


def test_closed_form_json(capsys):
    """Test exact values travel as fractions."""
    assert main(["closed-form", "--family", "pseudofractal", "--g-max", "1", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["rows"][0]["h_fo_exact"] == "1/9"
    assert data["rows"][0]["r_mul"] is None
    assert data["rows"][1]["n"] == 6


def test_closed_form_rejects_random_family():
    """Test closed forms only exist for iterated families."""
    assert main(["closed-form", "--family", "ba", "--g-max", "2"]) == 1


def test_sweep(tmp_path):
    """Test the long format sweep table."""
    out = tmp_path / "sweep.csv"
    argv = ["sweep", "--family", "ba", "--param", "2", "--sizes", "20,30", "--replicas", "2", "--seed", "1", "--out", str(out)]
    assert main(argv) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[1] == "family,param,n,m,replica,seed,h_fo"
    assert len(lines) == 2 + 4
    assert all(line.startswith("ba,2,") for line in lines[2:])
    again = tmp_path / "again.csv"
    argv[-1] = str(again)
    assert main(argv) == 0
    assert again.read_text(encoding="utf-8").splitlines()[1:] == lines[1:]


def test_sweep_bad_sizes():
    """Test a malformed grid exits with 1."""
    assert main(["sweep", "--family", "path", "--sizes", "4,x"]) == 1


def test_simulate(capsys):
    """Test the simulated estimate lands near the exact value."""
    argv = ["simulate", fixture_path("k4.txt"), "--sample-steps", "4000", "--replicas", "2", "--seed", "4"]
    assert main(argv) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["reference"] == pytest.approx(0.09375)
    assert data["h_fo_hat"] == pytest.approx(0.09375, rel=0.1)
    assert data["config"]["scheme"] == "exact_gaussian"


def test_simulate_single_sample_is_valid_json(capsys):
    """Test an undefined standard error is written as null."""
    argv = ["simulate", fixture_path("k4.txt"), "--sample-steps", "1", "--replicas", "1"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "NaN" not in out
    assert json.loads(out)["std_error"] is None


def test_simulate_unstable_dt():
    """Test an Euler step above the stability limit exits with 1."""
    argv = ["simulate", fixture_path("k4.txt"), "--scheme", "euler_maruyama", "--dt", "1.0"]
    assert main(argv) == 1


def test_simulate_disconnected():
    """Test a disconnected input exits with 2."""
    assert main(["simulate", fixture_path("two_triangles.txt")]) == 2


def test_validate_karate(karate_file, capsys):
    """Test all diagnostics pass on a real network."""
    assert main(["validate", karate_file, "--pairs", "20"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] is True
    assert data["zero_eigenvalues"] == 1
    assert data["sum_rule_pairs"] == 20
    assert data["is_tree"] is False


def test_validate_star_equality(capsys):
    """Test trees report upper bound equality."""
    assert main(["validate", fixture_path("star.txt")]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["is_tree"] is True
    assert data["upper_equality"] is True
    assert data["lower_equality"] is False


def test_validate_disconnected():
    """Test a disconnected input exits with 2."""
    assert main(["validate", fixture_path("two_triangles.txt")]) == 2


def test_parser_commands():
    """Test every subcommand is registered."""
    parser = build_parser()
    for command in MINIMAL_ARGS:
        assert parser.parse_args(MINIMAL_ARGS[command]).command == command

