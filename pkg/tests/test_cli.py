import json

import pytest

import gdrw
from gdrw import cli


TRIANGLE = "0 1\n0 2\n1 0\n1 2\n2 0\n2 1\n"


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "triangle.txt"
    path.write_text(TRIANGLE)
    return path


def test_convert_round_trip(tmp_path, triangle_file, capsys):
    out = tmp_path / "triangle.bin"
    assert cli.main(["convert", str(triangle_file), "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "vertices: 3" in printed
    assert "edges: 6" in printed
    assert gdrw.read_binary(out) == gdrw.load_edge_list(str(triangle_file))


def test_convert_missing_file(tmp_path, capsys):
    rc = cli.main(["convert", str(tmp_path / "nope.txt"), "--out", str(tmp_path / "x.bin")])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_convert_undirected_doubles_edges(tmp_path, capsys):
    src = tmp_path / "pair.txt"
    src.write_text("0 1\n")
    out = tmp_path / "pair.bin"
    assert cli.main(["convert", str(src), "--out", str(out), "--undirected"]) == 0
    assert "edges: 2" in capsys.readouterr().out


def test_rmat_command(tmp_path, capsys):
    out = tmp_path / "rmat.txt"
    assert cli.main(["rmat", "--scale", "6", "--edge-factor", "4",
                     "--seed", "1", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 4 * 64
    out2 = tmp_path / "rmat2.txt"
    cli.main(["rmat", "--scale", "6", "--edge-factor", "4", "--seed", "1",
              "--out", str(out2)])
    assert out.read_bytes() == out2.read_bytes()


def test_rmat_binary_output(tmp_path, capsys):
    out = tmp_path / "rmat.bin"
    assert cli.main(["rmat", "--scale", "5", "--edge-factor", "4", "--out", str(out),
                     "--format", "binary"]) == 0
    g = gdrw.read_binary(out)
    assert g.num_vertices == 32


def test_walk_defaults_metapath(tmp_path, triangle_file, capsys):
    out = tmp_path / "walks.txt"
    rc = cli.main(["walk", "--graph", str(triangle_file), "--app", "metapath",
                   "--out", str(out)])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["queries"] == 3
    assert summary["length"] == 5
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    for line in lines:
        qid, _, rest = line.partition(":")
        assert len(rest.split()) <= 6


def test_walk_query_count_flag(tmp_path, triangle_file, capsys):
    out = tmp_path / "walks.txt"
    rc = cli.main(["walk", "--graph", str(triangle_file), "--app", "metapath",
                   "--queries", "2", "--out", str(out)])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["queries"] == 2
    rc = cli.main(["walk", "--graph", str(triangle_file), "--app", "metapath",
                   "--queries", "9", "--out", str(out)])
    assert rc == 1  # only 3 vertices have outgoing edges


def test_walk_same_seed_is_byte_identical(tmp_path, triangle_file, capsys):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    for out in (a, b):
        assert cli.main(["walk", "--graph", str(triangle_file), "--app", "metapath",
                         "--seed", "7", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_walk_node2vec_length_default(tmp_path, triangle_file, capsys):
    out = tmp_path / "n2v.txt"
    rc = cli.main(["walk", "--graph", str(triangle_file), "--app", "node2vec",
                   "--p", "2", "--q", "0.5", "--out", str(out)])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["length"] == 80


def test_walk_bad_app_params(tmp_path, triangle_file, capsys):
    out = tmp_path / "x.txt"
    rc = cli.main(["walk", "--graph", str(triangle_file), "--app", "node2vec",
                   "--p", "0", "--out", str(out)])
    assert rc == 1
    rc = cli.main(["walk", "--graph", str(triangle_file), "--app", "metapath",
                   "--relations", "a,b", "--out", str(out)])
    assert rc == 1


def test_usage_error_exits_one(capsys):
    assert cli.main(["walk"]) == 1  # missing required flags
    assert cli.main(["frobnicate"]) == 1


def test_internal_error_exits_two(tmp_path, triangle_file, capsys, monkeypatch):
    from gdrw import walkers

    def boom(*args, **kwargs):
        raise RuntimeError("injected")

    monkeypatch.setattr(walkers, "run_batch", boom)
    rc = cli.main(["walk", "--graph", str(triangle_file), "--app", "metapath",
                   "--out", str(tmp_path / "x.txt")])
    assert rc == 2
    assert "internal error" in capsys.readouterr().err


def test_walk_binary_format_round_trips(tmp_path, triangle_file, capsys):
    out = tmp_path / "walks.bin"
    assert cli.main(["walk", "--graph", str(triangle_file), "--app", "metapath",
                     "--format", "binary", "--out", str(out)]) == 0
    from gdrw import results_io
    results = results_io.read_results_binary(out, target_length=5)
    assert len(results) == 3


def test_walk_then_simulate_pipeline(tmp_path, capsys):
    graph_file = tmp_path / "g.bin"
    assert cli.main(["rmat", "--scale", "8", "--edge-factor", "8",
                     "--out", str(graph_file), "--format", "binary"]) == 0
    capsys.readouterr()
    walks = tmp_path / "walks.txt"
    assert cli.main(["walk", "--graph", str(graph_file), "--app", "metapath",
                     "--random-labels", "4", "--random-weights", "1", "64",
                     "--out", str(walks)]) == 0
    capsys.readouterr()
    rc = cli.main(["simulate", "--graph", str(graph_file), "--results", str(walks),
                   "--random-labels", "4", "--random-weights", "1", "64",
                   "--cache-lines", "64"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    for key in ("dac_miss_ratio", "dmc_miss_ratio", "valid_data_ratio",
                "n_long", "n_short", "bytes_loaded", "bytes_valid", "accesses"):
        assert key in report
    assert report["accesses"] > 0


def test_simulate_mismatched_results(tmp_path, triangle_file, capsys):
    walks = tmp_path / "walks.txt"
    walks.write_text("0: 0 1 2 9\n")
    rc = cli.main(["simulate", "--graph", str(triangle_file),
                   "--results", str(walks)])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_validate_quick(capsys):
    rc = cli.main(["validate", "--vectors", "6", "--trials", "8000"])
    out = capsys.readouterr().out
    assert rc == 0, out
    assert "[PASS]" in out
    assert "negative control" in out
