import io

import numpy as np
import pytest

import gdrw
from gdrw.errors import ConfigError, FormatError, ParseError
from gdrw.fixedpoint import ONE

from conftest import random_graph


def test_two_line_identity():
    g = gdrw.load_edge_list(io.StringIO("0 1\n1 0\n"))
    assert g.num_vertices == 2
    assert g.num_edges == 2
    assert g.degrees.tolist() == [1, 1]


def test_weight_fixed_point_encoding():
    g = gdrw.load_edge_list(io.StringIO("0 1 4.0\n"))
    assert g.edge_weight.tolist() == [4 * 2**16]


def test_triangle_row_index():
    # hand CSR construction: 3-cycle both directions
    g = gdrw.load_edge_list(io.StringIO("0 1\n0 2\n1 0\n1 2\n2 0\n2 1\n"))
    assert g.row_index.tolist() == [0, 2, 4, 6]
    assert g.col_index.tolist() == [1, 2, 0, 2, 0, 1]


def test_undirected_expansion_doubles_edges():
    g = gdrw.load_edge_list(io.StringIO("0 1 2.5\n1 2\n"), directed=False)
    assert g.num_edges == 4
    assert gdrw.has_edge(g, 1, 0) and gdrw.has_edge(g, 0, 1)
    assert gdrw.has_edge(g, 2, 1) and gdrw.has_edge(g, 1, 2)
    # both directions carry the line's weight; (1,0) sorts first in 1's range
    assert g.edge_weight[0] == g.edge_weight[1] == int(2.5 * ONE)


def test_undirected_conflicting_lines_stay_symmetric():
    # (0,1) and (1,0) lines with different weights: keep-last must resolve
    # both directions to the same (later) line, keeping weights symmetric
    g = gdrw.load_edge_list(io.StringIO("0 1 3.0\n1 0 9.0\n"), directed=False)
    assert g.num_edges == 2
    assert g.edge_weight.tolist() == [9 * ONE, 9 * ONE]


def test_comments_and_blank_lines():
    g = gdrw.load_edge_list(io.StringIO("# header\n\n0 1\n   \n# tail\n1 0\n"))
    assert g.num_edges == 2


def test_malformed_line_reports_number():
    with pytest.raises(ParseError, match="line 3"):
        gdrw.load_edge_list(io.StringIO("0 1\n1 0\nnot an edge\n"))
    with pytest.raises(ParseError, match="line 1"):
        gdrw.load_edge_list(io.StringIO("0\n"))
    with pytest.raises(ParseError, match="line 2"):
        gdrw.load_edge_list(io.StringIO("0 1\n0 1 -3.0\n"))


def test_vertex_id_overflow_rejected():
    with pytest.raises(ParseError, match="32-bit"):
        gdrw.load_edge_list(io.StringIO(f"0 {1 << 32}\n"))


def test_duplicate_edges_keep_last():
    g = gdrw.load_edge_list(io.StringIO("0 1 1.0\n0 1 9.0\n"))
    assert g.num_edges == 1
    assert g.edge_weight.tolist() == [9 * ONE]


def test_relation_column():
    g = gdrw.load_edge_list(io.StringIO("0 1 1.0 3\n1 0 1.0 5\n"))
    assert g.edge_relation.tolist() == [3, 5]
    with pytest.raises(ParseError, match="relation"):
        gdrw.load_edge_list(io.StringIO("0 1 1.0 70000\n"))


def test_relations_default_to_destination_label():
    labels = np.array([2, 5, 7], dtype=np.uint16)
    g = gdrw.from_edges([0, 1, 2], [1, 2, 0], labels=labels)
    assert g.edge_relation.tolist() == [5, 7, 2]


def test_neighbors_info():
    g = gdrw.load_edge_list(io.StringIO("0 1\n0 2\n1 0\n1 2\n2 0\n2 1\n"))
    assert gdrw.neighbors_info(g, 1) == (2, 2)
    assert gdrw.neighbors_info(g, 0)[0] == 0
    with pytest.raises(IndexError):
        gdrw.neighbors_info(g, 3)


def test_isolated_vertex_has_zero_degree():
    g = gdrw.from_edges([0], [1], num_vertices=4)
    assert gdrw.neighbors_info(g, 2) == (1, 0)
    assert gdrw.neighbors_info(g, 3) == (1, 0)


def test_has_edge_triangle():
    g = gdrw.load_edge_list(io.StringIO("0 1\n0 2\n1 0\n1 2\n2 0\n2 1\n"))
    assert gdrw.has_edge(g, 0, 1)
    g2 = gdrw.load_edge_list(io.StringIO("0 1\n1 0\n1 2\n2 0\n2 1\n"))  # (0,2) removed
    assert not gdrw.has_edge(g2, 0, 2)


def test_has_edge_agrees_with_linear_scan_exhaustively():
    g = random_graph(3, 40, 1000)
    neighbor_sets = [set(g.col_index[g.row_index[v]:g.row_index[v + 1]].tolist())
                     for v in range(g.num_vertices)]
    for u in range(g.num_vertices):
        for v in range(g.num_vertices):
            assert gdrw.has_edge(g, u, v) == (v in neighbor_sets[u])


def test_csr_invariants_after_every_constructor():
    for seed in range(5):
        random_graph(seed, 30, 200).validate()
        random_graph(seed, 30, 200, directed=False).validate()
    edges = gdrw.rmat_generate(8, 4, seed=1)
    gdrw.from_edges(edges[:, 0], edges[:, 1], num_vertices=256).validate()


def test_binary_round_trip(tmp_path):
    for seed in range(3):
        g = random_graph(seed, 25, 120)
        g = gdrw.with_random_labels(g, seed)
        path = tmp_path / f"g{seed}.bin"
        gdrw.write_binary(g, path)
        assert gdrw.read_binary(path) == g


def test_binary_round_trip_empty_graph(tmp_path):
    g = gdrw.from_edges([], [])
    path = tmp_path / "empty.bin"
    gdrw.write_binary(g, path)
    g2 = gdrw.read_binary(path)
    assert g2.num_vertices == 0 and g2.num_edges == 0


def test_binary_bad_magic(tmp_path):
    path = tmp_path / "bad.bin"
    gdrw.write_binary(random_graph(0, 10, 30), path)
    blob = bytearray(path.read_bytes())
    blob[:4] = b"WHAT"
    with pytest.raises(FormatError, match="magic"):
        gdrw.read_binary(io.BytesIO(bytes(blob)))


def test_binary_checksum_mismatch(tmp_path):
    path = tmp_path / "bad.bin"
    gdrw.write_binary(random_graph(0, 10, 30), path)
    blob = bytearray(path.read_bytes())
    blob[20] ^= 0xFF
    with pytest.raises(FormatError, match="checksum"):
        gdrw.read_binary(io.BytesIO(bytes(blob)))


def test_binary_reader_defaults_absent_sections():
    # a file with flags=0 carries only structure: weights default to one,
    # labels to zero, relations to the destination labels (zero)
    import struct
    import zlib
    row = np.array([0, 1, 2], dtype="<u8")
    col = np.array([1, 0], dtype="<u4")
    payload = struct.pack("<IQQI", 1, 2, 2, 0) + row.tobytes() + col.tobytes()
    blob = b"GDRW" + payload + struct.pack("<I", zlib.crc32(payload))
    g = gdrw.read_binary(io.BytesIO(blob))
    assert g.num_vertices == 2 and g.num_edges == 2
    assert g.edge_weight.tolist() == [ONE, ONE]
    assert g.vertex_label.tolist() == [0, 0]
    assert g.edge_relation.tolist() == [0, 0]


def test_binary_truncated(tmp_path):
    path = tmp_path / "bad.bin"
    gdrw.write_binary(random_graph(0, 10, 30), path)
    blob = path.read_bytes()
    with pytest.raises(FormatError):
        gdrw.read_binary(io.BytesIO(blob[:10]))


def test_rmat_counts():
    edges = gdrw.rmat_generate(12, 8, seed=7)
    assert edges.shape == (32768, 2)
    assert edges.max() < 4096
    g = gdrw.from_edges(edges[:, 0], edges[:, 1], num_vertices=4096)
    assert g.num_vertices == 4096


def test_rmat_scale_zero_is_self_loops():
    edges = gdrw.rmat_generate(0, 5, seed=1)
    assert edges.tolist() == [[0, 0]] * 5


def test_rmat_deterministic():
    a = gdrw.rmat_generate(10, 8, seed=99)
    b = gdrw.rmat_generate(10, 8, seed=99)
    assert np.array_equal(a, b)
    c = gdrw.rmat_generate(10, 8, seed=100)
    assert not np.array_equal(a, c)


def test_rmat_probability_validation():
    with pytest.raises(ConfigError):
        gdrw.rmat_generate(4, 2, probs=(0.5, 0.3, 0.3, 0.3))
    with pytest.raises(ConfigError):
        gdrw.rmat_generate(40, 2)


def test_rmat_degree_distribution_is_heavy_tailed():
    edges = gdrw.rmat_generate(14, 8, seed=42)
    g = gdrw.from_edges(edges[:, 0], edges[:, 1], num_vertices=1 << 14)
    deg = g.degrees
    assert deg.max() > 20 * deg.mean()


def test_with_random_weights():
    g = random_graph(1, 20, 80)
    g2 = gdrw.with_random_weights(g, 5, 1, 64)
    values = (g2.edge_weight >> np.uint64(16)).astype(np.int64)
    assert values.min() >= 1 and values.max() <= 64
    assert (g2.edge_weight & np.uint64(0xFFFF)).max() == 0  # integer weights
    assert gdrw.with_random_weights(g, 5, 1, 64) == g2  # deterministic
    assert gdrw.with_random_weights(g, 6, 1, 64) != g2


def test_with_random_labels_rederives_relations():
    g = random_graph(1, 20, 80)
    g2 = gdrw.with_random_labels(g, 5, num_labels=4)
    assert g2.vertex_label.max() < 4
    assert np.array_equal(g2.edge_relation, g2.vertex_label[g2.col_index])


def test_graph_arrays_are_immutable(triangle):
    with pytest.raises(ValueError):
        triangle.col_index[0] = 2


def test_oversized_neighbor_list_sum_rejected():
    # per-list weight sums past 2^48 would overflow the sampler arithmetic
    w = np.full(4, np.uint64(1) << np.uint64(47), dtype=np.uint64)
    with pytest.raises(ValueError, match="weight sum"):
        gdrw.from_edges([0, 0, 0, 0], [1, 2, 3, 4], w)
    with pytest.raises(ValueError, match="edge weight"):
        gdrw.from_edges([0], [1], np.array([np.uint64(1) << np.uint64(49)]))
    # at the bound is fine
    gdrw.from_edges([0, 0], [1, 2], np.full(2, np.uint64(1) << np.uint64(47)))
