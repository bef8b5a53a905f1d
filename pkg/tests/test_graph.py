import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from labelflow import EdgeListError, Graph, load_edge_list, write_edge_list
from labelflow.graph import write_remap_csv


def test_triangle_from_bytes():
    g = load_edge_list(b"0 1\n1 2\n0 2")
    assert g.num_nodes == 3
    assert g.num_edges == 3
    assert all(g.degree(v) == 2 for v in range(3))


def test_duplicates_and_self_loops_dropped():
    g = load_edge_list(b"5 7\n7 5\n5 5")
    assert g.num_nodes == 2
    assert g.num_edges == 1
    assert g.dropped_duplicates == 1
    assert g.dropped_self_loops == 1


def test_external_id_remap():
    g = load_edge_list(b"10 20\n20 30")
    assert g.num_nodes == 3
    assert g.num_edges == 2
    assert g.external_ids.tolist() == [10, 20, 30]
    assert g.internal_id(10) == 0
    assert g.internal_id(20) == 1
    assert g.internal_id(30) == 2


def test_degree_examples(triangle, star5, path3):
    assert triangle.degree(0) == 2
    assert star5.degree(0) == 5
    assert path3.degree(1) == 2


def test_degree_out_of_range(triangle):
    with pytest.raises(IndexError):
        triangle.degree(3)
    with pytest.raises(IndexError):
        triangle.degree(-1)


def test_malformed_line_reports_line_number():
    with pytest.raises(EdgeListError, match="line 2"):
        load_edge_list(b"0 1\n0 x\n")
    with pytest.raises(EdgeListError, match="line 3"):
        load_edge_list(b"0 1\n1 2\n1 2 3\n")


def test_empty_input_rejected():
    with pytest.raises(EdgeListError, match="empty graph"):
        load_edge_list(b"")
    with pytest.raises(EdgeListError, match="empty graph"):
        load_edge_list(b"# only a comment\n")


def test_comment_and_delimiter_options():
    g = load_edge_list(b"% note\n0,1\n1,2\n", comment="%", delimiter=",")
    assert g.num_edges == 2


def test_one_based_ids():
    g = load_edge_list(b"1 2\n2 3\n", one_based=True)
    assert g.external_ids.tolist() == [0, 1, 2]
    with pytest.raises(EdgeListError, match="negative"):
        load_edge_list(b"0 1\n", one_based=True)


def test_declared_node_count_allows_isolated_nodes():
    g = load_edge_list(b"0 1\n", num_nodes=4)
    assert g.num_nodes == 4
    assert g.degree(3) == 0
    with pytest.raises(EdgeListError):
        load_edge_list(b"0 9\n", num_nodes=4)


def test_adjacency_is_symmetric_and_sorted(two_triangles_bridge):
    g = two_triangles_bridge
    for v in range(g.num_nodes):
        for u in g.neighbors(v):
            assert v in g.neighbors(u)
        assert list(g.neighbors(v)) == sorted(g.neighbors(v))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)),
                min_size=1, max_size=120))
def test_handshake_identity(pairs):
    try:
        g = Graph.from_edges(pairs)
    except EdgeListError:
        return  # all pairs were self-loops
    assert int(g.degrees.sum()) == 2 * g.num_edges


def test_reload_round_trip():
    rng = np.random.default_rng(7)
    pairs = [(int(u), int(v)) for u, v in rng.integers(0, 50, size=(200, 2)) if u != v]
    g = Graph.from_edges(pairs)
    buf = io.StringIO()
    write_edge_list(g, buf)
    g2 = load_edge_list(buf.getvalue().encode())
    assert g2.num_nodes == g.num_nodes
    assert g2.num_edges == g.num_edges
    # external ids of g become g2's externals; remap-composed edges agree
    ext_edges = {(int(g.external_ids[u]), int(g.external_ids[v])) for u, v in g.edges}
    ext_edges2 = {(int(g2.external_ids[u]), int(g2.external_ids[v])) for u, v in g2.edges}
    assert ext_edges == ext_edges2


def test_remap_csv(tmp_path):
    g = load_edge_list(b"10 30\n30 20\n")
    out = tmp_path / "remap.csv"
    write_remap_csv(g, out)
    lines = out.read_text().splitlines()
    assert lines[0] == "external_id,internal_id"
    assert lines[1:] == ["10,0", "20,1", "30,2"]


def test_graph_arrays_are_frozen(triangle):
    with pytest.raises(ValueError):
        triangle.degrees[0] = 99
