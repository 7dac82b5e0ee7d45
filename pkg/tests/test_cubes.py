from __future__ import annotations

import math

import networkx as nx
import pytest

from confcube import graph as G
from confcube.cubes import (ComplexError, Cube, CubeComplex, build_conf, cube_faces,
                            euler_characteristic, is_locally_cat0, is_valid_cube,
                            sublevel_complex, theta_euler_closed_form,
                            theta_f_vector_closed_form, vertex_link, vertex_link_clique)
from confcube.simplicial import is_flag
from oracles import brute_cells, ordered_placements


SMALL = [G.cycle(4), G.cycle(5), G.path(4), G.theta(3, subdivided=True),
         G.pulsar(3, 1, 1, subdivided=True), G.sun((1, 0), subdivided=True),
         G.make_graph("abc", [(0, 1), (0, 1), (1, 2)])]


@pytest.mark.parametrize("g", SMALL, ids=lambda g: str(g.family and g.family["kind"]))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_cells_match_brute_force(g, n):
    c = build_conf(g, n)
    assert [set(level) for level in c.cells] == brute_cells(g, n)
    assert ordered_placements(g, n) == math.factorial(n) * (c.f_vector[0] if c.cells else 0)


def test_examples_from_small_graphs(c4):
    assert c4.f_vector == [4, 4]
    c = build_conf(G.path(3), 3)
    assert c.f_vector == [1]
    assert vertex_link(c, c.vertices[0]).is_empty()


def test_theta4_f_vector(theta4):
    assert theta4.f_vector == [20, 48, 24]
    assert theta_f_vector_closed_form(4) == (20, 48, 24)


@pytest.mark.parametrize("m,chi", [(7, 0), (4, -4), (2, 0)])
def test_theta_euler(m, chi):
    assert euler_characteristic(build_conf(G.theta(m, subdivided=True), 3)) == chi
    assert theta_euler_closed_form(m) == chi


def test_closed_form_values():
    assert theta_f_vector_closed_form(2) == (4, 4, 0)
    v, e, f = theta_f_vector_closed_form(7)
    assert (v, e, f) == (84, 294, 210) and v - e + f == 0


@pytest.mark.parametrize("m", range(2, 13))
def test_theta_f_vectors_match_closed_form(m):
    c = build_conf(G.theta(m, subdivided=True), 3)
    expected = theta_f_vector_closed_form(m)
    assert tuple(c.f_vector + [0] * (3 - len(c.f_vector))) == expected
    assert c.dim == (2 if expected[2] else 1)


def test_every_face_is_valid_and_counted():
    g = G.pulsar(3, 1, 1, subdivided=True)
    c = build_conf(g, 3)
    c.check_closed()
    for level in c.cells[1:]:
        for cube in level:
            faces = cube_faces(g, cube)
            assert len(faces) == 2 * cube.dim
            assert len({f for _, _, f in faces}) == 2 * cube.dim
            assert all(is_valid_cube(g, f, 3) and f in c for _, _, f in faces)


def test_empty_iff_too_few_vertices():
    for atlas in nx.graph_atlas_g()[1:53]:  # every simple graph on 1..5 vertices
        g = G.make_graph([str(x) for x in atlas.nodes], list(atlas.edges))
        for n in range(1, 7):
            assert build_conf(g, n).is_empty() == (g.num_vertices < n)


def test_links_clique_equals_direct(theta4):
    for c in [theta4, build_conf(G.pulsar(3, 1, 1, subdivided=True), 3),
              build_conf(G.sun((1, 1, 0), subdivided=True), 3)]:
        for v in c.vertices:
            assert vertex_link(c, v) == vertex_link_clique(c, v)


def test_theta4_links_are_cycles(theta4):
    g = theta4.graph
    for v in theta4.vertices:
        lk = vertex_link(theta4, v)
        sk = lk.skeleton_graph()
        assert lk.dim == 1 and nx.is_connected(sk) and all(d == 2 for _, d in sk.degree())
    a1, b1, b2 = (g.vertex(x) for x in ("a1", "b1", "b2"))
    lk = vertex_link(theta4, Cube((), tuple(sorted((a1, b1, b2)))))
    assert lk.f_vector() == [4, 4]


def test_flag_on_examples(theta4):
    assert is_locally_cat0(theta4).ok
    assert is_locally_cat0(build_conf(G.cycle(6), 3)).ok


def test_non_flag_fixture_is_rejected():
    # three disjoint edges span a 3-cube; keep only its 2-skeleton
    g = G.make_graph("abcdef", [(0, 1), (2, 3), (4, 5)])
    full = build_conf(g, 3)
    assert full.f_vector == [20, 18, 6, 1]
    hollow = CubeComplex(g, 3, [list(level) for level in full.cells[:3]])
    rep = is_locally_cat0(hollow)
    assert not rep.ok and rep.failing_vertex is not None
    lk = vertex_link(hollow, rep.failing_vertex)
    assert lk.f_vector() == [3, 3] and not is_flag(lk)
    assert is_locally_cat0(full).ok


def test_sublevel_examples(c4):
    vals = {v: sum(v.vertices) for v in c4.vertices}
    assert sublevel_complex(c4, vals, float("inf")).labelled_cells() == c4.labelled_cells()
    assert sublevel_complex(c4, vals, min(vals.values()) - 1).is_empty()


def test_vertex_link_rejects_non_vertex(c4):
    with pytest.raises(ComplexError):
        vertex_link(c4, c4.cells[1][0])


def test_complex_json_shape(c4):
    d = c4.to_json()
    assert d["n"] == 3 and d["f_vector"] == [4, 4]
    assert set(d["cells"]) == {"0", "1"}
    assert all(set(x) == {"edges", "vertices"} for x in d["cells"]["1"])
