from __future__ import annotations

import pytest

from confcube import graph as G
from confcube.cubes import CubeComplex, build_conf, euler_characteristic
from confcube.homology import (boundary_matrices, connected_components, homology,
                               surface_report)
from confcube.snf import rank


def test_c4_boundary(c4):
    cc = boundary_matrices(c4)
    d1 = cc.boundary(1)
    assert (d1.nrows, d1.ncols) == (4, 4)
    dense = d1.to_dense()
    # each column is an oriented edge: one +1, one -1
    assert all(sorted(col) == [-1, 0, 0, 1] for col in zip(*dense))
    assert rank(d1) == 3


def test_path_has_no_boundaries():
    assert boundary_matrices(build_conf(G.path(3), 3)).boundaries == []


def test_theta4_boundary_shape(theta4):
    cc = boundary_matrices(theta4)
    d1, d2 = cc.boundary(1), cc.boundary(2)
    assert (d2.nrows, d2.ncols) == (48, 24)
    assert d1.matmul(d2).nnz() == 0


@pytest.mark.parametrize("g", [G.pulsar(4, 2, 1, subdivided=True),
                               G.sun((1, 1, 1), subdivided=True),
                               G.make_graph("abcdefgh", [(0, 1), (2, 3), (4, 5), (6, 7)])])
def test_boundary_squared_zero(g):
    c = build_conf(g, 3 if g.family else 4)
    mats = boundary_matrices(c, check=False).boundaries
    for a, b in zip(mats, mats[1:]):
        assert a.matmul(b).nnz() == 0


def test_boundary_with_heights_is_still_a_chain_complex():
    g = G.pulsar(3, 1, 1, subdivided=True)
    g = g.with_heights(tuple(reversed(range(0, 2 * g.num_vertices, 2))))
    boundary_matrices(build_conf(g, 3))


def test_homology_examples(theta4, c4):
    h = homology(theta4)
    assert h.betti == [1, 6, 1] and h.torsion_free and h.euler_consistent
    h = homology(c4)
    assert h.betti == [1, 1] and h.torsion_free
    assert homology(build_conf(G.theta(2, subdivided=True), 3)).betti == [1, 1]


@pytest.mark.parametrize("m", range(2, 8))
def test_betti_sum_matches_euler(m):
    c = build_conf(G.theta(m, subdivided=True), 3)
    h = homology(c)
    assert h.euler_from_betti == euler_characteristic(c)


def test_solid_and_hollow_cube():
    g = G.make_graph("abcdef", [(0, 1), (2, 3), (4, 5)])
    full = build_conf(g, 3)
    # the 3-cube is contractible; its boundary is a 2-sphere
    h = homology(full)
    assert h.b(1) == 0 and h.b(2) == 0 and h.b(3) == 0
    hollow = CubeComplex(g, 3, [list(level) for level in full.cells[:3]])
    h = homology(hollow)
    assert h.b(2) == 1 and h.torsion_free


def test_surface_examples(theta4, c4):
    s = surface_report(theta4)
    assert (s.is_closed_surface, s.orientable, s.genus, s.euler) == (True, True, 3, -4)
    s = surface_report(c4)
    assert not s.is_closed_surface and "dimension 1" in s.reason
    s = surface_report(build_conf(G.theta(3, subdivided=True), 3))
    assert not s.is_closed_surface


def test_orientation_independent_of_start(theta4):
    reports = {(r.is_closed_surface, r.orientable, r.genus)
               for r in (surface_report(theta4, start=j) for j in range(len(theta4.cells[2])))}
    assert reports == {(True, True, 3)}


def test_disconnected_surface_report():
    g = G.make_graph("abcdef", [(0, 1), (2, 3), (4, 5)])
    c = build_conf(g, 3)
    parts = connected_components(c)
    assert len(parts) > 1
    rep = surface_report(c)
    assert not rep.is_closed_surface and len(rep.components) == len(parts)
    assert rep.genus is None
