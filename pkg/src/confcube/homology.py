"""Integral cellular homology of configuration cube complexes and closed
surface recognition."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from .cubes import Cube, CubeComplex, euler_characteristic, incident_edges, vertex_link
from .snf import SNF, SparseMatrix, smith_normal_form


class ChainComplexError(RuntimeError):
    """Boundary of a boundary was nonzero: the sign convention is broken."""


def _lower_end(c: CubeComplex, eid: int) -> int:
    e = c.graph.edge(eid)
    h = c.graph.heights2
    if h is not None and h[e.u] != h[e.v]:
        return e.u if h[e.u] < h[e.v] else e.v
    return min(e.u, e.v)


def face_signs(c: CubeComplex, cube: Cube) -> list[tuple[Cube, int]]:
    """Signed codimension-one faces: slot ``i`` contributes ``(-1)^i`` on the
    lower endpoint face and ``-(-1)^i`` on the upper one."""
    out = []
    for i, x, face in c.faces(cube):
        sign = (-1) ** i
        out.append((face, sign if x == _lower_end(c, cube.edges[i]) else -sign))
    return out


@dataclass
class ChainComplex:
    f_vector: list[int]
    boundaries: list[SparseMatrix]  # boundaries[k-1] is d_k : C_k -> C_{k-1}

    def boundary(self, k: int) -> SparseMatrix | None:
        if 1 <= k <= len(self.boundaries):
            return self.boundaries[k - 1]
        return None


def boundary_matrices(c: CubeComplex, check: bool = True) -> ChainComplex:
    mats = []
    for k in range(1, c.dim + 1):
        m = SparseMatrix(len(c.cells[k - 1]), len(c.cells[k]))
        rows = c.index[k - 1]
        for j, cube in enumerate(c.cells[k]):
            for face, sign in face_signs(c, cube):
                m.add(rows[face], j, sign)
        mats.append(m)
    if check:
        for a, b in zip(mats, mats[1:]):
            if a.matmul(b).nnz():
                raise ChainComplexError("boundary of boundary is nonzero")
    return ChainComplex(c.f_vector, mats)


@dataclass
class HomologyReport:
    betti: list[int]
    torsion: list[list[int]]
    euler_from_cells: int
    euler_from_betti: int

    @property
    def euler_consistent(self) -> bool:
        return self.euler_from_cells == self.euler_from_betti

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion)

    def b(self, k: int) -> int:
        return self.betti[k] if 0 <= k < len(self.betti) else 0

    def to_json(self) -> dict:
        return {"betti": self.betti, "torsion": self.torsion,
                "euler_from_cells": self.euler_from_cells,
                "euler_from_betti": self.euler_from_betti,
                "euler_consistent": self.euler_consistent}


def homology_report(cc: ChainComplex) -> HomologyReport:
    snfs: list[SNF] = [smith_normal_form(m) for m in cc.boundaries]
    ranks = [0] + [s.rank for s in snfs] + [0]
    betti, torsion = [], []
    for k, count in enumerate(cc.f_vector):
        betti.append(count - ranks[k] - ranks[k + 1])
        torsion.append(list(snfs[k].torsion) if k < len(snfs) else [])
    chi_cells = sum((-1) ** k * f for k, f in enumerate(cc.f_vector))
    chi_betti = sum((-1) ** k * b for k, b in enumerate(betti))
    return HomologyReport(betti, torsion, chi_cells, chi_betti)


def homology(c: CubeComplex) -> HomologyReport:
    return homology_report(boundary_matrices(c))


def connected_components(c: CubeComplex) -> list[CubeComplex]:
    """Split ``c`` into connected subcomplexes (by the 1-skeleton)."""
    g = nx.Graph()
    g.add_nodes_from(c.vertices)
    for e in (c.cells[1] if c.dim >= 1 else []):
        a, b = c.corners(e)
        g.add_edge(a, b)
    parts = sorted((frozenset(p) for p in nx.connected_components(g)), key=min)
    return [c.subcomplex(lambda cube, p=p: c.corners(cube)[0] in p) for p in parts]


def is_connected(c: CubeComplex) -> bool:
    return not c.is_empty() and len(connected_components(c)) == 1


@dataclass
class SurfaceReport:
    is_closed_surface: bool
    orientable: bool | None = None
    genus: int | None = None
    euler: int | None = None
    reason: str | None = None
    components: list[SurfaceReport] = field(default_factory=list)

    def to_json(self) -> dict:
        d = {"is_closed_surface": self.is_closed_surface, "orientable": self.orientable,
             "genus": self.genus, "euler": self.euler, "reason": self.reason}
        if self.components:
            d["components"] = [x.to_json() for x in self.components]
        return d


def _link_is_cycle(c: CubeComplex, v: Cube) -> bool:
    lk = vertex_link(c, v)
    if lk.is_empty() or lk.dim != 1:
        return False
    g = lk.skeleton_graph()
    return nx.is_connected(g) and all(d == 2 for _, d in g.degree())


def _orientable(c: CubeComplex, start: int = 0) -> bool:
    squares = c.cells[2]
    edge_sq: dict[Cube, list[tuple[int, int]]] = {}
    for j, sq in enumerate(squares):
        for face, sign in face_signs(c, sq):
            edge_sq.setdefault(face, []).append((j, sign))
    orient = {start: 1}
    todo = deque([start])
    while todo:
        j = todo.popleft()
        for face, sign in face_signs(c, squares[j]):
            for other, osign in edge_sq[face]:
                if other == j:
                    continue
                want = -orient[j] * sign * osign
                if other not in orient:
                    orient[other] = want
                    todo.append(other)
                elif orient[other] != want:
                    return False
    return True


def surface_report(c: CubeComplex, start: int = 0) -> SurfaceReport:
    """Decide whether ``c`` is a closed surface; if orientable, its genus."""
    if c.is_empty():
        return SurfaceReport(False, reason="empty complex")
    parts = connected_components(c)
    if len(parts) > 1:
        subs = [surface_report(p) for p in parts]
        return SurfaceReport(all(s.is_closed_surface for s in subs),
                             reason="disconnected; see components", components=subs)
    if c.dim != 2:
        return SurfaceReport(False, reason=f"dimension {c.dim}, not 2")
    chi = euler_characteristic(c)
    counts: dict[Cube, int] = {}
    for sq in c.cells[2]:
        for _, _, face in c.faces(sq):
            counts[face] = counts.get(face, 0) + 1
    for e in c.cells[1]:
        if counts.get(e, 0) != 2:
            return SurfaceReport(False, euler=chi,
                                 reason=f"edge {e} lies in {counts.get(e, 0)} squares")
    for v in c.vertices:
        if not incident_edges(c, v) or not _link_is_cycle(c, v):
            return SurfaceReport(False, euler=chi,
                                 reason=f"link of vertex {v.vertices} is not a single cycle")
    if not _orientable(c, start):
        return SurfaceReport(True, orientable=False, euler=chi)
    return SurfaceReport(True, orientable=True, genus=(2 - chi) // 2, euler=chi)
