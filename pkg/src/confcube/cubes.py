"""The discretized configuration space of ``n`` unordered tokens on a graph,
built as an explicit cube complex.

A cube is a set of pairwise disjoint closed cells of the graph: ``k`` moving
edges together with ``n - k`` stationary vertices.  Cubes are encoded as a
pair of sorted tuples, which gives a canonical order and cheap hashing.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator

from .graph import Graph
from .simplicial import SimplicialComplex, clique_complex, is_flag


class ComplexError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Cube:
    edges: tuple[int, ...]
    vertices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.edges)

    def to_json(self) -> dict:
        return {"edges": list(self.edges), "vertices": list(self.vertices)}

    @classmethod
    def from_json(cls, d: dict) -> Cube:
        return cls(tuple(sorted(d["edges"])), tuple(sorted(d["vertices"])))


def make_cube(edges: Iterable[int], vertices: Iterable[int]) -> Cube:
    return Cube(tuple(sorted(edges)), tuple(sorted(vertices)))


def cube_faces(g: Graph, c: Cube) -> list[tuple[int, int, Cube]]:
    """Codimension-one faces of ``c`` as ``(slot, endpoint, face)``.

    Slot ``i`` is the position of the replaced edge in ``c.edges``; each slot
    contributes the face at either endpoint, so there are ``2 * dim`` faces.
    """
    out = []
    for i, eid in enumerate(c.edges):
        rest = c.edges[:i] + c.edges[i + 1:]
        e = g.edge(eid)
        for x in (e.u, e.v):
            out.append((i, x, make_cube(rest, c.vertices + (x,))))
    return out


def cube_corners(g: Graph, c: Cube) -> Iterator[tuple[int, ...]]:
    """All vertices (0-cubes) of ``c`` as sorted vertex tuples."""
    ends = [g.edge(eid).ends for eid in c.edges]
    for choice in itertools.product(*ends):
        yield tuple(sorted(c.vertices + choice))


def is_valid_cube(g: Graph, c: Cube, n: int) -> bool:
    if c.dim + len(c.vertices) != n or len(set(c.vertices)) != len(c.vertices):
        return False
    used = set(c.vertices)
    for eid in c.edges:
        e = g.edge(eid)
        if e.u in used or e.v in used:
            return False
        used.add(e.u)
        used.add(e.v)
    return True


@dataclass
class CubeComplex:
    """Cells of a cube complex whose cubes are cells of ``Conf_n`` of ``graph``.

    ``cells[k]`` lists the k-cubes in canonical (sorted) order; ``index[k]``
    maps a cube to its position.  A complex may be any face-closed subset of
    the full configuration space (see :meth:`subcomplex`).
    """

    graph: Graph
    n: int
    cells: list[list[Cube]]
    index: list[dict[Cube, int]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        while self.cells and not self.cells[-1]:
            self.cells.pop()
        self.cells = [sorted(level) for level in self.cells]
        self.index = [{c: i for i, c in enumerate(level)} for level in self.cells]

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    @property
    def f_vector(self) -> list[int]:
        return [len(level) for level in self.cells]

    @property
    def vertices(self) -> list[Cube]:
        return self.cells[0] if self.cells else []

    def is_empty(self) -> bool:
        return not self.cells

    def __contains__(self, c: Cube) -> bool:
        return c.dim < len(self.index) and c in self.index[c.dim]

    def all_cells(self) -> Iterator[Cube]:
        for level in self.cells:
            yield from level

    def faces(self, c: Cube) -> list[tuple[int, int, Cube]]:
        return cube_faces(self.graph, c)

    def corners(self, c: Cube) -> list[Cube]:
        return [Cube((), t) for t in cube_corners(self.graph, c)]

    @cached_property
    def cubes_at(self) -> dict[Cube, list[Cube]]:
        """Positive-dimensional cubes having each vertex as a corner."""
        out: dict[Cube, list[Cube]] = {v: [] for v in self.vertices}
        for level in self.cells[1:]:
            for cube in level:
                for t in cube_corners(self.graph, cube):
                    out[Cube((), t)].append(cube)
        return out

    def check_closed(self) -> None:
        for level in self.cells[1:]:
            for c in level:
                for _, _, f in self.faces(c):
                    if f not in self:
                        raise ComplexError(f"face {f} of {c} is missing")

    def subcomplex(self, keep: Callable[[Cube], bool]) -> CubeComplex:
        """Cells satisfying ``keep``; raises if the result is not face-closed."""
        sub = CubeComplex(self.graph, self.n,
                          [[c for c in level if keep(c)] for level in self.cells])
        sub.check_closed()
        return sub

    def labelled(self, c: Cube) -> tuple[frozenset, frozenset]:
        """Cube described by graph labels, for comparing complexes built on
        different graphs that share vertex and edge names."""
        g = self.graph
        edges = frozenset(frozenset((g.labels[g.edge(e).u], g.labels[g.edge(e).v]))
                          for e in c.edges)
        return edges, frozenset(g.labels[v] for v in c.vertices)

    def labelled_cells(self) -> set:
        return {self.labelled(c) for c in self.all_cells()}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "f_vector": self.f_vector,
            "cells": {str(k): [c.to_json() for c in level] for k, level in enumerate(self.cells)},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def matchings(g: Graph, k: int) -> Iterator[tuple[int, ...]]:
    """Sets of ``k`` pairwise disjoint (loop-free) edges, by increasing id."""
    edges = sorted((e for e in g.edges), key=lambda e: e.id)

    def rec(start: int, chosen: list[int], used: set[int]) -> Iterator[tuple[int, ...]]:
        if len(chosen) == k:
            yield tuple(chosen)
            return
        for i in range(start, len(edges)):
            e = edges[i]
            if e.u in used or e.v in used:
                continue
            chosen.append(e.id)
            used |= {e.u, e.v}
            yield from rec(i + 1, chosen, used)
            chosen.pop()
            used -= {e.u, e.v}

    yield from rec(0, [], set())


def build_conf(g: Graph, n: int) -> CubeComplex:
    """Enumerate every cube of the discretized configuration space."""
    if n < 1:
        raise ComplexError("need at least one token")
    cells: list[list[Cube]] = []
    for k in range(n + 1):
        level = []
        for edges in matchings(g, k):
            blocked = set()
            for eid in edges:
                blocked |= set(g.edge(eid).ends)
            free = [x for x in g.vertices if x not in blocked]
            for verts in itertools.combinations(free, n - k):
                level.append(Cube(edges, verts))
        if not level:
            break
        cells.append(level)
    return CubeComplex(g, n, cells)


def euler_characteristic(c: CubeComplex) -> int:
    return sum((-1) ** k * f for k, f in enumerate(c.f_vector))


def theta_f_vector_closed_form(m: int) -> tuple[int, int, int]:
    """Cell counts of ``Conf_3`` of the once-subdivided theta graph."""
    if m < 2:
        raise ValueError("closed form needs m >= 2")
    from math import comb
    return comb(m + 2, 3), 2 * m * comb(m, 2), (m * m - m) * (m - 2)


def theta_euler_closed_form(m: int) -> int:
    num = m * (m - 2) * (m - 7)
    assert num % 6 == 0
    return num // 6


# links ----------------------------------------------------------------------

def _check_vertex(c: CubeComplex, v: Cube) -> None:
    if v.dim != 0 or v not in c:
        raise ComplexError(f"{v} is not a vertex of the complex")


def incident_edges(c: CubeComplex, v: Cube) -> list[Cube]:
    """1-cubes of ``c`` having ``v`` as an endpoint, in canonical order."""
    _check_vertex(c, v)
    if c.dim < 1:
        return []
    g = c.graph
    inc = g.incident()
    occupied = set(v.vertices)
    out = []
    for x in v.vertices:
        rest = tuple(y for y in v.vertices if y != x)
        for e in inc[x]:
            y = e.other(x)
            if y != x and y not in occupied:
                cube = Cube((e.id,), rest)
                if cube in c:
                    out.append(cube)
    return sorted(set(out))


def vertex_link(c: CubeComplex, v: Cube) -> SimplicialComplex:
    """Link of a vertex, read directly off the cubes having ``v`` as a corner.

    Link vertices are the positions of the incident 1-cubes in ``c.cells[1]``.
    """
    _check_vertex(c, v)
    return _link_from_cubes(c, v, lambda cube: True)


def _link_from_cubes(c: CubeComplex, v: Cube, accept: Callable[[Cube], bool]) -> SimplicialComplex:
    g = c.graph
    simplices = []
    for cube in c.cubes_at[v]:
        if not accept(cube):
            continue
        simplex = []
        for eid in cube.edges:
            e = g.edge(eid)
            x = e.u if e.u in v.vertices else e.v
            rest = tuple(y for y in v.vertices if y != x)
            simplex.append(c.index[1][Cube((eid,), rest)])
        simplices.append(simplex)
    return SimplicialComplex.from_simplices(simplices)


def vertex_link_clique(c: CubeComplex, v: Cube) -> SimplicialComplex:
    """Clique complex on the incident 1-cubes, adjacency = disjoint edges."""
    g = c.graph
    moves = incident_edges(c, v)
    ids = [c.index[1][m] for m in moves]
    ends = [set(g.edge(m.edges[0]).ends) for m in moves]
    adj = [(ids[i], ids[j]) for i, j in itertools.combinations(range(len(moves)), 2)
           if not ends[i] & ends[j]]
    return clique_complex(ids, adj)


@dataclass
class FlagReport:
    ok: bool
    failing_vertex: Cube | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "failing_vertex": None if self.failing_vertex is None
                else list(self.failing_vertex.vertices)}


def is_locally_cat0(c: CubeComplex) -> FlagReport:
    """Gromov's link condition: every vertex link is a flag complex."""
    for v in c.vertices:
        if not is_flag(vertex_link(c, v)):
            return FlagReport(False, v)
    return FlagReport(True)


def sublevel_complex(c: CubeComplex, values2: dict[Cube, int], cut2: float) -> CubeComplex:
    """Full subcomplex on the vertices with value ``<= cut2``."""
    keep_v = {v for v in c.vertices if values2[v] <= cut2}
    return c.subcomplex(lambda cube: all(Cube((), t) in keep_v
                                         for t in cube_corners(c.graph, cube)))
