"""Abstract simplicial complexes: links and descending links, connectivity,
collapsibility, and the "union of contractible pieces" classification."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from .snf import SparseMatrix, smith_normal_form

DEFAULT_BUDGET = 100_000
BUDGET_ENV = "CONFCUBE_COLLAPSE_BUDGET"


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


Simplex = tuple[int, ...]


@dataclass(frozen=True)
class SimplicialComplex:
    """A finite simplicial complex given by its facets (sorted vertex tuples)."""

    facets: tuple[Simplex, ...]

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[int]]) -> SimplicialComplex:
        cand = {tuple(sorted(set(s))) for s in simplices}
        cand.discard(())
        by_size = sorted(cand, key=len, reverse=True)
        facets: list[Simplex] = []
        kept: list[frozenset] = []
        for s in by_size:
            fs = frozenset(s)
            if not any(fs < k for k in kept):
                facets.append(s)
                kept.append(fs)
        return cls(tuple(sorted(facets)))

    @classmethod
    def empty(cls) -> SimplicialComplex:
        return cls(())

    @property
    def vertices(self) -> list[int]:
        return sorted({x for f in self.facets for x in f})

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def is_empty(self) -> bool:
        return not self.facets

    def simplices(self) -> list[set[Simplex]]:
        """All nonempty simplices grouped by dimension."""
        out: list[set[Simplex]] = [set() for _ in range(self.dim + 1)]
        for f in self.facets:
            for k in range(1, len(f) + 1):
                out[k - 1].update(itertools.combinations(f, k))
        return out

    def f_vector(self) -> list[int]:
        return [len(s) for s in self.simplices()]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def edges(self) -> set[tuple[int, int]]:
        out = set()
        for f in self.facets:
            out.update(itertools.combinations(f, 2))
        return out

    def skeleton_graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges())
        return g

    def relabel(self, mapping) -> SimplicialComplex:
        return SimplicialComplex.from_simplices([mapping[x] for x in f] for f in self.facets)

    def to_json(self) -> dict:
        return {"facets": [list(f) for f in self.facets]}

    @classmethod
    def from_json(cls, d: dict) -> SimplicialComplex:
        return cls.from_simplices(d["facets"])


def euler_characteristic(s: SimplicialComplex) -> int:
    """Unreduced Euler characteristic; the empty complex has 0."""
    return s.euler_characteristic()


def clique_complex(vertices: Iterable[int], adjacent: Iterable[tuple[int, int]]) -> SimplicialComplex:
    g = nx.Graph()
    g.add_nodes_from(vertices)
    g.add_edges_from(adjacent)
    return SimplicialComplex.from_simplices(nx.find_cliques(g))


def is_flag(s: SimplicialComplex) -> bool:
    """Every clique of the 1-skeleton spans a simplex."""
    cliques = {tuple(sorted(c)) for c in nx.find_cliques(s.skeleton_graph())}
    return cliques == set(s.facets)


def components(s: SimplicialComplex) -> list[SimplicialComplex]:
    g = nx.Graph()
    for f in s.facets:
        g.add_nodes_from(f)
        g.add_edges_from(zip(f, f[1:]))
    parts = sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0])
    where = {x: i for i, comp in enumerate(parts) for x in comp}
    grouped: list[list[Simplex]] = [[] for _ in parts]
    for f in s.facets:
        grouped[where[f[0]]].append(f)
    return [SimplicialComplex(tuple(sorted(fs))) for fs in grouped]


def is_connected(s: SimplicialComplex) -> bool:
    return len(components(s)) == 1


def cone(s: SimplicialComplex, apex: int | None = None) -> SimplicialComplex:
    if apex is None:
        apex = max(s.vertices, default=-1) + 1
    if s.is_empty():
        return SimplicialComplex(((apex,),))
    return SimplicialComplex.from_simplices(f + (apex,) for f in s.facets)


# homology of simplicial complexes -----------------------------------------

def boundary_matrix(s: SimplicialComplex, k: int) -> SparseMatrix:
    """Boundary from k-simplices to (k-1)-simplices, alternating signs."""
    simp = s.simplices()
    rows = sorted(simp[k - 1])
    cols = sorted(simp[k])
    ridx = {x: i for i, x in enumerate(rows)}
    m = SparseMatrix(len(rows), len(cols))
    for j, sigma in enumerate(cols):
        for i in range(len(sigma)):
            m.add(ridx[sigma[:i] + sigma[i + 1:]], j, (-1) ** i)
    return m


def reduced_homology(s: SimplicialComplex) -> dict:
    """Reduced Betti numbers and torsion of ``s`` over the integers."""
    if s.is_empty():
        return {"betti": [], "torsion": [], "reduced_minus_one": 1}
    counts = s.f_vector()
    top = len(counts) - 1
    snfs = [smith_normal_form(boundary_matrix(s, k)) for k in range(1, top + 1)]
    ranks = [0] + [x.rank for x in snfs] + [0]
    betti = []
    torsion = []
    for k in range(top + 1):
        b = counts[k] - ranks[k] - ranks[k + 1]
        if k == 0:
            b -= 1
        betti.append(b)
        torsion.append(list(snfs[k].torsion) if k < top else [])
    return {"betti": betti, "torsion": torsion, "reduced_minus_one": 0}


# collapsibility -------------------------------------------------------------

@dataclass
class CollapseResult:
    """``collapsible`` is None when the search budget ran out."""

    collapsible: bool | None
    sequence: list[tuple[Simplex, Simplex]] = field(default_factory=list)
    nodes: int = 0

    def __bool__(self) -> bool:
        return bool(self.collapsible)


def _all_simplices(s: SimplicialComplex) -> frozenset[Simplex]:
    return frozenset(x for level in s.simplices() for x in level)


def _free_pairs(state: frozenset[Simplex]) -> list[tuple[Simplex, Simplex]]:
    cofaces: dict[Simplex, list[Simplex]] = {}
    for tau in state:
        if len(tau) > 1:
            for i in range(len(tau)):
                cofaces.setdefault(tau[:i] + tau[i + 1:], []).append(tau)
    pairs = []
    for sigma, cos in cofaces.items():
        if len(cos) == 1 and cos[0] not in cofaces:
            pairs.append((sigma, cos[0]))
    pairs.sort(key=lambda p: (len(p[0]), p[0], p[1]))
    return pairs


def is_collapsible(s: SimplicialComplex, budget: int | None = None) -> CollapseResult:
    """Search for elementary collapses reducing ``s`` to a single vertex.

    Greedy in the order lowest-dimensional free face first, backtracking over
    the alternatives until ``budget`` search nodes have been expanded.
    """
    if s.is_empty() or not is_connected(s):
        raise ValueError("collapsibility is tested on nonempty connected complexes")
    if budget is None:
        budget = default_budget()
    if s.euler_characteristic() != 1:
        return CollapseResult(False)
    start = _all_simplices(s)
    seen: set[frozenset[Simplex]] = set()
    nodes = 0
    path: list[tuple[Simplex, Simplex]] = []

    def search(state: frozenset[Simplex]) -> bool | None:
        nonlocal nodes
        if len(state) == 1:
            return True
        if state in seen:
            return False
        seen.add(state)
        nodes += 1
        if nodes > budget:
            return None
        exhausted = False
        for sigma, tau in _free_pairs(state):
            path.append((sigma, tau))
            res = search(state - {sigma, tau})
            if res:
                return True
            path.pop()
            if res is None:
                exhausted = True
                break
        return None if exhausted else False

    res = search(start)
    return CollapseResult(res, list(path) if res else [], nodes)


@dataclass
class LinkClassification:
    kind: str  # empty | union_of_contractible | not_contractible_union | indeterminate
    components: int = 0
    witness: dict | None = None

    @property
    def contractible_union(self) -> bool:
        return self.kind == "union_of_contractible"

    def to_json(self) -> dict:
        d: dict = {"kind": self.kind, "components": self.components}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


def classify_contractible_union(s: SimplicialComplex, budget: int | None = None) -> LinkClassification:
    if s.is_empty():
        return LinkClassification("empty")
    parts = components(s)
    undecided = None
    for part in parts:
        res = is_collapsible(part, budget)
        if res.collapsible is False:
            return LinkClassification("not_contractible_union", len(parts), {
                "facets": [list(f) for f in part.facets],
                "reduced_homology": reduced_homology(part),
            })
        if res.collapsible is None and undecided is None:
            undecided = part
    if undecided is not None:
        return LinkClassification("indeterminate", len(parts), {
            "facets": [list(f) for f in undecided.facets],
            "reduced_homology": reduced_homology(undecided),
        })
    return LinkClassification("union_of_contractible", len(parts))


def shape_name(s: SimplicialComplex) -> str:
    """Short human-readable description used in reports."""
    if s.is_empty():
        return "empty"
    f = s.f_vector()
    if f == [1]:
        return "point"
    if s.dim == 0:
        return f"{f[0]} points"
    if f == [2, 1]:
        return "edge"
    g = s.skeleton_graph()
    if s.dim == 1 and nx.is_connected(g) and all(d == 2 for _, d in g.degree()):
        return f"{f[0]}-cycle"
    return "complex f=" + ",".join(map(str, f))

