"""Height functions on graphs, the induced PL Morse function on the
configuration cube complex, descending links, and the wedge / free-product
certificates built on them.

All heights are doubled integers (``values2``), so the Morse function takes
exact integer values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .cubes import Cube, CubeComplex, sublevel_complex
from .graph import Graph
from .homology import HomologyReport, homology, is_connected
from .simplicial import (LinkClassification, SimplicialComplex,
                         classify_contractible_union)


class MorseError(ValueError):
    pass


@dataclass(frozen=True)
class HeightFunction:
    values2: tuple[int, ...]

    def validate(self, g: Graph) -> None:
        if len(self.values2) != g.num_vertices:
            raise MorseError(f"{len(self.values2)} heights for {g.num_vertices} vertices")
        for e in g.edges:
            if self.values2[e.u] == self.values2[e.v]:
                raise MorseError(f"edge {e.id} ({g.labels[e.u]}-{g.labels[e.v]}) is horizontal")

    def by_label(self, g: Graph) -> dict[str, int]:
        return dict(zip(g.labels, self.values2))

    @classmethod
    def from_labels(cls, g: Graph, table: Mapping[str, int]) -> HeightFunction:
        try:
            return cls(tuple(table[lab] for lab in g.labels))
        except KeyError as exc:
            raise MorseError(f"no height for vertex {exc}") from None


# presets ----------------------------------------------------------------------

def _check_family(g: Graph, kind: str, params: Sequence[int]) -> None:
    fam = g.family or {}
    if fam.get("kind") != kind or list(fam.get("params", [])) != list(params) \
            or not fam.get("subdivided"):
        raise MorseError(f"graph is not the subdivided {kind}{tuple(params)}")


def sun_height(g: Graph, rays: Sequence[int]) -> HeightFunction:
    """Cycle vertex v_i at |i - n - 1|; on every ray the middle vertex sits
    half a unit above its base and the tip a full unit above."""
    _check_family(g, "sun", rays)
    n = len(rays)
    table: dict[str, int] = {}
    for i in range(1, 2 * n + 1):
        table[f"v{i}"] = 2 * abs(i - n - 1)
    for i, x in enumerate(rays):
        base = table[f"v{2 * i + 1}"]
        for k in range(1, x + 1):
            table[f"w{2 * i + 1},{k}"] = base + 1
            table[f"v{2 * i + 1},{k}"] = base + 2
    return HeightFunction.from_labels(g, table)


def sun_extension_height(g: Graph, rays: Sequence[int]) -> HeightFunction:
    """Heights on the sun graph with one extra ray at v1.

    ``rays`` describes the graph *before* the extension; ``g`` must be the
    subdivided sun graph with ``rays[0] + 1`` rays at v1.  The last ray at v1
    is the new one: its tip gets 5n+8 and its middle 3n+4.
    """
    if not rays:
        raise MorseError("sun graph needs at least one cycle vertex")
    ext = [rays[0] + 1, *rays[1:]]
    _check_family(g, "sun", ext)
    n = len(rays)
    table: dict[str, int] = {}
    for i in range(1, 2 * n + 1):
        table[f"v{i}"] = 2 * abs(i - n - 1)
    for i, x in enumerate(rays):
        base = table[f"v{2 * i + 1}"]
        for k in range(1, x + 1):
            table[f"w{2 * i + 1},{k}"] = base + 1
            table[f"v{2 * i + 1},{k}"] = base + 2
    new = rays[0] + 1
    table[f"w1,{new}"] = 2 * (3 * n + 4)
    table[f"v1,{new}"] = 2 * (5 * n + 8)
    return HeightFunction.from_labels(g, table)


def sun_extension_cut(n: int) -> int:
    """Doubled level separating the old graph from the new ray."""
    return 2 * (3 * n + 3)


def pulsar_height(g: Graph, m: int, n1: int, n2: int) -> HeightFunction:
    """a2 at 0, every b_j at 1, a1 at 2, c_i at 5, c_i' at 6, d_i at 1/2,
    d_i' at 1 (all doubled)."""
    fam = g.family or {}
    if fam.get("kind") == "theta" and n1 == n2 == 0:
        _check_family(g, "theta", [m])
    else:
        _check_family(g, "pulsar", [m, n1, n2])
    table = {"a1": 4, "a2": 0}
    table.update({f"b{j}": 2 for j in range(1, m + 1)})
    for i in range(1, n1 + 1):
        table[f"c{i}"], table[f"c{i}'"] = 10, 12
    for i in range(1, n2 + 1):
        table[f"d{i}"], table[f"d{i}'"] = 1, 2
    return HeightFunction.from_labels(g, table)


PULSAR_CUT = 8


def c6_height(g: Graph) -> HeightFunction:
    """The worked six-cycle example: a1 at the bottom, a4 at the top."""
    if g.num_vertices != 6:
        raise MorseError("expected a six-cycle")
    return HeightFunction((0, 2, 4, 6, 4, 2))


def preset_height(g: Graph, name: str) -> HeightFunction:
    """Bind a named preset to a generated graph using its family record."""
    if name == "c6":
        return c6_height(g)
    fam = g.family
    if not fam:
        raise MorseError("height presets need a generated graph (missing 'family')")
    p = list(fam["params"])
    if name == "pulsar":
        if fam["kind"] == "theta":
            return pulsar_height(g, p[0], 0, 0)
        return pulsar_height(g, *p)
    if name == "sun":
        return sun_height(g, p)
    if name == "sun-ext":
        if fam["kind"] != "sun" or p[0] < 1:
            raise MorseError("sun-ext needs a sun graph with at least one ray at v1")
        return sun_extension_height(g, [p[0] - 1, *p[1:]])
    raise MorseError(f"unknown preset {name!r}")


def preset_cut(g: Graph, name: str) -> int | None:
    if name == "pulsar":
        return PULSAR_CUT
    if name == "sun-ext" and g.family:
        return sun_extension_cut(len(g.family["params"]))
    return None


# induced Morse function -----------------------------------------------------

@dataclass(frozen=True)
class Move:
    """A token at ``source`` sliding along edge ``edge`` to ``target``."""

    source: int
    target: int
    edge: int


@dataclass
class MorseData:
    complex: CubeComplex
    height: HeightFunction
    values2: dict[Cube, int]
    moves: dict[Cube, list[Move]]
    descending: dict[Cube, SimplicialComplex]

    @cached_property
    def top_vertex(self) -> dict[Cube, Cube]:
        """Each cube's unique vertex of maximal value."""
        return {cube: _top(self.complex.graph, self.height, cube)
                for cube in self.complex.all_cells()}

    def value(self, v: Cube) -> int:
        return self.values2[v]

    def descending_cubes(self, v: Cube) -> list[Cube]:
        return [c for c in self.complex.cubes_at[v] if self.top_vertex[c] == v]

    def levels(self) -> list[int]:
        return sorted(set(self.values2.values()))


def _top(g: Graph, h: HeightFunction, cube: Cube) -> Cube:
    ups = [max(g.edge(eid).ends, key=lambda x: h.values2[x]) for eid in cube.edges]
    return Cube((), tuple(sorted(cube.vertices + tuple(ups))))


def descending_moves(g: Graph, h: HeightFunction, v: Cube) -> list[Move]:
    occupied = set(v.vertices)
    inc = g.incident()
    out = []
    for x in v.vertices:
        for e in inc[x]:
            y = e.other(x)
            if y not in occupied and h.values2[y] < h.values2[x]:
                out.append(Move(x, y, e.id))
    return sorted(out, key=lambda mv: (mv.edge, mv.source))


def disjoint_move_sets(g: Graph, moves: Sequence[Move]) -> SimplicialComplex:
    """Clique complex of moves under "graph edges are disjoint"; vertices are
    indices into ``moves``."""
    ends = [frozenset(g.edge(mv.edge).ends) for mv in moves]
    facets: list[tuple[int, ...]] = []

    def grow(chosen: list[int], used: frozenset, start: int) -> None:
        extended = False
        for i in range(len(moves)):
            if i not in chosen and not ends[i] & used:
                extended = True
                if i >= start:
                    grow(chosen + [i], used | ends[i], i + 1)
        if not extended and chosen:
            facets.append(tuple(chosen))

    grow([], frozenset(), 0)
    return SimplicialComplex(tuple(sorted(facets)))


def descending_link(g: Graph, h: HeightFunction, v: Cube) -> tuple[list[Move], SimplicialComplex]:
    """Descending moves at ``v`` and the clique complex they span."""
    moves = descending_moves(g, h, v)
    return moves, disjoint_move_sets(g, moves)


def descending_link_from_cubes(md: MorseData, v: Cube) -> SimplicialComplex:
    """Descending link read off the cubes whose top vertex is ``v``
    (independent check of :func:`descending_link`)."""
    index = {mv.edge: i for i, mv in enumerate(md.moves[v])}
    simplices = [[index[eid] for eid in cube.edges]
                 for cube in md.complex.cubes_at[v] if md.top_vertex[cube] == v]
    return SimplicialComplex.from_simplices(simplices)


def induced_morse(c: CubeComplex, h: HeightFunction) -> MorseData:
    g = c.graph
    h.validate(g)
    values = {v: sum(h.values2[x] for x in v.vertices) for v in c.vertices}
    moves, desc = {}, {}
    for v in c.vertices:
        moves[v], desc[v] = descending_link(g, h, v)
    return MorseData(c, h, values, moves, desc)


def sublevel(md: MorseData, cut2: float) -> CubeComplex:
    return sublevel_complex(md.complex, md.values2, cut2)


def morse_euler_sum(md: MorseData) -> int:
    """Sum over vertices of 1 - chi(descending link); equals chi of the complex."""
    return sum(1 - md.descending[v].euler_characteristic() for v in md.complex.vertices)


def _describe_vertex(g: Graph, v: Cube) -> list[str]:
    return [g.labels[x] for x in v.vertices]


# certificates ---------------------------------------------------------------

def _classify_all(md: MorseData, vertices, budget) -> dict[Cube, LinkClassification]:
    return {v: classify_contractible_union(md.descending[v], budget) for v in vertices}


def _summary(classes: Mapping[Cube, LinkClassification]) -> dict[str, int]:
    out: dict[str, int] = {}
    for cl in classes.values():
        out[cl.kind] = out.get(cl.kind, 0) + 1
    return dict(sorted(out.items()))


@dataclass
class WedgeCertificate:
    ok: bool
    classifications: dict[Cube, LinkClassification]
    free_rank: int | None = None
    homology: HomologyReport | None = None
    failure: dict | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "free_rank": self.free_rank,
            "link_kinds": _summary(self.classifications),
            "h2_zero": None if self.homology is None else self.homology.b(2) == 0,
            "h1_torsion_free": None if self.homology is None
            else not (self.homology.torsion[1] if len(self.homology.torsion) > 1 else []),
            "failure": self.failure,
        }


class CertificateError(MorseError):
    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code


def _witness(md: MorseData, v: Cube, cl: LinkClassification) -> dict:
    g = md.complex.graph
    return {
        "vertex": list(v.vertices),
        "labels": _describe_vertex(g, v),
        "value2": md.values2[v],
        "kind": cl.kind,
        "link_facets": [list(f) for f in md.descending[v].facets],
        "moves": [[g.labels[mv.source], g.labels[mv.target], mv.edge] for mv in md.moves[v]],
    }


def wedge_certificate(md: MorseData, budget: int | None = None) -> WedgeCertificate:
    """All descending links empty or unions of contractible pieces, on a
    connected complex, certifies a wedge of circles."""
    if not is_connected(md.complex):
        raise CertificateError("disconnected", "complex is not connected")
    classes = _classify_all(md, md.complex.vertices, budget)
    for v, cl in classes.items():
        if cl.kind == "indeterminate":
            return WedgeCertificate(False, classes, failure={"code": "indeterminate",
                                                             **_witness(md, v, cl)})
        if cl.kind == "not_contractible_union":
            return WedgeCertificate(False, classes, failure={"code": "not_contractible",
                                                             **_witness(md, v, cl)})
    hom = homology(md.complex)
    return WedgeCertificate(True, classes, free_rank=hom.b(1), homology=hom)


@dataclass
class SplitCertificate:
    cut2: int
    sublevel: CubeComplex
    ok: bool
    classifications: dict[Cube, LinkClassification]
    rank_f: int | None = None
    b0_agree: bool | None = None
    b2_agree: bool | None = None
    homology_total: HomologyReport | None = None
    homology_sublevel: HomologyReport | None = None
    failure: dict | None = None

    def to_json(self) -> dict:
        return {
            "cut2": self.cut2,
            "ok": self.ok,
            "sublevel_f_vector": self.sublevel.f_vector,
            "above_cut_vertices": len(self.classifications),
            "link_kinds": _summary(self.classifications),
            "rank_F": self.rank_f,
            "b0_agree": self.b0_agree,
            "b2_agree": self.b2_agree,
            "betti_total": None if self.homology_total is None else self.homology_total.betti,
            "betti_sublevel": None if self.homology_sublevel is None
            else self.homology_sublevel.betti,
            "failure": self.failure,
        }


def split_certificate(md: MorseData, cut2: int, budget: int | None = None) -> SplitCertificate:
    """Certify that the whole complex is the sublevel set at ``cut2`` wedged
    with circles, so its fundamental group splits off a free factor."""
    sub = sublevel(md, cut2)
    if not is_connected(md.complex):
        raise CertificateError("disconnected", "complex is not connected")
    if not is_connected(sub):
        raise CertificateError("disconnected_sublevel", "sublevel complex is not connected")
    above = [v for v in md.complex.vertices if md.values2[v] > cut2]
    classes = _classify_all(md, above, budget)
    for v, cl in classes.items():
        if cl.kind != "union_of_contractible":
            code = {"empty": "empty_above_cut", "indeterminate": "indeterminate"}.get(
                cl.kind, "not_contractible")
            return SplitCertificate(cut2, sub, False, classes,
                                    failure={"code": code, **_witness(md, v, cl)})
    h_all, h_sub = homology(md.complex), homology(sub)
    return SplitCertificate(
        cut2, sub, True, classes,
        rank_f=h_all.b(1) - h_sub.b(1),
        b0_agree=h_all.b(0) == h_sub.b(0),
        b2_agree=_higher_agree(h_all, h_sub),
        homology_total=h_all, homology_sublevel=h_sub)


def _higher_agree(a: HomologyReport, b: HomologyReport) -> bool:
    """Wedging on circles leaves H_k, k >= 2, untouched."""
    top = max(len(a.betti), len(b.betti))
    for k in range(2, top):
        ta = a.torsion[k] if k < len(a.torsion) else []
        tb = b.torsion[k] if k < len(b.torsion) else []
        if a.b(k) != b.b(k) or ta != tb:
            return False
    return True



# freeness of sun graphs by adding one ray at a time ----------------------------

def ramp_height(g: Graph) -> HeightFunction:
    """Heights increasing once around a cycle: 0, 1, ..., k-1 in vertex order."""
    return HeightFunction(tuple(2 * i for i in g.vertices))


def _rotation_map(rays: Sequence[int], shift: int) -> dict[str, str]:
    """Labels of S(rays) -> labels of S(rays[shift:] + rays[:shift])."""
    n = len(rays)
    out = {}
    for i in range(1, 2 * n + 1):
        out[f"v{i}"] = f"v{(i - 1 - 2 * shift) % (2 * n) + 1}"
    for i, x in enumerate(rays):
        j = 2 * ((i - shift) % n) + 1
        for k in range(1, x + 1):
            out[f"w{2 * i + 1},{k}"] = f"w{j},{k}"
            out[f"v{2 * i + 1},{k}"] = f"v{j},{k}"
    return out


def _relabelled_cells(c: CubeComplex, mapping: Mapping[str, str]) -> set:
    out = set()
    for edges, verts in c.labelled_cells():
        out.add((frozenset(frozenset(mapping[x] for x in e) for e in edges),
                 frozenset(mapping[x] for x in verts)))
    return out


@dataclass
class SunStep:
    before: tuple[int, ...]
    after: tuple[int, ...]
    shift: int
    split: SplitCertificate
    sublevel_matches: bool

    @property
    def ok(self) -> bool:
        return self.split.ok and self.sublevel_matches

    def to_json(self) -> dict:
        return {"before": list(self.before), "after": list(self.after), "shift": self.shift,
                "ok": self.ok, "sublevel_matches": self.sublevel_matches,
                "rank_F": self.split.rank_f, "failure": self.split.failure}


@dataclass
class SunFreenessCertificate:
    """Inductive wedge-of-circles certificate for a subdivided sun graph.

    The bare cycle is certified directly with a ramp height; every further
    ray is attached at v1 (after rotating the graph) and certified with a
    split at the level separating the new ray.
    """

    rays: tuple[int, ...]
    base: WedgeCertificate
    steps: list[SunStep]
    homology: HomologyReport
    euler: int

    @property
    def free_rank(self) -> int:
        return self.homology.b(1)

    @property
    def ok(self) -> bool:
        return (self.base.ok and all(s.ok for s in self.steps)
                and self.homology.b(2) == 0 and self.homology.torsion_free
                and self.homology.b(0) == 1
                and self.free_rank == 1 - self.euler
                and self.free_rank == self.base.free_rank + sum(s.split.rank_f or 0 for s in self.steps))

    def to_json(self) -> dict:
        return {"rays": list(self.rays), "ok": self.ok, "free_rank": self.free_rank,
                "euler": self.euler, "betti": self.homology.betti,
                "base": self.base.to_json(), "steps": [s.to_json() for s in self.steps]}


def sun_freeness_certificate(rays: Sequence[int], budget: int | None = None) -> SunFreenessCertificate:
    from .cubes import build_conf, euler_characteristic
    from .graph import sun

    rays = tuple(int(x) for x in rays)
    n = len(rays)
    if n < 2:
        raise MorseError("need a cycle of length >= 4 after subdivision (n >= 2)")
    cur = (0,) * n
    g = sun(cur, True)
    c = build_conf(g, 3)
    base = wedge_certificate(induced_morse(c, ramp_height(g)), budget)
    steps: list[SunStep] = []
    for p in range(n):
        for _ in range(rays[p]):
            rotated = cur[p:] + cur[:p]
            grown = (rotated[0] + 1,) + rotated[1:]
            g2 = sun(grown, True)
            c2 = build_conf(g2, 3)
            md = induced_morse(c2, sun_extension_height(g2, rotated))
            split = split_certificate(md, sun_extension_cut(n), budget)
            matches = split.sublevel.labelled_cells() == _relabelled_cells(c, _rotation_map(cur, p))
            steps.append(SunStep(cur, grown, p, split, matches))
            # back to the target's labelling
            cur = grown[n - p:] + grown[:n - p] if p else grown
            g = sun(cur, True)
            c = build_conf(g, 3)
    hom = homology(c)
    return SunFreenessCertificate(rays, base, steps, hom, euler_characteristic(c))
