"""Finite multigraphs, the graph families used throughout, subdivision and
the admissibility test for discretized configuration spaces.

Heights are stored doubled (``height2``) so that half-integer heights stay
exact integers.
"""

from __future__ import annotations

import json
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Invalid graph data or invalid family parameters."""


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int

    @property
    def ends(self) -> tuple[int, int]:
        return (self.u, self.v)

    def is_loop(self) -> bool:
        return self.u == self.v

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise GraphError(f"vertex {x} is not an endpoint of edge {self.id}")


@dataclass(frozen=True)
class Graph:
    """An immutable finite multigraph on vertices ``0..V-1``.

    ``family`` is an optional descriptor recording which generator built the
    graph (used to bind height presets); it plays no role in the topology.
    """

    labels: tuple[str, ...]
    edges: tuple[Edge, ...]
    heights2: tuple[int, ...] | None = None
    family: dict | None = field(default=None, compare=False, hash=False)

    def __post_init__(self) -> None:
        nv = len(self.labels)
        seen = set()
        for e in self.edges:
            if not (0 <= e.u < nv and 0 <= e.v < nv):
                raise GraphError(f"edge {e.id} has an endpoint outside 0..{nv - 1}")
            if e.id in seen:
                raise GraphError(f"duplicate edge id {e.id}")
            seen.add(e.id)
        if self.heights2 is not None and len(self.heights2) != nv:
            raise GraphError("heights must be given for every vertex")
        object.__setattr__(self, "_by_id", {e.id: e for e in self.edges})

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def vertices(self) -> range:
        return range(len(self.labels))

    def edge(self, eid: int) -> Edge:
        try:
            return self._by_id[eid]  # type: ignore[attr-defined]
        except KeyError:
            raise GraphError(f"unknown edge id {eid}") from None

    def vertex(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise GraphError(f"no vertex labelled {label!r}") from None

    def degree(self, x: int) -> int:
        return sum((e.u == x) + (e.v == x) for e in self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return deg

    def incident(self) -> list[list[Edge]]:
        """Incident edges per vertex (a loop is listed once)."""
        return self._incidence

    @cached_property
    def _incidence(self) -> list[list[Edge]]:
        inc: list[list[Edge]] = [[] for _ in self.vertices]
        for e in self.edges:
            inc[e.u].append(e)
            if e.v != e.u:
                inc[e.v].append(e)
        return inc

    def has_loops(self) -> bool:
        return any(e.is_loop() for e in self.edges)

    def with_heights(self, heights2: Sequence[int] | None) -> Graph:
        return Graph(self.labels, self.edges,
                     None if heights2 is None else tuple(int(h) for h in heights2),
                     self.family)

    def canonical_edges(self) -> list[Edge]:
        return sorted(self.edges, key=lambda e: (min(e.ends), max(e.ends), e.id))

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return True
        inc = self.incident()
        seen = {0}
        todo = [0]
        while todo:
            x = todo.pop()
            for e in inc[x]:
                y = e.other(x)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return len(seen) == self.num_vertices

    # serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        verts = []
        for i, lab in enumerate(self.labels):
            d: dict = {"id": i, "label": lab}
            if self.heights2 is not None:
                d["height2"] = self.heights2[i]
            verts.append(d)
        out: dict = {
            "vertices": verts,
            "edges": [[e.u, e.v] for e in self.canonical_edges()],
        }
        if self.family is not None:
            out["family"] = self.family
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> Graph:
        try:
            raw_vertices = sorted(data["vertices"], key=lambda d: d["id"])
            raw_edges = data["edges"]
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from None
        ids = [int(d["id"]) for d in raw_vertices]
        if ids != list(range(len(ids))):
            raise GraphError("vertex ids must be 0..V-1")
        labels = tuple(str(d.get("label", i)) for i, d in zip(ids, raw_vertices))
        has_h = [("height2" in d) for d in raw_vertices]
        if any(has_h) and not all(has_h):
            raise GraphError("height2 must be present on every vertex or on none")
        heights = tuple(int(d["height2"]) for d in raw_vertices) if any(has_h) else None
        edges = []
        for i, item in enumerate(raw_edges):
            if len(item) == 3:
                u, v, eid = item
            elif len(item) == 2:
                (u, v), eid = item, i
            else:
                raise GraphError(f"edge entry {item!r} must be [u, v] or [u, v, id]")
            edges.append(Edge(int(eid), int(u), int(v)))
        return cls(labels, tuple(edges), heights, data.get("family"))

    @classmethod
    def loads(cls, text: str) -> Graph:
        return cls.from_json(json.loads(text))


def make_graph(labels: Iterable[str], pairs: Iterable[tuple[int, int]],
               heights2: Sequence[int] | None = None, family: dict | None = None) -> Graph:
    edges = tuple(Edge(i, u, v) for i, (u, v) in enumerate(pairs))
    return Graph(tuple(labels), edges,
                 None if heights2 is None else tuple(heights2), family)


_DOT_NODE = re.compile(r'^\s*("?[\w\'.,-]+"?)\s*(\[.*\])?\s*$')


def from_dot(text: str) -> Graph:
    """Read node and edge statements from an undirected DOT graph.

    Only ``a -- b`` chains and bare node statements are understood;
    attributes other than ``height2`` are ignored.
    """
    labels: list[str] = []
    index: dict[str, int] = {}
    heights: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []

    def node(name: str) -> int:
        name = name.strip().strip('"')
        if name not in index:
            index[name] = len(labels)
            labels.append(name)
        return index[name]

    body = text
    if "{" in text:
        body = text[text.index("{") + 1: text.rindex("}")]
    for stmt in re.split(r"[;\n]", body):
        stmt = stmt.strip()
        if not stmt or stmt.startswith(("//", "#")) or "=" in stmt.split("[")[0]:
            continue
        attrs = ""
        if "[" in stmt:
            stmt, attrs = stmt.split("[", 1)
        if "--" in stmt:
            names = [p for p in stmt.split("--")]
            ids = [node(p) for p in names]
            pairs.extend(zip(ids, ids[1:]))
        elif _DOT_NODE.match(stmt):
            x = node(stmt)
            m = re.search(r"height2\s*=\s*\"?(-?\d+)", attrs)
            if m:
                heights[x] = int(m.group(1))
    h = None
    if heights:
        if len(heights) != len(labels):
            raise GraphError("height2 must be given on every DOT node or on none")
        h = [heights[i] for i in range(len(labels))]
    return make_graph(labels, pairs, h)


# generators ----------------------------------------------------------------

FAMILIES = ("cycle", "theta", "pulsar", "sun", "rose", "path")


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphError(msg)


def cycle(k: int, subdivided: bool = False) -> Graph:
    _require(k >= 3, f"cycle needs k >= 3, got {k}")
    fam = {"kind": "cycle", "params": [k], "subdivided": subdivided}
    if not subdivided:
        return make_graph([f"v{i + 1}" for i in range(k)],
                          [(i, (i + 1) % k) for i in range(k)], family=fam)
    labels = []
    for i in range(k):
        labels += [f"v{i + 1}", f"s{i + 1}"]
    kk = 2 * k
    return make_graph(labels, [(i, (i + 1) % kk) for i in range(kk)], family=fam)


def path(k: int, subdivided: bool = False) -> Graph:
    _require(k >= 1, f"path needs k >= 1, got {k}")
    fam = {"kind": "path", "params": [k], "subdivided": subdivided}
    if not subdivided:
        return make_graph([f"p{i + 1}" for i in range(k)],
                          [(i, i + 1) for i in range(k - 1)], family=fam)
    labels = []
    for i in range(k):
        labels.append(f"p{i + 1}")
        if i < k - 1:
            labels.append(f"s{i + 1}")
    return make_graph(labels, [(i, i + 1) for i in range(len(labels) - 1)], family=fam)


def theta(m: int, subdivided: bool = False) -> Graph:
    """Two vertices ``a1``, ``a2`` joined by ``m`` arcs."""
    return pulsar(m, 0, 0, subdivided, _kind="theta")


def pulsar(m: int, n1: int, n2: int, subdivided: bool = False, _kind: str = "pulsar") -> Graph:
    """Theta graph with ``n1`` rays at ``a1`` and ``n2`` rays at ``a2``.

    Subdivided vertex order: a1, a2, b1..bm, then c1, c1', c2, c2', ..., then
    d1, d1', ... (unprimed = middle of a ray, primed = tip).  Edge ids follow
    the same order: a1-b_j is ``2(j-1)``, b_j-a2 is ``2(j-1)+1``.
    """
    _require(m >= 1, f"theta/pulsar needs m >= 1, got {m}")
    _require(n1 >= 0 and n2 >= 0, "ray counts must be nonnegative")
    params = [m] if _kind == "theta" else [m, n1, n2]
    fam = {"kind": _kind, "params": params, "subdivided": subdivided}
    labels = ["a1", "a2"]
    pairs: list[tuple[int, int]] = []
    if subdivided:
        for j in range(m):
            labels.append(f"b{j + 1}")
            pairs += [(0, len(labels) - 1), (len(labels) - 1, 1)]
        for base, letter, count in ((0, "c", n1), (1, "d", n2)):
            for i in range(count):
                labels += [f"{letter}{i + 1}", f"{letter}{i + 1}'"]
                mid, tip = len(labels) - 2, len(labels) - 1
                pairs += [(base, mid), (mid, tip)]
    else:
        pairs += [(0, 1)] * m
        for base, letter, count in ((0, "c", n1), (1, "d", n2)):
            for i in range(count):
                labels.append(f"{letter}{i + 1}'")
                pairs.append((base, len(labels) - 1))
    return make_graph(labels, pairs, family=fam)


def sun(rays: Sequence[int], subdivided: bool = False) -> Graph:
    """Sun graph with ``rays[i]`` rays at cycle vertex ``v_{2i+1}``.

    Unsubdivided, the cycle runs through the odd-labelled vertices
    v1, v3, ..., v_{2n-1}; subdividing every edge once inserts the
    even-labelled ones, giving the 2n-cycle v1..v_{2n}.  Ray tips are
    labelled ``v{2i-1},{k}``; ray middles ``w{2i-1},{k}``.
    """
    rays = [int(x) for x in rays]
    n = len(rays)
    _require(n >= 1, "sun needs at least one cycle vertex")
    _require(all(x >= 0 for x in rays), "ray counts must be nonnegative")
    fam = {"kind": "sun", "params": list(rays), "subdivided": subdivided}
    labels: list[str] = []
    pairs: list[tuple[int, int]] = []
    if subdivided:
        labels = [f"v{i + 1}" for i in range(2 * n)]
        pairs = [(i, (i + 1) % (2 * n)) for i in range(2 * n)]
        for i, x in enumerate(rays):
            base = 2 * i
            for k in range(x):
                labels += [f"w{base + 1},{k + 1}", f"v{base + 1},{k + 1}"]
                mid, tip = len(labels) - 2, len(labels) - 1
                pairs += [(base, mid), (mid, tip)]
    else:
        labels = [f"v{2 * i + 1}" for i in range(n)]
        pairs = [(i, (i + 1) % n) for i in range(n)]
        for i, x in enumerate(rays):
            for k in range(x):
                labels.append(f"v{2 * i + 1},{k + 1}")
                pairs.append((i, len(labels) - 1))
    return make_graph(labels, pairs, family=fam)


def rose(circles: int, rays: int, subdivided: bool = False) -> Graph:
    """Wedge of ``circles`` loops and ``rays`` rays at a centre ``o``."""
    _require(circles >= 0 and rays >= 0, "rose parameters must be nonnegative")
    fam = {"kind": "rose", "params": [circles, rays], "subdivided": subdivided}
    labels = ["o"]
    pairs: list[tuple[int, int]] = []
    if subdivided:
        for i in range(circles):
            labels.append(f"l{i + 1}")
            pairs += [(0, len(labels) - 1), (len(labels) - 1, 0)]
        for i in range(rays):
            labels += [f"r{i + 1}", f"r{i + 1}'"]
            pairs += [(0, len(labels) - 2), (len(labels) - 2, len(labels) - 1)]
    else:
        pairs += [(0, 0)] * circles
        for i in range(rays):
            labels.append(f"r{i + 1}'")
            pairs.append((0, len(labels) - 1))
    return make_graph(labels, pairs, family=fam)


def generate(kind: str, params: Sequence[int], subdivided: bool = False) -> Graph:
    """Build a family member from its kind name and integer parameters."""
    params = list(params)
    try:
        if kind == "cycle":
            (k,) = params
            return cycle(k, subdivided)
        if kind == "path":
            (k,) = params
            return path(k, subdivided)
        if kind == "theta":
            (m,) = params
            return theta(m, subdivided)
        if kind == "pulsar":
            m, n1, n2 = params
            return pulsar(m, n1, n2, subdivided)
        if kind == "sun":
            return sun(params, subdivided)
        if kind == "rose":
            c, r = params
            return rose(c, r, subdivided)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(f"bad parameters {params} for {kind}") from None
    raise GraphError(f"unknown graph family {kind!r}")


# subdivision and admissibility --------------------------------------------

def subdivide(g: Graph, eid: int, times: int = 1) -> Graph:
    """Replace edge ``eid`` by a path through ``times`` new degree-2 vertices."""
    if times < 1:
        raise GraphError("times must be >= 1")
    e = g.edge(eid)
    labels = list(g.labels)
    next_id = max((x.id for x in g.edges), default=-1) + 1
    new = []
    for t in range(times):
        labels.append(f"{g.labels[e.u]}~{g.labels[e.v]}#{eid}.{t + 1}")
        new.append(len(labels) - 1)
    chain = [e.u, *new, e.v]
    edges = [x for x in g.edges if x.id != eid]
    for a, b in zip(chain, chain[1:]):
        edges.append(Edge(next_id, a, b))
        next_id += 1
    heights = None
    if g.heights2 is not None:
        # new vertices interpolate between the endpoint heights
        hu, hv = g.heights2[e.u], g.heights2[e.v]
        heights = list(g.heights2) + [hu + (hv - hu) * (t + 1) // (times + 1) for t in range(times)]
    return Graph(tuple(labels), tuple(edges), None if heights is None else tuple(heights), None)


def subdivide_all(g: Graph, times: int = 1) -> Graph:
    for e in list(g.edges):
        g = subdivide(g, e.id, times)
    return g


def essential_vertices(g: Graph) -> set[int]:
    return {x for x, d in enumerate(g.degrees()) if d != 2}


@dataclass
class AdmissibilityReport:
    ok: bool
    violations: list[dict]

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": self.violations}


def _branch_paths(g: Graph) -> list[tuple[int, int, list[int]]]:
    """Maximal paths whose interior vertices have degree 2, between essential
    vertices.  Returns ``(start, end, edge ids)``; closed loops of degree-2
    vertices hanging on a single essential vertex come back with start == end.
    """
    ess = essential_vertices(g)
    inc = g.incident()
    used: set[int] = set()
    out = []
    for s in sorted(ess):
        for e in inc[s]:
            if e.id in used:
                continue
            walk = [e.id]
            used.add(e.id)
            prev_edge, cur = e, e.other(s)
            while cur not in ess:
                nxt = [x for x in inc[cur] if x.id != prev_edge.id]
                if not nxt:
                    break
                prev_edge = nxt[0]
                walk.append(prev_edge.id)
                used.add(prev_edge.id)
                cur = prev_edge.other(cur)
            out.append((s, cur, walk))
    return out


def _shortest_cycle_through(g: Graph, e: Edge) -> int | None:
    """Length of the shortest embedded cycle containing edge ``e``."""
    inc = g.incident()
    dist = {e.u: 0}
    q = deque([e.u])
    while q:
        x = q.popleft()
        for f in inc[x]:
            if f.id == e.id:
                continue
            y = f.other(x)
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    if e.v not in dist:
        return None
    return dist[e.v] + 1


def girth(g: Graph) -> int | None:
    lengths = [c for e in g.edges if (c := _shortest_cycle_through(g, e)) is not None]
    return min(lengths, default=None)


def is_admissible(g: Graph, n: int) -> AdmissibilityReport:
    """Check the length conditions making ``Conf_n`` of the cube complex a
    deformation retract of the topological configuration space."""
    if g.has_loops():
        raise GraphError("admissibility is only defined for loop-free graphs; subdivide first")
    violations: list[dict] = []
    if g.num_vertices < n:
        violations.append({"kind": "too_few_vertices", "vertices": g.num_vertices, "needed": n})
    for s, t, walk in _branch_paths(g):
        if s != t and len(walk) < n - 1:
            violations.append({"kind": "short_path", "from": s, "to": t,
                               "edges": walk, "length": len(walk), "needed": n - 1})
    for e in g.canonical_edges():
        c = _shortest_cycle_through(g, e)
        if c is not None and c < n + 1:
            violations.append({"kind": "short_cycle", "edge": e.id,
                               "length": c, "needed": n + 1})
    return AdmissibilityReport(not violations, violations)


def edge_multiset(g: Graph) -> Counter:
    """Labelled canonical form: multiset of unordered endpoint-label pairs."""
    return Counter(tuple(sorted((g.labels[e.u], g.labels[e.v]))) for e in g.edges)
