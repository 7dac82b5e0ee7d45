"""Named reproduction runs: each returns a list of expected-vs-computed
checks that the CLI prints and the acceptance tests assert on."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable

from . import graph as G
from .cubes import (Cube, CubeComplex, build_conf, euler_characteristic, is_locally_cat0,
                    theta_euler_closed_form, theta_f_vector_closed_form)
from .homology import homology, surface_report
from .morse import (HeightFunction, PULSAR_CUT, induced_morse, morse_euler_sum,
                    pulsar_height, split_certificate, sun_freeness_certificate, sun_height,
                    wedge_certificate)
from .simplicial import classify_contractible_union, shape_name


@dataclass
class Check:
    name: str
    expected: object
    computed: object
    ok: bool

    def to_json(self) -> dict:
        return {"name": self.name, "expected": _plain(self.expected),
                "computed": _plain(self.computed), "ok": self.ok}


def _plain(x):
    if isinstance(x, tuple):
        return [_plain(y) for y in x]
    if isinstance(x, list):
        return [_plain(y) for y in x]
    return x


def check(name: str, expected, computed) -> Check:
    return Check(name, expected, computed, expected == computed)


def _padded(fv: list[int], length: int) -> tuple[int, ...]:
    return tuple(fv + [0] * (length - len(fv)))


def euler_table(m_min: int = 2, m_max: int = 12) -> list[Check]:
    out = []
    for m in range(m_min, m_max + 1):
        c = build_conf(G.theta(m, subdivided=True), 3)
        out.append(check(f"chi Conf3(Theta_{m}) = m(m-2)(m-7)/6",
                         theta_euler_closed_form(m), euler_characteristic(c)))
    return out


def theta_f_vectors(m_min: int = 2, m_max: int = 12) -> list[Check]:
    out = []
    for m in range(m_min, m_max + 1):
        c = build_conf(G.theta(m, subdivided=True), 3)
        out.append(check(f"f-vector Conf3(Theta_{m})",
                         theta_f_vector_closed_form(m) + (0,), _padded(c.f_vector, 4)))
    return out


def theta4_surface() -> list[Check]:
    c = build_conf(G.theta(4, subdivided=True), 3)
    surf = surface_report(c)
    hom = homology(c)
    return [
        check("Conf3(Theta_4) is a closed surface", True, surf.is_closed_surface),
        check("Conf3(Theta_4) is orientable", True, surf.orientable),
        check("Conf3(Theta_4) genus", 3, surf.genus),
        check("Conf3(Theta_4) betti", [1, 6, 1], hom.betti),
        check("Conf3(Theta_4) torsion-free", True, hom.torsion_free),
        check("chi Conf3(Theta_4)", -4, euler_characteristic(c)),
    ]


def base_case() -> list[Check]:
    g = G.cycle(4)
    c = build_conf(g, 3)
    wedge = wedge_certificate(induced_morse(c, HeightFunction((0, 2, 4, 6))))
    four_cycle = (c.f_vector == [4, 4]
                  and all(len(_neighbours(c, v)) == 2 for v in c.vertices))
    return [
        check("Conf3(C4) f-vector", [4, 4], c.f_vector),
        check("Conf3(C4) is a 4-cycle", True, four_cycle),
        check("Conf3(C4) b1", 1, homology(c).b(1)),
        check("Conf3(C4) wedge certificate rank", 1, wedge.free_rank if wedge.ok else None),
    ]


def _neighbours(c: CubeComplex, v: Cube) -> list[Cube]:
    out = []
    for e in c.cells[1] if c.dim >= 1 else []:
        ends = c.corners(e)
        if v in ends:
            out.extend(x for x in ends if x != v)
    return out


def sun_families(n_values: Iterable[int] = (2, 3, 4), max_rays: int = 3) -> list[tuple[int, ...]]:
    out = []
    for n in n_values:
        for rays in itertools.product(range(max_rays + 1), repeat=n):
            if sum(rays) <= max_rays:
                out.append(rays)
    return out


def sun_freeness(n_values: Iterable[int] = (2, 3, 4), max_rays: int = 3) -> list[Check]:
    out = base_case()
    for rays in sun_families(n_values, max_rays):
        cert = sun_freeness_certificate(rays)
        label = "S(" + ",".join(map(str, rays)) + ")"
        out.append(check(f"{label} inductive wedge certificate", True, cert.ok))
        out.append(check(f"{label} free rank = 1 - chi", 1 - cert.euler, cert.free_rank))
        out.append(check(f"{label} H2 = 0, H1 torsion-free", (0, True),
                         (cert.homology.b(2), cert.homology.torsion_free)))
    return out


PULSAR_CASES = ((3, 1, 0), (4, 1, 0), (3, 1, 1), (4, 2, 1))


def pulsar_split(cases: Iterable[tuple[int, int, int]] = PULSAR_CASES) -> list[Check]:
    out = []
    for m, n1, n2 in cases:
        g = G.pulsar(m, n1, n2, subdivided=True)
        c = build_conf(g, 3)
        cert = split_certificate(induced_morse(c, pulsar_height(g, m, n1, n2)), PULSAR_CUT)
        label = f"P({m},{n1},{n2})"
        out.append(check(f"{label} split certificate at cut2={PULSAR_CUT}", True, cert.ok))
        if n2 == 0:
            theta = build_conf(G.theta(m, subdivided=True), 3)
            out.append(check(f"{label} sublevel = Conf3(Theta_{m})", True,
                             cert.sublevel.labelled_cells() == theta.labelled_cells()))
        out.append(check(f"{label} rank F >= 1", True, (cert.rank_f or 0) >= 1))
        out.append(check(f"{label} b2(X) = b2(sublevel)", True, bool(cert.b2_agree)))
    return out


C6_EXPECTED = {
    ("a1", "a2", "a6"): ("empty", "empty"),
    ("a1", "a5", "a6"): ("empty", "empty"),
    ("a1", "a2", "a3"): ("empty", "empty"),
    ("a1", "a2", "a5"): ("point", "union_of_contractible"),
    ("a1", "a3", "a4"): ("edge", "union_of_contractible"),
    ("a2", "a4", "a6"): ("4-cycle", "not_contractible_union"),
}


def c6_graph() -> G.Graph:
    return G.make_graph([f"a{i}" for i in range(1, 7)], [(i, (i + 1) % 6) for i in range(6)],
                        heights2=(0, 2, 4, 6, 4, 2))


def c6_example() -> list[Check]:
    g = c6_graph()
    c = build_conf(g, 3)
    md = induced_morse(c, HeightFunction(g.heights2))
    out = []
    for labels, expected in C6_EXPECTED.items():
        v = Cube((), tuple(sorted(g.vertex(x) for x in labels)))
        link = md.descending[v]
        got = (shape_name(link), classify_contractible_union(link).kind)
        out.append(check("Lk_down{" + ",".join(labels) + "}", expected, got))
    return out


def acceptance_complexes() -> list[tuple[str, CubeComplex, HeightFunction]]:
    """Every complex the acceptance suite builds, with its preset height."""
    out = []
    for m in range(2, 13):
        g = G.theta(m, subdivided=True)
        out.append((f"Theta_{m}", build_conf(g, 3), pulsar_height(g, m, 0, 0)))
    g = G.cycle(4)
    out.append(("C4", build_conf(g, 3), HeightFunction((0, 2, 4, 6))))
    g = c6_graph()
    out.append(("C6", build_conf(g, 3), HeightFunction(g.heights2)))
    for m, n1, n2 in PULSAR_CASES:
        g = G.pulsar(m, n1, n2, subdivided=True)
        out.append((f"P({m},{n1},{n2})", build_conf(g, 3), pulsar_height(g, m, n1, n2)))
    for rays in sun_families():
        g = G.sun(rays, subdivided=True)
        out.append((f"S{rays}", build_conf(g, 3), sun_height(g, rays)))
    return out


def random_height(g: G.Graph, rng: random.Random) -> HeightFunction:
    """Distinct random values, so every edge is non-horizontal."""
    vals = rng.sample(range(4 * g.num_vertices), g.num_vertices)
    return HeightFunction(tuple(vals))


def morse_euler(complexes=None, trials: int = 50, seed: int = 0) -> list[Check]:
    rng = random.Random(seed)
    out = []
    for name, c, h in complexes if complexes is not None else acceptance_complexes():
        chi = euler_characteristic(c)
        ok = morse_euler_sum(induced_morse(c, h)) == chi
        for _ in range(trials):
            ok = ok and morse_euler_sum(induced_morse(c, random_height(c.graph, rng))) == chi
        out.append(check(f"{name}: sum(1 - chi Lk_down) = chi over preset + {trials} random heights",
                         True, ok))
    return out


def flag_links(complexes=None) -> list[Check]:
    out = []
    for name, c, _ in complexes if complexes is not None else acceptance_complexes():
        out.append(check(f"{name}: all vertex links flag", True, is_locally_cat0(c).ok))
    return out


TARGETS: dict[str, Callable[..., list[Check]]] = {
    "euler-table": lambda m_max=12, **_: euler_table(2, m_max) + theta_f_vectors(2, m_max),
    "theta4-surface": lambda **_: theta4_surface(),
    "sun-freeness": lambda n_max=4, ray_max=3, **_: sun_freeness(range(2, n_max + 1), ray_max),
    "pulsar-split": lambda **_: pulsar_split(),
    "c6-example": lambda **_: c6_example(),
}
