"""Builders for the example maps and complexes used by the test-suite, the
demos, and the command-line tour: cyclic covers of cycles, antipodal spheres
(cross-polytope boundaries), the two-loop wedge maps, fold paths, and the
cyclic covering of a three-sphere built as a join of two circles together
with its cyclic quotient.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd
from typing import Dict, List, Optional, Tuple

from .complexes import InvolutionComplex, SimplicialComplex
from .double_points import check_star_condition
from .errors import InternalError, PreconditionError
from .maps import SemiLinearMap, SimplicialMap
from .subdivision import barycentric_subdivide


def cycle_complex(n: int, prefix: str = "n") -> SimplicialComplex:
    """Simplicial circle with ``n`` vertices ``<prefix>0 .. <prefix>{n-1}``."""
    return cycle_complex_from_listing([f"{prefix}{i}" for i in range(n)])


def path_complex(ids: List) -> SimplicialComplex:
    edges = {tuple(ids[i : i + 2]) for i in range(len(ids) - 1)}
    return SimplicialComplex(list(ids), edges | {(v,) for v in ids})


def cycle_cover(fold: int, base: int) -> SimplicialMap:
    """The ``fold``-sheeted covering of a ``base``-gon by a ``fold*base``-gon,
    sending vertex i to vertex i mod base."""
    if fold < 1:
        raise PreconditionError("fold must be at least 1")
    src = cycle_complex(fold * base, "n")
    tgt = cycle_complex(base, "b")
    return SimplicialMap(src, tgt, {f"n{i}": f"b{i % base}" for i in range(fold * base)})


def figure_eight_map() -> SimplicialMap:
    """An eight-cycle mapped onto a wedge of two four-cycles, two-to-one only
    at the wedge point."""
    src = cycle_complex(8, "n")
    tv = ["w", "p1", "p2", "p3", "q1", "q2", "q3"]
    tedges = {
        ("w", "p1"), ("p1", "p2"), ("p2", "p3"), ("w", "p3"),
        ("w", "q1"), ("q1", "q2"), ("q2", "q3"), ("w", "q3"),
    }
    tgt = SimplicialComplex(tv, tedges | {(v,) for v in tv})
    vm = {"n0": "w", "n1": "p1", "n2": "p2", "n3": "p3",
          "n4": "w", "n5": "q1", "n6": "q2", "n7": "q3"}
    return SimplicialMap(src, tgt, vm)


def fold_path_map() -> SimplicialMap:
    """A three-vertex path folded onto a single edge at its middle vertex."""
    src = path_complex(["a", "b", "c"])
    tgt = path_complex(["x", "y"])
    return SimplicialMap(src, tgt, {"a": "x", "b": "y", "c": "x"})


def wiggly_figure_eight() -> Tuple[SimplicialMap, SemiLinearMap]:
    """The figure-eight map with both sides refined four-fold and a lift that
    wiggles by ±1/8 at the refinement vertices.  The lift's combined map is
    injective, which makes the pair the standard refinement-cascade input."""
    base = figure_eight_map()
    k_ids = [f"n{i}" for i in range(8)]
    src_ids: List = []
    for i in range(8):
        src_ids.append(k_ids[i])
        src_ids.extend(("kc", i, j) for j in (1, 2, 3))
    src = cycle_complex_from_listing(src_ids)

    loop_paths = []
    seen: List = []
    tedges = set()
    for loop, ids in (("p", ["w", "p1", "p2", "p3", "w"]),
                      ("q", ["w", "q1", "q2", "q3", "w"])):
        path: List = []
        for i in range(4):
            path.append(ids[i])
            path.extend(("mc", loop, i, j) for j in (1, 2, 3))
        path.append(ids[4])
        loop_paths.append(path)
        for x, y in zip(path, path[1:]):
            tedges.add((x, y))
        for v in path:
            if v not in seen:
                seen.append(v)
    tgt = SimplicialComplex(seen, tedges | {(v,) for v in seen})

    walk = src_ids + [src_ids[0]]
    p_path, q_path = loop_paths
    vm: Dict = {}
    for idx in range(17):
        vm[walk[idx]] = p_path[idx]
    for idx in range(16, 32):
        vm[walk[idx]] = q_path[idx - 16]
    f = SimplicialMap(src, tgt, vm)

    heights = {"n0": Fraction(-1), "n4": Fraction(1)}
    values: Dict = {}
    for v in src_ids:
        if isinstance(v, tuple):
            _, i, j = v
            a, b = k_ids[i], k_ids[(i + 1) % 8]
            t = Fraction(j, 4)
            base_val = (1 - t) * heights.get(a, Fraction(0)) + t * heights.get(b, Fraction(0))
            values[v] = (base_val + Fraction((-1) ** j, 8),)
        else:
            values[v] = (heights.get(v, Fraction(0)),)
    return f, SemiLinearMap(src, values, out_dim=1)


def cycle_complex_from_listing(ids: List) -> SimplicialComplex:
    """Simplicial circle through the given distinct vertex ids in order."""
    if len(ids) < 3:
        raise PreconditionError("a simplicial circle needs at least 3 vertices")
    rank = {v: i for i, v in enumerate(ids)}
    edges = set()
    for i in range(len(ids)):
        a, b = ids[i], ids[(i + 1) % len(ids)]
        edges.add((a, b) if rank[a] < rank[b] else (b, a))
    return SimplicialComplex(list(ids), edges | {(v,) for v in ids})


def cross_polytope_boundary(m: int) -> InvolutionComplex:
    """Boundary of the (m+1)-dimensional cross-polytope (a simplicial
    m-sphere) with the antipodal involution."""
    if m < 1:
        raise PreconditionError("cross-polytope boundary needs dimension >= 1")
    vertices: List = []
    for i in range(m + 1):
        vertices.extend((f"p{i}", f"m{i}"))
    facets = []
    for signs in product("pm", repeat=m + 1):
        facets.append(tuple(f"{s}{i}" for i, s in enumerate(signs)))
    c = SimplicialComplex.from_maximal(vertices, facets)
    swap = {}
    for i in range(m + 1):
        swap[f"p{i}"] = f"m{i}"
        swap[f"m{i}"] = f"p{i}"
    return InvolutionComplex(c, swap)


# -- cyclic group actions and their quotients ----------------------------------


def _iterate(gamma: Dict, v, times: int):
    for _ in range(times):
        v = gamma[v]
    return v


def cyclic_orbit_regularity_failures(
    c: SimplicialComplex, gamma: Dict, order: int
) -> List[str]:
    """Reasons the orbit map of the cyclic action fails to be a simplicial
    quotient with one orbit of simplices over each quotient simplex."""
    failures: List[str] = []
    orbit_of: Dict = {}
    for v in c.vertices:
        orbit = frozenset(_iterate(gamma, v, j) for j in range(order))
        if len(orbit) != order:
            failures.append(f"action is not free at vertex {v!r}")
        orbit_of[v] = orbit
    if failures:
        return failures
    for s in c.simplices:
        keys = [orbit_of[v] for v in s]
        if len(set(keys)) != len(keys):
            failures.append(f"simplex {s} has two vertices in one orbit")
    if failures:
        return failures
    fibers: Dict = {}
    for s in c.simplices:
        fibers.setdefault(frozenset(orbit_of[v] for v in s), set()).add(s)
    for key, fiber in fibers.items():
        some = next(iter(fiber))
        orbit = {c.canon(tuple(_iterate(gamma, v, j) for v in some)) for j in range(order)}
        if fiber != orbit:
            failures.append(
                f"fiber over quotient simplex of {some} has {len(fiber)} simplices, "
                f"expected the orbit of size {len(orbit)}"
            )
    return failures


def cyclic_quotient(
    c: SimplicialComplex, gamma: Dict, order: int
) -> Tuple[SimplicialComplex, SimplicialMap]:
    """Quotient complex of a regular free cyclic action together with the
    orbit projection.  Quotient vertex ids are the smallest orbit members."""
    failures = cyclic_orbit_regularity_failures(c, gamma, order)
    if failures:
        raise PreconditionError("; ".join(failures[:3]))
    rep: Dict = {}
    for v in c.vertices:
        orbit = [_iterate(gamma, v, j) for j in range(order)]
        rep[v] = min(orbit, key=c.rank.__getitem__)
    q_vertices: List = []
    for v in c.vertices:
        if rep[v] == v:
            q_vertices.append(v)
    q_rank = {v: i for i, v in enumerate(q_vertices)}
    q_simplices = set()
    for s in c.simplices:
        q_simplices.add(tuple(sorted({rep[v] for v in s}, key=q_rank.__getitem__)))
    quotient = SimplicialComplex(q_vertices, q_simplices)
    projection = SimplicialMap(c, quotient, rep)
    return quotient, projection


def subdivide_action(
    c: SimplicialComplex, gamma: Dict
) -> Tuple[SimplicialComplex, Dict]:
    """Barycentric subdivision of a simplicial automorphism."""
    rec = barycentric_subdivide(c)
    refined_gamma = {
        s: c.canon(tuple(gamma[v] for v in s)) for s in rec.refined.vertices
    }
    return rec.refined, refined_gamma


def join_sphere(p: int) -> SimplicialComplex:
    """The join of two ``p``-gons: a simplicial 3-sphere whose facets pair an
    edge of the first circle with an edge of the second."""
    if p < 3:
        raise PreconditionError("join of circles needs p >= 3")
    a = [f"a{i}" for i in range(p)]
    b = [f"b{j}" for j in range(p)]
    facets = [
        (a[i], a[(i + 1) % p], b[j], b[(j + 1) % p])
        for i in range(p)
        for j in range(p)
    ]
    return SimplicialComplex.from_maximal(a + b, facets)



def _quotient_after_subdividing(
    c: SimplicialComplex, gamma: Dict, order: int, max_rounds: int
) -> Tuple[SimplicialMap, int]:
    """Subdivide until the orbit map is a simplicial quotient whose projection
    also satisfies the disjoint-closed-stars condition, then project."""
    rounds = 0
    while True:
        if not cyclic_orbit_regularity_failures(c, gamma, order):
            _, projection = cyclic_quotient(c, gamma, order)
            if not check_star_condition(projection):
                return projection, rounds
        if rounds >= max_rounds:
            raise InternalError("orbit map did not become regular within the budget")
        c, gamma = subdivide_action(c, gamma)
        rounds += 1

def lens_covering(p: int, q: int, max_rounds: int = 3) -> Tuple[SimplicialMap, int]:
    """The ``p``-fold cyclic covering of the quotient of the join-of-circles
    3-sphere by the rotation pair (advance the first circle by one, the
    second by ``q``): subdivides barycentrically until the orbit map is a
    simplicial quotient, then returns the projection and the number of
    rounds used."""
    if p < 3:
        raise PreconditionError("the cyclic quotient of the join sphere needs p >= 3")
    if not (1 <= q < p) or gcd(p, q) != 1:
        raise PreconditionError("the rotation parameter must be a unit modulo p")
    c = join_sphere(p)
    gamma = {}
    for i in range(p):
        gamma[f"a{i}"] = f"a{(i + 1) % p}"
        gamma[f"b{i}"] = f"b{(i + q) % p}"
    return _quotient_after_subdividing(c, gamma, p, max_rounds)


def antipodal_sphere_covering(m: int, max_rounds: int = 3) -> Tuple[SimplicialMap, int]:
    """The two-fold covering of real projective m-space by the cross-polytope
    m-sphere, subdivided until the antipodal orbit map is simplicial."""
    ic = cross_polytope_boundary(m)
    c, gamma = ic.complex, dict(ic.involution)
    return _quotient_after_subdividing(c, gamma, 2, max_rounds)
