from fractions import Fraction

import pytest

from prem.complexes import GeometricComplex, SimplicialComplex
from prem.errors import PreconditionError
from prem.generators import cycle_cover
from prem.subdivision import (
    barycentric_subdivide,
    barycentric_subdivide_map,
    relative_derived_subdivide,
    stellar_bisect_edge,
)

from conftest import octahedron, segment_complex, triangle_complex

F = Fraction


def test_barycentric_triangle_counts():
    rec = barycentric_subdivide(triangle_complex())
    assert rec.refined.f_vector() == (7, 12, 6)


def test_barycentric_octahedron_counts():
    rec = barycentric_subdivide(octahedron())
    assert rec.refined.f_vector() == (26, 72, 48)


def test_positions_interpolate_to_base():
    c = triangle_complex()
    rec = barycentric_subdivide(c)
    center = rec.position(c.canon(("a", "b", "c")))
    # The barycentre of the whole triangle.
    assert set(center.coord_map().values()) == {F(1, 3)}


def test_record_compose_matches_double_subdivision():
    c = segment_complex()
    rec1 = barycentric_subdivide(c)
    rec2 = barycentric_subdivide(rec1.refined)
    combined = rec1.compose(rec2)
    assert combined.base is c
    assert combined.refined is rec2.refined
    # Spot check: the midpoint of the first half lies at 1/4 in the base.
    quarter = [
        v
        for v in rec2.refined.vertices
        if combined.position(v).coord_map().get("a") == F(3, 4)
    ]
    assert len(quarter) == 1


def test_barycentric_subdivide_map_stays_simplicial():
    f = cycle_cover(2, 4)
    fm, rec_src, rec_tgt = barycentric_subdivide_map(f)
    assert fm.source.f_vector() == (16, 16)
    assert fm.target.f_vector() == (8, 8)
    assert fm.is_non_degenerate()
    # Refined map projects compatibly with the records.
    for v in fm.source.vertices:
        img = fm.vertex_map[v]
        assert rec_tgt.position(img).support == tuple(
            sorted(
                {f.vertex_map[u] for u in rec_src.position(v).support},
                key=lambda w: f.target.rank[w],
            )
        )


def test_stellar_bisect_edge():
    c = triangle_complex()
    out = stellar_bisect_edge(c, c.canon(("a", "b")), "m")
    assert out.f_vector() == (4, 5, 2)
    assert out.canon(("m", "c")) in out.simplices


def test_relative_derived_unit_segment():
    c = segment_complex()
    g = GeometricComplex(c, {"a": (F(0),), "b": (F(1),)})
    refined, rec = relative_derived_subdivide(g, keep=[], r_sq=F(1, 9))
    edges = refined.complex.simplices_of_dim(1)
    assert len(edges) == 4
    lengths = {refined.simplex_diameter_sq(e) for e in edges}
    assert lengths == {F(1, 16)}


def test_relative_derived_protects_keep():
    c = triangle_complex()
    g = GeometricComplex(
        c, {"a": (F(0), F(0)), "b": (F(1), F(0)), "c": (F(0), F(1))}
    )
    keep = [c.canon(("a", "b"))]
    refined, rec = relative_derived_subdivide(g, keep=keep, r_sq=F(1, 4))
    # Every positive-dimensional simplex of the bare triangle touches the
    # protected edge, so the collar exemption leaves the complex unchanged.
    assert refined.complex.simplices == c.simplices
    assert refined.coords["a"] == (F(0), F(0))
    assert refined.coords["b"] == (F(1), F(0))


def test_relative_derived_refines_away_from_keep():
    c = SimplicialComplex.from_maximal(
        ["a", "b", "c", "d", "e"], [("a", "b", "c"), ("c", "d", "e")]
    )
    g = GeometricComplex(
        c,
        {
            "a": (F(0), F(0)),
            "b": (F(1), F(0)),
            "c": (F(0), F(1)),
            "d": (F(4), F(1)),
            "e": (F(0), F(5)),
        },
    )
    keep = [c.canon(("a", "b"))]
    refined, rec = relative_derived_subdivide(g, keep=keep, r_sq=F(4))
    # Protected edge and its coordinates are bit-identical.
    assert c.canon(("a", "b")) in refined.complex.simplices
    assert refined.coords["a"] == (F(0), F(0))
    assert refined.coords["b"] == (F(1), F(0))
    # The triangle touching the protected edge is exempt and stays whole.
    assert c.canon(("a", "b", "c")) in refined.complex.simplices
    # Everything disjoint from the protected edge obeys the diameter bound.
    for s in refined.complex.simplices:
        if len(s) >= 2 and not ({"a", "b"} & set(s)):
            assert refined.simplex_diameter_sq(s) <= F(4)
    # The far triangle (squared diameter 32) really was refined.
    assert refined.complex.f_vector()[0] > 5
    # Subdivision record maps every new vertex into the base realization.
    for v in refined.complex.vertices:
        assert g.point(rec.position(v)) == refined.coords[v]


def test_relative_derived_rejects_bad_radius():
    c = segment_complex()
    g = GeometricComplex(c, {"a": (F(0),), "b": (F(1),)})
    with pytest.raises(PreconditionError):
        relative_derived_subdivide(g, keep=[], r_sq=F(0))
