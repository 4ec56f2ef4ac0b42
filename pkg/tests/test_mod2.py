from fractions import Fraction

import pytest

from prem.complexes import InvolutionComplex, SimplicialComplex
from prem.errors import PreconditionError
from prem.generators import cross_polytope_boundary, cycle_complex
from prem.mod2 import (
    CochainSpace,
    component_report,
    quotient_by_free_involution,
    quotient_regularity_failures,
    w1_cocycle,
    yang_index,
)

from conftest import complex_from_facets, octahedron

F = Fraction


def antipodal_cycle(n: int) -> InvolutionComplex:
    c = cycle_complex(n)
    half = n // 2
    t = {f"n{i}": f"n{(i + half) % n}" for i in range(n)}
    return InvolutionComplex(c, t)


def test_regularity_hexagon_passes():
    assert quotient_regularity_failures(antipodal_cycle(6)) == []


def test_regularity_square_fails():
    # All four edges of the square share one orbit key, so the orbit map
    # identifies too much to stay simplicial.
    assert quotient_regularity_failures(antipodal_cycle(4)) != []


def test_quotient_hexagon_no_subdivision():
    qr = quotient_by_free_involution(antipodal_cycle(6))
    assert qr.subdivision_rounds == 0
    assert qr.quotient.f_vector() == (3, 3)


def test_quotient_square_subdivides_once():
    qr = quotient_by_free_involution(antipodal_cycle(4))
    assert qr.subdivision_rounds == 1
    assert qr.quotient.f_vector() == (4, 4)
    # Projection is two-to-one onto representatives.
    fibers = {}
    for v, r in qr.projection.items():
        fibers.setdefault(r, set()).add(v)
    assert all(len(f) == 2 for f in fibers.values())


def test_quotient_octahedron_is_projective_plane():
    qr = quotient_by_free_involution(cross_polytope_boundary(2))
    assert qr.subdivision_rounds == 1
    assert qr.quotient.f_vector() == (13, 36, 24)
    assert qr.quotient.is_closed_pseudomanifold()


def test_quotient_rejects_fixed_simplex():
    c = complex_from_facets([("a", "b")])
    with pytest.raises(PreconditionError):
        quotient_by_free_involution(InvolutionComplex(c, {"a": "b", "b": "a"}))


def test_w1_hexagon_values():
    qr = quotient_by_free_involution(antipodal_cycle(6))
    w = w1_cocycle(qr)
    q = qr.quotient
    # Two quotient edges lift straight, the third lift crosses the deck swap.
    assert w[q.canon(("n0", "n1"))] == 0
    assert w[q.canon(("n1", "n2"))] == 0
    assert w[q.canon(("n0", "n2"))] == 1


def test_yang_circle_is_one():
    qr = quotient_by_free_involution(antipodal_cycle(6))
    assert yang_index(qr.quotient, w1_cocycle(qr)) == 1


def test_yang_ladder_spheres():
    # Quotients of the antipodal 1- and 2-sphere: projective line and plane.
    expected = {1: 1, 2: 2}
    for m, want in expected.items():
        qr = quotient_by_free_involution(cross_polytope_boundary(m))
        assert yang_index(qr.quotient, w1_cocycle(qr)) == want


def test_yang_trivial_cover_is_zero():
    # Two disjoint triangles swapped by the involution: trivial double cover.
    c = complex_from_facets(
        [("a", "b"), ("b", "c"), ("c", "a"), ("x", "y"), ("y", "z"), ("z", "x")]
    )
    t = {"a": "x", "b": "y", "c": "z", "x": "a", "y": "b", "z": "c"}
    qr = quotient_by_free_involution(InvolutionComplex(c, t))
    w = w1_cocycle(qr)
    assert set(w.values()) == {0}
    assert yang_index(qr.quotient, w) == 0


def test_cochain_coboundary_of_potential_is_cocycle():
    c = octahedron()
    space = CochainSpace(c)
    # d(indicator of vertex "n") is supported on the edges at "n".
    dphi = space.pack(1, {e: 1 for e in c.simplices_of_dim(1) if "n" in e})
    assert space.is_cocycle(dphi, 1)
    assert space.is_coboundary(dphi, 1)


def test_cochain_single_edge_is_not_cocycle_on_sphere():
    c = octahedron()
    space = CochainSpace(c)
    bits = space.pack(1, {c.canon(("a", "b")): 1})
    assert not space.is_cocycle(bits, 1)


def test_cochain_circle_generator_not_coboundary():
    circle = complex_from_facets([("a", "b"), ("b", "c"), ("c", "a")])
    space = CochainSpace(circle)
    bits = space.pack(1, {circle.canon(("a", "b")): 1})
    assert space.is_cocycle(bits, 1)
    assert not space.is_coboundary(bits, 1)


def test_cup_with_unit_is_identity():
    qr = quotient_by_free_involution(cross_polytope_boundary(2))
    space = CochainSpace(qr.quotient)
    w_bits = space.pack(1, w1_cocycle(qr))
    assert space.cup(space.ones(0), 0, w_bits, 1) == w_bits


def test_cup_square_matches_direct_power():
    # Two routes to w \smile w must agree bit for bit.
    qr = quotient_by_free_involution(cross_polytope_boundary(2))
    space = CochainSpace(qr.quotient)
    w_bits = space.pack(1, w1_cocycle(qr))
    assert space.cup(w_bits, 1, w_bits, 1) == space.one_cocycle_power(w_bits, 2)
    assert space.one_cocycle_power(w_bits, 2) != 0
    assert not space.is_coboundary(space.one_cocycle_power(w_bits, 2), 2)


def test_component_report():
    rep = component_report(antipodal_cycle(6))
    assert len(rep.components) == 1
    assert rep.invariant_flags == [True]
    assert rep.invariant_count == 1
    assert rep.parity == 1

    c = complex_from_facets([("a", "b"), ("x", "y")])
    t = {"a": "x", "b": "y", "x": "a", "y": "b"}
    rep = component_report(InvolutionComplex(c, t))
    assert len(rep.components) == 2
    assert rep.invariant_count == 0
    assert rep.parity == 0
