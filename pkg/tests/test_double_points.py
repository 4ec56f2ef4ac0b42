import pytest

from prem.complexes import SimplicialComplex
from prem.double_points import (
    build_double_point_complex,
    check_star_condition,
    double_point_model,
    identified_vertex_pairs,
)
from prem.errors import DegenerateMap, ModelInvalid
from prem.generators import cycle_cover, figure_eight_map, fold_path_map
from prem.maps import SimplicialMap
from prem.mod2 import component_report


def test_identified_pairs_triple_cover():
    f = cycle_cover(3, 3)
    pairs = identified_vertex_pairs(f)
    # Nine source vertices in orbits of three: 6 ordered pairs per orbit.
    assert len(pairs) == 18
    assert ("n0", "n3") in pairs and ("n3", "n0") in pairs
    assert all(u != v for u, v in pairs)


def test_star_condition_on_covers():
    assert check_star_condition(cycle_cover(3, 3)) == []
    assert check_star_condition(cycle_cover(2, 4)) == []


def test_star_condition_violation():
    # Map both endpoints of a path onto one edge endpoint pairwise: the path
    # a-b-c with a,c identified has neighboring stars through b.
    src = SimplicialComplex.from_maximal(["a", "b", "c"], [("a", "b"), ("b", "c")])
    tgt = SimplicialComplex.from_maximal(["x", "y"], [("x", "y")])
    f = SimplicialMap(src, tgt, {"a": "x", "b": "y", "c": "x"})
    assert check_star_condition(f) == [("a", "c"), ("c", "a")]


def test_pair_model_triple_cover():
    model = double_point_model(cycle_cover(3, 3))
    assert model.subdivision_rounds == 0
    assert model.complex.f_vector() == (18, 18)
    rep = component_report(model.pair_complex)
    assert len(rep.components) == 2
    assert rep.invariant_count == 0


def test_pair_model_double_cover():
    model = double_point_model(cycle_cover(2, 4))
    assert model.subdivision_rounds == 0
    assert model.complex.f_vector() == (8, 8)
    rep = component_report(model.pair_complex)
    assert len(rep.components) == 1
    assert rep.invariant_count == 1


def test_pair_model_cells_are_disjoint_pairs():
    model = double_point_model(cycle_cover(2, 4))
    for e in model.complex.simplices_of_dim(1):
        (u1, v1), (u2, v2) = e
        assert {u1, u2}.isdisjoint({v1, v2})
        # Edges project to genuine source edges on both coordinates.
        src = model.map.source
        assert src.canon((u1, u2)) in src.simplices
        assert src.canon((v1, v2)) in src.simplices


def test_involution_is_free_and_swaps():
    model = double_point_model(cycle_cover(3, 3))
    t = model.involution
    for (u, v) in model.complex.vertices:
        assert t[(u, v)] == (v, u)
        assert t[(u, v)] != (u, v)
    assert model.pair_complex.is_free_on_simplices()


def test_degenerate_map_rejected():
    src = SimplicialComplex.from_maximal(["a", "b"], [("a", "b")])
    tgt = SimplicialComplex.from_maximal(["x"], [("x",)])
    f = SimplicialMap(src, tgt, {"a": "x", "b": "x"})
    with pytest.raises(DegenerateMap):
        double_point_model(f)
    with pytest.raises(DegenerateMap):
        build_double_point_complex(f)


def test_fold_stays_unmodellable():
    # A fold map keeps identified vertices adjacent at every depth.
    with pytest.raises(ModelInvalid):
        double_point_model(fold_path_map())


def test_figure_eight_single_double_point():
    # The two passages through the wedge image lie on different source
    # circles, so their stars are already disjoint: the pair space is two
    # swapped points over the one transverse double point.
    model = double_point_model(figure_eight_map())
    assert model.subdivision_rounds == 0
    assert model.complex.f_vector() == (2,)
    rep = component_report(model.pair_complex)
    assert len(rep.components) == 2
    assert rep.invariant_count == 0


def test_build_rejects_star_violation_directly():
    src = SimplicialComplex.from_maximal(["a", "b", "c"], [("a", "b"), ("b", "c")])
    tgt = SimplicialComplex.from_maximal(["x", "y"], [("x", "y")])
    f = SimplicialMap(src, tgt, {"a": "x", "b": "y", "c": "x"})
    with pytest.raises(ModelInvalid):
        build_double_point_complex(f)
