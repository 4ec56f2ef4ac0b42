from fractions import Fraction

from prem import linalg

F = Fraction


def test_rank_and_rref():
    rows = [[F(1), F(2), F(3)], [F(2), F(4), F(6)], [F(0), F(1), F(1)]]
    assert linalg.rank(rows) == 2
    assert linalg.rank([[F(1), F(0)], [F(0), F(1)]]) == 2
    assert linalg.rank([[F(0), F(0)]]) == 0


def test_solve_unique():
    a = [[F(2), F(1)], [F(1), F(3)]]
    b = [F(5), F(10)]
    x = linalg.solve_unique(a, b)
    assert x == [F(1), F(3)]


def test_solve_inconsistent():
    a = [[F(1), F(1)], [F(2), F(2)]]
    assert linalg.solve(a, [F(1), F(3)]) is None


def test_affinely_independent():
    assert linalg.affinely_independent([(F(0), F(0)), (F(1), F(0)), (F(0), F(1))])
    assert not linalg.affinely_independent([(F(0), F(0)), (F(1), F(1)), (F(2), F(2))])
    assert linalg.affinely_independent([(F(3), F(7))])


def test_affine_rank():
    pts = [(F(0), F(0)), (F(1), F(0)), (F(2), F(0)), (F(0), F(1))]
    assert linalg.affine_rank(pts) == 2
    assert linalg.affine_rank(pts[:3]) == 1
    assert linalg.affine_rank(pts[:1]) == 0


def test_point_to_affine_hull_dist_sq():
    hull = [(F(0), F(0)), (F(1), F(0))]
    assert linalg.point_to_affine_hull_dist_sq((F(5), F(3)), hull) == F(9)
    assert linalg.point_to_affine_hull_dist_sq((F(2), F(0)), hull) == F(0)


def test_dist_sq():
    assert linalg.dist_sq((F(0), F(0)), (F(3), F(4))) == F(25)
