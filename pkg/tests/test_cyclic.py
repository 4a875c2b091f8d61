"""Cyclic-object axioms and window cohomology on the bundled algebra models."""

import pytest

from cyclex.algebra import (exterior, exterior_with_curvature, group_algebra,
                            matrix2, rationals)
from cyclex.cochains import AlgebraCochains
from cyclex.cyclic import (assemble_window, check_cyclic_axioms, hc_dimensions,
                           hh_dimensions, hp_dimensions, shift_induced_rank)
from cyclex.linalg import SparseMatrix


def obj(algebra):
    return AlgebraCochains(algebra)


@pytest.mark.parametrize("factory,n_max", [
    (rationals, 5),
    (lambda: group_algebra(2), 4),
    (lambda: exterior(["t"]), 4),
    (exterior_with_curvature, 3),
    (lambda: matrix2(rationals()), 3),
], ids=["Q", "QZ2", "ext-t", "ext-tc", "M2Q"])
def test_cyclic_axioms(factory, n_max):
    report = check_cyclic_axioms(obj(factory()), n_max)
    assert report.ok, report.summary()


def test_tau_powers_are_identity():
    X = obj(exterior(["t"]))
    for k in range(1, 5):
        m = X.tau_matrix(k)
        acc = SparseMatrix.identity(m.rows)
        for _ in range(k + 1):
            acc = m @ acc
        assert acc == SparseMatrix.identity(m.rows)


def test_ground_field_window_dims():
    X = obj(rationals())
    plain = assemble_window(X, 4)
    assert [plain.dim(n) for n in range(5)] == [1, 1, 2, 2, 3]
    norm = assemble_window(X, 4, normalized=True)
    assert [norm.dim(n) for n in range(5)] == [1, 0, 1, 0, 1]


def test_ground_field_cyclic_dimensions():
    X = obj(rationals())
    assert hc_dimensions(X, 5) == [1, 0, 1, 0, 1]
    assert hc_dimensions(X, 5, normalized=True) == [1, 0, 1, 0, 1]
    assert hh_dimensions(X, 5) == [1, 0, 0, 0, 0]


def test_ground_field_periodic_stabilizes():
    out = hp_dimensions(obj(rationals()), 5)
    assert out == {"even": (1, True), "odd": (0, True)}


def test_periodic_needs_room():
    with pytest.raises(ValueError):
        hp_dimensions(obj(rationals()), 4)


def test_ground_field_B_scalars():
    X = obj(rationals())
    assert X.B_matrix(1).entries == {(0, 0): 2}
    assert X.B_matrix(3).entries == {(0, 0): 6}


def test_group_algebra_dimensions():
    X = obj(group_algebra(2))
    assert hh_dimensions(X, 4) == [2, 0, 0, 0]
    assert hc_dimensions(X, 4) == [2, 0, 2, 0]


def test_exterior_needs_weight_cap():
    X = obj(exterior(["t"]))
    with pytest.raises(ValueError):
        assemble_window(X, 3)


def test_exterior_capped_dimensions():
    X = obj(exterior(["t"]))
    assert hc_dimensions(X, 4, weight_cap=1) == [1, 0, 1, 0]
    assert hh_dimensions(X, 4, weight_cap=1) == [2, 0, 0, 0]


def test_shift_is_a_chain_map():
    win = assemble_window(obj(rationals()), 5)
    for n in range(3):
        left = win.boundary(n + 2) @ win.shift_matrix(n)
        right = win.shift_matrix(n + 1) @ win.boundary(n)
        assert left == right


def test_shift_induces_isomorphism_on_ground_field():
    win = assemble_window(obj(rationals()), 5)
    assert shift_induced_rank(win, 0) == 1
    assert shift_induced_rank(win, 1) == 0


def test_group_algebra_periodic():
    out = hp_dimensions(obj(group_algebra(2)), 5)
    assert out == {"even": (2, True), "odd": (0, True)}
