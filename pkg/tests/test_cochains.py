"""Derivation calculus on cochains: Lie derivative, contractions, and the
degree-zero comparison maps.  The contraction identities hold on cochains
that kill the unit in every slot past the first; tests draw from that basis."""

import itertools

import pytest

from cyclex.algebra import (Derivation, GradedAlgebra, check_derivation,
                            exterior, exterior_with_curvature, functions,
                            grading_derivation, inner_derivation, matrix2,
                            rationals)
from cyclex.cochains import (AlgebraCochains, Cochain, DegreeZeroInclusion,
                             PlacedCochain, _comparison_sign, cartan_defect,
                             cochain_B, cochain_b, cochain_degen, cochain_diff,
                             cochain_tau, interior_E, interior_e,
                             lie_derivative, placed_B, placed_H, placed_R,
                             placed_b, placed_boundary, placed_h,
                             placed_window_vectors)
from cyclex.cyclic import assemble_window
from cyclex.util import ONE


def dual_numbers():
    return GradedAlgebra("Q[x]/(x2)", ["1", "x"], [0, 0],
                         {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},
                         unit={0: 1})


def x_del_x(a):
    return Derivation(a, 0, {1: {1: ONE}})


def normalized(algebra, maxlvl):
    X = AlgebraCochains(algebra)
    for lvl in range(maxlvl + 1):
        yield from X.normalized_basis(lvl)


def cyc(pc):
    return placed_b(pc).add(placed_B(pc))


def test_x_del_x_is_a_derivation():
    a = dual_numbers()
    assert check_derivation(x_del_x(a)).ok


def test_tau_sign_on_odd_arguments():
    a = exterior(["t"])
    phi = Cochain.dual(a, (1, 1))
    assert cochain_tau(phi) == phi.scale(-1)


def test_diff_single_term():
    a = exterior_with_curvature()
    c = a.labels.index("c")
    t = a.labels.index("t")
    assert cochain_diff(Cochain.dual(a, (c,))) == Cochain.dual(a, (t,))


def test_diff_vanishes_without_differential():
    a = exterior(["t"])
    for tup in itertools.product(range(a.dim), repeat=2):
        assert cochain_diff(Cochain.dual(a, tup)).is_zero()


def test_diff_squares_to_zero_and_commutes():
    a = exterior_with_curvature()
    for lvl in range(3):
        for tup in itertools.product(range(a.dim), repeat=lvl + 1):
            phi = Cochain.dual(a, tup)
            assert cochain_diff(cochain_diff(phi)).is_zero()
            assert cochain_diff(cochain_b(phi)) == cochain_b(cochain_diff(phi))
            if lvl >= 1:
                assert cochain_diff(cochain_B(phi)) == cochain_B(cochain_diff(phi))


def test_grading_lie_derivative_multiplies_by_weight():
    a = exterior_with_curvature()
    D = grading_derivation(a)
    for lvl in range(3):
        for tup in itertools.product(range(a.dim), repeat=lvl + 1):
            phi = Cochain.dual(a, tup)
            m = sum(a.degrees[i] for i in tup)
            assert lie_derivative(D, phi) == phi.scale(m)


RINEHART_CASES = [
    ("dual-numbers", dual_numbers, x_del_x, 3),
    ("ext-t", lambda: exterior(["t"]),
     lambda a: grading_derivation(a), 3),
    ("ext-tc", exterior_with_curvature,
     lambda a: grading_derivation(a), 3),
    ("M2Q-inner", lambda: matrix2(rationals()),
     lambda a: inner_derivation(a, {1: ONE}), 2),
]


@pytest.mark.parametrize("name,make,deriv,maxlvl",
                         RINEHART_CASES, ids=[c[0] for c in RINEHART_CASES])
def test_contraction_homotopy_matches_lie(name, make, deriv, maxlvl):
    a = make()
    D = deriv(a)
    for phi in normalized(a, maxlvl):
        defect = cartan_defect(D, PlacedCochain.single(phi))
        assert defect.is_zero(), f"{name} level {phi.level}: {defect.show()}"


def test_contraction_homotopy_needs_normalization():
    a = dual_numbers()
    phi = Cochain.dual(a, (1, 0))  # unit in an inner slot
    assert not cartan_defect(x_del_x(a), PlacedCochain.single(phi)).is_zero()


@pytest.mark.parametrize("make,maxlvl", [
    (lambda: exterior(["t"]), 4),
    (exterior_with_curvature, 3),
], ids=["ext-t", "ext-tc"])
def test_weight_homotopy_gives_identity(make, maxlvl):
    a = make()
    for phi in normalized(a, maxlvl):
        for m, piece in phi.weight_split().items():
            y = PlacedCochain.single(piece)
            got = cyc(placed_h(y)).add(placed_h(cyc(y)))
            if m == 0:
                assert placed_h(y).is_zero()
            else:
                assert got == y


@pytest.mark.parametrize("make,maxlvl", [
    (lambda: exterior(["t"]), 4),
    (exterior_with_curvature, 3),
], ids=["ext-t", "ext-tc"])
def test_retraction_and_homotopy(make, maxlvl):
    a = make()
    for phi in normalized(a, maxlvl):
        pc = PlacedCochain.single(phi)
        w0 = phi.weight_split().get(0)
        if w0 is not None:
            y = PlacedCochain.single(w0)
            assert placed_R(y) == y  # retraction fixes weight zero: R.I = id
        lhs = pc.sub(placed_R(pc))
        rhs = placed_boundary(placed_H(pc)).add(placed_H(placed_boundary(pc)))
        assert lhs == rhs


def test_comparison_signs():
    assert _comparison_sign(0, 0) == 1
    assert _comparison_sign(1, 1) == -1
    assert _comparison_sign(2, 2) == -1


def test_spread_contraction_needs_level_and_unit():
    a = dual_numbers()
    with pytest.raises(ValueError):
        interior_E(x_del_x(a), Cochain.dual(a, (1,)))
    bare = GradedAlgebra("no-unit", ["x"], [0], {(0, 0): {}})
    D = Derivation(bare, 0, {})
    with pytest.raises(ValueError):
        interior_E(D, Cochain.dual(bare, (0, 0)))


def test_end_contraction_placement():
    a = dual_numbers()
    phi = Cochain.dual(a, (1,))
    out = interior_e(x_del_x(a), phi)
    assert out.level == 1
    # (e_D f)(a_0, a_1) = f(D(a_1) a_0); only (1, x) survives since x.x = 0
    assert out == Cochain(a, 1, {(0, 1): ONE})


def test_degree_zero_inclusion_roundtrip():
    inc = DegreeZeroInclusion(exterior_with_curvature())
    assert inc.sub.dim == 1
    phi = PlacedCochain.single(Cochain.dual(inc.sub, (0, 0)))
    back = inc.project(inc.extend(phi))
    assert back.blocks.keys() == phi.blocks.keys()
    ext = inc.extend(phi)
    for c in ext.blocks.values():
        assert all(all(inc.omega.degrees[i] == 0 for i in t) for t in c.coeffs)


def test_normalized_basis_without_basis_unit():
    X = AlgebraCochains(matrix2(rationals()))
    for n in range(3):
        basis = X.normalized_basis(n)
        assert len(basis) == 4 * 3 ** n
        for c in basis:
            for j in range(n):
                assert cochain_degen(c, j).is_zero()


def test_placed_window_vectors_placement():
    A = functions(range(2))
    X = AlgebraCochains(A)
    win = assemble_window(X, 3)
    phi = Cochain(A, 1, {(0, 1): ONE, (1, 0): -ONE})
    vecs = placed_window_vectors(win, X, PlacedCochain(A, {(1, 0): phi}))
    assert sorted(vecs) == [1]
    assert vecs[1] == {win.position(1, 1, 0, X.encode((0, 1))): ONE,
                       win.position(1, 1, 0, X.encode((1, 0))): -ONE}
    # a column offset moves the slot diagonally and up two degrees
    vecs = placed_window_vectors(win, X, PlacedCochain(A, {(1, 1): phi}))
    assert sorted(vecs) == [3]
    assert set(vecs[3]) == {win.position(3, 2, 1, X.encode((0, 1))),
                            win.position(3, 2, 1, X.encode((1, 0)))}


def test_placed_window_vectors_weight_shift():
    E = exterior(["t"])
    X = AlgebraCochains(E)
    win = assemble_window(X, 2, weight_cap=2)
    # one generator entry has weight -1, landing a level-1 block at degree 0
    phi = Cochain(E, 1, {(1, 0): ONE})
    vecs = placed_window_vectors(win, X, PlacedCochain.single(phi))
    assert sorted(vecs) == [0]
    assert vecs[0] == {win.position(0, 1, 0, X.encode((1, 0))): ONE}
    # weight -2 at level 1 would land below the window
    bad = Cochain(E, 1, {(1, 1): ONE})
    with pytest.raises(ValueError):
        placed_window_vectors(win, X, PlacedCochain.single(bad))
