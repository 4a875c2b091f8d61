"""Hopf data, modular pairs, twisted antipodes, and the tensor-power
cyclic object with its weight truncation."""

from fractions import Fraction

import pytest

from cyclex.algebra import GradedAlgebra, exterior_with_curvature
from cyclex.cyclic import (assemble_window, check_cyclic_axioms,
                           hc_dimensions, truncate_window)
from cyclex.hopf import (BUILTIN_HOPF, HopfData, HopfTensors, check_hopf,
                         check_modular_pair, fun_hopf, group_hopf,
                         hopf_cyclic_object, primitive_hopf, tensor_diff,
                         twisted_antipode)
from cyclex.linalg import SparseMatrix
from cyclex.util import ONE

PAIRS = [
    (lambda: group_hopf(2), "QZ2"),
    (lambda: fun_hopf(3), "funZ3"),
    (primitive_hopf, "ext-psi"),
]


def counit_pair_object(factory):
    H = factory()
    return HopfTensors(H, H.counit, dict(H.algebra.unit))


@pytest.mark.parametrize("name", sorted(BUILTIN_HOPF))
def test_builtin_hopf_axioms(name):
    report = check_hopf(BUILTIN_HOPF[name]())
    assert report.ok, report.summary()


def test_check_hopf_flags_broken_antipode():
    H = group_hopf(2)
    bad = HopfData(H.algebra, H.coproduct, H.counit,
                   {0: {0: ONE}, 1: {1: -ONE}})
    report = check_hopf(bad)
    assert not report.ok
    assert any("antipode law" in name for name, _ in report.failures())


def test_hopf_data_requires_unit():
    no_unit = GradedAlgebra("bare", ["x"], [0], {(0, 0): {}})
    with pytest.raises(ValueError):
        HopfData(no_unit, {}, {}, {})


@pytest.mark.parametrize("factory,_id", PAIRS, ids=[p[1] for p in PAIRS])
def test_counit_unit_modular_pair(factory, _id):
    H = factory()
    report = check_modular_pair(H, H.counit, dict(H.algebra.unit))
    assert report.ok, report.summary()


def test_sign_grouplike_modular_pair():
    H = fun_hopf(2)
    sigma = {0: ONE, 1: -ONE}
    report = check_modular_pair(H, H.counit, sigma)
    assert report.ok, report.summary()


def test_corrupted_grouplike_reported():
    H = fun_hopf(2)
    report = check_modular_pair(H, H.counit, {0: ONE, 1: Fraction(2)})
    assert not report.ok
    assert any("splits as sigma(x)sigma" in name
               for name, _ in report.failures())


def test_cyclic_object_gate_rejects_bad_pair():
    H = fun_hopf(2)
    with pytest.raises(ValueError):
        hopf_cyclic_object(H, H.counit, {0: ONE, 1: Fraction(2)})


def test_cyclic_object_gate_accepts_good_pair():
    H = group_hopf(2)
    X = hopf_cyclic_object(H, H.counit, dict(H.algebra.unit), check_levels=2)
    assert X.dim(2) == 4


@pytest.mark.parametrize("factory,_id", PAIRS, ids=[p[1] for p in PAIRS])
def test_twist_by_counit_is_antipode(factory, _id):
    H = factory()
    tw = twisted_antipode(H, H.counit)
    for k in range(H.algebra.dim):
        assert tw.get(k, {}) == H.antipode.get(k, {})


def test_fun3_twisted_antipode_closed_form():
    # delta = evaluation at r sends e_s to e_{(r-s) mod 3}: the convolution
    # sum S(e_a) delta(e_{s-a}) keeps only a = s - r.
    H = fun_hopf(3)
    for r in range(3):
        tw = twisted_antipode(H, {r: ONE})
        for s in range(3):
            assert tw[s] == {(r - s) % 3: ONE}


def test_tau1_values():
    Xg = counit_pair_object(lambda: group_hopf(2))
    assert Xg.apply_tau(1, {1: ONE}) == {1: ONE}
    Xp = counit_pair_object(primitive_hopf)
    assert Xp.apply_tau(1, {1: ONE}) == {1: -ONE}


def test_face_then_degeneracy_is_identity():
    for factory, _ in PAIRS:
        X = counit_pair_object(factory)
        for idx in range(X.dim(1)):
            v = {idx: ONE}
            assert X.apply_degen(2, 0, X.apply_face(1, 0, v)) == v


@pytest.mark.parametrize("factory,_id", PAIRS, ids=[p[1] for p in PAIRS])
def test_cyclic_axioms_to_level_four(factory, _id):
    report = check_cyclic_axioms(counit_pair_object(factory), 4)
    assert report.ok, report.summary()


def test_tensor_diff_leibniz_sign():
    A = exterior_with_curvature("psi", "c")
    H = HopfData(A, {0: {(0, 0): ONE}}, {0: ONE}, {0: {0: ONE}})
    out = tensor_diff(H, {(1, 1): ONE})
    assert out == {(2, 1): ONE, (1, 2): -ONE}
    assert tensor_diff(H, {(1,): ONE}) == {(2,): ONE}
    assert tensor_diff(H, {(): ONE}) == {}
    assert tensor_diff(H, tensor_diff(H, {(1, 1, 1): ONE})) == {}


def test_diff_vanishes_without_differential():
    X = counit_pair_object(primitive_hopf)
    assert not X.has_diff
    assert X.apply_diff(2, {3: ONE}) == {}


def test_primitive_truncated_cohomology():
    X = counit_pair_object(primitive_hopf)
    assert hc_dimensions(X, 5, weight_cap=1) == [1, 0, 2, 0, 2]
    assert hc_dimensions(X, 5, weight_cap=0) == [1, 0, 1, 0, 1]
    assert hc_dimensions(X, 5) == [1, 0, 2, 0, 3]


def test_group2_tensor_cohomology():
    X = counit_pair_object(lambda: group_hopf(2))
    assert hc_dimensions(X, 5) == [1, 0, 1, 0, 1]


def test_truncation_past_top_weight_is_identity():
    X = counit_pair_object(primitive_hopf)
    full = assemble_window(X, 4)
    wide = truncate_window(full, 10)
    assert [wide.dim(n) for n in range(5)] == [full.dim(n) for n in range(5)]
    with pytest.raises(ValueError):
        truncate_window(wide, 12)
    with pytest.raises(ValueError):
        truncate_window(full, -1)


def test_truncation_projection_is_chain_map():
    X = counit_pair_object(primitive_hopf)
    full = assemble_window(X, 4)
    trunc = truncate_window(full, 1)

    def proj(n):
        P = SparseMatrix(trunc.dim(n), full.dim(n))
        for pos, key in enumerate(full.basis(n)):
            tpos = trunc._index[n].get(key)
            if tpos is not None:
                P[tpos, pos] = ONE
        return P

    for n in range(4):
        lhs = proj(n + 1) @ full.boundary(n)
        rhs = trunc.boundary(n) @ proj(n)
        assert (lhs - rhs).is_zero()


def test_iterated_coproduct_needs_a_leg():
    H = group_hopf(2)
    with pytest.raises(ValueError):
        H.legs({0: ONE}, 0)
