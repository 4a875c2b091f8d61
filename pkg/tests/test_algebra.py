from fractions import Fraction

import pytest

from cyclex.algebra import (GradedAlgebra, MultiplierPair, Trace, adjoin_unit,
                            check_derivation, check_graded_algebra,
                            check_multiplier, check_multiplier_trace,
                            check_trace, differential_derivation, exterior,
                            exterior_with_curvature, functions,
                            grading_derivation, group_algebra,
                            inner_derivation, matrix2, matrix2_trace,
                            multiplier_from_element, rationals, tensor)

BUILDERS = [
    rationals(),
    functions(["p", "q"]),
    functions(["0", "1", "2"]),
    exterior(["t"]),
    exterior(["t1", "t2"]),
    exterior_with_curvature(),
    group_algebra(2),
    group_algebra(3),
    tensor(functions(["p", "q"]), exterior(["v"])),
    matrix2(exterior(["t"])),
    adjoin_unit(exterior(["t"])),
]


@pytest.mark.parametrize("alg", BUILDERS, ids=lambda a: a.name)
def test_builders_pass_axioms(alg):
    rep = check_graded_algebra(alg)
    assert rep.ok, rep.summary()


def test_axiom_checker_catches_degree_violation():
    # u has degree 1 but u*u lands on the degree-0 unit: 1+1 != 0
    off = GradedAlgebra("offdeg", ["1", "u"], [0, 1],
                        {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1},
                         (1, 1): {0: 1}},
                        unit={0: 1})
    rep = check_graded_algebra(off)
    assert not rep.ok
    assert any("degree" in n for n, _ in rep.failures())


def test_axiom_checker_catches_nonassociative_product():
    # e*e = f, e*f = e, all else zero: (e*e)*e = f*e = 0 but e*(e*e) = e*f = e
    products = {(0, 0): {1: Fraction(1)}, (0, 1): {0: Fraction(1)}}
    bad = GradedAlgebra("nonassoc", ["e", "f"], [0, 0], products)
    rep = check_graded_algebra(bad)
    assert not rep.ok
    assert any(n == "associativity" for n, _ in rep.failures())


def test_axiom_checker_catches_broken_leibniz():
    # dt = c but d(tc) set wrong
    alg = exterior_with_curvature()
    alg.diff[3] = {2: Fraction(1)}  # d(tc) should be 0, and c has wrong degree
    rep = check_graded_algebra(alg)
    assert not rep.ok


def test_exterior_signs():
    e2 = exterior(["a", "b"])
    a = e2.basis_vec(e2.index("a"))
    b = e2.basis_vec(e2.index("b"))
    ab = e2.mul(a, b)
    ba = e2.mul(b, a)
    assert ab == {e2.index("ab"): Fraction(1)}
    assert ba == {e2.index("ab"): Fraction(-1)}
    assert e2.mul(a, a) == {}


def test_tensor_koszul_sign():
    t = tensor(exterior(["a"]), exterior(["b"]))
    one_b = t.basis_vec(t.index("1|b"))
    a_one = t.basis_vec(t.index("a|1"))
    assert t.mul(one_b, a_one) == {t.index("a|b"): Fraction(-1)}
    assert t.mul(a_one, one_b) == {t.index("a|b"): Fraction(1)}


def test_tensor_differential():
    t = tensor(exterior_with_curvature(), exterior_with_curvature(gen="s", curv="e"))
    rep = check_graded_algebra(t)
    assert rep.ok, rep.summary()
    # d(t|s) = c|s - t|e
    ts = t.index("t|s")
    assert t.d(t.basis_vec(ts)) == {t.index("c|s"): Fraction(1),
                                    t.index("t|e"): Fraction(-1)}


def test_degree_of():
    e = exterior(["a", "b"])
    assert e.degree_of({}) is None
    assert e.degree_of(e.basis_vec(e.index("ab"))) == 2
    with pytest.raises(ValueError):
        e.degree_of({0: Fraction(1), 1: Fraction(1)})


def test_unsplit_table_matches_products():
    alg = matrix2(exterior(["t"]))
    for k in range(alg.dim):
        for (i, j, c) in alg.unsplit(k):
            assert alg.mul_basis(i, j).get(k) == c
    total = sum(len(alg.unsplit(k)) for k in range(alg.dim))
    assert total == sum(len(v) for v in alg.products.values())


def test_grading_derivation():
    alg = exterior_with_curvature()
    D = grading_derivation(alg)
    rep = check_derivation(D)
    assert rep.ok, rep.summary()
    assert D.apply(alg.basis_vec(3)) == {3: Fraction(3)}


def test_differential_derivation():
    alg = exterior_with_curvature()
    D = differential_derivation(alg)
    assert D.degree == 1
    rep = check_derivation(D)
    assert rep.ok, rep.summary()


def test_inner_derivation_matrix_rotation():
    alg = matrix2(rationals())
    g = {alg.index("E12.1"): Fraction(1), alg.index("E21.1"): Fraction(-1)}
    D = inner_derivation(alg, g)
    rep = check_derivation(D)
    assert rep.ok, rep.summary()
    e11 = alg.basis_vec(alg.index("E11.1"))
    assert D.apply(e11) == {alg.index("E12.1"): Fraction(-1),
                            alg.index("E21.1"): Fraction(-1)}
    # inner derivations kill the unit
    assert D.apply(alg.unit) == {}


def test_inner_derivation_odd_element():
    # graded-commutative algebras have no inner derivations at all
    ext = exterior(["a", "b"])
    D0 = inner_derivation(ext, ext.basis_vec(ext.index("a")))
    assert D0.images == {}
    # an odd matrix makes them visible
    alg = matrix2(exterior(["t"]))
    g = alg.basis_vec(alg.index("E12.t"))
    D = inner_derivation(alg, g)
    assert D.degree == 1
    rep = check_derivation(D)
    assert rep.ok, rep.summary()
    assert D.apply(alg.basis_vec(alg.index("E21.1"))) == {
        alg.index("E11.t"): Fraction(1), alg.index("E22.t"): Fraction(-1)}


def test_trace_on_exterior():
    alg = exterior(["v"])
    tr = Trace(1, {alg.index("v"): Fraction(1)})
    rep = check_trace(alg, tr)
    assert rep.ok, rep.summary()


def test_trace_weight_mismatch_detected():
    alg = exterior(["v"])
    tr = Trace(0, {alg.index("v"): Fraction(1)})
    rep = check_trace(alg, tr)
    assert not rep.ok


def test_trace_not_closed_detected():
    alg = exterior_with_curvature()
    tr = Trace(2, {alg.index("c"): Fraction(1)})
    rep = check_trace(alg, tr)
    assert not rep.ok
    assert any("closed" in n for n, _ in rep.failures())


def test_group_algebra_trace():
    alg = group_algebra(2)
    tr = Trace(0, {0: Fraction(1)})
    rep = check_trace(alg, tr)
    assert rep.ok, rep.summary()


def test_multiplier_from_element():
    alg = matrix2(rationals())
    m = {alg.index("E12.1"): Fraction(1)}
    pair = multiplier_from_element(alg, m)
    rep = check_multiplier(pair)
    assert rep.ok, rep.summary()
    tr = matrix2_trace(rationals(), Trace(0, {0: Fraction(1)}))
    rep2 = check_multiplier_trace(tr, pair)
    assert rep2.ok, rep2.summary()


def test_multiplier_checker_catches_fake():
    alg = functions(["p", "q"])
    # left action swaps the idempotents: not a module map
    swap = {0: {1: Fraction(1)}, 1: {0: Fraction(1)}}
    pair = MultiplierPair(alg, 0, swap, swap)
    rep = check_multiplier(pair)
    assert not rep.ok


def test_matrix2_trace_values():
    alg = matrix2(exterior(["v"]))
    tr = matrix2_trace(exterior(["v"]), Trace(1, {1: Fraction(1)}))
    assert tr.pair(alg.basis_vec(alg.index("E11.v"))) == 1
    assert tr.pair(alg.basis_vec(alg.index("E22.v"))) == 1
    assert tr.pair(alg.basis_vec(alg.index("E12.v"))) == 0
    rep = check_trace(alg, tr)
    assert rep.ok, rep.summary()


def test_adjoin_unit():
    plus = adjoin_unit(exterior(["t"]))
    assert plus.dim == 3
    assert plus.is_unital
    t = plus.basis_vec(plus.index("t"))
    assert plus.mul(plus.unit, t) == t
