"""Hopf actions, invariant traces, the characteristic map, cocycle
twisting with its 2x2 amplification, the insertion operator, and
coboundary certificates."""

import random
from fractions import Fraction

import pytest

from cyclex.algebra import (Trace, exterior, exterior_with_curvature,
                            functions, matrix2, matrix2_trace, rationals)
from cyclex.charmap import (HopfAction, amplify_action, amplify_twist,
                            check_action, check_invariant_trace, check_twist,
                            chi, chi_level_matrix, chi_window_matrix,
                            coboundary_certificate, corner_embedding_pullback,
                            interior_insertion, insertion_lie, trivial_action,
                            twist_action, verify_certificate,
                            window_rank_evidence)
from cyclex.cochains import (AlgebraCochains, Cochain, cochain_B, cochain_b,
                             cochain_diff)
from cyclex.cyclic import assemble_window
from cyclex.hopf import HopfTensors, group_hopf, primitive_hopf
from cyclex.util import ONE

E_DIAG = {0: ONE, 3: -ONE}  # diag(1, -1) in M2(Q)


def translation_model():
    """Q[Z/2] translating Fun(Z/2); counting trace of weight 0."""
    H = group_hopf(2)
    W = functions(range(2))
    table = {(k, s): {(s - k) % 2: ONE} for k in range(2) for s in range(2)}
    return HopfAction(H, W, table), Trace(0, {0: ONE, 1: ONE})


def conjugation_model():
    """Q[Z/2] conjugating M2(Q) by diag(1,-1); matrix trace."""
    H = group_hopf(2)
    M = matrix2(rationals())
    table = {}
    for s in range(4):
        table[0, s] = {s: ONE}
        table[1, s] = M.mul(M.mul(E_DIAG, {s: ONE}), E_DIAG)
    return HopfAction(H, M, table), Trace(0, {0: ONE, 3: ONE})


def derivation_model():
    """Primitive psi acting on Ext[t1,t2] as the odd derivation
    t1 -> t1t2; trace picks the scalar part, weight 0."""
    H = primitive_hopf()
    W = exterior(["t1", "t2"])
    table = {(0, ai): {ai: ONE} for ai in range(4)}
    table[1, 1] = {3: ONE}
    return HopfAction(H, W, table), Trace(0, {0: ONE})


def conjugation_twist():
    return {0: dict(matrix2(rationals()).unit), 1: dict(E_DIAG)}


def counit_sigma(act):
    return act.hopf.counit, dict(act.hopf.algebra.unit)


MODELS = [
    (translation_model, "translation"),
    (conjugation_model, "conjugation"),
    (derivation_model, "derivation"),
]


@pytest.mark.parametrize("factory,_id", MODELS, ids=[m[1] for m in MODELS])
def test_model_action_axioms(factory, _id):
    act, _ = factory()
    report = check_action(act)
    assert report.ok, report.summary()


@pytest.mark.parametrize("factory,_id", MODELS, ids=[m[1] for m in MODELS])
def test_model_invariant_trace(factory, _id):
    act, tr = factory()
    delta, sigma = counit_sigma(act)
    report = check_invariant_trace(act, tr, delta, sigma)
    assert report.ok, report.summary()


def test_trivial_action_passes():
    for H, W in ((group_hopf(2), functions(range(2))),
                 (primitive_hopf(), matrix2(rationals()))):
        report = check_action(trivial_action(H, W))
        assert report.ok, report.summary()


def test_action_checker_flags_broken_leibniz():
    H = group_hopf(2)
    W = functions(range(2))
    # u acting as diag(1,-1) respects the product rule of u but not
    # the coproduct-Leibniz rule or unit absorption
    table = {(0, 0): {0: ONE}, (0, 1): {1: ONE},
             (1, 0): {0: ONE}, (1, 1): {1: -ONE}}
    report = check_action(HopfAction(H, W, table))
    assert not report.ok
    assert any("coproduct-Leibniz" in name for name, _ in report.failures())


def test_trace_checker_flags_nonclosed():
    W = exterior_with_curvature()
    act = trivial_action(group_hopf(2), W)
    delta, sigma = counit_sigma(act)
    report = check_invariant_trace(act, Trace(2, {2: ONE}), delta, sigma)
    assert not report.ok
    failed = dict(report.failures())
    assert "closed" in failed
    assert "d(t)" in failed["closed"]


# -- characteristic map ------------------------------------------------------


def test_chi_level_zero_is_the_trace():
    act, tr = translation_model()
    c = chi(act, tr, {(): ONE})
    assert c.level == 0
    assert c.coeffs == {(0,): ONE, (1,): ONE}


def test_chi_trivial_action_multiplies_arguments():
    H = group_hopf(2)
    W = functions(range(2))
    act = trivial_action(H, W)
    tr = Trace(0, {0: ONE, 1: ONE})
    eps = H.counit
    for h1 in range(2):
        for h2 in range(2):
            c = chi(act, tr, {(h1, h2): ONE})
            for a0 in range(2):
                for a1 in range(2):
                    for a2 in range(2):
                        prod = W.mul(W.mul({a0: ONE}, {a1: ONE}), {a2: ONE})
                        want = (eps.get(h1, Fraction(0))
                                * eps.get(h2, Fraction(0)) * tr.pair(prod))
                        assert c.coeffs.get((a0, a1, a2), Fraction(0)) == want


def test_chi_rejects_mixed_tensor_lengths():
    act, tr = translation_model()
    with pytest.raises(ValueError):
        chi(act, tr, {(0,): ONE, (0, 1): ONE})


@pytest.mark.parametrize("factory,top", [
    (translation_model, 4),
    (conjugation_model, 3),
    (derivation_model, 3),
], ids=["translation", "conjugation", "derivation"])
def test_chi_is_a_map_of_cyclic_modules(factory, top):
    act, tr = factory()
    delta, sigma = counit_sigma(act)
    X = HopfTensors(act.hopf, delta, sigma)
    dual = AlgebraCochains(act.omega)
    chis = {k: chi_level_matrix(act, tr, k) for k in range(top + 2)}
    for k in range(top + 1):
        for i in range(k + 2):
            assert (dual.face_matrix(k, i) @ chis[k]
                    == chis[k + 1] @ X.face_matrix(k, i)), (k, i)
    for k in range(top):
        for i in range(k + 1):
            assert (dual.degen_matrix(k + 1, i) @ chis[k + 1]
                    == chis[k] @ X.degen_matrix(k + 1, i)), (k, i)
    for k in range(top + 1):
        assert dual.tau_matrix(k) @ chis[k] == chis[k] @ X.tau_matrix(k), k


def test_chi_vanishes_above_the_trace_weight():
    # psi acts nontrivially, yet every tensor containing psi has weight
    # above the trace weight and must map to the zero cochain
    act, tr = derivation_model()
    assert act.apply_basis(1, 1) == {3: ONE}
    for tens in [(1,), (0, 1), (1, 0), (1, 1)]:
        assert chi(act, tr, {tens: ONE}).is_zero(), tens
    assert not chi(act, tr, {(0, 0): ONE}).is_zero()


def test_chi_window_matrix_rejects_degrees_below_the_trace_weight():
    H = group_hopf(2)
    W = exterior(["t"])
    act = trivial_action(H, W)
    tr = Trace(1, {1: ONE})
    cw = assemble_window(HopfTensors(H, H.counit, dict(H.algebra.unit)), 3)
    aw = assemble_window(AlgebraCochains(W), 3, weight_cap=2)
    with pytest.raises(ValueError):
        chi_window_matrix(act, tr, cw, aw, 0)


# -- cocycle twisting --------------------------------------------------------


def test_conjugation_twist_passes_all_laws():
    act, _ = conjugation_model()
    rho = conjugation_twist()
    _, sigma = counit_sigma(act)
    report = check_twist(act, rho, rho, sigma)
    assert report.ok, report.summary()


def test_twisting_conjugation_yields_the_trivial_action():
    act, tr = conjugation_model()
    rho = conjugation_twist()
    delta, sigma = counit_sigma(act)
    twisted = twist_action(act, rho, rho, sigma)
    assert check_action(twisted).ok
    assert twisted.table == trivial_action(act.hopf, act.omega).table
    assert check_invariant_trace(twisted, tr, delta, sigma).ok


def test_twisting_the_trivial_action_yields_conjugation():
    act, _ = conjugation_model()
    rho = conjugation_twist()
    _, sigma = counit_sigma(act)
    triv = trivial_action(act.hopf, act.omega)
    assert twist_action(triv, rho, rho, sigma).table == act.table


def test_twist_by_counit_is_the_identity():
    for factory in (translation_model, conjugation_model):
        act, _ = factory()
        H = act.hopf
        _, sigma = counit_sigma(act)
        rho = {hi: {k: e * c for k, c in act.omega.unit.items()}
               for hi in range(H.algebra.dim)
               if (e := H.counit.get(hi, Fraction(0)))}
        assert twist_action(act, rho, rho, sigma).table == act.table


def test_twist_gate_names_the_violated_law():
    act, _ = conjugation_model()
    _, sigma = counit_sigma(act)
    bad = {0: dict(E_DIAG), 1: dict(E_DIAG)}
    with pytest.raises(ValueError) as err:
        twist_action(act, bad, bad, sigma)
    assert "dr4" in str(err.value)


# -- 2x2 amplification -------------------------------------------------------


def test_amplified_counit_twist_stays_trivial():
    act, _ = conjugation_model()
    H = act.hopf
    unit_rho = {hi: {k: e * c for k, c in act.omega.unit.items()}
                for hi in range(H.algebra.dim)
                if (e := H.counit.get(hi, Fraction(0)))}
    rp2, rm2 = amplify_twist(act, unit_rho, unit_rho)
    m2 = matrix2(act.omega)
    want = {hi: {k: e * c for k, c in m2.unit.items()}
            for hi in range(H.algebra.dim)
            if (e := H.counit.get(hi, Fraction(0)))}
    assert rp2 == want and rm2 == want


def test_amplified_twist_and_corner_pullbacks():
    act, tr = conjugation_model()
    rho = conjugation_twist()
    delta, sigma = counit_sigma(act)
    twisted = twist_action(act, rho, rho, sigma)

    m2 = matrix2(act.omega)
    act2 = amplify_action(act, m2)
    assert check_action(act2).ok
    rp2, rm2 = amplify_twist(act, rho, rho)
    report = check_twist(act2, rp2, rm2, sigma)
    assert report.ok, report.summary()

    big = twist_action(act2, rp2, rm2, sigma)
    tr2 = matrix2_trace(act.omega, tr)
    assert check_invariant_trace(big, tr2, delta, sigma).ok

    hdim = act.hopf.algebra.dim
    for k in range(3):
        for col in range(hdim ** k):
            t, idx = [], col
            for _ in range(k):
                t.append(idx % hdim)
                idx //= hdim
            t = tuple(reversed(t))
            c2 = chi(big, tr2, {t: ONE})
            assert corner_embedding_pullback(c2, act.omega, 1) \
                == chi(act, tr, {t: ONE}), t
            assert corner_embedding_pullback(c2, act.omega, 0) \
                == chi(twisted, tr, {t: ONE}), t


# -- insertion operator ------------------------------------------------------


def _rand_cochain(rng, A, k, pool=None, n=8):
    pool = list(range(A.dim)) if pool is None else pool
    coeffs = {}
    for _ in range(n):
        t = (rng.randrange(A.dim),) + tuple(rng.choice(pool) for _ in range(k))
        coeffs[t] = coeffs.get(t, Fraction(0)) + Fraction(rng.randrange(-3, 4))
    return Cochain(A, k, {t: c for t, c in coeffs.items() if c})


INSERT_BASES = [
    (rationals, "scalars"),
    (lambda: exterior(["theta"]), "one-generator"),
    (exterior_with_curvature, "curvature"),
]


@pytest.mark.parametrize("base,_id", INSERT_BASES,
                         ids=[b[1] for b in INSERT_BASES])
def test_insertion_bracket_is_the_commutator_derivative(base, _id):
    W = base()
    A2 = matrix2(W)
    g = {2 * W.dim: ONE, W.dim: -ONE}  # lower-left 1, upper-right -1
    rng = random.Random(7)
    for k in (1, 2, 3):
        for _ in range(4):
            phi = _rand_cochain(rng, A2, k)
            lhs = cochain_b(interior_insertion(g, phi)).add(
                interior_insertion(g, cochain_b(phi)))
            assert lhs == insertion_lie(g, phi), k
            if A2.diff:
                assert cochain_diff(interior_insertion(g, phi)) \
                    == interior_insertion(g, cochain_diff(phi)), k


@pytest.mark.parametrize("base,_id", INSERT_BASES,
                         ids=[b[1] for b in INSERT_BASES])
def test_insertion_anticommutes_with_B_on_normalized_cochains(base, _id):
    W = base()
    A2 = matrix2(W)
    g = {2 * W.dim: ONE, W.dim: -ONE}
    pool = [i for i in range(A2.dim) if i not in A2.unit]
    rng = random.Random(11)
    for k in (2, 3):
        for _ in range(4):
            phi = _rand_cochain(rng, A2, k, pool=pool)
            got = cochain_B(interior_insertion(g, phi)).add(
                interior_insertion(g, cochain_B(phi)))
            assert got.is_zero(), k


def test_insertion_level_one_is_a_single_evaluation():
    A2 = matrix2(rationals())
    phi = Cochain(A2, 1, {(0, 2): ONE, (3, 1): Fraction(5)})
    assert interior_insertion({2: ONE}, phi).coeffs == {(0,): ONE}
    assert interior_insertion({1: Fraction(2)}, phi).coeffs \
        == {(3,): Fraction(10)}


def test_insertion_of_zero_vanishes():
    A2 = matrix2(rationals())
    rng = random.Random(3)
    assert interior_insertion({}, _rand_cochain(rng, A2, 2)).is_zero()


def test_insertion_refuses_level_zero_and_mixed_degrees():
    A2 = matrix2(exterior(["theta"]))
    with pytest.raises(ValueError):
        interior_insertion({0: ONE}, Cochain(A2, 0, {(0,): ONE}))
    mixed = {0: ONE, 1: ONE}  # unit and theta in one block
    with pytest.raises(ValueError):
        interior_insertion(mixed, Cochain(A2, 1, {(0, 0): ONE}))


# -- coboundary certificates -------------------------------------------------


def _conjugation_windows(N=4):
    act, tr = conjugation_model()
    rho = conjugation_twist()
    delta, sigma = counit_sigma(act)
    twisted = twist_action(act, rho, rho, sigma)
    cw = assemble_window(HopfTensors(act.hopf, delta, sigma), N)
    aw = assemble_window(AlgebraCochains(act.omega), N)
    return act, twisted, tr, cw, aw


def test_chi_window_matrices_commute_with_boundaries():
    act, twisted, tr, cw, aw = _conjugation_windows()
    for this in (act, twisted):
        chis = {m: chi_window_matrix(this, tr, cw, aw, m) for m in range(4)}
        for m in range(3):
            assert (aw.boundary(m) @ chis[m]
                    == chis[m + 1] @ cw.boundary(m)), m


def test_twist_difference_is_certified_exact():
    act, twisted, tr, cw, aw = _conjugation_windows()
    chis = {m: chi_window_matrix(act, tr, cw, aw, m) for m in (0, 2)}
    chis2 = {m: chi_window_matrix(twisted, tr, cw, aw, m) for m in (0, 2)}
    saw_nonzero = False
    for m in (0, 2):
        for rep in cw.representatives(m):
            diff = (chis2[m] - chis[m]).apply(rep)
            cert = coboundary_certificate(aw, m, diff)
            assert cert is not None, (m, "class should be exact")
            assert verify_certificate(aw, m, diff, cert)
            saw_nonzero = saw_nonzero or bool(diff)
    assert saw_nonzero, "twist difference vanished identically"


def test_trace_class_has_no_certificate_with_rank_evidence():
    act, _, tr, cw, aw = _conjugation_windows()
    vec = chi_window_matrix(act, tr, cw, aw, 0).apply({0: ONE})
    assert vec
    assert coboundary_certificate(aw, 0, vec) is None
    closed, exact = window_rank_evidence(aw, 0)
    assert exact == 0
    assert closed - exact == aw.cohomology_dim(0)
    assert closed > exact


def test_certificate_roundtrip_on_boundaries():
    _, _, _, _, aw = _conjugation_windows()
    rng = random.Random(19)
    seed = {i: Fraction(rng.randrange(-2, 3)) for i in range(aw.dim(1))}
    seed = {k: c for k, c in seed.items() if c}
    vec = aw.boundary(1).apply(seed)
    assert vec
    cert = coboundary_certificate(aw, 2, vec)
    assert cert is not None
    assert verify_certificate(aw, 2, vec, cert)
    assert coboundary_certificate(aw, 2, {}) == {}


def test_certificate_refuses_nonclosed_and_topmost_degrees():
    _, _, _, _, aw = _conjugation_windows()
    open_vec = {0: ONE}  # a single slot is not closed here
    if aw.boundary(1).apply(open_vec):
        with pytest.raises(ValueError):
            coboundary_certificate(aw, 1, open_vec)
    with pytest.raises(ValueError):
        coboundary_certificate(aw, aw.N, {})
    with pytest.raises(ValueError):
        window_rank_evidence(aw, aw.N)
