"""Intermediate zeta functions: cocycle tables, length logarithms, shift
determinants, symbolic polynomials, and graph specializations."""

import cmath
import math
import random

import numpy as np
import pytest

import artifact.freegroup as fg
import artifact.graphzeta as gz
import artifact.intermediate as iz
import artifact.laurent as la
import artifact.schottky as sk
from oracles import dumbbell_z0_oracle, funnel_z2_oracle, torus_z0_oracle


@pytest.fixture(scope="module")
def funnel():
    return sk.builtin_three_funnel(ell=8)


@pytest.fixture(scope="module")
def torus():
    return sk.builtin_funneled_torus(phi=math.pi / 2, ell=8)


def diagonal_toy(trunc=la.DEFAULT_TRUNC):
    """Two diagonal generators; every letter derivative is an exact monomial."""
    d1 = sk.mobius_series(((la.monomial(-1, trunc=trunc), la.ZERO),
                           (la.ZERO, la.monomial(1, trunc=trunc))))
    d2 = sk.mobius_series(((la.monomial(-2, trunc=trunc), la.ZERO),
                           (la.ZERO, la.monomial(2, trunc=trunc))))
    return sk.SchottkyFamily(name="diag-toy", generators=(d1, d2),
                             disc_levels=None, validity_radius=0.5)


def half_diagonal():
    """One generator stays diagonal, so its words fix infinity."""
    v = sk.mseries_constant(((1, 0), (3, 1)))
    v_inv = sk.mseries_constant(((1, 0), (-3, 1)))
    d = sk.mobius_series(((la.monomial(-1), la.ZERO),
                          (la.ZERO, la.monomial(1))))
    s2 = sk.mseries_mul(sk.mseries_mul(v, d), v_inv)
    return sk.SchottkyFamily(name="half-diag", generators=(d, s2),
                             disc_levels=None, validity_radius=0.5)


def dumbbell_family(beta=2.0, trunc=la.DEFAULT_TRUNC):
    """Rank-2 family whose skeleton is a dumbbell graph.

    Loops have na-length 2; the bridge pair has leading trace coefficient
    1/2 at beta = 2, so the limit carries edge weights (0, 0, -log(2)/2).
    """
    rb = math.sqrt(beta)
    d = sk.mobius_series(((la.monomial(-1, trunc=trunc), la.ZERO),
                          (la.ZERO, la.monomial(1, trunc=trunc))))
    t_hat = sk.mobius_series((
        (la.series(-1, [1 / rb, 0.0, beta / rb], trunc=trunc),
         la.monomial(-1, 1 / rb, trunc=trunc)),
        (la.monomial(-1, 1 / rb, trunc=trunc),
         la.monomial(-1, 1 / rb, trunc=trunc))))
    v = sk.mseries_constant(((1, 0), (3, 1)))
    v_inv = sk.mseries_constant(((1, 0), (-3, 1)))
    s1 = sk.mseries_mul(sk.mseries_mul(v, d), v_inv)
    core = sk.mseries_mul(sk.mseries_mul(t_hat, d), sk.mseries_inv(t_hat))
    s2 = sk.mseries_mul(sk.mseries_mul(v, core), v_inv)
    return sk.SchottkyFamily(name="dumbbell-test", generators=(s1, s2),
                             disc_levels=None, validity_radius=0.2)


def test_dumbbell_family_is_a_dumbbell():
    fam = dumbbell_family()
    o, c = sk.trace_leading(fam, (0,))
    assert (o, abs(c - 1) <= 1e-12) == (-1, True)
    o, c = sk.trace_leading(fam, (0, 1))
    assert o == -4 and abs(c - 0.5) <= 1e-12
    o, c = sk.trace_leading(fam, (0, 3))
    assert o == -4 and abs(c + 0.5) <= 1e-12
    na = tuple(sk.na_length(fam, w) for w in ((0,), (1,), (0, 1), (0, 3)))
    kind, _ = gz.skeleton_two_generator(na, (1.0, 1.0, 0.5, -0.5))
    assert kind == "dumbbell"


def test_horizon_floor_certifies(funnel, torus):
    for fam in (funnel, torus):
        for m in (0, 1, 2):
            choice = iz.choose_horizon(fam, m)
            assert choice.n == m + 2
            assert choice.checks[-1].passed
            assert choice.checks[-1].max_gap <= 1e-9


def test_horizon_toy_diagonal_is_two():
    assert iz.choose_horizon(diagonal_toy(), 0).n == 2


def test_horizon_monotone_in_m(funnel):
    ns = [iz.choose_horizon(funnel, m).n for m in range(4)]
    assert all(b >= a for a, b in zip(ns, ns[1:]))


def test_toy_cocycle_values_exact():
    table = iz.cocycle_table(diagonal_toy(), 0, 2)
    expect = {0: 2, 1: 4, 2: -2, 3: -4}
    for (i, b), entry in table.entries.items():
        assert entry.l_m.na_part == expect[i]
        assert all(c == 0 for c in entry.l_m.analytic)


def test_table_keys_and_leading(funnel):
    table = iz.cocycle_table(funnel, 0, 2)
    assert len(table.entries) == 12
    for (i, b), e in table.entries.items():
        assert len(b) == 1
        assert i != fg.inverse_letter(b[0], 2)
        assert e.lt_m.order in (2, 4)
        assert abs(e.lt_m.coeffs[0]) > 0


def test_table_horizon_stability(funnel, torus):
    for fam in (funnel, torus):
        t2 = iz.cocycle_table(fam, 0, 2)
        t3 = iz.cocycle_table(fam, 0, 3)
        for (i, b), e in t3.entries.items():
            base = t2.entries[(i, b[:1])]
            assert la.log_agree(base.l_m, e.l_m, tol=1e-9, mod_two_pi_i=True)


def test_cocycle_sum_equals_direct(funnel, torus):
    for fam in (funnel, torus):
        tables = {m: iz.cocycle_table(fam, m, iz.choose_horizon(fam, m).n)
                  for m in (0, 1, 2)}
        for cls in fg.enumerate_classes(2, 6):
            w = cls.representative
            full = iz.L_M_direct(fam, w, 2)
            for m in (0, 1, 2):
                lw = iz.L_M_word(tables[m], w)
                assert la.log_agree(lw, la.lt_log(full, m), tol=1e-9,
                                    mod_two_pi_i=True), (fam.name, m, w.letters)


def test_cycle_weights_match_trace_leading(funnel, torus):
    # Re b0 of the length logarithm is 2 log of the leading trace
    # coefficient magnitude: zero on the funnel, -2 log 2 on the torus pair
    ftab = iz.cocycle_table(funnel, 0, 2)
    for letters in ((0,), (1,), (0, 1), (0, 3)):
        lw = iz.L_M_word(ftab, fg.Word(g=2, letters=letters))
        assert abs(lw.analytic[0].real) <= 1e-9
        assert lw.na_part == sk.na_length(funnel, letters)
    ttab = iz.cocycle_table(torus, 0, 2)
    lw = iz.L_M_word(ttab, fg.Word(g=2, letters=(0, 1)))
    _, coeff = sk.trace_leading(torus, (0, 1))
    assert abs(coeff - 0.5) <= 1e-12
    assert abs(lw.analytic[0].real - 2 * math.log(abs(coeff))) <= 1e-9
    assert lw.na_part == 4


def test_length_log_na_only_truncation(funnel):
    table = iz.cocycle_table(funnel, 0, 2)
    for letters in ((0,), (1, 1), (0, 1)):
        lw = iz.L_M_word(table, fg.Word(g=2, letters=letters))
        bare = la.lt_log(lw, -1)
        assert bare.na_part == sk.na_length(funnel, letters)
        assert bare.analytic == ()


def test_length_log_eval_matches_ell(funnel):
    z = math.exp(-5)
    table = iz.cocycle_table(funnel, 0, 2)
    for letters in ((0,), (0, 1), (0, 3)):
        w = fg.Word(g=2, letters=letters)
        lhs = la.eval_log(iz.L_M_word(table, w), z).real
        rhs = iz.ell_M(funnel, w, 0, z) * 5.0
        assert abs(lhs - rhs) <= 1e-9


def test_ell_m_examples(funnel, torus):
    assert abs(iz.ell_M(funnel, fg.Word(g=2, letters=(0,)), 0, math.exp(-5))
               - 4.0) <= 1e-12
    got = iz.ell_M(torus, fg.Word(g=2, letters=(0, 1)), 0, math.exp(-5))
    assert abs(got - (4 - 2 * math.log(2) / 5)) <= 1e-12


def test_ell_m_limit_and_floor(funnel, torus):
    # the truncated length approaches na + Re(b0)/log(1/|z|); in particular
    # the gap to the na-length decays like 1/log and stays above na/2
    for fam, letters in ((funnel, (0, 3)), (torus, (0, 1))):
        w = fg.Word(g=2, letters=letters)
        na = sk.na_length(fam, w)
        b0 = iz.L_M_direct(fam, w, 0).analytic[0].real
        gaps = [abs(iz.ell_M(fam, w, 2, math.exp(-t)) - na)
                for t in range(5, 13)]
        assert all(b <= a + 1e-15 for a, b in zip(gaps, gaps[1:]))
        assert abs(gaps[-1] - abs(b0) / 12.0) <= 1e-3
        for t in range(6, 13):
            assert iz.ell_M(fam, w, 2, math.exp(-t)) >= na / 2


def test_zm_funnel_matches_theta_graph(funnel):
    graph = gz.theta_graph((2, 2, 2))
    for z in (math.exp(-2), math.exp(-5)):
        for s in (0.3, 1.1 + 0.7j, 2.0 - 1.3j):
            want = gz.ihara_det(graph, s)
            got = iz.zM_eval(funnel, 0, z, s)
            assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_zm_torus_matches_closed_form(torus):
    z = math.exp(-5)
    rng = random.Random(7)
    for _ in range(20):
        s = complex(4 * rng.random() - 1, 6 * rng.random() - 3)
        want = torus_z0_oracle(z, s)
        got = iz.zM_eval(torus, 0, z, s)
        assert abs(got - want) <= 1e-8 * abs(want)


def test_zm_dumbbell_matches_display_and_graph():
    fam = dumbbell_family()
    beta3 = -math.log(2) / 2
    graph = gz.dumbbell_graph((2, 2, 2), beta=(0.0, 0.0, beta3))
    rng = random.Random(3)
    for _ in range(8):
        s = complex(3 * rng.random() - 0.5, 4 * rng.random() - 2)
        for z in (math.exp(-6), math.exp(-9)):
            big_l = math.log(1 / z)
            a = cmath.exp(-s)
            b = cmath.exp(-s * (1 + beta3 / big_l))
            want = dumbbell_z0_oracle(a, b, a)
            got = iz.zM_eval(fam, 0, z, s)
            assert abs(got - want) <= 1e-8 * max(1.0, abs(want))
            via_graph = gz.ihara_det(graph, s, L=big_l)
            assert abs(got - via_graph) <= 1e-8 * max(1.0, abs(via_graph))


def test_zm_large_re_s_is_one(funnel):
    assert abs(iz.zM_eval(funnel, 0, math.exp(-4), 50.0) - 1) <= 1e-12


def test_zm_entire_in_left_half_plane(funnel):
    val = iz.zM_eval(funnel, 1, math.exp(-4), -2.0 + 3.0j)
    assert np.isfinite(val.real) and np.isfinite(val.imag)


def test_zm_validates_z(funnel):
    with pytest.raises(ValueError):
        iz.zM_eval(funnel, 0, 0.0, 1.0)
    with pytest.raises(ValueError):
        iz.zM_eval(funnel, 0, 0.5, 1.0)


def test_euler_product_consistency(funnel, torus):
    # lengths via the cocycle table; the table route is cross-validated
    # against the direct eigenvalue route in test_cocycle_sum_equals_direct
    cases = [(funnel, 0, 4.5, 8), (funnel, 1, 8.5, 8), (torus, 0, 4.2, 12)]
    z = math.exp(-5)
    big_l = 5.0
    for fam, m, s, max_len in cases:
        table = iz.cocycle_table(fam, m, iz.choose_horizon(fam, m).n)
        det_val = iz.zM_eval(fam, m, z, s)
        prod = 1.0
        for cls in fg.enumerate_primitive_classes(2, max_len):
            lw = iz.L_M_word(table, cls.representative)
            ell = la.eval_log(lw, z).real / big_l
            prod *= 1 - math.exp(-s * ell)
        # omitted classes: at word length n there are < 4 * 3^(n-1) of them,
        # each with ell_M >= n/2, so the log-tail is geometric
        q = 3 * math.exp(-s / 2)
        assert q < 1
        tail = (8.0 / 3.0) * q ** (max_len + 1) / (1 - q)
        assert abs(det_val - prod) <= tail + 1e-9


def test_symbolic_funnel_m0(funnel):
    sym = iz.zM_symbolic(funnel, 0)
    assert sym.window == 1
    assert iz.ihara_from(sym) == {0: 1, 4: -6, 8: 9, 12: -4}
    assert all(isinstance(c, int) for _, c in sym.terms)
    z, s = math.exp(-4), 0.8 + 0.9j
    want = iz.zM_eval(funnel, 0, z, s)
    assert abs(sym.eval(z, s) - want) <= 1e-9 * max(1.0, abs(want))


def test_symbolic_funnel_m2_matches_closed_form(funnel):
    sym = iz.zM_symbolic(funnel, 2)
    assert sym.window == 2
    rng = random.Random(11)
    for _ in range(30):
        z = 0.03 + 0.2 * rng.random()
        s = complex(4 * rng.random() - 1, 6 * rng.random() - 3)
        want = funnel_z2_oracle(z, s)
        assert abs(sym.eval(z, s) - want) <= 1e-8 * abs(want)
    assert iz.ihara_from(sym) == {0: 1, 4: -6, 8: 9, 12: -4}


def test_symbolic_matches_numeric_route(funnel, torus):
    for fam in (funnel, torus):
        for m in (0, 1, 2):
            sym = iz.zM_symbolic(fam, m)
            for (z, s) in ((math.exp(-4), 0.9), (math.exp(-6), 1.3 - 2.2j)):
                want = iz.zM_eval(fam, m, z, s)
                got = sym.eval(z, s)
                assert abs(got - want) <= 1e-9 * max(1.0, abs(want))


def test_symbolic_torus_matches_closed_form(torus):
    sym = iz.zM_symbolic(torus, 0)
    rng = random.Random(13)
    for _ in range(12):
        z = 0.02 + 0.25 * rng.random()
        s = complex(3 * rng.random() - 0.5, 4 * rng.random() - 2)
        want = torus_z0_oracle(z, s)
        assert abs(sym.eval(z, s) - want) <= 1e-8 * abs(want)


def test_symbolic_dumbbell_and_unweighted_limit():
    fam = dumbbell_family()
    sym = iz.zM_symbolic(fam, 0)
    beta3 = -math.log(2) / 2
    for (z, s) in ((math.exp(-5), 0.7), (math.exp(-7), 1.4 - 0.8j)):
        big_l = math.log(1 / z)
        a = cmath.exp(-s)
        b = cmath.exp(-s * (1 + beta3 / big_l))
        want = dumbbell_z0_oracle(a, b, a)
        assert abs(sym.eval(z, s) - want) <= 1e-8 * max(1.0, abs(want))
    # dropping the log-weights must land on the unweighted dumbbell graph
    poly = iz.ihara_from(sym)
    graph = gz.dumbbell_graph((2, 2, 2))
    rng = random.Random(2)
    for _ in range(20):
        s = complex(3 * rng.random() - 0.5, 6 * rng.random() - 3)
        want = gz.ihara_det(graph, s)
        got = iz.eval_exp_poly(poly, s)
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_ihara_from_matches_graph_route(funnel, torus):
    cases = [(funnel, gz.theta_graph((2, 2, 2)), {0: 1, 4: -6, 8: 9, 12: -4}),
             (torus, gz.figure_eight_graph((2, 2)),
              {0: 1, 2: -4, 4: 2, 6: 4, 8: -3})]
    rng = random.Random(5)
    for fam, graph, expect in cases:
        poly = iz.ihara_from(iz.zM_symbolic(fam, 0))
        assert poly == expect
        for _ in range(20):
            s = complex(3 * rng.random() - 0.5, 6 * rng.random() - 3)
            want = gz.ihara_det(graph, s)
            got = iz.eval_exp_poly(poly, s)
            assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_specialize_matches_fresh_table(funnel, torus):
    for fam in (funnel, torus):
        sym2 = iz.zM_symbolic(fam, 2)
        for m_new in (0, 1):
            spec = iz.specialize(sym2, m_new)
            assert spec.m == m_new
            for (z, s) in ((math.exp(-4), 0.9), (math.exp(-5), 1.2 - 2.1j)):
                want = iz.zM_eval(fam, m_new, z, s)
                got = spec.eval(z, s)
                assert abs(got - want) <= 1e-8 * max(1.0, abs(want))


def test_pair_leading_term_identity(funnel, torus):
    for fam in (funnel, torus):
        pair_lt = {}
        for i in range(4):
            for j in range(4):
                if j != fg.inverse_letter(i, 2):
                    pair_lt[(i, j)] = sk.trace_leading(fam, (i, j))
        for cls in fg.enumerate_classes(2, 6):
            letters = cls.representative.letters
            o, c = sk.trace_leading(fam, letters)
            po, pc = 0, complex(1.0)
            for k in range(len(letters)):
                oo, cc = pair_lt[(letters[k],
                                  letters[(k + 1) % len(letters)])]
                po += oo
                pc *= cc
            assert 2 * o == po
            assert abs(c * c - pc) <= 1e-10 * abs(pc)


def test_c_zero_raises():
    with pytest.raises(ValueError, match="infinity"):
        iz.cocycle_table(half_diagonal(), 0, 2)


def test_precision_exhausted_raises(funnel):
    with pytest.raises(la.PrecisionError):
        iz.cocycle_table(funnel, 40, 3)


def test_symbolic_size_cap(funnel):
    with pytest.raises(iz.ExpansionError, match="zM_eval"):
        iz.zM_symbolic(funnel, 2, size_cap=4)


def test_format_symbolic_smoke(funnel):
    text = iz.format_symbolic(iz.zM_symbolic(funnel, 0))
    assert "u1" in text and "P = " in text and "exp(s*" in text
