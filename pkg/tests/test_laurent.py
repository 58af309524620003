import cmath
import math

import numpy as np
import pytest

from artifact import laurent as la
from oracles import conv_oracle, exp_oracle, log_oracle


def random_series(rng, order_span=5, k=20, decay=0.5):
    # geometric decay keeps the roundtrip recurrences well conditioned; the
    # growth-envelope test covers the ill-conditioned regime separately
    order = int(rng.integers(-order_span, order_span + 1))
    re = rng.normal(size=k + 1)
    im = rng.normal(size=k + 1)
    cs = (re + 1j * im) / 2 * decay ** np.arange(k + 1)
    cs[0] = (0.7 + 0.8 * rng.random()) * cmath.exp(2j * math.pi * rng.random())
    return la.series(order, cs.tolist(), trunc=k)


def max_abs_diff(f, g):
    k = min(f.trunc, g.trunc)
    assert f.order == g.order
    return max(abs(f.coeffs[j] - g.coeffs[j]) for j in range(k + 1))


def test_mul_polynomial_example():
    f = la.series(-2, [1, 1])
    g = la.series(1, [2, -1])
    h = la.mul(f, g)
    assert h.order == -1
    assert h.coeffs == (2 + 0j, 1 + 0j)
    full = la.mul(la.series(-2, [1, 1], trunc=8), la.series(1, [2, -1], trunc=8))
    assert full.order == -1
    assert full.coeffs[:3] == (2 + 0j, 1 + 0j, -1 + 0j)


def test_mul_identity():
    rng = np.random.default_rng(1)
    f = random_series(rng)
    one = la.series(0, [1.0], trunc=f.trunc)
    assert la.coeffs_agree(la.mul(f, one), f, tol=0.0)


def test_mul_against_convolution_oracle():
    rng = np.random.default_rng(2)
    for _ in range(200):
        f = random_series(rng)
        g = random_series(rng)
        h = la.mul(f, g)
        want = conv_oracle(list(f.coeffs), list(g.coeffs))[: h.trunc + 1]
        assert h.order == f.order + g.order
        assert max(abs(a - b) for a, b in zip(h.coeffs, want)) <= 1e-12


def test_mul_truncation_is_min():
    rng = np.random.default_rng(3)
    f = random_series(rng, k=20)
    g = random_series(rng, k=7)
    assert la.mul(f, g).trunc == 7


def test_div_trivial():
    f = la.series(2, [1, 1], trunc=6)
    g = la.series(1, [1, 1], trunc=6)
    q = la.div(f, g)
    assert q.order == 1
    assert all(abs(c) <= 1e-14 for c in q.coeffs[1:])
    assert abs(q.coeffs[0] - 1) <= 1e-14

    geo = la.div(la.series(0, [1], trunc=8), la.series(0, [1, -1], trunc=8))
    assert all(abs(c - 1) <= 1e-14 for c in geo.coeffs)


def test_div_roundtrip():
    rng = np.random.default_rng(4)
    for _ in range(200):
        f = random_series(rng)
        g = random_series(rng)
        back = la.mul(la.div(f, g), g)
        assert back.order == f.order
        assert max_abs_diff(back, f) <= 1e-11


def test_div_by_zero_raises():
    f = la.series(0, [1.0])
    with pytest.raises(ValueError):
        la.div(f, la.ZERO)
    with pytest.raises(ValueError):
        la.reciprocal(la.ZERO)


def test_plog_signs_and_example():
    f = la.series(-2, [3, 3], trunc=5)
    L = la.plog(f)
    assert L.na_part == 2
    assert abs(L.analytic[0] - math.log(3)) <= 1e-14
    want = [1, -0.5, 1 / 3, -0.25, 0.2]
    for j, w in enumerate(want, start=1):
        assert abs(L.analytic[j] - w) <= 1e-14

    one = la.series(0, [1.0], trunc=4)
    L1 = la.plog(one)
    assert L1.na_part == 0
    assert all(abs(b) <= 1e-16 for b in L1.analytic)


def test_plog_exp_roundtrip():
    rng = np.random.default_rng(5)
    for _ in range(200):
        f = random_series(rng, order_span=0)
        back = exp_oracle(list(la.plog(f).analytic))
        assert max(abs(a - b) for a, b in zip(back, f.coeffs)) <= 1e-11


def test_plog_homomorphism_mod_2pi():
    rng = np.random.default_rng(6)
    for _ in range(200):
        f = random_series(rng)
        g = random_series(rng)
        lhs = la.plog(la.mul(f, g))
        rhs = la.log_add(la.plog(f), la.plog(g))
        assert lhs.na_part == rhs.na_part
        assert la.log_agree(lhs, rhs, tol=1e-10, mod_two_pi_i=True)


def test_plog_branch_shift():
    f = la.series(0, [1 + 1j, 0.3], trunc=3)
    base = la.plog(f)
    shifted = la.plog(f, branch=2)
    assert abs(shifted.analytic[0] - base.analytic[0] - 4j * math.pi) <= 1e-14
    assert shifted.analytic[1:] == base.analytic[1:]


def test_sqrt_trivial_and_binomial():
    t2 = la.series(2, [1.0], trunc=4)
    r = la.sqrt(t2)
    assert r.order == 1 and abs(r.coeffs[0] - 1) <= 1e-15

    f = la.series(0, [1, 1], trunc=4)
    r = la.sqrt(f)
    want = [1, 0.5, -0.125, 1 / 16, -5 / 128]
    assert max(abs(a - b) for a, b in zip(r.coeffs, want)) <= 1e-14


def test_sqrt_roundtrip_and_branch():
    rng = np.random.default_rng(7)
    for _ in range(200):
        f = random_series(rng)
        if f.order % 2:
            f = la.series(f.order + 1, list(f.coeffs), trunc=f.trunc)
        r = la.sqrt(f)
        assert max_abs_diff(la.mul(r, r), f) <= 1e-11
        r2 = la.sqrt(f, branch=1)
        assert abs(r2.coeffs[0] + r.coeffs[0]) <= 1e-15


def test_sqrt_odd_order_raises():
    with pytest.raises(ValueError):
        la.sqrt(la.series(1, [1.0], trunc=3))


def test_lt_truncations():
    f = la.series(-1, [5, 1, 7, 1], trunc=3)
    g = la.lt(f, 2)
    assert g.order == -1 and g.coeffs == (5 + 0j, 1 + 0j, 7 + 0j)
    assert g.trunc == 2
    assert la.coeffs_agree(la.lt(g, 2), g)

    L = la.plog(f)
    L1 = la.lt_log(L, 1)
    assert L1.na_part == L.na_part and len(L1.analytic) == 2
    Lna = la.lt_log(L, -1)
    assert Lna.na_part == L.na_part and len(Lna.analytic) == 0
    assert la.lt_log(la.lt_log(L, 2), -1).na_part == Lna.na_part


def test_lt_plog_identities():
    rng = np.random.default_rng(8)
    for _ in range(50):
        x = random_series(rng)
        y = random_series(rng)
        for m in (0, 1, 2, 3):
            lhs = la.lt_log(la.plog(la.lt(x, m)), m)
            rhs = la.lt_log(la.plog(x), m)
            assert la.log_agree(lhs, rhs, tol=1e-13)
            lhs2 = la.lt_log(la.plog(la.lt(la.mul(x, y), m)), m)
            rhs2 = la.lt_log(la.log_add(la.plog(x), la.plog(y)), m)
            assert la.log_agree(lhs2, rhs2, tol=1e-10, mod_two_pi_i=True)


def test_eval_series_and_pole():
    f = la.series(-1, [2, 1, -1], trunc=2)
    z = 0.3 + 0.1j
    direct = 2 / z + 1 - z
    assert abs(la.eval_series(f, z) - direct) <= 1e-14
    with pytest.raises(ValueError):
        la.eval_series(f, 0.0)
    assert la.eval_series(la.series(1, [4.0]), 0.0) == 0
    assert la.eval_series(la.ZERO, 0.5) == 0


def test_eval_log():
    L = la.LogSeries(na_part=3, analytic=(1.0 + 0j, 2.0 + 0j))
    z = 0.2
    want = 3 * cmath.log(1 / z) + 1 + 2 * z
    assert abs(la.eval_log(L, z) - want) <= 1e-14
    with pytest.raises(ValueError):
        la.eval_log(L, 0.0)


def test_hybrid_norm_values():
    assert abs(la.hybrid_norm(la.series(-1, [1.0])) - math.e) <= 1e-15
    assert abs(la.hybrid_norm(la.series(1, [3.0])) - 3 / math.e) <= 1e-15
    assert la.hybrid_norm(la.ZERO) == 0.0
    f = la.series(0, [0.5, 0.0, 2.0], trunc=2)
    want = 1.0 + 2.0 * math.exp(-2)
    assert abs(la.hybrid_norm(f) - want) <= 1e-15


def test_hybrid_norm_sub_add_mult():
    rng = np.random.default_rng(9)
    for _ in range(100):
        f = random_series(rng)
        g = random_series(rng)
        nf, ng = la.hybrid_norm(f), la.hybrid_norm(g)
        assert la.hybrid_norm(la.mul(f, g)) <= nf * ng * (1 + 1e-12)
        s = la.add(f, g)
        assert la.hybrid_norm(s) <= (nf + ng) * (1 + 1e-12)


def test_growth_envelopes_structural():
    # coefficients bounded by e^{C(j+1)}: products, reciprocals and logs keep
    # a geometric envelope with a finite fitted constant
    rng = np.random.default_rng(10)
    c_in = 0.3

    def envelope_constant(coeffs):
        vals = [math.log(max(abs(c), 1.0)) / (j + 1) for j, c in enumerate(coeffs)]
        return max(vals)

    for _ in range(50):
        k = 32
        f_cs = [(rng.normal() + 1j * rng.normal()) * math.exp(c_in * (j + 1)) / 2
                for j in range(k + 1)]
        g_cs = [(rng.normal() + 1j * rng.normal()) * math.exp(c_in * (j + 1)) / 2
                for j in range(k + 1)]
        f_cs[0] = 1.0 + f_cs[0] / abs(f_cs[0]) * 0.25
        g_cs[0] = 1.0 + g_cs[0] / abs(g_cs[0]) * 0.25
        f = la.series(0, f_cs, trunc=k)
        g = la.series(0, g_cs, trunc=k)
        assert envelope_constant(la.mul(f, g).coeffs) <= 2 * c_in + 2
        assert envelope_constant(la.reciprocal(f).coeffs) <= 8 * (c_in + 1)
        assert envelope_constant(la.plog(f).analytic) <= 8 * (c_in + 1)
        assert envelope_constant(la.sqrt(f).coeffs) <= 8 * (c_in + 1)


def test_add_window_and_cancellation():
    f = la.series(-1, [1.0] + [0.0] * 32, trunc=32)
    g = la.series(40, [5.0])
    s = la.add(f, g)
    assert s.order == -1 and s.trunc == 32
    assert la.coeffs_agree(s, f)

    assert la.is_zero(la.add(f, la.neg(f)))
    assert la.add(la.ZERO, f) is f

    a = la.series(0, [1, 2, 3], trunc=2)
    b = la.series(1, [1, 1, 1, 1], trunc=3)
    s2 = la.add(a, b)
    assert s2.order == 0 and s2.trunc == 2
    assert s2.coeffs == (1 + 0j, 3 + 0j, 4 + 0j)


def test_canonicalization():
    f = la.series(3, [0, 0, 2, 1])
    assert f.order == 5 and f.coeffs == (2 + 0j, 1 + 0j)
    assert la.series(0, [0.0, 0.0]) is la.ZERO
    tiny = la.series(0, [1e-16, 1.0], trunc=1)
    assert tiny.order == 0


def test_leading_order_with_junk():
    f = la.series(-4, [1e-17, 1.0, 0.5], trunc=2)
    assert la.leading_order(f) == -4
    assert la.leading_order(f, rel_tol=1e-10) == -3


def test_algebra_properties():
    rng = np.random.default_rng(11)
    for _ in range(100):
        f = random_series(rng)
        g = random_series(rng)
        h = random_series(rng)
        assert la.coeffs_agree(la.mul(f, g), la.mul(g, f), tol=1e-11)
        assert max_abs_diff(la.mul(la.mul(f, g), h), la.mul(f, la.mul(g, h))) <= 1e-11
        lhs = la.mul(f, la.add(g, h))
        rhs = la.add(la.mul(f, g), la.mul(f, h))
        if not (la.is_zero(lhs) or la.is_zero(rhs)):
            assert max_abs_diff(lhs, rhs) <= 1e-11


def test_power():
    rng = np.random.default_rng(12)
    f = random_series(rng)
    assert max_abs_diff(la.power(f, 3), la.mul(f, la.mul(f, f))) <= 1e-12
    assert la.coeffs_agree(la.power(f, -1), la.reciprocal(f), tol=1e-12)
    assert la.power(f, 0).coeffs[0] == 1


def test_json_roundtrip():
    rng = np.random.default_rng(13)
    f = random_series(rng)
    back = la.series_from_json(la.series_to_json(f))
    assert back.order == f.order and back.coeffs == f.coeffs
    L = la.plog(f)
    back_l = la.log_from_json(la.log_to_json(L))
    assert back_l.na_part == L.na_part and back_l.analytic == L.analytic


def test_log_scale_integrality():
    L = la.LogSeries(na_part=2, analytic=(1.0 + 0j, 0.5 + 0j))
    d = la.log_scale(L, 2)
    assert d.na_part == 4 and d.analytic == (2 + 0j, 1 + 0j)
    with pytest.raises(ValueError):
        la.log_scale(L, 0.5)
