import cmath
import math

import numpy as np
import pytest

from artifact import graphzeta as gz
from oracles import ihara_basepoint_oracle


def sample_points(rng, count, re_lo=0.5, re_hi=3.0, im=3.0):
    return [complex(rng.uniform(re_lo, re_hi), rng.uniform(-im, im))
            for _ in range(count)]


def oracle_args(graph, L=None):
    tails, heads = graph.directed_endpoints()
    inv = [graph.inverse_edge(j) for j in range(2 * graph.J)]
    h = gz.edge_lengths(graph, L).tolist()
    return tails, heads, inv, h


def test_single_loop():
    g = gz.single_loop(5.0)
    s = 0.7 + 0.3j
    W = gz.edge_matrix(g, s)
    x = cmath.exp(-5 * s)
    assert np.allclose(W, np.diag([x, x]))
    assert abs(gz.ihara_det(g, s) - (1 - x) ** 2) <= 1e-14
    # the product is exact here (all longer loops are powers); the generic
    # tail bound does not know that, so lift the warning threshold
    res = gz.ihara_euler(g, 2.0, ell_max=5.0, tail_tol=1.0)
    assert res.class_count == 2
    assert abs(res.value - (1 - math.exp(-10)) ** 2) <= 1e-15


def test_theta_edge_matrix_structure():
    g = gz.theta_graph()
    W0 = gz.edge_matrix(g, 0.0)
    # each directed edge feeds exactly 2 others; entries at s=0 are 1
    assert W0.shape == (6, 6)
    assert np.array_equal(np.sort(np.unique(W0)), [0.0, 1.0])
    assert np.all(W0.sum(axis=1) == 2)


def test_theta_closed_form():
    g = gz.theta_graph()
    rng = np.random.default_rng(10)
    for s in sample_points(rng, 20):
        x = cmath.exp(-2 * s)
        want = (1 - x * x) ** 2 * (1 - 4 * x * x)
        got = gz.ihara_det(g, s)
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_det_tends_to_one():
    for g in (gz.theta_graph(), gz.dumbbell_graph(), gz.figure_eight_graph()):
        assert abs(gz.ihara_det(g, 50.0) - 1) <= 1e-20


def test_weighted_theta_closed_form():
    # two-vertex three-edge graph with generic weights against the
    # displayed factorization in a, b, c
    alpha = (math.log(1.3), math.log(0.8), math.log(1.7))
    g = gz.theta_graph(e=(2, 2, 2), alpha=alpha)
    L = 5.0
    h = [x.value(L) for x in g.lengths]
    rng = np.random.default_rng(11)
    for s in sample_points(rng, 20):
        a = cmath.exp(-s * (h[1] + h[2]) / 2)
        b = cmath.exp(-s * (h[0] + h[2]) / 2)
        c = cmath.exp(-s * (h[0] + h[1]) / 2)
        q = a * a + b * b + c * c - 1
        want = (q - 2 * a * b * c) * (q + 2 * a * b * c)
        got = gz.ihara_det(g, s, L=L)
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_weighted_dumbbell_closed_form():
    beta = (math.log(1.3), math.log(0.7), math.log(1.1))
    g = gz.dumbbell_graph(e=(2, 2, 2), beta=beta)
    L = 5.0
    h = [x.value(L) for x in g.lengths]
    rng = np.random.default_rng(12)
    for s in sample_points(rng, 20):
        a = cmath.exp(-s * h[0] / 2)
        b = cmath.exp(-s * h[2] / 2)
        c = cmath.exp(-s * h[1] / 2)
        want = -(c - 1) * (c + 1) * (a - 1) * (a + 1) * \
            (4 * a * a * b ** 4 * c * c - a * a * c * c + a * a + c * c - 1)
        got = gz.ihara_det(g, s, L=L)
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_figure_eight_closed_form():
    g = gz.figure_eight_graph(e=(1, 1))
    rng = np.random.default_rng(13)
    for s in sample_points(rng, 20):
        u = cmath.exp(-s)
        want = (1 + u) * (1 - u) ** 2 * (1 - 3 * u)
        got = gz.ihara_det(g, s)
        assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_det_vs_basepoint_oracle():
    for g, n_max in ((gz.theta_graph(), 14), (gz.dumbbell_graph(), 14),
                     (gz.single_loop(2.0), 14)):
        for s in (2.0 + 0j, 2.5 - 1.3j):
            want = ihara_basepoint_oracle(*oracle_args(g), s, n_max)
            got = gz.ihara_det(g, s)
            assert abs(got - want) <= 1e-9


def test_figure_eight_vs_basepoint_oracle():
    g = gz.figure_eight_graph()
    s = 2.5 + 0.7j
    want = ihara_basepoint_oracle(*oracle_args(g), s, 10)
    assert abs(gz.ihara_det(g, s) - want) <= 1e-8


def test_euler_matches_det():
    for g in (gz.theta_graph(), gz.dumbbell_graph()):
        res = gz.ihara_euler(g, 2.0, ell_max=30.0)
        assert res.tail_bound <= 1e-9
        assert abs(res.value - gz.ihara_det(g, 2.0)) <= 1e-8
    res8 = gz.ihara_euler(gz.figure_eight_graph(), 2.0, ell_max=24.0)
    assert res8.tail_bound <= 1e-9
    assert abs(res8.value - gz.ihara_det(gz.figure_eight_graph(), 2.0)) <= 1e-8


def test_euler_tail_warning():
    with pytest.warns(gz.TailBoundWarning):
        gz.ihara_euler(gz.theta_graph(), 0.4, ell_max=8.0)


def test_euler_bound_covers_error():
    g = gz.theta_graph()
    for s, ell_max in ((1.5, 16.0), (2.0, 12.0)):
        res = gz.ihara_euler(g, s, ell_max=ell_max, tail_tol=1.0)
        err = abs(res.value - gz.ihara_det(g, s))
        assert err <= res.tail_bound


def test_k4_regular_formula():
    A = np.ones((4, 4)) - np.eye(4)
    rng = np.random.default_rng(14)
    for s in sample_points(rng, 20):
        u = cmath.exp(-s)
        want = (1 - u * u) ** 2 * (1 - 3 * u + 2 * u * u) * \
            (1 + u + 2 * u * u) ** 3
        got = gz.regular_graph_zeta(A, q=3, r=3, s=s)
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))
        det = gz.ihara_det(gz.graph_from_adjacency(A), s)
        assert abs(det - want) <= 1e-10 * max(1.0, abs(want))
    assert abs(gz.regular_graph_zeta(A, q=3, r=3, s=60.0) - 1) <= 1e-20


def test_k4_euler():
    A = np.ones((4, 4)) - np.eye(4)
    g = gz.graph_from_adjacency(A)
    res = gz.ihara_euler(g, 3.0, ell_max=24.0, tail_tol=1e-7)
    assert abs(res.value - gz.regular_graph_zeta(A, q=3, r=3, s=3.0)) <= 1e-7


def test_regular_graph_rejects():
    path = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    with pytest.raises(ValueError):
        gz.regular_graph_zeta(path, q=2, r=1, s=1.0)
    A = np.ones((4, 4)) - np.eye(4)
    with pytest.raises(ValueError):
        gz.regular_graph_zeta(A, q=3, r=2, s=1.0)


def test_figure_eight_regular_equivalence():
    # one vertex, two self-loops: 4-regular with adjacency [[4]]
    rng = np.random.default_rng(15)
    for s in sample_points(rng, 10):
        want = gz.regular_graph_zeta([[4]], q=4, r=2, s=s)
        got = gz.ihara_det(gz.figure_eight_graph(e=(1, 1)), s)
        assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_skeleton_classification():
    kind, g = gz.skeleton_two_generator((4, 4, 4, 8))
    assert kind == "theta"
    assert tuple(x.a for x in g.lengths) == (2.0, 2.0, 2.0)

    kind2, g2 = gz.skeleton_two_generator((4, 4, 8, 4))
    assert kind2 == "theta"
    assert tuple(x.a for x in g2.lengths) == (2.0, 2.0, 2.0)

    kind3, g3 = gz.skeleton_two_generator((2, 2, 4, 4))
    assert kind3 == "figure-eight"
    assert tuple(x.a for x in g3.lengths) == (2.0, 2.0)

    kind4, g4 = gz.skeleton_two_generator((2, 2, 8, 8))
    assert kind4 == "dumbbell"
    assert tuple(x.a for x in g4.lengths) == (2.0, 2.0, 2.0)


def test_skeleton_rejects():
    with pytest.raises(ValueError):
        gz.skeleton_two_generator((2, 2, 5, 5))
    with pytest.raises(ValueError):
        gz.skeleton_two_generator((4, 4, 10, 8))
    with pytest.raises(ValueError):
        gz.skeleton_two_generator((2, 8, 4, 10))
    with pytest.raises(ValueError):
        gz.skeleton_two_generator((2, 2, 6, 8))


def test_skeleton_weights():
    cA, cB, cC = 1.3, 0.7, 2.0
    kind, g = gz.skeleton_two_generator((2, 2, 8, 8),
                                        lt_coeffs=(cA, cB, cC, cC))
    assert kind == "dumbbell"
    la, lb, lc = math.log(cA), math.log(cB), math.log(cC)
    assert abs(g.lengths[0].b - 2 * la) <= 1e-15
    assert abs(g.lengths[1].b - 2 * lb) <= 1e-15
    assert abs(g.lengths[2].b - (lc - la - lb)) <= 1e-15

    kind_t, gt = gz.skeleton_two_generator((4, 4, 4, 8),
                                           lt_coeffs=(1.0, 1.0, -1.0, 1.0))
    assert kind_t == "theta"
    assert all(x.b == 0 for x in gt.lengths)

    # theta with generic coefficients: alpha system solved exactly
    kt, gg = gz.skeleton_two_generator((4, 4, 4, 8),
                                       lt_coeffs=(1.3, 0.8, 1.7, 1.0))
    a1, a2, a3 = (x.b / 2 for x in gg.lengths)
    assert abs(a1 + a2 - math.log(1.3)) <= 1e-15
    assert abs(a2 + a3 - math.log(0.8)) <= 1e-15
    assert abs(a1 + a3 - math.log(1.7)) <= 1e-15


def test_periodicity():
    rng = np.random.default_rng(16)
    cases = [(gz.theta_graph(), 2.0), (gz.dumbbell_graph(), 2.0),
             (gz.figure_eight_graph(), 2.0),
             (gz.graph_from_adjacency(np.ones((4, 4)) - np.eye(4)), 1.0),
             (gz.theta_graph(e=(2, 4, 2)), 1.0)]
    for g, d_want in cases:
        d = gz.edge_matrix_period(g)
        assert d == d_want
        for s in sample_points(rng, 3):
            W1 = gz.edge_matrix(g, s)
            W2 = gz.edge_matrix(g, s + 2j * math.pi / d)
            assert np.max(np.abs(W1 - W2)) <= 1e-12
    with pytest.raises(ValueError):
        gz.edge_matrix_period(gz.theta_graph(alpha=(0.1, 0.0, 0.0)))


def test_edge_relabeling_invariance():
    g1 = gz.theta_graph(e=(2, 4, 6))
    g2 = gz.WeightedGraph(n_vertices=2, edge_pairs=((0, 1), (0, 1), (0, 1)),
                          lengths=(6.0, 2.0, 4.0))
    for s in (0.8 + 0.5j, 1.5 - 2.0j):
        assert abs(gz.ihara_det(g1, s) - gz.ihara_det(g2, s)) <= 1e-12


def test_affine_lengths_need_L():
    g = gz.theta_graph(alpha=(0.1, 0.2, 0.3))
    with pytest.raises(ValueError):
        gz.edge_matrix(g, 1.0)
    gz.edge_matrix(g, 1.0, L=5.0)


def test_graph_json_roundtrip():
    g = gz.dumbbell_graph(e=(2, 2, 4), beta=(0.1, -0.2, 0.3))
    back = gz.graph_from_json(gz.graph_to_json(g))
    assert back == g
    with pytest.raises(ValueError):
        gz.graph_from_json({"vertices": 2, "edges": [[0, 1]]})
    with pytest.raises(ValueError):
        gz.graph_from_json({"vertices": 1, "edges": [[0, 3]],
                            "lengths": [[1.0, 0.0]]})


def test_graph_validation():
    with pytest.raises(ValueError):
        gz.WeightedGraph(n_vertices=1, edge_pairs=(), lengths=())
    with pytest.raises(ValueError):
        gz.WeightedGraph(n_vertices=1, edge_pairs=((0, 0),), lengths=(-1.0,))
    with pytest.raises(ValueError):
        gz.WeightedGraph(n_vertices=1, edge_pairs=((0, 0),),
                         lengths=(1.0, 2.0))
