"""Finite weighted graphs and their Ihara zeta functions.

A graph carries J undirected edges stored as directed pairs: edge j runs
tail -> head and edge j+J is its reversal. Edge lengths are affine in
1/L with L = log(1/|z|), stored exactly as (a, b) meaning h = a + b/L,
so the same graph serves the unweighted zeta (b = 0) and the weighted
one coming from leading trace coefficients.

The zeta function is computed two ways: det(I - W(s)) with the directed
edge matrix W(e_j, e_k) = e^{-s(h_j + h_k)/2} (nonzero when e_j feeds
e_k and e_k != e_j^{-1}), and a truncated Euler product over primitive
non-backtracking loop classes with a certified tail bound.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
import warnings

import numpy as np


class TailBoundWarning(UserWarning):
    pass


@dataclasses.dataclass(frozen=True)
class EdgeLength:
    """Length h = a + b/L, L = log(1/|z|); b = 0 means a plain length."""
    a: float
    b: float = 0.0

    def value(self, L: float | None = None) -> float:
        if self.b == 0.0:
            return self.a
        if L is None:
            raise ValueError("length has a 1/L correction; pass L = log(1/|z|)")
        return self.a + self.b / L


def _as_length(x) -> EdgeLength:
    if isinstance(x, EdgeLength):
        return x
    if isinstance(x, (int, float)):
        return EdgeLength(a=float(x))
    a, b = x
    return EdgeLength(a=float(a), b=float(b))


@dataclasses.dataclass(frozen=True)
class WeightedGraph:
    n_vertices: int
    edge_pairs: tuple[tuple[int, int], ...]
    lengths: tuple[EdgeLength, ...]

    def __post_init__(self):
        object.__setattr__(self, "edge_pairs",
                           tuple((int(t), int(h)) for t, h in self.edge_pairs))
        object.__setattr__(self, "lengths",
                           tuple(_as_length(x) for x in self.lengths))
        if self.n_vertices < 1 or not self.edge_pairs:
            raise ValueError("graph needs at least one vertex and one edge")
        if len(self.lengths) != len(self.edge_pairs):
            raise ValueError("one length per edge pair required")
        for t, h in self.edge_pairs:
            if not (0 <= t < self.n_vertices and 0 <= h < self.n_vertices):
                raise ValueError(f"edge endpoint ({t},{h}) out of range")
        for x in self.lengths:
            if x.a <= 0:
                raise ValueError("edge lengths must be positive")

    @property
    def J(self) -> int:
        return len(self.edge_pairs)

    def directed_endpoints(self) -> tuple[list[int], list[int]]:
        """(tails, heads) for directed edges 0..2J-1; j+J reverses j."""
        tails = [t for t, _ in self.edge_pairs] + [h for _, h in self.edge_pairs]
        heads = [h for _, h in self.edge_pairs] + [t for t, _ in self.edge_pairs]
        return tails, heads

    def inverse_edge(self, j: int) -> int:
        return (j + self.J) % (2 * self.J)


def edge_lengths(graph: WeightedGraph, L: float | None = None) -> np.ndarray:
    """Materialized directed-edge lengths, h_{j+J} = h_j."""
    h = np.array([x.value(L) for x in graph.lengths], dtype=float)
    if np.any(h <= 0):
        raise ValueError("materialized edge length is not positive")
    return np.concatenate([h, h])


def _feeds(graph: WeightedGraph) -> np.ndarray:
    """0/1 matrix: F[j,k] = 1 iff e_j feeds e_k and e_k != e_j^{-1}."""
    tails, heads = graph.directed_endpoints()
    m = 2 * graph.J
    F = np.zeros((m, m), dtype=float)
    for j in range(m):
        for k in range(m):
            if heads[j] == tails[k] and k != graph.inverse_edge(j):
                F[j, k] = 1.0
    return F


def edge_matrix(graph: WeightedGraph, s: complex,
                L: float | None = None) -> np.ndarray:
    """W(e_j,e_k)(s) = e^{-s(h_j+h_k)/2} on feeding pairs, 0 elsewhere."""
    h = edge_lengths(graph, L)
    half = np.exp(-s * h / 2)
    return _feeds(graph) * np.outer(half, half)


def edge_matrix_period(graph: WeightedGraph) -> float:
    """d such that W(s) = W(s + 2*pi*i/d) entrywise (integer lengths only)."""
    for x in graph.lengths:
        if x.b != 0.0 or x.a != round(x.a):
            raise ValueError("periodicity requires plain integer edge lengths")
    h = [int(round(x.a)) for x in graph.lengths] * 2
    F = _feeds(graph)
    num = 0
    for j in range(2 * graph.J):
        for k in range(2 * graph.J):
            if F[j, k]:
                num = math.gcd(num, h[j] + h[k])
    if num == 0:
        raise ValueError("graph has no feeding edge pair")
    return num / 2.0


def ihara_det(graph: WeightedGraph, s: complex,
              L: float | None = None) -> complex:
    """Z_I(G,h,s) = det(I - W(s)), entire in s (LU determinant)."""
    W = edge_matrix(graph, s, L)
    return complex(np.linalg.det(np.eye(2 * graph.J) - W))


def _primitive_loop_classes(graph: WeightedGraph, h: np.ndarray,
                            ell_max: float) -> list[tuple[tuple[int, ...], float]]:
    """Primitive non-backtracking loop classes with weighted length <= ell_max.

    Depth-first walks starting at the lexicographically minimal edge of the
    class. Rotation dedup is pruned on the fly: every later occurrence of
    the start edge opens a rotation; the walk dies once that rotation turns
    lexicographically smaller than the prefix, and occurrences that turn
    larger are dropped. A closure with no undecided occurrence left is
    canonical and primitive outright.
    """
    tails, heads = graph.directed_endpoints()
    m = 2 * graph.J
    inv = [graph.inverse_edge(j) for j in range(m)]
    n_max = int(ell_max / float(h.min()))
    feeds_from = [[k for k in range(m)
                   if heads[j] == tails[k] and k != inv[j]] for j in range(m)]
    out = []

    def is_canonical_primitive(path: tuple[int, ...]) -> bool:
        n = len(path)
        for r in range(1, n):
            rot = path[r:] + path[:r]
            if rot < path:
                return False
            if rot == path:
                return False  # period r < n: not primitive
        return True

    def walk(path: list[int], acc: float, occs: list[int],
             first: int, feeds_ge, close_into):
        last = path[-1]
        if close_into[last] and acc <= ell_max:
            if not occs:
                out.append((tuple(path), acc))
            else:
                p = tuple(path)
                if is_canonical_primitive(p):
                    out.append((p, acc))
        if len(path) == n_max:
            return
        pos = len(path)
        for k in feeds_ge[last]:
            if acc + h[k] > ell_max:
                continue
            new_occs = []
            smaller = False
            for i in occs:
                ref = path[pos - i]
                if k < ref:
                    smaller = True
                    break
                if k == ref:
                    new_occs.append(i)
            if smaller:
                continue
            if k == first:
                new_occs.append(pos)
            path.append(k)
            walk(path, acc + h[k], new_occs, first, feeds_ge, close_into)
            path.pop()

    for j in range(m):
        if h[j] > ell_max:
            continue
        feeds_ge = [[k for k in feeds_from[e] if k >= j] for e in range(m)]
        close_into = [heads[e] == tails[j] and inv[e] != j for e in range(m)]
        walk([j], float(h[j]), [], j, feeds_ge, close_into)
    return out


def _euler_tail_bound(graph: WeightedGraph, h: np.ndarray, sigma: float,
                      ell_max: float) -> float:
    """Bound on |log| of the omitted Euler factors.

    An omitted primitive class has weighted length ell > ell_max and, at
    combinatorial length n, ell >= n h_min, hence ell >= (n h_min + ell_max)/2.
    Classes of combinatorial length n number at most tr(F^n) <= 2J rho^n.
    |log(1-x)| <= 2|x| for |x| <= 1/2 covers each omitted factor.
    """
    if sigma <= 0:
        return math.inf
    h_min = float(h.min())
    rho = float(max(abs(np.linalg.eigvals(_feeds(graph))))) * (1 + 1e-12)
    x = rho * math.exp(-sigma * h_min / 2)
    if x >= 1:
        return math.inf
    return 2 * math.exp(-sigma * ell_max / 2) * 2 * graph.J * x / (1 - x)


@dataclasses.dataclass(frozen=True)
class IharaEuler:
    value: complex
    tail_bound: float
    class_count: int


def ihara_euler(graph: WeightedGraph, s: complex, ell_max: float,
                L: float | None = None, tail_tol: float = 1e-8) -> IharaEuler:
    """Truncated Euler product over primitive loop classes, with tail bound."""
    h = edge_lengths(graph, L)
    classes = _primitive_loop_classes(graph, h, ell_max)
    value = 1.0 + 0j
    for _, ell in classes:
        value *= 1 - cmath.exp(-s * ell)
    bound = _euler_tail_bound(graph, h, complex(s).real, ell_max)
    if not bound <= tail_tol:
        warnings.warn(f"Euler tail bound {bound:.2e} exceeds {tail_tol:.1e}; "
                      "increase ell_max or Re s", TailBoundWarning)
    return IharaEuler(value=value, tail_bound=bound, class_count=len(classes))


def regular_graph_zeta(adjacency, q: int, r: int, s: complex) -> complex:
    """(1-e^{-2s})^{r-1} det(I - A e^{-s} + (q-1) e^{-2s}) for q-regular graphs."""
    A = np.asarray(adjacency, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or not np.allclose(A, A.T):
        raise ValueError("adjacency must be square symmetric")
    deg = A.sum(axis=1)
    if not np.all(deg == q):
        raise ValueError(f"graph is not {q}-regular (degrees {deg.tolist()})")
    n_edges = int(round(A.sum() / 2))
    if r != n_edges - n + 1:
        raise ValueError(f"r = {r} does not match |E|-|V|+1 = {n_edges - n + 1}")
    u = cmath.exp(-s)
    mat = np.eye(n) - A * u + (q - 1) * u * u * np.eye(n)
    return complex((1 - u * u) ** (r - 1) * np.linalg.det(mat))


def graph_from_adjacency(adjacency) -> WeightedGraph:
    """Unit-length WeightedGraph from a simple symmetric 0/1 adjacency matrix.

    Diagonal entries count self-loops twice (degree convention), so A[i,i]
    must be even; A[i,i] = 2k yields k unit self-loops at vertex i.
    """
    A = np.asarray(adjacency, dtype=int)
    n = A.shape[0]
    if A.shape != (n, n) or not np.array_equal(A, A.T):
        raise ValueError("adjacency must be square symmetric")
    pairs = []
    for i in range(n):
        if A[i, i] % 2 != 0:
            raise ValueError("odd diagonal entry: self-loops count twice")
        pairs.extend([(i, i)] * (A[i, i] // 2))
        for j in range(i + 1, n):
            pairs.extend([(i, j)] * A[i, j])
    return WeightedGraph(n_vertices=n, edge_pairs=tuple(pairs),
                         lengths=tuple(1.0 for _ in pairs))


def theta_graph(e=(2, 2, 2), alpha=(0.0, 0.0, 0.0)) -> WeightedGraph:
    """Two vertices joined by three edges, h_j = e_j + 2 alpha_j / L."""
    return WeightedGraph(
        n_vertices=2, edge_pairs=((0, 1), (0, 1), (0, 1)),
        lengths=tuple(EdgeLength(a=float(e[j]), b=2.0 * alpha[j])
                      for j in range(3)))


def dumbbell_graph(e=(2, 2, 2), beta=(0.0, 0.0, 0.0)) -> WeightedGraph:
    """Loops at two vertices joined by a bridge; lengths (loop, loop, bridge)."""
    return WeightedGraph(
        n_vertices=2, edge_pairs=((0, 0), (1, 1), (0, 1)),
        lengths=tuple(EdgeLength(a=float(e[j]), b=2.0 * beta[j])
                      for j in range(3)))


def figure_eight_graph(e=(2, 2), alpha=(0.0, 0.0)) -> WeightedGraph:
    """Two loops at a single vertex."""
    return WeightedGraph(
        n_vertices=1, edge_pairs=((0, 0), (0, 0)),
        lengths=tuple(EdgeLength(a=float(e[j]), b=2.0 * alpha[j])
                      for j in range(2)))


def single_loop(length: float) -> WeightedGraph:
    return WeightedGraph(n_vertices=1, edge_pairs=((0, 0),),
                         lengths=(EdgeLength(a=float(length)),))


def skeleton_two_generator(na_lengths, lt_coeffs=None
                           ) -> tuple[str, WeightedGraph]:
    """Skeleton graph of a rank-2 family from na-lengths of a, b, ab, ab^{-1}.

    na_lengths are the four non-Archimedean lengths (positive even
    integers). With C = min(na(ab), na(ab^{-1})) and C' = the max:
    figure-eight iff C = C' = na(a)+na(b); theta iff C < C' = na(a)+na(b);
    dumbbell iff C = C' > na(a)+na(b). Edge lengths solve the corresponding
    linear system; lt_coeffs (leading trace coefficients for the same four
    words) supply the 2*log|coeff|/L corrections on the edges.
    """
    A, B, C1, C2 = (int(x) for x in na_lengths)
    if any(x <= 0 or x % 2 != 0 for x in (A, B, C1, C2)):
        raise ValueError("na-lengths must be positive even integers")
    C, Cp = min(C1, C2), max(C1, C2)
    la = lb = lc = 0.0
    if lt_coeffs is not None:
        cA, cB, cAB, cABinv = lt_coeffs
        la, lb = math.log(abs(cA)), math.log(abs(cB))
        # the C weight belongs to whichever product word realizes C
        lc = math.log(abs(cAB)) if C1 <= C2 else math.log(abs(cABinv))

    if C == Cp == A + B:
        return "figure-eight", figure_eight_graph(e=(A, B), alpha=(la, lb))
    if C < Cp and Cp == A + B:
        h1, h2, h3 = (A + C - B) // 2, (A + B - C) // 2, (B + C - A) // 2
        if (A + C - B) % 2 or h1 <= 0 or h2 <= 0 or h3 <= 0:
            raise ValueError(f"no theta graph fits na-lengths {na_lengths}")
        a1 = (la + lc - lb) / 2
        a2 = (la + lb - lc) / 2
        a3 = (lb + lc - la) / 2
        return "theta", theta_graph(e=(h1, h2, h3), alpha=(a1, a2, a3))
    if C == Cp and C > A + B:
        h3 = (C - A - B) // 2
        b3 = (lc - la - lb) / 2
        return "dumbbell", dumbbell_graph(e=(A, B, h3), beta=(la, lb, b3))
    raise ValueError(f"no skeleton type fits na-lengths {na_lengths}")


def graph_to_json(graph: WeightedGraph) -> dict:
    return {
        "vertices": graph.n_vertices,
        "edges": [[t, h] for t, h in graph.edge_pairs],
        "lengths": [[x.a, x.b] for x in graph.lengths],
    }


def graph_from_json(doc: dict) -> WeightedGraph:
    try:
        return WeightedGraph(
            n_vertices=int(doc["vertices"]),
            edge_pairs=tuple((int(t), int(h)) for t, h in doc["edges"]),
            lengths=tuple(EdgeLength(a=float(a), b=float(b))
                          for a, b in doc["lengths"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"graph document missing or malformed field: {exc}")
