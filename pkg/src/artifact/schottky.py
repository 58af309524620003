"""Schottky families of SL2 matrices over truncated Laurent series.

A family is a tuple of generator matrices with entries in C((t)), evaluated
at complex parameters z with 0 < |z| < validity radius. Provides traces,
non-Archimedean and hyperbolic displacement lengths, eigenvalue and length
expansions in z, twisted Ford discs with figure checking, the separation
condition on multipliers vs fixed-point cross-ratios, and built-in families.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
import warnings

import numpy as np

from . import freegroup as fg
from . import laurent as la
from .laurent import TruncatedLaurentSeries

DET_TOL = 1e-10


class PrecisionWarning(UserWarning):
    pass


@dataclasses.dataclass(frozen=True)
class MobiusC:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        # float-honest scale: computing ad-bc loses |ad|+|bc| ulps
        scale = max(1.0, abs(self.a * self.d) + abs(self.b * self.c))
        if abs(det - 1) > DET_TOL * scale:
            raise ValueError(f"matrix determinant {det} is not 1 within "
                             f"{DET_TOL * scale:.2e}")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def apply(self, x: complex) -> complex:
        if x == math.inf:
            return self.a / self.c if self.c != 0 else math.inf
        den = self.c * x + self.d
        if den == 0:
            return math.inf
        return (self.a * x + self.b) / den


def mobius_from_matrix(m, renormalize: bool = False) -> tuple[MobiusC, float]:
    """Build a MobiusC; optionally divide by the sqrt(det) branch closest to 1.

    Returns the matrix and |log| of the renormalization factor applied.
    """
    m = np.asarray(m, dtype=complex)
    factor = 1.0 + 0j
    if renormalize:
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        root = cmath.sqrt(det)
        if abs(root - 1) > abs(-root - 1):
            root = -root
        m = m / root
        factor = root
    mc = MobiusC(a=m[0, 0], b=m[0, 1], c=m[1, 0], d=m[1, 1])
    return mc, abs(cmath.log(factor)) if factor != 1 else 0.0


@dataclasses.dataclass(frozen=True)
class MobiusSeries:
    m00: TruncatedLaurentSeries
    m01: TruncatedLaurentSeries
    m10: TruncatedLaurentSeries
    m11: TruncatedLaurentSeries

    @property
    def entries(self):
        return ((self.m00, self.m01), (self.m10, self.m11))


def mobius_series(rows, check: bool = True) -> MobiusSeries:
    m = MobiusSeries(m00=rows[0][0], m01=rows[0][1], m10=rows[1][0], m11=rows[1][1])
    if check:
        err = la.sub(det_series(m), la.constant(1.0))
        if not la.is_zero(err) and abs(err.coeffs[0]) > DET_TOL:
            raise ValueError(
                f"series determinant differs from 1 at order {err.order} "
                f"by {abs(err.coeffs[0]):.3e}")
    return m


def det_series(m: MobiusSeries) -> TruncatedLaurentSeries:
    return la.sub(la.mul(m.m00, m.m11), la.mul(m.m01, m.m10))


def mseries_mul(x: MobiusSeries, y: MobiusSeries) -> MobiusSeries:
    return MobiusSeries(
        m00=la.add(la.mul(x.m00, y.m00), la.mul(x.m01, y.m10)),
        m01=la.add(la.mul(x.m00, y.m01), la.mul(x.m01, y.m11)),
        m10=la.add(la.mul(x.m10, y.m00), la.mul(x.m11, y.m10)),
        m11=la.add(la.mul(x.m10, y.m01), la.mul(x.m11, y.m11)),
    )


def mseries_inv(m: MobiusSeries) -> MobiusSeries:
    # adjugate; valid since det = 1 within tolerance
    return MobiusSeries(m00=m.m11, m01=la.neg(m.m01), m10=la.neg(m.m10), m11=m.m00)


def mseries_constant(mat, trunc: int = la.DEFAULT_TRUNC) -> MobiusSeries:
    (a, b), (c, d) = mat

    def s(v):
        return la.ZERO if v == 0 else la.series(0, [v], trunc=trunc)

    return MobiusSeries(m00=s(a), m01=s(b), m10=s(c), m11=s(d))


def mseries_trace(m: MobiusSeries) -> TruncatedLaurentSeries:
    return la.add(m.m00, m.m11)


@dataclasses.dataclass(frozen=True)
class Disc:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disc radius must be positive")

    def contains_point(self, x: complex) -> bool:
        return abs(x - self.center) < self.radius


@dataclasses.dataclass(frozen=True)
class SchottkyFamily:
    name: str
    generators: tuple[MobiusSeries, ...]
    disc_levels: tuple[float, ...] | None
    validity_radius: float
    ell_scale: int | None = None
    default_z: complex | None = None

    @property
    def g(self) -> int:
        return len(self.generators)

    def __post_init__(self):
        if self.g < 2:
            raise ValueError("need at least two generators")
        if not 0 < self.validity_radius < 1:
            raise ValueError("validity radius must be in (0,1)")
        if self.disc_levels is not None and len(self.disc_levels) != self.g:
            raise ValueError("one disc level per generator required")
        for i, m in enumerate(self.generators):
            tr = mseries_trace(m)
            if la.is_zero(tr) or la.leading_order(tr, rel_tol=1e-10) >= 0:
                raise ValueError(f"generator {i + 1} is not loxodromic over C((t))")


def letter_matrices(fam: SchottkyFamily) -> list[MobiusSeries]:
    """Series matrices for letters 0..2g-1 (generators then inverses)."""
    gens = list(fam.generators)
    return gens + [mseries_inv(m) for m in gens]


def word_matrix(fam: SchottkyFamily, w) -> MobiusSeries:
    letters = w.letters if isinstance(w, fg.Word) else tuple(w)
    mats = letter_matrices(fam)
    out = mseries_constant(((1, 0), (0, 1)))
    for i in letters:
        out = mseries_mul(out, mats[i])
    return out


def evaluate_mobius(m: MobiusSeries, z: complex) -> tuple[MobiusC, float]:
    """Evaluate entrywise at z and renormalize det to 1 (sqrt branch nearest 1)."""
    if z == 0:
        raise ValueError("pole at z=0: families are evaluated at z != 0")
    mat = [[la.eval_series(m.m00, z), la.eval_series(m.m01, z)],
           [la.eval_series(m.m10, z), la.eval_series(m.m11, z)]]
    return mobius_from_matrix(mat, renormalize=True)


def evaluate_at(fam: SchottkyFamily, z: complex) -> list[MobiusC]:
    out = []
    for m in fam.generators:
        mc, renorm = evaluate_mobius(m, z)
        if renorm > 1e-2:
            warnings.warn(f"det renormalization magnitude {renorm:.2e} at z={z}",
                          PrecisionWarning)
        out.append(mc)
    return out


def letter_matrices_at(fam: SchottkyFamily, z: complex) -> list[np.ndarray]:
    """Numeric letter matrices, raw entry evaluation.

    Generators are unimodular as series, so inverses are adjugates; the
    numeric determinant is not used (it cancels catastrophically when the
    entries are large).
    """
    if z == 0:
        raise ValueError("pole at z=0: families are evaluated at z != 0")
    gens = []
    for m in fam.generators:
        gens.append(np.array(
            [[la.eval_series(m.m00, z), la.eval_series(m.m01, z)],
             [la.eval_series(m.m10, z), la.eval_series(m.m11, z)]]))
    adj = [np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) for m in gens]
    return gens + adj


def word_matrix_at(fam: SchottkyFamily, w, z: complex) -> np.ndarray:
    letters = w.letters if isinstance(w, fg.Word) else tuple(w)
    mats = letter_matrices_at(fam, z)
    out = np.eye(2, dtype=complex)
    for i in letters:
        out = out @ mats[i]
    return out


def trace_series(fam: SchottkyFamily, w) -> TruncatedLaurentSeries:
    word = w if isinstance(w, fg.Word) else fg.Word(g=fam.g, letters=tuple(w))
    word = fg.reduce(fam.g, word.letters)
    if not word.letters:
        return la.constant(2.0)
    tr = mseries_trace(word_matrix(fam, word))
    if la.is_zero(tr):
        warnings.warn("trace series has no justified nonzero coefficient",
                      PrecisionWarning)
    return tr


def trace_leading(fam: SchottkyFamily, w, rel_tol: float = 1e-9
                  ) -> tuple[int, complex]:
    """Leading (order, coefficient) of the trace, skipping cancellation junk."""
    tr = trace_series(fam, w)
    order = la.leading_order(tr, rel_tol=rel_tol)
    return order, tr.coeffs[order - tr.order]


def na_length(fam: SchottkyFamily, w) -> int:
    word = w if isinstance(w, fg.Word) else fg.Word(g=fam.g, letters=tuple(w))
    word = fg.cyclic_reduce(word)
    if not word.letters:
        raise ValueError("identity word is not loxodromic")
    order, _ = trace_leading(fam, word)
    if order >= 0:
        raise ValueError(f"word {fg.format_word(word)!r} has trace order {order}; "
                         "not loxodromic over C((t))")
    return -2 * order


def displacement_length_R(m: MobiusC) -> float:
    t = abs(m.trace.real) if abs(m.trace.imag) < 1e-9 else abs(m.trace)
    if t <= 2:
        raise ValueError(f"|trace| = {t} <= 2: not loxodromic")
    return 2.0 * math.acosh(t / 2.0)


def displacement_of_trace(tr: complex) -> tuple[float, float]:
    """(length, holonomy) of a unimodular matrix from its trace alone."""
    if abs(tr) > 1e150:
        # lambda = tr - 1/tr + O(tr^{-3}); the -1 under the root underflows
        lam = tr
    else:
        root = cmath.sqrt(tr * tr / 4 - 1)
        lam = tr / 2 + root
        if abs(lam) < 1:
            lam = tr / 2 - root
    if abs(abs(lam) - 1) < 1e-12:
        raise ValueError("eigenvalues on the unit circle: not loxodromic")
    # convention: gamma'(fix+) = 1/lam^2 = e^{-ell - i theta}
    ell = 2.0 * math.log(abs(lam))
    theta = 2.0 * cmath.phase(lam)
    while theta <= -math.pi:
        theta += 2 * math.pi
    while theta > math.pi:
        theta -= 2 * math.pi
    return ell, theta


def displacement_length_C(m: MobiusC) -> tuple[float, float]:
    return displacement_of_trace(m.trace)


def lambda1_series(fam: SchottkyFamily, w) -> TruncatedLaurentSeries:
    """Series of the large eigenvalue: tr*(1/2 + sqrt(1/4 - 1/tr^2))."""
    word = fg.cyclic_reduce(w if isinstance(w, fg.Word)
                            else fg.Word(g=fam.g, letters=tuple(w)))
    if not word.letters:
        raise ValueError("identity word is not loxodromic")
    tr = trace_series(fam, word)
    if la.leading_order(tr, rel_tol=1e-9) >= 0:
        raise ValueError("trace order not negative: not loxodromic over C((t))")
    return _lambda_series_of_trace(tr)


def length_expansion(fam: SchottkyFamily, w, M: int) -> tuple[int, list[complex]]:
    """ell(gamma_z) = ell_na*log(1/|z|) + Re(a_0 + a_1 z + ... ): (ell_na, a_0..a_M)."""
    lam = lambda1_series(fam, w)
    lg = la.plog(lam)
    if M > lg.trunc:
        raise la.PrecisionError(f"only {lg.trunc + 1} justified coefficients, "
                                f"need {M + 1}")
    ell_na = 2 * lg.na_part
    return ell_na, [2 * lg.analytic[j] for j in range(M + 1)]


def hyperbolic_length_at(fam: SchottkyFamily, w, z: complex) -> float:
    mat = word_matrix_at(fam, w, z)
    ell, _ = displacement_of_trace(mat[0, 0] + mat[1, 1])
    return ell


def attracting_fixed_point(m: MobiusC) -> complex:
    if m.c == 0:
        return math.inf if abs(m.a) > abs(m.d) else -m.b / (m.d - m.a)
    root = cmath.sqrt(m.trace * m.trace - 4)
    x1 = (m.a - m.d + root) / (2 * m.c)
    x2 = (m.a - m.d - root) / (2 * m.c)
    # attracting fixed point has |gamma'| < 1, i.e. larger |cx+d|
    return x1 if abs(m.c * x1 + m.d) > abs(m.c * x2 + m.d) else x2


def ford_discs(fam: SchottkyFamily, z: complex) -> list[tuple[Disc, Disc]]:
    """Per generator i: (D for a_i, D for a_i^{-1}) at parameter z.

    With level l_i the disc of a_i has radius l_i^{-L/2}/|c_i(z)| about
    a_i(infinity) and the disc of a_i^{-1} has radius l_i^{L/2}/|c_i(z)|
    about a_i^{-1}(infinity), L = log(1/|z|); reciprocal levels make each
    generator map the exterior of its inverse's disc exactly onto its own.
    """
    if fam.disc_levels is None:
        raise ValueError("family carries no disc levels")
    if not 0 < abs(z) < fam.validity_radius:
        raise ValueError(f"|z|={abs(z)} outside validity radius "
                         f"{fam.validity_radius}")
    L = math.log(1 / abs(z))
    out = []
    for m, level in zip(fam.generators, fam.disc_levels):
        mc, _ = evaluate_mobius(m, z)
        if abs(mc.c) == 0:
            raise ValueError("generator has c=0 at z; conjugate the family first")
        r_plus = level ** (-L / 2) / abs(mc.c)
        r_minus = level ** (L / 2) / abs(mc.c)
        out.append((Disc(center=mc.a / mc.c, radius=r_plus),
                    Disc(center=-mc.d / mc.c, radius=r_minus)))
    return out


def mobius_image_disc(m: MobiusC, disc: Disc) -> Disc:
    """Image of a disc not containing the pole of m (det = 1)."""
    if m.c == 0:
        return Disc(center=(m.a * disc.center + m.b) / m.d,
                    radius=disc.radius * abs(m.a / m.d))
    pole = -m.d / m.c
    v = disc.center - pole
    if abs(v) <= disc.radius:
        raise ValueError("disc contains the pole; image is not a disc")
    denom = abs(v) ** 2 - disc.radius ** 2
    center = m.a / m.c - v.conjugate() / (m.c * m.c * denom)
    radius = disc.radius / (abs(m.c) ** 2 * denom)
    return Disc(center=center, radius=radius)


@dataclasses.dataclass(frozen=True)
class FigureReport:
    ok: bool
    min_disjoint_margin: float
    min_mapping_margin: float
    disjoint_margins: dict
    mapping_margins: dict
    fixed_points_inside: bool


def check_schottky_figure(fam: SchottkyFamily, z: complex) -> FigureReport:
    """Verify pairwise disjointness and ping-pong containments at z.

    Margins are relative: disjointness |c1-c2|/(r1+r2) - 1; mapping
    (r_target - |shift| - r_image)/r_target. A failed figure is reported,
    not raised.
    """
    pairs = ford_discs(fam, z)
    g = fam.g
    discs = {}
    for i, (d_plus, d_minus) in enumerate(pairs):
        discs[i] = d_plus
        discs[i + g] = d_minus
    maps = {}
    for i, m in enumerate(evaluate_at(fam, z)):
        maps[i] = m
        inv = np.linalg.inv(m.matrix)
        maps[i + g], _ = mobius_from_matrix(inv)

    disjoint = {}
    for x in range(2 * g):
        for y in range(x + 1, 2 * g):
            dx, dy = discs[x], discs[y]
            disjoint[(x, y)] = abs(dx.center - dy.center) / (dx.radius + dy.radius) - 1

    mapping = {}
    for x in range(2 * g):
        for y in range(2 * g):
            if y == fg.inverse_letter(x, g):
                continue
            try:
                img = mobius_image_disc(maps[x], discs[y])
            except ValueError:
                mapping[(x, y)] = -math.inf
                continue
            target = discs[x]
            mapping[(x, y)] = (target.radius - abs(img.center - target.center)
                               - img.radius) / target.radius

    fixed_inside = all(
        discs[x].contains_point(attracting_fixed_point(maps[x]))
        for x in range(2 * g))

    min_dj = min(disjoint.values())
    min_map = min(mapping.values())
    return FigureReport(ok=min_dj > 0 and min_map > 0 and fixed_inside,
                        min_disjoint_margin=min_dj,
                        min_mapping_margin=min_map,
                        disjoint_margins=disjoint,
                        mapping_margins=mapping,
                        fixed_points_inside=fixed_inside)


def fixed_point_series(m: MobiusSeries
                       ) -> tuple[TruncatedLaurentSeries, TruncatedLaurentSeries]:
    """(attracting, repelling) fixed-point series of a loxodromic series matrix."""
    if la.is_zero(m.m10):
        raise ValueError("c = 0: fixed point at infinity; conjugate the family")
    tr = mseries_trace(m)
    disc = la.sub(la.mul(tr, tr), la.constant(4.0))
    if la.is_zero(disc):
        raise ValueError("parabolic series matrix")
    if disc.order % 2 != 0:
        raise ValueError("odd-order discriminant: family needs z = w^2 "
                         "(unsupported)")
    root = la.sqrt(disc)
    # align the root with the large eigenvalue: (tr + root)/2 must keep
    # the trace's leading order
    lam_plus = la.add(tr, root)
    if la.is_zero(lam_plus) or la.leading_order(lam_plus, rel_tol=1e-9) != \
            la.leading_order(tr, rel_tol=1e-9):
        root = la.neg(root)
    diff = la.sub(m.m00, m.m11)
    two_c = la.scale(m.m10, 2.0)
    alpha = la.div(la.add(diff, root), two_c)
    beta = la.div(la.sub(diff, root), two_c)
    return alpha, beta


def _lambda_series_of_trace(tr: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
    inv_tr2 = la.reciprocal(la.mul(tr, tr))
    root = la.sqrt(la.sub(la.series(0, [0.25], trunc=tr.trunc), inv_tr2))
    lam = la.mul(tr, la.add(la.series(0, [0.5], trunc=tr.trunc), root))
    # pick the branch of larger absolute size (smaller order, or bigger lead)
    other = la.sub(tr, lam)
    if not la.is_zero(other):
        o_lam = la.leading_order(lam, rel_tol=1e-9)
        o_other = la.leading_order(other, rel_tol=1e-9)
        if o_other < o_lam or (o_other == o_lam and
                               abs(other.coeffs[o_other - other.order]) >
                               abs(lam.coeffs[o_lam - lam.order])):
            lam = other
    return lam


def multiplier_series(m: MobiusSeries) -> TruncatedLaurentSeries:
    """Contraction multiplier 1/lambda1^2 (order +ell_na for a degenerating family)."""
    lam = _lambda_series_of_trace(mseries_trace(m))
    return la.reciprocal(la.mul(lam, lam))


@dataclasses.dataclass(frozen=True)
class StarReport:
    passes: bool
    k_min: int
    multiplier_orders: tuple[int, ...]


def check_star_condition(fam) -> StarReport:
    """Multiplier orders vs cross-ratios of fixed points.

    K_min = min over i, j != i, k != i and point choices u_j, u_k of
    ord(multiplier_i * (u_j - alpha_i)(beta_i - u_k) /
        ((u_k - alpha_i)(beta_i - u_j))),
    i.e. the cross-ratio [u_j : u_k ; alpha_i : beta_i]. Passes when every
    multiplier vanishes at z=0 and K_min > 0. Accepts a SchottkyFamily or a
    raw sequence of MobiusSeries (so degenerate families can be reported).
    """
    gens = fam.generators if isinstance(fam, SchottkyFamily) else tuple(fam)
    g = len(gens)
    fixed = [fixed_point_series(m) for m in gens]
    mults = [multiplier_series(m) for m in gens]
    mult_orders = tuple(la.leading_order(m, rel_tol=1e-9) for m in mults)

    def robust_order(f: TruncatedLaurentSeries) -> int:
        return la.leading_order(f, rel_tol=1e-9)

    k_min = None
    for i in range(g):
        alpha_i, beta_i = fixed[i]
        for j in range(g):
            if j == i:
                continue
            for k in range(g):
                if k == i:
                    continue
                for u_j in fixed[j]:
                    for u_k in fixed[k]:
                        num = la.mul(la.sub(u_j, alpha_i), la.sub(beta_i, u_k))
                        den = la.mul(la.sub(u_k, alpha_i), la.sub(beta_i, u_j))
                        if la.is_zero(den):
                            raise ValueError("coinciding fixed points across "
                                             "generators: family is degenerate")
                        if la.is_zero(num):
                            continue
                        cr_ord = robust_order(num) - robust_order(den)
                        total = mult_orders[i] + cr_ord
                        k_min = total if k_min is None else min(k_min, total)
    if k_min is None:
        raise ValueError("no admissible cross-ratio combination")
    passes = all(o > 0 for o in mult_orders) and k_min > 0
    return StarReport(passes=passes, k_min=k_min, multiplier_orders=mult_orders)


def _newton_quadratic_root(u: TruncatedLaurentSeries,
                           seed: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
    """Solve a^2 - u a + 1 = 0 by series Newton iteration from the seed."""
    a = seed
    for _ in range(12):
        res = la.add(la.sub(la.mul(a, a), la.mul(u, a)), la.constant(1.0))
        if la.is_zero(res):
            return a
        dres = la.sub(la.scale(a, 2.0), u)
        a = la.sub(a, la.div(res, dres))
        res2 = la.add(la.sub(la.mul(a, a), la.mul(u, a)), la.constant(1.0))
        if la.is_zero(res2) or la.leading_order(res2) - a.order >= a.trunc - 1:
            return a
    raise ValueError("series Newton iteration for the branch a(t) did not converge")


def builtin_three_funnel(ell: float | None = None, z: complex | None = None,
                         trunc: int = la.DEFAULT_TRUNC) -> SchottkyFamily:
    """Symmetric three-funnel surface family; t stands for e^{-ell/4}.

    S1 = (C S; S C), S2 = (C a^{-1}S; aS C) with C = (t^{-2}+t^2)/2,
    S = (t^{-2}-t^2)/2 and a + a^{-1} = (-2C - 2C^2)/S^2, the branch with
    a^{-1} = -1 + 2t + O(t^2).
    """
    k = trunc
    C = la.series(-2, [0.5, 0, 0, 0, 0.5], trunc=k)
    S = la.series(-2, [0.5, 0, 0, 0, -0.5], trunc=k)
    u = la.scale(la.div(la.add(C, la.mul(C, C)), la.mul(S, S)), -2.0)
    a = _newton_quadratic_root(u, la.series(0, [-1.0, -2.0], trunc=k))
    a_inv = la.reciprocal(a)
    s1 = mobius_series(((C, S), (S, C)))
    s2 = mobius_series(((C, la.mul(a_inv, S)), (la.mul(a, S), C)))
    default_z = None
    if ell is not None:
        default_z = cmath.exp(-ell / 4)
    elif z is not None:
        default_z = complex(z)
    return SchottkyFamily(name="three-funnel", generators=(s1, s2),
                          disc_levels=(1.0, 1.0), validity_radius=0.2,
                          ell_scale=4, default_z=default_z)


def builtin_funneled_torus(phi: float, ell: float | None = None,
                           z: complex | None = None,
                           trunc: int = la.DEFAULT_TRUNC) -> SchottkyFamily:
    """Funneled-torus family; t stands for e^{-ell/2}, phi in (0, pi).

    Base matrices S1 = diag(t^{-1}, t) and
    S2 = (C1 + p S1' , q S1'; S1', C1 - p S1') with p = cos(phi),
    q = sin^2(phi), so that the leading trace term of S1 S2 is
    (1 + cos(phi))/2 t^{-2}; both are conjugated by V = (1 0; 3 1) so that
    every generator has c != 0 (needed for Ford discs and cocycles). The
    c-entry of the conjugated S2 vanishes iff cos(phi) = 2/3, rejected.
    """
    if not 0 < phi < math.pi:
        raise ValueError("phi must lie in (0, pi)")
    p = math.cos(phi)
    q = math.sin(phi) ** 2
    if abs(1 + 6 * p - 9 * q) < 1e-8:
        raise ValueError("cos(phi) = 2/3 makes the conjugated c-entry vanish; "
                         "choose a different phi")
    k = trunc
    C1 = la.series(-1, [0.5, 0, 0.5], trunc=k)
    S1p = la.series(-1, [0.5, 0, -0.5], trunc=k)
    s1_raw = MobiusSeries(m00=la.series(-1, [1.0], trunc=k), m01=la.ZERO,
                          m10=la.ZERO, m11=la.series(1, [1.0], trunc=k))
    s2_raw = MobiusSeries(m00=la.add(C1, la.scale(S1p, p)),
                          m01=la.scale(S1p, q),
                          m10=S1p,
                          m11=la.sub(C1, la.scale(S1p, p)))
    v = mseries_constant(((1, 0), (3, 1)), trunc=k)
    v_inv = mseries_constant(((1, 0), (-3, 1)), trunc=k)
    s1 = mobius_series(mseries_mul(mseries_mul(v, s1_raw), v_inv).entries)
    s2 = mobius_series(mseries_mul(mseries_mul(v, s2_raw), v_inv).entries)
    default_z = None
    if ell is not None:
        default_z = cmath.exp(-ell / 2)
    elif z is not None:
        default_z = complex(z)
    return SchottkyFamily(name="funneled-torus", generators=(s1, s2),
                          disc_levels=(1.0, 1.0), validity_radius=0.1,
                          ell_scale=2, default_z=default_z)


def family_to_json(fam: SchottkyFamily) -> dict:
    return {
        "name": fam.name,
        "g": fam.g,
        "generators": [[[la.series_to_json(m.m00), la.series_to_json(m.m01)],
                        [la.series_to_json(m.m10), la.series_to_json(m.m11)]]
                       for m in fam.generators],
        "disc_levels": list(fam.disc_levels) if fam.disc_levels else None,
        "validity_radius": fam.validity_radius,
        "ell_scale": fam.ell_scale,
    }


def builtin_from_json(doc: dict) -> SchottkyFamily:
    try:
        g = int(doc["g"])
        gens_doc = doc["generators"]
        radius = float(doc["validity_radius"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"family document missing or malformed field: {exc}")
    if len(gens_doc) != g:
        raise ValueError(f"expected {g} generators, found {len(gens_doc)}")

    def entry(d):
        if d is None:
            return la.ZERO
        return la.series_from_json(d)

    gens = []
    for rows in gens_doc:
        gens.append(mobius_series(((entry(rows[0][0]), entry(rows[0][1])),
                                   (entry(rows[1][0]), entry(rows[1][1])))))
    levels = doc.get("disc_levels")
    if levels is not None:
        levels = tuple(float(v) for v in levels)
        if any(v <= 0 for v in levels):
            raise ValueError("disc levels must be positive")
    scale = doc.get("ell_scale")
    return SchottkyFamily(name=str(doc.get("name", "custom")),
                          generators=tuple(gens),
                          disc_levels=levels,
                          validity_radius=radius,
                          ell_scale=int(scale) if scale is not None else None)
