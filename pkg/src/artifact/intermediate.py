"""Intermediate zeta functions of a degenerating Schottky family.

Z_M interpolates between the Selberg zeta of the family and the Ihara zeta
of its skeleton graph: each geodesic length is replaced by the truncation
of its expansion at z = 0 after M + 1 analytic coefficients. The module
builds a table of letter-derivative leading terms over a word horizon,
sums the table into length logarithms along cyclic words, evaluates
det(I - V(s)) on the shift graph of horizon words, and can expand that
determinant as an exact integer polynomial over exponent variables.
"""

from __future__ import annotations

import cmath
import dataclasses
import fractions
import functools
import math
import warnings

import numpy as np

from . import freegroup as fg
from . import laurent as la
from . import schottky as sk

HORIZON_CAP = 12
HORIZON_KEY_CAP = 20000
MATRIX_CAP = 4096
CERT_TOL = 1e-9
MU_TOL = 1e-9
SNAP_TOL = 1e-12
# fitted on the built-in families: for |z| < e^{-LEMMA_C (M+1)} the truncated
# length is expected to stay above half its non-Archimedean part
LEMMA_C = 2.0


class HorizonError(ValueError):
    """No horizon up to the cap certifies local constancy of lt_M."""


class ExpansionError(ValueError):
    """Symbolic expansion would exceed the size cap; use zM_eval instead."""


def _sum_clean(terms, tol: float = 1e-12) -> la.TruncatedLaurentSeries:
    """Sum the terms and strip float-cancellation junk from the head.

    A leading coefficient of the sum is junk when it is below tol times the
    size of the summands at the same order; the comparison is pointwise by
    order, so legitimately growing tails cannot mask a genuine small lead.
    """
    live = [t for t in terms if not la.is_zero(t)]
    if not live:
        return la.ZERO
    acc = live[0]
    for t in live[1:]:
        acc = la.add(acc, t)
    if la.is_zero(acc):
        return acc
    scale: dict[int, float] = {}
    for t in live:
        for j, c in enumerate(t.coeffs):
            o = t.order + j
            scale[o] = max(scale.get(o, 0.0), abs(c))
    skip = 0
    for j, c in enumerate(acc.coeffs):
        if abs(c) > tol * scale.get(acc.order + j, 0.0):
            break
        skip += 1
    else:
        return la.ZERO
    if skip == 0:
        return acc
    return la.series(acc.order + skip, list(acc.coeffs[skip:]),
                     trunc=acc.trunc - skip)


def _image_of_infinity(mat: sk.MobiusSeries) -> la.TruncatedLaurentSeries:
    if la.is_zero(mat.m10):
        raise ValueError("word matrix has c = 0: the map fixes infinity; "
                         "conjugate the family away from this coordinate")
    return la.div(mat.m00, mat.m10)


def _apply_mobius(mat: sk.MobiusSeries,
                  x: la.TruncatedLaurentSeries) -> la.TruncatedLaurentSeries:
    num = _sum_clean([la.mul(mat.m00, x), mat.m01])
    den = _sum_clean([la.mul(mat.m10, x), mat.m11])
    if la.is_zero(den):
        raise ValueError("Mobius image of the sample point hits infinity")
    return la.div(num, den)


def _letter_derivative(mat: sk.MobiusSeries,
                       x: la.TruncatedLaurentSeries | None
                       ) -> la.TruncatedLaurentSeries:
    """Series of the derivative at w = x: 1/(c x + d)^2 for det = 1."""
    if la.is_zero(mat.m10):
        h = mat.m11
    else:
        if x is None:
            raise ValueError("sample point required: letter has c != 0")
        h = _sum_clean([la.mul(mat.m10, x), mat.m11])
    return la.reciprocal(la.mul(h, h))


def _lt_m_of_derivative(mat: sk.MobiusSeries,
                        x: la.TruncatedLaurentSeries | None,
                        m: int) -> la.TruncatedLaurentSeries:
    deriv = _letter_derivative(mat, x)
    if deriv.trunc < m:
        raise la.PrecisionError(
            f"derivative window has {deriv.trunc + 1} justified coefficients, "
            f"need {m + 1}; enlarge the family truncation")
    return la.lt(deriv, m)


def _word_matrices(fam: sk.SchottkyFamily, n: int) -> dict:
    """Series matrices of all reduced words of length n, entries cleaned."""
    mats = sk.letter_matrices(fam)
    out = {(): sk.mseries_constant(((1, 0), (0, 1)))}
    level: list[tuple[int, ...]] = [()]
    for _ in range(n):
        nxt = []
        for w in level:
            base = out[w]
            for i in range(2 * fam.g):
                if w and i == fg.inverse_letter(w[-1], fam.g):
                    continue
                rhs = mats[i]
                prod = sk.MobiusSeries(
                    m00=_sum_clean([la.mul(base.m00, rhs.m00),
                                    la.mul(base.m01, rhs.m10)]),
                    m01=_sum_clean([la.mul(base.m00, rhs.m01),
                                    la.mul(base.m01, rhs.m11)]),
                    m10=_sum_clean([la.mul(base.m10, rhs.m00),
                                    la.mul(base.m11, rhs.m10)]),
                    m11=_sum_clean([la.mul(base.m10, rhs.m01),
                                    la.mul(base.m11, rhs.m11)]))
                out[w + (i,)] = prod
                nxt.append(w + (i,))
        level = nxt
    return {w: mat for w, mat in out.items() if len(w) == n}


def _sample_points(fam: sk.SchottkyFamily, mats, word_mats, b,
                   second: bool) -> list[la.TruncatedLaurentSeries]:
    """Series points of the disc of word b: b(inf), plus b(gamma_plus(c))
    for an admissible continuation letter c when a second point is asked."""
    pts = [_image_of_infinity(word_mats[b])]
    if second:
        last_inv = fg.inverse_letter(b[-1], fam.g)
        cand = [i for i in range(2 * fam.g)
                if i != last_inv and not la.is_zero(mats[i].m10)]
        if not cand:
            raise ValueError("no admissible continuation with c != 0; cannot "
                             "form a second certificate point")
        alpha, _ = sk.fixed_point_series(mats[cand[0]])
        pts.append(_apply_mobius(word_mats[b], alpha))
    return pts


@dataclasses.dataclass(frozen=True)
class CocycleEntry:
    lt_m: la.TruncatedLaurentSeries
    l_m: la.LogSeries


@dataclasses.dataclass(frozen=True)
class CocycleTable:
    m: int
    horizon: int
    g: int
    entries: dict  # (letter, following word of length horizon-1) -> entry


@dataclasses.dataclass(frozen=True)
class HorizonCheck:
    horizon: int
    n_keys: int
    max_gap: float
    passed: bool


@dataclasses.dataclass(frozen=True)
class HorizonChoice:
    n: int
    m: int
    checks: tuple[HorizonCheck, ...]


def horizon_certificate(fam: sk.SchottkyFamily, m: int,
                        horizon: int) -> HorizonCheck:
    """Two-point local-constancy check of lt_M over every key at a horizon.

    For each key (letter, word b) the derivative leading terms are computed
    at two independent series points of the disc of b; the certificate
    passes when all pairs agree to CERT_TOL relative to the leading scale.
    """
    g = fam.g
    mats = sk.letter_matrices(fam)
    word_mats = _word_matrices(fam, horizon - 1)
    max_gap = 0.0
    passed = True
    n_keys = 0
    for b in sorted(word_mats):
        consumers = [i for i in range(2 * g)
                     if i != fg.inverse_letter(b[0], g)]
        n_keys += len(consumers)
        need = [i for i in consumers if not la.is_zero(mats[i].m10)]
        if not need:
            continue
        pts = _sample_points(fam, mats, word_mats, b, second=True)
        for i in need:
            lts = [_lt_m_of_derivative(mats[i], x, m) for x in pts]
            if lts[0].order != lts[1].order:
                passed = False
                max_gap = math.inf
                continue
            head = max(abs(lts[0].coeffs[0]), abs(lts[1].coeffs[0]))
            k = min(lts[0].trunc, lts[1].trunc)
            gap = max(abs(lts[0].coeffs[j] - lts[1].coeffs[j])
                      for j in range(k + 1)) / head
            max_gap = max(max_gap, gap)
            if gap > CERT_TOL:
                passed = False
    return HorizonCheck(horizon=horizon, n_keys=n_keys,
                        max_gap=max_gap, passed=passed)


@functools.lru_cache(maxsize=64)
def choose_horizon(fam: sk.SchottkyFamily, m: int,
                   cap: int = HORIZON_CAP) -> HorizonChoice:
    """Smallest horizon N >= M + 2 whose two-point certificate passes."""
    if m < 0:
        raise ValueError("m >= 0 required")
    checks: list[HorizonCheck] = []
    for n in range(m + 2, cap + 1):
        n_keys = 2 * fam.g * (2 * fam.g - 1) ** (n - 1)
        if n_keys > HORIZON_KEY_CAP:
            raise HorizonError(
                f"horizon {n} would need {n_keys} keys (> {HORIZON_KEY_CAP}); "
                "no smaller horizon certified")
        check = horizon_certificate(fam, m, n)
        checks.append(check)
        if check.passed:
            return HorizonChoice(n=n, m=m, checks=tuple(checks))
    worst = min(c.max_gap for c in checks) if checks else math.inf
    raise HorizonError(f"no horizon N <= {cap} certifies local constancy "
                       f"for M = {m}; best gap {worst:.3e}")


@functools.lru_cache(maxsize=64)
def cocycle_table(fam: sk.SchottkyFamily, m: int, horizon: int) -> CocycleTable:
    """Table of lt_M and l_M = lt'_M(plog(lt_M)) of letter derivatives.

    Keys are (letter, following reduced word of length horizon-1) with the
    letter not cancelling the word; derivatives are evaluated at the series
    point b(inf) of the word's disc (letters with c = 0 are constant and
    need no sample point).
    """
    if horizon < 2:
        raise ValueError("horizon >= 2 required")
    if m < 0:
        raise ValueError("m >= 0 required")
    g = fam.g
    mats = sk.letter_matrices(fam)
    word_mats = _word_matrices(fam, horizon - 1)
    entries = {}
    for b in sorted(word_mats):
        consumers = [i for i in range(2 * g)
                     if i != fg.inverse_letter(b[0], g)]
        x = None
        if any(not la.is_zero(mats[i].m10) for i in consumers):
            x = _sample_points(fam, mats, word_mats, b, second=False)[0]
        for i in consumers:
            ltm = _lt_m_of_derivative(mats[i], x, m)
            lm = la.lt_log(la.plog(ltm), m)
            entries[(i, b)] = CocycleEntry(lt_m=ltm, l_m=lm)
    return CocycleTable(m=m, horizon=horizon, g=g, entries=entries)


def L_M_word(table: CocycleTable, w) -> la.LogSeries:
    """Length logarithm by the cocycle sum: -(sum of l_M over cyclic windows).

    The window after position k is read off the periodic extension of the
    cyclically reduced word, so any nonempty cyclically reduced word works.
    """
    word = fg.cyclic_reduce(w if isinstance(w, fg.Word)
                            else fg.Word(g=table.g, letters=tuple(w)))
    if not word.letters:
        raise ValueError("identity word has no length")
    letters = word.letters
    n = len(letters)
    reps = 1 - (-(table.horizon - 1) // n)
    ext = letters * reps
    acc: la.LogSeries | None = None
    for k in range(n):
        window = tuple(ext[k + 1: k + table.horizon])
        entry = table.entries[(letters[k], window)]
        acc = entry.l_m if acc is None else la.log_add(acc, entry.l_m)
    return la.log_scale(acc, -1)


def L_M_direct(fam: sk.SchottkyFamily, w, m: int) -> la.LogSeries:
    """Length logarithm from the eigenvalue: lt'_M(2 plog(lambda1))."""
    lam = sk.lambda1_series(fam, w)
    lg = la.plog(lam)
    if lg.trunc < m:
        raise la.PrecisionError(f"eigenvalue log has {lg.trunc + 1} justified "
                                f"coefficients, need {m + 1}")
    return la.lt_log(la.log_scale(lg, 2), m)


def ell_M(fam: sk.SchottkyFamily, w, m: int, z: complex) -> float:
    """Truncated length in rescaled units: ell_na + Re(sum a_j z^j)/log(1/|z|)."""
    z = complex(z)
    if not 0 < abs(z) < 1:
        raise ValueError("need 0 < |z| < 1")
    ell_na, coeffs = sk.length_expansion(fam, w, m)
    big_l = math.log(1.0 / abs(z))
    corr = sum((coeffs[j] * z**j).real for j in range(m + 1))
    val = ell_na + corr / big_l
    if abs(z) <= math.exp(-LEMMA_C * (m + 1)) and val < ell_na / 2:
        warnings.warn(
            f"truncated length {val:.6g} fell below ell_na/2 = {ell_na / 2}; "
            "the expansion coefficients look untrustworthy here",
            sk.PrecisionWarning)
    return float(val)


def _edge_words(g: int, n: int) -> list[tuple[int, ...]]:
    return [w.letters for w in fg.enumerate_reduced(g, n)]


def zM_eval(fam: sk.SchottkyFamily, m: int, z: complex, s: complex, *,
            table: CocycleTable | None = None,
            horizon: int | None = None) -> complex:
    """Z_M(fam, z, s) = det(I - V(s)) on the shift graph of horizon words.

    V is indexed by reduced words of length horizon-1; the edge from word a
    to word b = a[1:] + (j,) carries exp((s/log(1/|z|)) * Re l_M(a[0], b)(z)).
    Entire in s.
    """
    z = complex(z)
    if not 0 < abs(z) < 1 / math.e:
        raise ValueError("need 0 < |z| < 1/e")
    if table is None:
        n = horizon if horizon is not None else choose_horizon(fam, m).n
        table = cocycle_table(fam, m, n)
    elif table.m != m:
        raise ValueError(f"table was built for M = {table.m}, not {m}")
    g = table.g
    n = table.horizon
    words = _edge_words(g, n - 1)
    size = len(words)
    if size > MATRIX_CAP:
        raise ValueError(f"edge matrix size {size} exceeds cap {MATRIX_CAP}")
    big_l = math.log(1.0 / abs(z))
    mu = {key: la.eval_log(e.l_m, z).real / big_l
          for key, e in table.entries.items()}
    idx = {w: i for i, w in enumerate(words)}
    s = complex(s)
    mat = np.zeros((size, size), dtype=complex)
    for ia, a in enumerate(words):
        last_inv = fg.inverse_letter(a[-1], g)
        for j in range(2 * g):
            if j == last_inv:
                continue
            b = a[1:] + (j,)
            mat[ia, idx[b]] = cmath.exp(s * mu[(a[0], b)])
    return complex(np.linalg.det(np.eye(size) - mat))


def _snap(c: complex) -> complex:
    re = 0.0 if abs(c.real) <= SNAP_TOL else c.real
    im = 0.0 if abs(c.imag) <= SNAP_TOL else c.imag
    return complex(re, im)


def _canonical_mu(lm: la.LogSeries, m: int) -> la.LogSeries:
    """Exponent-basis form: only Re b0 is observable inside exp(s Re(.))."""
    body = [complex(_snap(lm.analytic[0]).real, 0.0)] if lm.analytic else []
    body += [_snap(b) for b in lm.analytic[1:m + 1]]
    return la.LogSeries(na_part=lm.na_part, analytic=tuple(body))


def _mu_agree(x: la.LogSeries, y: la.LogSeries, tol: float = MU_TOL) -> bool:
    if x.na_part != y.na_part or x.trunc != y.trunc:
        return False
    return all(abs(a - b) <= tol for a, b in zip(x.analytic, y.analytic))


@dataclasses.dataclass(frozen=True)
class SymbolicZetaM:
    """det(I - V) as an exact polynomial over exponent variables.

    Each basis element mu_j is a LogSeries; the variable u_j evaluates to
    exp(s * (na_j + Re(analytic_j(z)) / log(1/|z|))). terms maps exponent
    vectors over the basis to integer coefficients. prefactor, when set,
    multiplies the polynomial by sign * prod u_j^{k_j}.
    """

    m: int
    horizon: int
    window: int
    basis: tuple[la.LogSeries, ...]
    terms: tuple[tuple[tuple[int, ...], int], ...]
    prefactor: tuple[tuple[int, ...], int] | None = None

    def mu_values(self, z: complex) -> list[float]:
        z = complex(z)
        if not 0 < abs(z) < 1:
            raise ValueError("need 0 < |z| < 1")
        big_l = math.log(1.0 / abs(z))
        return [la.eval_log(mu, z).real / big_l for mu in self.basis]

    def eval(self, z: complex, s: complex) -> complex:
        nu = self.mu_values(z)
        s = complex(s)
        acc = 0j
        for exps, coeff in self.terms:
            acc += coeff * cmath.exp(s * sum(k * v for k, v in zip(exps, nu)))
        if self.prefactor is not None:
            exps, sign = self.prefactor
            acc *= sign * cmath.exp(s * sum(k * v for k, v in zip(exps, nu)))
        return acc


def _collapse_window(table: CocycleTable) -> int:
    """Smallest r such that l_M only depends on the first r following letters."""
    for r in range(1, table.horizon - 1):
        groups: dict = {}
        ok = True
        for (i, b), e in table.entries.items():
            key = (i, b[:r])
            if key in groups:
                if not la.log_agree(groups[key], e.l_m, tol=CERT_TOL,
                                    mod_two_pi_i=True):
                    ok = False
                    break
            else:
                groups[key] = e.l_m
        if ok:
            return r
    return table.horizon - 1


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            key = tuple(a + b for a, b in zip(e1, e2))
            out[key] = out.get(key, 0) + c1 * c2
    return out


def _poly_axpy(dst: dict, src: dict, scalar) -> None:
    for e, c in src.items():
        v = dst.get(e, 0) + scalar * c
        if v:
            dst[e] = v
        elif e in dst:
            del dst[e]


def _det_symbolic(adj, n_vars: int, size: int) -> dict:
    """det(I - V) with single-variable entries, by Newton's identities.

    Walk profiles over the variables are exponent-vector monomials; power
    sums come from sparse matrix powers, elementary symmetric functions
    from exact rational recursion. Coefficients must come out integral.
    """
    units = [tuple(1 if t == j else 0 for t in range(n_vars))
             for j in range(n_vars)]
    cur: dict = {}
    for a, row in enumerate(adj):
        for b, j in row:
            ent = cur.setdefault((a, b), {})
            ent[units[j]] = ent.get(units[j], 0) + 1
    p: list = [None] * (size + 1)
    for k in range(1, size + 1):
        pk: dict = {}
        for a in range(size):
            ent = cur.get((a, a))
            if ent:
                _poly_axpy(pk, ent, 1)
        p[k] = pk
        if k == size:
            break
        nxt: dict = {}
        for (a, b), poly in cur.items():
            for c, j in adj[b]:
                dst = nxt.setdefault((a, c), {})
                uj = units[j]
                for e, coeff in poly.items():
                    key = tuple(x + y for x, y in zip(e, uj))
                    dst[key] = dst.get(key, 0) + coeff
        cur = nxt
    zero = (0,) * n_vars
    elem: list[dict] = [{zero: fractions.Fraction(1)}]
    for mm in range(1, size + 1):
        acc: dict = {}
        sign = 1
        for k in range(1, mm + 1):
            _poly_axpy(acc, _poly_mul(elem[mm - k], p[k]), sign)
            sign = -sign
        elem.append({key: fractions.Fraction(c) / mm for key, c in acc.items()})
    det: dict = {}
    sign = 1
    for mm in range(size + 1):
        _poly_axpy(det, elem[mm], sign)
        sign = -sign
    out = {}
    for key, c in det.items():
        c = fractions.Fraction(c)
        if c.denominator != 1:
            raise ArithmeticError("determinant coefficients must be integers")
        if c.numerator:
            out[key] = int(c.numerator)
    return out


def zM_symbolic(fam: sk.SchottkyFamily, m: int, *, horizon: int | None = None,
                size_cap: int = 16) -> SymbolicZetaM:
    """Expand det(I - V) exactly over the deduplicated exponent basis.

    The table is first collapsed to the smallest following-word window that
    still determines l_M; the edge matrix on the collapsed shift graph has
    the same cycle weights, hence the same determinant.
    """
    n = horizon if horizon is not None else choose_horizon(fam, m).n
    table = cocycle_table(fam, m, n)
    r = _collapse_window(table)
    g = table.g
    words = _edge_words(g, r)
    size = len(words)
    if size > size_cap:
        raise ExpansionError(
            f"collapsed edge matrix is {size}x{size} (cap {size_cap}); "
            "use zM_eval for numeric values")
    value_of: dict = {}
    for (i, b), e in sorted(table.entries.items()):
        key = (i, b[:r])
        if key not in value_of:
            value_of[key] = _canonical_mu(e.l_m, m)
    basis: list[la.LogSeries] = []
    var_of: dict = {}
    for key in sorted(value_of):
        v = value_of[key]
        for j, mu in enumerate(basis):
            if _mu_agree(mu, v):
                var_of[key] = j
                break
        else:
            var_of[key] = len(basis)
            basis.append(v)
    idx = {w: i for i, w in enumerate(words)}
    adj: list[list[tuple[int, int]]] = []
    for a in words:
        row = []
        last_inv = fg.inverse_letter(a[-1], g)
        for j in range(2 * g):
            if j == last_inv:
                continue
            b = a[1:] + (j,)
            row.append((idx[b], var_of[(a[0], b)]))
        adj.append(row)
    det = _det_symbolic(adj, len(basis), size)
    terms = tuple(sorted(det.items(), key=lambda kv: (sum(kv[0]), kv[0])))
    return SymbolicZetaM(m=m, horizon=n, window=r, basis=tuple(basis),
                         terms=terms)


def specialize(sym: SymbolicZetaM, m_new: int) -> SymbolicZetaM:
    """Truncate every basis element to its first m_new analytic coefficients
    and merge the variables that collide."""
    if not 0 <= m_new <= sym.m:
        raise ValueError("need 0 <= new M <= current M")
    truncated = [_canonical_mu(la.lt_log(mu, m_new), m_new)
                 for mu in sym.basis]
    new_basis: list[la.LogSeries] = []
    remap: list[int] = []
    for v in truncated:
        for j, mu in enumerate(new_basis):
            if _mu_agree(mu, v):
                remap.append(j)
                break
        else:
            remap.append(len(new_basis))
            new_basis.append(v)

    def remapped(exps: tuple[int, ...]) -> tuple[int, ...]:
        key = [0] * len(new_basis)
        for old_j, k in enumerate(exps):
            key[remap[old_j]] += k
        return tuple(key)

    terms: dict = {}
    for exps, coeff in sym.terms:
        key = remapped(exps)
        terms[key] = terms.get(key, 0) + coeff
    terms = {k: c for k, c in terms.items() if c}
    pref = None
    if sym.prefactor is not None:
        exps, sign = sym.prefactor
        pref = (remapped(exps), sign)
    return SymbolicZetaM(m=m_new, horizon=sym.horizon, window=sym.window,
                         basis=tuple(new_basis),
                         terms=tuple(sorted(terms.items(),
                                            key=lambda kv: (sum(kv[0]), kv[0]))),
                         prefactor=pref)


def ihara_from(sym: SymbolicZetaM) -> dict[int, int]:
    """Drop all analytic corrections: {length: coeff} meaning
    sum of coeff * e^{-s * length} over nonnegative integer lengths."""
    na = [-mu.na_part for mu in sym.basis]
    out: dict[int, int] = {}
    for exps, coeff in sym.terms:
        length = sum(k * a for k, a in zip(exps, na))
        out[length] = out.get(length, 0) + coeff
    if sym.prefactor is not None:
        exps, sign = sym.prefactor
        shift = sum(k * a for k, a in zip(exps, na))
        out = {length + shift: sign * coeff for length, coeff in out.items()}
    return {k: c for k, c in sorted(out.items()) if c}


def eval_exp_poly(poly: dict[int, int], s: complex) -> complex:
    """Value of sum coeff * e^{-s length} for an ihara_from polynomial."""
    s = complex(s)
    return sum(c * cmath.exp(-s * k) for k, c in poly.items())


def _format_coeff(c: complex) -> str:
    if c.imag == 0:
        v = c.real
        if v == int(v):
            return str(int(v))
        return f"{v:.12g}"
    return f"({c.real:.12g}{c.imag:+.12g}i)"


def _format_mu(mu: la.LogSeries) -> str:
    inner = []
    if mu.analytic and mu.analytic[0]:
        inner.append(_format_coeff(mu.analytic[0]))
    poly = []
    for k, b in enumerate(mu.analytic[1:], start=1):
        if b:
            var = "z" if k == 1 else f"z^{k}"
            poly.append(f"{_format_coeff(b)}*{var}")
    if poly:
        inner.append("Re(" + " + ".join(poly) + ")")
    head = str(mu.na_part)
    if inner:
        head += " + (" + " + ".join(inner) + ")/log(1/|z|)"
    return head


def format_symbolic(sym: SymbolicZetaM) -> str:
    lines = [f"Z_M polynomial: M={sym.m}, horizon={sym.horizon}, "
             f"window={sym.window}, {len(sym.basis)} variables, "
             f"{len(sym.terms)} terms"]
    for j, mu in enumerate(sym.basis):
        lines.append(f"  u{j + 1} = exp(s*({_format_mu(mu)}))")
    chunks = []
    for i, (exps, coeff) in enumerate(sym.terms):
        mono = "*".join(f"u{j + 1}" + (f"^{k}" if k > 1 else "")
                        for j, k in enumerate(exps) if k)
        mag = abs(coeff)
        body = mono if (mag == 1 and mono) else \
            (f"{mag}" if not mono else f"{mag}*{mono}")
        if i == 0:
            chunks.append(body if coeff > 0 else f"-{body}")
        else:
            chunks.append(("+ " if coeff > 0 else "- ") + body)
    lines.append("  P = " + " ".join(chunks))
    if sym.prefactor is not None:
        exps, sign = sym.prefactor
        mono = "*".join(f"u{j + 1}" + (f"^{k}" if k > 1 else "")
                        for j, k in enumerate(exps) if k)
        lines.append(f"  prefactor: {'-' if sign < 0 else ''}{mono or '1'}")
    return "\n".join(lines)
