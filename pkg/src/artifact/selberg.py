"""Selberg zeta functions of Schottky families.

Two routes to Z(Gamma_z, s) at a numeric parameter z. The Euler products
multiply (1 - e^{-(s+k) ell}) factors (one k for the SL2(R) convention, a
(k1, k2) pair with holonomy twist for SL2(C)) over a table of primitive
conjugacy classes, with certified k-tails and an empirically extrapolated
class-tail. The Fredholm determinant represents the transfer operator
L_s u(w) = sum_a a'(w)^s u(a(w)) on square-integrable holomorphic functions
over the Schottky discs and returns det(I - L_s), which equals Z(Gamma_z, s)
for real families; refining the discs to word length N >= 1 changes the
matrix but not the determinant.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
import warnings

import numpy as np

from . import freegroup as fg
from . import schottky as sk
from .graphzeta import TailBoundWarning

_RESCALE_AT = 1e150

# auxiliary parameters for the na-length slope; chosen well inside every
# validity radius so corrections to log|tr| are O(e^{-10})
_SLOPE_GAP = 2.0


@dataclasses.dataclass(frozen=True)
class GeodesicEntry:
    cls: fg.ConjugacyClass
    ell: float
    theta: float
    na: int

    @property
    def word(self) -> fg.Word:
        return self.cls.representative


@dataclasses.dataclass(frozen=True)
class GeodesicTable:
    z: complex
    word_len_max: int
    g: int
    entries: tuple[GeodesicEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def ell_min(self) -> float:
        return min(e.ell for e in self.entries)


def _norm_angle(theta: float) -> float:
    while theta <= -math.pi:
        theta += 2 * math.pi
    while theta > math.pi:
        theta -= 2 * math.pi
    return theta


def _displacement_scaled(tr: complex, off: float) -> tuple[float, float]:
    """(ell, theta) from a trace stored as tr * e^{off} with off >= 0."""
    if tr == 0:
        raise ValueError("zero trace: not loxodromic")
    log_mag = off + math.log(abs(tr))
    if log_mag > 340.0:
        # lambda = tr + O(1/tr); e^{off} > 0 leaves the phase untouched
        return 2.0 * log_mag, _norm_angle(2.0 * cmath.phase(tr))
    if off > 690.0:
        raise ValueError("trace cancels catastrophically under rescaling")
    return sk.displacement_of_trace(tr * math.exp(off))


def _canonical_primitive(letters: tuple[int, ...]) -> bool:
    """Lexicographically minimal among rotations and aperiodic."""
    n = len(letters)
    doubled = letters + letters
    for r in range(1, n):
        rot = doubled[r:r + n]
        if rot < letters:
            return False
        if rot == letters:
            return False
    return True


def _flat_letter_matrices(fam: sk.SchottkyFamily, z: complex) -> list[tuple]:
    return [(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]),
             complex(m[1, 1])) for m in sk.letter_matrices_at(fam, z)]


def geodesic_table(fam: sk.SchottkyFamily, z: complex,
                   word_len_max: int) -> GeodesicTable:
    """All primitive oriented classes of word length <= word_len_max at z.

    Lengths and holonomies come from the traces of the numeric word
    matrices (products are rescaled on the fly, so long words cannot
    overflow). The non-Archimedean length is recovered as the slope of
    log|tr| against log(1/|z'|) at two auxiliary parameters z' deep inside
    the validity disc, where it is integral to working precision. Entries
    are sorted by length, ties broken by the canonical word.
    """
    if word_len_max < 1:
        raise ValueError("word_len_max >= 1 required")
    if not 0 < abs(z) < fam.validity_radius:
        raise ValueError(f"|z|={abs(z)} outside validity radius "
                         f"{fam.validity_radius}")
    g = fam.g
    two_g = 2 * g
    inv = [fg.inverse_letter(i, g) for i in range(two_g)]
    log_a = max(10.0, math.log(1 / fam.validity_radius) + 8.0)
    log_b = log_a + _SLOPE_GAP
    mats0 = _flat_letter_matrices(fam, z)
    mats1 = _flat_letter_matrices(fam, math.exp(-log_a))
    mats2 = _flat_letter_matrices(fam, math.exp(-log_b))

    allowed = [[tuple(k for k in range(first, two_g) if k != inv[last])
                for last in range(two_g)] for first in range(two_g)]

    entries: list[GeodesicEntry] = []
    worst_slope = 0.0

    def mul(st, mk):
        a, b, c, d, off = st
        e, f, p, q = mk
        na_ = a * e + b * p
        nb = a * f + b * q
        nc = c * e + d * p
        nd = c * f + d * q
        m = abs(na_)
        t = abs(nb)
        if t > m:
            m = t
        t = abs(nc)
        if t > m:
            m = t
        t = abs(nd)
        if t > m:
            m = t
        if m > _RESCALE_AT:
            r = 1.0 / m
            return (na_ * r, nb * r, nc * r, nd * r, off + math.log(m))
        return (na_, nb, nc, nd, off)

    def accept(path, s0, s1, s2):
        nonlocal worst_slope
        letters = tuple(path)
        ell, theta = _displacement_scaled(s0[0] + s0[3], s0[4])
        if ell <= 0:
            raise ValueError(f"non-positive length for {letters}")
        la_ = s1[4] + math.log(abs(s1[0] + s1[3]))
        lb_ = s2[4] + math.log(abs(s2[0] + s2[3]))
        slope = (lb_ - la_) / _SLOPE_GAP
        dev = abs(slope - round(slope))
        if dev > worst_slope:
            worst_slope = dev
        na = 2 * round(slope)
        if na < 1:
            raise ValueError(f"word {letters} has non-positive na length")
        word = fg.Word(g=g, letters=letters)
        entries.append(GeodesicEntry(
            cls=fg.ConjugacyClass(representative=word, primitive=True),
            ell=ell, theta=theta, na=na))

    def walk(path, occs, s0, s1, s2):
        last = path[-1]
        first = path[0]
        if last != inv[first]:
            if not occs:
                accept(path, s0, s1, s2)
            elif _canonical_primitive(tuple(path)):
                accept(path, s0, s1, s2)
        pos = len(path)
        if pos == word_len_max:
            return
        for k in allowed[first][last]:
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
            walk(path, new_occs,
                 mul(s0, mats0[k]), mul(s1, mats1[k]), mul(s2, mats2[k]))
            path.pop()

    for j in range(two_g):
        walk([j], [],
             mats0[j] + (0.0,), mats1[j] + (0.0,), mats2[j] + (0.0,))

    if worst_slope > 0.2:
        warnings.warn(f"na slope deviates from integer by {worst_slope:.3f}; "
                      "auxiliary parameters may be too large",
                      sk.PrecisionWarning)
    entries.sort(key=lambda e: (e.ell, e.cls.representative.letters))
    return GeodesicTable(z=complex(z), word_len_max=word_len_max, g=g,
                         entries=tuple(entries))


@dataclasses.dataclass(frozen=True)
class EulerProduct:
    value: complex
    k_tail: float
    class_tail: float
    k_max: int

    @property
    def tail_bound(self) -> float:
        return self.k_tail + self.class_tail

    def __complex__(self) -> complex:
        return complex(self.value)


def _class_tail(table: GeodesicTable, per_class: np.ndarray,
                lengths: np.ndarray) -> float:
    """Extrapolate sum of per-class log-factor bounds beyond the table.

    per_class[j] bounds the full k-sum |log| contribution of class j.
    Word-length blocks U_n are summed; the last ratios U_n/U_{n-1} are fit
    to a geometric and the tail is U_nmax * q/(1-q) with q inflated 10%.
    Empirical (the true abscissa is only sampled), so callers validate
    against an independent route where it matters.
    """
    del lengths
    n_max = table.word_len_max
    u = np.zeros(n_max + 1)
    for e, p in zip(table.entries, per_class):
        u[len(e.cls.representative.letters)] += p
    if u[n_max] == 0.0:
        return 0.0
    ratios = [u[n] / u[n - 1] for n in range(max(2, n_max - 3), n_max + 1)
              if u[n - 1] > 0.0]
    if not ratios:
        return math.inf
    q = 1.1 * max(ratios)
    if q >= 1.0:
        return math.inf
    return float(u[n_max] * q / (1.0 - q))


def _euler_core(table: GeodesicTable, s: complex, k_max: int | None,
                tail_tol: float, convention: str) -> EulerProduct:
    s = complex(s)
    sigma = s.real
    if not table.entries:
        return EulerProduct(value=1.0 + 0j, k_tail=math.inf,
                            class_tail=math.inf, k_max=k_max or 0)
    ells = np.array([e.ell for e in table.entries])
    thetas = np.array([e.theta for e in table.entries])
    ell_min = float(ells.min())

    def k_tail_bound(k: int) -> float:
        if math.exp(-(sigma + k + 1) * ell_min) > 0.5:
            return math.inf
        damp = np.exp(-(sigma + k + 1) * ells)
        if convention == "R":
            return float(np.sum(2.0 * damp / (1.0 - np.exp(-ells))))
        return float(np.sum(4.0 * damp / (1.0 - np.exp(-ells)) ** 2))

    if k_max is None:
        k_max = 12
        while k_tail_bound(k_max) > 1e-12 and k_max < 64:
            k_max += 4
    k_tail = k_tail_bound(k_max)

    if sigma > 0 and math.exp(-sigma * ell_min) <= 0.5:
        damp = 2.0 * np.exp(-sigma * ells)
        if convention == "R":
            per_class = damp / (1.0 - np.exp(-ells))
        else:
            per_class = damp / (1.0 - np.exp(-ells)) ** 2
        class_tail = _class_tail(table, per_class, ells)
    else:
        class_tail = math.inf

    log_z = 0j
    if convention == "R":
        for k in range(k_max + 1):
            log_z += np.sum(np.log(1.0 - np.exp(-(s + k) * ells)))
    else:
        for k1 in range(k_max + 1):
            for k2 in range(k_max + 1):
                w = np.exp(-(s + k1 + k2) * ells - 1j * (k1 - k2) * thetas)
                log_z += np.sum(np.log(1.0 - w))
    result = EulerProduct(value=complex(cmath.exp(log_z)),
                          k_tail=float(k_tail),
                          class_tail=float(class_tail), k_max=k_max)
    if result.tail_bound > tail_tol:
        warnings.warn(f"Euler tail bound {result.tail_bound:.2e} exceeds "
                      f"{tail_tol:.1e} at s={s}", TailBoundWarning)
    return result


def euler_product_R(table: GeodesicTable, s: complex,
                    k_max: int | None = None,
                    tail_tol: float = 1e-8) -> EulerProduct:
    """prod_gamma prod_{k <= k_max} (1 - e^{-(s+k) ell}), SL2(R) convention.

    k_max=None starts at 12 and grows until the k-tail bound is <= 1e-12.
    Both truncation tails (k beyond k_max, classes beyond the table) are
    reported as bounds on |Delta log Z|; a warning fires above tail_tol.
    """
    return _euler_core(table, s, k_max, tail_tol, "R")


def euler_product_C(table: GeodesicTable, s: complex,
                    k_max: int | None = None,
                    tail_tol: float = 1e-8) -> EulerProduct:
    """SL2(C) convention with holonomy:
    prod_gamma prod_{k1,k2 <= k_max} (1 - e^{-(s+k1+k2) ell} e^{-i theta (k1-k2)}).
    """
    return _euler_core(table, s, k_max, tail_tol, "C")


@dataclasses.dataclass(frozen=True)
class TransferConfig:
    k_basis: int = 24
    n_refine: int = 1
    q_samples: int | None = None
    branch: str = "real-positive"

    def __post_init__(self):
        if self.k_basis < 4:
            raise ValueError("basis size K >= 4 required")
        if self.n_refine < 1:
            raise ValueError("disc refinement word length N >= 1 required")
        if self.q < 4 * self.k_basis:
            raise ValueError("Q >= 4K samples required")
        if self.branch != "real-positive":
            raise ValueError(f"unknown branch convention {self.branch!r}")

    @property
    def q(self) -> int:
        return 4 * self.k_basis if self.q_samples is None else self.q_samples


def refinement_words(g: int, n: int) -> list[tuple[int, ...]]:
    """Reduced words of length n indexing the refined disc system."""
    return [w.letters for w in fg.enumerate_reduced(g, n)]


def _word_disc(maps, letter_discs, word) -> sk.Disc:
    d = letter_discs[word[-1]]
    for i in reversed(word[:-1]):
        d = sk.mobius_image_disc(maps[i], d)
    return d


def transfer_matrix(fam: sk.SchottkyFamily, z: complex, s: complex,
                    cfg: TransferConfig | None = None) -> np.ndarray:
    """Matrix of the transfer operator in the monomial bases.

    Block (source word a = letter + b', target word b): Taylor coefficients
    about the target center of a'(w)^s phi_n(a(w)), from Q boundary samples
    on the circle of radius R_target/2 and a discrete Fourier transform,
    rescaled to the sqrt(m+1) (w/R)^m normalization. The branch of a'(w)^s
    is positive on the real axis; real families only.
    """
    cfg = cfg or TransferConfig()
    g = fam.g
    two_g = 2 * g
    n_words = two_g * (two_g - 1) ** (cfg.n_refine - 1)
    size = n_words * cfg.k_basis
    if size > 4096:
        raise ValueError(f"matrix size {size} exceeds the 4096 cap; lower K "
                         "or the refinement length")
    s = complex(s)
    raw = sk.letter_matrices_at(fam, z)
    scale = max(float(np.max(np.abs(m))) for m in raw)
    worst_imag = max(float(np.max(np.abs(m.imag))) for m in raw)
    if worst_imag > 1e-9 * max(scale, 1.0):
        raise ValueError("determinant route requires a real family: generator "
                         f"matrices have imaginary size {worst_imag:.2e} at "
                         f"z={z}")
    report = sk.check_schottky_figure(fam, z)
    if not report.ok:
        raise ValueError(
            f"Schottky figure fails at z={z}: disjointness margin "
            f"{report.min_disjoint_margin:.3f}, mapping margin "
            f"{report.min_mapping_margin:.3f}")
    maps = [sk.mobius_from_matrix(m)[0] for m in raw]
    pairs = sk.ford_discs(fam, z)
    letter_discs = [pairs[i][0] for i in range(g)] + \
                   [pairs[i][1] for i in range(g)]
    words = refinement_words(g, cfg.n_refine)
    index = {w: j for j, w in enumerate(words)}
    discs = {w: _word_disc(maps, letter_discs, w) for w in words}

    K = cfg.k_basis
    Q = cfg.q
    roots = np.exp(2j * np.pi * np.arange(Q) / Q)
    powers = np.arange(K)
    col_norm = np.sqrt(powers + 1.0)
    row_scale = (2.0 ** powers) / (Q * np.sqrt(powers + 1.0))

    out = np.zeros((size, size), dtype=complex)
    for b_word in words:
        db = discs[b_word]
        w_q = db.center + (db.radius / 2.0) * roots
        ib = index[b_word]
        forbidden = fg.inverse_letter(b_word[0], g)
        for i in range(two_g):
            if i == forbidden:
                continue
            a_word = (i,) + b_word[:-1]
            da = discs[a_word]
            mc = maps[i]
            h = mc.c * w_q + mc.d
            h0 = mc.c * db.center + mc.d
            ratio = h / h0
            if np.any(ratio.real <= 0.0):
                raise ValueError(
                    "branch ambiguity: a'(w) leaves the half-plane of its "
                    f"center value on the sampling circle of {b_word}")
            log_h = math.log(abs(h0)) + np.log(ratio)
            weight = np.exp(-2.0 * s * log_h)
            u = ((mc.a * w_q + mc.b) / h - da.center) / da.radius
            if float(np.max(np.abs(u))) >= 1.0:
                raise ValueError(f"images of disc {b_word} under letter {i} "
                                 "escape the source disc")
            f = weight[:, None] * (u[:, None] ** powers[None, :]) \
                * col_norm[None, :]
            block = np.fft.fft(f, axis=0)[:K, :] * row_scale[:, None]
            ia = index[a_word]
            out[ib * K:(ib + 1) * K, ia * K:(ia + 1) * K] = block
    return out


def zeta_det(fam: sk.SchottkyFamily, z: complex, s: complex,
             cfg: TransferConfig | None = None) -> complex:
    """det(I - L_s): the Selberg zeta of the real family at z, entire in s."""
    m = transfer_matrix(fam, z, s, cfg)
    return complex(np.linalg.det(np.eye(m.shape[0], dtype=complex) - m))


def rescaled_zeta(fam: sk.SchottkyFamily, z: complex, s: complex,
                  method: str = "det", cfg: TransferConfig | None = None,
                  table: GeodesicTable | None = None,
                  word_len_max: int = 12, k_max: int | None = None,
                  tail_tol: float = 1e-8) -> complex:
    """Z(Gamma_z, s / log(1/|z|)), the normalization under which the family
    degenerates onto the Ihara zeta of its skeleton graph."""
    if method not in ("det", "euler"):
        raise ValueError(f"method must be 'det' or 'euler', got {method!r}")
    s_eff = complex(s) / math.log(1 / abs(z))
    if method == "det":
        return zeta_det(fam, z, s_eff, cfg)
    tb = table if table is not None else geodesic_table(fam, z, word_len_max)
    return euler_product_R(tb, s_eff, k_max=k_max, tail_tol=tail_tol).value
