"""Zero location for entire functions given as numeric black boxes.

Argument-principle counting over rectangles with adaptive boundary
sampling, recursive quadrisection down to cells holding one zero cluster,
Newton refinement with numeric derivatives, a minimization fallback, and
first-real-zero wrappers used for Hausdorff dimension.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
from typing import Callable

from . import selberg as sl
from . import schottky as sk

# boundary values this close to zero (relative to the boundary scale) are
# treated as unresolvable: the region is dilated instead
PERT_REL = 1e-13
_SEP_FLOOR = 1e-8
_SPLIT_FRACTIONS = (0.5, 0.513, 0.4821, 0.537, 0.4609)


class BoundaryZeroError(RuntimeError):
    """A zero sits on (or numerically on) the integration boundary."""


class RootScanError(ValueError):
    """A real-zero scan could not certify a result (no sign change, or an
    uncertifiable truncation tail)."""


class _Unresolved(Exception):
    pass


@dataclasses.dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle in the complex plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("region must have nonempty interior")

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def center(self) -> complex:
        return complex((self.re_min + self.re_max) / 2,
                       (self.im_min + self.im_max) / 2)

    def corners(self) -> tuple[complex, complex, complex, complex]:
        return (complex(self.re_min, self.im_min),
                complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max),
                complex(self.re_min, self.im_max))

    def contains(self, s: complex, pad: float = 0.0) -> bool:
        return (self.re_min - pad <= s.real <= self.re_max + pad
                and self.im_min - pad <= s.imag <= self.im_max + pad)

    def dilate(self, factor: float) -> "Region":
        c = self.center
        hw = self.width * factor / 2
        hh = self.height * factor / 2
        return Region(c.real - hw, c.real + hw, c.imag - hh, c.imag + hh)

    def quadrants(self, fr: float = 0.5, fi: float = 0.5
                  ) -> tuple["Region", ...]:
        xc = self.re_min + fr * self.width
        yc = self.im_min + fi * self.height
        return (Region(self.re_min, xc, self.im_min, yc),
                Region(xc, self.re_max, self.im_min, yc),
                Region(self.re_min, xc, yc, self.im_max),
                Region(xc, self.re_max, yc, self.im_max))


@dataclasses.dataclass(frozen=True)
class Zero:
    location: complex
    multiplicity: int
    residual: float


@dataclasses.dataclass(frozen=True)
class ZeroSet:
    zeros: tuple[Zero, ...]
    provenance: str = ""
    notes: tuple[str, ...] = ()

    def locations(self) -> list[complex]:
        return [z.location for z in self.zeros]

    def total_multiplicity(self) -> int:
        return sum(z.multiplicity for z in self.zeros)


def _boundary_points(region: Region, per_side: int) -> list[complex]:
    cs = region.corners()
    pts: list[complex] = []
    for k in range(4):
        a, b = cs[k], cs[(k + 1) % 4]
        for j in range(per_side):
            pts.append(a + (b - a) * (j / per_side))
    pts.append(cs[0])
    return pts


def _arg_increment(f, p0, p1, v0, v1, floor, depth) -> float:
    # the principal value of arg(v1/v0) is only trusted when a midpoint
    # split reproduces it; otherwise a fast near-boundary zero can wind a
    # full extra turn between samples without tripping the pi/2 test
    if depth >= 32:
        raise _Unresolved
    d = cmath.phase(v1 / v0)
    pm = 0.5 * (p0 + p1)
    vm = complex(f(pm))
    if abs(vm) <= floor:
        raise _Unresolved
    dl = cmath.phase(vm / v0)
    dr = cmath.phase(v1 / vm)
    if (abs(d) < math.pi / 2 and abs(dl) < math.pi / 2
            and abs(dr) < math.pi / 2 and abs(dl + dr - d) < 1e-9):
        return dl + dr
    return (_arg_increment(f, p0, pm, v0, vm, floor, depth + 1)
            + _arg_increment(f, pm, p1, vm, v1, floor, depth + 1))


def _try_winding(f, region: Region, boundary_samples: int) -> int | None:
    per_side = max(4, boundary_samples // 4)
    pts = _boundary_points(region, per_side)
    vals = [complex(f(p)) for p in pts]
    mags = [abs(v) for v in vals]
    scalemax = max(mags)
    floor = 10 * PERT_REL * scalemax
    if scalemax == 0.0 or min(mags) <= floor:
        return None
    total = 0.0
    try:
        for k in range(len(pts) - 1):
            total += _arg_increment(f, pts[k], pts[k + 1],
                                    vals[k], vals[k + 1], floor, 0)
    except _Unresolved:
        return None
    winding = total / (2 * math.pi)
    n = round(winding)
    if abs(winding - n) > 0.25 or n < 0:
        return None
    return int(n)


def count_zeros(f: Callable[[complex], complex], region: Region,
                boundary_samples: int = 64) -> int:
    """Number of zeros (with multiplicity) inside the region.

    The winding number of f along the boundary is accumulated with adaptive
    sample doubling until every phase increment is below pi/2. When the
    boundary passes too close to a zero the region is dilated by 1%, at
    most three times.
    """
    reg = region
    for attempt in range(4):
        got = _try_winding(f, reg, boundary_samples)
        if got is not None:
            # a zero sitting exactly on the contour between samples can pass
            # the magnitude floor yet corrupt the count; certify by count
            # stability under a small contour perturbation
            check = _try_winding(f, reg.dilate(1.005), boundary_samples)
            if check == got:
                return got
        if attempt < 3:
            reg = reg.dilate(1.01)
    raise BoundaryZeroError(
        f"zero too close to the boundary of {region} after 3 dilations")


def _newton(f, region: Region, s0: complex, tol: float, h: float):
    s = s0
    best = (s0, abs(complex(f(s0))))
    prev = math.inf
    stall = 0
    for _ in range(80):
        v = complex(f(s))
        av = abs(v)
        if av < best[1]:
            best = (s, av)
        if av <= tol and av < 1e-3 * prev:
            return s, av, True
        if av >= 0.7 * prev:
            stall += 1
            if stall >= 6:
                break
        else:
            stall = 0
        prev = min(prev, av)
        d = (complex(f(s + h)) - complex(f(s - h))) / (2 * h)
        if d == 0:
            break
        s_next = s - v / d
        if not region.dilate(2.0).contains(s_next):
            break
        s = s_next
    s, av = best
    return s, av, av <= tol


def _shrink_minimize(f, center: complex, radius: float, tol: float):
    s, fv = center, abs(complex(f(center)))
    r = radius
    for _ in range(400):
        if fv <= tol or r <= 1e-15 * max(1.0, abs(s)):
            break
        improved = False
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                cand = s + complex(dx * r, dy * r)
                cv = abs(complex(f(cand)))
                if cv < fv:
                    s, fv = cand, cv
                    improved = True
        if not improved:
            r *= 0.5
    return s, fv


def _refine(f, region: Region, mult: int, tol: float):
    """Locate the zero (cluster) of the cell; returns (loc, residual, note)."""
    # difference steps are floored so that deeply subdivided cells do not
    # drive the numeric derivative below evaluation noise
    scale = max(region.width, region.height,
                0.01 * (1.0 + abs(region.center)))
    h = 1e-6 * scale
    note = None
    if mult == 2:
        # a double zero of f is a simple zero of f'; Newton on the numeric
        # derivative recovers full location accuracy
        hd = 1e-5 * scale

        def df(s):
            return (complex(f(s + hd)) - complex(f(s - hd))) / (2 * hd)

        s, _, ok = _newton(df, region, region.center, 1e-30, h)
        if ok or abs(complex(f(s))) <= tol:
            return s, abs(complex(f(s))), None
    s, res, ok = _newton(f, region, region.center, tol, h)
    if not ok:
        s, res = _shrink_minimize(f, region.center, 0.75 * scale, tol)
        note = (f"newton stagnated near {region.center.real:.6g}"
                f"{region.center.imag:+.6g}i; used minimization fallback")
    return s, res, note


def _isolate(f, region: Region, count: int, tol: float, boundary_samples: int,
             zeros: list, notes: list, sep_floor: float, depth: int = 0
             ) -> None:
    diag = math.hypot(region.width, region.height)
    if count == 1 or diag <= sep_floor or depth >= 48:
        loc, res, note = _refine(f, region, count, tol)
        if note:
            notes.append(note)
        zeros.append(Zero(location=loc, multiplicity=count, residual=res))
        return
    for frac in _SPLIT_FRACTIONS:
        quads = region.quadrants(frac, frac)
        try:
            counts = [count_zeros(f, q, boundary_samples) for q in quads]
        except BoundaryZeroError:
            continue
        if sum(counts) == count:
            for q, c in zip(quads, counts):
                if c:
                    _isolate(f, q, c, tol, boundary_samples, zeros, notes,
                             sep_floor, depth + 1)
            return
    raise BoundaryZeroError(
        f"could not subdivide {region} without splitting a zero")


def _merge_clusters(zeros: list[Zero], radius: float) -> list[Zero]:
    # evaluation noise can split a multiple zero across a subdivision cut;
    # the refined copies land at the same point and are re-merged here
    merged: list[Zero] = []
    for z in zeros:
        for i, w in enumerate(merged):
            if abs(z.location - w.location) <= radius:
                better = z if z.residual < w.residual else w
                merged[i] = Zero(location=better.location,
                                 multiplicity=z.multiplicity + w.multiplicity,
                                 residual=better.residual)
                break
        else:
            merged.append(z)
    return merged


def _zero_sort_key(z: Zero):
    return (-round(z.location.real, 10), round(z.location.imag, 10),
            abs(z.location))


def find_zeros(f: Callable[[complex], complex], region: Region,
               tol: float = 1e-9, *, boundary_samples: int = 64,
               provenance: str = "") -> ZeroSet:
    """All zeros of f in the region with multiplicities.

    Recursive quadrisection (with deterministic cut jitter when a zero sits
    on a cut) isolates the zeros, Newton with a central-difference
    derivative refines them, and a shrinking-grid minimization of |f| backs
    up stagnating Newton runs; fallbacks are reported in notes. Zeros are
    ordered by descending real part, then ascending imaginary part, then
    ascending modulus.
    """
    total = count_zeros(f, region, boundary_samples)
    zeros: list[Zero] = []
    notes: list[str] = []
    # zeros closer than the separation floor are reported as one cluster
    # with summed multiplicity; evaluation noise splits an exact multiple
    # zero by far less than this at double precision
    sep = max(_SEP_FLOOR, 1e-6 * max(region.width, region.height))
    if total:
        _isolate(f, region, total, tol, boundary_samples, zeros, notes, sep)
    zeros = _merge_clusters(zeros, sep)
    zeros.sort(key=_zero_sort_key)
    return ZeroSet(zeros=tuple(zeros), provenance=provenance,
                   notes=tuple(notes))


def first_real_zero(f: Callable[[float], float], a: float, b: float,
                    tol: float = 1e-10, samples: int = 256) -> float:
    """Largest zero of a real-valued f in [a, b], given f(b) > 0.

    Scans from b downward for a sign change, then bisects.
    """
    if not a < b:
        raise ValueError("need a < b")
    hi_x = float(b)
    hi_v = float(f(hi_x))
    if not hi_v > 0:
        raise ValueError("f(b) > 0 required")
    # +0.0 counts as nonnegative: an underflowed positive function must not
    # report a fake zero
    for k in range(1, samples + 1):
        x = b - (b - a) * k / samples
        v = float(f(x))
        if v < 0:
            lo_x, hi = x, hi_x
            while hi - lo_x > tol:
                mid = 0.5 * (lo_x + hi)
                if float(f(mid)) < 0:
                    lo_x = mid
                else:
                    hi = mid
            return 0.5 * (lo_x + hi)
        hi_x, hi_v = x, v
    raise RootScanError(f"no sign change of f in [{a}, {b}]")


def hausdorff_dim(fam: sk.SchottkyFamily, z: complex | None = None,
                  method: str = "det", bracket: tuple[float, float] = (1e-3, 0.99),
                  tol: float = 1e-10, word_len_max: int = 12) -> float:
    """Hausdorff dimension of the limit set at parameter z.

    Computed as the first (largest) real zero of the Selberg zeta in the
    unrescaled variable s. method="det" (Fredholm determinant) is the
    supported route: the determinant is entire and changes sign at the
    zero. method="euler" demands a certified truncation tail at the bottom
    of the bracket; the class tail diverges at the critical exponent, so at
    practical truncation depths this raises instead of returning an
    uncertified number.
    """
    if z is None:
        z = fam.default_z
    if z is None:
        raise ValueError("no z given and the family has no default")
    a, b = bracket
    if method == "det":
        def func(s):
            return sl.zeta_det(fam, z, complex(s)).real
    elif method == "euler":
        table = sl.geodesic_table(fam, z, word_len_max)
        probe = sl.euler_product_R(table, complex(a))
        if not probe.tail_bound < 0.5 * abs(complex(probe)):
            raise RootScanError(
                "euler tail not certifiable near the zero "
                f"(tail bound {probe.tail_bound:.3e} at s = {a}); "
                "use method='det'")

        def func(s):
            return complex(sl.euler_product_R(table, complex(s))).real
    else:
        raise ValueError(f"unknown method {method!r}; use 'det' or 'euler'")
    return first_real_zero(func, a, b, tol)
