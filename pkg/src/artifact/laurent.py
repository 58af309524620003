"""Truncated Laurent series and logarithmic series over C.

A truncated Laurent series represents f(t) = t^order * (c_0 + c_1 t + ... + c_K t^K)
where only the listed coefficients are justified; everything beyond the window
[order, order + trunc] is unknown, everything below order is exactly zero.
Binary operations propagate the smallest justified truncation.

A LogSeries represents n * log(1/t) + b_0 + b_1 t + ... + b_K t^K, the shape
produced by taking plog of a Laurent series (na_part n = -order).
"""

from __future__ import annotations

import cmath
import dataclasses
import math

import numpy as np

DEFAULT_TRUNC = 32

# Leading coefficients at or below this absolute size are treated as exact
# zeros during canonicalization. Relative junk from float cancellation is
# deliberately kept; callers that need a robust order use leading_order.
CANON_EPS = 1e-300


class PrecisionError(ValueError):
    """Raised when an operation cannot justify any coefficient window."""


@dataclasses.dataclass(frozen=True, eq=False)
class TruncatedLaurentSeries:
    order: int
    coeffs: tuple[complex, ...]

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    def __repr__(self) -> str:
        if is_zero(self):
            return "TLS(0)"
        head = ", ".join(f"{c:.6g}" for c in self.coeffs[:4])
        tail = ", ..." if len(self.coeffs) > 4 else ""
        return f"TLS(t^{self.order} * [{head}{tail}], K={self.trunc})"


ZERO = TruncatedLaurentSeries(order=0, coeffs=(0j,))


def series(order: int, coeffs, trunc: int | None = None) -> TruncatedLaurentSeries:
    """Build a canonical series: strip exact-zero leading coefficients, pad to trunc."""
    cs = [complex(c) for c in coeffs]
    if trunc is not None:
        if trunc < 0:
            raise ValueError("trunc must be >= 0")
        cs = cs[: trunc + 1] + [0j] * (trunc + 1 - len(cs))
    if not cs:
        raise ValueError("empty coefficient list")
    while cs and abs(cs[0]) <= CANON_EPS:
        cs.pop(0)
        order += 1
    if not cs:
        return ZERO
    return TruncatedLaurentSeries(order=order, coeffs=tuple(cs))


def constant(c) -> TruncatedLaurentSeries:
    """The exact constant c, justified to the default window."""
    return series(0, [c], trunc=DEFAULT_TRUNC)


def monomial(order: int, c=1.0, trunc: int = DEFAULT_TRUNC) -> TruncatedLaurentSeries:
    return series(order, [c], trunc=trunc)


def is_zero(f: TruncatedLaurentSeries) -> bool:
    return len(f.coeffs) == 1 and f.coeffs[0] == 0


def _arr(f: TruncatedLaurentSeries) -> np.ndarray:
    return np.asarray(f.coeffs, dtype=complex)


def mul(f: TruncatedLaurentSeries, g: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
    if is_zero(f) or is_zero(g):
        return ZERO
    k = min(f.trunc, g.trunc)
    conv = np.convolve(_arr(f), _arr(g))[: k + 1]
    return series(f.order + g.order, conv.tolist(), trunc=k)


def neg(f: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
    if is_zero(f):
        return ZERO
    return TruncatedLaurentSeries(order=f.order, coeffs=tuple(-c for c in f.coeffs))


def scale(f: TruncatedLaurentSeries, c) -> TruncatedLaurentSeries:
    c = complex(c)
    if is_zero(f) or c == 0:
        return ZERO
    return TruncatedLaurentSeries(order=f.order, coeffs=tuple(c * x for x in f.coeffs))


def add(f: TruncatedLaurentSeries, g: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
    if is_zero(f):
        return g
    if is_zero(g):
        return f
    start = min(f.order, g.order)
    end = min(f.order + f.trunc, g.order + g.trunc)
    out = [0j] * (end - start + 1)
    for h in (f, g):
        for j, c in enumerate(h.coeffs):
            pos = h.order + j - start
            if 0 <= pos <= end - start:
                out[pos] += c
    return series(start, out, trunc=end - start)


def sub(f: TruncatedLaurentSeries, g: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
    return add(f, neg(g))


def reciprocal(g: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
    if is_zero(g):
        raise ValueError("division by zero series")
    c0 = g.coeffs[0]
    u = _arr(g) / c0
    k = g.trunc
    inv = np.zeros(k + 1, dtype=complex)
    inv[0] = 1.0
    for j in range(1, k + 1):
        inv[j] = -np.dot(u[1 : j + 1], inv[j - 1 :: -1][:j])
    return series(-g.order, (inv / c0).tolist(), trunc=k)


def div(f: TruncatedLaurentSeries, g: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
    if is_zero(g):
        raise ValueError("division by zero series")
    if is_zero(f):
        return ZERO
    return mul(f, reciprocal(g))


def power(f: TruncatedLaurentSeries, n: int) -> TruncatedLaurentSeries:
    if n < 0:
        return power(reciprocal(f), -n)
    out = series(0, [1.0], trunc=f.trunc if not is_zero(f) else DEFAULT_TRUNC)
    for _ in range(n):
        out = mul(out, f)
    return out


def sqrt(f: TruncatedLaurentSeries, branch: int = 0) -> TruncatedLaurentSeries:
    """Principal square root; branch=1 flips the sign. Requires even order."""
    if is_zero(f):
        return ZERO
    if f.order % 2 != 0:
        raise ValueError(f"sqrt of series with odd order {f.order}")
    c0 = f.coeffs[0]
    u = _arr(f) / c0
    k = f.trunc
    v = np.zeros(k + 1, dtype=complex)
    v[0] = 1.0
    for j in range(1, k + 1):
        acc = np.dot(v[1:j], v[j - 1 : 0 : -1]) if j >= 2 else 0.0
        v[j] = (u[j] - acc) / 2.0
    root = cmath.sqrt(c0)
    if branch % 2:
        root = -root
    return series(f.order // 2, (root * v).tolist(), trunc=k)


@dataclasses.dataclass(frozen=True, eq=False)
class LogSeries:
    """na_part * log(1/t) + analytic[0] + analytic[1] t + ... ."""

    na_part: int
    analytic: tuple[complex, ...]

    @property
    def trunc(self) -> int:
        return len(self.analytic) - 1

    def __repr__(self) -> str:
        head = ", ".join(f"{c:.6g}" for c in self.analytic[:4])
        tail = ", ..." if len(self.analytic) > 4 else ""
        return f"LogSeries({self.na_part}*log(1/t) + [{head}{tail}], K={self.trunc})"


def log_series(na_part: int, analytic) -> LogSeries:
    return LogSeries(na_part=int(na_part), analytic=tuple(complex(c) for c in analytic))


def plog(f: TruncatedLaurentSeries, branch: int = 0) -> LogSeries:
    """Laurent logarithm: plog(c0 t^m (1 + u)) = -m log(1/t) + log c0 + log(1 + u).

    log c0 uses the principal branch shifted by 2*pi*i*branch.
    """
    if is_zero(f):
        raise ValueError("plog of zero series")
    c0 = f.coeffs[0]
    u = _arr(f) / c0
    k = f.trunc
    ln = np.zeros(k + 1, dtype=complex)
    ln[0] = cmath.log(c0) + 2j * math.pi * branch
    for j in range(1, k + 1):
        acc = sum(i * ln[i] * u[j - i] for i in range(1, j))
        ln[j] = u[j] - acc / j
    return LogSeries(na_part=-f.order, analytic=tuple(ln.tolist()))


def log_add(x: LogSeries, y: LogSeries) -> LogSeries:
    k = min(x.trunc, y.trunc)
    out = [x.analytic[j] + y.analytic[j] for j in range(k + 1)]
    return LogSeries(na_part=x.na_part + y.na_part, analytic=tuple(out))


def log_sub(x: LogSeries, y: LogSeries) -> LogSeries:
    return log_add(x, log_scale(y, -1.0))


def log_scale(x: LogSeries, c) -> LogSeries:
    c = complex(c)
    if c.imag == 0 and float(c.real).is_integer():
        na = x.na_part * int(c.real)
    else:
        raise ValueError("LogSeries scaling must keep na_part integral")
    return LogSeries(na_part=na, analytic=tuple(c * b for b in x.analytic))


def lt(f: TruncatedLaurentSeries, m: int) -> TruncatedLaurentSeries:
    """Lower-truncation: keep t^order (c_0 + ... + c_m t^m); result trunc is m."""
    if is_zero(f):
        return ZERO
    if m < 0:
        raise ValueError("lt requires m >= 0")
    return series(f.order, list(f.coeffs[: m + 1]), trunc=min(m, f.trunc))


def lt_log(x: LogSeries, m: int) -> LogSeries:
    """Keep the na part and analytic coefficients b_0..b_m; m = -1 keeps na only."""
    if m < -1:
        raise ValueError("lt_log requires m >= -1")
    return LogSeries(na_part=x.na_part, analytic=tuple(x.analytic[: m + 1]))


def eval_series(f: TruncatedLaurentSeries, z: complex) -> complex:
    z = complex(z)
    if is_zero(f):
        return 0j
    if z == 0:
        if f.order < 0:
            raise ValueError("pole at z=0")
        return f.coeffs[0] if f.order == 0 else 0j
    acc = 0j
    for c in reversed(f.coeffs):
        acc = acc * z + c
    return acc * z**f.order


def eval_log(x: LogSeries, z: complex) -> complex:
    z = complex(z)
    if z == 0:
        raise ValueError("eval_log needs z != 0")
    acc = 0j
    for b in reversed(x.analytic):
        acc = acc * z + b
    return x.na_part * cmath.log(1.0 / z) + acc


def hybrid_norm(f: TruncatedLaurentSeries) -> float:
    """Sum over justified coefficients of max(|c_j|, 1 if c_j != 0) * e^{-(order+j)}."""
    if is_zero(f):
        return 0.0
    total = 0.0
    for j, c in enumerate(f.coeffs):
        a = abs(c)
        if a == 0:
            continue
        total += max(a, 1.0) * math.exp(-(f.order + j))
    return total


def leading_order(f: TruncatedLaurentSeries, rel_tol: float = 0.0) -> int:
    """Order of the first coefficient exceeding rel_tol * max |c_j|.

    rel_tol=0 gives the canonical order; a small positive rel_tol skips
    float-cancellation junk below the true leading term.
    """
    if is_zero(f):
        raise ValueError("zero series has no leading order")
    mags = [abs(c) for c in f.coeffs]
    cut = rel_tol * max(mags)
    for j, a in enumerate(mags):
        if a > cut:
            return f.order + j
    raise ValueError("no coefficient above threshold")


def coeffs_agree(f: TruncatedLaurentSeries, g: TruncatedLaurentSeries,
                 tol: float = 0.0) -> bool:
    """Compare on the common justified window; orders must match for nonzero series."""
    if is_zero(f) and is_zero(g):
        return True
    if is_zero(f) or is_zero(g):
        other = g if is_zero(f) else f
        return all(abs(c) <= tol for c in other.coeffs)
    if f.order != g.order:
        return False
    k = min(f.trunc, g.trunc)
    return all(abs(f.coeffs[j] - g.coeffs[j]) <= tol for j in range(k + 1))


def log_agree(x: LogSeries, y: LogSeries, tol: float = 0.0,
              mod_two_pi_i: bool = False) -> bool:
    """Compare LogSeries; with mod_two_pi_i the constant terms match mod 2*pi*i."""
    if x.na_part != y.na_part:
        return False
    k = min(x.trunc, y.trunc)
    if k < 0:
        return True
    d0 = x.analytic[0] - y.analytic[0]
    if mod_two_pi_i:
        turns = d0.imag / (2 * math.pi)
        d0 = complex(d0.real, d0.imag - 2 * math.pi * round(turns))
    if abs(d0) > tol:
        return False
    return all(abs(x.analytic[j] - y.analytic[j]) <= tol for j in range(1, k + 1))


def series_to_json(f: TruncatedLaurentSeries) -> dict:
    return {"order": f.order, "coeffs": [[c.real, c.imag] for c in f.coeffs]}


def series_from_json(d: dict) -> TruncatedLaurentSeries:
    cs = [complex(re, im) for re, im in d["coeffs"]]
    return series(int(d["order"]), cs, trunc=len(cs) - 1)


def log_to_json(x: LogSeries) -> dict:
    return {"na_part": x.na_part, "analytic": [[b.real, b.imag] for b in x.analytic]}


def log_from_json(d: dict) -> LogSeries:
    return LogSeries(na_part=int(d["na_part"]),
                     analytic=tuple(complex(re, im) for re, im in d["analytic"]))
