"""Command-line front end.

Subcommands cover the built-in families and graphs: family inspection and
validation, Ihara / Selberg / intermediate zeta evaluation, Hausdorff
dimension, zero finding, resonance-strip scans, 2D grid scans, and a
self-verification suite (`verify`) that recomputes the package's headline
numbers against independent closed forms.

Output is deterministic JSON on stdout (floats at 17 significant digits;
complex numbers as {"re": ..., "im": ...}); `scan` can emit CSV with the
stable header re,im,value_re,value_im. Errors exit nonzero with a
machine-readable JSON object on stderr. Exit codes: 0 ok, 2 invalid input,
3 numeric certification failure, 4 internal error. Set ZETA_LOG=debug (or
info/warning) for progress logging on stderr.
"""

import argparse
import cmath
import concurrent.futures
import dataclasses
import json
import logging
import math
import numbers
import os
import random
import sys

import numpy as np

from . import freegroup as fg
from . import graphzeta as gz
from . import intermediate as iz
from . import laurent as la
from . import schottky as sk
from . import selberg as sl
from . import zeros as zr

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNCERTIFIED = 3
EXIT_INTERNAL = 4

# exceptions that mean "the computation could not certify its result",
# as opposed to bad input
CERTIFICATION_ERRORS = (zr.RootScanError, zr.BoundaryZeroError,
                        iz.HorizonError, iz.ExpansionError, la.PrecisionError)

FAMILY_BUILTINS = ("three-funnel", "funneled-torus")
GRAPH_BUILTINS = ("theta", "dumbbell", "figure-eight", "single-loop")

log = logging.getLogger("artifact.cli")


class UsageError(ValueError):
    """Invalid command line or config; maps to exit code 2."""


# ---------------------------------------------------------------------------
# deterministic serialization


def _fmt_float(x: float) -> str:
    if math.isfinite(x):
        return format(float(x), ".17g")
    return json.dumps(str(x))


def render_json(obj, indent: int = 0) -> str:
    """Fixed-format JSON: dict order preserved, floats at 17 significant
    digits, complex as {"re", "im"}. Identical input gives identical text."""
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, numbers.Integral):
        return str(int(obj))
    if isinstance(obj, numbers.Real):
        return _fmt_float(float(obj))
    if isinstance(obj, numbers.Complex):
        c = complex(obj)
        return '{"re": %s, "im": %s}' % (_fmt_float(c.real), _fmt_float(c.imag))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [",\n".join("  " * (indent + 1) + render_json(v, indent + 1)
                           for v in obj)]
        return "[\n" + rows[0] + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [",\n".join("%s%s: %s" % ("  " * (indent + 1),
                                         json.dumps(str(k)),
                                         render_json(v, indent + 1))
                           for k, v in obj.items())]
        return "{\n" + rows[0] + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _emit(doc: dict, out: str | None = None) -> None:
    _write_text(render_json(doc) + "\n", out)


# ---------------------------------------------------------------------------
# argument parsing


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}")


def _parse_floats(text: str, n: int, what: str) -> tuple:
    parts = text.split(":")
    if len(parts) != n:
        raise UsageError(f"{what} needs {n} colon-separated numbers, "
                         f"got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"cannot parse {what} {text!r}")


def _parse_region(text: str) -> zr.Region:
    a, b, c, d = _parse_floats(text, 4, "region")
    return zr.Region(a, b, c, d)


def _parse_grid(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid needs start:stop:count, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}")
    if n < 1:
        raise UsageError("grid count must be >= 1")
    return lo, hi, n


def _parse_lengths(text: str) -> tuple:
    try:
        vals = tuple(float(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse edge lengths {text!r}")
    if not vals:
        raise UsageError("edge lengths must be nonempty")
    return vals


def _parse_criteria(text: str) -> tuple:
    try:
        cids = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse criteria list {text!r}")
    for c in cids:
        if c not in CRITERIA:
            raise UsageError(f"unknown criterion {c}; have 1..{len(CRITERIA)}")
    return cids


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """One parsed invocation. Validation beyond per-flag parsing lives here:
    a family-consuming run names exactly one family source, scans carry
    nonempty grids."""

    subcommand: str
    action: str | None = None
    family: str | None = None
    family_file: str | None = None
    ell: float | None = None
    z: complex | None = None
    phi: float = math.pi / 2
    graph: str | None = None
    edge_lengths: tuple | None = None
    big_l: float | None = None
    target: str | None = None
    s: complex | None = None
    method: str = "det"
    rescaled: bool = False
    symbolic: bool = False
    m: int = 0
    horizon: int | None = None
    size_cap: int = 16
    k_basis: int | None = None
    n_refine: int | None = None
    k_max: int | None = None
    word_len: int = 12
    tail_tol: float = 1e-8
    bracket: tuple = (1e-3, 0.99)
    region: zr.Region | None = None
    tol: float | None = None
    boundary_samples: int = 64
    strips: int = 2
    strip_height: float | None = None
    re_min: float = -1.0
    re_max: float = 1.0
    im_base: float = -0.2
    re_grid: tuple | None = None
    im_grid: tuple | None = None
    out: str | None = None
    fmt: str = "json"
    threads: int | None = None
    criteria: tuple | None = None

    def __post_init__(self):
        needs_family = self.subcommand in ("family", "selberg",
                                           "intermediate", "dim")
        if self.subcommand in ("zeros", "resonances", "scan"):
            needs_family = self.target in ("zM", "selberg")
        if needs_family and (self.family is None) == (self.family_file is None):
            raise UsageError("exactly one family source required: "
                             "--family or --family-file")
        if self.subcommand == "scan":
            if self.re_grid is None or self.im_grid is None:
                raise UsageError("scan requires --re-grid and --im-grid")
        if self.strips < 1:
            raise UsageError("--strips must be >= 1")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        names = [f.name for f in dataclasses.fields(cls)]
        vals = {}
        for name in names:
            if name == "subcommand":
                vals[name] = args.cmd
            elif hasattr(args, name):
                vals[name] = getattr(args, name)
        return cls(**vals)


# ---------------------------------------------------------------------------
# family / graph resolution


def _family_from_config(cfg: RunConfig) -> sk.SchottkyFamily:
    name, ell, z, phi = cfg.family, cfg.ell, cfg.z, cfg.phi
    if cfg.family_file is not None:
        with open(cfg.family_file) as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict) or "builtin" not in doc:
            raise UsageError(f"family file {cfg.family_file!r} must be a "
                             'JSON object with a "builtin" key')
        name = doc["builtin"]
        ell = doc.get("ell", ell)
        phi = doc.get("phi", phi)
        if "z" in doc:
            raw = doc["z"]
            z = complex(raw[0], raw[1]) if isinstance(raw, list) else complex(raw)
    if name == "three-funnel":
        return sk.builtin_three_funnel(ell=ell, z=z)
    if name == "funneled-torus":
        return sk.builtin_funneled_torus(float(phi), ell=ell, z=z)
    raise UsageError(f"unknown family {name!r}; "
                     f"builtins: {', '.join(FAMILY_BUILTINS)}")


def _eval_z(cfg: RunConfig, fam: sk.SchottkyFamily) -> complex:
    if cfg.z is not None:
        return complex(cfg.z)
    if fam.default_z is not None:
        return complex(fam.default_z)
    raise UsageError("no evaluation point: pass --z or build the family "
                     "with --ell")


def _graph_from_config(cfg: RunConfig) -> gz.WeightedGraph:
    ref = cfg.graph
    if ref is None:
        raise UsageError("--graph is required here (builtin name or JSON path)")
    e = cfg.edge_lengths
    if ref == "theta":
        return gz.theta_graph(e or (2, 2, 2))
    if ref == "dumbbell":
        return gz.dumbbell_graph(e or (2, 2, 2))
    if ref == "figure-eight":
        return gz.figure_eight_graph(e or (2, 2))
    if ref == "single-loop":
        return gz.single_loop(e[0] if e else 1.0)
    with open(ref) as fh:
        doc = json.load(fh)
    return gz.graph_from_json(doc)


def _skeleton(fam: sk.SchottkyFamily, weighted: bool):
    """Skeleton graph of a rank-2 family from the na-lengths (and, when
    weighted, leading trace coefficients) of a, b, ab, ab^{-1}."""
    words = ((0,), (1,), (0, 1), (0, fg.inverse_letter(1, fam.g)))
    na = tuple(sk.na_length(fam, w) for w in words)
    coeffs = None
    if weighted:
        coeffs = tuple(sk.trace_leading(fam, w)[1] for w in words)
    return gz.skeleton_two_generator(na, coeffs)


def _transfer_config(cfg: RunConfig) -> sl.TransferConfig:
    kw = {}
    if cfg.k_basis is not None:
        kw["k_basis"] = cfg.k_basis
    if cfg.n_refine is not None:
        kw["n_refine"] = cfg.n_refine
    return sl.TransferConfig(**kw)


def _target_function(cfg: RunConfig):
    """(callable s -> complex, provenance string) for zeros/resonances/scan."""
    if cfg.target == "ihara":
        graph = _graph_from_config(cfg)
        big_l = cfg.big_l

        def f(s):
            return gz.ihara_det(graph, s, big_l)

        return f, f"ihara(graph={cfg.graph})", graph
    fam = _family_from_config(cfg)
    z = _eval_z(cfg, fam)
    if cfg.target == "zM":
        horizon = (cfg.horizon if cfg.horizon is not None
                   else iz.choose_horizon(fam, cfg.m).n)
        table = iz.cocycle_table(fam, cfg.m, horizon)

        def f(s):
            return iz.zM_eval(fam, cfg.m, z, s, table=table)

        prov = (f"zM(family={fam.name}, m={cfg.m}, "
                f"z={_fmt_float(z.real)}{z.imag:+.17g}j)")
        return f, prov, None
    if cfg.target == "selberg":
        tcfg = _transfer_config(cfg)

        def f(s):
            return sl.zeta_det(fam, z, s, tcfg)

        prov = (f"selberg(family={fam.name}, "
                f"z={_fmt_float(z.real)}{z.imag:+.17g}j)")
        return f, prov, None
    raise UsageError(f"unknown target {cfg.target!r}; "
                     "use zM, selberg, or ihara")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_family(cfg: RunConfig) -> int:
    fam = _family_from_config(cfg)
    if cfg.action == "show":
        words = {"a": (0,), "b": (1,),
                 "ab": (0, 1), "ab_inv": (0, fg.inverse_letter(1, fam.g))}
        na = {k: sk.na_length(fam, w) for k, w in words.items()}
        lead = {k: sk.trace_leading(fam, w)[1] for k, w in words.items()}
        kind, graph = _skeleton(fam, weighted=True)
        doc = {
            "family": fam.name,
            "rank": fam.g,
            "ell": cfg.ell,
            "default_z": fam.default_z,
            "validity_radius": fam.validity_radius,
            "ell_scale": fam.ell_scale,
            "na_lengths": na,
            "leading_trace_coeffs": lead,
            "skeleton": {"kind": kind, "graph": gz.graph_to_json(graph)},
        }
        _emit(doc, cfg.out)
        return EXIT_OK

    checks = []

    def check(name, fn):
        try:
            detail = fn()
            checks.append({"name": name, "passed": True, "detail": detail})
        except ValueError as exc:
            checks.append({"name": name, "passed": False, "detail": str(exc)})

    check("constructs", lambda: f"rank {fam.g}, {len(fam.generators)} "
                                "generator series")
    check("generators-loxodromic",
          lambda: "na-lengths " + ", ".join(
              str(sk.na_length(fam, (i,))) for i in range(fam.g)))
    check("pair-words-loxodromic",
          lambda: "na-lengths " + ", ".join(
              str(sk.na_length(fam, w))
              for w in ((0, 1), (0, fg.inverse_letter(1, fam.g)))))
    check("skeleton-classified", lambda: _skeleton(fam, weighted=False)[0])

    def _z_check():
        if fam.default_z is None:
            return "no default z; pass --z at evaluation time"
        r = abs(fam.default_z)
        if r > fam.validity_radius:
            raise ValueError(f"|default z| = {r:.6g} exceeds the validity "
                             f"radius {fam.validity_radius:.6g}")
        return f"|default z| = {r:.6g} <= {fam.validity_radius:.6g}"

    check("default-z-inside-validity", _z_check)
    check("horizon-certificate-m0",
          lambda: f"horizon {iz.choose_horizon(fam, 0).n}")

    valid = all(c["passed"] for c in checks)
    doc = {"family": fam.name, "valid": valid, "checks": checks}
    _emit(doc, cfg.out)
    if not valid:
        bad = ", ".join(c["name"] for c in checks if not c["passed"])
        _print_error(EXIT_INVALID, UsageError(f"family checks failed: {bad}"))
        return EXIT_INVALID
    return EXIT_OK


def _cmd_ihara(cfg: RunConfig) -> int:
    graph = _graph_from_config(cfg)
    if cfg.s is None:
        raise UsageError("--s is required")
    value = gz.ihara_det(graph, cfg.s, cfg.big_l)
    try:
        period = 2 * math.pi / gz.edge_matrix_period(graph)
    except ValueError:
        period = None
    doc = {
        "graph": cfg.graph,
        "edges": len(graph.edge_pairs),
        "s": cfg.s,
        "L": cfg.big_l,
        "value": value,
        "im_period": period,
    }
    _emit(doc, cfg.out)
    return EXIT_OK


def _cmd_selberg(cfg: RunConfig) -> int:
    fam = _family_from_config(cfg)
    z = _eval_z(cfg, fam)
    if cfg.s is None:
        raise UsageError("--s is required")
    s_eff = cfg.s / math.log(1 / abs(z)) if cfg.rescaled else cfg.s
    doc = {
        "family": fam.name,
        "z": z,
        "s": cfg.s,
        "rescaled": cfg.rescaled,
        "s_effective": s_eff,
        "method": cfg.method,
    }
    if cfg.method == "det":
        tcfg = _transfer_config(cfg)
        doc["k_basis"] = tcfg.k_basis
        doc["n_refine"] = tcfg.n_refine
        doc["value"] = sl.zeta_det(fam, z, s_eff, tcfg)
    elif cfg.method == "euler":
        table = sl.geodesic_table(fam, z, cfg.word_len)
        ep = sl.euler_product_R(table, s_eff, k_max=cfg.k_max,
                                tail_tol=cfg.tail_tol)
        doc["word_len"] = cfg.word_len
        doc["k_max"] = ep.k_max
        doc["value"] = complex(ep)
        doc["k_tail"] = ep.k_tail
        doc["class_tail"] = ep.class_tail
    else:
        raise UsageError(f"unknown method {cfg.method!r}; use det or euler")
    _emit(doc, cfg.out)
    return EXIT_OK


def _cmd_intermediate(cfg: RunConfig) -> int:
    fam = _family_from_config(cfg)
    if cfg.symbolic:
        sym = iz.zM_symbolic(fam, cfg.m, horizon=cfg.horizon,
                             size_cap=cfg.size_cap)
        doc = {
            "family": fam.name,
            "m": sym.m,
            "horizon": sym.horizon,
            "window": sym.window,
            "n_variables": len(sym.basis),
            "n_terms": len(sym.terms),
            "ihara_polynomial": {str(k): v
                                 for k, v in iz.ihara_from(sym).items()},
            "formula": iz.format_symbolic(sym),
        }
        _emit(doc, cfg.out)
        return EXIT_OK
    z = _eval_z(cfg, fam)
    if cfg.s is None:
        raise UsageError("--s is required (or pass --symbolic)")
    horizon = (cfg.horizon if cfg.horizon is not None
               else iz.choose_horizon(fam, cfg.m).n)
    table = iz.cocycle_table(fam, cfg.m, horizon)
    value = iz.zM_eval(fam, cfg.m, z, cfg.s, table=table)
    doc = {
        "family": fam.name,
        "m": cfg.m,
        "z": z,
        "s": cfg.s,
        "horizon": horizon,
        "value": value,
    }
    _emit(doc, cfg.out)
    return EXIT_OK


def _skeleton_main_term(fam: sk.SchottkyFamily, z: complex) -> float:
    """First real zero of the unweighted skeleton graph zeta, divided by
    log(1/|z|): the graph-limit prediction for the dimension."""
    _, graph = _skeleton(fam, weighted=False)
    s0 = zr.first_real_zero(lambda s: gz.ihara_det(graph, s).real,
                            1e-3, 2.0, tol=1e-12)
    return s0 / math.log(1 / abs(z))


def _cmd_dim(cfg: RunConfig) -> int:
    fam = _family_from_config(cfg)
    z = _eval_z(cfg, fam)
    tol = cfg.tol if cfg.tol is not None else 1e-10
    dim = zr.hausdorff_dim(fam, z, method=cfg.method, bracket=cfg.bracket,
                           tol=tol, word_len_max=cfg.word_len)
    doc = {
        "family": fam.name,
        "ell": cfg.ell,
        "z": z,
        "dim": dim,
        "main_term": _skeleton_main_term(fam, z),
        "method": cfg.method,
    }
    _emit(doc, cfg.out)
    return EXIT_OK


# zeros this close to the origin are reported but flagged: the zeta-zero /
# resonance identification drops s = 0 by convention
ORIGIN_EXCLUSION = 1e-3


def _zeroset_doc(zs: zr.ZeroSet, region: zr.Region) -> dict:
    return {
        "provenance": zs.provenance,
        "region": {"re_min": region.re_min, "re_max": region.re_max,
                   "im_min": region.im_min, "im_max": region.im_max},
        "count": zs.total_multiplicity(),
        "zeros": [
            {"location": w.location,
             "multiplicity": w.multiplicity,
             "residual": w.residual,
             "excluded_by_convention": abs(w.location) <= ORIGIN_EXCLUSION}
            for w in zs.zeros],
        "notes": list(zs.notes),
    }


def _cmd_zeros(cfg: RunConfig) -> int:
    f, prov, _ = _target_function(cfg)
    if cfg.region is None:
        raise UsageError("--region re_min:re_max:im_min:im_max is required")
    tol = cfg.tol if cfg.tol is not None else 1e-9
    zs = zr.find_zeros(f, cfg.region, tol=tol,
                       boundary_samples=cfg.boundary_samples,
                       provenance=prov)
    doc = {"target": cfg.target}
    doc.update(_zeroset_doc(zs, cfg.region))
    _emit(doc, cfg.out)
    return EXIT_OK


def _cmd_resonances(cfg: RunConfig) -> int:
    f, prov, graph = _target_function(cfg)
    height = cfg.strip_height
    if height is None:
        height = 2 * math.pi
        if graph is not None:
            try:
                height = 2 * math.pi / gz.edge_matrix_period(graph)
            except ValueError:
                pass
    if cfg.re_min >= cfg.re_max:
        raise UsageError("--re-min must be below --re-max")
    tol = cfg.tol if cfg.tol is not None else 1e-9
    strips = []
    sets = []
    for k in range(cfg.strips):
        region = zr.Region(cfg.re_min, cfg.re_max,
                           cfg.im_base + k * height,
                           cfg.im_base + (k + 1) * height)
        zs = zr.find_zeros(f, region, tol=tol,
                           boundary_samples=cfg.boundary_samples,
                           provenance=f"{prov} strip {k}")
        sets.append(zs)
        entry = {"strip_index": k}
        entry.update(_zeroset_doc(zs, region))
        strips.append(entry)
        log.info("strip %d: %d zeros", k, zs.total_multiplicity())
    consistent = True
    worst = 0.0
    base = sets[0].zeros
    for k in range(1, cfg.strips):
        cur = sets[k].zeros
        if (len(cur) != len(base)
                or any(a.multiplicity != b.multiplicity
                       for a, b in zip(base, cur))):
            consistent = False
            break
        for a, b in zip(base, cur):
            worst = max(worst, abs(b.location - 1j * k * height - a.location))
    doc = {
        "target": cfg.target,
        "strip_height": height,
        "n_strips": cfg.strips,
        "strips": strips,
        "periodicity": {
            "consistent": consistent,
            "max_translation_error": worst if consistent else None,
        },
    }
    _emit(doc, cfg.out)
    return EXIT_OK


def _cmd_scan(cfg: RunConfig) -> int:
    f, prov, _ = _target_function(cfg)
    a0, a1, na = cfg.re_grid
    b0, b1, nb = cfg.im_grid
    points = [complex(a, b)
              for a in np.linspace(a0, a1, na)
              for b in np.linspace(b0, b1, nb)]
    workers = cfg.threads or os.cpu_count() or 1
    log.info("scanning %d points with %d threads", len(points), workers)
    # map() preserves input order, so the output is independent of the
    # thread count
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as ex:
        values = list(ex.map(lambda s: complex(f(s)), points))
    if cfg.fmt == "csv":
        lines = ["re,im,value_re,value_im"]
        for s, v in zip(points, values):
            lines.append(",".join(_fmt_float(x)
                                  for x in (s.real, s.imag, v.real, v.imag)))
        _write_text("\n".join(lines) + "\n", cfg.out)
    else:
        doc = {
            "target": cfg.target,
            "provenance": prov,
            "re_grid": list(cfg.re_grid),
            "im_grid": list(cfg.im_grid),
            "values": [{"s": s, "value": v}
                       for s, v in zip(points, values)],
        }
        _emit(doc, cfg.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suite


@dataclasses.dataclass(frozen=True)
class CriterionResult:
    cid: int
    description: str
    measured: str
    target: str
    passed: bool


def _crit_theta_rescale():
    theta = gz.theta_graph((2, 2, 2))
    rng = random.Random(101)
    worst = 0.0
    for _ in range(50):
        s = complex(rng.uniform(0.2, 3.0), rng.uniform(0.5, 3.0))
        want = (1 - 6 * cmath.exp(-s) + 9 * cmath.exp(-2 * s)
                - 4 * cmath.exp(-3 * s))
        got = gz.ihara_det(theta, s / 4)
        worst = max(worst, abs(got - want) / abs(want))
    return (worst <= 1e-10,
            f"max relative error {worst:.3e} over 50 samples",
            "<= 1e-10")


def _crit_torus_first_zero():
    fam = sk.builtin_funneled_torus(math.pi / 2, 10.0)
    z = complex(fam.default_z)
    table = iz.cocycle_table(fam, 0, iz.choose_horizon(fam, 0).n)
    x = zr.first_real_zero(
        lambda t: iz.zM_eval(fam, 0, z, complex(t), table=table).real,
        0.05, 3.0)
    val = x / 5
    main = math.log(3) / 10
    return (0.110 <= val <= 0.120,
            f"first zero / 5 = {val:.6f} "
            f"(reference 0.115, graph main term log3/10 = {main:.4f})",
            "in [0.110, 0.120]")


def _funnel_z2_closed_form(z: complex, s: complex) -> complex:
    # hand-expanded closed form of the M=2 determinant for the symmetric
    # three-funnel: x1 = e^{-2s} carries the graph lengths, x2 =
    # e^{s z^2 / log(1/|z|)} the z^2 length correction shared by all cycles
    big_l = math.log(1.0 / abs(z))
    x1 = cmath.exp(-2 * s)
    x2 = cmath.exp(s * z * z / big_l)
    f1 = x2**4 + x1**4 * (x2 * x2 - 1) ** 2 + x1 * x1 * (x2 * x2 - 2 * x2**4)
    f2 = x2**4 + x1**4 * (x2 * x2 - 1) ** 2 - 2 * x1 * x1 * (x2 * x2 + x2**4)
    return f1 * f1 * f2 / x2**12


def _crit_symbolic_z2():
    fam = sk.builtin_three_funnel(8.0)
    sym = iz.zM_symbolic(fam, 2)
    rng = random.Random(103)
    worst = 0.0
    # Re s >= -1: float rounding in the exponent basis amplifies like
    # e^{12 |Re s|}, which passes 1e-8 only on this window
    for _ in range(30):
        z = 0.03 + 0.2 * rng.random()
        s = complex(4 * rng.random() - 1, 6 * rng.random() - 3)
        want = _funnel_z2_closed_form(z, s)
        worst = max(worst, abs(sym.eval(z, s) - want) / abs(want))
    poly = iz.ihara_from(sym)
    want_poly = {0: 1, 4: -6, 8: 9, 12: -4}
    ok = worst <= 1e-8 and poly == want_poly
    return (ok,
            f"max relative error {worst:.3e} over 30 samples; "
            f"correction-free polynomial {poly}",
            f"<= 1e-8 and polynomial == {want_poly}")


def _crit_det_equals_euler():
    fam = sk.builtin_three_funnel(8.0)
    z = complex(fam.default_z)
    table = sl.geodesic_table(fam, z, 10)
    worst_ratio = 0.0
    worst_tail = 0.0
    for s in (0.5, 1.0, 2.0):
        det = sl.zeta_det(fam, z, complex(s))
        ep = sl.euler_product_R(table, complex(s))
        worst_ratio = max(worst_ratio, abs(det / complex(ep) - 1))
        worst_tail = max(worst_tail, ep.k_tail, ep.class_tail)
    return (worst_ratio <= 1e-6 and worst_tail <= 1e-8,
            f"max |det/euler - 1| = {worst_ratio:.3e}, "
            f"max tail bound = {worst_tail:.3e}",
            "ratio <= 1e-6 with tails <= 1e-8")


def _crit_dimension_rate():
    ells = (8.0, 12.0, 16.0, 20.0)
    errs = []
    for ell in ells:
        fam = sk.builtin_three_funnel(ell)
        errs.append(abs(zr.hausdorff_dim(fam) - math.log(4) / ell))
    decreasing = all(a > b for a, b in zip(errs, errs[1:]))
    scaled = [e * math.exp(ell / 5) for e, ell in zip(errs, ells)]
    bounded = all(v <= 2 * scaled[0] for v in scaled)
    return (decreasing and bounded,
            "dimension error vs log4/ell: "
            + ", ".join(f"{e:.3e}" for e in errs)
            + f"; max scaled {max(scaled):.3e} vs budget {2 * scaled[0]:.3e}",
            "strictly decreasing, e^{ell/5}-scaled error within 2x its "
            "ell=8 value")


def _crit_rescaled_convergence():
    grid = [complex(a, b)
            for a in np.linspace(-1.0, 3.0, 5)
            for b in np.linspace(-3.0, 3.0, 5)]
    sups = []
    radii = []
    for ell in (8.0, 12.0, 16.0):
        fam = sk.builtin_three_funnel(ell)
        z = complex(fam.default_z)
        table = iz.cocycle_table(fam, 0, iz.choose_horizon(fam, 0).n)
        sup = max(abs(sl.rescaled_zeta(fam, z, s)
                      - iz.zM_eval(fam, 0, z, s, table=table))
                  for s in grid)
        sups.append(sup)
        radii.append(abs(z))
    decreasing = sups[0] > sups[1] > sups[2]
    c = sups[0] / radii[0] ** 0.8
    fits = all(sup <= c * r ** 0.8 for sup, r in zip(sups[1:], radii[1:]))
    return (decreasing and fits,
            "sup gaps " + ", ".join(f"{v:.3e}" for v in sups)
            + f" at |z| = " + ", ".join(f"{r:.3e}" for r in radii),
            "decreasing and <= C |z|^0.8 with C set at ell=8")


def _both_families():
    return (sk.builtin_three_funnel(8.0),
            sk.builtin_funneled_torus(math.pi / 2, 8.0))


def _crit_cocycle_sums():
    classes = list(fg.enumerate_classes(2, 8))
    bad = 0
    for fam in _both_families():
        tables = {m: iz.cocycle_table(fam, m, iz.choose_horizon(fam, m).n)
                  for m in (0, 1, 2)}
        for cls in classes:
            w = cls.representative
            full = iz.L_M_direct(fam, w, 2)
            for m in (0, 1, 2):
                if not la.log_agree(iz.L_M_word(tables[m], w),
                                    la.lt_log(full, m),
                                    tol=1e-9, mod_two_pi_i=True):
                    bad += 1
    return (bad == 0,
            f"{bad} mismatches over {len(classes)} classes x 2 families "
            "x 3 truncation levels",
            "0 mismatches at 1e-9")


def _crit_pair_trace_identity():
    classes = list(fg.enumerate_classes(2, 8))
    order_bad = 0
    worst = 0.0
    for fam in _both_families():
        pair_lt = {}
        for i in range(4):
            for j in range(4):
                if j != fg.inverse_letter(i, 2):
                    pair_lt[(i, j)] = sk.trace_leading(fam, (i, j))
        for cls in classes:
            letters = cls.representative.letters
            o, c = sk.trace_leading(fam, letters)
            po, pc = 0, complex(1.0)
            for k in range(len(letters)):
                oo, cc = pair_lt[(letters[k],
                                  letters[(k + 1) % len(letters)])]
                po += oo
                pc *= cc
            if 2 * o != po:
                order_bad += 1
            worst = max(worst, abs(c * c - pc) / abs(pc))
    return (order_bad == 0 and worst <= 1e-10,
            f"{order_bad} order mismatches; max coefficient error {worst:.3e}",
            "orders exact, coefficients <= 1e-10")


def _crit_strip_periodicity():
    graphs = (("theta", gz.theta_graph((2, 2, 2))),
              ("dumbbell", gz.dumbbell_graph((2, 2, 2))),
              ("figure-eight", gz.figure_eight_graph((2, 2))))
    base = -0.2
    reports = []
    ok = True
    for name, graph in graphs:
        height = 2 * math.pi / gz.edge_matrix_period(graph)

        def f(s, graph=graph):
            return gz.ihara_det(graph, s)

        lower = zr.find_zeros(f, zr.Region(-0.6, 1.0, base, base + height))
        upper = zr.find_zeros(f, zr.Region(-0.6, 1.0, base + height,
                                           base + 2 * height))
        if (len(lower.zeros) != len(upper.zeros)
                or any(a.multiplicity != b.multiplicity
                       for a, b in zip(lower.zeros, upper.zeros))):
            ok = False
            reports.append(f"{name}: strip contents differ")
            continue
        worst = max(abs(b.location - 1j * height - a.location)
                    for a, b in zip(lower.zeros, upper.zeros))
        ok = ok and worst <= 1e-9
        reports.append(f"{name}: {lower.total_multiplicity()} zeros, "
                       f"shift error {worst:.2e}")
    return (ok, "; ".join(reports),
            "equal strips after translation, <= 1e-9")


def _crit_laurent_roundtrips():
    rng = np.random.default_rng(1009)

    def rand_series():
        order = int(rng.integers(-5, 6))
        k = int(rng.integers(8, 21))
        cs = ((rng.normal(size=k + 1) + 1j * rng.normal(size=k + 1))
              / 2 * 0.5 ** np.arange(k + 1))
        cs[0] = ((0.7 + 0.8 * rng.random())
                 * cmath.exp(2j * math.pi * rng.random()))
        return la.series(order, cs.tolist(), trunc=k)

    worst = 0.0
    structural_bad = 0
    for _ in range(1000):
        f = rand_series()
        g = rand_series()
        p = la.mul(f, g)
        if (p.order != f.order + g.order or p.trunc != min(f.trunc, g.trunc)
                or la.reciprocal(f).order != -f.order):
            structural_bad += 1
        back = la.div(p, g)
        k = min(back.trunc, f.trunc)
        worst = max(worst, max(abs(back.coeffs[j] - f.coeffs[j])
                               for j in range(k + 1)))
        sq = la.mul(f, f)
        r = la.sqrt(sq)
        rr = la.mul(r, r)
        worst = max(worst, max(abs(rr.coeffs[j] - sq.coeffs[j])
                               for j in range(rr.trunc + 1)))
        if not la.log_agree(la.plog(p),
                            la.log_add(la.plog(f), la.plog(g)),
                            tol=1e-11, mod_two_pi_i=True):
            worst = max(worst, 1.0)
    return (worst <= 1e-11 and structural_bad == 0,
            f"max roundtrip error {worst:.3e}; "
            f"{structural_bad} envelope violations over 1000 trips",
            "<= 1e-11 with exact order/truncation envelopes")


def _singular_value_ratio(ell: float) -> float:
    fam = sk.builtin_three_funnel(ell)
    cfg = sl.TransferConfig()
    mat = sl.transfer_matrix(fam, complex(fam.default_z), 1.0, cfg)
    sv = np.linalg.svd(mat, compute_uv=False)
    sv = sv[sv >= sv[0] * 1e-13]
    per_block = mat.shape[0] // cfg.k_basis
    n_blocks = len(sv) // per_block
    logs = [float(np.mean(np.log(sv[i * per_block:(i + 1) * per_block])))
            for i in range(n_blocks)]
    slope = np.polyfit(np.arange(n_blocks), logs, 1)[0]
    return math.exp(slope)


def _crit_singular_decay():
    rho8 = _singular_value_ratio(8.0)
    rho12 = _singular_value_ratio(12.0)
    return (rho8 < 1.0 and rho12 < rho8,
            f"rho(8) = {rho8:.4e}, rho(12) = {rho12:.4e}",
            "rho < 1 and decreasing in ell")


CRITERIA = {
    1: ("theta-graph zeta under the s/4 rescale equals its cubic "
        "exponential polynomial", _crit_theta_rescale),
    2: ("funneled-torus Z0 first real zero over 5 lands in [0.110, 0.120]",
        _crit_torus_first_zero),
    3: ("symbolic Z2 of the three-funnel matches its closed form and "
        "collapses to the graph polynomial", _crit_symbolic_z2),
    4: ("transfer determinant equals the geodesic Euler product with "
        "certified tails", _crit_det_equals_euler),
    5: ("three-funnel dimension error vs log4/ell decays exponentially",
        _crit_dimension_rate),
    6: ("rescaled Selberg zeta converges to Z0 on a grid at rate |z|^0.8",
        _crit_rescaled_convergence),
    7: ("cocycle-accumulated length logs equal direct per-word expansions",
        _crit_cocycle_sums),
    8: ("squared leading trace term factors over cyclic letter pairs",
        _crit_pair_trace_identity),
    9: ("graph zeta zero sets repeat across adjacent vertical strips",
        _crit_strip_periodicity),
    10: ("Laurent arithmetic roundtrips at 1e-11 with exact growth "
         "envelopes", _crit_laurent_roundtrips),
    11: ("transfer-matrix singular values decay geometrically, faster for "
         "larger ell", _crit_singular_decay),
}


def run_criterion(cid: int) -> CriterionResult:
    if cid not in CRITERIA:
        raise UsageError(f"unknown criterion {cid}; have 1..{len(CRITERIA)}")
    description, fn = CRITERIA[cid]
    log.info("criterion %d: %s", cid, description)
    passed, measured, target = fn()
    return CriterionResult(cid=cid, description=description,
                           measured=measured, target=target, passed=passed)


def _cmd_verify(cfg: RunConfig) -> int:
    cids = cfg.criteria if cfg.criteria else tuple(sorted(CRITERIA))
    results = [run_criterion(c) for c in cids]
    all_passed = all(r.passed for r in results)
    if cfg.fmt == "json":
        doc = {
            "passed": all_passed,
            "results": [dataclasses.asdict(r) for r in results],
        }
        _emit(doc, cfg.out)
    else:
        lines = []
        for r in results:
            lines.append(f"C{r.cid:02d} {'PASS' if r.passed else 'FAIL'}  "
                         f"{r.description}")
            lines.append(f"       measured: {r.measured}")
            lines.append(f"       target:   {r.target}")
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} "
                     "criteria passed")
        _write_text("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK if all_passed else EXIT_UNCERTIFIED


# ---------------------------------------------------------------------------
# parser and entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_family_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=FAMILY_BUILTINS,
                   help="builtin family name")
    p.add_argument("--family-file", dest="family_file",
                   help='JSON file {"builtin": name, "ell"/"z"/"phi": ...}')
    p.add_argument("--ell", type=float, help="degeneration parameter; "
                   "sets z = e^{-ell/ell_scale}")
    p.add_argument("--z", type=_parse_complex,
                   help="evaluation point, 0 < |z| < 1")
    p.add_argument("--phi", type=float, default=math.pi / 2,
                   help="twist angle for funneled-torus (default pi/2)")


def _add_graph_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="builtin graph name "
                   f"({', '.join(GRAPH_BUILTINS)}) or a JSON file path")
    p.add_argument("--edge-lengths", dest="edge_lengths",
                   type=_parse_lengths,
                   help="comma-separated edge lengths for a builtin graph")
    p.add_argument("--L", dest="big_l", type=float,
                   help="materialization scale for affine edge lengths")


def _add_target_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--target", choices=("zM", "selberg", "ihara"),
                   required=True, help="which zeta to evaluate")
    _add_family_options(p)
    _add_graph_options(p)
    p.add_argument("--m", type=int, default=0,
                   help="truncation level for target zM")
    p.add_argument("--horizon", type=int, help="cocycle horizon override")
    p.add_argument("--k-basis", dest="k_basis", type=int,
                   help="transfer basis size for target selberg")
    p.add_argument("--n-refine", dest="n_refine", type=int,
                   help="transfer refinement depth for target selberg")


def _add_output_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zeta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("family", help="inspect or validate a family")
    fam_sub = p.add_subparsers(dest="action", required=True)
    for action in ("validate", "show"):
        q = fam_sub.add_parser(action)
        _add_family_options(q)
        _add_output_options(q)

    p = sub.add_parser("ihara", help="Ihara zeta determinant of a graph")
    _add_graph_options(p)
    p.add_argument("--s", type=_parse_complex, required=True)
    _add_output_options(p)

    p = sub.add_parser("selberg", help="Selberg zeta of a family at z")
    _add_family_options(p)
    p.add_argument("--s", type=_parse_complex, required=True)
    p.add_argument("--method", choices=("det", "euler"), default="det")
    p.add_argument("--rescaled", action="store_true",
                   help="evaluate at s / log(1/|z|)")
    p.add_argument("--k-basis", dest="k_basis", type=int)
    p.add_argument("--n-refine", dest="n_refine", type=int)
    p.add_argument("--word-len", dest="word_len", type=int, default=12,
                   help="geodesic table depth for --method euler")
    p.add_argument("--k-max", dest="k_max", type=int)
    p.add_argument("--tail-tol", dest="tail_tol", type=float, default=1e-8)
    _add_output_options(p)

    p = sub.add_parser("intermediate", help="intermediate zeta Z_M")
    _add_family_options(p)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--s", type=_parse_complex)
    p.add_argument("--horizon", type=int)
    p.add_argument("--symbolic", action="store_true",
                   help="emit the exact exponential polynomial instead of "
                   "a value")
    p.add_argument("--size-cap", dest="size_cap", type=int, default=16)
    _add_output_options(p)

    p = sub.add_parser("dim", help="Hausdorff dimension of the limit set")
    _add_family_options(p)
    p.add_argument("--method", choices=("det", "euler"), default="det")
    p.add_argument("--bracket", type=lambda t: _parse_floats(t, 2, "bracket"),
                   default=(1e-3, 0.99), help="search interval lo:hi")
    p.add_argument("--tol", type=float)
    p.add_argument("--word-len", dest="word_len", type=int, default=12)
    _add_output_options(p)

    p = sub.add_parser("zeros", help="zeros of a zeta in a rectangle")
    _add_target_options(p)
    p.add_argument("--region", type=_parse_region, required=True,
                   help="re_min:re_max:im_min:im_max")
    p.add_argument("--tol", type=float)
    p.add_argument("--boundary-samples", dest="boundary_samples", type=int,
                   default=64)
    _add_output_options(p)

    p = sub.add_parser("resonances",
                       help="zero sets across stacked vertical strips")
    _add_target_options(p)
    p.add_argument("--strips", type=int, default=2)
    p.add_argument("--strip-height", dest="strip_height", type=float,
                   help="default: the imaginary period for graphs, else 2pi")
    p.add_argument("--re-min", dest="re_min", type=float, default=-1.0)
    p.add_argument("--re-max", dest="re_max", type=float, default=1.0)
    p.add_argument("--im-base", dest="im_base", type=float, default=-0.2)
    p.add_argument("--tol", type=float)
    p.add_argument("--boundary-samples", dest="boundary_samples", type=int,
                   default=64)
    _add_output_options(p)

    p = sub.add_parser("scan", help="evaluate a zeta on a 2D grid")
    _add_target_options(p)
    p.add_argument("--re-grid", dest="re_grid", type=_parse_grid,
                   required=True, help="start:stop:count")
    p.add_argument("--im-grid", dest="im_grid", type=_parse_grid,
                   required=True, help="start:stop:count")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"),
                   default="csv")
    p.add_argument("--threads", type=int,
                   help="parallel width (default: cpu count); results do "
                   "not depend on it")
    _add_output_options(p)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--criteria", type=_parse_criteria,
                   help="comma-separated subset, e.g. 1,4,9")
    p.add_argument("--format", dest="fmt", choices=("table", "json"),
                   default="table")
    _add_output_options(p)

    return parser


_DISPATCH = {
    "family": _cmd_family,
    "ihara": _cmd_ihara,
    "selberg": _cmd_selberg,
    "intermediate": _cmd_intermediate,
    "dim": _cmd_dim,
    "zeros": _cmd_zeros,
    "resonances": _cmd_resonances,
    "scan": _cmd_scan,
    "verify": _cmd_verify,
}


def _print_error(code: int, exc: BaseException) -> None:
    doc = {"error": {"code": code, "type": type(exc).__name__,
                     "message": str(exc)}}
    print(render_json(doc), file=sys.stderr)


def _setup_logging() -> None:
    name = os.environ.get("ZETA_LOG", "").strip().upper()
    level = getattr(logging, name, None) if name else logging.WARNING
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig.from_args(args)
        log.debug("run config: %s", cfg)
        return _DISPATCH[cfg.subcommand](cfg)
    except CERTIFICATION_ERRORS as exc:
        log.debug("certification failure", exc_info=True)
        _print_error(EXIT_UNCERTIFIED, exc)
        return EXIT_UNCERTIFIED
    except (ValueError, OSError) as exc:
        log.debug("validation failure", exc_info=True)
        _print_error(EXIT_INVALID, exc)
        return EXIT_INVALID
    except Exception as exc:
        log.debug("internal failure", exc_info=True)
        _print_error(EXIT_INTERNAL, exc)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
