"""Command-line front end.

Exit codes for ``classify``: 0 certified-yes, 2 certified-no,
3 indeterminate, 1 usage or input error.  Every other command exits 0 on
success and 1 on error.  Output is deterministic for a given config and
seed; reports embed the resolved config.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import classify as cl
from . import engine
from .bergman import SpaceParams, basis_enumerate, make_grid, monomial_norm_sq, quad_inner_product
from .errors import WcoError
from .moebius import is_self_map
from .schema import (
    ConfigError,
    conjugation_from_json,
    conjugation_to_json,
    lft_from_json,
    load_json,
    symbol_from_json,
    symbol_to_json,
)
from .series import monomial

EXIT_YES, EXIT_ERROR, EXIT_NO, EXIT_UNKNOWN = 0, 1, 2, 3
VERDICT_EXIT = {cl.YES: EXIT_YES, cl.NO: EXIT_NO, cl.UNKNOWN: EXIT_UNKNOWN}


@dataclass
class RunConfig:
    command: str
    inputs: dict
    trunc: tuple[int, ...] | None
    plan: engine.SamplePlan
    tol_exact: float
    tol_reject: float
    out: str | None
    fmt: str

    def as_dict(self):
        return {
            "command": self.command,
            "inputs": self.inputs,
            "trunc": list(self.trunc) if self.trunc is not None else None,
            "plan": self.plan.as_dict(),
            "tol_exact": self.tol_exact,
            "tol_reject": self.tol_reject,
            "format": self.fmt,
        }


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_complex(z) -> str:
    z = complex(z)
    return f"{_fmt(z.real)}{'+' if z.imag >= 0 or np.isnan(z.imag) else '-'}{_fmt(abs(z.imag))}j"


def _parse_trunc(text):
    if text is None:
        return None
    try:
        caps = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise ConfigError(f"--trunc: cannot parse {text!r}") from None
    if any(c < 4 for c in caps):
        raise ConfigError(f"--trunc: every cap must be >= 4, got {caps}")
    return caps


def _caps_for(cfg: RunConfig, d: int, default: int):
    if cfg.trunc is None:
        return (default,) * d
    if len(cfg.trunc) == 1:
        return cfg.trunc * d
    if len(cfg.trunc) != d:
        raise ConfigError(f"--trunc has {len(cfg.trunc)} entries, symbol has d={d}")
    return cfg.trunc


def _config(args) -> RunConfig:
    if args.samples < 1:
        raise ConfigError(f"--samples must be >= 1, got {args.samples}")
    if not 0 < args.radius <= 0.9:
        raise ConfigError(f"--radius must lie in (0, 0.9], got {args.radius}")
    inputs = {k: getattr(args, k) for k in ("symbol", "conj", "lfts", "kind", "ell", "degree")
              if getattr(args, k, None) is not None}
    return RunConfig(
        command=args.command,
        inputs=inputs,
        trunc=_parse_trunc(args.trunc),
        plan=engine.SamplePlan(args.samples, args.radius, args.seed),
        tol_exact=args.tol_exact,
        tol_reject=args.tol_reject,
        out=args.out,
        fmt=args.format,
    )


def _write(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_report(cfg: RunConfig, report: dict):
    if cfg.fmt == "json":
        _write(cfg, json.dumps(report, indent=2, sort_keys=True) + "\n")
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for key, val in _flatten(report):
        w.writerow([key, _fmt(val) if isinstance(val, float) else val])
    _write(cfg, buf.getvalue())


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def _load_symbol(path):
    return symbol_from_json(load_json(path))


def cmd_classify(cfg: RunConfig, args) -> int:
    sym = _load_symbol(args.symbol)
    caps = _caps_for(cfg, sym.sp.d, cl.SECTION_CAPS)[0] if cfg.trunc else cl.SECTION_CAPS
    kw = dict(plan=cfg.plan, tol_exact=cfg.tol_exact, tol_reject=cfg.tol_reject)
    conj = None
    if args.kind == "realsym":
        rep = cl.classify_real_symmetric(sym, section_caps=caps, **kw)
    elif args.kind == "unitary":
        rep = cl.classify_unitary(sym, section_caps=caps, **kw)
    else:
        if not args.conj:
            raise ConfigError("classify --kind csym needs --conj")
        cp = conjugation_from_json(load_json(args.conj), sym.sp)
        conj = conjugation_to_json(cp)
        rep = cl.classify_csym(sym, cp, **kw)
    report = {"config": cfg.as_dict(), "symbol": symbol_to_json(sym), "conjugation": conj,
              "report": rep.to_dict()}
    _dump_report(cfg, report)
    return VERDICT_EXIT[rep.verdict]


def cmd_defect(cfg: RunConfig, args) -> int:
    sym = _load_symbol(args.symbol)
    caps = _caps_for(cfg, sym.sp.d, 12)
    csym = None
    conj = None
    if args.conj:
        cp = conjugation_from_json(load_json(args.conj), sym.sp)
        conj = conjugation_to_json(cp)
        csym = engine.csym_pointwise_defect(sym, cp, cfg.plan)
    sec = engine.build_matrix(sym, caps)
    z, _ = engine.sample_pairs(cfg.plan, sym.sp.d)
    unit = engine.unitary_section_residual(sec)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        norm = engine.norm_estimate(sec)
    report = {
        "config": cfg.as_dict(),
        "symbol": symbol_to_json(sym),
        "conjugation": conj,
        "plan": cfg.plan.as_dict(),
        "defects": {
            "realsym": engine.realsym_pointwise_defect(sym, cfg.plan),
            "unitary": engine.unitary_pointwise_defect(sym, cfg.plan),
            "csym": csym,
            "adjoint": engine.adjoint_kernel_check(sym, z, caps, section=sec),
        },
        "section": {
            "caps": list(caps),
            "hermitian": engine.hermitian_defect(sec),
            "unitary_raw": unit["raw"],
            "unitary_subblock": unit["subblock"],
            "norm_estimate": norm,
            "norm_converged": not caught,
        },
    }
    _dump_report(cfg, cl._jsonable(report))
    return 0


def cmd_matrix(cfg: RunConfig, args) -> int:
    sym = _load_symbol(args.symbol)
    caps = _caps_for(cfg, sym.sp.d, 8)
    sec = engine.build_matrix(sym, caps)
    if cfg.fmt == "json":
        report = {
            "config": cfg.as_dict(),
            "basis": [list(b) for b in sec.basis],
            "re": sec.M.real.tolist(),
            "im": sec.M.imag.tolist(),
        }
        _write(cfg, json.dumps(report, indent=2, sort_keys=True) + "\n")
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row", "col", "re", "im"])
    n = sec.M.shape[0]
    for i in range(n):
        for j in range(n):
            v = sec.M[i, j]
            w.writerow([i, j, _fmt(v.real), _fmt(v.imag)])
    _write(cfg, buf.getvalue())
    return 0


def cmd_norms(cfg: RunConfig, args) -> int:
    try:
        ell = tuple(int(t) for t in args.ell.split(","))
    except ValueError:
        raise ConfigError(f"--ell: cannot parse {args.ell!r}") from None
    sp = SpaceParams.of(ell)
    if args.degree < 0:
        raise ConfigError("--degree must be >= 0")
    grid = make_grid(sp, args.radial, args.angular)
    rows = []
    for alpha in basis_enumerate(args.degree, sp):
        mono = monomial(sp.d, alpha, args.degree)
        closed = monomial_norm_sq(alpha, sp)
        quad = quad_inner_product(mono, mono, sp, grid).real
        rows.append((";".join(map(str, alpha)), closed, quad, abs(closed - quad)))
    if cfg.fmt == "json":
        report = {"config": cfg.as_dict(), "radial": args.radial, "angular": args.angular,
                  "rows": [{"alpha": a, "closed": c, "quad": q, "absdiff": e} for a, c, q, e in rows]}
        _write(cfg, json.dumps(report, indent=2, sort_keys=True) + "\n")
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "closed", "quad", "absdiff"])
    for a, c, q, e in rows:
        w.writerow([a, _fmt(c), _fmt(q), _fmt(e)])
    _write(cfg, buf.getvalue())
    return 0


def cmd_selfmap(cfg: RunConfig, args) -> int:
    data = load_json(args.lfts)
    if isinstance(data, dict):
        data = data.get("lfts", data)
    if not isinstance(data, list):
        raise ConfigError(f"{args.lfts}: expected a list of LFT objects")
    rows = []
    for i, obj in enumerate(data):
        phi = lft_from_json(obj, f"lfts[{i}]")
        ok, margin = is_self_map(phi)
        rows.append((phi, margin, ok))
    if cfg.fmt == "json":
        report = {"config": cfg.as_dict(),
                  "rows": [{"a": _fmt_complex(p.a), "b": _fmt_complex(p.b), "c": _fmt_complex(p.c),
                            "d": _fmt_complex(p.d), "margin": m, "verdict": ok} for p, m, ok in rows]}
        _write(cfg, json.dumps(report, indent=2, sort_keys=True) + "\n")
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "c", "d", "margin", "verdict"])
    for p, m, ok in rows:
        w.writerow([_fmt_complex(p.a), _fmt_complex(p.b), _fmt_complex(p.c), _fmt_complex(p.d),
                    _fmt(m), "true" if ok else "false"])
    _write(cfg, buf.getvalue())
    return 0


COMMANDS = {
    "classify": cmd_classify,
    "defect": cmd_defect,
    "matrix": cmd_matrix,
    "norms": cmd_norms,
    "selfmap": cmd_selfmap,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trunc", help="caps per variable, N or N1,N2,...")
    common.add_argument("--samples", type=int, default=engine.DEFAULT_SAMPLES)
    common.add_argument("--radius", type=float, default=engine.DEFAULT_RADIUS)
    common.add_argument("--seed", type=int, default=engine.DEFAULT_SEED)
    common.add_argument("--tol-exact", type=float, default=cl.TOL_EXACT)
    common.add_argument("--tol-reject", type=float, default=cl.TOL_REJECT)
    common.add_argument("--out", help="output path (default: stdout)")

    parser = argparse.ArgumentParser(
        prog="wco-lab",
        description="Weighted composition operators on Bergman spaces of the polydisk.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="run a decision procedure")
    p.add_argument("--kind", required=True, choices=["realsym", "unitary", "csym"])
    p.add_argument("--symbol", required=True)
    p.add_argument("--conj")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("defect", parents=[common], help="pointwise and section defects")
    p.add_argument("--symbol", required=True)
    p.add_argument("--conj")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("matrix", parents=[common], help="dump a matrix section")
    p.add_argument("--symbol", required=True)
    p.add_argument("--format", choices=["json", "csv"], default="csv")

    p = sub.add_parser("norms", parents=[common], help="monomial norms vs quadrature")
    p.add_argument("--ell", required=True, help="weights, e.g. 0 or 0,1")
    p.add_argument("--degree", type=int, default=4, help="max degree per variable")
    p.add_argument("--radial", type=int, default=32)
    p.add_argument("--angular", type=int, default=64)
    p.add_argument("--format", choices=["json", "csv"], default="csv")

    p = sub.add_parser("selfmap", parents=[common], help="self-map criterion margins")
    p.add_argument("--lfts", required=True, help="JSON list of {a,b,c,d}")
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    try:
        cfg = _config(args)
        return COMMANDS[args.command](cfg, args)
    except (WcoError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
