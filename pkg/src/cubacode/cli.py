"""Command-line interface.

Subcommands: catalog, show, params, moments, bounds, kl, stab, bench
(sweep-alpha / sweep-gamma / pair).  Codes come either from the built-in
catalog (--catalog NAME plus its numeric flags) or from a JSON definition
file (--code-file PATH).  Reports go to standard output; CSV artifacts are
written when --out is given.  Floats are formatted with 12 significant
digits so identical inputs produce byte-identical output.  Exit status: 0
on success, 1 on numerical failure, 2 on validation errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

import numpy as np

from . import bench as bench_mod
from .catalog import BENCH_ALIASES, CATALOG, build_catalog_code, catalog_names, describe
from .codefile import load_code
from .constellation import CodeParams, CodeSpec, normalize_energy, resolution, scale_code
from .errors import NumericalFailure, ValidationError
from .fock import FockSpace
from .klcheck import code_parameters, kl_report
from .moments import code_size_bounds, moment_match_degree, multi_indices_upto, weighted_moment
from .stabilizer import AnnihilationPolynomial, verify_ztype, ztype_polynomials


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _parse_grid(text: str) -> List[float]:
    """a:b:n -> n evenly spaced values; or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"grid must be a:b:n or a comma list (got {text!r})")
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            raise ValidationError("grid needs at least one point")
        return [float(v) for v in np.linspace(a, b, n)]
    return [float(v) for v in text.split(",") if v.strip()]


def _parse_floats(text: str) -> List[float]:
    return [float(v) for v in text.replace(":", ",").split(",") if v.strip()]


def _add_code_source(parser: argparse.ArgumentParser):
    parser.add_argument("--catalog", help="catalog code name (see `cubacode catalog`)")
    parser.add_argument("--code-file", help="JSON code definition file")
    parser.add_argument("--m", type=int, help="points per polygon/shell")
    parser.add_argument("--K", type=int, help="number of logical codewords")
    parser.add_argument("--p", type=int, help="number of shells (polygon codes)")
    parser.add_argument("--radii", help="shell radii, e.g. 1,2 or 1:2:3-style list")
    parser.add_argument("--radius", type=float, help="single-shell radius (cat code)")
    parser.add_argument("--D", type=int, help="real dimension (polytope codes)")
    parser.add_argument("--tau", type=float, help="radius ratio (twoshell_24cell)")
    parser.add_argument("--r1", type=float, help="inner radius (twoshell_8_16)")
    parser.add_argument("--r2", type=float, help="outer radius (twoshell_8_16)")


_CATALOG_FLAGS = ("m", "K", "p", "radii", "radius", "D", "tau", "r1", "r2")


def _load_code(args) -> CodeSpec:
    sources = [s for s in (args.catalog, args.code_file) if s]
    if len(sources) != 1:
        raise ValidationError("give exactly one code source: --catalog NAME or --code-file PATH")
    if args.code_file:
        return load_code(args.code_file)
    params = {}
    for flag in _CATALOG_FLAGS:
        val = getattr(args, flag, None)
        if val is None:
            continue
        params[flag] = _parse_floats(val) if flag == "radii" else val
    return build_catalog_code(args.catalog, params)


def _header(args, extra: Optional[dict] = None) -> List[str]:
    """Report header: every numeric option in effect, for auditability."""
    opts = dict(extra or {})
    for key in ("gamma", "scale", "cutoff", "ceiling", "tol", "max_degree", "max_loss",
                "normalize", "grid", "gammas", "jobs", "seed"):
        if hasattr(args, key) and getattr(args, key) is not None:
            opts.setdefault(key, getattr(args, key))
    lines = [f"# cubacode {args.command}"]
    for key in sorted(opts):
        lines.append(f"# {key} = {opts[key]}")
    return lines


def _write_csv(path: Optional[str], header: List[str], rows: List[List[str]]):
    text = ",".join(header) + "\n" + "".join(",".join(r) + "\n" for r in rows)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_catalog(args) -> int:
    print("catalog codes:")
    for name in sorted(CATALOG):
        entry = CATALOG[name]
        params = f" ({', '.join(entry.params)})" if entry.params else ""
        print(f"  {name}{params}: {entry.summary}")
    print("benchmark aliases:")
    for name in sorted(BENCH_ALIASES):
        print(f"  {name}")
    return 0


def cmd_show(args) -> int:
    if args.code_file:
        code = _load_code(args)
        sizes = "/".join(str(c.size) for c in code.logicals)
        print(f"{code.name}: {code.modes} modes, {code.dim} codewords, {sizes} points")
        print(f"  shells: {', '.join(_fmt(r) for r in code.shells) or '(none declared)'}")
        print(f"  claimed degree: {code.claimed_degree}")
        return 0
    params = {}
    for flag in _CATALOG_FLAGS:
        val = getattr(args, flag, None)
        if val is not None:
            params[flag] = _parse_floats(val) if flag == "radii" else val
    print(describe(args.catalog, params))
    return 0


def cmd_params(args) -> int:
    code = _load_code(args)
    if args.normalize is not None:
        code, _ = normalize_energy(code, args.normalize)
    triple = code_parameters(code, ceiling=args.ceiling, tol=args.tol)
    params = CodeParams(
        modes=code.modes,
        dim=code.dim,
        resolution=resolution(code),
        t_down=triple.t_down,
        d_updown=triple.d_updown,
        d_down=triple.d_down,
    )
    for line in _header(args):
        print(line)
    print(
        f"(( {params.modes}, {params.dim}, {_fmt(params.resolution)}, "
        f"<{params.t_down},{params.d_updown},{params.d_down}> ))"
    )
    return 0


def cmd_moments(args) -> int:
    code = _load_code(args)
    if code.dim < 2:
        raise ValidationError("moment comparison needs at least two codewords")
    n = code.modes
    for line in _header(args):
        print(line)
    t = moment_match_degree(code, args.max_degree, tol=args.tol)
    print(f"moment match degree: {t} (searched to {args.max_degree}, tol {_fmt(args.tol)})")
    rows = []
    worst = (0.0, None)
    for pq in multi_indices_upto(2 * n, args.max_degree):
        p, q = pq[:n], pq[n:]
        moms = [weighted_moment(c, p, q) for c in code.logicals]
        dev = max(abs(m - moms[0]) for m in moms)
        if dev > worst[0]:
            worst = (dev, (p, q))
        row = [" ".join(map(str, p)), " ".join(map(str, q))]
        for m in moms:
            row += [_fmt(m.real), _fmt(m.imag)]
        row.append(_fmt(dev))
        rows.append(row)
    print(f"largest deviation {_fmt(worst[0])} at (p, q) = {worst[1]}")
    if args.out:
        header = ["p", "q"]
        for k in range(code.dim):
            header += [f"moment{k}_re", f"moment{k}_im"]
        header.append("max_deviation")
        _write_csv(args.out, header, rows)
        print(f"wrote {args.out}")
    return 0


def cmd_bounds(args) -> int:
    code = _load_code(args)
    for line in _header(args):
        print(line)
    degree = args.degree if args.degree is not None else code.claimed_degree
    reports = code_size_bounds(code, t=degree)
    for k, rep in enumerate(reports):
        tag = " (conservative: multi-shell support widened to full space)" if rep.conservative else ""
        moller = str(rep.moller_min) if rep.moller_min is not None else "n/a (even degree)"
        print(
            f"logical {k}: {rep.actual} points, degree {rep.t} on {rep.domain}({rep.D}){tag}\n"
            f"  lower bound {rep.fisher_min}, odd-degree lower bound {moller}, "
            f"upper bound {rep.tchakaloff_max}, tight: {rep.tight}"
        )
    return 0


def cmd_kl(args) -> int:
    code = _load_code(args)
    report = kl_report(code, max_loss=args.max_loss, scale=args.scale)
    for line in _header(args):
        print(line)
    print(f"error set: {report.error_set_label} at scale {_fmt(report.scale)}")
    print(f"off-diagonal max |<C_k|E+E|C_l>|: {_fmt(report.off_diag_max)}")
    print(f"off-diagonal max (normalized):   {_fmt(report.off_diag_rel)}")
    print(f"diagonal spread (normalized):    {_fmt(report.diag_spread_max)}")
    print(f"diagonal spread (raw):           {_fmt(report.diag_spread_raw)}")
    if args.out:
        header = ["q_mu", "q_nu", "k", "l", "re", "im"]
        rows = []
        for (mu, nu), block in sorted(report.matrices.items()):
            for k in range(block.shape[0]):
                for l in range(block.shape[1]):
                    rows.append(
                        [
                            " ".join(map(str, mu)),
                            " ".join(map(str, nu)),
                            str(k),
                            str(l),
                            _fmt(block[k, l].real),
                            _fmt(block[k, l].imag),
                        ]
                    )
        _write_csv(args.out, header, rows)
        print(f"wrote {args.out}")
    return 0


def _read_poly_file(path: str, modes: int) -> List[AnnihilationPolynomial]:
    import json

    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "polynomials" not in doc:
        raise ValidationError(f"{path}: expected an object with a 'polynomials' list")
    polys = []
    for i, spec in enumerate(doc["polynomials"]):
        terms = {}
        for term in spec.get("terms", []):
            u = tuple(int(x) for x in term["u"])
            terms[u] = complex(float(term.get("re", 0.0)), float(term.get("im", 0.0)))
        try:
            polys.append(AnnihilationPolynomial.from_dict(terms, modes=modes))
        except ValidationError as exc:
            raise ValidationError(f"{path}: polynomials[{i}]: {exc}") from exc
    if not polys:
        raise ValidationError(f"{path}: no polynomials")
    return polys


def cmd_stab(args) -> int:
    code = _load_code(args)
    space = FockSpace(code.modes, args.cutoff)
    for line in _header(args):
        print(line)
    polys = None
    if args.poly_file:
        polys = _read_poly_file(args.poly_file, code.modes)
    else:
        polys = ztype_polynomials(scale_code(code, args.scale))
    print(f"z-type generators: {len(polys)} (degrees {[p.degree() for p in polys]})")
    residual = verify_ztype(code, args.scale, space, polys=polys)
    print(f"z-type max residual ||F|C_k>||: {_fmt(residual)}")
    return 0


def _bench_pair_codes(args):
    if args.pair is not None:
        if args.pair not in (8, 12, 24):
            raise ValidationError("--pair must be 8, 12 or 24")
        qcc = build_catalog_code(f"qcc{args.pair}")
        qsc = build_catalog_code(f"qsc{args.pair}")
        return qcc, qsc
    if not (args.qcc and args.qsc):
        raise ValidationError("pair bench needs --pair N or both --qcc and --qsc")
    return build_catalog_code(args.qcc), build_catalog_code(args.qsc)


def _check_budget(code: CodeSpec, args):
    if code.modes > 1 and not args.big:
        raise ValidationError(
            "two-mode benchmarks are gated behind --big (dimension budget); "
            "rerun with --big to allow them"
        )


_BENCH_HEADER = [
    "code", "gamma", "scale", "nbar", "fidelity", "infidelity",
    "cutoff", "tail_mass", "kraus_lmax",
]


def _bench_rows(points) -> List[List[str]]:
    return [
        [
            p.code, _fmt(p.gamma), _fmt(p.scale), _fmt(p.nbar), _fmt(p.fidelity),
            _fmt(p.infidelity), str(p.cutoff), _fmt(p.tail_mass), str(p.kraus_lmax),
        ]
        for p in points
    ]


def cmd_bench(args) -> int:
    jobs = args.jobs if args.jobs else (os.cpu_count() or 1)
    if args.bench_command == "sweep-alpha":
        code = _load_code(args)
        _check_budget(code, args)
        label = args.catalog or os.path.basename(args.code_file)
        norm = bench_mod.normalized(code)
        points = bench_mod.sweep_alpha(
            norm, label, args.gamma, _parse_grid(args.grid),
            base_cutoff=args.cutoff, jobs=jobs,
        )
        for line in _header(args):
            print(line)
        _write_csv(args.out, _BENCH_HEADER, _bench_rows(points))
        if args.out:
            print(f"wrote {args.out}")
        return 0
    if args.bench_command == "sweep-gamma":
        code = _load_code(args)
        _check_budget(code, args)
        label = args.catalog or os.path.basename(args.code_file)
        norm = bench_mod.normalized(code)
        scale = None if args.alpha_op == "auto" else float(args.alpha_op)
        points = bench_mod.sweep_gamma(
            norm, label, _parse_floats(args.gammas), scale=scale,
            grid=_parse_grid(args.grid), base_cutoff=args.cutoff, jobs=jobs,
        )
        for line in _header(args):
            print(line)
        _write_csv(args.out, _BENCH_HEADER, _bench_rows(points))
        if args.out:
            print(f"wrote {args.out}")
        return 0
    if args.bench_command == "pair":
        qcc, qsc = _bench_pair_codes(args)
        _check_budget(qcc, args)
        _check_budget(qsc, args)
        opt_multi, opt_single, rows = bench_mod.pair_bench(
            bench_mod.normalized(qcc), bench_mod.normalized(qsc),
            _parse_floats(args.gammas), grid=_parse_grid(args.grid),
            base_cutoff=args.cutoff, jobs=jobs,
        )
        for line in _header(args, {"qcc_alpha_op": _fmt(opt_multi[0]), "qsc_alpha_op": _fmt(opt_single[0])}):
            print(line)
        header = ["gamma", "f_qsc", "f_qcc", "r_infidelity"]
        out_rows = [
            [_fmt(r.gamma), _fmt(r.f_single), _fmt(r.f_multi), _fmt(r.r_infidelity)]
            for r in rows
        ]
        _write_csv(args.out, header, out_rows)
        if args.out:
            print(f"wrote {args.out}")
        return 0
    raise ValidationError(f"unknown bench command {args.bench_command!r}")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubacode",
        description="coherent-state constellation codes: construction, verification, benchmarking",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", help="list available catalog codes")

    p_show = sub.add_parser("show", help="describe a code")
    _add_code_source(p_show)

    p_params = sub.add_parser("params", help="print (( n, K, d_E, <t,d,d> ))")
    _add_code_source(p_params)
    p_params.add_argument("--ceiling", type=int, default=14, help="parameter search ceiling")
    p_params.add_argument("--tol", type=float, default=1e-9, help="moment matching tolerance")
    p_params.add_argument("--normalize", type=float, default=None,
                          help="normalize mean photon number to this value first")

    p_mom = sub.add_parser("moments", help="weighted-moment comparison across codewords")
    _add_code_source(p_mom)
    p_mom.add_argument("--max-degree", type=int, default=8, dest="max_degree")
    p_mom.add_argument("--tol", type=float, default=1e-9)
    p_mom.add_argument("--out", help="CSV output path")

    p_bounds = sub.add_parser("bounds", help="constellation-size bounds")
    _add_code_source(p_bounds)
    p_bounds.add_argument("--degree", type=int, default=None,
                          help="cubature degree (default: the code's claimed degree)")

    p_kl = sub.add_parser("kl", help="closed-form error-correction condition report")
    _add_code_source(p_kl)
    p_kl.add_argument("--scale", type=float, default=2.0)
    p_kl.add_argument("--max-loss", type=int, default=2, dest="max_loss")
    p_kl.add_argument("--out", help="CSV output path")

    p_stab = sub.add_parser("stab", help="stabilizer residual tables")
    _add_code_source(p_stab)
    p_stab.add_argument("--scale", type=float, default=2.0)
    p_stab.add_argument("--cutoff", type=int, default=64)
    p_stab.add_argument("--poly-file", dest="poly_file",
                        help="JSON file with user polynomials for the scaled code")

    p_bench = sub.add_parser("bench", help="pure-loss channel benchmarks (CSV)")
    bench_sub = p_bench.add_subparsers(dest="bench_command", required=True)

    def _common_bench(p, code_source=True):
        if code_source:
            _add_code_source(p)
        p.add_argument("--cutoff", type=int, default=bench_mod.DEFAULT_BASE_CUTOFF,
                       help="base per-mode cutoff (raised adaptively per point)")
        p.add_argument("--grid", default="0.8:3.3:14", help="scale grid a:b:n")
        p.add_argument("--jobs", type=int, default=None, help="parallel evaluations")
        p.add_argument("--seed", type=int, default=None, help="recorded in the header")
        p.add_argument("--big", action="store_true",
                       help="allow two-mode codes (larger dimension budget)")
        p.add_argument("--out", help="CSV output path (default: stdout)")

    p_sa = bench_sub.add_parser("sweep-alpha", help="fidelity vs amplitude scale")
    _common_bench(p_sa)
    p_sa.add_argument("--gamma", type=float, default=0.1)

    p_sg = bench_sub.add_parser("sweep-gamma", help="fidelity vs loss rate")
    _common_bench(p_sg)
    p_sg.add_argument("--alpha-op", default="auto", dest="alpha_op",
                      help="'auto' (optimize at gamma=0.1) or a fixed scale")
    p_sg.add_argument("--gammas", default="0,0.02,0.04,0.06,0.08,0.1,0.12,0.14,0.16,0.18,0.2")

    p_pair = bench_sub.add_parser("pair", help="relative infidelity of a code pair")
    _common_bench(p_pair, code_source=False)
    p_pair.add_argument("--pair", type=int, default=None,
                        help="benchmark pair by point count: 8, 12 or 24")
    p_pair.add_argument("--qcc", help="catalog name of the multi-shell code")
    p_pair.add_argument("--qsc", help="catalog name of the single-shell code")
    p_pair.add_argument("--gammas", default="0.05,0.1,0.15,0.2")

    return parser


_COMMANDS = {
    "catalog": cmd_catalog,
    "show": cmd_show,
    "params": cmd_params,
    "moments": cmd_moments,
    "bounds": cmd_bounds,
    "kl": cmd_kl,
    "stab": cmd_stab,
    "bench": cmd_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
