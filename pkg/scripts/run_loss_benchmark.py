#!/usr/bin/env python3
"""Full pure-loss benchmark: amplitude sweeps, loss-rate sweeps and
pairwise relative-infidelity curves for the single- vs multi-shell code
pairs with 8, 12 and (optionally) 24 coherent states per codeword.

Writes CSV artifacts into results/ (or --outdir).  The two-mode 24-point
pair is gated behind --big because its truncated spaces are much larger;
expect a few minutes of runtime with it enabled.

Usage:
    python scripts/run_loss_benchmark.py [--outdir results] [--big]
    python scripts/run_loss_benchmark.py --pairs 8 12 --gammas 0.05 0.1
"""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cubacode import build_catalog_code, normalize_energy  # noqa: E402
from cubacode.bench import (  # noqa: E402
    DEFAULT_BASE_CUTOFF,
    optimal_scale_adaptive,
    pair_bench,
    sweep_alpha,
    sweep_gamma,
)


def fmt(x) -> str:
    return format(float(x), ".12g")


def write_csv(path: Path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
    print(f"  wrote {path}")


def bench_points_rows(points):
    return [
        [p.code, fmt(p.gamma), fmt(p.scale), fmt(p.nbar), fmt(p.fidelity),
         fmt(p.infidelity), str(p.cutoff), fmt(p.tail_mass), str(p.kraus_lmax)]
        for p in points
    ]


BENCH_HEADER = ["code", "gamma", "scale", "nbar", "fidelity", "infidelity",
                "cutoff", "tail_mass", "kraus_lmax"]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--pairs", type=int, nargs="+", default=[8, 12])
    parser.add_argument("--gammas", type=float, nargs="+",
                        default=[0.02, 0.05, 0.08, 0.1, 0.12, 0.15, 0.18, 0.2])
    parser.add_argument("--grid", type=float, nargs=3, default=[0.8, 3.3, 14],
                        metavar=("LO", "HI", "N"))
    parser.add_argument("--cutoff", type=int, default=DEFAULT_BASE_CUTOFF)
    parser.add_argument("--jobs", type=int, default=None)
    parser.add_argument("--big", action="store_true",
                        help="include the two-mode 24-point pair")
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    pairs = list(args.pairs)
    if args.big and 24 not in pairs:
        pairs.append(24)

    grid = np.linspace(args.grid[0], args.grid[1], int(args.grid[2]))
    gamma_axis = np.round(np.arange(0.0, 0.2001, 0.02), 4)

    for ell in pairs:
        if ell == 24 and not args.big:
            print(f"skipping the two-mode pair {ell} (rerun with --big)")
            continue
        base_cutoff = args.cutoff if ell != 24 else max(24, args.cutoff // 2 * 1)
        if ell == 24:
            base_cutoff = 24  # two modes: dimension = cutoff^2
        qcc = normalize_energy(build_catalog_code(f"qcc{ell}"), 1.0)[0]
        qsc = normalize_energy(build_catalog_code(f"qsc{ell}"), 1.0)[0]
        this_grid = grid if ell != 24 else np.linspace(0.9, 2.1, 7)
        print(f"pair {ell}: amplitude sweeps at gamma = 0.1")
        points = []
        for label, code in ((f"qcc{ell}", qcc), (f"qsc{ell}", qsc)):
            points += sweep_alpha(code, label, 0.1, this_grid,
                                  base_cutoff=base_cutoff, jobs=args.jobs)
        write_csv(outdir / f"sweep_alpha_{ell}.csv", BENCH_HEADER, bench_points_rows(points))

        print(f"pair {ell}: loss-rate sweeps at the gamma = 0.1 optima")
        points = []
        optima = {}
        for label, code in ((f"qcc{ell}", qcc), (f"qsc{ell}", qsc)):
            s_op, f_op = optimal_scale_adaptive(code, 0.1, this_grid,
                                                base_cutoff=base_cutoff, jobs=args.jobs)
            optima[label] = s_op
            print(f"  {label}: alpha_op = {s_op:.4f}, F_op = {f_op:.6f}")
            points += sweep_gamma(code, label, gamma_axis, scale=s_op,
                                  base_cutoff=base_cutoff, jobs=args.jobs)
        write_csv(outdir / f"sweep_gamma_{ell}.csv", BENCH_HEADER, bench_points_rows(points))

        print(f"pair {ell}: relative infidelity")
        _, _, rows = pair_bench(qcc, qsc, args.gammas,
                                grid=[optima[f"qcc{ell}"], optima[f"qsc{ell}"]],
                                base_cutoff=base_cutoff, jobs=args.jobs)
        write_csv(
            outdir / f"pair_{ell}.csv",
            ["gamma", "f_qsc", "f_qcc", "r_infidelity"],
            [[fmt(r.gamma), fmt(r.f_single), fmt(r.f_multi), fmt(r.r_infidelity)] for r in rows],
        )
    print("done")
    return 0


if __name__ == "__main__":
    sys.exit(main())
