#!/usr/bin/env python3
"""Eigenphase correlation function chi(Theta) versus T-gate doping.

One CSV per doping level, each with a parallel CUE baseline column; a second
run writes the level-spacing histograms and the degeneracy-fraction table.
"""

from __future__ import annotations

import argparse

from cliffordlab.harness import RunConfig, run


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--qubits", type=int, default=5)
    p.add_argument("--depth", type=int, default=25)
    p.add_argument("--t-gates", default="0,1,2,3,4,5,6,20")
    p.add_argument("--samples", type=int, default=2048)
    p.add_argument("--bins", type=int, default=16000, help="number of Theta bins over [0, 2*pi)")
    p.add_argument("--seed", type=int, default=2)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="runs/chi")
    args = p.parse_args()

    sweep = tuple(int(x) for x in args.t_gates.split(","))
    common = dict(
        n_qubits=args.qubits,
        depth=args.depth,
        t_gates=sweep,
        n_samples=args.samples,
        seed=args.seed,
        workers=args.workers,
    )
    import math

    chi_cfg = RunConfig(kind="spectrum", bin_width=2 * math.pi / args.bins,
                        out_dir=f"{args.out}/correlation", **common)
    manifest = run(chi_cfg)
    print(f"correlation: {len(manifest.outputs)} files ({manifest.wall_clock_s:.1f}s)")

    spacing_cfg = RunConfig(kind="spacing", out_dir=f"{args.out}/spacing", **common)
    manifest = run(spacing_cfg)
    print(f"spacing: {len(manifest.outputs)} files ({manifest.wall_clock_s:.1f}s)")


if __name__ == "__main__":
    main()
