#!/usr/bin/env python3
"""Orbit-length statistics over a register-size sweep.

Writes one run directory per N with the ensemble census, the per-circuit
censuses, and the integrated staircase I(L / L_max).
"""

from __future__ import annotations

import argparse
from pathlib import Path

from cliffordlab.harness import RunConfig, run


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--qubits", default="2,4,6,8,10", help="comma-separated N sweep")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="runs/orbits")
    args = p.parse_args()

    for n in (int(x) for x in args.qubits.split(",")):
        out = Path(args.out) / f"n{n}"
        cfg = RunConfig(
            kind="orbits",
            n_qubits=n,
            n_samples=args.samples,
            seed=args.seed,
            workers=args.workers,
            out_dir=str(out),
        )
        manifest = run(cfg)
        print(f"N={n}: {len(manifest.outputs)} files -> {out} ({manifest.wall_clock_s:.1f}s)")


if __name__ == "__main__":
    main()
