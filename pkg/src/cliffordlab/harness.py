"""Batch CLI: seeded ensemble runs, CSV persistence, reproducibility manifests.

Every experiment derives one RNG stream per sample from
``SeedSequence((master_seed, stream_tag, sample_index))``, so results are
byte-identical for any worker count and any contiguous chunking of the
sample range.  A manifest listing every output file with its SHA-256 allows
a run to be re-executed and compared bit for bit (wall clock aside).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CliffordLabError, ConfigError, NumericalError, ResourceCapError
from . import magic, orbits, spectra
from .tableau import default_depth

PACKAGE_VERSION = "0.1.0"

EXPERIMENT_KINDS = (
    "orbits",
    "spectrum",
    "spacing",
    "magic",
    "bloch-map",
    "haar-baseline",
    "appendix-a",
)

# default size caps per experiment family; --allow-large lifts them
ORBIT_QUBIT_CAP = 13
DENSE_QUBIT_CAP = 9
MAGIC_QUBIT_CAP = 10

_SEED_RULE = "rng(sample) = PCG64(SeedSequence((seed, stream_tag, sample_index)))"

_MANIFEST_FORMAT = "cliffordlab-manifest"
_MANIFEST_VERSION = 1
_CONFIG_SCHEMA_VERSION = 1

_TWO_PI = 2.0 * np.pi


@dataclass
class RunConfig:
    kind: str
    n_qubits: int = 4
    depth: int | None = None  # None resolves to 5 * n_qubits
    t_gates: tuple[int, ...] = (0,)
    n_samples: int = 256
    seed: int = 0
    bin_width: float = _TWO_PI / 16000
    spacing_bin_width: float | None = None
    m2_bin_width: float = 0.02
    resolution: int = 128
    eps_deg: float = 1e-9
    boundary: str = "open"
    workers: int = 1
    out_dir: str = "runs/out"
    allow_large: bool = False
    schema_version: int = _CONFIG_SCHEMA_VERSION

    def resolved_depth(self) -> int:
        return self.depth if self.depth is not None else default_depth(self.n_qubits)

    def resolved(self) -> dict:
        doc = dataclasses.asdict(self)
        doc["depth"] = self.resolved_depth()
        doc["t_gates"] = list(self.t_gates)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        if "t_gates" in doc:
            doc = dict(doc)
            doc["t_gates"] = tuple(int(t) for t in doc["t_gates"])
        cfg = cls(**doc)
        if cfg.schema_version != _CONFIG_SCHEMA_VERSION:
            raise ConfigError(f"unsupported config schema version {cfg.schema_version}")
        return cfg

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        doc = json.loads(Path(path).read_text())
        return cls.from_dict(doc)


def validate(config: RunConfig) -> list[str]:
    """All configuration violations, without side effects; empty list means runnable."""
    out: list[str] = []
    if config.kind not in EXPERIMENT_KINDS:
        out.append(f"config: unknown experiment kind {config.kind!r}")
        return out
    if config.n_samples < 1:
        out.append("config: n_samples must be >= 1")
    if config.depth is not None and config.depth < 1:
        out.append("config: depth must be >= 1")
    if not config.t_gates:
        out.append("config: t_gates sweep must be nonempty")
    if config.workers < 1:
        out.append("config: workers must be >= 1")
    if config.kind in ("orbits", "spectrum", "spacing", "magic", "haar-baseline"):
        if config.n_qubits < 2:
            out.append("config: experiments need n_qubits >= 2")
    depth = config.resolved_depth()
    capacity = depth * config.n_qubits
    if config.kind in ("spectrum", "spacing", "magic"):
        for nt in config.t_gates:
            if nt < 0:
                out.append(f"config: negative T-gate count {nt}")
            elif nt > capacity:
                out.append(
                    f"capacity: {nt} T-gates exceed the {depth} x {config.n_qubits} grid"
                )
    if config.kind == "spacing" and 0 not in config.t_gates:
        out.append("config: spacing sweep needs N_T = 0 for the degeneracy baseline")
    if not config.allow_large:
        cap = {
            "orbits": ORBIT_QUBIT_CAP,
            "spectrum": DENSE_QUBIT_CAP,
            "spacing": DENSE_QUBIT_CAP,
            "magic": MAGIC_QUBIT_CAP,
            "haar-baseline": MAGIC_QUBIT_CAP,
        }.get(config.kind)
        if cap is not None and config.n_qubits > cap:
            out.append(
                f"resource: {config.kind} caps at {cap} qubits "
                f"(got {config.n_qubits}; pass --allow-large to override)"
            )
    return out


@dataclass
class RunManifest:
    config: dict
    outputs: list[dict]
    wall_clock_s: float
    package_version: str = PACKAGE_VERSION
    seed_rule: str = _SEED_RULE

    def to_json(self) -> str:
        doc = {
            "format": _MANIFEST_FORMAT,
            "version": _MANIFEST_VERSION,
            "package_version": self.package_version,
            "seed_rule": self.seed_rule,
            "config": self.config,
            "outputs": self.outputs,
            "wall_clock_s": self.wall_clock_s,
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunManifest":
        doc = json.loads(Path(path).read_text())
        if doc.get("format") != _MANIFEST_FORMAT:
            raise ConfigError("not a run manifest")
        return cls(
            config=doc["config"],
            outputs=doc["outputs"],
            wall_clock_s=doc.get("wall_clock_s", 0.0),
            package_version=doc.get("package_version", "?"),
            seed_rule=doc.get("seed_rule", ""),
        )


# ---------------------------------------------------------------------------
# parallel sample fan-out
# ---------------------------------------------------------------------------

def _chunk_ranges(n_samples: int, workers: int) -> list[tuple[int, int]]:
    per = -(-n_samples // workers)
    return [(s, min(s + per, n_samples)) for s in range(0, n_samples, per)]


def _orbit_chunk(args) -> list[orbits.OrbitCensus]:
    n, depth, seed, boundary, start, stop = args
    return orbits.sample_orbit_censuses(n, stop, seed, depth, boundary, (start, stop))


def _spectra_chunk(args) -> np.ndarray:
    n, depth, nt, seed, boundary, start, stop = args
    return spectra.sample_circuit_spectra(
        n, depth, nt, stop, seed, (start, stop), boundary, max_qubits=n
    )


def _magic_chunk(args) -> np.ndarray:
    n, depth, nt, seed, start, stop = args
    return magic.sample_magic_values(n, depth, nt, stop, seed, (start, stop))


def _haar_magic_chunk(args) -> np.ndarray:
    n, seed, start, stop = args
    return magic.haar_magic_values(n, stop, seed, (start, stop))


def _fan_out(fn, tasks: list[tuple], workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _sample_spectra(config: RunConfig, nt: int) -> np.ndarray:
    depth = config.resolved_depth()
    tasks = [
        (config.n_qubits, depth, nt, config.seed + nt, config.boundary, s, e)
        for s, e in _chunk_ranges(config.n_samples, config.workers)
    ]
    return np.concatenate(_fan_out(_spectra_chunk, tasks, config.workers), axis=0)


# ---------------------------------------------------------------------------
# output writing
# ---------------------------------------------------------------------------

def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _run_orbits(config: RunConfig, out: Path) -> list[str]:
    depth = config.resolved_depth()
    tasks = [
        (config.n_qubits, depth, config.seed, config.boundary, s, e)
        for s, e in _chunk_ranges(config.n_samples, config.workers)
    ]
    censuses: list[orbits.OrbitCensus] = []
    for part in _fan_out(_orbit_chunk, tasks, config.workers):
        censuses.extend(part)
    ensemble = orbits.ensemble_from_censuses(config.n_qubits, censuses, config.seed)

    per_rows = []
    for i, census in enumerate(censuses):
        probs = census.probabilities()
        for (length, tau), count in sorted(census.entries.items()):
            per_rows.append([i, length, tau, count, probs[(length, tau)]])
    _write_csv(out / "orbit_census_per_circuit.csv", ["sample", "L", "tau", "N_C", "P"], per_rows)

    probs = ensemble.probabilities()
    mean_counts: dict[tuple[int, int], float] = {}
    for census in censuses:
        for key, count in census.entries.items():
            mean_counts[key] = mean_counts.get(key, 0.0) + count / len(censuses)
    ens_rows = [
        [length, tau, mean_counts[(length, tau)], probs[(length, tau)]]
        for (length, tau) in sorted(probs)
    ]
    _write_csv(out / "orbit_census.csv", ["L", "tau", "N_C_mean", "P"], ens_rows)

    stair = ensemble.integrated()
    _write_csv(
        out / "orbit_staircase.csv",
        ["x", "I"],
        [[float(x), float(v)] for x, v in zip(stair.xs, stair.values)],
    )
    return ["orbit_census_per_circuit.csv", "orbit_census.csv", "orbit_staircase.csv"]


def _run_spectrum(config: RunConfig, out: Path) -> list[str]:
    files = []
    for nt in config.t_gates:
        phases = _sample_spectra(config, nt)
        hist = spectra.correlation_function(phases, config.bin_width)
        centers = hist.bin_centers
        baseline = spectra.chi_cue(centers, hist.dim)
        name = f"chi_nt{nt}.csv"
        _write_csv(
            out / name,
            ["theta", "chi", "chi_cue"],
            zip(centers.tolist(), hist.density.tolist(), baseline.tolist()),
        )
        files.append(name)
    return files


def _run_spacing(config: RunConfig, out: Path) -> list[str]:
    files = []
    gaps_by_nt: dict[int, np.ndarray] = {}
    for nt in config.t_gates:
        phases = _sample_spectra(config, nt)
        gaps_by_nt[nt] = spectra.spacings(phases)
        hist = spectra.level_spacing(phases, config.spacing_bin_width)
        zeta, density = hist.scaled_columns()
        keep = density > 0
        name = f"spacing_nt{nt}.csv"
        _write_csv(
            out / name,
            ["zeta_scaled", "P"],
            zip(zeta[keep].tolist(), density[keep].tolist()),
        )
        files.append(name)
    ratios = spectra.degeneracy_fraction(gaps_by_nt, config.eps_deg)
    rows = []
    for nt in config.t_gates:
        g = spectra.degeneracy_count(gaps_by_nt[nt], config.eps_deg) / gaps_by_nt[nt].shape[0]
        rows.append([config.n_qubits, nt, g, ratios[nt]])
    _write_csv(out / "degeneracy.csv", ["n_qubits", "n_t", "g", "g_ratio"], rows)
    files.append("degeneracy.csv")
    return files


def _magic_outputs(config: RunConfig, out: Path, dist: magic.MagicDistribution, tag: str) -> list[str]:
    files = []
    support = dist.distinct_values()
    if support is not None:
        name = f"magic_support_{tag}.csv"
        _write_csv(out / name, ["M2", "count"], support)
        files.append(name)
    edges, density = dist.histogram(config.m2_bin_width)
    name = f"magic_hist_{tag}.csv"
    _write_csv(out / name, ["m2_bin", "density"], zip(edges.tolist(), density.tolist()))
    files.append(name)
    return files


def _run_magic(config: RunConfig, out: Path) -> list[str]:
    files = []
    summary = []
    depth = config.resolved_depth()
    for nt in config.t_gates:
        tasks = [
            (config.n_qubits, depth, nt, config.seed + nt, s, e)
            for s, e in _chunk_ranges(config.n_samples, config.workers)
        ]
        values = np.concatenate(_fan_out(_magic_chunk, tasks, config.workers))
        dist = magic.MagicDistribution(config.n_qubits, values)
        files.extend(_magic_outputs(config, out, dist, f"nt{nt}"))
        summary.append(
            [config.n_qubits, depth, nt, dist.mean_M2, dist.stderr_M2, dist.n_samples]
        )
    _write_csv(
        out / "magic_summary.csv",
        ["n_qubits", "depth", "n_t", "mean_M2", "stderr", "n_samples"],
        summary,
    )
    files.append("magic_summary.csv")
    return files


def _run_haar_baseline(config: RunConfig, out: Path) -> list[str]:
    tasks = [
        (config.n_qubits, config.seed, s, e)
        for s, e in _chunk_ranges(config.n_samples, config.workers)
    ]
    values = np.concatenate(_fan_out(_haar_magic_chunk, tasks, config.workers))
    dist = magic.MagicDistribution(config.n_qubits, values)
    files = _magic_outputs(config, out, dist, "haar")
    _write_csv(
        out / "haar_summary.csv",
        ["n_qubits", "mean_M2", "stderr", "n_samples", "mean_lower_bound"],
        [[config.n_qubits, dist.mean_M2, dist.stderr_M2, dist.n_samples,
          magic.haar_mean_lower_bound(config.n_qubits)]],
    )
    files.append("haar_summary.csv")
    return files


def _run_bloch_map(config: RunConfig, out: Path) -> list[str]:
    theta, phi, m2 = magic.bloch_magic_map(config.resolution)
    rows = []
    for i, t in enumerate(theta):
        for j, p in enumerate(phi):
            rows.append([float(t), float(p), float(m2[i, j])])
    _write_csv(out / "bloch_map.csv", ["theta", "phi", "M2"], rows)
    return ["bloch_map.csv"]


def _run_max_magic(config: RunConfig, out: Path) -> list[str]:
    report = magic.max_magic_search(config.seed)
    doc = dataclasses.asdict(report)
    doc["n1_saturates"] = report.n1_saturates
    doc["n2_margin"] = report.n2_margin
    (out / "max_magic_report.json").write_text(json.dumps(doc, indent=2) + "\n")
    return ["max_magic_report.json"]


_RUNNERS = {
    "orbits": _run_orbits,
    "spectrum": _run_spectrum,
    "spacing": _run_spacing,
    "magic": _run_magic,
    "haar-baseline": _run_haar_baseline,
    "bloch-map": _run_bloch_map,
    "appendix-a": _run_max_magic,
}


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run(config: RunConfig, out_dir: str | Path | None = None) -> RunManifest:
    """Execute one experiment, writing CSV outputs and a manifest."""
    diagnostics = validate(config)
    if diagnostics:
        resource = [d for d in diagnostics if d.startswith("resource:")]
        if resource:
            raise ResourceCapError("; ".join(resource))
        raise ConfigError("; ".join(diagnostics))
    out = Path(out_dir if out_dir is not None else config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.monotonic()
    files = _RUNNERS[config.kind](config, out)
    wall = time.monotonic() - t0
    outputs = [
        {"path": name, "sha256": _sha256(out / name), "bytes": (out / name).stat().st_size}
        for name in files
    ]
    manifest = RunManifest(config=config.resolved(), outputs=outputs, wall_clock_s=wall)
    (out / "manifest.json").write_text(manifest.to_json() + "\n")
    return manifest


def verify_manifest(path: str | Path) -> list[str]:
    """Check a manifest's outputs on disk, then re-run its config and compare.

    Catches both tampered/corrupted output files and non-reproducible runs.
    """
    path = Path(path)
    manifest = RunManifest.from_file(path)
    cfg = RunConfig.from_dict(manifest.config)
    recorded = {o["path"]: o["sha256"] for o in manifest.outputs}
    mismatches = []
    for name, digest in recorded.items():
        on_disk = path.parent / name
        if not on_disk.exists():
            mismatches.append(f"{name}: listed in manifest but missing on disk")
        elif _sha256(on_disk) != digest:
            mismatches.append(f"{name}: on-disk file differs from recorded checksum")
    with tempfile.TemporaryDirectory(prefix="cliffordlab-verify-") as tmp:
        fresh = run(cfg, tmp)
        recomputed = {o["path"]: o["sha256"] for o in fresh.outputs}
        for name in sorted(set(recorded) | set(recomputed)):
            if recorded.get(name) != recomputed.get(name):
                mismatches.append(
                    f"{name}: recorded {recorded.get(name, '<missing>')[:12]} "
                    f"recomputed {recomputed.get(name, '<missing>')[:12]}"
                )
    return mismatches


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliffordlab",
        description="Ensemble experiments on T-doped random brick-wall Clifford circuits",
    )
    parser.add_argument(
        "--verify-manifest",
        metavar="PATH",
        help="re-run the manifest's config and compare output checksums",
    )
    sub = parser.add_subparsers(dest="kind")
    for kind in EXPERIMENT_KINDS:
        p = sub.add_parser(kind, help=f"run the {kind} experiment")
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int, dest="n_samples")
        p.add_argument("--qubits", type=int, dest="n_qubits")
        p.add_argument("--depth", type=int)
        p.add_argument("--t-gates", dest="t_gates", help="comma-separated sweep, e.g. 0,1,2,4")
        p.add_argument("--out", dest="out_dir")
        p.add_argument("--workers", type=int)
        p.add_argument("--bin-width", type=float, dest="bin_width")
        p.add_argument("--m2-bin-width", type=float, dest="m2_bin_width")
        p.add_argument("--resolution", type=int)
        p.add_argument("--boundary", choices=["open", "periodic"])
        p.add_argument("--allow-large", action="store_true", default=None)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    doc: dict = {"kind": args.kind}
    if args.config:
        doc.update(json.loads(Path(args.config).read_text()))
        doc["kind"] = args.kind
    overrides = (
        "seed",
        "n_samples",
        "n_qubits",
        "depth",
        "out_dir",
        "workers",
        "bin_width",
        "m2_bin_width",
        "resolution",
        "boundary",
        "allow_large",
    )
    for name in overrides:
        value = getattr(args, name, None)
        if value is not None:
            doc[name] = value
    if getattr(args, "t_gates", None) is not None:
        doc["t_gates"] = [int(x) for x in str(args.t_gates).split(",") if x != ""]
    return RunConfig.from_dict(doc)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.verify_manifest:
            mismatches = verify_manifest(args.verify_manifest)
            if mismatches:
                for line in mismatches:
                    print(f"mismatch: {line}", file=sys.stderr)
                return 1
            print("manifest verified: outputs reproduce bit for bit")
            return 0
        if not args.kind:
            parser.print_usage(sys.stderr)
            print("error: an experiment kind or --verify-manifest is required", file=sys.stderr)
            return 2
        config = _config_from_args(args)
        manifest = run(config)
        print(f"wrote {len(manifest.outputs)} files to {config.out_dir}")
        return 0
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except CliffordLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
