"""Command-line driver: per-geometry, per-sector runs with FCI comparison.

Subcommands:
  scan    --config <file> [--force] [--jobs N]   scan geometries x sectors
  solve   --system <dump> --sigma <label> --spin <0|1> [--reps N] ...
  oracle  --system <dump>

Exit codes: 0 ok, 1 at least one run errored, 2 configuration errors.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import sys as _sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fci
from .fermion import build_dipole_z
from .jw import jordan_wigner
from .statevector import CompiledPauliSum
from .symmetry import StateSpec, build_reference
from .system import MolecularSystem, parse_system
from .vqe import VqeResult, minimize, trace_csv

__all__ = ["main", "run_scan", "overlap_trace", "ScanConfig"]

FMT = "{:.12g}"


class ConfigError(ValueError):
    pass


@dataclass
class ScanConfig:
    systems: list[tuple[str, Path]]          # (geometry tag, dump path), ordered
    sectors: list[tuple[str, int]]           # (irrep name, spin)
    output_dir: Path
    reps: int = 2
    tol_e: float = 1e-9
    tol_g: float = 1e-7
    max_iters: int = 2000

    @classmethod
    def load(cls, path: str | Path) -> ScanConfig:
        systems: list[tuple[str, Path]] = []
        sectors: list[tuple[str, int]] = []
        values: dict[str, str] = {}
        base = Path(path).parent
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key == "system":
                parts = value.split(None, 1)
                if len(parts) != 2:
                    raise ConfigError(f"{path}:{lineno}: system needs '<tag> <path>'")
                systems.append((parts[0], base / parts[1]))
            elif key == "sectors":
                for item in value.split(","):
                    item = item.strip()
                    if not item:
                        continue
                    sig, _, spin = item.partition(":")
                    if spin not in ("0", "1"):
                        raise ConfigError(
                            f"{path}:{lineno}: sector {item!r} must be <irrep>:<0|1>"
                        )
                    sectors.append((sig.strip(), int(spin)))
            else:
                values[key] = value
        if not systems:
            raise ConfigError(f"{path}: no system lines")
        if not sectors:
            raise ConfigError(f"{path}: empty sector list")
        try:
            cfg = cls(
                systems=systems,
                sectors=sectors,
                output_dir=base / values.get("output_dir", "scan_out"),
                reps=int(values.get("reps", 2)),
                tol_e=float(values.get("tol_e", 1e-9)),
                tol_g=float(values.get("tol_g", 1e-7)),
                max_iters=int(values.get("max_iters", 2000)),
            )
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        for tag, p in cfg.systems:
            if not p.is_file():
                raise ConfigError(f"{path}: system {tag}: no such file {p}")
        return cfg


def _build_spec(system: MolecularSystem, sigma_name: str, spin: int,
                hf_reference: bool = False,
                pair: tuple[int, int] | None = None) -> StateSpec:
    sigma = system.irrep(sigma_name)
    return build_reference(
        sigma, spin, system, pair=pair,
        allow_single_determinant=hf_reference,
    )


@dataclass
class RunRow:
    geometry: str
    e_vqe: float
    e_fci: float
    mu_vqe: float | None
    mu_fci: float | None
    overlap2: float
    converged: bool

    def format(self) -> str:
        mu_v = FMT.format(self.mu_vqe) if self.mu_vqe is not None else ""
        mu_f = FMT.format(self.mu_fci) if self.mu_fci is not None else ""
        return ",".join(
            [
                self.geometry,
                FMT.format(self.e_vqe),
                FMT.format(self.e_fci),
                FMT.format(self.e_vqe - self.e_fci),
                mu_v,
                mu_f,
                FMT.format(self.overlap2),
                "1" if self.converged else "0",
            ]
        )


ROW_HEADER = "geometry,e_vqe,e_fci,delta_e,mu_vqe,mu_fci,overlap2,converged"


def run_sector(system: MolecularSystem, sigma_name: str, spin: int, *,
               reps: int = 2, tol_e: float = 1e-9, tol_g: float = 1e-7,
               max_iters: int = 2000,
               roots: list[fci.FciRoot] | None = None,
               hf_reference: bool = False,
               pair: tuple[int, int] | None = None,
               ) -> tuple[VqeResult, fci.FciRoot, RunRow]:
    """One ss-VQE run against the oracle; returns result, target root, CSV row."""
    spec = _build_spec(system, sigma_name, spin, hf_reference, pair)
    if roots is None:
        roots = fci.solve(system)
    target = fci.sector_minimum(roots, spec.sigma, spin)
    dets = fci.determinant_basis(system)
    oracle_amps = fci.embed_vector(target.vector, dets, system.n_qubits)
    result = minimize(
        spec, system, reps=reps, tol_e=tol_e, tol_g=tol_g,
        max_iters=max_iters, oracle_amplitudes=oracle_amps,
    )
    overlap2 = float(abs(np.vdot(oracle_amps, result.final_state.amps)) ** 2)
    mu_vqe = mu_fci = None
    if system.dipole_z is not None:
        dip = CompiledPauliSum(
            jordan_wigner(build_dipole_z(system), system.n_qubits)
        )
        mu_vqe = float(dip.expectation(result.final_state.amps).real
                       + system.nuclear_dipole_z)
        mu_fci = target.dipole_z + system.nuclear_dipole_z
    row = RunRow("", result.energy, target.energy, mu_vqe, mu_fci,
                 overlap2, result.converged)
    return result, target, row


def _scan_job(args: tuple) -> tuple[str, str, int, RunRow | None, str]:
    tag, path, sigma_name, spin, cfg_kwargs = args
    try:
        system = parse_system(path)
        _, _, row = run_sector(system, sigma_name, spin, **cfg_kwargs)
        row.geometry = tag
        return tag, sigma_name, spin, row, ""
    except Exception as exc:  # report, don't kill the scan
        return tag, sigma_name, spin, None, f"{type(exc).__name__}: {exc}"


def _sector_csv_path(cfg: ScanConfig, sigma_name: str, spin: int) -> Path:
    return cfg.output_dir / f"{sigma_name}_S{spin}.csv"


def _existing_rows(path: Path) -> dict[str, str]:
    if not path.is_file():
        return {}
    rows = {}
    for line in path.read_text().splitlines()[1:]:
        if line.strip():
            rows[line.split(",", 1)[0]] = line
    return rows


def run_scan(cfg: ScanConfig, force: bool = False, jobs: int = 1) -> int:
    """Execute the geometry x sector grid; returns the number of failed runs."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    existing = {
        (name, spin): ({} if force else _existing_rows(_sector_csv_path(cfg, name, spin)))
        for name, spin in cfg.sectors
    }
    kwargs = dict(reps=cfg.reps, tol_e=cfg.tol_e, tol_g=cfg.tol_g,
                  max_iters=cfg.max_iters)
    pending = [
        (tag, str(path), name, spin, kwargs)
        for name, spin in cfg.sectors
        for tag, path in cfg.systems
        if tag not in existing[(name, spin)]
    ]

    failures: list[str] = []
    results: dict[tuple[str, int], dict[str, str]] = {
        key: dict(rows) for key, rows in existing.items()
    }
    if jobs > 1 and len(pending) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_scan_job, pending))
    else:
        outcomes = [_scan_job(job) for job in pending]
    for tag, name, spin, row, error in outcomes:
        if row is None:
            failures.append(f"{tag} {name}:S{spin}: {error}")
            continue
        results[(name, spin)][tag] = row.format()

    tag_order = {tag: k for k, (tag, _) in enumerate(cfg.systems)}
    for (name, spin), rows in results.items():
        body = [ROW_HEADER]
        body.extend(
            rows[tag] for tag in sorted(rows, key=lambda t: tag_order.get(t, 1 << 30))
        )
        _sector_csv_path(cfg, name, spin).write_text("\n".join(body) + "\n")

    for failure in failures:
        print(f"FAILED {failure}", file=_sys.stderr)
    return len(failures)


def overlap_trace(result: VqeResult) -> str:
    """Per-iteration overlap deficit 1 - |<psi_iter|psi_FCI>|^2 as CSV."""
    lines = ["iter,overlap_deficit"]
    for t in result.trace:
        if t.overlap2 is None:
            raise ValueError("run was made without an oracle state")
        lines.append(f"{t.iteration},{FMT.format(1.0 - t.overlap2)}")
    return "\n".join(lines) + "\n"


def _cmd_scan(args: argparse.Namespace) -> int:
    try:
        cfg = ScanConfig.load(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return 2
    failures = run_scan(cfg, force=args.force, jobs=args.jobs)
    return 1 if failures else 0


def _cmd_solve(args: argparse.Namespace) -> int:
    try:
        system = parse_system(args.system)
    except Exception as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return 2
    pair = None
    if args.pair:
        m, _, e = args.pair.partition(",")
        pair = (int(m), int(e))
    try:
        result, target, row = run_sector(
            system, args.sigma, args.spin, reps=args.reps,
            hf_reference=args.hf_reference, pair=pair,
        )
    except Exception as exc:
        print(f"run failed: {type(exc).__name__}: {exc}", file=_sys.stderr)
        return 1
    row.geometry = Path(args.system).stem
    print(ROW_HEADER)
    print(row.format())
    if args.trace_out:
        Path(args.trace_out).write_text(trace_csv(result))
    if args.overlap_trace:
        Path(args.overlap_trace).write_text(overlap_trace(result))
    if args.dump_ansatz:
        Path(args.dump_ansatz).write_text(result.ansatz.dump() + "\n")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    try:
        system = parse_system(args.system)
    except Exception as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return 2
    try:
        roots = fci.solve(system)
    except Exception as exc:
        print(f"run failed: {type(exc).__name__}: {exc}", file=_sys.stderr)
        return 1
    report = fci.report_csv(roots)
    if args.out:
        Path(args.out).write_text(report)
    else:
        print(report, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sectorvqe",
        description="State-specific VQE scans with an embedded FCI oracle",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="run a geometry x sector scan")
    p_scan.add_argument("--config", required=True)
    p_scan.add_argument("--force", action="store_true",
                        help="recompute rows that already exist")
    p_scan.add_argument("--jobs", type=int, default=1)
    p_scan.set_defaults(func=_cmd_scan)

    p_solve = sub.add_parser("solve", help="solve one sector of one system")
    p_solve.add_argument("--system", required=True)
    p_solve.add_argument("--sigma", required=True, help="target irrep label")
    p_solve.add_argument("--spin", type=int, choices=(0, 1), required=True)
    p_solve.add_argument("--reps", type=int, default=2)
    p_solve.add_argument("--hf-reference", action="store_true",
                         help="single-determinant mode (totally symmetric singlet)")
    p_solve.add_argument("--pair", help="override the (m,e) orbital pair, e.g. 3,4")
    p_solve.add_argument("--trace-out", help="write the optimizer trace CSV here")
    p_solve.add_argument("--overlap-trace",
                         help="write the FCI overlap-deficit trace CSV here")
    p_solve.add_argument("--dump-ansatz", help="write the group listing here")
    p_solve.set_defaults(func=_cmd_solve)

    p_oracle = sub.add_parser("oracle", help="report all FCI roots of a system")
    p_oracle.add_argument("--system", required=True)
    p_oracle.add_argument("--out")
    p_oracle.set_defaults(func=_cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
