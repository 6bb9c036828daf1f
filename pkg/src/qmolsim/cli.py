"""Batch command-line front end.

One subcommand per algorithm plus ``report`` (figures + CSV from result
files) and ``api`` (JSON wire used by external bindings). Results are
written as versioned JSON; reruns with the same configuration and seed are
byte-identical.

Exit codes: 0 success, 2 usage error, 3 unreadable input file,
4 invalid parameter value, 5 solver/algorithm failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_IO = 3
EXIT_PARAMS = 4
EXIT_SOLVER = 5

ALGORITHMS = (
    "vqe", "adapt-vqe", "pqe", "spqe", "qite", "qlanczos", "qk", "mrsqk", "qpe",
)


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _add_shared_flags(p: argparse.ArgumentParser, name: str) -> None:
    # SPQE's residual-state time step is tiny by default (exact-amplitude
    # mode); QPE's --dt is the base evolution time.
    dt_default = {"spqe": 0.001, "qpe": 1.0}.get(name, 0.5)
    p.add_argument("--fcidump", help="FCIDUMP file defining the molecular system")
    p.add_argument("--hamiltonian-json", help="JSON qubit-Hamiltonian file")
    p.add_argument("--reference", type=int, default=None,
                   help="reference determinant address (JSON-Hamiltonian runs)")
    p.add_argument("--pool", default="SD",
                   help="operator pool: SD, SDT, SDTQ, ..., GSD, pairedD")
    p.add_argument("--tol", type=float, default=1e-6, help="convergence tolerance")
    p.add_argument("--shots", type=int, default=None, help="measurement shots (exact if absent)")
    p.add_argument("--seed", type=int, default=13, help="PRNG seed for sampled paths")
    p.add_argument("--dt", type=float, default=dt_default, help="time step (a.u.)")
    p.add_argument("--s", type=int, default=3, help="number of time-evolved basis states")
    p.add_argument("--trotter-r", type=int, default=1, help="Trotter steps")
    p.add_argument("--dbeta", type=float, default=0.1, help="imaginary time step")
    p.add_argument("--beta-max", type=float, default=10.0, help="total imaginary time")
    p.add_argument("--omega", type=float, default=1e-2, help="SPQE cumulative threshold")
    p.add_argument("--d-refs", type=int, default=2, help="MRSQK reference count")
    p.add_argument("--n-ancilla", type=int, default=8, help="QPE ancilla count")
    p.add_argument("--method", default="direct", choices=("direct", "hadamard-test"),
                   help="matrix-element evaluation method (QK/MRSQK)")
    p.add_argument("--trim-threshold", type=float, default=1e-9,
                   help="canonical-orthogonalization trim threshold")
    p.add_argument("--out", help="write the JSON result here (stdout otherwise)")
    p.add_argument("--scan", help="manifest file: one FCIDUMP path (+ optional "
                                  "reference energy) per line")
    p.add_argument("--workers", type=int, default=1, help="parallel scan workers")
    p.add_argument("--config", help="key = value config file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmolsim",
        description="Quantum algorithms for molecular electronic structure "
                    "on a state-vector simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ALGORITHMS:
        p = sub.add_parser(name, help=f"run {name} on a molecular system")
        _add_shared_flags(p, name)

    rep = sub.add_parser("report", help="render figures and CSV from result JSON")
    rep.add_argument("--results", required=True, help="result JSON from a run")
    rep.add_argument("--outdir", default=".", help="directory for figures and CSV")

    api = sub.add_parser("api", help="serve one JSON request from stdin (bindings wire)")
    api.add_argument("--request", help="read the JSON request from a file instead")
    return parser


def _apply_config_file(
    args: argparse.Namespace, parser_defaults: dict, explicit: set[str]
) -> None:
    """Fill values from 'key = value' lines; explicitly given flags win."""
    if not args.config:
        return
    path = Path(args.config)
    if not path.exists():
        raise CliError(f"config file not found: {path}", EXIT_IO)
    for ln, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{ln}: expected 'key = value'", EXIT_PARAMS)
        key, value = (part.strip() for part in line.split("=", 1))
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise CliError(f"{path}:{ln}: unknown option '{key}'", EXIT_PARAMS)
        if attr in explicit:
            continue  # explicit flag wins
        current = parser_defaults.get(attr)
        if isinstance(current, bool):
            parsed = value.lower() in ("1", "true", "yes")
        elif isinstance(current, int):
            parsed = int(value)
        elif isinstance(current, float):
            parsed = float(value)
        else:
            parsed = value
        setattr(args, attr, parsed)


def _load_system(args):
    from .system import load_fcidump

    if args.fcidump:
        path = Path(args.fcidump)
        if not path.exists():
            raise CliError(f"FCIDUMP not found: {path}", EXIT_IO)
        try:
            return load_fcidump(path)
        except Exception as exc:
            raise CliError(f"failed to parse {path}: {exc}", EXIT_PARAMS) from exc
    raise CliError("this algorithm needs --fcidump (or --scan)", EXIT_PARAMS)


def _run_single(algorithm: str, args, system=None) -> dict:
    from . import algorithms as alg
    from .algorithms.common import AlgorithmError
    from .solvers import SolverError

    result: dict = {
        "schema_version": SCHEMA_VERSION,
        "algorithm": algorithm,
        "seed": args.seed,
    }
    try:
        if algorithm == "qpe" and args.hamiltonian_json:
            from .circuits import Circuit
            from .gates import make_gate
            from .system import load_hamiltonian_json

            ham, n_qubits = load_hamiltonian_json(args.hamiltonian_json)
            ref = Circuit()
            if args.reference:
                for q in range(n_qubits):
                    if (args.reference >> q) & 1:
                        ref.add(make_gate("X", q))
            out = alg.run_qpe(
                ham, n_qubits, ref, n_ancilla=args.n_ancilla, t=args.dt,
                trotter_steps=args.trotter_r, shots=args.shots or 1000,
                seed=args.seed,
            )
            result["system"] = args.hamiltonian_json
            result["energy"] = out.energy
            result["counts"] = {str(k): v for k, v in sorted(out.counts.items())}
            result["resources"] = out.report.as_dict()
            return result

        if system is None:
            system = _load_system(args)
        result["system"] = system.source

        if algorithm == "vqe":
            out = alg.run_vqe(system, args.pool, tol=args.tol)
            result["energy"] = out.energy
            result["resources"] = out.report.as_dict()
            result["amplitudes"] = [float(t) for t in out.ansatz.amplitudes]
        elif algorithm == "adapt-vqe":
            out = alg.run_adapt_vqe(system, args.pool, grad_norm_threshold=args.tol)
            result["energy"] = out.energy
            result["resources"] = out.report.as_dict()
            result["operators"] = [out.ansatz.pool[i].label for i in out.ansatz.pool_indices]
        elif algorithm == "pqe":
            out = alg.run_pqe(system, args.pool, residual_tol=args.tol)
            result["energy"] = out.energy
            result["resources"] = out.report.as_dict()
            result["residual_norm"] = out.residual_norm
        elif algorithm == "spqe":
            out = alg.run_spqe(
                system, omega=args.omega, dt=args.dt,
                shots=args.shots, seed=args.seed, residual_tol=args.tol,
            )
            result["energy"] = out.energy
            result["resources"] = out.report.as_dict()
            result["operators"] = [out.ansatz.pool[i].label for i in out.ansatz.pool_indices]
        elif algorithm == "qite":
            out = alg.run_qite(system, dbeta=args.dbeta, beta_max=args.beta_max,
                               pool_kind=args.pool)
            result["energy"] = out.final_energy
            result["trajectory"] = [float(e) for e in out.energies]
            result["dbeta"] = out.dbeta
            result["resources"] = out.report.as_dict()
        elif algorithm == "qlanczos":
            qite_out = alg.run_qite(system, dbeta=args.dbeta, beta_max=args.beta_max,
                                    pool_kind=args.pool)
            out = alg.run_qlanczos(qite_out, trim_threshold=args.trim_threshold)
            result["energy"] = out.ground_energy
            result["trajectory"] = [float(e) for e in qite_out.energies]
            result["retained_dim"] = out.retained_dim
            result["resources"] = out.report.as_dict()
        elif algorithm == "qk":
            out = alg.run_qk(system, s=args.s, dt=args.dt,
                             trotter_steps=args.trotter_r, method=args.method,
                             trim_threshold=args.trim_threshold)
            result["energy"] = out.ground_energy
            result["retained_dim"] = out.retained_dim
            result["resources"] = out.report.as_dict()
        elif algorithm == "mrsqk":
            out = alg.run_mrsqk(system, d=args.d_refs, s=args.s, dt=args.dt,
                                trotter_steps=args.trotter_r, shots=args.shots,
                                seed=args.seed, method=args.method,
                                trim_threshold=args.trim_threshold)
            result["energy"] = out.ground_energy
            result["retained_dim"] = out.retained_dim
            result["resources"] = out.report.as_dict()
        elif algorithm == "qpe":
            out = alg.run_qpe_system(
                system, n_ancilla=args.n_ancilla, t=args.dt,
                trotter_steps=args.trotter_r, shots=args.shots or 1000,
                seed=args.seed,
            )
            result["energy"] = out.energy
            result["counts"] = {str(k): v for k, v in sorted(out.counts.items())}
            result["resources"] = out.report.as_dict()
        else:
            raise CliError(f"unknown algorithm '{algorithm}'", EXIT_PARAMS)
    except (AlgorithmError, SolverError) as exc:
        raise CliError(f"{algorithm} failed: {exc}", EXIT_SOLVER) from exc
    except (ValueError, IndexError) as exc:
        raise CliError(f"invalid parameters for {algorithm}: {exc}", EXIT_PARAMS) from exc
    return result


def _run_scan(algorithm: str, args) -> dict:
    from .system import load_fcidump

    manifest = Path(args.scan)
    if not manifest.exists():
        raise CliError(f"scan manifest not found: {manifest}", EXIT_IO)
    entries = []
    for ln, line in enumerate(manifest.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        path = Path(tokens[0])
        if not path.is_absolute():
            path = manifest.parent / path
        if not path.exists():
            raise CliError(f"{manifest}:{ln}: fixture not found: {path}", EXIT_IO)
        reference = float(tokens[1]) if len(tokens) > 1 else None
        entries.append((path, reference))
    if not entries:
        raise CliError(f"{manifest}: empty scan manifest", EXIT_PARAMS)

    def run_point(entry):
        path, reference = entry
        system = load_fcidump(path)
        point = _run_single(algorithm, args, system=system)
        point.pop("schema_version", None)
        point.pop("seed", None)
        point["system"] = str(path)
        if reference is not None:
            point["reference_energy"] = reference
            point["error"] = point["energy"] - reference
        return point

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            points = list(pool.map(run_point, entries))
    else:
        points = [run_point(entry) for entry in entries]

    errors = [p["error"] for p in points if "error" in p]
    result = {
        "schema_version": SCHEMA_VERSION,
        "algorithm": algorithm,
        "seed": args.seed,
        "scan": points,
    }
    if errors:
        result["mse_milli_hartree"] = float(np.mean(errors) * 1000.0)
    return result


def _emit(result: dict, args) -> None:
    text = json.dumps(result, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
        summary = {"algorithm": result.get("algorithm")}
        if "energy" in result:
            summary["energy"] = result["energy"]
        if "mse_milli_hartree" in result:
            summary["mse_milli_hartree"] = result["mse_milli_hartree"]
        print(" ".join(f"{k}={v}" for k, v in summary.items()))
    else:
        print(text)


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.command == "report":
            from .report import render_report

            files = render_report(args.results, args.outdir)
            for f in files:
                print(f)
            return EXIT_OK
        if args.command == "api":
            from .api import serve_request

            if args.request:
                request_text = Path(args.request).read_text()
            else:
                request_text = sys.stdin.read()
            print(json.dumps(serve_request(request_text), sort_keys=True))
            return EXIT_OK

        defaults = vars(build_parser().parse_args([args.command]))
        explicit = {
            tok[2:].split("=", 1)[0].replace("-", "_")
            for tok in argv
            if tok.startswith("--")
        }
        _apply_config_file(args, defaults, explicit)
        if args.scan:
            result = _run_scan(args.command, args)
        else:
            result = _run_single(args.command, args)
        _emit(result, args)
        return EXIT_OK
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
