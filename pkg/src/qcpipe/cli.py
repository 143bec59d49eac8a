"""Command-line driver.

Subcommands ``scf``, ``fci``, ``map``, ``vqe``, ``qpe`` and ``scan`` each write a
single self-describing output document (JSON, or CSV for ``scan``). Run
``python -m qcpipe <subcommand> --help`` for the flags of each.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import scipy

from . import __version__
from .basis import BasisError
from .fci import ci_solve, determinant_to_state, enumerate_space
from .molecule import Molecule, MoleculeError, diatomic, parse_molecule, SYMBOL_TO_Z
from .pipeline import build_problem
from .qubit_map import ENCODINGS, EncodingMatrix, hamiltonian_to_qubits
from .scf import ScfOptions
from .simulator import basis_state, spectrum
from .vqe import VqeOptions, hardware_efficient_ansatz, minimize, uccsd_ansatz
from . import qpe as qpe_mod

SCHEMA_VERSION = "1.0"
CSV_HEADER = ["R_bohr", "basis", "method", "energy_hartree", "converged"]

log = logging.getLogger("qcpipe")


class StageError(RuntimeError):
    def __init__(self, stage: str, err: Exception):
        super().__init__(f"stage '{stage}' failed: {err}")
        self.stage = stage


class _Stage:
    def __init__(self, name, timings):
        self.name, self.timings = name, timings

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, kind, err, tb):
        self.timings[self.name] = time.perf_counter() - self.t0
        if err is not None and not isinstance(err, StageError):
            raise StageError(self.name, err) from err


def _versions():
    return {"qcpipe": __version__, "numpy": np.__version__, "scipy": scipy.__version__}


def _read_molecule(path):
    with open(path) as fh:
        return parse_molecule(fh.read(), rhf=True)


def _scf_opts(args):
    return ScfOptions(damping=args.damping, max_iter=args.scf_max_iter)


def _problem(args, timings):
    with _Stage("parse", timings):
        mol = _read_molecule(args.molecule)
    with _Stage("scf", timings):
        return build_problem(mol, args.basis, _scf_opts(args))


def cmd_scf(args, timings):
    pr = _problem(args, timings)
    s = pr.scf
    return {
        "molecule": pr.mol.to_dict(),
        "E_total": s.E_total,
        "E_electronic": s.E_electronic,
        "E_nuclear": s.E_nuclear,
        "orbital_energies": s.eps.tolist(),
        "iterations": s.iterations,
        "converged": s.converged,
    }


def cmd_fci(args, timings):
    pr = _problem(args, timings)
    with _Stage("fci", timings):
        space = enumerate_space(pr.n_modes, pr.n_electrons, args.ci_rank)
        res = ci_solve(pr.hamiltonian, space)
    out = {"molecule": pr.mol.to_dict(), "E_hf": pr.scf.E_total, "E_ci": res.ground_energy}
    out.update(res.to_dict(n_states=1))
    return out


def cmd_map(args, timings):
    pr = _problem(args, timings)
    encodings = list(ENCODINGS) if args.encoding == "all" else [args.encoding]
    out = {"n_qubits": pr.n_modes, "encodings": {}}
    spectra = {}
    with _Stage("map", timings):
        for enc in encodings:
            qh = hamiltonian_to_qubits(pr.hamiltonian, enc, pr.n_modes)
            entry = {"n_terms": qh.n_terms, "max_pauli_weight": qh.max_weight}
            if args.dump_terms:
                entry["terms"] = [[ps.label, c.real] for ps, c in qh.operator.sorted_terms()]
            out["encodings"][enc] = entry
            if pr.n_modes <= 12:
                spectra[enc] = spectrum(qh.operator)
    if len(spectra) > 1:
        ref = spectra[encodings[0]]
        out["spectral_equivalence"] = bool(all(np.allclose(ref, w, atol=1e-10, rtol=0) for w in spectra.values()))
    return out


def cmd_vqe(args, timings):
    pr = _problem(args, timings)
    with _Stage("map", timings):
        H = pr.qubit_hamiltonian(args.encoding)
    with _Stage("vqe", timings):
        if args.ansatz == "uccsd":
            ans = uccsd_ansatz(pr.n_modes, pr.n_electrons, args.encoding)
        else:
            ans = hardware_efficient_ansatz(pr.n_modes, pr.n_electrons, args.layers, args.encoding)
        opts = VqeOptions(optimizer=args.optimizer, max_iter=args.max_iter, seed=args.seed, shots=args.shots)
        res = minimize(ans, H, opts)
    out = {"E_hf": pr.scf.E_total, "ansatz": args.ansatz, "n_params": ans.n_params}
    out.update(res.to_dict())
    return out


def cmd_qpe(args, timings):
    pr = _problem(args, timings)
    with _Stage("map", timings):
        H = pr.qubit_hamiltonian(args.encoding)
    with _Stage("qpe", timings):
        method = "exact" if args.trotter is None else ("trotter", args.trotter)
        if args.window is None:
            cfg = qpe_mod.default_config(H, args.ancillas, n_samples=args.samples, method=method)
        else:
            cfg = qpe_mod.QpeConfig(args.ancillas, args.window[0], args.window[1], args.samples, method)
        enc = EncodingMatrix.named(args.encoding, pr.n_modes)
        init = basis_state(pr.n_modes, enc.encode_int((1 << pr.n_electrons) - 1))
        res = qpe_mod.run_qpe(H, init, cfg, seed=args.seed)
    return {"E_hf": pr.scf.E_total, **res.to_dict()}


def _scan_point(task):
    r, basis, methods, z, charge, scf_opts = task
    rows = []
    try:
        mol = diatomic(z[0], z[1], r, charge)
        pr = build_problem(mol, basis, scf_opts)
        for m in methods:
            if m == "rhf":
                rows.append((r, basis, m, pr.scf.E_total, pr.scf.converged, None))
            elif m == "fci":
                res = ci_solve(pr.hamiltonian, enumerate_space(pr.n_modes, pr.n_electrons))
                rows.append((r, basis, m, res.ground_energy, pr.scf.converged, None))
    except Exception as err:  # recorded in-row, scan continues
        done = {row[2] for row in rows}
        rows += [(r, basis, m, float("nan"), False, str(err)) for m in methods if m not in done]
    return rows


def scan(grid, methods, bases, atoms=("H", "H"), charge=0, scf_options=None, jobs=1):
    """Bond-length scan of a diatomic; rows sorted by (basis, method, R)."""
    grid = [float(r) for r in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("scan grid must be strictly increasing")
    z = tuple(SYMBOL_TO_Z[a.capitalize()] for a in atoms)
    scf_options = scf_options or ScfOptions(damping=0.3)
    tasks = [(r, b, tuple(methods), z, charge, scf_options) for b in bases for r in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_scan_point, tasks))
    else:
        chunks = [_scan_point(t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda row: (row[1].lower(), row[2], row[0]))
    return rows


def scan_summary(rows):
    fci = {}
    for r, basis, m, e, _, _ in rows:
        if m == "fci":
            fci.setdefault(basis.lower(), {})[r] = e
    summary = {"errors": [{"R_bohr": r, "basis": b, "method": m, "error": err}
                          for r, b, m, _, _, err in rows if err]}
    if "sto-3g" in fci and "6-31g" in fci:
        common = sorted(set(fci["sto-3g"]) & set(fci["6-31g"]))
        summary["fci_basis_gap"] = [
            {"R_bohr": r, "sto-3g": fci["sto-3g"][r], "6-31g": fci["6-31g"][r],
             "gap": fci["sto-3g"][r] - fci["6-31g"][r]}
            for r in common
        ]
    return summary


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r, basis, m, e, conv, _ in rows:
        w.writerow([repr(r), basis, m, repr(float(e)), str(bool(conv)).lower()])
    return buf.getvalue()


def cmd_scan(args, timings):
    grid = np.linspace(args.r_min, args.r_max, args.points)
    with _Stage("scan", timings):
        rows = scan(grid, args.methods, args.bases, tuple(args.atoms), args.charge,
                    ScfOptions(damping=args.damping, max_iter=args.scf_max_iter), args.jobs)
    return {
        "rows": [dict(zip(CSV_HEADER, [r, b, m, (None if np.isnan(e) else e), c])) for r, b, m, e, c, _ in rows],
        "summary": scan_summary(rows),
        "_rows": rows,
    }


COMMANDS = {"scf": cmd_scf, "fci": cmd_fci, "map": cmd_map, "vqe": cmd_vqe, "qpe": cmd_qpe, "scan": cmd_scan}


def _csv_list(s):
    return [t.strip().lower() for t in s.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcpipe", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, molecule=True):
        if molecule:
            sp.add_argument("molecule", help="molecule file (see README for the format)")
            sp.add_argument("--basis", default="sto-3g", help="built-in name (sto-3g, 6-31g) or basis file path")
        sp.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--damping", type=float, default=0.0, help="SCF linear density damping")
        sp.add_argument("--scf-max-iter", type=int, default=200)
        sp.add_argument("--timings", action="store_true", help="include wall-clock stage timings")
        sp.add_argument("-v", "--verbose", action="store_true")

    common(sub.add_parser("scf", help="restricted Hartree-Fock"))
    sp = sub.add_parser("fci", help="determinant CI (full by default)")
    common(sp)
    sp.add_argument("--ci-rank", type=int, default=None, help="maximum excitation rank (default: full CI)")
    sp = sub.add_parser("map", help="fermion-to-qubit mapping statistics")
    common(sp)
    sp.add_argument("--encoding", choices=list(ENCODINGS) + ["all"], default="all")
    sp.add_argument("--dump-terms", action="store_true")
    sp = sub.add_parser("vqe", help="variational quantum eigensolver")
    common(sp)
    sp.add_argument("--encoding", choices=ENCODINGS, default="jw")
    sp.add_argument("--ansatz", choices=["uccsd", "hardware-efficient"], default="uccsd")
    sp.add_argument("--layers", type=int, default=2)
    sp.add_argument("--optimizer", choices=["nelder-mead", "gradient", "spsa"], default="nelder-mead")
    sp.add_argument("--max-iter", type=int, default=5000)
    sp.add_argument("--shots", type=int, default=None)
    sp = sub.add_parser("qpe", help="quantum phase estimation")
    common(sp)
    sp.add_argument("--encoding", choices=ENCODINGS, default="jw")
    sp.add_argument("--ancillas", type=int, default=8)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--trotter", type=int, default=None, help="Trotter steps (default: exact evolution)")
    sp.add_argument("--window", type=float, nargs=2, metavar=("E_MIN", "E_MAX"), default=None)
    sp = sub.add_parser("scan", help="diatomic bond-length scan")
    common(sp, molecule=False)
    sp.add_argument("--atoms", nargs=2, default=["H", "H"])
    sp.add_argument("--charge", type=int, default=0)
    sp.add_argument("--r-min", type=float, default=0.5)
    sp.add_argument("--r-max", type=float, default=4.0)
    sp.add_argument("--points", type=int, default=36)
    sp.add_argument("--methods", type=_csv_list, default=["rhf", "fci"])
    sp.add_argument("--bases", type=_csv_list, default=["sto-3g", "6-31g"])
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    return p


def validate(args) -> list[str]:
    """Problems with the option combination, checked before any computation."""
    bad = []
    if not 0.0 <= args.damping < 1.0:
        bad.append("--damping must lie in [0, 1)")
    if args.scf_max_iter < 1:
        bad.append("--scf-max-iter must be positive")
    cmd = args.command
    if cmd == "fci" and args.ci_rank is not None and args.ci_rank < 1:
        bad.append("--ci-rank must be at least 1")
    if cmd == "vqe":
        if args.layers < 1:
            bad.append("--layers must be positive")
        if args.max_iter < 1:
            bad.append("--max-iter must be positive")
        if args.shots is not None and args.shots < 1:
            bad.append("--shots must be positive")
    if cmd == "qpe":
        if args.ancillas < 1:
            bad.append("--ancillas must be positive")
        if args.samples < 1:
            bad.append("--samples must be positive")
        if args.trotter is not None and args.trotter < 1:
            bad.append("--trotter must be positive")
        if args.window is not None and not args.window[1] > args.window[0]:
            bad.append("--window needs E_MAX > E_MIN")
    if cmd == "scan":
        if args.points < 1:
            bad.append("--points must be positive")
        if args.points > 1 and not args.r_max > args.r_min:
            bad.append("--r-max must exceed --r-min")
        if args.jobs < 1:
            bad.append("--jobs must be positive")
        unknown = set(args.methods) - {"rhf", "fci"}
        if unknown or not args.methods:
            bad.append(f"--methods takes a comma list from rhf,fci (got {','.join(args.methods)})")
        if not args.bases:
            bad.append("--bases is empty")
        for a in args.atoms:
            if a.capitalize() not in SYMBOL_TO_Z:
                bad.append(f"unknown element {a!r} in --atoms")
    elif cmd != "scan" and getattr(args, "format", "json") != "json":
        bad.append("--format csv is only available for scan")
    return bad


def _inputs_echo(args) -> dict:
    skip = {"output", "verbose", "timings"}
    d = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    if getattr(args, "molecule", None):
        with open(args.molecule) as fh:
            d["molecule_text"] = fh.read()
    return d


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    problems = validate(args)
    if problems:
        parser.error("; ".join(problems))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    timings: dict = {}
    try:
        results = COMMANDS[args.command](args, timings)
    except StageError as err:
        print(f"qcpipe: {err}", file=sys.stderr)
        return 1
    except (OSError, MoleculeError, BasisError) as err:
        print(f"qcpipe: stage 'parse' failed: {err}", file=sys.stderr)
        return 1
    rows = results.pop("_rows", None)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "inputs": _inputs_echo(args),
        "versions": _versions(),
        "seed": args.seed,
        "results": results,
    }
    if args.timings:
        doc["timings"] = timings
    if args.command == "scan" and args.format == "csv":
        _write(args.output, rows_to_csv(rows))
        side = json.dumps({k: v for k, v in doc.items() if k != "results"} | {"results": {"summary": results["summary"]}},
                          indent=2, sort_keys=True) + "\n"
        if args.output == "-":
            sys.stderr.write(side)
        else:
            _write(args.output + ".summary.json", side)
    else:
        _write(args.output, json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n")
    return 0


def main():
    sys.exit(run())
