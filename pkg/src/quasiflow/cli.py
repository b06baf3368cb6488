"""``quasiflow`` command line: frame checks, representations, witness scans and oracle comparisons.

Exit codes: 0 success (Markovian), 1 error, 2 non-Markovianity detected
(``scan``, ``measure`` and ``criteria`` only).
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
import warnings

import numpy as np

from .config import ScanConfig, load_config
from .entropy import h2_monotonicity_scan
from .errors import NonPositiveProbability, ParseError, QuasiflowError, ValidationError
from .frames import FrameKind, build_frame, validate_frame
from .models import DecoherenceFunction, DynamicalModel, RateFunctions, channel_at
from .qpr import rep_channel, rep_state
from .validation import blp_measure, cp_rate_report, nonnegativity_audit
from .witness import THREADS_ENV, markov_criteria, zeta_trajectory

EXIT_OK, EXIT_ERROR, EXIT_NON_MARKOVIAN = 0, 1, 2

PRESETS = {
    "pure-decoherence": lambda d: DynamicalModel.pure_decoherence(DecoherenceFunction.jaynes_cummings(1.0, 5.0)),
    "dissipation": lambda d: DynamicalModel.dissipation(DecoherenceFunction.jaynes_cummings(1.0, 5.0)),
    "random-unitary": lambda d: DynamicalModel.random_unitary(
        RateFunctions.constant(d, [1.0, 1.0, -0.5] if d == 2 else [1.0] * 8)
    ),
}


def fmt(x) -> str:
    return f"{float(x):.16e}"


def _write_csv(path, header, rows):
    out = sys.stdout if path in (None, "-") else open(path, "w", newline="", encoding="utf-8")
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()


def _say(args, *lines):
    if not args.quiet:
        for line in lines:
            print(line)


def parse_state(text: str, d: int) -> np.ndarray:
    """Density matrix from a short description.

    Accepted forms: a basis index (``0``, ``1``, ...), ``mixed``, the qubit
    eigenstates ``+ - +i -i``, ``ket:a,b[,c]`` with complex amplitudes, and
    ``bloch:x,y,z`` for qubits.
    """
    text = text.strip()
    if text == "mixed":
        return np.eye(d, dtype=complex) / d
    if text.isdigit():
        k = int(text)
        if k >= d:
            raise ValueError(f"basis index {k} out of range for d={d}")
        psi = np.zeros(d, dtype=complex)
        psi[k] = 1
    elif text in ("+", "-", "+i", "-i"):
        if d != 2:
            raise ValueError(f"state {text!r} is qubit-only")
        phase = {"+": 1, "-": -1, "+i": 1j, "-i": -1j}[text]
        psi = np.array([1, phase], dtype=complex) / np.sqrt(2)
    elif text.startswith("ket:"):
        psi = np.array([complex(x.replace(" ", "")) for x in text[4:].split(",")])
        if len(psi) != d or np.linalg.norm(psi) == 0:
            raise ValueError(f"ket needs {d} amplitudes, not all zero")
        psi = psi / np.linalg.norm(psi)
    elif text.startswith("bloch:"):
        r = np.array([float(x) for x in text[6:].split(",")])
        if d != 2 or len(r) != 3 or np.linalg.norm(r) > 1 + 1e-12:
            raise ValueError("bloch:x,y,z needs a qubit model and |r| <= 1")
        return 0.5 * np.array([[1 + r[2], r[0] - 1j * r[1]], [r[0] + 1j * r[1], 1 - r[2]]])
    else:
        raise ValueError(f"unrecognised state text {text!r}")
    return np.outer(psi, psi.conj())


def _config(args) -> ScanConfig:
    return load_config(args.config)


def cmd_frame(args) -> int:
    fs = build_frame(args.kind, args.dim)
    report = validate_frame(fs, rng=np.random.default_rng(args.seed))
    print(report.format())
    return EXIT_OK if report.passed else EXIT_ERROR


def cmd_represent(args) -> int:
    if args.model in PRESETS:
        model = PRESETS[args.model](args.dim)
        kind = FrameKind.parse(args.frame) if args.frame else (
            FrameKind.WOOTTERS_WIGNER if model.d == 2 else FrameKind.GROSS_WIGNER)
    else:
        cfg = load_config(args.model)
        model = cfg.model
        kind = FrameKind.parse(args.frame) if args.frame else cfg.frame_kind
    S = rep_channel(channel_at(model, args.time), build_frame(kind, model.d)).S
    _write_csv(None, [f"c{j}" for j in range(S.shape[1])], [[fmt(x) for x in row] for row in S])
    return EXIT_OK


def cmd_scan(args) -> int:
    cfg = _config(args)
    traj = zeta_trajectory(cfg.model, cfg.frame(), cfg.grid, args.threads)
    n = traj.eigenvalues.shape[1]
    header = ["t"] + [f"ev_{i}" for i in range(1, n + 1)] + ["trace_norm", "zeta", "neg_flag"]
    rows = [
        [fmt(t)] + [fmt(x) for x in ev] + [fmt(tr), fmt(z), str(int(neg))]
        for t, ev, tr, z, neg in zip(traj.times, traj.eigenvalues, traj.trace_norm, traj.zeta, traj.negativity_flag)
    ]
    out = args.out or cfg.output_path
    _write_csv(out, header, rows)
    for note in traj.notes:
        print(f"note: {note}", file=sys.stderr)
    if out not in (None, "-"):
        _say(args, f"wrote {len(rows)} rows to {out}", f"N = {traj.measure:.6f}")
    return EXIT_NON_MARKOVIAN if traj.detected else EXIT_OK


def cmd_measure(args) -> int:
    cfg = _config(args)
    traj = zeta_trajectory(cfg.model, cfg.frame(), cfg.grid, args.threads)
    print(f"N = {traj.measure:.6f}")
    for seg in traj.segments:
        _say(args, f"  [{seg.start:.6f}, {seg.end:.6f}]  {seg.contribution:.6e}")
    for note in traj.notes:
        print(f"note: {note}", file=sys.stderr)
    return EXIT_NON_MARKOVIAN if traj.detected else EXIT_OK


def cmd_criteria(args) -> int:
    cfg = _config(args)
    report = markov_criteria(cfg.model, args.time)
    print(report.format())
    return EXIT_OK if report.markovian else EXIT_NON_MARKOVIAN


def cmd_entropy_scan(args) -> int:
    cfg = _config(args)
    fs = cfg.frame()
    q0 = rep_state(parse_state(args.state, cfg.model.d), fs)
    scan = h2_monotonicity_scan(cfg.model, fs, q0, cfg.grid)
    rows = [[fmt(t), fmt(h), fmt(s), str(int(v))] for t, h, s, v in zip(scan.times, scan.h2, scan.slope, scan.violation)]
    out = args.out or cfg.output_path
    _write_csv(out, ["t", "H2", "slope", "violation_flag"], rows)
    for note in scan.warnings:
        print(f"note: {note}", file=sys.stderr)
    if out not in (None, "-"):
        _say(args, f"wrote {len(rows)} rows to {out}", f"{len(scan.intervals)} decreasing interval(s)")
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _config(args)
    fs = cfg.frame()
    traj = zeta_trajectory(cfg.model, fs, cfg.grid, args.threads)
    times = cfg.grid.times
    blp = "n/a (qubit only)"
    if cfg.model.d == 2:
        blp = f"{blp_measure(cfg.model, cfg.grid, cfg.blp_resolution).measure:.6f}"
    cp = []
    for t in times:
        try:
            cp.append(cp_rate_report(cfg.model, float(t)).cp_divisible)
        except QuasiflowError:
            cp.append(False)
    cp = np.array(cp)
    lowest = np.nanmin([nonnegativity_audit(rep_channel(channel_at(cfg.model, float(t), check=False), fs).S)[0]
                        for t in times[:: max(1, len(times) // 200)]])
    table = [
        ("N (witness)", f"{traj.measure:.6f}"),
        ("N_BLP (oracle)", blp),
        ("CP-divisible fraction", f"{cp.mean():.4f}"),
        ("first CP violation", f"t = {times[np.argmin(cp)]:.6f}" if not cp.all() else "none"),
        ("min entry of S", f"{lowest:+.6e}"),
        ("S non-negative", "yes" if lowest >= -1e-12 else "no"),
    ]
    width = max(len(k) for k, _ in table)
    for k, v in table:
        print(f"{k:<{width}}  {v}")
    return EXIT_OK


def _global_flags(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=default(0), help="RNG seed for randomized checks")
    parser.add_argument("--threads", type=int, default=default(None),
                        help=f"worker threads for grid evaluation (default ${THREADS_ENV} or 1)")
    parser.add_argument("--quiet", action="store_true", default=default(False), help="suppress informational output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasiflow", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    frame = sub.add_parser("frame", help="frame utilities", parents=[common])
    frame_sub = frame.add_subparsers(dest="action", required=True)
    validate = frame_sub.add_parser("validate", help="check frame identities", parents=[common])
    validate.add_argument("--kind", required=True, help="wootters, gross or sic")
    validate.add_argument("--dim", type=int, required=True)
    validate.set_defaults(func=cmd_frame)

    rep = sub.add_parser("represent", help="print the quasi-stochastic matrix at one time", parents=[common])
    rep.add_argument("--model", required=True, help=f"preset ({', '.join(PRESETS)}) or config file")
    rep.add_argument("--frame", default=None)
    rep.add_argument("--time", type=float, required=True)
    rep.add_argument("--dim", type=int, default=2, help="dimension for the random-unitary preset")
    rep.set_defaults(func=cmd_represent)

    for name, func, helptext in (
        ("scan", cmd_scan, "witness trajectory as CSV"),
        ("measure", cmd_measure, "non-Markovianity measure and backflow segments"),
        ("criteria", cmd_criteria, "Markov inequality report at one time"),
        ("entropy-scan", cmd_entropy_scan, "collision entropy trajectory as CSV"),
        ("compare", cmd_compare, "witness measure against BLP, CP rates and negativity"),
    ):
        p = sub.add_parser(name, help=helptext, parents=[common])
        p.add_argument("--config", required=True)
        if name in ("scan", "entropy-scan"):
            p.add_argument("--out", default=None, help="CSV path ('-' for stdout)")
        if name == "criteria":
            p.add_argument("--time", type=float, required=True)
        if name == "entropy-scan":
            p.add_argument("--state", required=True, help="0, 1, +, -, +i, -i, mixed, ket:a,b or bloch:x,y,z")
        p.set_defaults(func=func)
    return parser


def _summarise(caught):
    """Collapse per-time-point warnings into one line each."""
    counts: dict[str, tuple[int, str]] = {}
    for w in caught:
        name = w.category.__name__
        n, first = counts.get(name, (0, str(w.message)))
        counts[name] = (n + 1, first)
    for name, (n, first) in counts.items():
        print(f"warning: {name} at {n} grid point(s), first: {first}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        try:
            args.threads = max(1, int(os.environ.get(THREADS_ENV, "1")))
        except ValueError:
            args.threads = 1
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", NonPositiveProbability)
            code = args.func(args)
        _summarise(caught)
        return code
    except (ParseError, ValidationError) as exc:
        print("error: invalid configuration", file=sys.stderr)
        for problem in exc.problems:
            print(f"  {problem}", file=sys.stderr)
    except (QuasiflowError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
