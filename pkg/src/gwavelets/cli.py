"""Command-line front end: ``gwavelets {build,check,wavelets,transform,sample,info}``."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import jsonio
from .errors import (AdmissibilityFailed, CapacityExceeded, GWaveletsError, InvalidModel,
                     NotEpimorphism, NotInVJ)
from .fourier import FourierExpansion, evaluate, omega
from .groups import (BandSpec, cantor_model, check_standing_assumptions, model_from_json,
                     torus_model)
from .digits import digit_set
from .msf import MsfLadder, build_msf_ladder, check_msf_conditions, msf_scaling_sequence
from .mra import ScalingSequence, check_orthonormal, check_scaling_conditions
from .reports import ACCEPT, FAIL, PASS
from .transform import CoefficientTree, analyze, synthesize
from .wavelets import WaveletSystem, build_wavelet_system, verify_decomposition

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ADMISSIBILITY = 2
EXIT_CAPACITY = 3
EXIT_PARSE = 4
EXIT_NOT_IN_VJ = 5


class CliError(Exception):
    def __init__(self, code, message, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload or {}


# --- argument parsing ------------------------------------------------------

def _common_parser():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--tolerance", type=float, default=1e-9, help="comparison tolerance (default 1e-9)")
    g.add_argument("--seed", type=int, default=None, help="shuffle the ladder enumeration within grades")
    g.add_argument("--levels", type=int, default=None,
                   help="number of levels J (build/info default 4; transform defaults to the system depth)")
    g.add_argument("--out-dir", default="gwavelets-out", help="directory for output files")
    g.add_argument("--json-errors", action="store_true", help="report errors as JSON on stderr")
    g.add_argument("--probe-radius", type=int, default=1,
                   help="radius of the dual-group probe box used by coverage checks (default 1)")
    return p


def _model_args(p):
    g = p.add_argument_group("model")
    g.add_argument("--model", help="model JSON, inline or a file path")
    g.add_argument("--group", choices=["torus", "cantor"])
    g.add_argument("--matrix", help='torus matrix as JSON, e.g. "[[2]]"')
    g.add_argument("--N", type=int, help="alphabet size of the Cantor group")
    g.add_argument("--shift", action="store_true", help="use the backward shift (bandwidth 1)")
    g.add_argument("--bandwidth", type=int, help="upper bandwidth k of the band matrix")
    g.add_argument("--period", help="JSON list of periodic rows, each with k-1 coefficients")
    g.add_argument("--preperiod", default="[]", help="JSON list of leading rows")
    g.add_argument("--table", help="JSON list of explicit rows, zero beyond --truncation")
    g.add_argument("--truncation", type=int, help="depth beyond which --table rows are zero")


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="gwavelets",
        description="Multiresolution analyses and wavelets on tori and Cantor groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="build an MSF ladder, scaling sequence and wavelets")
    _model_args(p)

    p = sub.add_parser("check", parents=[common], help="validate ladder / scaling / wavelet files")
    p.add_argument("files", nargs="+", help="artifact JSON files written by build or wavelets")

    p = sub.add_parser("wavelets", parents=[common], help="wavelets for a scaling-sequence file")
    p.add_argument("scaling", help="scaling-sequence JSON")
    p.add_argument("--completion", choices=["auto", "householder"], default="auto")

    p = sub.add_parser("transform", parents=[common], help="wavelet analysis (or synthesis)")
    p.add_argument("--system", required=True, help="wavelet-system JSON")
    p.add_argument("input", help="signal (expansion JSON or CSV samples), or a tree with --synthesize")
    p.add_argument("--synthesize", action="store_true", help="rebuild an expansion from a tree")
    p.add_argument("--csv", help="with --synthesize, also write samples to this CSV file")
    p.add_argument("--grid", type=int, default=8, help="torus sampling grid exponent g (step 1/2^g)")
    p.add_argument("--depth", type=int, default=8, help="Cantor sampling depth t")

    p = sub.add_parser("sample", parents=[common], help="sample an expansion on a grid as CSV")
    p.add_argument("expansion", help="expansion JSON")
    p.add_argument("--grid", type=int, default=8, help="torus sampling grid exponent g (step 1/2^g)")
    p.add_argument("--depth", type=int, default=8, help="Cantor sampling depth t")
    p.add_argument("--out", help="CSV path (default OUT_DIR/samples.csv)")

    p = sub.add_parser("info", parents=[common], help="describe a model")
    _model_args(p)
    return parser


# --- helpers ---------------------------------------------------------------

def _load_json_arg(text, what):
    if text is None:
        return None
    path = Path(text)
    try:
        if path.exists():
            return jsonio.read_json(path)
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot parse {what}: {exc}") from None


def _load_file(path):
    try:
        return jsonio.read_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}") from None


def model_from_args(args):
    if args.model:
        return model_from_json(_load_json_arg(args.model, "--model"))
    if args.group == "torus":
        if args.matrix is None:
            raise CliError(EXIT_PARSE, "--group torus needs --matrix")
        return torus_model(_load_json_arg(args.matrix, "--matrix"))
    if args.group == "cantor":
        if args.N is None:
            raise CliError(EXIT_PARSE, "--group cantor needs --N")
        if args.shift:
            band = BandSpec.shift()
        elif args.table is not None:
            if args.bandwidth is None:
                raise CliError(EXIT_PARSE, "--table needs --bandwidth")
            band = BandSpec.finite(args.bandwidth, _load_json_arg(args.table, "--table"), args.truncation)
        elif args.period is not None:
            if args.bandwidth is None:
                raise CliError(EXIT_PARSE, "--period needs --bandwidth")
            band = BandSpec.periodic(args.bandwidth, _load_json_arg(args.period, "--period"),
                                     _load_json_arg(args.preperiod, "--preperiod"))
        else:
            raise CliError(EXIT_PARSE, "--group cantor needs --shift, --period or --table")
        return cantor_model(args.N, band)
    raise CliError(EXIT_PARSE, "give --model or --group")


def _artifact_kind(obj):
    if isinstance(obj, dict):
        if "verdict" in obj and "certificate" in obj:
            return "admissibility"
        if "enumeration" in obj and "levels" in obj:
            return "ladder"
        if "scaling" in obj and "levels" in obj:
            return "wavelets"
        if "c0" in obj and "details" in obj:
            return "tree"
        if "coeffs" in obj and "model" in obj:
            return "expansion"
        if "levels" in obj and "model" in obj:
            return "scaling"
    return None


def _write(out_dir, name, obj):
    path = Path(out_dir) / name
    jsonio.write_json(path, obj)
    return str(path)


# --- sampling ---------------------------------------------------------------

def sample_points(model, grid=8, depth=8):
    """Sampling points and their CSV coordinate columns."""
    if model.kind == "torus":
        n = 2 ** grid
        coords = [Fraction(i, n) for i in range(n)]
        pts = list(itertools.product(coords, repeat=model.d))
        return pts, [[float(v) for v in p] for p in pts], [f"x{i + 1}" for i in range(model.d)]
    count = model.N ** depth
    if count > model.cap:
        raise CapacityExceeded(f"{count} sample points exceed the cap {model.cap}")
    pts = [model.point(p) for p in itertools.product(range(model.N), repeat=depth)]
    cols = [list(p.truncate(depth)) for p in pts]
    return pts, cols, [f"x{i + 1}" for i in range(depth)]


def samples_csv(f, grid=8, depth=8):
    model = f.model
    pts, cols, names = sample_points(model, grid, depth)
    buf = io.StringIO()
    buf.write("# gwavelets samples\n")
    buf.write(f"# model: {json.dumps(model.to_json(), sort_keys=True)}\n")
    if model.kind == "torus":
        buf.write(f"# grid: torus, uniform step 1/2^{grid} on each axis\n")
    else:
        buf.write(f"# grid: cantor, all points truncated to depth {depth}, coordinates are residues mod {model.N}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names + ["re", "im"])
    for p, c in zip(pts, cols):
        v = evaluate(f, p)
        w.writerow(c + [repr(v.real + 0.0), repr(v.imag + 0.0)])
    return buf.getvalue()


def read_samples_csv(path, model):
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#") or not line.strip() or line.startswith("x1"):
                continue
            rows.append(next(csv.reader([line])))
    if not rows:
        raise CliError(EXIT_PARSE, f"{path} has no samples")
    pts, vals = [], []
    for r in rows:
        *xs, re, im = r
        if model.kind == "torus":
            pts.append(tuple(float(x) for x in xs))
        else:
            pts.append(model.point([int(x) for x in xs]))
        vals.append(complex(float(re), float(im)))
    return pts, np.array(vals)


def fit_samples(pts, vals, system, J):
    """Least-squares fit of samples onto ``V_J``.

    ``V_J`` is spanned by the coset restrictions of ``phi_J``; for MSF
    systems these are single characters and the fit reads off Fourier
    coefficients directly.
    """
    model = system.model
    phi = system.seq[J]
    basis = [omega(phi, J, eta) for eta in digit_set(model, J)]
    basis = [b for b in basis if len(b)]
    M = np.array([[evaluate(b, x) for b in basis] for x in pts])
    coef, *_ = np.linalg.lstsq(M, vals, rcond=None)
    out = FourierExpansion(model, {})
    for c, b in zip(coef, basis):
        out = out + complex(c) * b
    return out


# --- commands ----------------------------------------------------------------

DEFAULT_LEVELS = 4


def cmd_build(args):
    model = model_from_args(args)
    J = DEFAULT_LEVELS if args.levels is None else args.levels
    report = check_standing_assumptions(model, J=max(J, 1), probe_radius=args.probe_radius)
    if not report.ok:
        cert = report.certificate
        msg = "model fails the standing assumptions"
        if "offending_factor_text" in cert:
            msg += f": characteristic polynomial factor {cert['offending_factor_text']} has a unit eigenvalue"
        raise CliError(EXIT_ADMISSIBILITY, msg, {"report": report.to_json()})
    ladder = build_msf_ladder(model, J, seed=args.seed, check=False)
    seq = msf_scaling_sequence(ladder)
    system = build_wavelet_system(seq, eps=args.tolerance)
    files = {
        "admissibility": _write(args.out_dir, "admissibility.json", report.to_json()),
        "ladder": _write(args.out_dir, "ladder.json", ladder.to_json()),
        "scaling": _write(args.out_dir, "scaling.json", seq.to_json()),
        "wavelets": _write(args.out_dir, "wavelets.json", system.to_json()),
    }
    print(jsonio.dumps({"status": "ok", "m": model.m, "levels": J, "files": files}), end="")
    return EXIT_OK


def _check_one(obj, kind, args):
    eps = args.tolerance
    if kind == "ladder":
        ladder = MsfLadder.from_json(obj)
        probe = ladder.model.probe_box(args.probe_radius)
        return check_msf_conditions(ladder, probe).to_json()
    if kind == "scaling":
        seq = ScalingSequence.from_json(obj)
        rep = check_scaling_conditions(seq, seq.model.probe_box(args.probe_radius), eps).to_json()
        ortho = [check_orthonormal(seq[j], j, eps) for j in range(seq.J + 1)]
        rep["orthonormal"] = ortho
        if not all(ortho):
            rep["verdict"] = "FAIL"
        return rep
    if kind == "wavelets":
        system = WaveletSystem.from_json(obj)
        levels = [verify_decomposition(system.seq, system.psis[j], j, eps).to_json()
                  for j in sorted(system.psis)]
        ok = all(r["verdict"] == "PASS" for r in levels)
        return {"verdict": "PASS" if ok else "FAIL", "levels": levels}
    if kind == "admissibility":
        return {"verdict": PASS if obj["verdict"] == ACCEPT else FAIL, "report": obj}
    raise CliError(EXIT_PARSE, f"unrecognised artifact kind {kind!r}")


def cmd_check(args):
    results = {}
    for path in args.files:
        obj = _load_file(path)
        kind = _artifact_kind(obj)
        if kind not in ("admissibility", "ladder", "scaling", "wavelets"):
            raise CliError(EXIT_PARSE, f"{path} is not an admissibility, ladder, scaling or wavelet file")
        try:
            results[path] = {"kind": kind, **_check_one(obj, kind, args)}
        except (KeyError, TypeError, ValueError, InvalidModel) as exc:
            raise CliError(EXIT_PARSE, f"cannot interpret {path}: {exc}") from None
    ok = all(r["verdict"] == "PASS" for r in results.values())
    print(jsonio.dumps({"verdict": "PASS" if ok else "FAIL", "files": results}), end="")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_wavelets(args):
    obj = _load_file(args.scaling)
    try:
        seq = ScalingSequence.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"cannot interpret {args.scaling}: {exc}") from None
    system = build_wavelet_system(seq, args.completion, args.tolerance)
    path = _write(args.out_dir, "wavelets.json", system.to_json())
    print(jsonio.dumps({"status": "ok", "files": {"wavelets": path}}), end="")
    return EXIT_OK


def cmd_transform(args):
    sys_obj = _load_file(args.system)
    try:
        system = WaveletSystem.from_json(sys_obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"cannot interpret {args.system}: {exc}") from None
    model = system.model
    files = {}
    if args.synthesize:
        tree = CoefficientTree.from_json(_load_file(args.input), model)
        f = synthesize(tree, system)
        files["expansion"] = _write(args.out_dir, "synthesized.json", f.to_json())
        if args.csv:
            jsonio.atomic_write(args.csv, samples_csv(f, args.grid, args.depth))
            files["csv"] = args.csv
    else:
        J = min(args.levels, system.J) if args.levels is not None else system.J
        if str(args.input).endswith(".csv"):
            pts, vals = read_samples_csv(args.input, model)
            f = fit_samples(pts, vals, system, J)
        else:
            obj = _load_file(args.input)
            try:
                f = FourierExpansion.from_json(obj, model)
            except (KeyError, TypeError, ValueError) as exc:
                raise CliError(EXIT_PARSE, f"cannot interpret {args.input}: {exc}") from None
        tree = analyze(f, system, J, args.tolerance)
        files["tree"] = _write(args.out_dir, "tree.json", tree.to_json())
    print(jsonio.dumps({"status": "ok", "files": files}), end="")
    return EXIT_OK


def cmd_sample(args):
    obj = _load_file(args.expansion)
    try:
        f = FourierExpansion.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"cannot interpret {args.expansion}: {exc}") from None
    out = args.out or str(Path(args.out_dir) / "samples.csv")
    jsonio.atomic_write(out, samples_csv(f, args.grid, args.depth))
    print(jsonio.dumps({"status": "ok", "files": {"csv": out}}), end="")
    return EXIT_OK


def cmd_info(args):
    model = model_from_args(args)
    J = DEFAULT_LEVELS if args.levels is None else args.levels
    report = check_standing_assumptions(model, J=max(J, 1), probe_radius=args.probe_radius)
    enc = model.encode_dual
    info = {
        "model": model.to_json(),
        "m": model.m,
        "standing_assumptions": report.to_json(),
        "digits": [enc(d) for d in digit_set(model, 1)],
        "kernel": [model.encode_point(a) for a in model.kernel_elements(1)],
    }
    print(jsonio.dumps(info), end="")
    return EXIT_OK


COMMANDS = {
    "build": cmd_build, "check": cmd_check, "wavelets": cmd_wavelets,
    "transform": cmd_transform, "sample": cmd_sample, "info": cmd_info,
}


def _error_code(exc):
    if isinstance(exc, CliError):
        return exc.code
    if isinstance(exc, (AdmissibilityFailed, NotEpimorphism)):
        return EXIT_ADMISSIBILITY
    if isinstance(exc, CapacityExceeded):
        return EXIT_CAPACITY
    if isinstance(exc, NotInVJ):
        return EXIT_NOT_IN_VJ
    if isinstance(exc, InvalidModel):
        return EXIT_PARSE
    return EXIT_CHECK_FAILED


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.levels is not None and args.levels < 0:
        parser.error("--levels must be non-negative")
    if args.tolerance <= 0:
        parser.error("--tolerance must be positive")
    try:
        return COMMANDS[args.command](args)
    except (CliError, GWaveletsError) as exc:
        code = _error_code(exc)
        payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
        if isinstance(exc, CliError):
            payload.update(exc.payload)
        if isinstance(exc, NotInVJ):
            payload["residual"] = exc.residual
        if args.json_errors or "report" in payload:
            sys.stderr.write(jsonio.dumps(payload))
        else:
            sys.stderr.write(f"gwavelets: error: {exc}\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
