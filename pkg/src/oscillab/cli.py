"""Command-line front end.

Subcommands: polytope, rlct, oscillate, fit, theorem2-battery, theorem3-lab,
report.  Flags may also be given in a key=value config file (--config);
explicit flags override file values.  Exit codes: 0 complete, 1 usage error,
2 numerical non-convergence, 3 hypothesis failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from ._version import __version__
from .bump import CutoffFunction, TestFunction
from .experiments import (
    ExperimentConfig,
    HypothesisError,
    export_report,
    run_theorem2_battery,
    run_theorem3_lab,
)
from .fit import fit_leading, geometric_grid
from .poly import ParseError, parse
from .quad import QuadratureBudgetError, eval_oscillatory
from .reports import canonical_json, samples_from_csv, samples_to_csv
from .rlct import (
    gamma_from_resolution,
    load_resolution_data,
    rlct_homogeneous,
    rlct_newton_candidate,
    RlctReport,
)
from .polytope import newton_polytope

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NONCONVERGED = 2
EXIT_HYPOTHESIS = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(p: _Parser):
    p.add_argument("--config", help="key=value file mirroring the flags")
    p.add_argument("--phase", help="phase polynomial, e.g. 'x1^4 + x2^4'")
    p.add_argument("--dim", type=int, help="ambient dimension n")
    p.add_argument("--nu", help="amplitude monomial exponents, comma separated")
    p.add_argument("--cutoff", help="cutoff radii a,b (1 on [-a,a], 0 outside (-b,b))")
    p.add_argument("--shape", choices=["product", "radial"], help="amplitude shape")
    p.add_argument("--tau-min", type=float, dest="tau_min")
    p.add_argument("--tau-max", type=float, dest="tau_max")
    p.add_argument("--tau-count", type=int, dest="tau_count")
    p.add_argument("--tol", type=float, help="quadrature tolerance per sample")
    p.add_argument("--seed", type=int, help="seed for randomized searches")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", choices=["json", "csv", "md"], dest="fmt")


def _build_parser() -> _Parser:
    parser = _Parser(prog="oscillab", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("polytope", "rlct", "oscillate", "fit", "theorem2-battery",
                 "theorem3-lab", "report"):
        p = sub.add_parser(name)
        _add_common(p)
        if name == "rlct":
            p.add_argument("--method", choices=["homogeneous", "candidate", "resolution"])
            p.add_argument("--resolution-data", dest="resolution_data",
                           help="JSON file: [{\"m\": int, \"k\": int}, ...]")
        if name in ("fit", "report"):
            p.add_argument("--input", help="input file (samples CSV or report JSON)")
    return parser


_DEFAULTS = {
    "dim": 2,
    "nu": "0,0",
    "cutoff": "1,2",
    "shape": "product",
    "tau_min": 1e2,
    "tau_max": 1e4,
    "tau_count": 24,
    "tol": 1e-10,
    "seed": 0,
    "fmt": "json",
}

_CASTS = {
    "dim": int, "tau_min": float, "tau_max": float, "tau_count": int,
    "tol": float, "seed": int,
}


def _load_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key == "format":
                key = "fmt"
            out[key] = _CASTS.get(key, str)(value)
    return out


def _resolve(args: argparse.Namespace) -> dict:
    """Merge explicit flags over config-file values over built-in defaults."""
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        merged.update(_load_config_file(args.config))
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            merged[key] = value
    return merged


def _ints(text: str) -> tuple:
    return tuple(int(p) for p in str(text).replace(",", " ").split())


def _floats(text: str) -> tuple:
    return tuple(float(p) for p in str(text).replace(",", " ").split())


def _require(opts: dict, key: str):
    if not opts.get(key):
        raise UsageError(f"--{key.replace('_', '-')} is required for this command")


class UsageError(ValueError):
    pass


def _emit(text: str, opts: dict, filename: str):
    if opts.get("out"):
        os.makedirs(opts["out"], exist_ok=True)
        path = os.path.join(opts["out"], filename)
        with open(path, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _make_amplitude(opts: dict) -> TestFunction:
    a, b = _floats(opts["cutoff"])
    return TestFunction(nu=_ints(opts["nu"]), cutoff=CutoffFunction(a, b),
                        shape=opts["shape"])


def _experiment_config(opts: dict) -> ExperimentConfig:
    a, b = _floats(opts["cutoff"])
    return ExperimentConfig(
        phase=opts.get("phase") or "",
        dim=opts["dim"],
        nu=_ints(opts["nu"]),
        cutoff=(a, b),
        shape=opts["shape"],
        tau_min=opts["tau_min"],
        tau_max=opts["tau_max"],
        tau_count=opts["tau_count"],
        tol=opts["tol"],
        seed=opts["seed"],
    )


def _cmd_polytope(opts: dict) -> int:
    _require(opts, "phase")
    f = parse(opts["phase"], opts["dim"])
    poly = newton_polytope(f)
    _emit(canonical_json(poly.to_json_dict()), opts, "polytope.json")
    return EXIT_OK


def _cmd_rlct(opts: dict) -> int:
    method = opts.get("method")
    if opts.get("resolution_data") and not method:
        method = "resolution"
    if method == "resolution":
        _require(opts, "resolution_data")
        with open(opts["resolution_data"]) as fh:
            data = load_resolution_data(fh.read())
        report = RlctReport(value=gamma_from_resolution(data), method="resolution")
    else:
        _require(opts, "phase")
        f = parse(opts["phase"], opts["dim"])
        try:
            if method == "homogeneous" or (method is None and f.homogeneous_degree() is not None):
                report = rlct_homogeneous(f)
            else:
                report = rlct_newton_candidate(f)
        except ValueError as exc:
            print(f"hypothesis failure: {exc}", file=sys.stderr)
            return EXIT_HYPOTHESIS
    _emit(canonical_json(report.to_json_dict()), opts, "rlct.json")
    return EXIT_OK


def _cmd_oscillate(opts: dict) -> int:
    _require(opts, "phase")
    f = parse(opts["phase"], opts["dim"])
    phi = _make_amplitude(opts)
    taus = geometric_grid(opts["tau_min"], opts["tau_max"], opts["tau_count"])
    samples = [eval_oscillatory(f, phi, float(t), tol=opts["tol"]) for t in taus]
    if opts["fmt"] == "json":
        payload = {
            "kind": "oscillate",
            "version": __version__,
            "config": _experiment_config(opts).to_json_dict(),
            "samples": [
                {"tau": s.tau, "re": s.value.real, "im": s.value.imag,
                 "abs": abs(s.value), "err": s.error_estimate,
                 "converged": s.converged}
                for s in samples
            ],
        }
        _emit(canonical_json(payload), opts, "samples.json")
    else:
        _emit(samples_to_csv(samples), opts, "samples.csv")
    return EXIT_OK if all(s.converged for s in samples) else EXIT_NONCONVERGED


def _cmd_fit(opts: dict) -> int:
    if opts.get("input"):
        with open(opts["input"]) as fh:
            samples = samples_from_csv(fh.read())
        n_ambient = opts["dim"]
    else:
        _require(opts, "phase")
        f = parse(opts["phase"], opts["dim"])
        phi = _make_amplitude(opts)
        taus = geometric_grid(opts["tau_min"], opts["tau_max"], opts["tau_count"])
        samples = [eval_oscillatory(f, phi, float(t), tol=opts["tol"]) for t in taus]
        n_ambient = f.n
    est = fit_leading(samples, n_ambient=n_ambient)
    _emit(canonical_json(est.to_json_dict()), opts, "fit.json")
    return EXIT_OK if est.converged else EXIT_NONCONVERGED


def _cmd_battery(opts: dict) -> int:
    report = run_theorem2_battery(config=_experiment_config(opts))
    ext = {"json": "json", "csv": "csv", "md": "md"}[opts["fmt"]]
    _emit(export_report(report, opts["fmt"]), opts, f"battery.{ext}")
    if any(row["status"] == "indeterminate" for row in report.rows):
        return EXIT_NONCONVERGED
    return EXIT_OK


def _cmd_lab(opts: dict) -> int:
    _require(opts, "phase")
    report = run_theorem3_lab(opts["phase"], _experiment_config(opts))
    ext = {"json": "json", "csv": "csv", "md": "md"}[opts["fmt"]]
    _emit(export_report(report, opts["fmt"]), opts, f"theorem3.{ext}")
    fits = (report.symmetric_fit, report.generic_fit)
    if not all(fit["converged"] for fit in fits):
        return EXIT_NONCONVERGED
    return EXIT_OK


def _cmd_report(opts: dict) -> int:
    _require(opts, "input")
    with open(opts["input"]) as fh:
        payload = json.load(fh)
    ext = {"json": "json", "csv": "csv", "md": "md"}[opts["fmt"]]
    _emit(export_report(payload, opts["fmt"]), opts, f"report.{ext}")
    return EXIT_OK


_COMMANDS = {
    "polytope": _cmd_polytope,
    "rlct": _cmd_rlct,
    "oscillate": _cmd_oscillate,
    "fit": _cmd_fit,
    "theorem2-battery": _cmd_battery,
    "theorem3-lab": _cmd_lab,
    "report": _cmd_report,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = _resolve(args)
        return _COMMANDS[args.command](opts)
    except (UsageError, ParseError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisError as exc:
        print(f"hypothesis failure [{exc.check}]: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except QuadratureBudgetError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
