"""Command-line interface: eig | solve | branch | sweep | oracle1d | asympt | probe.

Exit codes: 0 success, 2 configuration error, 3 solver error (partial
results are still written, flagged "incomplete").
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from .config import RunConfig, load_config
from .continuation import continue_branch, StepOptions
from .domain import INTERVAL, boundary_integral
from .errors import ConfigError, IndefbcError, PencilNotPositiveDefinite
from .experiments import asymptotics_fit, delta_sweep, oracle_1d
from .problem import LOGISTIC, W_FORM
from .solve import minimize_nehari, multi_start_solutions, nonexistence_probe
from .spectral import principal_eigenvalue, sigma1, weighted_steklov_spectrum

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3

CSV_HEADER = "lambda,sup_norm,l2_norm,E,G,J,gamma1,mu2plus,membership,residual"


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isinf(x):
            return "+inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _write_json(path: str, payload: dict) -> None:
    text = json.dumps(_jsonable(payload), sort_keys=True, indent=2)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text + "\n")


def _report(config: RunConfig, command: str, body: dict, incomplete: bool) -> dict:
    return {"command": command, "config": config.raw,
            "incomplete": incomplete, **body}


def _lam_grid(config: RunConfig) -> list:
    lo, hi = config.lam_window
    if config.lam_samples == 1:
        return [lo]
    return list(np.linspace(lo, hi, config.lam_samples))


def _mu2_plus(spec, point, lam1: float) -> float:
    if not 0.0 <= point.lam < lam1:
        return math.nan
    try:
        return weighted_steklov_spectrum(spec.domain, spec.g, point.lam,
                                         point.w, spec.p).mu2_plus
    except PencilNotPositiveDefinite:
        return math.nan


def cmd_eig(config: RunConfig, out_dir: str, verbose: bool) -> int:
    domain = config.build_domain()
    spec = config.build_spec(domain)
    rows = []
    notes = []
    pair = principal_eigenvalue(domain, spec.g)
    lam1 = pair.value
    if boundary_integral(domain, spec.g) >= 0.0:
        notes.append("weight has nonnegative boundary integral; "
                     "the principal eigenvalue is 0 with constant eigenfunction")
    closed_form = None
    if domain.kind == INTERVAL:
        g0, g1 = float(spec.g[0]), float(spec.g[1])
        if g0 * g1 < 0.0 and g0 + g1 < 0.0:
            closed_form = (g0 + g1) / (g0 * g1)
    grid = sorted(set(_lam_grid(config)) | {0.0, lam1})
    for lam in grid:
        value = sigma1(domain, spec.g, float(lam)).value
        rows.append({"lambda": float(lam), "sigma1": value})
    print(f"lambda1 = {_fmt(lam1)}")
    if closed_form is not None:
        print(f"closed-form (g0+g1)/(g0*g1) = {_fmt(closed_form)} "
              f"(|diff| = {_fmt(abs(closed_form - lam1))})")
    for note in notes:
        print(f"note: {note}")
    for row in rows:
        print(f"sigma1({_fmt(row['lambda'])}) = {_fmt(row['sigma1'])}")
    payload = _report(config, "eig", {
        "lambda1": lam1, "closed_form_1d": closed_form,
        "sigma1_rows": rows, "notes": notes,
    }, incomplete=False)
    _write_json(os.path.join(out_dir, "eig.json"), payload)
    return EXIT_OK


def cmd_solve(config: RunConfig, out_dir: str, verbose: bool) -> int:
    domain = config.build_domain()
    spec = config.build_spec(domain)
    records = []
    incomplete = False
    for lam in _lam_grid(config):
        try:
            point = minimize_nehari(spec, float(lam))
        except IndefbcError as exc:
            incomplete = True
            records.append({"lambda": float(lam), "error": str(exc),
                            "error_kind": type(exc).__name__})
            continue
        records.append({
            "lambda": float(lam), "trace": point.w, "sup_norm": point.sup_norm,
            "residual": point.residual, "gamma1": point.gamma1,
            "E": point.nehari.E, "G": point.nehari.G_val, "J": point.nehari.J,
            "membership": point.nehari.membership,
        })
        if verbose:
            print(f"lambda={_fmt(lam)} sup={_fmt(point.sup_norm)} "
                  f"J={_fmt(point.nehari.J)} gamma1={_fmt(point.gamma1)}")
    payload = _report(config, "solve", {"solutions": records}, incomplete)
    _write_json(os.path.join(out_dir, "solve.json"), payload)
    return EXIT_SOLVER if incomplete else EXIT_OK


def cmd_branch(config: RunConfig, out_dir: str, verbose: bool) -> int:
    domain = config.build_domain()
    spec = config.build_spec(domain)
    options = StepOptions(ds_min=config.step_min, ds_max=config.step_max)
    branch = continue_branch(spec, options=options)
    lam1 = branch.bifurcation_lambda
    lines = [CSV_HEADER]
    diagram = ["lambda,sup_norm"]
    for point in branch.points:
        l2 = math.sqrt(float(domain.weights @ (point.w * point.w)))
        mu2 = _mu2_plus(spec, point, lam1)
        lines.append(",".join([
            _fmt(point.lam), _fmt(point.sup_norm), _fmt(l2),
            _fmt(point.nehari.E), _fmt(point.nehari.G_val), _fmt(point.nehari.J),
            _fmt(point.gamma1), _fmt(mu2), point.nehari.membership,
            _fmt(point.residual),
        ]))
        if spec.form == LOGISTIC:
            if point.lam > 0.0:
                diagram.append(f"{_fmt(point.lam)},"
                               f"{_fmt(1.0 + point.sup_norm / point.lam)}")
        else:
            diagram.append(f"{_fmt(point.lam)},{_fmt(point.sup_norm)}")
    for name, content in (("branch.csv", lines), ("branch_diagram.csv", diagram)):
        with open(os.path.join(out_dir, name), "w", encoding="utf-8",
                  newline="\n") as handle:
            handle.write("\n".join(content) + "\n")
    if verbose:
        print(f"{len(branch.points)} points, lambda1={_fmt(lam1)}, "
              f"range={branch.lam_range}")
    payload = _report(config, "branch", {
        "lambda1": lam1, "n_points": len(branch.points),
        "lam_range": list(branch.lam_range), "direction": branch.direction,
    }, incomplete=False)
    _write_json(os.path.join(out_dir, "branch.json"), payload)
    return EXIT_OK


def cmd_sweep(config: RunConfig, out_dir: str, verbose: bool) -> int:
    domain = config.build_domain()
    spec = config.build_spec(domain)
    if not config.deltas:
        raise ConfigError("[sweep] deltas is required for the sweep command")
    results = delta_sweep(domain, spec.g, config.deltas, spec.p,
                          n_lam_samples=config.lam_samples,
                          n_inits=config.n_inits, seed=config.seed)
    records = []
    incomplete = False
    for res in results:
        rec = {"delta": res.delta, "lambda1": res.lam1, "c_delta": res.c_delta,
               "m_delta": res.m_delta, "uniqueness_count": res.uniqueness_count}
        if res.error is not None:
            rec["error"] = res.error
            incomplete = True
        records.append(rec)
        if verbose:
            print(rec)
    clean = [r for r in results if r.error is None]
    verdict = {
        "lambda1_decreasing": all(a.lam1 >= b.lam1 - 1e-8 for a, b in
                                  zip(clean, clean[1:])),
        "c_delta_decreasing": all(a.c_delta >= b.c_delta for a, b in
                                  zip(clean, clean[1:])),
        "m_delta_nondecreasing": all(a.m_delta <= b.m_delta + 1e-8 for a, b in
                                     zip(clean, clean[1:])),
        "unique_everywhere": all(r.uniqueness_count == 1 for r in clean),
    }
    payload = _report(config, "sweep",
                      {"sweep": records, "verdict": verdict}, incomplete)
    _write_json(os.path.join(out_dir, "sweep.json"), payload)
    return EXIT_SOLVER if incomplete else EXIT_OK


def cmd_oracle1d(config: RunConfig, out_dir: str, verbose: bool) -> int:
    domain = config.build_domain()
    if domain.kind != INTERVAL:
        raise ConfigError("oracle1d requires the interval domain")
    spec = config.build_spec(domain)
    form = LOGISTIC if spec.form == LOGISTIC else W_FORM
    params = -spec.g if form == LOGISTIC else spec.g  # logistic stores g = -r
    records = []
    incomplete = False
    for lam in _lam_grid(config):
        try:
            report = oracle_1d(form, params, float(lam), spec.p)
        except IndefbcError as exc:
            incomplete = True
            records.append({"lambda": float(lam), "error": str(exc)})
            continue
        scaling = [
            {"d": float(d), "c": float(c),
             "lam_u": [float(lam) * float(d), float(lam) * (float(d) + float(c))]}
            for (d, c), cls in zip(report.pairs, report.classifications)
            if cls == "positive-above-one"
        ]
        records.append({
            "lambda": float(lam), "count": len(report.pairs),
            "pairs": report.pairs, "classifications": report.classifications,
            "lam_u_scaling": scaling,
        })
        if verbose:
            print(f"lambda={_fmt(lam)}: {len(report.pairs)} solutions, "
                  f"{report.classifications}")
    payload = _report(config, "oracle1d", {"enumerations": records}, incomplete)
    _write_json(os.path.join(out_dir, "oracle1d.json"), payload)
    return EXIT_SOLVER if incomplete else EXIT_OK


def cmd_asympt(config: RunConfig, out_dir: str, verbose: bool) -> int:
    domain = config.build_domain()
    spec = config.build_spec(domain)
    branch = continue_branch(spec)
    target = "logistic-u" if spec.form == LOGISTIC else "sppr-v"
    fit = asymptotics_fit(branch, config.lam_window, target)
    expected = -1.0 / (spec.p - 1.0)
    verdict = {"slope": fit.slope, "expected": expected,
               "within_band": bool(abs(fit.slope - expected) <= 0.05)}
    if verbose:
        print(f"slope={_fmt(fit.slope)} expected={_fmt(expected)}")
    payload = _report(config, "asympt", {
        "target": target, "lams": fit.lams, "sup_norms": fit.sup_norms,
        "intercept": fit.intercept, "fit_residual": fit.fit_residual,
        "verdict": verdict,
    }, incomplete=False)
    _write_json(os.path.join(out_dir, "asympt.json"), payload)
    return EXIT_OK


def cmd_probe(config: RunConfig, out_dir: str, verbose: bool) -> int:
    domain = config.build_domain()
    spec = config.build_spec(domain)
    lam1 = principal_eigenvalue(domain, spec.g).value
    lams = [lam1, 1.1 * lam1, 2.0 * lam1] if lam1 > 0.0 else _lam_grid(config)
    records = []
    for lam in lams:
        report = nonexistence_probe(spec, float(lam), config.n_inits, config.seed)
        records.append({
            "lambda": float(lam), "n_inits": report.n_inits,
            "findings": [{"trace": pt.w, "sup_norm": pt.sup_norm,
                          "residual": pt.residual} for pt in report.findings],
            "failures": report.failures,
        })
        if verbose:
            print(f"lambda={_fmt(lam)}: {len(report.findings)} findings, "
                  f"failures={report.failures}")
    verdict = {"all_empty": all(not r["findings"] for r in records)}
    payload = _report(config, "probe", {
        "lambda1": lam1, "probes": records, "verdict": verdict,
    }, incomplete=False)
    _write_json(os.path.join(out_dir, "probe.json"), payload)
    return EXIT_OK


_COMMANDS = {
    "eig": cmd_eig,
    "solve": cmd_solve,
    "branch": cmd_branch,
    "sweep": cmd_sweep,
    "oracle1d": cmd_oracle1d,
    "asympt": cmd_asympt,
    "probe": cmd_probe,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="indefbc",
        description="Positive solutions of boundary-reduced superlinear "
                    "problems with indefinite weights",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="INI config file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override seed")
    parser.add_argument("--verbose", action="store_true")
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        if args.seed is not None:
            raw = {k: dict(v) for k, v in config.raw.items()}
            raw.setdefault("run", {})["seed"] = str(args.seed)
            config = dataclasses.replace(config, seed=args.seed, raw=raw)
        out_dir = args.out if args.out is not None else config.out_dir
        os.makedirs(out_dir, exist_ok=True)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](config, out_dir, args.verbose)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IndefbcError as exc:
        print(f"solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
