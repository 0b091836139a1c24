"""Command-line front end.

    zwalk limits --spec f.json [--depth K]
    zwalk factorize --spec f.json --order ul --param 0.5 --window 20
    zwalk darboux --spec f.json --order ul --param 0.75 --window 20
    zwalk polys --spec f.json --family q --window 10
    zwalk spectrum --spec f.json
    zwalk spectrum-darboux --spec f.json --order ul --param 0.6
    zwalk verify --spec f.json --max-index 5 --max-steps 10 --nodes 512
    zwalk simulate --spec f.json --start 0 --steps 2 --paths 1000000 --seed 1
    zwalk reproduce-paper --example constant

Output goes to ``--out`` (default stdout) as JSON or CSV; a one-line summary
goes to stderr.  Exit codes: 0 ok, 1 usage error, 2 verification failure,
3 mathematical precondition failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .contfrac import closed_form, convergents, limits
from .darboux import darboux
from .errors import InvalidWalk, PreconditionError, WindowTooSmall, ZwalkError
from .factorization import LOWER, UPPER, factor, residuals
from .kmcg import oracle_power, simulate
from .pipeline import (
    default_tol,
    km_report,
    orthogonality_report,
    original,
    precision,
    transformed,
)
from .polynomials import build_q, build_s, build_t, conjugate_family
from .spectral import classify_recurrence, default_nodes, example_spectrum, moment, sample_density
from .walk import WalkSpec, truncate

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_PRECONDITION = 0, 1, 2, 3

EXAMPLES = {
    "constant": {"kind": "constant", "a": "1/8", "b": "3/4", "c": "1/8"},
    "force": {"kind": "force", "a": "1/8", "c": "3/8"},
}
EXAMPLE_ALIASES = {"4.1": "constant", "4.2": "force"}
PARAM_SUBCOMMANDS = ("factorize", "darboux", "spectrum-darboux", "verify")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    spec_path: str | None = None
    param: object = None
    window: int = 20
    nodes: int | None = None
    tol: float | None = None
    out: str | None = None
    format: str = "json"
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.param is not None and self.subcommand not in PARAM_SUBCOMMANDS:
            raise UsageError(f"--param is not accepted by {self.subcommand}")
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")


# -- argument parsing ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _param(text: str):
    if text in ("H", "h"):
        return UPPER
    if text in ("H'", "Hprime", "hprime"):
        return LOWER
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"parameter must be a number, H or H', got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zwalk", description="Stochastic factorizations and Darboux transformations of walks on Z.")
    p.add_argument("--version", action="version", version=f"zwalk {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, spec=True):
        if spec:
            sp.add_argument("--spec", required=True, help="walk spec JSON file")
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    def transform(sp, required):
        sp.add_argument("--order", choices=("ul", "lu", "UL", "LU"), default="ul")
        sp.add_argument("--param", type=_param, required=required, help="free parameter: number, H or H'")

    sp = sub.add_parser("limits", help="continued fractions H and H'")
    common(sp)
    sp.add_argument("--depth", type=int, default=0, help="also list convergents up to this depth")

    sp = sub.add_parser("factorize", help="stochastic UL or LU factors")
    common(sp)
    transform(sp, True)
    sp.add_argument("--window", type=int, default=20)

    sp = sub.add_parser("darboux", help="coefficients of the Darboux walk")
    common(sp)
    transform(sp, True)
    sp.add_argument("--window", type=int, default=20)

    sp = sub.add_parser("polys", help="polynomial coefficient tables")
    common(sp)
    sp.add_argument("--family", choices=("q", "s", "t", "qtilde", "qhat"), default="q")
    sp.add_argument("--window", type=int, default=10)
    sp.add_argument("--param", type=_param, help="free parameter for s, t, qtilde, qhat")

    sp = sub.add_parser("spectrum", help="closed-form spectral matrix")
    common(sp)
    sp.add_argument("--points", type=int, default=200)
    sp.add_argument("--nodes", type=int)

    sp = sub.add_parser("spectrum-darboux", help="spectral matrix of the Darboux walk")
    common(sp)
    transform(sp, True)
    sp.add_argument("--points", type=int, default=200)
    sp.add_argument("--nodes", type=int)
    sp.add_argument("--dps", type=int, default=0, help="decimal digits for high-precision mode (0 = double)")

    sp = sub.add_parser("verify", help="Karlin-McGregor formula against the matrix-power oracle")
    common(sp)
    transform(sp, False)
    sp.add_argument("--max-index", type=int, default=5)
    sp.add_argument("--max-steps", type=int, default=10)
    sp.add_argument("--nodes", type=int)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--dps", type=int, default=0, help="decimal digits for high-precision mode (0 = double)")
    sp.add_argument("--orthogonality", action="store_true", help="also run the orthogonality suite (|i| <= 8)")

    sp = sub.add_parser("simulate", help="Monte Carlo n-step distribution")
    common(sp)
    sp.add_argument("--start", type=int, default=0)
    sp.add_argument("--steps", type=int, default=2)
    sp.add_argument("--paths", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("reproduce-paper", help="named end-to-end recipes for the two example walks")
    common(sp, spec=False)
    sp.add_argument("--example", required=True, choices=sorted(EXAMPLES) + sorted(EXAMPLE_ALIASES))
    sp.add_argument("--nodes", type=int)
    sp.add_argument("--dps", type=int, default=40)
    return p


# -- output -------------------------------------------------------------------------


def _provenance(spec: WalkSpec | None, param=None, window=None, nodes=None) -> dict:
    return {
        "spec_hash": spec.digest() if spec is not None else None,
        "spec": spec.to_json() if spec is not None else None,
        "param": _jsonable(param),
        "window": window,
        "nodes": nodes,
        "version": __version__,
    }


def _jsonable(v):
    if v is None or isinstance(v, (str, bool, int)):
        return v
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    f = float(v)
    return f if math.isfinite(f) else str(f)


def _matrix_cols(M) -> dict:
    M = np.asarray(M, dtype=float)
    return {"entry_11": M[0, 0], "entry_12": M[0, 1], "entry_21": M[1, 0], "entry_22": M[1, 1]}


def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    keys = list(rows[0])
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: repr(float(v)) if isinstance(v, (float, np.floating)) else v for k, v in r.items()})
    return buf.getvalue()


@dataclass
class Result:
    payload: dict
    rows: list
    summary: str
    failed: bool = False


def _emit(cfg: RunConfig, res: Result):
    if cfg.format == "json":
        text = json.dumps(_jsonable(res.payload), indent=2, sort_keys=True) + "\n"
    else:
        text = _csv(res.rows)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(res.summary, file=sys.stderr)


# -- subcommands ----------------------------------------------------------------------


def _load_spec(path: str) -> WalkSpec:
    try:
        with open(path) as fh:
            return WalkSpec.from_json(json.load(fh))
    except OSError as e:
        raise UsageError(f"cannot read spec {path!r}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"spec {path!r} is not valid JSON: {e}") from None


def _order(args) -> str:
    return args.order.upper()


def cmd_limits(spec, args) -> Result:
    lim = limits(spec)
    payload = {"H": lim.H, "Hprime": lim.H_prime, "converged_after": lim.converged_after, "bracketing": lim.bracketing}
    rows = []
    if args.depth:
        for cp in convergents(spec, args.depth):
            rows.append({"k": cp.k, "h": float(cp.h), "h_prime": float(cp.h_prime)})
        payload["convergents"] = rows
    else:
        rows = [{"H": lim.H, "Hprime": lim.H_prime}]
    payload["provenance"] = _provenance(spec, window=args.depth or None)
    return Result(payload, rows, f"limits: H={lim.H:.15g} H'={lim.H_prime:.15g}")


def cmd_factorize(spec, args) -> Result:
    f = factor(spec, _order(args), args.param, args.window)
    names = ("x", "y", "s", "r")
    rows = [{"n": n, **{k: float(getattr(f, k)[n]) for k in names}} for n in f.x.indices()]
    res = float(np.max(np.abs(residuals(f)))) if f.N >= 2 else 0.0
    payload = {
        "order": f.order,
        "param": f.param,
        "boundary": f.boundary,
        "max_residual": res,
        "factors": rows,
        "provenance": _provenance(spec, f.param, list(f.window)),
    }
    return Result(payload, rows, f"factorize {f.order}: param={f.param:.15g} window={f.window} residual={res:.2e}")


def cmd_darboux(spec, args) -> Result:
    dw = darboux(factor(spec, _order(args), args.param, args.window + 1))
    lo, hi = dw.window
    rows, changed = [], []
    for n in range(lo, hi + 1):
        new = [float(v) for v in dw.coeff(n)]
        old = [float(v) for v in spec.coeff(n)] if spec.covers(n, n) else [math.nan] * 3
        rows.append({"n": n, "a": new[0], "b": new[1], "c": new[2], "a_source": old[0], "b_source": old[1], "c_source": old[2]})
        if max(abs(u - v) for u, v in zip(new, old)) > 1e-12:
            changed.append(n)
    payload = {"order": dw.order, "param": dw.param, "rows": rows, "changed_rows": changed}
    payload["provenance"] = _provenance(spec, dw.param, [lo, hi])
    return Result(payload, rows, f"darboux {dw.order}: {len(changed)} of {hi - lo + 1} rows differ from the source")


def cmd_polys(spec, args) -> Result:
    fam_name = args.family
    N = args.window
    q = build_q(spec, N)
    if fam_name == "q":
        fam = q
    else:
        if args.param is None:
            raise UsageError(f"--param is required for family {fam_name}")
        order = "UL" if fam_name in ("s", "qtilde") else "LU"
        f = factor(spec, order, args.param, N + 2)
        fam = build_s(f, q) if order == "UL" else build_t(f, q)
        if fam_name in ("qtilde", "qhat"):
            fam = conjugate_family(fam)
    data = fam.to_json()
    rows = []
    for n in fam.indices():
        for comp, poly in enumerate(fam[n], start=1):
            for k, c in enumerate(poly.coeffs):
                rows.append({"n": n, "component": comp, "power": k, "coefficient": float(c)})
    data["provenance"] = _provenance(spec, None if fam_name == "q" else args.param, list(fam.window))
    return Result(data, rows, f"polys {fam.tag}: {len(fam.indices())} rows on {fam.window}")


def _measure_payload(measure, points):
    x, dens = sample_density(measure, points)
    samples = [{"x": float(t), **_matrix_cols(D)} for t, D in zip(x, dens)]
    atoms = [{"t": float(t), **_matrix_cols(M)} for t, M in measure.atoms]
    datoms = [{"t": float(t), **_matrix_cols(D)} for t, D in measure.derivative_atoms]
    return samples, atoms, datoms


def _spectrum_result(spec, measure, args, param, nodes, title) -> Result:
    samples, atoms, datoms = _measure_payload(measure, args.points)
    m0 = moment(measure, 0, nodes).value
    payload = {
        "support": [float(measure.lo), float(measure.hi)],
        "exponents": list(measure.exponents),
        "samples": samples,
        "atoms": atoms,
        "derivative_atoms": datoms,
        "moment_0": np.asarray(m0, dtype=float),
        "recurrence": classify_recurrence(measure).value,
    }
    payload["provenance"] = _provenance(spec, param, None, nodes)
    rows = [{"kind": "density", **r} for r in samples]
    rows += [{"kind": "atom", "x": r["t"], **{k: v for k, v in r.items() if k != "t"}} for r in atoms]
    rows += [{"kind": "derivative_atom", "x": r["t"], **{k: v for k, v in r.items() if k != "t"}} for r in datoms]
    return Result(payload, rows, f"{title}: support [{float(measure.lo):.6g}, {float(measure.hi):.6g}], {len(atoms)} atoms")


def cmd_spectrum(spec, args) -> Result:
    nodes = args.nodes or None
    measure = example_spectrum(spec)
    res = _spectrum_result(spec, measure, args, None, nodes or default_nodes(), "spectrum")
    try:
        res.payload["moment_minus1"] = np.asarray(moment(measure, -1, nodes).value, dtype=float)
    except PreconditionError as e:
        res.payload["moment_minus1"] = f"undefined: {e}"
    return res


def cmd_spectrum_darboux(spec, args) -> Result:
    setup = transformed(spec, _order(args), args.param, 1, 0, dps=args.dps)
    nodes = setup.nodes(args.nodes)
    with precision(args.dps):
        return _spectrum_result(
            spec, setup.measure, args, setup.factors.param, nodes, f"spectrum-darboux {setup.factors.order}"
        )


def cmd_verify(spec, args) -> Result:
    tol = args.tol if args.tol is not None else default_tol(spec)
    if args.param is None:
        setup = original(spec, max(args.max_index, 8 if args.orthogonality else 0), dps=args.dps)
    else:
        mi = max(args.max_index, 8 if args.orthogonality else 0)
        setup = transformed(spec, _order(args), args.param, mi, args.max_steps, dps=args.dps)
    report = km_report(setup, args.max_index, args.max_steps, tol, args.nodes)
    payload = {"subject": setup.label, "km": report.to_json()}
    rows = [
        {"label": e.label, "i": e.i, "j": e.j, "n": e.n, "km": e.value, "oracle": e.reference, "error": e.error}
        for e in report.entries
    ]
    failed = not report.passed
    summary = f"verify {setup.label}: {report.summary()}"
    if args.orthogonality:
        orth = orthogonality_report(setup, 8, min(tol, 1e-9), args.nodes)
        payload["orthogonality"] = orth.to_json()
        rows += [
            {"label": e.label, "i": e.i, "j": e.j, "n": e.n, "km": e.value, "oracle": e.reference, "error": e.error}
            for e in orth.entries
        ]
        failed = failed or not orth.passed
        summary += f"; orthogonality {orth.summary()}"
    payload["passed"] = not failed
    param = setup.factors.param if setup.factors is not None else None
    payload["provenance"] = _provenance(spec, param, list(report.window), report.nodes)
    return Result(payload, rows, summary, failed)


def cmd_simulate(spec, args) -> Result:
    emp = simulate(spec, args.start, args.steps, args.paths, args.seed)
    rows = []
    for j, p, se in zip(emp.states, emp.probs, emp.stderr):
        ref = oracle_power(spec, args.start, int(j), args.steps)
        rows.append({"j": int(j), "empirical": float(p), "stderr": float(se), "oracle": ref})
    payload = {"start": args.start, "steps": args.steps, "paths": args.paths, "seed": args.seed, "distribution": rows}
    payload["provenance"] = _provenance(spec, window=[int(emp.states[0]), int(emp.states[-1])])
    worst = max((abs(r["empirical"] - r["oracle"]) / r["stderr"] for r in rows if r["stderr"] > 0), default=0.0)
    return Result(payload, rows, f"simulate: {args.paths} paths, worst deviation {worst:.2f} standard errors")


def cmd_reproduce(args) -> Result:
    name = EXAMPLE_ALIASES.get(args.example, args.example)
    spec = WalkSpec.from_json(EXAMPLES[name])
    H, Hp = (float(v) for v in closed_form(spec))
    # constant: the upper end point; force with b = 1/2: the unique parameter 1 - 2a
    param = UPPER if name == "constant" else float(1 - 2 * spec.a)
    f = factor(spec, "UL", param, 21)
    dw = darboux(f).walk
    lo, hi = -15, 15
    inv = max(abs(float(u) - float(v)) for n in range(lo, hi + 1) for u, v in zip(dw.coeff(n), spec.coeff(n)))
    factor_rows = [{"n": n, "x": float(f.x[n]), "y": float(f.y[n]), "s": float(f.s[n]), "r": float(f.r[n])} for n in range(-5, 6)]
    measure = example_spectrum(spec)
    samples, atoms, datoms = _measure_payload(measure, 200)
    nodes = args.nodes or None
    try:
        mm1 = np.asarray(moment(measure, -1, nodes, exclude_origin_atom=True).value, dtype=float)
    except PreconditionError as e:
        mm1 = f"undefined: {e}"
    tol = default_tol(spec)
    reports = {}
    failed = False
    setups = [original(spec, 8)]
    for order in ("UL", "LU"):
        setups.append(transformed(spec, order, param, 8, 10, dps=args.dps))
    for s in setups:
        km = km_report(s, 5, 10, tol, args.nodes)
        orth = orthogonality_report(s, 8, 1e-9, args.nodes)
        reports[s.label] = {"km": km.to_json(), "orthogonality": {"passed": orth.passed, "max_error": orth.max_error}}
        failed = failed or not (km.passed and orth.passed)
    rows_changed = [n for n in range(lo, hi + 1) if max(abs(float(u) - float(v)) for u, v in zip(dw.coeff(n), spec.coeff(n))) > 1e-12]
    payload = {
        "example": name,
        "H": H,
        "Hprime": Hp,
        "factors": {"order": "UL", "param": f.param, "rows": factor_rows},
        "darboux": {"max_change": inv, "changed_rows": rows_changed},
        "spectrum": {"samples": samples, "atoms": atoms, "derivative_atoms": datoms},
        "moment_minus1": mm1,
        "recurrence": classify_recurrence(measure).value,
        "verification": {k: v for k, v in reports.items()},
        "passed": not failed,
        "provenance": _provenance(spec, f.param, [lo, hi], args.nodes),
    }
    rows = [{"label": label, "km_max_error": r["km"]["max_error"], "orthogonality_max_error": r["orthogonality"]["max_error"]} for label, r in reports.items()]
    summary = f"reproduce {name}: H={H:.12g} H'={Hp:.12g}, darboux rows changed {rows_changed}, checks {'pass' if not failed else 'FAIL'}"
    return Result(payload, rows, summary, failed)


COMMANDS = {
    "limits": cmd_limits,
    "factorize": cmd_factorize,
    "darboux": cmd_darboux,
    "polys": cmd_polys,
    "spectrum": cmd_spectrum,
    "spectrum-darboux": cmd_spectrum_darboux,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(
            subcommand=args.subcommand,
            spec_path=getattr(args, "spec", None),
            param=getattr(args, "param", None) if args.subcommand in PARAM_SUBCOMMANDS else None,
            window=getattr(args, "window", 20),
            nodes=getattr(args, "nodes", None),
            tol=getattr(args, "tol", None),
            out=args.out,
            format=args.format,
            seed=getattr(args, "seed", 0),
        )
        if args.subcommand == "reproduce-paper":
            res = cmd_reproduce(args)
        else:
            res = COMMANDS[args.subcommand](_load_spec(cfg.spec_path), args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (WindowTooSmall, InvalidWalk) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as e:
        print(f"precondition failed ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ZwalkError as e:
        print(f"error ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    _emit(cfg, res)
    return EXIT_VERIFY if res.failed else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
