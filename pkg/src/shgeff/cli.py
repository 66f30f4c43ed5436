"""Command-line front end.

    shgeff compute TENSOR.json [--oracle] [--pm all] [--json]
    shgeff scan TENSOR.json --pm ooe --n-theta 181 --n-phi 360 --out map.csv
    shgeff verify [--json]
    shgeff classes

Exit codes: 0 ok, 1 internal inconsistency (verify), 2 parse error,
3 symmetry violation, 4 non-convergence, 5 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import claims, crystal_db
from .c_eigen import DEFAULT_SEED, CEigenConfig, solve_lambda_max
from .oracle import grid_max_ceig, grid_max_deff
from .shg_models import PhaseMatchType, SolverOptions, angle_scan, chi_eff, d_eff1, d_eff2
from .tensor_core import (
    SymmetryClass,
    SymmetryError,
    classify_symmetry,
    contract_xyy,
    from_voigt,
    piezo_deviation,
)

EXIT_OK, EXIT_INCONSISTENT, EXIT_PARSE, EXIT_SYMMETRY, EXIT_CONVERGENCE, EXIT_IO = 0, 1, 2, 3, 4, 5


class SpecError(ValueError):
    """Malformed tensor specification file."""


# ---------------------------------------------------------------- input files

def _field_number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise SpecError(f"{where}: value must be finite")
    return float(value)


def parse_tensor_spec(doc) -> tuple[np.ndarray, dict]:
    """Build a tensor from a parsed TensorSpecFile document.

    Returns ``(tensor, info)`` where ``info`` describes the source
    (``class``/``params``/``variant`` for crystal classes).

    Raises:
        SpecError: malformed document (message names the field).
        SymmetryError: ``components`` input that is asymmetric without
            ``"symmetrize": true``.
    """
    if not isinstance(doc, dict):
        raise SpecError("top level: expected a JSON object")
    kinds = [k for k in ("class", "voigt", "components") if k in doc]
    if len(kinds) != 1:
        raise SpecError("top level: exactly one of 'class', 'voigt', 'components' is required"
                        f" (found {kinds or 'none'})")
    kind = kinds[0]
    if kind == "class":
        spec = doc["class"]
        if isinstance(spec, dict):
            name, params, variant = spec.get("name"), spec.get("params"), spec.get("variant")
        else:
            name, params, variant = spec, doc.get("params"), doc.get("variant")
        if not isinstance(name, str):
            raise SpecError("class: expected a class name string")
        if not isinstance(params, dict):
            raise SpecError("params: expected an object of named coefficients")
        params = {k: _field_number(v, f"params.{k}") for k, v in params.items()}
        variant = variant or crystal_db.SYMMETRIZED
        try:
            t = crystal_db.build(name, params, variant)
        except (KeyError, ValueError) as exc:
            raise SpecError(f"class: {exc.args[0]}") from None
        return t, {"source": "class", "class": crystal_db.get_class(name).name,
                   "params": params, "variant": variant}
    if kind == "voigt":
        d = doc["voigt"]
        if not (isinstance(d, list) and len(d) == 3
                and all(isinstance(r, list) and len(r) == 6 for r in d)):
            raise SpecError("voigt: expected a 3x6 array (3 rows of 6 numbers)")
        d = [[_field_number(v, f"voigt[{i}][{j}]") for j, v in enumerate(row)]
             for i, row in enumerate(d)]
        return from_voigt(d), {"source": "voigt"}
    comps = doc["components"]
    symmetrize = doc.get("symmetrize", False)
    if not isinstance(symmetrize, bool):
        raise SpecError("symmetrize: expected true or false")
    if not isinstance(comps, list):
        raise SpecError("components: expected a list of {i, j, k, value} objects")
    t = np.zeros((3, 3, 3))
    given = {}
    for n, c in enumerate(comps):
        where = f"components[{n}]"
        if not isinstance(c, dict) or set(c) != {"i", "j", "k", "value"}:
            raise SpecError(f"{where}: expected keys i, j, k, value")
        idx = []
        for key in "ijk":
            v = c[key]
            if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= 3:
                raise SpecError(f"{where}.{key}: index must be an integer in 1..3")
            idx.append(v - 1)
        idx = tuple(idx)
        if idx in given:
            raise SpecError(f"{where}: duplicate component "
                            f"({idx[0] + 1},{idx[1] + 1},{idx[2] + 1})")
        given[idx] = _field_number(c["value"], f"{where}.value")
        t[idx] = given[idx]
    if symmetrize:
        for (i, j, k), v in given.items():
            mirror = (i, k, j)
            if mirror in given and given[mirror] != v:
                raise SpecError(f"components: ({i + 1},{j + 1},{k + 1}) and its mirror "
                                f"({i + 1},{k + 1},{j + 1}) conflict under symmetrize")
            t[mirror] = v
    else:
        dev, worst = piezo_deviation(t)
        if dev > 0.0:
            raise SymmetryError(f"components are not symmetric in the last two indices at "
                                f"{worst}; pass \"symmetrize\": true to mirror them",
                                worst_index=worst, deviation=dev)
    return t, {"source": "components", "symmetrize": symmetrize}


def load_tensor_spec(path) -> tuple[np.ndarray, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_tensor_spec(doc)


# ---------------------------------------------------------------- reports

def _angles_block(res):
    th, ph = res.angles_star.theta, res.angles_star.phi
    return {"theta": th, "phi": ph, "theta_deg": math.degrees(th), "phi_deg": math.degrees(ph)}


def inequality_status(d1, d2, lam, tol):
    top = max(d1, d2)
    if top > lam + tol:
        return "VIOLATED"
    if top >= lam - tol:
        return "equal within tol"
    return "strict"


def compute_report(t, info=None, *, oracle=False, seed=DEFAULT_SEED, grid=None, tol=1e-9,
                   pm="all") -> dict:
    """Everything ``shgeff compute`` prints, as a nested dict."""
    info = info or {}
    sym = classify_symmetry(t)
    piezo = sym != SymmetryClass.GENERAL
    opts = SolverOptions()
    report = {"input": {**{k: v for k, v in info.items()}, "symmetry": sym.value}}
    checks = []

    r1 = d_eff1(t, opts)
    report["d_eff1"] = {"value": r1.value, **_angles_block(r1), "sign": r1.sign,
                        "degenerate": r1.degenerate, "verify_error": r1.verify_error,
                        "method": r1.method}
    checks.append(r1.verified)
    if piezo:
        r2 = d_eff2(t, opts)
        report["d_eff2"] = {"value": r2.value, **_angles_block(r2), "sign": r2.sign,
                            "degenerate": r2.degenerate, "verify_error": r2.verify_error,
                            "method": r2.method}
        checks.append(r2.verified)
    else:
        o2 = grid_max_deff(t, PhaseMatchType.EE_O, grid or 256)
        direct = abs(chi_eff(t, PhaseMatchType.EE_O, o2.argmax))
        report["d_eff2"] = {"value": o2.value, "theta": o2.argmax[0], "phi": o2.argmax[1],
                            "theta_deg": math.degrees(o2.argmax[0]),
                            "phi_deg": math.degrees(o2.argmax[1]),
                            "degenerate": o2.value == 0.0,
                            "verify_error": abs(direct - o2.value),
                            "method": "oracle (reduction needs T_ijk = T_ikj)"}

    pms = list(PhaseMatchType) if pm == "all" else [PhaseMatchType.parse(pm)]
    chi = {}
    for p in pms:
        o = grid_max_deff(t, p, grid or 256)
        chi[p.value] = {"max": o.value, "theta": o.argmax[0], "phi": o.argmax[1],
                        "theta_deg": math.degrees(o.argmax[0]),
                        "phi_deg": math.degrees(o.argmax[1])}
    report["chi_eff"] = chi

    converged = True
    if piezo:
        ce = solve_lambda_max(t, CEigenConfig(seed=seed))
        b = ce.best
        report["lambda_max"] = {"value": b.lam, "x": b.x.tolist(), "y": b.y.tolist(),
                                "residual": ce.residual, "converged": ce.converged,
                                "degenerate": ce.degenerate, "starts": ce.starts,
                                "verify_error": abs(contract_xyy(t, b.x, b.y) - b.lam),
                                "method": ce.method}
        converged = ce.converged
        d2v = report["d_eff2"]["value"]
        report["inequality"] = {
            "d_eff1_le_lambda": r1.value <= b.lam + tol,
            "d_eff2_le_lambda": d2v <= b.lam + tol,
            "status": inequality_status(r1.value, d2v, b.lam, tol),
        }
    else:
        report["lambda_max"] = {"status": "skipped: C-eigenvalues need T_ijk = T_ikj"}

    if oracle:
        o1 = grid_max_deff(t, PhaseMatchType.OO_E, grid or 256)
        o2 = grid_max_deff(t, PhaseMatchType.EE_O, grid or 256)
        report["oracle"] = {"d_eff1": o1.value, "d_eff1_delta": r1.value - o1.value,
                            "d_eff2": o2.value,
                            "d_eff2_delta": report["d_eff2"]["value"] - o2.value}
        if piezo:
            oc = grid_max_ceig(t, grid or 512)
            report["oracle"].update({"lambda_max": oc.value,
                                     "lambda_max_delta": report["lambda_max"]["value"] - oc.value})

    if info.get("source") == "class":
        values = {"d_eff1": (r1.value, None), "d_eff2": (report["d_eff2"]["value"], None),
                  "lambda_max": (report["lambda_max"].get("value"), None)}
        published = {}
        for c in claims.check_claims(info["class"], info["params"], info["variant"],
                                     values=values):
            published[c.quantity] = {"claimed": c.claimed, "computed": c.computed,
                                     "delta": None if c.computed is None else c.computed - c.claimed,
                                     "status": c.status}
        report["published"] = published

    report["status"] = {"verified": all(checks), "converged": converged}
    return report


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    if v is None:
        return "null"
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return str(v)


def flatten(tree, prefix=""):
    for key, value in tree.items():
        name = f"{prefix}.{key}" if prefix else str(key)
        if isinstance(value, dict) and key != "params":
            yield from flatten(value, name)
        else:
            yield name, value


def format_report(tree) -> str:
    return "".join(f"{k} = {_fmt(v)}\n" for k, v in flatten(tree))


def _jsonable(tree):
    return json.loads(json.dumps(tree, default=float))


# ---------------------------------------------------------------- commands

def cmd_compute(args, out) -> int:
    t, info = load_tensor_spec(args.input)
    report = compute_report(t, info, oracle=args.oracle, seed=args.seed, grid=args.grid,
                            tol=args.tol, pm=args.pm)
    if args.json:
        json.dump(_jsonable(report), out, indent=2)
        out.write("\n")
    else:
        out.write(format_report(report))
    if not (report["status"]["verified"] and report["status"]["converged"]):
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_scan(args, out) -> int:
    t, _ = load_tensor_spec(args.input)
    grid = angle_scan(t, args.pm, args.n_theta, args.n_phi)
    try:
        grid.to_csv(args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    i, j = grid.argmax
    th, ph = grid.theta[i], grid.phi[j]
    out.write(f"scan.rows = {grid.values.size}\n"
              f"scan.pm = {grid.pm.label}\n"
              f"scan.argmax.theta = {th:.17g}\n"
              f"scan.argmax.phi = {ph:.17g}\n"
              f"scan.argmax.theta_deg = {math.degrees(th):.17g}\n"
              f"scan.argmax.phi_deg = {math.degrees(ph):.17g}\n"
              f"scan.argmax.value = {grid.values[i, j]:.17g}\n"
              f"scan.max_abs = {grid.max_abs:.17g}\n")
    return EXIT_OK


def _param_text(params):
    return ",".join(f"{k}={v:g}" for k, v in params.items())


def cmd_verify(args, out) -> int:
    results = claims.run_suite(args.tol)
    inconsistent = [r for r in results if not r.consistent]
    if args.json:
        doc = [{"example": crystal_db.get_class(r.crystal).example, "class": r.crystal,
                "params": r.params, "variant": r.variant, "quantity": r.quantity,
                "claimed": r.claimed, "computed": r.computed, "oracle": r.oracle,
                "status": r.status, "verdict": r.verdict, "consistent": r.consistent}
               for r in results]
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        for r in results:
            line = (f"[{r.status}] {r.crystal} ({crystal_db.get_class(r.crystal).example}) "
                    f"{_param_text(r.params)}; {r.variant}; {r.quantity}: "
                    f"published {r.claimed:.17g}")
            if r.computed is not None:
                line += f", computed {r.computed:.17g}, oracle {r.oracle:.17g}"
            if r.verdict:
                line += f" ({r.verdict})"
            if r.note:
                line += f" ({r.note})"
            if not r.consistent:
                line += " INCONSISTENT"
            out.write(line + "\n")
        counts = {s: sum(r.status == s for r in results)
                  for s in ("CONFIRMED", "DISPUTED", "SKIPPED")}
        out.write(f"summary: {counts['CONFIRMED']} confirmed, {counts['DISPUTED']} disputed, "
                  f"{counts['SKIPPED']} skipped, {len(inconsistent)} inconsistent\n")
    return EXIT_INCONSISTENT if inconsistent else EXIT_OK


def cmd_classes(args, out) -> int:
    for c in crystal_db.list_classes():
        out.write(f"{c.name}: params {', '.join(c.params)}; "
                  f"variants {', '.join(c.variants)}; example {c.example}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shgeff",
        description="Effective SHG coefficients and largest C-eigenvalue of "
                    "second-order susceptibility tensors.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="report d_eff, chi_eff maxima and lambda_max")
    p.add_argument("input", help="tensor specification (JSON)")
    p.add_argument("--oracle", action="store_true", help="add brute-force cross-checks")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="multistart seed")
    p.add_argument("--grid", type=int, default=None,
                   help="oracle grid size (default 256 for d_eff, 512 for lambda_max)")
    p.add_argument("--tol", type=float, default=1e-9, help="inequality tolerance")
    p.add_argument("--pm", default="all", choices=["ooe", "eeo", "oee", "eoo", "all"])
    p.add_argument("--json", action="store_true", help="emit JSON instead of key = value")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("scan", help="tabulate chi_eff over (theta, phi) to CSV")
    p.add_argument("input")
    p.add_argument("--pm", default="ooe", choices=["ooe", "eeo", "oee", "eoo"])
    p.add_argument("--n-theta", type=int, default=181)
    p.add_argument("--n-phi", type=int, default=360)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="check the published example values")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classes", help="list built-in crystal classes")
    p.set_defaults(func=cmd_classes)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "n_theta", 2) < 2 or getattr(args, "n_phi", 2) < 2:
        print("error: --n-theta and --n-phi must be at least 2", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args, out)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SymmetryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SYMMETRY


if __name__ == "__main__":
    sys.exit(main())
