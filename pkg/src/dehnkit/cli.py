"""Command-line front end.  Every command builds one report dict and prints it as JSON or a summary."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from . import __version__
from .blocktype import BlockMat, TypeTag, classify_type, positivity_check
from .catalog import ConstraintViolation, match_catalog, match_report
from .exactnum import FieldMismatch, MalformedRational, QuadNum, parse_quad, parse_rational
from .fillings import (
    NonGenericPair,
    OrderMismatch,
    PotentialDeg4,
    Slope,
    UntypedInput,
    dependent_constraint_check,
    dependent_orbit,
    pair_json,
    parse_pair,
    symmetry_set,
)
from .funceq import (
    DegenerateEigen,
    Irreducible,
    StructureViolation,
    ZeroOmega2,
    constraint_kernel,
    eigen_transform,
    split_check,
    structure_classify,
    symmetry_filter,
)
from .groups import (
    SCENARIOS,
    CapExceeded,
    ScenarioMismatch,
    closure,
    kind_for_scenario,
    maximal_group,
    rigidity_violations,
    type_census,
    verify_presentation,
)
from .linalg import I2, IOTA4, Matrix, companion, finite_order, min_poly, poly_from_string
from .spectral import PrimaryMat, RelationViolation, aut_necessary_check, infer_cusp_shapes, primary_matrix

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_INTERNAL = 0, 2, 3, 1

# Worked coefficient matrices of the census manifold v2788 (normalized form).
V2788_H = Matrix.from_json([["0", "1/2", "0", "1/2"], ["-1", "0", "-1", "0"], ["0", "1/2", "0", "-1/2"], ["-1", "0", "1", "0"]])
V2788_V = Matrix.from_json(
    [["1/2", "1/2", "-1/2", "0"], ["-1", "1/2", "0", "-1/2"], ["1/2", "0", "1/2", "-1/2"], ["0", "1/2", "1", "1/2"]]
)

DEFAULT_SIGMAS = {
    -3: companion(poly_from_string("x^2+x+1")),
    -1: Matrix([[0, -1], [1, 0]]),
}


class InputError(ValueError):
    """Bad user input; reported with exit code 2."""


# -- input helpers ----------------------------------------------------------------------


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON in {path}: {e.msg}") from None


def _object(obj, path: str, keys: tuple[str, ...]) -> dict:
    if not isinstance(obj, dict) or any(k not in obj for k in keys):
        raise InputError(f"{path} must be a JSON object with keys {', '.join(keys)}")
    return obj


def _matrix(obj, size: int | None = None) -> Matrix:
    try:
        M = Matrix.from_json(obj)
    except MalformedRational:
        raise
    except (ValueError, TypeError) as e:
        raise InputError(f"malformed matrix: {e}") from None
    if size is not None and M.n != size:
        raise InputError(f"expected a {size}x{size} matrix, got {M.n}x{M.n}")
    return M


def _matrix_list(obj) -> list[Matrix]:
    if isinstance(obj, dict):
        obj = obj.get("generators", obj.get("elements"))
    if not isinstance(obj, list) or not obj:
        raise InputError("expected a nonempty list of matrices")
    return [_matrix(m, 4) for m in obj]


def _tau(text: str | None) -> QuadNum | None:
    if text is None:
        return None
    try:
        return parse_quad(text)
    except MalformedRational:
        raise
    except ValueError as e:
        raise InputError(f"malformed tau: {e}") from None


def _pair(text: str):
    try:
        return parse_pair(text)
    except ValueError as e:
        raise InputError(str(e)) from None


def _group(args):
    """Generators from --scenario/--field, --generators or --group."""
    if args.generators or args.group:
        gens = _matrix_list(_load_json(args.generators or args.group))
        return gens, {"source": "file"}
    if not args.scenario:
        raise InputError("one of --scenario, --generators or --group is required")
    if args.scenario not in SCENARIOS:
        raise ScenarioMismatch(f"unknown scenario {args.scenario!r}; choose from {', '.join(SCENARIOS)}")
    D = args.field if args.field is not None else _implied_field(args.scenario)
    return maximal_group(D, args.scenario), {"source": "scenario", "scenario": args.scenario, "field_D": D}


def _implied_field(scenario: str) -> int:
    fixed = {"sqrt3_III": -3, "sqrt2_III": -2, "sqrt1_III_order2": -1, "sqrt1_III_pair": -1}
    if scenario in fixed:
        return fixed[scenario]
    raise InputError(f"scenario {scenario} needs --field")


# -- commands ---------------------------------------------------------------------------


def _classify_matrix(M: Matrix, tau: QuadNum | None, tau2: QuadNum | None) -> dict:
    B = BlockMat(M)
    t = classify_type(B)
    out = {
        "type": t.label,
        "min_poly": str(min_poly(M)),
        "finite_order": finite_order(M),
        "positivity": positivity_check(B),
        "catalog": match_report(B),
    }
    m = match_catalog(B)
    out["template"] = m.entry.template_id if m else None
    D = m.field_D if m else None
    if tau is not None:
        D = tau.D
    out["field_D"] = "any" if D is None else D
    if D is not None:
        try:
            if tau is not None:
                t1, t2 = tau, tau2 if tau2 is not None else tau
            else:
                t1, t2 = infer_cusp_shapes(B, D)
            P = primary_matrix(B, t1, t2)
            out["cusp_shapes"] = [t1.to_json(), t2.to_json()]
            out["primary"] = {"P": P.P.to_json()["rows"], "Pbar": P.Pbar.to_json()["rows"]}
            out["aut_necessary"] = aut_necessary_check(P).value
        except (RelationViolation, FieldMismatch) as e:
            out["primary"] = {"error": str(e)}
    return out


def cmd_classify(args) -> tuple[dict, dict, dict]:
    if not args.matrix:
        raise InputError("--matrix is required")
    M = _matrix(_load_json(args.matrix), 4)
    res = _classify_matrix(M, _tau(args.tau), _tau(args.tau2))
    verdicts = {"typed": "pass" if res["type"] != TypeTag.UNTYPED.label else "fail"}
    if "aut_necessary" in res:
        verdicts["aut_necessary"] = "fail" if res["aut_necessary"] == "Violation" else "pass"
    return {"matrix": M.to_json()["rows"], "tau": args.tau, "tau2": args.tau2}, res, verdicts


def cmd_group(args):
    gens, src = _group(args)
    G = closure(gens, cap=args.cap)
    res = {"order": G.order, "census": type_census(G), "generators": [g.to_json()["rows"] for g in gens], **src}
    if args.elements:
        res["elements"] = G.to_json()
    res["rigidity_violations"] = len(rigidity_violations(G))
    verdicts = {}
    if args.verify:
        kind = args.kind or kind_for_scenario(src.get("scenario", ""))
        if kind is None:
            raise InputError("--verify needs --kind for this group")
        rep = verify_presentation(G, kind)
        res["presentation"] = rep.to_json()
        verdicts = dict(rep.to_json()["checks"])
    verdicts["closed"] = "pass" if G.is_closed() else "fail"
    return {"group": src, "cap": args.cap}, res, verdicts


def cmd_symmetry(args):
    gens, src = _group(args)
    if not args.pair:
        raise InputError("--pair is required")
    pair = _pair(args.pair)
    G = closure(gens, cap=args.cap)
    r = symmetry_set(G, pair, apply_filters=args.apply_filters, c22_nonzero=args.c22_nonzero)
    res = {"group_order": G.order, **src, **r.to_json()}
    return {"group": src, "pair": pair_json(pair)}, res, {}


def cmd_dependent(args):
    if not args.pair:
        raise InputError("--pair is required")
    if args.field is None:
        raise InputError("--field is required")
    pair = _pair(args.pair)
    if args.sigmas:
        obj = _object(_load_json(args.sigmas), args.sigmas, ("sigma1", "sigma2"))
        s1, s2 = _matrix(obj["sigma1"], 2), _matrix(obj["sigma2"], 2)
    else:
        s1 = s2 = DEFAULT_SIGMAS.get(args.field, I2)
    orbit = dependent_orbit(args.mode, args.field, pair, s1, s2)
    res = {"mode": args.mode, "field_D": args.field, "orbit": [pair_json(p) for p in orbit], "count": len(orbit)}
    verdicts = {}
    if args.check:
        obj = _object(_load_json(args.check), args.check, ("A", "B", "tau", "pot"))
        A, B = _matrix(obj["A"], 2), _matrix(obj["B"], 2)
        tau = _tau(obj["tau"])
        pot = _object(obj["pot"], "pot", ())
        pd = PotentialDeg4(*(parse_rational(pot.get(k, "0")) for k in ("c40", "c22", "c04")))
        ok = dependent_constraint_check(A, B, tau, pd)
        res["constraint_check"] = ok
        verdicts["constraint_check"] = "pass" if ok else "fail"
    return {"pair": pair_json(pair), "mode": args.mode, "field_D": args.field}, res, verdicts


def cmd_funceq(args):
    if not args.matrix:
        raise InputError("--matrix is required")
    M = _matrix(_load_json(args.matrix))
    tau = _tau(args.tau)
    if M.n == 4:
        if tau is None:
            raise InputError("a 4x4 matrix needs --tau")
        P = primary_matrix(BlockMat(M), tau, tau)
    elif M.n == 2:
        D = args.field if args.field is not None else (tau.D if tau is not None else _entry_field(M))
        P = PrimaryMat.from_matrix(M, D)
    else:
        raise InputError("funceq needs a 2x2 primary matrix or a 4x4 block matrix")
    basis = constraint_kernel(P, args.degree, allow_even=args.even)
    res = {
        "degree": args.degree,
        "field_D": P.D,
        "kernel_dim": len(basis),
        "kernel": [[t[0].to_json(), t[1].to_json()] for t in basis],
    }
    try:
        tr = eigen_transform(P)
        res["transform"] = tr.to_json()
        res["structure"] = [r.to_json() for r in structure_classify(basis, tr)]
    except (DegenerateEigen, ZeroOmega2, Irreducible, StructureViolation) as e:
        tr = None
        res["transform"] = {"unavailable": type(e).__name__, "reason": str(e)}
    a = parse_rational(args.a) if args.a is not None else None
    if a is not None:
        filt = symmetry_filter(basis, a)
        res["filtered_dim"] = len(filt)
        res["filtered"] = [[t[0].to_json(), t[1].to_json()] for t in filt]
        if tr is not None:
            res["split"] = [split_check(t, tr, a) for t in filt]
    return {"matrix": M.to_json()["rows"], "degree": args.degree, "a": args.a, "tau": args.tau}, res, {}


def _entry_field(M: Matrix) -> int:
    for x in M.entries():
        if isinstance(x, QuadNum) and x.b != 0:
            return x.D
    return -1


def cmd_examples(args):
    verdicts: dict[str, str] = {}
    res: dict = {}

    def mark(name: str, ok: bool) -> None:
        verdicts[name] = "pass" if ok else "fail"

    tau = QuadNum(0, 1, -2)
    for name, M in (("v2788_H", V2788_H), ("v2788_V", V2788_V)):
        res[name] = _classify_matrix(M, tau, None)
    mark("v2788_H Type III x^2+1", res["v2788_H"]["type"] == "III" and res["v2788_H"]["min_poly"] == "x^2+1")
    mark("v2788_V Type III x^2-x+1", res["v2788_V"]["type"] == "III" and res["v2788_V"]["min_poly"] == "x^2-x+1")
    mark("(V iota)^2 = H", (V2788_V @ IOTA4) ** 2 == V2788_H)
    G = closure([V2788_V, IOTA4, -Matrix.identity(4)], cap=args.cap)
    rep = verify_presentation(G, "sqrt2", M=V2788_V)
    res["v2788_group"] = {"order": G.order, "census": type_census(G), "presentation": rep.to_json()}
    groups = {}
    for D, sc in (
        (-3, "TypeI_only"),
        (-1, "TypeI_only"),
        (-3, "TypeI_II"),
        (-1, "TypeI_II"),
        (-7, "generic"),
        (-3, "sqrt3_III"),
        (-2, "sqrt2_III"),
        (-1, "sqrt1_III_order2"),
        (-1, "sqrt1_III_pair"),
    ):
        H = closure(maximal_group(D, sc), cap=args.cap)
        row = {"order": H.order, "census": type_census(H)}
        kind = kind_for_scenario(sc)
        if kind:
            row["presentation"] = verify_presentation(H, kind).to_json()
        groups[f"{sc}@{D}"] = row
    res["maximal_groups"] = groups
    for key, want in (("TypeI_only@-3", 36), ("TypeI_only@-1", 16), ("TypeI_II@-3", 72), ("TypeI_II@-1", 32), ("generic@-7", 8)):
        mark(f"order {key} = {want}", groups[key]["order"] == want)
    pair = (Slope(5, 7), Slope(3, 11))
    sym = {}
    for key, D, sc, filt in (
        ("D=-3", -3, "TypeI_II", False),
        ("D=-1 filtered", -1, "sqrt1_III_pair", True),
        ("D=-2", -2, "sqrt2_III", False),
        ("generic", -7, "generic", False),
    ):
        r = symmetry_set(closure(maximal_group(D, sc), cap=args.cap), pair, apply_filters=filt)
        sym[key] = {"scenario": sc, "count": r.count, "count_compatible": len(r.compatible_images)}
    res["symmetry_counts"] = sym
    return {"examples": "builtin"}, res, verdicts


COMMANDS = {
    "classify": cmd_classify,
    "group": cmd_group,
    "symmetry": cmd_symmetry,
    "dependent": cmd_dependent,
    "funceq": cmd_funceq,
    "examples": cmd_examples,
}


# -- plumbing ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="summary", action="store_false", help="JSON report (default)")
    fmt.add_argument("--summary", dest="summary", action="store_true", help="human-readable summary")
    common.set_defaults(summary=False)
    common.add_argument("--cap", type=int, default=None, help="closure size limit")

    groupsrc = argparse.ArgumentParser(add_help=False)
    groupsrc.add_argument("--scenario", help="canonical group: " + ", ".join(SCENARIOS))
    groupsrc.add_argument("--field", type=int, help="square-free negative D")
    groupsrc.add_argument("--generators", help="JSON list of 4x4 generators")
    groupsrc.add_argument("--group", help="JSON list of 4x4 group elements")

    p = argparse.ArgumentParser(prog="dehnkit", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="type, minimal polynomial and catalog template")
    c.add_argument("--matrix", help="JSON file with a 4x4 matrix")
    c.add_argument("--tau", help='cusp shape, e.g. "sqrt(-2)" or "1/2+1/2*sqrt(-3)"')
    c.add_argument("--tau2", help="second cusp shape (defaults to --tau)")

    g = sub.add_parser("group", parents=[common, groupsrc], help="closure, census and presentation checks")
    g.add_argument("--verify", action="store_true")
    g.add_argument("--kind", help="presentation kind for --verify on file input")
    g.add_argument("--elements", action="store_true", help="list every element")

    s = sub.add_parser("symmetry", parents=[common, groupsrc], help="images of a filling pair")
    s.add_argument("--pair", help='"p1/q1,p2/q2"')
    s.add_argument("--apply-filters", action="store_true")
    s.add_argument("--c22-nonzero", action="store_true")

    d = sub.add_parser("dependent", parents=[common], help="dependent-case orbit and constraint check")
    d.add_argument("--pair")
    d.add_argument("--field", type=int)
    d.add_argument("--mode", choices=["SGI", "NonSGI"], default="SGI")
    d.add_argument("--sigmas", help='JSON {"sigma1": ..., "sigma2": ...}')
    d.add_argument("--check", help='JSON {"A", "B", "tau", "pot": {"c40", "c22", "c04"}}')

    f = sub.add_parser("funceq", parents=[common], help="kernel of the cubic functional equation")
    f.add_argument("--matrix", help="2x2 primary matrix or 4x4 block matrix (JSON)")
    f.add_argument("--tau")
    f.add_argument("--field", type=int)
    f.add_argument("--degree", type=int, default=3)
    f.add_argument("--even", action="store_true", help="allow even degree")
    f.add_argument("--a", help="gradient ratio for the parity/gradient filter")

    sub.add_parser("examples", parents=[common], help="built-in worked examples with self-checks")
    return p


def _digest(inputs: dict) -> str:
    blob = json.dumps(inputs, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def render(report: dict, summary: bool) -> str:
    if not summary:
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = [f"dehnkit {report.get('version', __version__)} :: {report.get('command', '?')}"]
    if "error" in report:
        lines.append(f"error: {report['error']}")
        if report.get("detail"):
            lines.append(f"detail: {report['detail']}")
        return "\n".join(lines) + "\n"
    for key in sorted(report.get("results", {})):
        val = report["results"][key]
        if isinstance(val, (str, int, bool, Fraction)) or val is None:
            lines.append(f"{key}: {val}")
        elif isinstance(val, dict) and all(isinstance(v, (str, int, bool)) or v is None for v in val.values()):
            lines.append(f"{key}: " + ", ".join(f"{k}={v}" for k, v in sorted(val.items())))
        else:
            lines.append(f"{key}: <{type(val).__name__} of {len(val)}>")
    for key, v in sorted(report.get("verdicts", {}).items()):
        lines.append(f"[{v}] {key}")
    return "\n".join(lines) + "\n"


def run(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    report: dict = {"command": args.command, "version": __version__}
    code = EXIT_OK
    try:
        inputs, results, verdicts = COMMANDS[args.command](args)
        report.update(inputs_digest=_digest(inputs), inputs=inputs, results=results, verdicts=verdicts)
    except MalformedRational as e:
        code, report["error"], report["detail"] = EXIT_INPUT, "malformed rational", str(e)
    except (CapExceeded, ScenarioMismatch) as e:
        code, report["error"] = EXIT_GUARD, str(e)
    except (
        InputError,
        ConstraintViolation,
        FieldMismatch,
        UntypedInput,
        NonGenericPair,
        OrderMismatch,
        RelationViolation,
        StructureViolation,
        ValueError,
        KeyError,
        TypeError,
        ZeroDivisionError,
    ) as e:
        code, report["error"] = EXIT_INPUT, str(e) or type(e).__name__
    except Exception as e:  # noqa: BLE001 - report instead of a traceback
        code, report["error"] = EXIT_INTERNAL, f"internal error: {type(e).__name__}: {e}"
    out.write(render(report, getattr(args, "summary", False)))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
