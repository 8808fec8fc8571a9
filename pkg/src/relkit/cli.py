"""Command line interface: ``relkit classify|verify|realize|model-check|transform``.

Exit codes: 0 success, 1 input/usage error, 2 verdict mismatch or failed
check, 3 numerically undecidable rank.
"""
import argparse
import csv
import io
import json
import sys
import warnings

import numpy as np

from .errors import AmbiguousRankError, HypothesisError, RealizationError, RelkitError
from .family_checks import (
    classify_family,
    default_lambda_grid,
    rs_check,
    verify_representation,
)
from .models import MODEL_KINDS, HalfLineModel, model_report
from .relation import LinearRelation, SpaceSplit, adjoint, inverse
from .serialize import family_from_json, grid_from_json, load_json
from .subspace import matrix_from_json, matrix_to_json
from .systems import (
    PassivityWarning,
    ho_kalman_realize,
    moments,
    moments_from_json,
    transfer,
)
from .transforms import (
    cayley,
    contraction_transform,
    inverse_cayley,
    j_transform,
    p_transform,
    relation_from_contraction,
)

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_RANK = 0, 1, 2, 3
CLASSES = ("nevanlinna", "stieltjes", "inverse_stieltjes", "rs_class", "inner", "none")
TRANSFORM_OPS = ("p", "j", "j-k", "adjoint", "inverse", "cayley", "contraction",
                 "from-contraction", "inverse-cayley")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(parser):
    parser.add_argument("--grid", default="default",
                        help="'default' or a JSON file with a list of [re, im] points")
    parser.add_argument("--tol", type=float, default=1e-8, help="pass/fail tolerance")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for subsampling the kernel check points")
    parser.add_argument("--out", help="write the result to this file instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser():
    parser = _Parser(prog="relkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("classify", help="classify a family given as JSON")
    p.add_argument("family")
    p.add_argument("--expect", choices=CLASSES)
    _common(p)

    p = sub.add_parser("verify", help="check a representation identity")
    p.add_argument("--relation", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--tag", required=True)
    _common(p)

    p = sub.add_parser("realize", help="selfadjoint realization of a moment sequence")
    p.add_argument("moments")
    p.add_argument("--system-out", help="write the realized system JSON here")
    _common(p)

    p = sub.add_parser("model-check", help="compare the half-line models with the closed form")
    p.add_argument("--model", choices=MODEL_KINDS + ("all",), default="all")
    _common(p)

    p = sub.add_parser("transform", help="apply a transform to a relation or matrix")
    p.add_argument("input", help="relation JSON (or matrix JSON for from-contraction "
                                 "and inverse-cayley)")
    p.add_argument("--op", required=True, choices=TRANSFORM_OPS)
    p.add_argument("--c", default="0,1", help="rotation constant 're,im' for j and j-k")
    p.add_argument("--dim-m", type=int, help="dim_m for matrix inputs")
    _common(p)
    return parser


def _grid(args):
    if args.grid == "default":
        return default_lambda_grid()
    return grid_from_json(_load(args.grid))


def _load(path):
    try:
        return load_json(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg})") from exc


def _rows_csv(rows):
    labels = [k for k in ("check", "model") if any(k in r for r in rows)]
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["lambda_re", "lambda_im"] + labels + ["residual", "pass"])
    for r in rows:
        writer.writerow([r["lambda"][0], r["lambda"][1]] + [r.get(k, "") for k in labels]
                        + [r["residual"], r["pass"]])
    return buf.getvalue()


def _emit(args, payload, rows=None):
    if args.format == "csv":
        if rows is None:
            raise UsageError(f"--format csv is not available for '{args.command}'")
        text = _rows_csv(rows)
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_classify(args):
    fam = family_from_json(_load(args.family))
    verdict = classify_family(fam, _grid(args))
    if verdict.rs_class is not None:
        rng = np.random.default_rng(args.seed)
        verdict.rs_class = rs_check(fam.omega, rng=rng).member
    payload = verdict.to_json()
    if args.expect:
        payload["expect"] = args.expect
        payload["match"] = verdict.matches(args.expect)
    rows = [dict(r, check=name) for name, rs in verdict.checks.items() for r in rs]
    rows.sort(key=lambda r: (r["lambda"][0], r["lambda"][1], r["check"]))
    _emit(args, payload, rows)
    if args.expect and not payload["match"]:
        print(f"relkit: verdict does not match expected class '{args.expect}'",
              file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify(args):
    rel = LinearRelation.from_json(_load(args.relation))
    fam = family_from_json(_load(args.family))
    try:
        report = verify_representation(fam, rel, args.tag, _grid(args), args.tol)
    except HypothesisError as exc:
        payload = {"tag": args.tag, "pass": False, "reason": str(exc), "flag": exc.flag}
        _emit(args, payload, [])
        print(f"relkit: hypothesis failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    _emit(args, report.to_json(), report.rows)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def _series(hs, z):
    return sum(h * z ** k for k, h in enumerate(hs))


def cmd_realize(args):
    hs = moments_from_json(_load(args.moments))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PassivityWarning)
        system = ho_kalman_realize(hs)
    rescaled = any(issubclass(w.category, PassivityWarning) for w in caught)
    rebuilt = moments(system, len(hs) - 1)
    moment_error = max(float(np.linalg.norm(a - b, 2)) for a, b in zip(hs, rebuilt))
    zs = [r * np.exp(1j * t) for r in (0.0, 0.25, 0.5) for t in np.linspace(0, 2 * np.pi, 16)]
    series_error = max(float(np.linalg.norm(transfer(system, z) - _series(hs, z), 2))
                       for z in zs)
    payload = {
        "state_dim": system.dim_k,
        "moment_error": moment_error,
        "series_error": series_error,
        "rescaled": rescaled,
        "system": system.to_json(),
    }
    if args.system_out:
        with open(args.system_out, "w") as fh:
            json.dump(system.to_json(), fh, indent=2)
    _emit(args, payload)
    return EXIT_OK if moment_error <= args.tol else EXIT_MISMATCH


def cmd_model_check(args):
    kinds = MODEL_KINDS if args.model == "all" else (args.model,)
    rows = []
    for kind in kinds:
        for row in model_report(HalfLineModel(kind), _grid(args), args.tol):
            rows.append(dict(row, model=kind, residual=row["abs_err"]))
    rows.sort(key=lambda r: (r["lambda"][0], r["lambda"][1], r["model"]))
    ok = all(r["pass"] for r in rows)
    payload = {"rows": [{k: r[k] for k in ("lambda", "quadrature", "closed_form",
                                              "abs_err", "model", "pass")} for r in rows],
               "summary": {"points": len(rows), "pass": ok,
                           "max_abs_err": max(r["abs_err"] for r in rows)}}
    _emit(args, payload, rows)
    return EXIT_OK if ok else EXIT_MISMATCH


def _parse_c(text):
    try:
        re, im = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--c must be 're,im', got {text!r}") from exc
    return complex(re, im)


def cmd_transform(args):
    obj = _load(args.input)
    op = args.op
    if op in ("from-contraction", "inverse-cayley"):
        mat = matrix_from_json(obj.get("matrix", obj) if isinstance(obj, dict) else obj)
        n = mat.shape[0]
        dim_m = n if args.dim_m is None else args.dim_m
        split = SpaceSplit(dim_m, n - dim_m)
        if op == "from-contraction":
            result = relation_from_contraction(mat, split).to_json()
        else:
            result = inverse_cayley(mat, split).to_json()
    else:
        rel = LinearRelation.from_json(obj)
        if op == "p":
            result = p_transform(rel).to_json()
        elif op == "j":
            result = j_transform(rel, _parse_c(args.c), "m").to_json()
        elif op == "j-k":
            result = j_transform(rel, _parse_c(args.c), "k").to_json()
        elif op == "adjoint":
            result = adjoint(rel).to_json()
        elif op == "inverse":
            result = inverse(rel).to_json()
        elif op == "cayley":
            result = {"matrix": matrix_to_json(cayley(rel))}
        else:
            result = {"matrix": matrix_to_json(contraction_transform(rel))}
    _emit(args, result)
    return EXIT_OK


COMMANDS = {"classify": cmd_classify, "verify": cmd_verify, "realize": cmd_realize,
            "model-check": cmd_model_check, "transform": cmd_transform}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"relkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AmbiguousRankError as exc:
        print(f"relkit: numerically undecidable: {exc}", file=sys.stderr)
        return EXIT_RANK
    except RealizationError as exc:
        print(f"relkit: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ValueError, KeyError, TypeError, RelkitError) as exc:
        print(f"relkit: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
