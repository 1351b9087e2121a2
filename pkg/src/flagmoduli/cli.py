"""Command-line interface: classify | spheres | fiber | moduli | sample | verify.

Reports are JSON on stdout (complex numbers as [re, im] pairs, keys sorted,
byte-identical for fixed seed and flags); diagnostics go to stderr.

Exit codes: 0 success, 1 verification failure, 2 parse error,
3 invalid divisor, 4 degenerate classification.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .eigen import (
    DegenerateError,
    TracelessMatrix,
    ZeroDivisorError,
    char_cubic,
    classify_stratum,
    cubic_roots,
    discriminant,
    normalize_divisor_matrix,
)
from .ensembles import ENSEMBLES, sample_stratum_frequencies
from .geometry import (
    SPHERES,
    AmbiguousSignError,
    EigenPointError,
    InconclusiveError,
    clearance,
    divisor_residual,
    fiber_solve,
    holomorphic_pair_minimum,
    homology_class,
    lagrangian_residual,
)
from .moduli import NotOnCubicError, covering_fiber, cubic_residual, moduli_points, ramification_residual
from .projective import ProjectivePoint, incidence_residual
from .verify import format_table, run_acceptance

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_INVALID_DIVISOR = 3
EXIT_DEGENERATE = 4


class InputError(ValueError):
    pass


def _c2j(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _matrix2j(m: np.ndarray) -> list:
    return [[_c2j(e) for e in row] for row in np.asarray(m)]


def _point2j(p: ProjectivePoint) -> list:
    return [_c2j(c) for c in p.coords]


def _parse_pair(obj) -> complex:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(t, (int, float)) for t in obj)
    ):
        raise InputError(f"complex numbers must be [re, im] pairs, got {obj!r}")
    return complex(obj[0], obj[1])


def load_divisor_input(path: str) -> tuple[np.ndarray, str | None]:
    """Read a divisor file: {"matrix": 3x3 of [re, im], "label": optional}."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "matrix" not in data:
        raise InputError("input must be a JSON object with a 'matrix' key")
    rows = data["matrix"]
    if not isinstance(rows, list) or len(rows) != 3 or any(
        not isinstance(r, list) or len(r) != 3 for r in rows
    ):
        raise InputError("'matrix' must be a 3x3 array of [re, im] pairs")
    m = np.array([[_parse_pair(e) for e in row] for row in rows], dtype=complex)
    if not np.all(np.isfinite(m.view(float))):
        raise InputError("matrix entries must be finite")
    label = data.get("label")
    if label is not None and not isinstance(label, str):
        raise InputError("'label' must be a string when present")
    return m, label


def _parse_complex_flag(text: str) -> complex:
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except ValueError as exc:
        raise InputError(f"expected 're,im', got {text!r}") from exc


def _parse_point_flag(text: str) -> ProjectivePoint:
    parts = text.split(";")
    if len(parts) != 3:
        raise InputError(f"expected 're,im;re,im;re,im', got {text!r}")
    return ProjectivePoint(np.array([_parse_complex_flag(p) for p in parts]))


def _emit(report: dict) -> None:
    print(json.dumps(report, indent=2, sort_keys=True))


def _load_normalized(args) -> tuple[TracelessMatrix, str | None]:
    raw, label = load_divisor_input(args.input)
    return normalize_divisor_matrix(raw), label


def _eigenvalues_payload(report) -> list:
    return [
        {
            "value": _c2j(item.value),
            "alg_mult": item.alg_mult,
            "geom_mult": item.geom_mult,
        }
        for item in report.eigenvalues.items
    ]


def _classify_payload(A: TracelessMatrix, label, tol: float, report) -> dict:
    on_delta = any(
        ramification_residual(A, p.z, max(tol, 1e-6)) <= tol for p in covering_fiber(A, tol)
    )
    return {
        "label": label,
        "tol": tol,
        "normalized_matrix": _matrix2j(A.entries),
        "stratum": report.stratum,
        "sphere_class_count": report.sphere_class_count,
        "eigenvalues": _eigenvalues_payload(report),
        "centers": [_point2j(c) for c in report.centers],
        "margin": report.margin,
        "reducible": report.reducible,
        "on_delta": on_delta,
    }


def cmd_classify(args) -> int:
    A, label = _load_normalized(args)
    try:
        report = classify_stratum(A, args.tol)
    except DegenerateError as exc:
        if exc.report is None:
            print(f"degenerate classification: {exc}", file=sys.stderr)
            return EXIT_DEGENERATE
        payload = _classify_payload(A, label, args.tol, exc.report)
        payload["degenerate"] = True
        payload["candidate_strata"] = list(exc.report.candidate_strata)
        _emit(payload)
        print(f"degenerate classification: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    payload = _classify_payload(A, label, args.tol, report)
    payload["degenerate"] = False
    _emit(payload)
    return EXIT_OK


def cmd_spheres(args) -> int:
    A, label = _load_normalized(args)
    report = classify_stratum(A, args.tol)
    payload = {
        "label": label,
        "tol": args.tol,
        "seed": args.seed,
        "samples": args.samples,
        "grid": args.grid,
        "stratum": report.stratum,
        "expected_class_count": report.sphere_class_count,
        "spheres": [],
    }
    classes = []
    for sphere in SPHERES:
        entry: dict = {"index": sphere.index}
        try:
            entry["clearance"] = clearance(A, sphere, grid=args.grid, tol=args.tol)
            entry["clearance_inconclusive"] = False
        except InconclusiveError as exc:
            entry["clearance"] = exc.minimum
            entry["clearance_inconclusive"] = True
            entry["warning"] = str(exc)
        entry["lagrangian_residual"] = lagrangian_residual(sphere, args.samples, args.seed)
        if report.stratum == 1:
            try:
                cls = homology_class(sphere, list(report.centers), args.tol)
                entry["homology_class"] = list(cls)
                classes.append(cls)
            except AmbiguousSignError as exc:
                entry["homology_class"] = None
                entry["warning"] = str(exc)
        else:
            entry["homology_class"] = None
        payload["spheres"].append(entry)
    if report.stratum == 1 and len(classes) == 3:
        payload["classes_pairwise_distinct"] = len(set(classes)) == 3
    else:
        payload["classes_pairwise_distinct"] = None
        payload["note"] = (
            f"stratum {report.stratum} divisor: {report.sphere_class_count} sphere "
            "classes expected; homology classes are only assigned for stratum 1"
        )
    payload["holomorphic_pair_minimum"] = holomorphic_pair_minimum(args.samples, args.seed)
    _emit(payload)
    return EXIT_OK


def cmd_fiber(args) -> int:
    A, label = _load_normalized(args)
    x = _parse_point_flag(args.x)
    payload = {"label": label, "tol": args.tol, "x": _point2j(x)}
    try:
        p = fiber_solve(A, x, args.tol)
    except EigenPointError as exc:
        payload["error"] = "eigen_point"
        payload["detail"] = str(exc)
        _emit(payload)
        return EXIT_OK
    payload["y"] = _point2j(p.y)
    payload["incidence_residual"] = incidence_residual(p)
    payload["divisor_residual"] = divisor_residual(A, p)
    _emit(payload)
    return EXIT_OK


def cmd_moduli(args) -> int:
    A, label = _load_normalized(args)
    payload: dict = {"label": label, "tol": args.tol}
    if args.z is None:
        ev = cubic_roots(char_cubic(A), args.tol, scale=A.norm)
        payload["covering_fiber"] = [
            {
                "z": _c2j(p.z),
                "alg_mult": item.alg_mult,
                "cubic_residual": cubic_residual(A, p.z),
                "ramification_residual": ramification_residual(A, p.z, max(args.tol, 1e-6)),
            }
            for item, p in zip(ev.items, covering_fiber(A, args.tol))
        ]
        payload["moduli_points"] = [{"z": _c2j(p.z)} for p in moduli_points(A, args.tol)]
        _emit(payload)
        return EXIT_OK
    z = _parse_complex_flag(args.z)
    payload["z"] = _c2j(z)
    residual = cubic_residual(A, z)
    payload["cubic_residual"] = residual
    payload["on_cubic"] = residual <= args.tol
    try:
        delta = ramification_residual(A, z, args.tol)
        payload["ramification_residual"] = delta
        payload["on_ramification"] = delta <= args.tol
    except NotOnCubicError as exc:
        payload["ramification_residual"] = None
        payload["on_ramification"] = None
        payload["error"] = "not_on_cubic"
        payload["detail"] = str(exc)
    _emit(payload)
    return EXIT_OK


def cmd_sample(args) -> int:
    report = sample_stratum_frequencies(args.count, args.seed, args.ensemble, args.tol)
    _emit(
        {
            "ensemble": report.ensemble,
            "count": report.count,
            "seed": report.seed,
            "tol": args.tol,
            "frequencies": {str(k): v for k, v in report.frequencies.items()},
            "mean_margin": report.mean_margin,
        }
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_acceptance(
        tol=args.tol, samples=args.samples, grid=args.grid, seed=args.seed
    )
    print(format_table(results), file=sys.stderr)
    _emit(
        {
            "checks": [
                {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
            ],
            "passed": sum(r.passed for r in results),
            "failed": sum(not r.passed for r in results),
            "all_passed": all(r.passed for r in results),
            "tol": args.tol,
            "samples": args.samples,
            "grid": args.grid,
            "seed": args.seed,
        }
    )
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flagmoduli",
        description=(
            "Classify divisors on the full flag threefold by eigenvalue "
            "stratification and enumerate the lagrangian sphere classes in "
            "their complements."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, input_file=True):
        if input_file:
            p.add_argument("--input", required=True, help="divisor JSON file")
        p.add_argument("--tol", type=float, default=1e-8, help="relative tolerance")
        p.add_argument("--seed", type=int, default=0, help="generator seed")

    p = sub.add_parser("classify", help="stratum, eigenvalues, centers of a divisor")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("spheres", help="clearance, lagrangian residual, homology classes")
    common(p)
    p.add_argument("--samples", type=int, default=1000, help="sphere sample count")
    p.add_argument("--grid", type=int, default=24, help="clearance grid per angle")
    p.set_defaults(func=cmd_spheres)

    p = sub.add_parser("fiber", help="divisor point over a base point via the fiber solver")
    common(p)
    p.add_argument("--x", required=True, help="base point as 're,im;re,im;re,im'")
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("moduli", help="covering fiber and moduli points of a divisor")
    common(p)
    p.add_argument("--z", default=None, help="optional eigenvalue coordinate 're,im'")
    p.set_defaults(func=cmd_moduli)

    p = sub.add_parser("sample", help="stratum frequencies over a random ensemble")
    common(p, input_file=False)
    p.add_argument("--count", type=int, default=1000, help="number of draws")
    p.add_argument(
        "--ensemble", default="ginibre", choices=ENSEMBLES, help="matrix ensemble"
    )
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run the built-in verification suite")
    common(p, input_file=False)
    p.add_argument("--samples", type=int, default=1000, help="sample count per check")
    p.add_argument("--grid", type=int, default=24, help="clearance grid per angle")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ZeroDivisorError as exc:
        print(f"invalid divisor: {exc}", file=sys.stderr)
        return EXIT_INVALID_DIVISOR
    except DegenerateError as exc:
        print(f"degenerate classification: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
