"""Built-in verification suite: the worked example plus the property checks.

Each check is a pure function of (tolerances, seeds) returning a pass/fail
verdict with the measured numbers in the detail string, so a run is fully
reproducible from the report alone.  The CLI prints the table on stderr and
a JSON digest on stdout; the pytest acceptance module asserts the same
bounds independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import (
    DegenerateError,
    char_cubic,
    classify_stratum,
    cubic_roots,
    discriminant,
    eigen_points,
    normalize_divisor_matrix,
)
from .ensembles import ginibre_traceless, make_rng, standard_normal_complex
from .geometry import (
    SPHERES,
    EigenPointError,
    HomologyClass,
    clearance,
    divisor_residual,
    fiber_solve,
    holomorphic_pair_minimum,
    homology_class,
    lagrangian_residual,
)
from .moduli import covering_fiber, moduli_points, ramification_residual
from .projective import ProjectivePoint, incidence_residual

__all__ = [
    "REFERENCE_DIVISOR",
    "REFERENCE_NORMALIZED",
    "STRATUM_REPRESENTATIVES",
    "CheckResult",
    "run_acceptance",
    "format_table",
]

#: second defining form x0 y0 - x1 y1 + i x2 y2 of the worked irreducible divisor
REFERENCE_DIVISOR = np.diag([1.0 + 0j, -1.0 + 0j, 1j])

#: its traceless representative
REFERENCE_NORMALIZED = np.diag([1.0 - 1j / 3.0, -1.0 - 1j / 3.0, 2j / 3.0])

#: one handcrafted divisor per stratum
STRATUM_REPRESENTATIVES = {
    1: REFERENCE_NORMALIZED,
    2: np.diag([1.0 + 0j, 1.0, -2.0]),
    3: np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -2.0]], dtype=complex),
    4: np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]], dtype=complex),
    5: np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]], dtype=complex),
}

_EXPECTED_COUNTS = {1: 3, 2: 1, 3: 1, 4: 0, 5: 0}
_EXPECTED_REDUCIBLE = {1: False, 2: True, 3: False, 4: False, 5: True}

_COORDINATE_POINTS = tuple(ProjectivePoint(np.eye(3)[k]) for k in range(3))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _reference_matrix() -> TracelessMatrix:
    return normalize_divisor_matrix(REFERENCE_DIVISOR)


def check_reference_classification(tol: float) -> CheckResult:
    """Worked example: normalization, stratum 1, coordinate-point centers."""
    A = normalize_divisor_matrix(REFERENCE_DIVISOR)
    norm_err = float(np.max(np.abs(A.entries - REFERENCE_NORMALIZED)))
    report = classify_stratum(A, tol)
    centers_ok = len(report.centers) == 3 and all(
        any(c.is_same_point(e, 1e-10) for c in report.centers)
        for e in _COORDINATE_POINTS
    )
    ok = (
        norm_err <= 1e-10
        and report.stratum == 1
        and report.sphere_class_count == 3
        and centers_ok
    )
    return CheckResult(
        "reference-divisor-classification",
        ok,
        f"normalization error {norm_err:.2e}, stratum {report.stratum}, "
        f"count {report.sphere_class_count}, coordinate centers: {centers_ok}",
    )


def check_clearance(tol: float, grid: int, bound: float = 0.4) -> CheckResult:
    """Disjointness: every sphere clears the reference divisor by > bound."""
    A = _reference_matrix()
    values = []
    for sphere in SPHERES:
        try:
            values.append(clearance(A, sphere, grid=grid, tol=tol))
        except Exception as exc:  # Inconclusive counts as a failure here
            return CheckResult(
                "sphere-disjointness-clearance", False, f"sphere {sphere.index}: {exc}"
            )
    ok = all(v > bound for v in values)
    shown = ", ".join(f"S{i}={v:.6f}" for i, v in enumerate(values))
    return CheckResult(
        "sphere-disjointness-clearance", ok, f"{shown} (required > {bound})"
    )


def check_lagrangian(samples: int, seed: int) -> CheckResult:
    """Pullback of the symplectic form vanishes; the evaluator is nondegenerate."""
    residuals = [lagrangian_residual(s, samples, seed) for s in SPHERES]
    floor = holomorphic_pair_minimum(samples, seed)
    ok = all(r < 1e-10 for r in residuals) and floor > 1e-2
    shown = ", ".join(f"S{i}={r:.2e}" for i, r in enumerate(residuals))
    return CheckResult(
        "lagrangian-certification",
        ok,
        f"residuals {shown} (< 1e-10), holomorphic floor {floor:.4f} (> 1e-2)",
    )


def check_homology(tol: float) -> CheckResult:
    """Classes (1,0), (0,1), (1,1) for the three spheres, pairwise distinct."""
    A = _reference_matrix()
    centers = list(classify_stratum(A, tol).centers)
    classes = [homology_class(s, centers, tol) for s in SPHERES]
    expected = [HomologyClass(1, 0), HomologyClass(0, 1), HomologyClass(1, 1)]
    ok = classes == expected and len(set(classes)) == 3
    return CheckResult(
        "homology-classes",
        ok,
        f"classes {[tuple(c) for c in classes]} (expected {[tuple(e) for e in expected]})",
    )


def check_stratum_table(tol: float) -> CheckResult:
    """The five handcrafted representatives hit strata 1-5 with the right data."""
    rows = []
    ok = True
    for stratum, raw in STRATUM_REPRESENTATIVES.items():
        report = classify_stratum(normalize_divisor_matrix(raw), tol)
        good = (
            report.stratum == stratum
            and report.sphere_class_count == _EXPECTED_COUNTS[stratum]
            and report.reducible == _EXPECTED_REDUCIBLE[stratum]
        )
        ok = ok and good
        rows.append(f"{stratum}:{report.stratum}/{report.sphere_class_count}"
                    f"/{'r' if report.reducible else '-'}")
    return CheckResult(
        "stratum-table", ok, "expected:got/count/reducible " + " ".join(rows)
    )


def check_moduli_consistency(samples: int, seed: int, tol: float) -> CheckResult:
    """Moduli points = sphere classes; generic fibers have 3 unramified points."""
    rng = make_rng(seed + 1)
    worst_delta = np.inf
    for k in range(samples):
        A = ginibre_traceless(rng)
        report = classify_stratum(A, tol)
        pts = moduli_points(A, tol)
        if len(pts) != report.sphere_class_count:
            return CheckResult(
                "moduli-consistency",
                False,
                f"sample {k}: {len(pts)} moduli points vs count {report.sphere_class_count}",
            )
        fiber = covering_fiber(A, tol)
        if len(fiber) != 3:
            return CheckResult(
                "moduli-consistency", False, f"sample {k}: fiber size {len(fiber)} != 3"
            )
        worst_delta = min(
            worst_delta, min(ramification_residual(A, p.z, tol) for p in fiber)
        )
    ok = worst_delta > 1e-6
    return CheckResult(
        "moduli-consistency",
        ok,
        f"{samples} samples consistent; min ramification residual {worst_delta:.3e} (> 1e-6)",
    )


def check_discriminant_oracle(samples: int, seed: int) -> CheckResult:
    """|disc| < 1e-8 * scale agrees with brute-force root clustering everywhere."""
    rng = make_rng(seed + 2)
    matrices = [ginibre_traceless(rng) for _ in range(samples)]
    matrices += [normalize_divisor_matrix(m) for m in STRATUM_REPRESENTATIVES.values()]
    for k, A in enumerate(matrices):
        c = char_cubic(A)
        small_disc = abs(discriminant(c)) < 1e-8 * A.norm**6
        roots = np.roots([1.0, 0.0, c.a, -c.b])
        gap = min(
            abs(roots[i] - roots[j]) for i in range(3) for j in range(i + 1, 3)
        )
        repeated = gap <= 1e-6 * (1.0 + max(abs(r) for r in roots))
        if small_disc != repeated:
            return CheckResult(
                "discriminant-oracle",
                False,
                f"matrix {k}: |disc| small = {small_disc} but repeated root = {repeated}",
            )
    return CheckResult(
        "discriminant-oracle",
        True,
        f"{len(matrices)} matrices: vanishing discriminant iff clustered repeated root",
    )


def check_fiber_solver(samples: int, seed: int, tol: float) -> CheckResult:
    """Residuals below 1e-10 off the centers; the solver refuses every center."""
    rng = make_rng(seed + 3)
    worst = 0.0
    kept = 0
    while kept < samples:
        A = ginibre_traceless(rng)
        x = ProjectivePoint(standard_normal_complex(rng, 3))
        margin = np.linalg.norm(np.cross(x.coords, A.entries.T @ x.coords)) / A.norm
        if margin <= 1e-4:
            continue
        kept += 1
        p = fiber_solve(A, x, tol)
        worst = max(worst, incidence_residual(p), divisor_residual(A, p))
    if worst >= 1e-10:
        return CheckResult(
            "fiber-solver", False, f"worst defining-equation residual {worst:.3e} >= 1e-10"
        )

    center_matrices = [normalize_divisor_matrix(m) for m in STRATUM_REPRESENTATIVES.values()]
    center_matrices += [ginibre_traceless(rng) for _ in range(25)]
    tried = 0
    for A in center_matrices:
        for item in cubic_roots(char_cubic(A), tol, scale=A.norm).simple():
            for center in eigen_points(A, item.value, tol):
                tried += 1
                try:
                    fiber_solve(A, center, tol)
                except EigenPointError:
                    continue
                return CheckResult(
                    "fiber-solver",
                    False,
                    f"no EigenPoint error at a simple-eigenvalue center of {A.entries!r}",
                )
    return CheckResult(
        "fiber-solver",
        True,
        f"{samples} generic fibers with residual <= {worst:.2e}; "
        f"{tried} centers all refused",
    )


def check_equivariance(trials: int, seed: int, tol: float) -> CheckResult:
    """Scaling law (t^2 a, t^3 b); stratum invariant under scaling and similarity."""
    rng = make_rng(seed + 4)
    for k in range(trials):
        A = ginibre_traceless(rng)
        c = char_cubic(A)
        t = complex(*rng.standard_normal(2))
        while abs(t) < 0.1:
            t = complex(*rng.standard_normal(2))
        scaled = char_cubic(A.scaled(t))
        err_a = abs(scaled.a - t**2 * c.a) / (abs(t) ** 2 * (1.0 + abs(c.a)))
        err_b = abs(scaled.b - t**3 * c.b) / (abs(t) ** 3 * (1.0 + abs(c.b)))
        if err_a > 1e-8 or err_b > 1e-8:
            return CheckResult(
                "equivariance", False, f"trial {k}: scaling law errors {err_a:.2e}, {err_b:.2e}"
            )

        base = classify_stratum(A, tol)
        under_scale = classify_stratum(A.scaled(t), tol)
        g = standard_normal_complex(rng, (3, 3))
        while np.linalg.cond(g) > 50.0:
            g = standard_normal_complex(rng, (3, 3))
        conjugated = normalize_divisor_matrix(g @ A.entries @ np.linalg.inv(g))
        under_similarity = classify_stratum(conjugated, tol)
        if not (
            base.stratum == under_scale.stratum == under_similarity.stratum
            and base.sphere_class_count
            == under_scale.sphere_class_count
            == under_similarity.sphere_class_count
        ):
            return CheckResult(
                "equivariance",
                False,
                f"trial {k}: strata {base.stratum}/{under_scale.stratum}/"
                f"{under_similarity.stratum} disagree",
            )
    return CheckResult(
        "equivariance", True, f"{trials} scaling and similarity trials within 1e-8"
    )


def run_acceptance(
    tol: float = 1e-8,
    samples: int = 1000,
    grid: int = 24,
    seed: int = 0,
    clearance_bound: float = 0.4,
) -> list[CheckResult]:
    """Run every acceptance check; order and names are stable."""
    try:
        results = [
            check_reference_classification(tol),
            check_clearance(tol, grid, clearance_bound),
            check_lagrangian(samples, seed),
            check_homology(tol),
            check_stratum_table(tol),
            check_moduli_consistency(samples, seed, tol),
            check_discriminant_oracle(samples, seed),
            check_fiber_solver(samples, seed, tol),
            check_equivariance(200, seed, tol),
        ]
    except DegenerateError as exc:  # classification should never degenerate here
        results = [CheckResult("internal", False, f"degenerate classification: {exc}")]
    return results


def format_table(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [
        f"{'PASS' if r.passed else 'FAIL'}  {r.name.ljust(width)}  {r.detail}"
        for r in results
    ]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
