r"""Matrix-side algebra for divisors on the flag threefold.

A divisor cut out on the incidence variety by a second bilinear form
$\sum_{ij} a_{ij} x_i y_j$ is represented by the traceless part of the
coefficient matrix, taken up to overall complex scale.  Everything the
rest of the package needs is read off the matrix here: the characteristic
cubic $\det(A - zI) = -z^3 - a z + b$, its roots with multiplicities, the
eigenvector points in CP^2_x, and the Jordan-type stratum of the divisor.

All tolerances are relative; ``tol`` defaults to 1e-8 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .projective import ProjectivePoint

_EPS = float(np.finfo(float).eps)

DEFAULT_TOL = 1e-8

#: sphere-class count per stratum label
STRATUM_CLASS_COUNT = {1: 3, 2: 1, 3: 1, 4: 0, 5: 0}


class ZeroDivisorError(ValueError):
    """The section is proportional to the incidence form and cuts no divisor."""


class NotAnEigenvalueError(ValueError):
    """No null direction at the given tolerance."""


class DegenerateError(RuntimeError):
    """Classification margin below tolerance; the report carries both candidates."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class TracelessMatrix:
    """A 3x3 complex matrix with zero trace and positive norm, up to scale."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m.view(float))):
            raise ValueError("matrix entries must be finite")
        norm = float(np.linalg.norm(m))
        if norm == 0.0:
            raise ZeroDivisorError("the zero matrix does not cut a divisor")
        if abs(np.trace(m)) > 1e-12 * norm:
            raise ValueError("matrix is not traceless; use normalize_divisor_matrix")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def norm(self) -> float:
        """Frobenius norm of the stored representative."""
        return float(np.linalg.norm(self.entries))

    def scaled(self, t: complex) -> "TracelessMatrix":
        if t == 0:
            raise ZeroDivisorError("scaling by zero destroys the divisor")
        return TracelessMatrix(self.entries * t)

    def same_divisor_as(self, other: "TracelessMatrix", tol: float = 1e-10) -> bool:
        """Equality up to nonzero complex scale."""
        a = self.entries.ravel() / self.norm
        b = other.entries.ravel() / other.norm
        return 1.0 - abs(np.vdot(a, b)) <= tol


@dataclass(frozen=True)
class CharCubic:
    """Coefficients of det(A - zI) = -z^3 - a z + b for a traceless A."""

    a: complex
    b: complex


@dataclass(frozen=True)
class Eigenvalue:
    value: complex
    alg_mult: int
    geom_mult: int | None = None


@dataclass(frozen=True)
class EigenvalueSet:
    """Clustered roots with multiplicities; ``scale`` feeds relative tolerances."""

    items: tuple[Eigenvalue, ...]
    scale: float

    def __post_init__(self):
        if sum(it.alg_mult for it in self.items) != 3:
            raise ValueError("algebraic multiplicities must sum to 3")

    @property
    def alg_signature(self) -> tuple[int, ...]:
        return tuple(sorted((it.alg_mult for it in self.items), reverse=True))

    def simple(self) -> tuple[Eigenvalue, ...]:
        return tuple(it for it in self.items if it.alg_mult == 1)


@dataclass(frozen=True)
class StratumReport:
    """Jordan-type stratum of a divisor with the data hanging off it."""

    stratum: int
    sphere_class_count: int
    centers: tuple[ProjectivePoint, ...]
    margin: float
    reducible: bool
    eigenvalues: EigenvalueSet
    candidate_strata: tuple[int, ...] = ()


def normalize_divisor_matrix(raw) -> TracelessMatrix:
    """Traceless representative of a raw coefficient matrix.

    Adding a multiple of the identity to the coefficients does not move the
    divisor (the incidence form absorbs it), so the trace is projected away.

    Raises
    ------
    ZeroDivisorError
        If the traceless part vanishes, i.e. the section is a multiple of
        the incidence form.
    """
    m = np.array(raw, dtype=complex)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix entries must be finite")
    shifted = m - (np.trace(m) / 3.0) * np.eye(3)
    # the exact projection leaves rounding dust on the diagonal; remove it
    shifted[np.diag_indices(3)] -= np.trace(shifted) / 3.0
    if np.linalg.norm(shifted) <= 1e-12 * (1.0 + np.linalg.norm(m)):
        raise ZeroDivisorError(
            "section is a multiple of the incidence form (traceless part is zero)"
        )
    return TracelessMatrix(shifted)


def char_cubic(A: TracelessMatrix) -> CharCubic:
    """Coefficients (a, b) with det(A - zI) = -z^3 - a z + b.

    ``a`` is the sum of the three principal 2x2 minors and ``b = det A``.
    Both are evaluated by explicit cofactor formulas, which are exact for
    integer matrices and avoid a pivoted factorization.
    """
    m = A.entries
    a = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    b = (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )
    return CharCubic(complex(a), complex(b))


def discriminant(c: CharCubic) -> complex:
    """Discriminant -4a^3 - 27b^2 of z^3 + a z - b; zero iff a root repeats."""
    return -4.0 * c.a**3 - 27.0 * c.b**2


def _cubic_root_values(c: CharCubic) -> np.ndarray:
    """The three roots of z^3 + a z - b, double roots resolved exactly.

    Companion-matrix roots split an exactly repeated root by ~sqrt(eps),
    which is above any 1e-8 clustering threshold.  A repeated root must sit
    at a critical point +-sqrt(-a/3); when the cubic vanishes there to
    machine precision the root triple is rebuilt from the critical point.
    """
    a, b = c.a, c.b
    zc = np.sqrt(-a / 3.0 + 0j)
    for cand in (zc, -zc):
        residual = abs(cand**3 + a * cand - b)
        size = abs(cand) ** 3 + abs(a) * abs(cand) + abs(b)
        if size > 0.0 and residual <= 64.0 * _EPS * size:
            return np.array([cand, cand, -2.0 * cand])
    if a == 0 and b == 0:
        return np.zeros(3, dtype=complex)
    return np.roots([1.0, 0.0, complex(a), -complex(b)])


def cubic_roots(c: CharCubic, tol: float = DEFAULT_TOL, scale: float | None = None) -> EigenvalueSet:
    """Roots of z^3 + a z - b clustered into eigenvalues with multiplicities.

    Roots within ``tol * (1 + max |root|)`` of each other (transitively) are
    merged; each cluster is reported once, at the arithmetic mean of its
    members, with the cluster size as algebraic multiplicity.  Geometric
    multiplicities are left unset; :func:`classify_stratum` fills them.

    Parameters
    ----------
    c : CharCubic
    tol : float
        Relative clustering tolerance, required to lie in (0, 1e-2).
    scale : float, optional
        Size reference recorded on the result (the frobenius norm when the
        cubic came from a matrix).  Defaults to a homogeneous size of the
        cubic itself.
    """
    if not 0.0 < tol < 1e-2:
        raise ValueError("tol must lie in (0, 1e-2)")
    roots = sorted(_cubic_root_values(c), key=lambda z: (z.real, z.imag))
    threshold = tol * (1.0 + max(abs(r) for r in roots))
    clusters: list[list[complex]] = []
    for r in roots:
        merged = False
        for cl in clusters:
            if any(abs(r - m) <= threshold for m in cl):
                cl.append(r)
                merged = True
                break
        if not merged:
            clusters.append([r])
    # transitive closure: a root can bridge two previously separate clusters
    changed = True
    while changed and len(clusters) > 1:
        changed = False
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                if any(abs(p - q) <= threshold for p in clusters[i] for q in clusters[j]):
                    clusters[i].extend(clusters[j])
                    del clusters[j]
                    changed = True
                    break
            if changed:
                break
    if scale is None:
        scale = 1.0 + max(abs(c.a) ** 0.5, abs(c.b) ** (1.0 / 3.0))
    items = tuple(
        Eigenvalue(value=complex(np.mean(cl)), alg_mult=len(cl))
        for cl in sorted(clusters, key=lambda cl: (np.mean(cl).real, np.mean(cl).imag))
    )
    return EigenvalueSet(items=items, scale=float(scale))


def _null_space(A: TracelessMatrix, lam: complex, tol: float):
    """Singular values of (A^T - lam I) and the basis of its numerical kernel."""
    m = A.entries.T - lam * np.eye(3)
    _, sv, vh = np.linalg.svd(m)
    cutoff = tol * A.norm
    null_mask = sv <= cutoff
    basis = [ProjectivePoint(vh[k].conj()) for k in range(3) if null_mask[k]]
    return sv, basis


def eigen_points(A: TracelessMatrix, lam: complex, tol: float = DEFAULT_TOL) -> list[ProjectivePoint]:
    """Projective solutions x of the row-eigenvector system x . A = lam x.

    In column form these are the null vectors of (A^T - lam I); the basis is
    orthonormal, ordered by ascending singular value, and canonicalized.

    Raises
    ------
    NotAnEigenvalueError
        If the null space is empty at the given tolerance.
    """
    sv, basis = _null_space(A, lam, tol)
    if not basis:
        raise NotAnEigenvalueError(
            f"smallest singular value {sv[-1]:.3e} exceeds {tol:.1e} * norm = {tol * A.norm:.3e}"
        )
    return list(reversed(basis))


def _stratum_from_signature(alg_geoms: list[tuple[int, int]]) -> int:
    """Stratum label from the multiset of (alg_mult, geom_mult) pairs."""
    sig = sorted(alg_geoms, reverse=True)
    top_alg, top_geom = sig[0]
    if top_alg == 1:
        return 1
    if top_alg == 2:
        return 2 if top_geom >= 2 else 3
    if top_geom == 1:
        return 4
    if top_geom == 2:
        return 5
    raise RuntimeError(
        "triple eigenvalue with geometric multiplicity 3 would force the zero matrix"
    )


def classify_stratum(A: TracelessMatrix, tol: float = DEFAULT_TOL) -> StratumReport:
    """Stratum 1-5 of a divisor, with sphere-class count and center points.

    Strata, by the Jordan type of the coefficient matrix:

    1. three simple eigenvalues         -> 3 sphere classes
    2. double eigenvalue, geom mult 2   -> 1 class (reducible divisor)
    3. double eigenvalue, Jordan cell   -> 1 class
    4. triple eigenvalue, one cell      -> no classes
    5. triple eigenvalue, geom mult 2   -> no classes (reducible divisor)

    Each simple eigenvalue contributes the center point of one sphere class:
    its row-eigenvector line in CP^2_x.

    The margin is ``min(smallest eigenvalue gap, smallest rank-deciding
    singular value) / frobenius norm``; a margin below ``tol`` means the
    matrix sits within tolerance of two different strata and raises
    :class:`DegenerateError` whose report lists both candidates.
    """
    cubic = char_cubic(A)
    ev = cubic_roots(cubic, tol, scale=A.norm)
    s = A.norm

    filled: list[Eigenvalue] = []
    centers: list[ProjectivePoint] = []
    rank_margin = np.inf
    rank_flip: tuple[int, int] | None = None  # (item index, geom if flipped)
    for idx, item in enumerate(ev.items):
        sv, basis = _null_space(A, item.value, tol)
        geom = len(basis)
        if geom == 0:
            # the cluster mean of a genuine eigenvalue always carries a kernel;
            # reaching here means the tolerance cannot see it
            raise DegenerateError(
                f"no null direction at eigenvalue {item.value:.6g} within tolerance {tol:.1e}"
            )
        nonnull = sv[sv > tol * s]
        if nonnull.size:
            m = float(nonnull.min() / s)
            if m < rank_margin:
                rank_margin = m
                rank_flip = (idx, geom + 1)
        filled.append(Eigenvalue(item.value, item.alg_mult, geom))
        if item.alg_mult == 1:
            centers.append(basis[0])

    gaps = [
        abs(p.value - q.value)
        for i, p in enumerate(filled)
        for q in filled[i + 1 :]
    ]
    gap_margin = min(gaps) / s if gaps else np.inf
    margin = float(min(gap_margin, rank_margin))

    signature = [(it.alg_mult, it.geom_mult) for it in filled]
    stratum = _stratum_from_signature(signature)
    reducible = any(it.geom_mult >= 2 for it in filled)
    count = STRATUM_CLASS_COUNT[stratum]

    candidates: tuple[int, ...] = ()
    if margin < tol:
        if gap_margin <= rank_margin:
            # merging the closest pair of eigenvalue clusters
            i, j = min(
                ((i, j) for i in range(len(filled)) for j in range(i + 1, len(filled))),
                key=lambda ij: abs(filled[ij[0]].value - filled[ij[1]].value),
            )
            merged = [
                (it.alg_mult, it.geom_mult) for k, it in enumerate(filled) if k not in (i, j)
            ]
            both = filled[i].alg_mult + filled[j].alg_mult
            mean = (
                filled[i].value * filled[i].alg_mult + filled[j].value * filled[j].alg_mult
            ) / both
            _, merged_basis = _null_space(A, mean, tol)
            merged.append((both, max(1, len(merged_basis))))
            alternative = _stratum_from_signature(merged)
        else:
            flipped = list(signature)
            idx, new_geom = rank_flip
            flipped[idx] = (flipped[idx][0], min(new_geom, flipped[idx][0]))
            alternative = _stratum_from_signature(flipped)
        candidates = tuple(sorted({stratum, alternative}))

    report = StratumReport(
        stratum=stratum,
        sphere_class_count=count,
        centers=tuple(centers),
        margin=margin,
        reducible=reducible,
        eigenvalues=EigenvalueSet(items=tuple(filled), scale=s),
        candidate_strata=candidates,
    )
    if margin < tol:
        raise DegenerateError(
            f"margin {margin:.3e} below tolerance {tol:.1e}; "
            f"candidate strata {list(candidates)}",
            report=report,
        )
    return report


def is_reducible(A: TracelessMatrix, tol: float = DEFAULT_TOL) -> bool:
    """True iff some eigenvalue has geometric multiplicity >= 2.

    Equivalently rank(A - lam I) = 1 for some lam: the bilinear form then
    splits off a rank-one factor modulo the incidence form, so the divisor
    is a union of two line-bundle pullbacks.
    """
    ev = cubic_roots(char_cubic(A), tol, scale=A.norm)
    for item in ev.items:
        sv, _ = _null_space(A, item.value, tol)
        if int(np.sum(sv <= tol * A.norm)) >= 2:
            return True
    return False
