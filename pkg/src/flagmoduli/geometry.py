r"""Geometry on the incidence variety: spheres, residuals, the fiber solver.

The flag threefold sits inside CP^2_x x CP^2_y as the incidence hypersurface
$\sum_i x_i y_i = 0$, carrying the sum of the two Fubini-Study forms.  For
each index $i$ there is a lagrangian 3-sphere obtained by pairing $[x]$ with
the sign-twisted conjugate point $[\epsilon \odot \bar x]$, the twist sign
sitting at slot $i$.  This module evaluates divisor residuals on the variety,
solves for the divisor point over a given $[x]$, certifies the lagrangian
property of the spheres numerically, measures their clearance from a divisor,
and assigns homology classes to sphere classes via the three center points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .eigen import DEFAULT_TOL, TracelessMatrix
from .projective import FlagPoint, ProjectivePoint, incidence_residual

__all__ = [
    "GZSphere",
    "SPHERES",
    "HomologyClass",
    "EigenPointError",
    "InconclusiveError",
    "AmbiguousSignError",
    "incidence_residual",
    "divisor_residual",
    "fiber_solve",
    "lagrangian_residual",
    "holomorphic_pair_minimum",
    "clearance",
    "separating_function",
    "homology_class",
]


class EigenPointError(ValueError):
    """The fiber over this base point degenerates: [x] is an eigenvector line."""


class InconclusiveError(RuntimeError):
    """Refined minimum too small to certify disjointness, too large for contact."""

    def __init__(self, message, minimum=None):
        super().__init__(message)
        self.minimum = minimum


class AmbiguousSignError(RuntimeError):
    """A center sits too close to the sphere's image to take a sign."""


class HomologyClass(tuple):
    """An integer pair (m, n) in the rank-two middle homology of a complement."""

    def __new__(cls, m: int, n: int):
        return super().__new__(cls, (int(m), int(n)))

    @property
    def m(self) -> int:
        return self[0]

    @property
    def n(self) -> int:
        return self[1]


@dataclass(frozen=True)
class GZSphere:
    r"""Gelfand-Tsetlin type lagrangian sphere with the sign twist at ``index``.

    The sphere is the set of pairs $[x] \times [\epsilon \odot \bar x]$ with
    $\epsilon_j = +1$ except $\epsilon_i = -1$; incidence forces
    $|x_i|^2 = \sum_{j \ne i} |x_j|^2$, a 3-sphere.
    """

    index: int
    signs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.index not in (0, 1, 2):
            raise ValueError("sphere index must be 0, 1 or 2")
        eps = np.ones(3)
        eps[self.index] = -1.0
        eps.flags.writeable = False
        object.__setattr__(self, "signs", eps)

    @property
    def slots(self) -> tuple[int, int]:
        """The two coordinate slots complementary to the sphere index."""
        a, b = (j for j in range(3) if j != self.index)
        return a, b

    def embed_coords(self, u) -> tuple[np.ndarray, np.ndarray]:
        """Raw homogeneous representatives (x, y) for a unit u in C^2."""
        u = np.asarray(u, dtype=complex).reshape(2)
        x = np.empty(3, dtype=complex)
        x[self.index] = 1.0
        a, b = self.slots
        x[a], x[b] = u[0], u[1]
        y = self.signs * np.conj(x)
        return x, y

    def embed(self, u) -> FlagPoint:
        """Point of the sphere over a unit vector u in C^2 (bijective on S^3)."""
        u = np.asarray(u, dtype=complex).reshape(2)
        if abs(np.linalg.norm(u) - 1.0) > 1e-9:
            raise ValueError("u must be a unit vector in C^2")
        x, y = self.embed_coords(u)
        return FlagPoint(ProjectivePoint(x), ProjectivePoint(y))


SPHERES = (GZSphere(0), GZSphere(1), GZSphere(2))


def divisor_residual(A: TracelessMatrix, p: FlagPoint) -> float:
    """|sum_ij a_ij x_i y_j| on unit representatives, per unit of matrix norm."""
    x, y = p.x.coords, p.y.coords
    return float(abs(np.einsum("ij,i,j->", A.entries, x, y)) / A.norm)


def fiber_solve(A: TracelessMatrix, x: ProjectivePoint, tol: float = DEFAULT_TOL) -> FlagPoint:
    """The unique divisor point over [x], when the fiber meets it once.

    Over [x] the divisor imposes two linear conditions on y: incidence with x
    and incidence with the transformed row x.A.  Their common solution is the
    complex cross product y = x ^ (A^T x), with no conjugation anywhere.

    Raises
    ------
    EigenPointError
        If |x ^ (A^T x)| <= tol * |A|: then [x] is an eigenvector line of the
        row system and the whole fiber lies on the divisor (or misses the
        section), so no single point can be returned.
    """
    xv = x.coords
    w = A.entries.T @ xv
    y = np.cross(xv, w)
    margin = float(np.linalg.norm(y))
    if margin <= tol * A.norm:
        raise EigenPointError(
            f"[x] is an eigen-point (|x ^ A^T x| = {margin:.3e} <= {tol:.1e} * |A|)"
        )
    return FlagPoint(x, ProjectivePoint(y))


def _fubini_study(z: np.ndarray, xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    r"""Fubini-Study 2-form on the affine chart C^2, vectorized over rows.

    $\omega(\xi, \eta) = \mathrm{Im}\big[((1+|z|^2)\langle\eta,\xi\rangle -
    \langle\eta,z\rangle\langle z,\xi\rangle) / (1+|z|^2)^2\big]$ with
    $\langle a,b\rangle = \sum_k a_k \bar b_k$.  Sign and constant follow the
    convention that $\omega(\xi, i\xi) > 0$.
    """
    h = 1.0 + np.sum(z * np.conj(z), axis=-1).real
    t1 = np.sum(eta * np.conj(xi), axis=-1)
    t2 = np.sum(eta * np.conj(z), axis=-1) * np.sum(z * np.conj(xi), axis=-1)
    return ((h * t1 - t2) / h**2).imag


def _sphere_samples(sample_count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded sample of S^3 in C^2 (counter-based generator, reproducible)."""
    rng = np.random.Generator(np.random.Philox(seed))
    w = rng.standard_normal((sample_count, 4))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    return w[:, 0] + 1j * w[:, 1], w[:, 2] + 1j * w[:, 3]


def _tangent_frame(u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quaternionic parallelization {iu, ju, ku} of S^3 at each row of u."""
    t1 = 1j * u
    t2 = np.stack([-np.conj(u[:, 1]), np.conj(u[:, 0])], axis=1)
    t3 = 1j * t2
    return t1, t2, t3


def lagrangian_residual(sphere: GZSphere, sample_count: int = 1000, seed: int = 0) -> float:
    """Largest sampled value of the pulled-back symplectic form on the sphere.

    In the chart dividing by the sphere-index coordinate the x-side of the
    sphere is the unit u in C^2 and the y-side is the antiholomorphic map
    u -> -conj(u), so each tangent pair (xi, eta) contributes
    omega(u; xi, eta) + omega(-conj u; -conj xi, -conj eta).  The y-side
    tangents are the exact differential of the conjugation, not finite
    differences.  A lagrangian sphere makes every term cancel; the return
    value is the max of |sum| over ``sample_count`` points and the three
    pairs of the parallelizing frame.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    u0, u1 = _sphere_samples(sample_count, seed)
    u = np.stack([u0, u1], axis=1)
    t1, t2, t3 = _tangent_frame(u)
    worst = 0.0
    zy = -np.conj(u)
    for xi, eta in ((t1, t2), (t1, t3), (t2, t3)):
        wx = _fubini_study(u, xi, eta)
        wy = _fubini_study(zy, -np.conj(xi), -np.conj(eta))
        worst = max(worst, float(np.max(np.abs(wx + wy))))
    return worst


def holomorphic_pair_minimum(sample_count: int = 1000, seed: int = 0) -> float:
    """Smallest sampled omega(u; xi, i xi) on the x-factor alone.

    Nondegeneracy control for the evaluator behind
    :func:`lagrangian_residual`: a Kahler form is strictly positive on
    holomorphic pairs, so this must come out well above zero.
    """
    u0, u1 = _sphere_samples(sample_count, seed)
    u = np.stack([u0, u1], axis=1)
    _, t2, _ = _tangent_frame(u)
    vals = _fubini_study(u, t2, 1j * t2)
    return float(np.min(vals))


def _sphere_residual_raw(A: TracelessMatrix, sphere: GZSphere, u0, u1) -> np.ndarray:
    """Vectorized divisor residual over sphere points given chart values."""
    X = np.empty((np.size(u0), 3), dtype=complex)
    a, b = sphere.slots
    X[:, sphere.index] = 1.0
    X[:, a] = np.ravel(u0)
    X[:, b] = np.ravel(u1)
    Y = sphere.signs * np.conj(X)
    vals = np.einsum("ij,ni,nj->n", A.entries, X, Y)
    # |x| = |y| = sqrt(2) on the sphere, so unit-normalizing divides by 2
    return np.abs(vals) / (2.0 * A.norm)


def clearance(
    A: TracelessMatrix,
    sphere: GZSphere,
    grid: int = 24,
    tol: float = DEFAULT_TOL,
) -> float:
    """Minimum divisor residual over the sphere; positive certifies S and D disjoint.

    Scans a grid^3 lattice in Hopf angles (eta, alpha, beta) on S^3 and
    refines from the best lattice point by Nelder-Mead.  The result is a
    numerical minimum, not a certified lower bound.

    Raises
    ------
    InconclusiveError
        If the refined minimum lands in (0, 10 * tol): too small to certify
        disjointness, not exactly zero either.
    """
    if grid < 8:
        raise ValueError("grid must be at least 8")
    eta = np.linspace(0.0, np.pi / 2.0, grid)
    circle = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    E, Al, Be = np.meshgrid(eta, circle, circle, indexing="ij")
    u0 = (np.cos(E) * np.exp(1j * Al)).ravel()
    u1 = (np.sin(E) * np.exp(1j * Be)).ravel()
    vals = _sphere_residual_raw(A, sphere, u0, u1)
    k = int(np.argmin(vals))
    best = float(vals[k])

    def objective(t):
        e, al, be = t
        return float(
            _sphere_residual_raw(
                A, sphere, np.cos(e) * np.exp(1j * al), np.sin(e) * np.exp(1j * be)
            )[0]
        )

    start = np.array([E.ravel()[k], Al.ravel()[k], Be.ravel()[k]])
    result = minimize(
        objective,
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 2000},
    )
    minimum = min(best, float(result.fun))
    if 0.0 < minimum < 10.0 * tol:
        raise InconclusiveError(
            f"refined minimum {minimum:.3e} in (0, {10 * tol:.1e}): neither "
            "disjointness nor intersection is certified",
            minimum=minimum,
        )
    return minimum


def separating_function(index: int, p: ProjectivePoint) -> float:
    """Value in [-1, 1] whose sign separates inside/outside of a sphere image.

    For the sphere with twist at ``index`` the image under the projection to
    CP^2_x is the zero level of
    (sum_{j != index} |x_j|^2 - |x_index|^2) / sum_j |x_j|^2,
    which is -1 exactly at the coordinate point of ``index`` and positive on
    the opposite coordinate line.
    """
    if index not in (0, 1, 2):
        raise ValueError("index must be 0, 1 or 2")
    c = p.coords
    total = float(np.sum(np.abs(c) ** 2))
    return float((total - 2.0 * abs(c[index]) ** 2) / total)


def homology_class(
    sphere: GZSphere,
    centers: list[ProjectivePoint],
    tol: float = DEFAULT_TOL,
) -> HomologyClass:
    """Homology class of a sphere in the complement of a three-center divisor.

    The sphere's projection separates exactly one of the three centers from
    the other two; which one is read off the sign of
    :func:`separating_function` at each center.  Classes are emitted in a
    fixed basis via the deterministic ordering of canonical center
    representatives: first center (1,0), second (0,1), third (1,1).

    Raises
    ------
    AmbiguousSignError
        If some sign is smaller than ``tol`` in absolute value, or if the
        sign pattern does not isolate a single center.
    """
    if len(centers) != 3:
        raise ValueError("expected the three centers of a three-class divisor")
    values = [separating_function(sphere.index, c) for c in centers]
    if any(abs(v) < tol for v in values):
        raise AmbiguousSignError(
            f"separating values {values} too close to zero at tolerance {tol:.1e}"
        )
    negatives = [k for k, v in enumerate(values) if v < 0.0]
    if len(negatives) != 1:
        raise AmbiguousSignError(
            f"sign pattern {values} does not isolate a single center"
        )
    order = sorted(range(3), key=lambda k: centers[k].sort_key())
    position = order.index(negatives[0])
    return (HomologyClass(1, 0), HomologyClass(0, 1), HomologyClass(1, 1))[position]
