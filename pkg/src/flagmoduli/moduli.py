r"""The eigenvalue cubic over the space of divisors and its ramification locus.

Pairs (A, z) of a traceless coefficient matrix and an eigenvalue coordinate,
taken up to joint scaling, fill out a cubic hypersurface cut by
$\det(A - zI) = 0$ inside CP^8.  Forgetting z is a 3:1 branched covering of
the divisor space; the branch locus is where z is a multiple eigenvalue,
detected by the derivative condition $3z^2 + a = 0$.  Points of the cubic
away from the ramification locus are exactly the simple eigenvalues, one per
sphere class in the divisor complement; both membership tests are exposed as
scale-invariant residuals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import DEFAULT_TOL, TracelessMatrix, char_cubic, cubic_roots

__all__ = [
    "ModuliPoint",
    "NotOnCubicError",
    "cubic_residual",
    "ramification_residual",
    "covering_fiber",
    "moduli_points",
]


class NotOnCubicError(ValueError):
    """The pair (A, z) does not lie on the eigenvalue cubic at tolerance."""


@dataclass(frozen=True)
class ModuliPoint:
    """A pair (A, z) on the eigenvalue cubic, up to joint complex scaling."""

    matrix: TracelessMatrix
    z: complex


def _det3(m: np.ndarray) -> complex:
    """Determinant by cofactors; exact for integer entries, no pivoting."""
    return complex(
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def _size(A: TracelessMatrix, z: complex) -> float:
    # spectral norm pairs with |z| on the same scale as the eigenvalues
    return float(np.linalg.norm(A.entries, 2) + abs(z))


def cubic_residual(A: TracelessMatrix, z: complex) -> float:
    """|det(A - zI)| / (|A| + |z|)^3, invariant under joint scaling of (A, z)."""
    value = _det3(A.entries - z * np.eye(3))
    return float(abs(value) / _size(A, z) ** 3)


def ramification_residual(A: TracelessMatrix, z: complex, tol: float = DEFAULT_TOL) -> float:
    """|3 z^2 + a| / (|A| + |z|)^2; zero iff z is a multiple eigenvalue of A.

    Raises
    ------
    NotOnCubicError
        If (A, z) fails the membership residual of the cubic at ``tol``:
        the ramification question only makes sense on the cubic.
    """
    on_residual = cubic_residual(A, z)
    if on_residual > tol:
        raise NotOnCubicError(
            f"(A, z) is off the eigenvalue cubic: residual {on_residual:.3e} > {tol:.1e}"
        )
    a = char_cubic(A).a
    return float(abs(3.0 * z * z + a) / _size(A, z) ** 2)


def covering_fiber(A: TracelessMatrix, tol: float = DEFAULT_TOL) -> list[ModuliPoint]:
    """The fiber of the 3:1 covering over a divisor: its distinct eigenvalues."""
    ev = cubic_roots(char_cubic(A), tol, scale=A.norm)
    return [ModuliPoint(matrix=A, z=item.value) for item in ev.items]


def moduli_points(A: TracelessMatrix, tol: float = DEFAULT_TOL) -> list[ModuliPoint]:
    """Fiber points away from the ramification locus: the simple eigenvalues.

    One point per sphere class in the divisor complement, so the length
    always matches the stratum's sphere-class count (3, 1 or 0).
    """
    ev = cubic_roots(char_cubic(A), tol, scale=A.norm)
    return [ModuliPoint(matrix=A, z=item.value) for item in ev.simple()]
