"""Points of the projective planes CP^2_x, CP^2_y and of the incidence variety.

A point is stored as a canonicalized vector of three homogeneous coordinates:
unit Euclidean norm, with the first coordinate of largest modulus rotated to
be real and positive.  Canonical representatives make equality-up-to-scale a
plain numerical comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def canonical_coords(v: np.ndarray) -> np.ndarray:
    """Canonical homogeneous representative of a nonzero vector in C^3."""
    v = np.asarray(v, dtype=complex).reshape(3)
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError("projective point needs a finite nonzero coordinate vector")
    k = int(np.argmax(np.abs(v)))
    phase = v[k] / abs(v[k])
    w = v * np.conj(phase) / norm
    # kill the rounding dust in the pivot's imaginary part
    w[k] = w[k].real
    w.flags.writeable = False
    return w


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of CP^2 held by its canonical coordinate vector."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", canonical_coords(self.coords))

    def overlap(self, other: "ProjectivePoint") -> float:
        """|<p, q>| for the unit representatives; 1 exactly on the same line."""
        return float(abs(np.vdot(self.coords, other.coords)))

    def is_same_point(self, other: "ProjectivePoint", tol: float = 1e-10) -> bool:
        return 1.0 - self.overlap(other) <= tol

    def sort_key(self) -> tuple:
        """Deterministic total order on canonical representatives.

        Descending lexicographic on (Re c0, Im c0, Re c1, ...), so the three
        coordinate points order as [1:0:0] < [0:1:0] < [0:0:1].
        """
        return tuple(t for c in self.coords for t in (-c.real, -c.imag))

    def __repr__(self):
        inner = " : ".join(f"{c.real:+.6f}{c.imag:+.6f}j" for c in self.coords)
        return f"[{inner}]"


@dataclass(frozen=True)
class FlagPoint:
    """A pair ([x], [y]) subject to the incidence relation sum_i x_i y_i = 0."""

    x: ProjectivePoint
    y: ProjectivePoint

    def incidence_value(self) -> complex:
        return complex(np.sum(self.x.coords * self.y.coords))


def incidence_residual(p: FlagPoint) -> float:
    """|sum_i x_i y_i| on unit representatives; 0 for points of the flag variety."""
    return abs(p.incidence_value())
