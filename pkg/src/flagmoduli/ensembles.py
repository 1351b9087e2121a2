"""Random divisor ensembles for the stratum sampler.

========  ====================================================  ==============
ensemble  construction                                          target stratum
========  ====================================================  ==============
ginibre   complex standard normal entries, trace projected out  1 (generic)
jordan2   conjugated 2x2 Jordan cell plus distinct eigenvalue   3
jordan3   conjugated full nilpotent Jordan cell                 4
rank1     conjugated rank-one nilpotent                         5
========  ====================================================  ==============

The special ensembles conjugate a fixed integer representative by a random
unimodular integer matrix.  The conjugation is then exact in floating point
(inverse = +-adjugate, all products small integers), so the characteristic
cubic of every draw equals that of the representative exactly and the
classification cannot drift to a neighboring stratum.

All randomness comes from a single counter-based 64-bit generator (Philox)
seeded per report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import DEFAULT_TOL, TracelessMatrix, classify_stratum

__all__ = [
    "ENSEMBLES",
    "StratumFrequencyReport",
    "make_rng",
    "standard_normal_complex",
    "ginibre_traceless",
    "random_unimodular",
    "conjugated_representative",
    "draw",
    "sample_stratum_frequencies",
]

_JORDAN2 = np.array([[1, 1, 0], [0, 1, 0], [0, 0, -2]], dtype=np.int64)
_JORDAN3 = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=np.int64)
_RANK1 = np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], dtype=np.int64)

ENSEMBLES = ("ginibre", "jordan2", "jordan3", "rank1")


@dataclass(frozen=True)
class StratumFrequencyReport:
    ensemble: str
    count: int
    seed: int
    frequencies: dict[int, int]
    mean_margin: float

    def __post_init__(self):
        if sum(self.frequencies.values()) != self.count:
            raise ValueError("stratum frequencies must sum to the draw count")


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; the one source of randomness in the package."""
    return np.random.Generator(np.random.Philox(int(seed)))


def standard_normal_complex(rng: np.random.Generator, size) -> np.ndarray:
    """(R + iI)/sqrt(2) with independent standard normal R, I."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)


def ginibre_traceless(rng: np.random.Generator) -> TracelessMatrix:
    """Complex Ginibre 3x3 matrix with the trace projected out.

    Almost surely has three distinct eigenvalues, so draws land in the
    generic stratum with probability one.
    """
    m = standard_normal_complex(rng, (3, 3))
    m -= (np.trace(m) / 3.0) * np.eye(3)
    m[np.diag_indices(3)] -= np.trace(m) / 3.0
    return TracelessMatrix(m)


def random_unimodular(rng: np.random.Generator, steps: int = 6, cmax: int = 2) -> np.ndarray:
    """Random integer matrix of determinant +-1 built from elementary moves.

    Each move adds an integer multiple (|c| <= cmax) of one row to another,
    or swaps two rows with a sign flip.  Entries stay small enough that all
    later products are exact in double precision.
    """
    g = np.eye(3, dtype=np.int64)
    for _ in range(steps):
        i, j = rng.choice(3, size=2, replace=False)
        if rng.integers(0, 8) == 0:
            g[[i, j]] = g[[j, i]]
            g[i] = -g[i]
        else:
            c = int(rng.integers(-cmax, cmax + 1))
            g[i] += c * g[j]
    return g


def _adjugate_int(g: np.ndarray) -> np.ndarray:
    adj = np.empty((3, 3), dtype=np.int64)
    for i in range(3):
        for j in range(3):
            rows = [k for k in range(3) if k != j]
            cols = [k for k in range(3) if k != i]
            m = g[np.ix_(rows, cols)]
            adj[i, j] = (-1) ** (i + j) * (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    return adj


def conjugated_representative(rep: np.ndarray, rng: np.random.Generator) -> TracelessMatrix:
    """g . rep . g^-1 for a random unimodular integer g, exact in floats."""
    g = random_unimodular(rng)
    det = int(round(float(np.linalg.det(g.astype(float)))))
    ginv = _adjugate_int(g) * det  # det is +-1, so inverse = det * adjugate
    return TracelessMatrix((g @ rep @ ginv).astype(complex))


def draw(ensemble: str, rng: np.random.Generator) -> TracelessMatrix:
    """One divisor matrix from the named ensemble."""
    if ensemble == "ginibre":
        return ginibre_traceless(rng)
    if ensemble == "jordan2":
        return conjugated_representative(_JORDAN2, rng)
    if ensemble == "jordan3":
        return conjugated_representative(_JORDAN3, rng)
    if ensemble == "rank1":
        return conjugated_representative(_RANK1, rng)
    raise ValueError(f"unknown ensemble {ensemble!r}; choose from {ENSEMBLES}")


def sample_stratum_frequencies(
    count: int,
    seed: int = 0,
    ensemble: str = "ginibre",
    tol: float = DEFAULT_TOL,
) -> StratumFrequencyReport:
    """Classify ``count`` draws from an ensemble and tally the strata."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if ensemble not in ENSEMBLES:
        raise ValueError(f"unknown ensemble {ensemble!r}; choose from {ENSEMBLES}")
    rng = make_rng(seed)
    frequencies: dict[int, int] = {}
    margin_total = 0.0
    for _ in range(count):
        report = classify_stratum(draw(ensemble, rng), tol)
        frequencies[report.stratum] = frequencies.get(report.stratum, 0) + 1
        margin_total += report.margin
    return StratumFrequencyReport(
        ensemble=ensemble,
        count=count,
        seed=seed,
        frequencies=dict(sorted(frequencies.items())),
        mean_margin=margin_total / count,
    )
