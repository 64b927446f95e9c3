"""Covariance data model and closed-form Gaussian information measures.

Everything downstream treats a zero-mean jointly Gaussian vector as fully
described by its covariance, so this module owns the validated covariance
containers plus the entropy and mutual-information formulas, and it fixes
the numerical conventions used everywhere else:

* symmetry is enforced up to ``1e-10 * (1 + max|Q|)`` and computations see
  the symmetrized matrix ``(Q + Q.T) / 2``;
* strict positive definiteness means every eigenvalue exceeds
  ``1e-10 * lambda_max``;
* determinants are accumulated in the log domain from eigenvalues of the
  symmetrized matrix, never as raw products;
* rates and information quantities are nats internally, and ``math.inf``
  is a legitimate value (singular joint law with nonsingular marginals).
  Unit conversion is a presentation concern handled by the CLI.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    InconsistentIndices,
    NotPositiveDefinite,
)

if TYPE_CHECKING:  # pragma: no cover
    from .cvf import IndexSextuple

LN2 = math.log(2.0)
LOG_2PIE = math.log(2.0 * math.pi) + 1.0


def symmetry_tolerance(q: np.ndarray) -> float:
    """Scale-relative symmetry tolerance, ``1e-10 * (1 + max|q|)``."""
    return 1e-10 * (1.0 + float(np.max(np.abs(q), initial=0.0)))


def symmetrize(q: np.ndarray) -> np.ndarray:
    return 0.5 * (q + q.T)


def _eig_floor(eigenvalues: np.ndarray) -> float:
    # eigvalsh sorts ascending, so the scale is the last entry
    top = float(eigenvalues[-1]) if eigenvalues.size else 0.0
    return 1e-10 * max(top, 0.0)


def logdet_or_neginf(q: np.ndarray) -> float:
    """Log-determinant of a PSD matrix, ``-inf`` if numerically singular."""
    q = np.asarray(q, dtype=float)
    if q.size == 0:
        return 0.0
    w = np.linalg.eigvalsh(symmetrize(q))
    if w[0] <= _eig_floor(w):
        return -math.inf
    return float(np.sum(np.log(w)))


def logdet_pd(q: np.ndarray) -> float:
    """Log-determinant of a strictly positive definite matrix."""
    ld = logdet_or_neginf(q)
    if not math.isfinite(ld):
        raise NotPositiveDefinite("matrix is numerically singular")
    return ld


@dataclass(frozen=True, eq=False)
class CovMatrix:
    """Dense real covariance matrix.

    The constructor only enforces shape; :func:`validate_covariance` is the
    gatekeeper for symmetry and positive definiteness.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"covariance must be square, got shape {a.shape}")
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _as_matrix(q) -> np.ndarray:
    if isinstance(q, CovMatrix):
        return q.entries
    a = np.asarray(q, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def validate_covariance(q, strict: bool = False) -> CovMatrix:
    """Check symmetry (always) and strict positive definiteness (``strict``).

    Returns the symmetrized :class:`CovMatrix`; asymmetry beyond tolerance
    raises :class:`AsymmetricMatrix`, an eigenvalue at or below the floor
    raises :class:`NotPositiveDefinite`.
    """
    a = _as_matrix(q)
    skew = float(np.max(np.abs(a - a.T), initial=0.0))
    if skew > symmetry_tolerance(a):
        raise AsymmetricMatrix(
            f"max|Q - Q.T| = {skew:.3e} exceeds tolerance {symmetry_tolerance(a):.3e}"
        )
    a = symmetrize(a)
    if strict and a.size:
        w = np.linalg.eigvalsh(a)
        if w[0] <= _eig_floor(w):
            raise NotPositiveDefinite(
                f"min eigenvalue {w[0]:.3e} at or below floor {_eig_floor(w):.3e}"
            )
    return CovMatrix(a)


@dataclass(frozen=True, eq=False)
class JointGaussianPair:
    """Zero-mean pair (Y1, Y2) described by the blocks of its joint covariance."""

    q11: CovMatrix
    q22: CovMatrix
    q12: np.ndarray

    def __post_init__(self):
        q11 = self.q11 if isinstance(self.q11, CovMatrix) else CovMatrix(self.q11)
        q22 = self.q22 if isinstance(self.q22, CovMatrix) else CovMatrix(self.q22)
        q12 = np.array(self.q12, dtype=float)
        if q12.shape != (q11.dim, q22.dim):
            raise DimensionMismatch(
                f"cross block must be {(q11.dim, q22.dim)}, got {q12.shape}"
            )
        object.__setattr__(self, "q11", q11)
        object.__setattr__(self, "q22", q22)
        object.__setattr__(self, "q12", q12)

    @property
    def p1(self) -> int:
        return self.q11.dim

    @property
    def p2(self) -> int:
        return self.q22.dim

    def joint(self) -> np.ndarray:
        return np.block([[self.q11.entries, self.q12], [self.q12.T, self.q22.entries]])

    @classmethod
    def from_joint(cls, q, p1: int) -> "JointGaussianPair":
        a = _as_matrix(q)
        if not 0 < p1 < a.shape[0]:
            raise DimensionMismatch(f"p1 = {p1} does not split a {a.shape[0]}-dim matrix")
        return cls(CovMatrix(a[:p1, :p1]), CovMatrix(a[p1:, p1:]), a[:p1, p1:])

    def validated(self) -> "JointGaussianPair":
        """Symmetrize and require the assembled joint covariance strictly PD."""
        c = validate_covariance(self.joint(), strict=True)
        return JointGaussianPair.from_joint(c.entries, self.p1)


@dataclass(frozen=True, eq=False)
class GaussianTriple:
    """A pair (Y1, Y2) together with a third jointly Gaussian vector W."""

    pair: JointGaussianPair
    qw: CovMatrix
    q1w: np.ndarray
    q2w: np.ndarray

    def __post_init__(self):
        qw = self.qw if isinstance(self.qw, CovMatrix) else CovMatrix(self.qw)
        q1w = np.array(self.q1w, dtype=float)
        q2w = np.array(self.q2w, dtype=float)
        if q1w.shape != (self.pair.p1, qw.dim) or q2w.shape != (self.pair.p2, qw.dim):
            raise DimensionMismatch("state cross blocks disagree with pair/state dims")
        object.__setattr__(self, "qw", qw)
        object.__setattr__(self, "q1w", q1w)
        object.__setattr__(self, "q2w", q2w)

    @property
    def n(self) -> int:
        return self.qw.dim

    def joint(self) -> np.ndarray:
        p = self.pair
        return np.block(
            [
                [p.q11.entries, p.q12, self.q1w],
                [p.q12.T, p.q22.entries, self.q2w],
                [self.q1w.T, self.q2w.T, self.qw.entries],
            ]
        )


def gaussian_entropy(q) -> float:
    """Differential entropy in nats, ``0.5 logdet Q + (dim/2) log(2 pi e)``."""
    c = validate_covariance(q, strict=True)
    if c.dim == 0:
        return 0.0
    return 0.5 * logdet_pd(c.entries) + 0.5 * c.dim * LOG_2PIE


def gaussian_mi(q_joint, split: tuple[int, int]) -> float:
    """Mutual information between the two sub-vectors of a joint covariance.

    ``split = (nx, ny)`` partitions the leading ``nx`` rows from the rest.
    Marginal blocks must be strictly positive definite; a singular joint
    covariance with valid marginals yields ``math.inf``.
    """
    c = validate_covariance(q_joint)
    nx, ny = int(split[0]), int(split[1])
    if nx <= 0 or ny <= 0 or nx + ny != c.dim:
        raise DimensionMismatch(f"split {split} does not partition dim {c.dim}")
    qx = c.entries[:nx, :nx]
    qy = c.entries[nx:, nx:]
    ldx = logdet_or_neginf(qx)
    ldy = logdet_or_neginf(qy)
    if not (math.isfinite(ldx) and math.isfinite(ldy)):
        raise NotPositiveDefinite("marginal block is numerically singular")
    ldj = logdet_or_neginf(c.entries)
    if not math.isfinite(ldj):
        return math.inf
    mi = 0.5 * (ldx + ldy - ldj)
    return mi if mi > 0.0 else 0.0


def _check_canonical_args(idx: "IndexSextuple", d: np.ndarray) -> None:
    if idx.p12 != d.size:
        raise InconsistentIndices(f"p12 = {idx.p12} but {d.size} correlation coefficients")
    if d.size:
        if np.any(d <= 0.0) or np.any(d >= 1.0):
            raise InconsistentIndices("canonical correlations must lie strictly in (0, 1)")
        if np.any(np.diff(d) > 0.0):
            raise InconsistentIndices("canonical correlations must be nonincreasing")


def mi_canonical(idx: "IndexSextuple", d) -> float:
    """Mutual information of a pair in canonical form, from indices and d.

    Identical components force ``inf``; with none, only the correlated
    coefficients contribute ``-0.5 * sum(log(1 - d_i^2))``.
    """
    d = np.atleast_1d(np.asarray(d, dtype=float))
    _check_canonical_args(idx, d)
    if idx.p11 > 0:
        return math.inf
    if idx.p12 == 0:
        return 0.0
    return float(-0.5 * np.sum(np.log1p(-d * d)))


def nats_to(value: float, units: str) -> float:
    """Convert a nats value to ``nats``, ``bits``, or ``paper-example-bits``.

    The last is the doubled-bits convention ``2 * value / ln 2`` (the bits
    value without the one-half factor in front of the defining sum).
    """
    if units == "nats":
        return value
    if units == "bits":
        return value / LN2
    if units == "paper-example-bits":
        return 2.0 * value / LN2
    raise ValueError(f"unknown units {units!r}")


def pair_to_dict(pair: JointGaussianPair) -> dict:
    return {"p1": pair.p1, "p2": pair.p2, "Q": pair.joint().tolist()}


def pair_from_dict(obj: dict) -> JointGaussianPair:
    p1 = int(obj["p1"])
    p2 = int(obj["p2"])
    q = np.asarray(obj["Q"], dtype=float)
    if q.shape != (p1 + p2, p1 + p2):
        raise DimensionMismatch(
            f"Q has shape {q.shape}, expected {(p1 + p2, p1 + p2)} from p1, p2"
        )
    return JointGaussianPair.from_joint(q, p1)


def pair_to_json(pair: JointGaussianPair) -> str:
    """JSON form ``{"p1": .., "p2": .., "Q": [[..]]}``, lossless round-trip."""
    return json.dumps(pair_to_dict(pair))


def pair_from_json(text: str) -> JointGaussianPair:
    return pair_from_dict(json.loads(text))


def pair_to_csv(pair: JointGaussianPair) -> str:
    """CSV form: first row ``p1,p2``, then the joint matrix rows at 17 digits."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow([pair.p1, pair.p2])
    for row in pair.joint():
        w.writerow([format(x, ".17g") for x in row])
    return out.getvalue()


def pair_from_csv(text: str) -> JointGaussianPair:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise DimensionMismatch("empty CSV input")
    p1, p2 = (int(x) for x in rows[0][:2])
    q = np.array([[float(x) for x in r] for r in rows[1:]], dtype=float)
    if q.shape != (p1 + p2, p1 + p2):
        raise DimensionMismatch(
            f"CSV matrix has shape {q.shape}, expected {(p1 + p2, p1 + p2)}"
        )
    return JointGaussianPair.from_joint(q, p1)
