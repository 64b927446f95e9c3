"""Canonical variable form of a jointly Gaussian pair.

The canonical transform whitens each marginal and rotates both bases so the
cross covariance becomes a rectangular diagonal pattern: an identity block
(components of the two vectors that coincide almost surely), a diagonal
block ``Diag(d)`` with ``1 > d_1 >= ... >= d_n > 0`` (correlated pairs),
and zeros (private components).  The algorithm:

1. eigendecompose the marginals, ``Q11 = U1 D1 U1.T`` and
   ``Q22 = U2 D2 U2.T``;
2. take the SVD of the whitened cross block
   ``D1^{-1/2} U1.T Q12 U2 D2^{-1/2} = U3 S U4.T``;
3. the transforms are ``S1 = U3.T D1^{-1/2} U1.T`` and
   ``S2 = U4.T D2^{-1/2} U2.T``; after them both marginals are identities
   and the cross block is the singular-value pattern.

Thresholds classify the raw singular values: above ``h1`` counts as
exactly one (identical), below ``h2`` counts as exactly zero (private),
anything between is kept as a canonical correlation.  The index sextuple
records the three component counts per vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InconsistentIndices, SingularValueOutOfRange
from .gaussmodel import CovMatrix, JointGaussianPair, symmetrize

SV_CEILING_SLACK = 1e-8


@dataclass(frozen=True)
class Thresholds:
    """Classification cut-offs: ``s > h1`` is identical, ``s < h2`` is private."""

    h1: float = 1.0 - 1e-6
    h2: float = 1e-9

    def __post_init__(self):
        if not 0.0 < self.h2 < self.h1 < 1.0:
            raise ValueError(f"need 0 < h2 < h1 < 1, got h1={self.h1}, h2={self.h2}")


@dataclass(frozen=True)
class IndexSextuple:
    """Component counts (identical, correlated, private) for each vector."""

    p11: int
    p12: int
    p13: int
    p21: int
    p22: int
    p23: int

    def __post_init__(self):
        for name in ("p11", "p12", "p13", "p21", "p22", "p23"):
            if getattr(self, name) < 0:
                raise InconsistentIndices(f"{name} must be nonnegative")
        if self.p11 != self.p21:
            raise InconsistentIndices("identical parts must have equal dims on both sides")
        if self.p12 != self.p22:
            raise InconsistentIndices("correlated parts must have equal dims on both sides")

    @property
    def p1(self) -> int:
        return self.p11 + self.p12 + self.p13

    @property
    def p2(self) -> int:
        return self.p21 + self.p22 + self.p23


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """Result of :func:`decompose`, with intermediates kept for audit."""

    s1: np.ndarray
    s2: np.ndarray
    idx: IndexSextuple
    d: np.ndarray
    u1: np.ndarray = field(repr=False)
    u2: np.ndarray = field(repr=False)
    u3: np.ndarray = field(repr=False)
    u4: np.ndarray = field(repr=False)
    d1: np.ndarray = field(repr=False)
    d2: np.ndarray = field(repr=False)
    sv: np.ndarray = field(repr=False)


def canonical_cross_pattern(idx: IndexSextuple, d) -> np.ndarray:
    """The idealized p1 x p2 cross block: I_{p11}, then Diag(d), then zeros."""
    d = np.atleast_1d(np.asarray(d, dtype=float))
    if d.size != idx.p12:
        raise InconsistentIndices(f"p12 = {idx.p12} but {d.size} coefficients")
    out = np.zeros((idx.p1, idx.p2))
    for i in range(idx.p11):
        out[i, i] = 1.0
    for i, di in enumerate(d):
        out[idx.p11 + i, idx.p11 + i] = di
    return out


def decompose(pair: JointGaussianPair, thresholds: Thresholds = Thresholds()) -> CanonicalForm:
    """Compute the canonical variable form of a strictly PD pair."""
    pair = pair.validated()
    lam1, u1 = np.linalg.eigh(pair.q11.entries)
    lam2, u2 = np.linalg.eigh(pair.q22.entries)
    # validated() guarantees strict PD, so the inverse square roots are safe
    w1 = u1 / np.sqrt(lam1)
    w2 = u2 / np.sqrt(lam2)
    r = w1.T @ pair.q12 @ w2
    u3, sv, u4t = np.linalg.svd(r, full_matrices=True)
    if sv.size and sv[0] > 1.0 + SV_CEILING_SLACK:
        raise SingularValueOutOfRange(
            f"raw canonical correlation {sv[0]:.12g} exceeds 1 beyond tolerance"
        )
    sv = np.clip(sv, 0.0, 1.0)
    p11 = int(np.sum(sv > thresholds.h1))
    p12 = int(np.sum((sv >= thresholds.h2) & (sv <= thresholds.h1)))
    idx = IndexSextuple(
        p11, p12, pair.p1 - p11 - p12, p11, p12, pair.p2 - p11 - p12
    )
    d = sv[p11 : p11 + p12].copy()
    return CanonicalForm(
        s1=u3.T @ w1.T,
        s2=u4t @ w2.T,
        idx=idx,
        d=d,
        u1=u1,
        u2=u2,
        u3=u3,
        u4=u4t.T,
        d1=lam1,
        d2=lam2,
        sv=sv,
    )


def apply_transform(pair: JointGaussianPair, cf: CanonicalForm) -> JointGaussianPair:
    """Apply the canonical transforms to a pair's covariance blocks."""
    if cf.s1.shape[1] != pair.p1 or cf.s2.shape[1] != pair.p2:
        raise DimensionMismatch(
            f"transform expects dims ({cf.s1.shape[1]}, {cf.s2.shape[1]}), "
            f"pair has ({pair.p1}, {pair.p2})"
        )
    q11 = symmetrize(cf.s1 @ pair.q11.entries @ cf.s1.T)
    q22 = symmetrize(cf.s2 @ pair.q22.entries @ cf.s2.T)
    q12 = cf.s1 @ pair.q12 @ cf.s2.T
    return JointGaussianPair(CovMatrix(q11), CovMatrix(q22), q12)


def canonical_correlations_oracle(pair: JointGaussianPair) -> np.ndarray:
    """Canonical correlations by the eigenvalue route, for cross-checking.

    Returns the square roots of the eigenvalues of
    ``Q11^{-1} Q12 Q22^{-1} Q12.T`` (top ``min(p1, p2)``, descending),
    computed on the similar symmetric matrix so the spectrum is real.
    """
    pair = pair.validated()
    lam1, u1 = np.linalg.eigh(pair.q11.entries)
    isq1 = (u1 / np.sqrt(lam1)) @ u1.T
    b = np.linalg.solve(pair.q22.entries, pair.q12.T)
    m = symmetrize(isq1 @ pair.q12 @ b @ isq1)
    ev = np.linalg.eigvalsh(m)
    ev = np.clip(ev, 0.0, None)
    sv = np.sqrt(ev)[::-1]
    return sv[: min(pair.p1, pair.p2)].copy()


def pattern_residual(pair: JointGaussianPair, cf: CanonicalForm) -> float:
    """Max-abs deviation of the transformed pair from the idealized pattern.

    Under default thresholds on generic strict-PD inputs this is at the
    rounding level; with aggressive thresholds the deviation is bounded by
    the classification slack ``max(1 - h1, h2)`` by construction.
    """
    t = apply_transform(pair, cf)
    r11 = np.max(np.abs(t.q11.entries - np.eye(pair.p1)), initial=0.0)
    r22 = np.max(np.abs(t.q22.entries - np.eye(pair.p2)), initial=0.0)
    r12 = np.max(
        np.abs(t.q12 - canonical_cross_pattern(cf.idx, cf.d)), initial=0.0
    )
    return float(max(r11, r22, r12))
