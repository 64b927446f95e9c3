"""Rate triples for the three-terminal lossy network with a shared branch.

A state W feeding both decoders yields the achievable triple

    R0 = I(Y1, Y2; W),   R1 = R_{Y1|W}(delta1),   R2 = R_{Y2|W}(delta2)

and the sum R0 + R1 + R2 is bounded below by the joint rate.  On the
equal-split distortion region the identity state closes that bound
exactly, so the shared rate needed on the minimum-sum-rate surface equals
the common information; :func:`pangloss_triple` returns that point.

:func:`region_sweep` traces the weighted surface
``T(alpha1, alpha2) = min_W [ R0 + alpha1 R1 + alpha2 R2 ]`` restricted to
diagonal states, which makes each coordinate a one-dimensional search.
The restriction means the sweep reports an upper bound on the true
surface (a diagonal-family upper bound), exact at (1, 1) on the
equal-split region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonpositiveDistortion, OutsideDW
from .rdf import conditional_rdf, dw_bound, in_dw
from .wyner import mi_given_state


@dataclass(frozen=True)
class RateTriple:
    """Shared and private rates at a distortion pair, in nats."""

    r0: float
    r1: float
    r2: float
    delta1: float
    delta2: float
    tag: str  # "pangloss" | "sweep-point"


@dataclass(frozen=True)
class DWRegion:
    """Square distortion region on which the equal-split closed forms hold."""

    n: int
    d_max: float

    @classmethod
    def from_correlations(cls, d) -> "DWRegion":
        d = np.atleast_1d(np.asarray(d, dtype=float))
        return cls(n=d.size, d_max=float(np.max(d)) if d.size else 0.0)

    @property
    def bound(self) -> float:
        return self.n * (1.0 - self.d_max) if self.n else math.inf

    def contains(self, delta1: float, delta2: float) -> bool:
        b = self.bound
        if not math.isfinite(b):
            return delta1 >= 0.0 and delta2 >= 0.0
        # n (1 - d_max) itself rounds, so classify the boundary at ulp scale
        tol = 8.0 * np.finfo(float).eps * max(1.0, b)
        return 0.0 <= delta1 <= b + tol and 0.0 <= delta2 <= b + tol


@dataclass(frozen=True, eq=False)
class SweepPoint:
    """One optimized point of the weighted-rate surface."""

    alpha1: float
    alpha2: float
    objective: float
    triple: RateTriple
    q: np.ndarray


def _check_region(d: np.ndarray, delta1: float, delta2: float) -> None:
    if not in_dw(d, delta1, delta2):
        raise OutsideDW(
            f"(delta1, delta2) = ({delta1}, {delta2}) outside "
            f"[0, {dw_bound(d)}]^2",
            bound=dw_bound(d),
        )


def lossy_common_information(d, delta1: float, delta2: float) -> float:
    """Shared rate on the minimum-sum-rate surface, constant over the region.

    Equals the common information ``0.5 sum(log((1+d)/(1-d)))`` whenever
    both distortions are within the equal-split bound; beyond it the
    closed form no longer applies and :class:`OutsideDW` is raised with
    the bound attached.
    """
    d = np.atleast_1d(np.asarray(d, dtype=float))
    _check_region(d, delta1, delta2)
    return float(np.sum(0.5 * np.log((1.0 + d) / (1.0 - d))))


def pangloss_triple(d, delta1: float, delta2: float) -> RateTriple:
    """The minimum-sum-rate triple at the identity state.

    R0 is the common information; R1 and R2 are the branch rates given
    that state.  Their sum equals the joint rate on the region.
    """
    d = np.atleast_1d(np.asarray(d, dtype=float))
    _check_region(d, delta1, delta2)
    if delta1 <= 0.0 or delta2 <= 0.0:
        raise NonpositiveDistortion("branch rates need positive distortions")
    ones = np.ones(d.size)
    return RateTriple(
        r0=float(np.sum(0.5 * np.log((1.0 + d) / (1.0 - d)))),
        r1=conditional_rdf(d, ones, 1, delta1).rate,
        r2=conditional_rdf(d, ones, 2, delta2).rate,
        delta1=float(delta1),
        delta2=float(delta2),
        tag="pangloss",
    )


def _golden_min(f, lo: float, hi: float, seed_points: int, tol: float = 1e-10):
    """Coarse log-spaced scan to bracket, then golden-section refinement."""
    grid = np.exp(np.linspace(math.log(lo), math.log(hi), max(seed_points, 5)))
    vals = [f(x) for x in grid]
    k = int(np.argmin(vals))
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, grid.size - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol * max(1.0, abs(a) + abs(b)):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def region_sweep(
    d,
    delta1: float,
    delta2: float,
    alphas=None,
    qgrid: int = 33,
) -> list[SweepPoint]:
    """Minimize the weighted rate over diagonal states per weight pair.

    ``alphas`` defaults to the 11 x 11 grid over [0, 1]^2 restricted to
    ``alpha1 + alpha2 >= 1``.  Each coordinate of q is optimized in turn
    by a seeded golden-section search on ``[d_j, 1/d_j]``, cycling until
    the objective stops improving.  Diagonal restriction makes every
    reported objective an upper bound on the unrestricted surface.
    """
    d = np.atleast_1d(np.asarray(d, dtype=float))
    if np.any(d <= 0.0) or np.any(d >= 1.0):
        raise NonpositiveDistortion("sweep needs coefficients strictly inside (0, 1)")
    if delta1 <= 0.0 or delta2 <= 0.0:
        raise NonpositiveDistortion("sweep needs positive distortions")
    if alphas is None:
        ticks = [i / 10.0 for i in range(11)]
        alphas = [(a1, a2) for a1 in ticks for a2 in ticks if a1 + a2 >= 1.0]

    margin = 1e-9
    lows = d * (1.0 + margin)
    highs = (1.0 / d) * (1.0 - margin)

    def objective(q: np.ndarray, a1: float, a2: float) -> float:
        r0 = mi_given_state(d, np.diag(q))
        r1 = conditional_rdf(d, q, 1, delta1).rate
        r2 = conditional_rdf(d, q, 2, delta2).rate
        return r0 + a1 * r1 + a2 * r2

    points: list[SweepPoint] = []
    for a1, a2 in alphas:
        q = np.ones(d.size)
        best = objective(q, a1, a2)
        for _ in range(60):
            improved = best
            for j in range(d.size):

                def fj(x, j=j):
                    qt = q.copy()
                    qt[j] = x
                    return objective(qt, a1, a2)

                xj, fx = _golden_min(fj, lows[j], highs[j], qgrid)
                if fx < best:
                    q[j] = xj
                    best = fx
            if improved - best < 1e-12:
                break
        triple = RateTriple(
            r0=mi_given_state(d, np.diag(q)),
            r1=conditional_rdf(d, q, 1, delta1).rate,
            r2=conditional_rdf(d, q, 2, delta2).rate,
            delta1=float(delta1),
            delta2=float(delta2),
            tag="sweep-point",
        )
        points.append(
            SweepPoint(alpha1=a1, alpha2=a2, objective=best, triple=triple, q=q.copy())
        )
    return points
