"""Monte Carlo validation of realizations against their target covariances.

The checks are deliberately model-free: empirical second moments of the
drawn rows are compared with the analytic target, the conditional
independence of the two branches given the state is measured through the
plug-in residual ``Q12 - Q1W QW^{-1} QW2``, and the plug-in mutual
information of the empirical pair covariance gives a consistency estimate
whose error shrinks like N^{-1/2}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, MissingReconstruction, TooFewSamples
from .gaussmodel import CovMatrix, gaussian_mi, symmetrize
from .realize import SampleBlock

MIN_SAMPLES = 1000


@dataclass(frozen=True, eq=False)
class ValidationReport:
    n_samples: int
    cov_rel_err: float
    ci_residual: float
    mi_plugin: float
    distortion_errs: tuple[float, float] | None = None


def _empirical_cov(x: np.ndarray) -> np.ndarray:
    # sources are zero mean by construction, so use raw second moments
    return symmetrize(x.T @ x / x.shape[0])


def validate_realization(
    samples: SampleBlock,
    target,
    distortion_targets: tuple[float, float] | None = None,
) -> ValidationReport:
    """Compare empirical second moments of (Y1, Y2, W) with ``target``.

    ``target`` is the assembled covariance in that block order; the state
    block may be absent from the samples (dimension 0), in which case the
    conditional-independence residual degenerates to the raw cross block.
    When ``distortion_targets`` is given and reconstructions are present,
    the per-branch distortion errors are included.
    """
    n = samples.n_samples
    if n < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} rows, got {n}")
    t = target.entries if isinstance(target, CovMatrix) else np.asarray(target, dtype=float)
    p1 = samples.y1.shape[1]
    p2 = samples.y2.shape[1]
    nw = samples.w.shape[1] if samples.w is not None else 0
    if t.shape != (p1 + p2 + nw, p1 + p2 + nw):
        raise DimensionMismatch(
            f"target has shape {t.shape}, samples imply {(p1 + p2 + nw,) * 2}"
        )
    blocks = [samples.y1, samples.y2] + ([samples.w] if nw else [])
    emp = _empirical_cov(np.hstack(blocks))
    diff = float(np.linalg.norm(emp - t))
    denom = float(np.linalg.norm(t))
    cov_rel_err = diff / denom if denom > 0.0 else diff

    e12 = emp[:p1, p1 : p1 + p2]
    if nw:
        e1w = emp[:p1, p1 + p2 :]
        e2w = emp[p1 : p1 + p2, p1 + p2 :]
        ew = emp[p1 + p2 :, p1 + p2 :]
        ci_residual = float(
            np.max(np.abs(e12 - e1w @ np.linalg.solve(ew, e2w.T)), initial=0.0)
        )
    else:
        ci_residual = float(np.max(np.abs(e12), initial=0.0))

    mi_plugin = gaussian_mi(emp[: p1 + p2, : p1 + p2], (p1, p2))

    errs = None
    if distortion_targets is not None:
        errs = validate_distortion(samples, *distortion_targets)
    return ValidationReport(
        n_samples=n,
        cov_rel_err=cov_rel_err,
        ci_residual=ci_residual,
        mi_plugin=mi_plugin,
        distortion_errs=errs,
    )


def validate_distortion(
    samples: SampleBlock, target1: float, target2: float
) -> tuple[float, float]:
    """Relative error of the mean squared reconstruction error per branch.

    A zero target switches to absolute error (degenerate passthrough).
    """
    if samples.yhat1 is None or samples.yhat2 is None:
        raise MissingReconstruction("sample block carries no reconstructions")

    def _err(y, yhat, target):
        mse = float(np.mean(np.sum((y - yhat) ** 2, axis=1)))
        return abs(mse - target) / target if target > 0.0 else mse

    return (
        _err(samples.y1, samples.yhat1, float(target1)),
        _err(samples.y2, samples.yhat2, float(target2)),
    )
