import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gwgauss import JointGaussianPair

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def random_pair(rng: np.random.Generator, p1: int, p2: int, jitter: float = 0.1
                ) -> JointGaussianPair:
    """Strict-PD joint covariance from a square Gaussian factor.

    The jitter term keeps the spectrum away from zero so whitening stays
    well conditioned for dimensions up to ~16.
    """
    p = p1 + p2
    factor = rng.standard_normal((p, p))
    q = factor @ factor.T + jitter * p * np.eye(p)
    return JointGaussianPair.from_joint(q, p1)


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)
