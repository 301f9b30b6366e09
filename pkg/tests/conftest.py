import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chemofront.model import ModelParams  # noqa: E402


@pytest.fixture
def table_params() -> ModelParams:
    """Base parameters of the speed-table experiments (sigma = 1)."""
    return ModelParams(a=2.0, b=1.0, chi1=0.2, chi2=0.1, lambda1=1.0,
                       lambda2=2.0, mu1=1.0, mu2=2.0, nu=0.8, sigma=1.0, h0=2.0)


def random_admissible_params(rng: np.random.Generator) -> ModelParams:
    """Draw parameters satisfying all three standing hypotheses."""
    while True:
        p = ModelParams(
            a=rng.uniform(0.5, 3.0),
            b=rng.uniform(0.5, 3.0),
            chi1=rng.uniform(0.0, 0.3),
            chi2=rng.uniform(0.0, 0.3),
            lambda1=rng.uniform(0.5, 3.0),
            lambda2=rng.uniform(0.5, 3.0),
            mu1=rng.uniform(0.0, 2.0),
            mu2=rng.uniform(0.0, 2.0),
            nu=rng.uniform(0.05, 1.5),
            sigma=rng.uniform(0.05, 3.0),
            h0=rng.uniform(0.5, 3.0),
        )
        from chemofront.model import check_hypotheses

        if check_hypotheses(p).all_hold:
            return p
