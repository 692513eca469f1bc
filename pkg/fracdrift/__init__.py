"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
from .core import HurstModel, TimeGrid, make_hurst_model, weight_w
from .simulation import (
    FbmSampler, RngSeed, SamplePath, simulate_fbm, simulate_observation
)
from .transform import (
    MartingalePath, MartingaleTransform, log_likelihood, martingale_transform
)
from .basis import DriftBasis, psi_closed_poly, psi_numeric
from .estimation import (
    NormalPrior, UniformPrior, gram_matrix, mle_estimate, normal_cost_curve,
    normal_optimal_stop, normal_posterior, quadrature_posterior_oracle,
    score_vector, uniform_posterior_n1, uniform_stop_dp
)
from .harness import ExperimentSpec, reproduce_cost_figure, run_mc
from .exceptions import FracDriftError
from .version import __version__
