from .information import (
    GramMatrix, ScoreVector, gram_matrix, gram_series,
    quadratic_log_likelihood, score_series, score_vector
)
from .ml import (
    EstimationResult, mle_estimate, mle_trajectory, trajectory_table,
    write_trajectory
)
from .bayes import (
    NormalPrior, PosteriorSummary, Prior, UniformPosteriorN1, UniformPrior,
    fixed_components, normal_posterior, normal_posterior_n1,
    quadrature_posterior_oracle, uniform_posterior_n1, uniform_posterior_path
)
from .stopping import (
    CostCurve, StatisticLattice, StoppingSolution, fixed_time_risk,
    normal_cost_curve, normal_optimal_stop, uniform_stop_dp,
    write_cost_curve, write_policy
)
