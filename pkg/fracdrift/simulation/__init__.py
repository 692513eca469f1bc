from .fbm import (
    FbmSampler, drift_values, fbm_covariance, simulate_fbm,
    simulate_observation
)
from .rng import RngSeed
from .sample_path import SamplePath, read_sample_path, write_sample_path
