from .grid import TimeGrid
from .hurst import HurstModel, make_hurst_model
from .kernel import (
    frac_derivative, kernel_k, kernel_mass, kernel_mass_matrix, weight_w
)
from .special import log_std_normal_pdf, std_normal_cdf
