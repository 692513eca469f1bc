from .drift_basis import DriftBasis, load_tabulated_basis
from .psi import (
    PsiEvaluations, alpha_coeff, beta_coeff, identifiable_mask,
    psi_closed_poly, psi_numeric
)
