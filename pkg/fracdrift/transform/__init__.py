from .martingale import (
    MartingalePath, MartingaleTransform, innovation_ratio,
    martingale_transform, write_martingale_path
)
from .likelihood import (
    drift_q_function, girsanov_log_likelihood, log_likelihood
)
