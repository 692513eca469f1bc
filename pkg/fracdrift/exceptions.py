"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
from typing import Optional, Sequence


class FracDriftError(Exception):
    """Base class of all errors raised by fracdrift."""


class DomainError(FracDriftError, ValueError):
    """Argument outside the domain of an operation."""


class GridError(DomainError):
    """Invalid, mismatched or too coarse time grid."""


class DimensionError(DomainError):
    """Vector or matrix shapes do not agree."""


class FactorizationError(FracDriftError):
    """Cholesky factorization of a covariance matrix failed.

    :param int pivot: 0-based index of the leading minor which is not
        positive definite.
    """
    def __init__(self, msg: str, pivot: int):
        super().__init__(msg)
        self.pivot = pivot


class IllConditionedError(FracDriftError):
    """Gram matrix is not positive definite or too ill-conditioned."""
    def __init__(self, msg: str, *, condition: float = float("inf"),
                 basis: str = ""):
        super().__init__(msg)
        self.condition = condition
        self.basis = basis


class DegeneratePosteriorError(FracDriftError):
    """Truncated normal posterior carries no numerical mass.

    :param str endpoint: 'a' or 'b', the box endpoint nearer to the
        posterior location.
    """
    def __init__(self, msg: str, endpoint: str):
        super().__init__(msg)
        self.endpoint = endpoint


class ReplicationError(FracDriftError):
    """Estimation failed in one Monte Carlo replication."""
    def __init__(self, msg: str, index: int):
        super().__init__(msg)
        self.index = index


class ExperimentAbortedError(FracDriftError):
    """Too many replications of an experiment failed."""
    def __init__(self, msg: str, indices: Sequence[int]):
        super().__init__(msg)
        self.indices = list(indices)


class ConfigError(FracDriftError):
    """Invalid run configuration.

    :param str path: JSON path of the offending field, e.g. 'model.H'.
    """
    def __init__(self, msg: str, path: Optional[str] = None):
        super().__init__(f"{path}: {msg}" if path else msg)
        self.path = path
