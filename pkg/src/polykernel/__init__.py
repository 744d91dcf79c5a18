"""Reproducing kernels of polyanalytic spaces over rotation-invariant measures."""

from .measures import (MeasureSpec, Kind, bergman, fock, discrete_atoms, raw_moments,
                       moment, shifted_moment, support_radius)
from .kernelseries import (KernelParams, TruncationPolicy, F_qs, R_kernel, H_basis,
                           convergence_lambda_radius, product_kernel, point_bound)
from .closedform import bergman_kernel, fock_kernel, MobiusMap
from .errors import (PolykernelError, ParameterError, DomainError, ConditioningError,
                     RankError, EstimationError, UnsupportedError, ConfigurationError,
                     TruncationWarning)

__all__ = [
    "MeasureSpec", "Kind", "bergman", "fock", "discrete_atoms", "raw_moments", "moment",
    "shifted_moment", "support_radius", "KernelParams", "TruncationPolicy", "F_qs",
    "R_kernel", "H_basis", "convergence_lambda_radius", "product_kernel", "point_bound",
    "bergman_kernel", "fock_kernel", "MobiusMap", "PolykernelError", "ParameterError",
    "DomainError", "ConditioningError", "RankError", "EstimationError", "UnsupportedError",
    "ConfigurationError", "TruncationWarning",
]
