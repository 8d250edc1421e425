"""deltaspec: spectral analysis of the 3D Laplacian with N point interactions.

Everything is driven by the explicit N x N characteristic matrix Gamma(z):
its kernel on the positive imaginary axis gives the negative eigenvalues,
its kernel at 0 classifies the threshold, its complex zeros are the
resonances, and its non-singularity on the real axis is certified by a
scan plus an analytic large-momentum bound.
"""

__version__ = "0.1.0"

from .model import (
    ConfigError,
    GammaMatrix,
    PointConfig,
    RealSplit,
    SingularityError,
    assemble_gamma,
    gamma_derivative,
    gamma_entries,
    green_kernel,
    real_split,
    sinc,
    sinc_gram,
)
from .linalg import (
    LUFactorization,
    NotPositiveDefinite,
    SingularMatrixError,
    SymEigen,
    cholesky,
    lu_det,
    min_singular_value,
    null_space,
    solve,
    sym_eigen,
)
from .spectral import (
    LaurentCoefficients,
    SpectralReport,
    ZeroClassification,
    classify_zero,
    eigenfunction_eval,
    laurent_at_zero,
    negative_eigenvalues,
)
from .resonance import (
    Box,
    Certificate,
    ResonanceSet,
    certify_real_axis,
    count_zeros_in_box,
    distinct_direction,
    exp_sum_on_sphere,
    find_resonances,
    sphere_points,
)
from .resolvent import (
    DomainFunction,
    GaussianTestFunction,
    boundary_condition_residual,
    domain_function_eval,
    helmholtz_residual,
    resolvent_kernel,
)

__all__ = [
    "__version__",
    "ConfigError",
    "SingularityError",
    "PointConfig",
    "GammaMatrix",
    "RealSplit",
    "green_kernel",
    "assemble_gamma",
    "gamma_entries",
    "gamma_derivative",
    "real_split",
    "sinc",
    "sinc_gram",
    "SingularMatrixError",
    "LUFactorization",
    "SymEigen",
    "NotPositiveDefinite",
    "lu_det",
    "solve",
    "sym_eigen",
    "cholesky",
    "min_singular_value",
    "null_space",
    "SpectralReport",
    "ZeroClassification",
    "LaurentCoefficients",
    "negative_eigenvalues",
    "eigenfunction_eval",
    "classify_zero",
    "laurent_at_zero",
    "Box",
    "ResonanceSet",
    "Certificate",
    "count_zeros_in_box",
    "find_resonances",
    "certify_real_axis",
    "distinct_direction",
    "exp_sum_on_sphere",
    "sphere_points",
    "GaussianTestFunction",
    "DomainFunction",
    "resolvent_kernel",
    "helmholtz_residual",
    "domain_function_eval",
    "boundary_condition_residual",
]
