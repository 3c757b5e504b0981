"""Volume-based tail dependence for bivariate copulas.

Generalized upper and lower tail dependence are limits of C-volume ratios of
shrinking corner boxes.  They stay well defined for discrete and mixed
margins through the checkerboard extension of a subcopula.
"""

__version__ = "0.1.0"

from tails.copulas import (  # noqa: E402
    Clayton,
    Comonotone,
    Copula,
    Countermonotone,
    Gaussian,
    Gumbel,
    Independence,
    NonMonotoneError,
    Rect,
    StudentT,
    cdf,
    survival,
    validate_grid,
    volume,
)
from tails.discrete import (  # noqa: E402
    Checkerboard,
    DiscretePMF,
    JointPMF,
    SubcopulaGrid,
    checkerboard_extend,
    discontinuity_partition,
    subcopula_from_joint,
)
from tails.estimators import (  # noqa: E402
    Schedule,
    TailEstimate,
    extrapolate,
    lambda_standard_lower_path,
    lambda_standard_upper_path,
    lambda_tilde_lower,
    lambda_tilde_upper,
    partitioned_volume_ratio,
)

__all__ = [
    "Checkerboard",
    "Clayton",
    "Comonotone",
    "Copula",
    "Countermonotone",
    "DiscretePMF",
    "Gaussian",
    "Gumbel",
    "Independence",
    "JointPMF",
    "NonMonotoneError",
    "Rect",
    "Schedule",
    "StudentT",
    "SubcopulaGrid",
    "TailEstimate",
    "cdf",
    "checkerboard_extend",
    "discontinuity_partition",
    "extrapolate",
    "lambda_standard_lower_path",
    "lambda_standard_upper_path",
    "lambda_tilde_lower",
    "lambda_tilde_upper",
    "partitioned_volume_ratio",
    "subcopula_from_joint",
    "survival",
    "validate_grid",
    "volume",
]
