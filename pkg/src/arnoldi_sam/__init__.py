"""Arnoldi sampling and the Stochastic Arnoldi's Method for noisy-gradient optimization."""
from .baselines import BfgsConfig, NelderMeadConfig, bfgs_optimize, nelder_mead_optimize
from .linalg import hadamard_apply, mgs_orthogonalize, symmetric_eigendecomposition
from .model import (
    ReducedQuadraticModel,
    build_directional,
    build_step_average,
    model_value,
    solve_trust_region_subproblem,
)
from .problems import (
    ModifiedRosenbrock,
    NoiseModel,
    ObjectiveOracle,
    SyntheticQuadratic,
    calibrate_noise,
    make_oracle,
    noisy_eval,
)
from .sam import SamConfig, sam_optimize
from .sampling import SampleSet, SpectralEstimate, ZeroGradient, arnoldi_sample, eigenvalue_error, truncate_spectrum
from .trace import OptimizationTrace

__version__ = "0.1.0"
