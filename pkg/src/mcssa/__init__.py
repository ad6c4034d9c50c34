"""Monte Carlo singular spectrum analysis with family-wise error control."""

__version__ = "0.1.0"

from .bases import FrequencyRange, ProjectionBasis, eigen_basis, select_in_range, sine_basis
from .calibration import (AlphaAdjustment, ErrorEstimate, RocPoint, Scenario, adjust_alpha,
                          clopper_pearson, estimate_rejection_rate, roc_sweep, simulate)
from .detection import (SurrogateSample, TestConfig, TestResult, bonferroni_test,
                        multiple_test, run_mcssa, single_interval, surrogate_projections)
from .esprit import esprit_main_frequency
from .estimator import AR1Noise, SSA, MonteCarloSSA
from .exceptions import (ComputationError, DataError, DegenerateSurrogateError,
                         EstimationError, MCSSAError, ParameterError, RangeError,
                         SampleSizeError, SearchFailure)
from .noise import Ar1Model, SignalSpec, estimate_ar1, generate_ar1, synthesize
from .ssa import (SsaDecomposition, TrajectoryMatrix, decompose, embed,
                  squared_projection_norms)

__all__ = [
    "AR1Noise", "AlphaAdjustment", "Ar1Model", "ComputationError", "DataError",
    "DegenerateSurrogateError", "ErrorEstimate", "EstimationError", "FrequencyRange",
    "MCSSAError", "MonteCarloSSA", "ParameterError", "ProjectionBasis", "RangeError",
    "RocPoint", "SSA", "SampleSizeError", "Scenario", "SearchFailure", "SignalSpec",
    "SsaDecomposition", "SurrogateSample", "TestConfig", "TestResult", "TrajectoryMatrix",
    "adjust_alpha", "bonferroni_test", "clopper_pearson", "decompose", "eigen_basis",
    "embed", "esprit_main_frequency", "estimate_ar1", "estimate_rejection_rate",
    "generate_ar1", "multiple_test", "roc_sweep", "run_mcssa", "select_in_range",
    "simulate", "sine_basis", "single_interval", "squared_projection_norms",
    "surrogate_projections", "synthesize",
]
