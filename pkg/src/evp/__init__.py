"""Expected validation performance: the expected best score among n of B trials.

Three estimators of E[max of n draws] from B observed scores, differing
only in how size-n selections are counted:

* ``u`` (combinations): unbiased, highest variance.
* ``v`` (strings): the empirical-CDF plug-in; biased low.
* ``w`` (multisets): biased lower still, lowest variance.
"""

__version__ = "0.1.0"

from .combinatorics import KINDS, EstimatorKind, cumulative_ratio, cumulative_ratios
from .comparison import (
    ComparisonReport,
    ConclusionRate,
    IndeterminateTruthError,
    comparison_report,
    determine_truth,
    incorrect_conclusion_rate,
)
from .curves import EvpCurve, EvpPoint, evp_curve, evp_curve_all
from .estimators import (
    ScorePool,
    WeightVector,
    expected_max,
    mean_and_variance,
    variance_of_max,
    weight_matrix,
    weight_vector,
)
from .io import read_curve, read_report, read_scores, write_curve, write_report
from .rng import RandomSource
from .simulation import (
    SimulationReport,
    TruncatedNormal,
    ValueBag,
    bias_variance_mse_report,
    build_bag_two_stage,
    estimator_sampling_moments,
    mc_true_evp,
    sample_truncated_normal,
)
