"""Continuous-variable dense coding in the Gaussian formalism.

Quadrature variances use the convention in which the vacuum has variance 1/4;
information is measured in nats.
"""

from .capacity import (
    BracketError,
    BreakEvenResult,
    CapacityReport,
    break_even_vs_number,
    break_even_vs_squeezed,
    c_coh,
    c_dense,
    c_number,
    c_sq,
    capacity_report,
    capacity_sweep,
    h_dense,
    mutual_information_quadrature,
    nbar_of_squeezing,
    optimal_allocation,
    squeezing_db,
)
from .estimation import (
    BiasRow,
    DegenerateChannelError,
    MiEstimate,
    ResidualVariance,
    estimate_mi_gaussian,
    estimate_residual_variance,
    estimator_bias_report,
)
from .gaussian import (
    VACUUM_VARIANCE,
    ComplexAmplitude,
    GaussianState,
    ScalarGaussian,
    beamsplitter_5050,
    displace,
    joint_homodyne_sample,
    mean_photon,
    quadrature_marginal,
    symplectic_eigenvalues,
    two_mode_squeezed,
    vacuum,
)
from .protocol import (
    BivariateGaussian,
    ProtocolConfig,
    TrialRecord,
    TrialRecords,
    conditional_beta_distribution,
    decode,
    encode,
    marginal_beta_distribution,
    run_trials,
    sample_signal,
)

__version__ = "0.1.0"
