"""Zak-OTFS instantaneous radar polarimetry.

Single-frame estimation of all four polarimetric channels with a pulsone on
one polarization and a mutually unbiased spread carrier on the other, plus
phase-coded and FMCW baselines and a seeded Monte Carlo harness.
"""

from .core import (
    POL_PAIRS,
    POLS,
    ComplexFrame,
    DDSurface,
    GdaftParams,
    ParameterError,
    PolPath,
    SupportBox,
    ZakParams,
    epsilon_N,
    jacobi_symbol,
    mod_inverse,
    reference_grid,
    roi_box,
    validate_params,
)
from .waveform import (
    fmcw_frame,
    gdaft_direct,
    mount_symbols,
    phase_coded_frame,
    pulsone,
    spread_carrier,
    zadoff_chu,
)
from .ambiguity import (
    crystallization_check,
    cross_ambiguity_direct,
    cross_ambiguity_fast,
    self_ambiguity_support,
    twisted_convolve,
)
from .channel import (
    PulseShape,
    SceneSpec,
    add_noise,
    apply_pol_channel,
    draw_polar_response,
    draw_scene,
    effective_channel_truth,
)
from .estimation import (
    PolChannelEstimate,
    detection_statistic,
    entropy_weight,
    estimate_parameters,
    estimate_pol_channels_fmcw,
    estimate_pol_channels_phase_coded,
    estimate_pol_channels_zak,
    fuse_estimates,
    threshold_and_peak,
)
from .harness import RunConfig, auc, heatmap_scenario, rmse_curves, roc_curve, run_monte_carlo

__version__ = "0.1.0"
