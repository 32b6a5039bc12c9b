"""Two-photon coherence preparation and resonant four-wave mixing tools."""

from .model import (
    ConfigurationError,
    DriveConfig,
    MediumSpec,
    MixingMode,
    NumericalFailure,
    ProbeTerms,
    PulseShape,
    PulseSpec,
    TwoLevelState,
    TwoPhotonQuantities,
    UnitConvention,
    convert_units,
    drive_from_medium,
    envelope,
    two_photon_quantities,
)
from .dynamics import (
    DEFAULT_GRID,
    TimeGrid,
    Trajectory,
    analytic_rectangular,
    coherence_stats,
    crossing_times,
    evolve,
    pi_half_detuning,
)
from .metrics import ConversionMetrics, eps_ph, photon_weights, shape_distance, w_ph_max
from .propagation import (
    DEFAULT_PROPAGATION_GRID,
    DepthSnapshot,
    FieldSlice,
    PropagationRecord,
    StepControl,
    propagate,
    slice_from_pulses,
    source_terms,
)
from .scenarios import (
    AbsorptionScale,
    HgCalibration,
    Preset,
    absorption_scale,
    entrance_fields,
    preset,
    preset_names,
)

__version__ = "0.1.0"
