"""Switched-beam mm-wave MIMO antenna modeling and link-level simulation."""

from .pattern import (
    AngleGrid,
    BeamParams,
    FarFieldPattern,
    PeakInfo,
    PatternError,
    BeamParamError,
    ResolutionError,
    AngleRangeError,
    CoverageError,
    BeamTooWideError,
    PatternFormatError,
    beam_gain_dbi,
    synthesize_beam,
    gain_at,
    integrate_sphere,
    sphere_quadrature,
    extract_peak,
    extract_hpbw,
    extract_sll,
    extract_f2b,
    load_pattern_csv,
    save_pattern_csv,
)
from .sparams import (
    SweepSMatrix,
    TouchstoneError,
    ResonanceResult,
    parse_touchstone,
    format_touchstone,
    isolation_db,
    bandwidth_minus10db,
    resonance_freq,
)
from .diversity import (
    AngularDensity,
    PropagationEnvironment,
    EccResult,
    LossyPortError,
    GridMismatchError,
    MissingFieldError,
    ecc_from_sparams,
    ecc_from_patterns,
    diversity_gain,
    edg,
    meg,
)
from .arraymodel import (
    WALL_LAW_TABLE,
    WallLawPoint,
    ElementSpec,
    ArrayCatalog,
    CoveragePoint,
    wall_law,
    default_catalog,
    element_pattern,
    element_gain_dbi,
    coverage_envelope,
    slot_resonance_ghz,
    catalog_to_json,
    load_catalog_json,
)
from .linksim import (
    LinkBudget,
    SwitchConfig,
    SwitchState,
    TrajectorySample,
    SimRecord,
    fspl_db,
    noise_floor_dbm,
    snr_db,
    capacity_bps,
    select_element,
    simulate,
    switch_count,
    load_trajectory_csv,
    save_records_csv,
    load_budget_json,
    load_switch_json,
)

__version__ = "0.1.0"
