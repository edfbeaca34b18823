"""Near-field RIS-enabled time-reversal link simulator."""

from .channel import Path, PathSet, build_path_set, link_coefficient, path_coefficient, path_delay
from .config import LoadedConfig, SweepSpec, load_config
from .errors import *  # noqa: F401,F403
from .experiment import (
    ResultRow,
    evaluate,
    reproduce_table1,
    run_single,
    run_sweep,
)
from .geometry import (
    SPEED_OF_LIGHT,
    Position3,
    RisTopology,
    SystemConfig,
    build_topology,
    distance,
    rayleigh_distance,
    validate_near_field,
)
from .pbf import PbfResult, pbf_best_snr, pbf_tap_snr
from .tapped import TappedChannel, bin_paths, tap_coefficient
from .time_reversal import (
    LinkResult,
    TrPrefilter,
    effective_response,
    evaluate_link,
    isi_power,
    sinr,
    snr_bound,
    tr_prefilter,
    useful_power,
)

__version__ = "0.1.0"
