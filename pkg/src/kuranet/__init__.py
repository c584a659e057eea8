"""kuranet: simulation and control of complex-valued Kuramoto networks.

A library plus CLI for studying coupled phase oscillators through their
linear complex-valued embedding, with five magnitude/synchronization
control strategies, deterministic seeded experiments, CSV time series,
and figure reports.
"""

from .controllers import (
    ComplexSMC,
    ControllerSpec,
    FFSMC,
    HybridReset,
    NoControl,
    Roberts,
    SmcDiagnostics,
    SwitchedFF,
    gain_margin,
    gain_threshold,
    hybrid_reset_jump,
    roberts_mu_degree,
    switching_function,
    u_complex_smc,
    u_equivalent,
    u_ff_smc,
    u_roberts,
    u_sign_law,
    u_switched_ff,
    verify_roberts_spectrum,
)
from .cxmath import (
    DEGENERATE_MODULUS,
    coupling_f,
    coupling_g,
    csign,
    eigen_spectrum,
    matexp,
    modarg,
)
from .dynamics import (
    ComplexState,
    radial_and_angular_rates,
    rhs_complex_controlled,
    rhs_complex_open,
    rhs_real,
    system_matrix,
    unwrap_step,
)
from .errors import (
    AcceptanceError,
    ConfigError,
    KuranetError,
    MetricsError,
    PreconditionError,
    SimulationError,
)
from .metrics import (
    MetricSeries,
    build_series,
    mean_abs_error,
    order_parameter,
    per_oscillator_mean_frequency,
    radial_reaching_bound,
    lock_reaching_bound,
    sync_verdict,
)
from .network import (
    FrequencySpec,
    Network,
    OscParams,
    erdos_renyi,
    is_connected,
    load_adjacency,
    sample_frequencies,
    save_adjacency,
)
from .rng import SplitMix64, derive_seed
from .scenario import (
    PRESETS,
    RunSummary,
    Scenario,
    preset_scenario,
    run_scenario,
    run_sweep,
    validate_scenario,
)
from .sim import (
    Event,
    SimConfig,
    Trajectory,
    detect_reaching,
    reaching_tolerance,
    rk4_step,
    run_complex,
    run_real,
    surface_residual,
)

__version__ = "0.1.0"
