"""Low-velocity boosts of Schroedinger plane waves and numerical checks of their covariance."""

__version__ = "0.1.0"

from .spacetime import (  # noqa: E402
    BoostKind,
    BoostSpec,
    Event,
    FrameMatrix,
    Vec3,
    boost_event,
    boost_matrix,
    compose,
    inverse_residual,
)
from .states import (  # noqa: E402
    EnergyMomentum,
    LinearPhaseWave,
    PhaseFactor,
    PlaneWave,
    WaveField,
    energy_momentum,
    extended_boost_wave,
    galilei_boost_wave,
    phase_at,
    phase_shift_boost,
    probe_energy_momentum,
    schrodinger_residual,
)
from .covariance import (  # noqa: E402
    CheckVerdict,
    CovarianceReport,
    OrderScanResult,
    lorentz_reference_gap,
    order_scan,
    verify_suite,
)
from .noninertial import (  # noqa: E402
    QuadraticRamp,
    Rest,
    SmoothBump,
    noninertial_transform,
    parse_trajectory,
    phase_difference,
    twin_phase,
)
