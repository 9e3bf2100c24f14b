"""Tomographic probability representation of qudit states and stochastic semigroups."""

from .bell import (
    CIRELSON,
    E_MATRIX,
    BellSetting,
    bell_number,
    bell_state,
    chsh_scan,
    setting_matrix,
    universal_matrix,
)
from .embedding import AffineBlock, EmbeddingFrame, embed, extract, frame_for
from .errors import (
    ConvergenceError,
    DimensionError,
    NumericalError,
    OscillationError,
    RankDeficiencyError,
    ValidationError,
)
from .hermitian import (
    DensityMatrix,
    SpectralPair,
    UnitaryMatrix,
    eig_hermitian,
    measurement_frame,
    random_density,
    random_unitary,
    su2_from_euler,
    tensor_product,
)
from .positive_maps import (
    PositiveMapSpec,
    apply_positive_map,
    decompose,
    mixture_spectrum,
    qubit_eigenvectors,
    qubit_spectrum,
    recompose,
)
from .simplex import (
    ProbabilityVector,
    StochasticMatrix,
    apply,
    bistochastic_orbit_contains,
    cesaro_limit,
    compose,
    convex_combine,
    inverse_if_exists,
    perron_vector,
    power_limit,
    validate_stochastic,
)
from .tomography import (
    Tomogram,
    TomogramSample,
    joint_tomogram,
    orthostochastic_from,
    reconstruct,
    tomogram,
    tomogram_via_spectrum,
)

__version__ = "0.1.0"
