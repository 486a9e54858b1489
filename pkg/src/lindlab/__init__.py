"""lindlab: Lindblad generators for lattice models, their Liouvillian
spectra, certificates for dissipation-free coherent subspaces, and
master-equation dynamics.
"""

from .operators import (
    DEFAULT_DIM_CAP,
    HilbertSpace,
    SparseOperator,
    site_operator,
    kron,
    commutator,
    anticommutator,
    fro_norm,
    save_coordinate_text,
    load_coordinate_text,
)
from .models import (
    XxzRingParams,
    HubbardChainParams,
    LindbladSet,
    SymmetrySet,
    spin_space,
    hubbard_space,
    build_xxz_ring,
    build_hubbard_chain,
    fermion_annihilation,
    site_number,
    site_spin_z,
    doublon_density,
    doublon_flow,
    symmetry_operators,
)
from .liouville import (
    Superoperator,
    assemble_superoperator,
    apply_lindbladian,
    vec,
    unvec,
)
from .spectra import (
    SpectrumResult,
    ClassifiedSpectrum,
    ScanEntry,
    full_spectrum,
    targeted_spectrum,
    classify_eigenvalues,
    distinct_oscillation_frequencies,
    imaginary_count_scan,
    spectrum_to_csv,
)
from .certificates import (
    DarkState,
    TheoremReport,
    CorollaryMode,
    BlockSupportReport,
    SubspaceSearchResult,
    find_dark_states,
    check_theorem1,
    check_theorem3,
    build_corollary1_modes,
    corollary1_report,
    verify_multiblock,
    verify_theorem2_conclusion,
    search_invariant_subspace,
)
from .steady import StationaryBasis, stationary_states, grand_canonical_state
from .dynamics import (
    Trajectory,
    ObservableSeries,
    evolve,
    propagate_exact,
    observable_series,
    purity_rate,
    random_density_matrix,
    series_to_csv,
    oscillation_spectrum,
    spectral_peaks,
    peak_to_peak,
)

__version__ = "0.1.0"
