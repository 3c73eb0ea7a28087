"""tmt: exact combinatorics and disk-series analysis for enhanced rank-4 tensor models."""

__version__ = "0.1.0"

from .bubbles import (
    Bubble,
    Insertion,
    NecklaceTreeSpec,
    bicolored_faces,
    build_necklace,
    canonical_form,
    compose,
    contract,
    dipole,
    melon,
    quartic_catalog,
    realize_tree_of_necklaces,
    validate_bubble,
)
from .criticality import (
    GammaFit,
    RadiusEstimate,
    critical_point,
    find_transition,
    gamma_estimate,
    gamma_of_potential,
    radius_from_coefficients,
    transition_scan,
)
from .feynman import (
    FeynmanGraph,
    ModelEntry,
    ModelSpec,
    amplitude,
    boundary_graph,
    degree_exponent,
    enumerate_closures,
    expectation_series,
    free_energy_series,
    full_quartic,
    gaussian_moment,
    model_from_json,
    necklace_tree_model,
    q_map,
    restricted_quartic,
    standard_quartic,
)
from .ifmaps import (
    LOCertificate,
    StrandedMap,
    classify_lo,
    component_counts,
    delete_edge,
    from_feynman,
    genus,
    omega,
    single_vertex_map,
)
from .laurent import N, ONE, CouplingSeries, LaurentPolynomial
from .mapgen import enumerate_maps
from .sd import (
    DiskSeries,
    FloatSeries,
    Monomial,
    NonConvergenceError,
    Potential,
    catalan,
    melonic_quartic_potential,
    necklace_potential,
    potential_from_model,
    solve_formal,
    solve_numeric,
    solve_series_float,
    transition_potential,
)
