"""Constructions, invariants and census filters for cores of cubelike graphs
(Cayley graphs of elementary abelian 2-groups)."""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    DimensionMismatch,
    Graph6ParseError,
    NotSpanningError,
    QuotientLoopError,
    SearchTimeout,
)
from .gf2 import LinearMap, Subgroup, Word, coset_canonical, enumerate_subgroup, linear_extend, max_subgroup_within, span
from .graphs import (
    Digraph,
    Graph,
    VertexMap,
    bipartite_double_cover,
    cartesian_product,
    complement,
    complete_graph,
    connected_components,
    cycle_graph,
    distances,
    from_graph6,
    from_sparse6,
    induced_subgraph,
    odd_girth,
    to_graph6,
)
from .autos import (
    OrbitalPartition,
    PermGroup,
    are_isomorphic,
    automorphism_group,
    canonical_form,
    canonical_labeling,
    is_generously_transitive,
    is_vertex_transitive,
    orbital_graph,
    orbitals,
    shift_graph,
    shifts,
)
from .cayley import (
    ConnectionSet,
    CubelikeWitness,
    cayley_z2,
    cube_cover_map,
    cube_graph,
    cubelike_hull,
    enumerate_cubelike,
    folded_cube,
    halved_cube,
    is_cubelike,
    quotient_by_subgroup,
)
from .hom import (
    CoreResult,
    FibreCosetResult,
    HomProblem,
    compute_core,
    core_equivalent_to_shift_graph,
    deadline_in,
    fibres_are_cosets,
    find_homomorphism,
    hull_hom_test,
    induced_subgraph_search,
    is_core,
    is_hom_idempotent,
    verify_covering_map,
)
from .invariants import (
    chromatic_number,
    clique_coclique_equality,
    clique_number,
    find_coloring,
    independence_number,
    max_clique,
    max_independent_set,
)
from .spectral import Spectrum, char_poly, cube_spectrum, integer_spectrum, is_submultiset_of_cube
from .pipeline import FilterVerdict, PipelineConfig, Report, funnel_counts, run_corpus, run_filters
from .fixtures import FIXTURE_NAMES, fixtures
