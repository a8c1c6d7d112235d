"""Exact-arithmetic group cohomology over Z and friends: resolutions, cup
products, ring presentations, the homogeneous-spectrum model of the stable
module category, cohomological supports, and verification suites.
"""

from .errors import CohomstabError
from .rings import ZZ, QQ, Fp, GF, Zloc, Zmod, parse_ring
from .groups import (
    FiniteGroup,
    Subgroup,
    builtin_group,
    cyclic_group,
    direct_product,
    elementary_abelian_subgroups,
    from_permutation_generators,
    group_from_json,
    orbit_category,
)
from .linalg import AbGroup, Matrix
from .lattices import (
    Lattice,
    EquivariantMap,
    direct_sum,
    dual,
    hom_lattice,
    induce,
    lattice_from_json,
    permutation_lattice,
    random_lattice,
    regular_lattice,
    restrict,
    sign_lattice,
    standard_lattice,
    tensor,
    trivial_lattice,
)
from .homalg import (
    CohomologyClass,
    CompleteResolution,
    Resolution,
    carlson_lattice,
    cohomology,
    cohomology_mod,
    restriction_map,
    tate_cohomology,
)
from .cohomring import GradedModulePresentation, GradedRingPresentation, ring_presentation
from .spectrum import (
    ProjFiber,
    SpecHModel,
    SpecializationClosedSubset,
    quillen_check,
    stmod_spectrum,
)
from .support import (
    avrunin_scott_check,
    classify,
    cohomological_support,
    rank_variety,
)
from .stmod import (
    StableHomSpace,
    check_split_exact,
    chouinard_check,
    fracture_check,
    free_cover_sequence,
    is_weakly_projective,
    localize_lattice,
    maschke_check,
    stable_hom,
    syzygy,
    tate_unit_check,
    verify_elab_suite,
    verify_projectivity_certificate,
)

__version__ = "0.1.0"
