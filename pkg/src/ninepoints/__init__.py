"""Nine points in the plane with at most three on a line: enumeration,
realizability, cubic curves through them and Hilbert functions."""

from .combinatorics import (
    IncidenceStructure,
    LevelCatalog,
    SharedPairError,
    automorphism_count,
    canonical_key,
    compatible,
    enumerate_all,
    extend_level,
    isomorphic,
    make_structure,
    structure,
)
from .cubic import (
    CubicClass,
    CubicForm,
    DegenerateInputError,
    cb_filter,
    classify_on_cubic,
    constraint_matrix,
    covering_partitions,
    cubic_family_through_frame,
    extra_cubic_ideal,
    hilbert_profile,
    is_irreducible,
)
from .realization import (
    FrameMissingError,
    InconclusiveError,
    RealizabilityVerdict,
    Witness,
    alignment_ideal,
    base_points,
    classify_realizability,
    find_witness,
    forced_collinearities,
    parametrize,
    verify_witness,
)

__version__ = "0.1.0"
