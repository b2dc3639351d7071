"""Exact combinatorics of root data and their alcove stabilizers.

Everything is computed over arbitrary-precision integers and exact
rationals: Smith normal forms, based root data for all Cartan types,
extended affine Weyl groups with their fundamental alcoves, folding along
diagram automorphisms, and the classification of alcove-point stabilizers.
"""

from .errors import (
    AlcoveError,
    CapExceeded,
    DimensionMismatch,
    InvalidRank,
    NonTermination,
    NonUnimodular,
    NotAnAutomorphism,
    NotIrreducible,
    NotReduced,
    NotSemisimple,
    PointOutsideAlcove,
    TooLarge,
    Unrecognized,
)
from .lattice import (
    FiniteAbelianGroup,
    IntMatrix,
    LatticeQuotient,
    SmithDecomposition,
    Subgroup,
    abelian_subgroup_invariants,
    coinvariants,
    cokernel,
    enumerate_subgroups,
    kernel_int_basis,
    lattice_membership,
    rational_solve,
    smith_normal_form,
    torsion_part,
    vector,
)
from .rootdata import (
    BasedRootDatum,
    CartanType,
    DatumAutomorphism,
    ValidationReport,
    build_datum,
    cartan_matrix,
    coxeter_number,
    diagram_automorphism,
    direct_sum,
    fundamental_group,
    highest_coroot,
    identify_type,
    identity_automorphism,
    parse_type,
    torus_datum,
    twist_permutation,
    validate,
)
from .weyl_affine import (
    AffineMap,
    Alcove,
    OmegaGroup,
    WeylElement,
    act,
    fundamental_alcove,
    generate_weyl,
    omega_by_barycenter,
    omega_by_cosets,
    random_alcove_point,
    reduce_to_alcove,
    weighted_barycenter,
)
from .restriction import (
    FoldReport,
    RestrictionResult,
    folded_omega,
    realize_type,
    restrict_datum,
    verify_folding,
)
from .rgroup import (
    ClassificationReport,
    CoinvariantsBridge,
    CompatibilityResult,
    ParameterPoint,
    StabilizerSubgroup,
    Table1Row,
    classify_stabilizers,
    coinvariants_bridge,
    compatibility_check,
    compatibility_sweep,
    parameter_point,
    point_from_label,
    stabilizer,
    stabilizer_preimage_orders,
    table1,
)

__version__ = "0.1.0"
