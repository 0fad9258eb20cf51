"""Exact workbench for finite braided groupoids and quiver skew braces.

Everything is table-based and exhaustive: validators check every axiom
instance, constructors re-verify what they build, and searches are
deterministic so results are reproducible bit for bit.
"""

from .report import BoundExceeded, Failure, Report, StructureError
from .quiver import (
    Quiver,
    QuiverMorphism,
    TensorPair,
    compose_morphisms,
    tensor,
    validate_quiver_morphism,
)
from .heap import (
    GroupTable,
    Heap,
    cyclic_group,
    group_from_heap,
    heap_from_group,
    validate_group,
    validate_heap,
)
from .groupoid import (
    Groupoid,
    Subgroupoid,
    coarse_groupoid,
    connected_components,
    disjoint_union_groupoids,
    group_groupoid,
    is_connected,
    is_groupoid_morphism,
    is_normal_subgroupoid,
    loop_bundle,
    quotient_groupoid,
    units_subgroupoid,
    whole_subgroupoid,
    validate_groupoid,
)
from .brace import (
    Braiding,
    QuiverSkewBrace,
    braiding_from_heap,
    braiding_from_qskb,
    check_yang_baxter,
    coarse_qskb,
    flip_candidate,
    invert_braiding,
    maximal_coarse_subgroupoid,
    parallelise_check,
    qskb_from_braiding,
    validate_braiding,
    validate_qskb,
)
from .morphisms import (
    IdealCandidate,
    QskbMorphism,
    check_left_harpoon_invariance,
    image_subgroupoid,
    is_braided_morphism,
    is_braided_quasimorphism,
    is_ideal,
    is_ideal_bundle,
    is_qskb_morphism,
    kernel,
    quotient_qskb,
)
from .products import (
    BalancedTriple,
    ClassicalProductData,
    CrossedData,
    FPData,
    SplitExtension,
    balanced_classes,
    check_fpcomp,
    classical_semidirect,
    crossed_product,
    direct_product,
    disjoint_union_qskb,
    fp_semidirect,
    ideal_of_classical_product,
    one_sided_crossed,
    reconstruct_from_split,
    sub_qskb,
    sum_decomposition_check,
    tt_operator,
    validate_crossed_data,
)
from .search import (
    ClassificationResult,
    classify,
    enumerate_groupoids,
    enumerate_heaps,
    enumerate_qskb_on,
    find_loop_nonideal_witness,
    ideals_of,
    iso_groupoid,
    iso_qskb,
    prunable_split_check,
)
from . import fixtures

__all__ = [name for name in dir() if not name.startswith("_")]
