"""Exact persistence modules over k[t].

Graded linear algebra, finitely presented modules and their barcodes,
module-level constructions (kernels, tensors, homs, ...), persistent
homology of filtered complexes, and a streaming reduction that accepts
simplices one at a time.
"""

from .fields import (
    Monomial,
    PrimeField,
    QQ,
    Rationals,
    field_from_string,
    monomial_divides,
    monomial_gcd,
    monomial_mul,
)
from .linalg import (
    ColumnEchelon,
    GradedBasis,
    GradedMatrix,
    HomogeneousElement,
    RowEchelon,
    SnfResult,
    block_diag,
    column_echelon,
    concat_bases,
    express_in_columns,
    free_kernel,
    graded_snf,
    hstack,
    membership,
    normal_form,
    row_echelon,
    vstack,
)
from .presentation import (
    INF,
    Bar,
    Barcode,
    Presentation,
    PresentationMorphism,
    barcode,
    dimension_at,
    minimize,
    rank_t_power,
    validate_morphism,
)
from .constructions import (
    SnfForm,
    cokernel,
    direct_sum,
    dual,
    exterior_power,
    free_pullback,
    hom,
    hom_element,
    image,
    kernel,
    pullback,
    pushout,
    snf_form,
    symmetric_power,
    tensor,
    tensor_over_k,
)
from .homology import (
    FilteredComplex,
    ReductionState,
    Simplex,
    TorsionChainComplex,
    boundaries_in_cycles,
    graded_boundary,
    persistent_homology,
    reduce_boundary,
    relative_complex,
    torsion_homology,
)
from .streaming import (
    BarcodeDelta,
    StreamState,
    add_simplex,
    current_barcode,
)

__all__ = [
    "Monomial",
    "PrimeField",
    "QQ",
    "Rationals",
    "field_from_string",
    "monomial_divides",
    "monomial_gcd",
    "monomial_mul",
    "ColumnEchelon",
    "GradedBasis",
    "GradedMatrix",
    "HomogeneousElement",
    "RowEchelon",
    "SnfResult",
    "block_diag",
    "column_echelon",
    "concat_bases",
    "express_in_columns",
    "free_kernel",
    "graded_snf",
    "hstack",
    "membership",
    "normal_form",
    "row_echelon",
    "vstack",
    "INF",
    "Bar",
    "Barcode",
    "Presentation",
    "PresentationMorphism",
    "barcode",
    "dimension_at",
    "minimize",
    "rank_t_power",
    "validate_morphism",
    "SnfForm",
    "cokernel",
    "direct_sum",
    "dual",
    "exterior_power",
    "free_pullback",
    "hom",
    "hom_element",
    "image",
    "kernel",
    "pullback",
    "pushout",
    "snf_form",
    "symmetric_power",
    "tensor",
    "tensor_over_k",
    "FilteredComplex",
    "ReductionState",
    "Simplex",
    "TorsionChainComplex",
    "boundaries_in_cycles",
    "graded_boundary",
    "persistent_homology",
    "reduce_boundary",
    "relative_complex",
    "torsion_homology",
    "BarcodeDelta",
    "StreamState",
    "add_simplex",
    "current_barcode",
]
