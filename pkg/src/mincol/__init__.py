"""Fox colorings, diagram rewriting, and minimum-color certificates.

The package computes lower-half sequences and the color bounds they induce
for torus knots T(2,p), mechanically constructs colored diagrams realizing
those bounds, and certifies minimum-color results with coloring linear
algebra over prime moduli.
"""

from mincol.lower_halves import (
    BoundReport,
    LowerHalfSequence,
    TwoAdicExpansion,
    fast_length_tail,
    is_prime,
    lh_sequence,
    log_bound,
    lower_half,
    ratio_report,
    teneva_bound,
    two_adic_expansion,
)
from mincol.diagrams import (
    BraidWord,
    Crossing,
    Diagram,
    RationalKnotSpec,
    braid_closure_diagram,
    continued_fraction,
    pd_parse,
    pd_serialize,
    rational_twist_diagram,
    torus_knot_diagram,
    validate_diagram,
)
from mincol.coloring import (
    ColoringSpace,
    FoxColoring,
    Modulus,
    Palette,
    coloring_parse,
    coloring_serialize,
    coloring_space,
    count_colorings,
    determinant,
    enumerate_nontrivial_colorings,
    is_fox_coloring,
    is_nontrivial,
    min_palette_over_colorings,
    palette,
)
from mincol.teneva import (
    BlockState,
    ColoredDiagram,
    MoveScript,
    TransformationTrace,
    materialize,
    remove_k1,
    replay_script,
    run_pipeline,
    standard_colored_torus,
    teneva_demo_5,
    teneva_set,
)
from mincol.certify import (
    Certificate,
    KnownBound,
    certificate_parse,
    certificate_serialize,
    certify_rational,
    certify_torus,
    known_lower_bound,
    verify_certificate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
