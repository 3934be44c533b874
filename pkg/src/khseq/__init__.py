"""khseq: exact Khovanov-style homology for strongly invertible knots.

The package computes, over Z, Z/4, and GF(2):

* Khovanov homology of knot diagrams given in planar-diagram form,
* annular Khovanov homology of diagrams drawn in a thickened annulus,
* the two quotient closures of a two-ended tangle in the complement of
  an axis, together with the symmetric double branched lift,
* the axis-moving chain maps between the two closures and their cone,
* the involutive (Tate-style) localization of the lifted complex,

and cross-checks the localized answer against the cone of the
axis-moving map, grading by grading.
"""

from __future__ import annotations

from pathlib import Path

__version__ = "0.1.0"


def corpus_path(name: str) -> Path:
    """Path of a bundled example tangle, by bare name or file name.

    >>> corpus_path("unknot").name
    'unknot.tangle'
    """
    fname = name if "." in name else name + ".tangle"
    p = Path(__file__).with_name("data") / fname
    if not p.is_file():
        have = ", ".join(sorted(q.stem for q in p.parent.glob("*.tangle")))
        raise FileNotFoundError(f"no bundled tangle {name!r} (have: {have})")
    return p



from .diagram import (
    AnnularDiagram,
    AxisCrossingType,
    DiagramInvariants,
    IntravergentDiagram,
    QuotientTangle,
    Resolution,
    WrapDirection,
    apply_axis_wrap_move,
    close_quotients,
    diagram_invariants,
    lift_intravergent,
    parse_tangle,
    resolve,
)
from .khovanov import basepoint_action, build_ackh, build_ckh, euler_characteristics
from .complexes import (
    ChainMap,
    GradedComplex,
    HomologyTable,
    Ring,
    SSPage,
    bockstein,
    filtered_ss_pages,
    homology,
    induced_map,
    mapping_cone,
)
from .equivariant import (
    TateReport,
    axis_moving_maps,
    pair_cone_homology,
    tate_collapsed_homology,
    tate_ss_pages,
    tau_chain_map,
    verify_theorem,
)

__all__ = [
    "AnnularDiagram",
    "AxisCrossingType",
    "ChainMap",
    "DiagramInvariants",
    "GradedComplex",
    "HomologyTable",
    "IntravergentDiagram",
    "QuotientTangle",
    "Resolution",
    "Ring",
    "SSPage",
    "TateReport",
    "WrapDirection",
    "apply_axis_wrap_move",
    "axis_moving_maps",
    "basepoint_action",
    "bockstein",
    "build_ackh",
    "build_ckh",
    "close_quotients",
    "corpus_path",
    "diagram_invariants",
    "euler_characteristics",
    "filtered_ss_pages",
    "homology",
    "induced_map",
    "lift_intravergent",
    "mapping_cone",
    "pair_cone_homology",
    "parse_tangle",
    "resolve",
    "tate_collapsed_homology",
    "tate_ss_pages",
    "tau_chain_map",
    "verify_theorem",
]
