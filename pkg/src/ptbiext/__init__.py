"""Classification of bi-extensions of a singular Sturm-Liouville operator.

The differential expression is ``-y'' - q(x) y`` with an even potential in
the limit-circle case at both ends. Extensions are described by boundary
conditions on four Wronskian functionals and sorted into self-adjoint,
parity-self-adjoint and PT-symmetric classes.
"""

from .boundary import (
    BoundaryForm,
    Direction,
    MixedBC,
    OneDimBC,
    SeparatedBC,
    ThreeDimBC,
    Variant,
    adjoint,
    boundary_subspace,
    canonicalize,
    classify,
    extension_dimension,
    is_p_self_adjoint,
    is_pt_symmetric,
    is_self_adjoint,
    p_adjoint,
    p_map,
    pt_map,
)
from .errors import PtBiextError, RankDeficient
from .oracle import BoundarySubspace, oracle_classify
from .report import ClassificationReport

__version__ = "0.1.0"

__all__ = [
    "BoundaryForm",
    "BoundarySubspace",
    "ClassificationReport",
    "Direction",
    "MixedBC",
    "OneDimBC",
    "PtBiextError",
    "RankDeficient",
    "SeparatedBC",
    "ThreeDimBC",
    "Variant",
    "adjoint",
    "boundary_subspace",
    "canonicalize",
    "classify",
    "extension_dimension",
    "is_p_self_adjoint",
    "is_pt_symmetric",
    "is_self_adjoint",
    "oracle_classify",
    "p_adjoint",
    "p_map",
    "pt_map",
]
