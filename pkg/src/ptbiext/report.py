from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class ClassificationReport:
    """Which of the three symmetry classes an extension belongs to.

    ``phase`` and ``normal_form`` are only set for PT-symmetric mixed
    conditions, where the mixed matrix equals ``exp(i*phase) * normal_form``
    with real off-diagonal entries, conjugate diagonal entries and unit
    determinant.
    """

    dimension: int
    self_adjoint: bool
    p_self_adjoint: bool
    pt_symmetric: bool
    phase: Optional[float] = None
    normal_form: Optional[tuple] = None

    @property
    def flags(self):
        return (self.self_adjoint, self.p_self_adjoint, self.pt_symmetric)

    def normal_form_array(self):
        if self.normal_form is None:
            return None
        return np.array(self.normal_form, dtype=complex)
