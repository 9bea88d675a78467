"""First-principles verifier on the 4-dimensional boundary-value space.

Coordinates are ``z = (alpha1, alpha2, beta1, beta2)``. An extension between
the minimal and maximal operator is a subspace ``L`` of C^4; its adjoint is
the complement of ``L`` with respect to the Lagrange form

    omega(g, f) = conj(z_g) @ J @ z_f,

which equals the boundary term of Green's identity. Everything here is linear
algebra; no closed-form adjoint or classification formula is used.
"""

from dataclasses import dataclass

import numpy as np

from ._linalg import RANK_TOL, null_space, numerical_rank, orth
from .report import ClassificationReport

# omega(g, f) = b2(g)* b1(f) - a2(g)* a1(f) - b1(g)* b2(f) + a1(g)* a2(f)
J_OMEGA = np.array(
    [
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
        [0, 0, 0, -1],
        [0, 0, 1, 0],
    ],
    dtype=complex,
)

# linear part of f -> Pf on boundary values: (a1, a2, b1, b2) -> (b1, -b2, a1, -a2)
P_MATRIX = np.array(
    [
        [0, 0, 1, 0],
        [0, 0, 0, -1],
        [1, 0, 0, 0],
        [0, -1, 0, 0],
    ],
    dtype=complex,
)

EQUAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BoundarySubspace:
    """Subspace of C^4 stored as a 4 x k matrix with orthonormal columns."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex).reshape(4, -1)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, vectors, tol=RANK_TOL):
        """Subspace spanned by ``vectors`` (an iterable of 4-vectors)."""
        vs = [np.asarray(v, dtype=complex).reshape(4) for v in vectors]
        if not vs:
            return cls.zero()
        return cls(orth(np.column_stack(vs), tol))

    @classmethod
    def from_constraints(cls, rows, tol=RANK_TOL):
        """Subspace ``{z : rows @ z = 0}``."""
        rows = np.asarray(rows, dtype=complex).reshape(-1, 4)
        return cls(null_space(rows, 4, tol))

    @classmethod
    def zero(cls):
        return cls(np.zeros((4, 0), dtype=complex))

    @classmethod
    def full(cls):
        return cls(np.eye(4, dtype=complex))

    @property
    def dim(self):
        return self.basis.shape[1]

    def projector(self):
        return self.basis @ self.basis.conj().T

    def contains(self, v, tol=EQUAL_TOL):
        v = np.asarray(v, dtype=complex).reshape(4)
        scale = max(np.linalg.norm(v), 1.0)
        return np.linalg.norm(v - self.projector() @ v) <= tol * scale

    def constraints(self):
        """Rows with orthonormal conjugates whose joint null space is this subspace."""
        return null_space(self.basis.conj().T, 4).conj().T

    def __repr__(self):
        return f"BoundarySubspace(dim={self.dim})"


def omega(g, f):
    """Lagrange form of two boundary vectors (conjugate-linear in ``g``)."""
    g = np.asarray(g, dtype=complex).reshape(4)
    f = np.asarray(f, dtype=complex).reshape(4)
    return complex(g.conj() @ J_OMEGA @ f)


def omega_complement(space):
    """``{g : omega(g, f) = 0 for all f in space}``."""
    if space.dim == 0:
        return BoundarySubspace.full()
    # g^H J B = 0  <=>  (J B)^H g = 0
    return BoundarySubspace(null_space((J_OMEGA @ space.basis).conj().T, 4))


def apply_p(space):
    return BoundarySubspace(P_MATRIX @ space.basis)


def apply_pt(space):
    # antilinear: conjugate coordinates first, then the linear part
    return BoundarySubspace(P_MATRIX @ space.basis.conj())


def projection_residual(a, b):
    """Largest distance from a unit vector of ``a`` to ``b`` and vice versa."""
    r1 = np.linalg.norm(a.basis - b.projector() @ a.basis, ord=2) if a.dim else 0.0
    r2 = np.linalg.norm(b.basis - a.projector() @ b.basis, ord=2) if b.dim else 0.0
    return float(max(r1, r2))


def subspace_equal(a, b, tol=EQUAL_TOL):
    if a.dim != b.dim:
        return False
    return projection_residual(a, b) < tol


def intersection_dimension(a, b):
    if a.dim == 0 or b.dim == 0:
        return 0
    return a.dim + b.dim - numerical_rank(np.hstack([a.basis, b.basis]))


def oracle_adjoint(space):
    """Boundary subspace of the Hilbert-space adjoint."""
    return omega_complement(space)


def oracle_p_adjoint(space):
    """Boundary subspace of the Krein-space (parity) adjoint: P applied to the adjoint."""
    return apply_p(omega_complement(space))


def oracle_classify(space):
    """Classify an extension by subspace equalities alone (no phase data)."""
    comp = omega_complement(space)
    return ClassificationReport(
        dimension=space.dim,
        self_adjoint=subspace_equal(space, comp),
        p_self_adjoint=subspace_equal(space, apply_p(comp)),
        pt_symmetric=subspace_equal(space, apply_pt(space)),
    )
