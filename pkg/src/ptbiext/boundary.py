"""Extensions of the minimal operator described by boundary conditions.

A boundary vector is ``(alpha1, alpha2, beta1, beta2)``: the Wronskian
brackets of a function against the odd and even reference solutions at the
left and right end. Every extension is one of four condition families:

* ``SeparatedBC`` -- one condition at each end (2-dimensional),
* ``MixedBC`` -- one end expressed through the other by a 2x2 matrix (2-dimensional),
* ``ThreeDimBC`` -- a single linear relation (3-dimensional),
* ``OneDimBC`` -- three relations (1-dimensional).

This module holds the closed-form adjoint, parity-adjoint and classification
formulas. :mod:`ptbiext.oracle` re-derives the same answers by plain linear
algebra and is used to cross-check them.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Union

import numpy as np

from . import oracle
from ._linalg import RANK_TOL, numerical_rank, singular_values
from .errors import PtBiextError, RankDeficient
from .oracle import BoundarySubspace
from .report import ClassificationReport

TWO_PI = 2.0 * math.pi
# closed-form equality tests (relative to the size of the coefficients)
CLOSED_TOL = 1e-9
UNIT_TOL = 1e-9


class InternalInconsistency(PtBiextError):
    """Closed-form classification disagrees with the subspace oracle."""


class Direction(str, Enum):
    ALPHA_FROM_BETA = "alpha_from_beta"
    BETA_FROM_ALPHA = "beta_from_alpha"


class Variant(str, Enum):
    I = "I"
    II = "II"


def _matrix2(m):
    a = np.asarray(m, dtype=complex)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {a.shape}")
    return tuple(tuple(complex(x) for x in row) for row in a)


def _is_unit(z):
    return abs(abs(z) - 1.0) <= UNIT_TOL


def _canonical_end(xi, angle):
    """Unique representative of one separated condition.

    ``(xi, a)``, ``(-xi, pi - a)`` and ``(xi, a + pi)`` describe the same
    condition, and ``xi`` is immaterial when ``sin(a) cos(a) = 0``.
    """
    if abs(math.sin(angle) * math.cos(angle)) < CLOSED_TOL:
        xi = 1.0 + 0.0j
    th = cmath.phase(xi)
    if th > math.pi / 2 or th <= -math.pi / 2:
        xi = -xi
        angle = math.pi - angle
    angle = math.fmod(angle, math.pi)
    if angle < 0:
        angle += math.pi
    if math.pi - angle < 1e-15:
        angle = 0.0
    return complex(xi), angle


def _end_from_row(a, b):
    """``(xi, angle)`` with ``(xi cos, -sin)`` proportional to ``(a, b)``."""
    a, b = complex(a), complex(b)
    scale = max(abs(a), abs(b))
    if scale == 0:
        raise RankDeficient("separated condition with a zero row")
    if abs(b) <= RANK_TOL * scale:
        return 1.0 + 0.0j, 0.0
    if abs(a) <= RANK_TOL * scale:
        return 1.0 + 0.0j, math.pi / 2
    r = -a / b
    return r / abs(r), math.atan2(1.0, abs(r))


@dataclass(frozen=True)
class SeparatedBC:
    """``alpha1 xi cos(alpha) - alpha2 sin(alpha) = 0`` and the same at the right end."""

    xi: complex
    eta: complex
    alpha: float
    beta: float

    dimension = 2

    def __post_init__(self):
        for name in ("xi", "eta"):
            z = complex(getattr(self, name))
            if not _is_unit(z):
                raise ValueError(f"{name} must have modulus 1, got |{name}| = {abs(z)}")
            object.__setattr__(self, name, z / abs(z))
        for name in ("alpha", "beta"):
            t = math.fmod(float(getattr(self, name)), TWO_PI)
            if t < 0:
                t += TWO_PI
            object.__setattr__(self, name, t)

    @classmethod
    def from_rows(cls, left, right):
        """Build from ``left . (alpha1, alpha2) = 0`` and ``right . (beta1, beta2) = 0``."""
        xi, a = _end_from_row(*left)
        eta, b = _end_from_row(*right)
        return cls(xi, eta, a, b).canonical()

    def canonical(self):
        xi, a = _canonical_end(self.xi, self.alpha)
        eta, b = _canonical_end(self.eta, self.beta)
        return SeparatedBC(xi, eta, a, b)

    def constraints(self):
        ca, sa = math.cos(self.alpha), math.sin(self.alpha)
        cb, sb = math.cos(self.beta), math.sin(self.beta)
        return np.array(
            [[self.xi * ca, -sa, 0, 0], [0, 0, self.eta * cb, -sb]], dtype=complex
        )


@dataclass(frozen=True)
class MixedBC:
    """``(alpha1, alpha2) = M (beta1, beta2)`` or the reverse, with ``M`` invertible."""

    matrix: tuple
    direction: Direction = Direction.ALPHA_FROM_BETA

    dimension = 2

    def __post_init__(self):
        m = _matrix2(self.matrix)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "direction", Direction(self.direction))
        if numerical_rank(np.array(m)) < 2:
            raise RankDeficient(
                "mixed boundary matrix must be invertible; rank-deficient "
                "conditions have to be written in another form",
                singular_values(np.array(m)),
            )

    @property
    def array(self):
        return np.array(self.matrix, dtype=complex)

    def constraints(self):
        m = self.array
        eye = np.eye(2, dtype=complex)
        if self.direction is Direction.ALPHA_FROM_BETA:
            return np.hstack([eye, -m])
        return np.hstack([-m, eye])


@dataclass(frozen=True)
class ThreeDimBC:
    """``a alpha1 + b alpha2 = c beta1 + d beta2``."""

    a: complex
    b: complex
    c: complex
    d: complex

    dimension = 3

    def __post_init__(self):
        vals = [complex(getattr(self, k)) for k in "abcd"]
        if sum(abs(v) for v in vals) == 0:
            raise RankDeficient("all coefficients of a 3-dimensional condition vanish")
        for k, v in zip("abcd", vals):
            object.__setattr__(self, k, v)

    @property
    def coeffs(self):
        return (self.a, self.b, self.c, self.d)

    def constraints(self):
        return np.array([[self.a, self.b, -self.c, -self.d]], dtype=complex)


@dataclass(frozen=True)
class OneDimBC:
    """Three relations.

    Variant I: ``p alpha1 + q alpha2 = 0`` and ``(beta1, beta2) = M (alpha1, alpha2)``.
    Variant II: ``p beta1 + q beta2 = 0`` and ``(alpha1, alpha2) = M (beta1, beta2)``.
    """

    variant: Variant
    pair: tuple
    matrix: tuple

    dimension = 1

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        p, q = (complex(v) for v in self.pair)
        if abs(p) + abs(q) == 0:
            raise RankDeficient("the scalar condition of a 1-dimensional extension vanishes")
        object.__setattr__(self, "pair", (p, q))
        object.__setattr__(self, "matrix", _matrix2(self.matrix))

    @property
    def array(self):
        return np.array(self.matrix, dtype=complex)

    def constraints(self):
        p, q = self.pair
        m = self.array
        eye = np.eye(2, dtype=complex)
        if self.variant is Variant.I:
            scalar = np.array([[p, q, 0, 0]], dtype=complex)
            link = np.hstack([m, -eye])
        else:
            scalar = np.array([[0, 0, p, q]], dtype=complex)
            link = np.hstack([-eye, m])
        return np.vstack([scalar, link])


ExtensionSpec = Union[SeparatedBC, MixedBC, ThreeDimBC, OneDimBC]


# --- maps on boundary vectors ------------------------------------------------


class BoundaryForm(NamedTuple):
    """Boundary values ``(alpha1, alpha2, beta1, beta2)`` of one function."""

    a1: complex
    a2: complex
    b1: complex
    b2: complex

    def vector(self):
        return np.array(self, dtype=complex)


def p_map(v):
    """Boundary values of ``f(-x)``: ``(a1, a2, b1, b2) -> (b1, -b2, a1, -a2)``."""
    a1, a2, b1, b2 = (complex(x) for x in v)
    return np.array([b1, -b2, a1, -a2], dtype=complex)


def pt_map(v):
    """Boundary values of ``conj(f(-x))``."""
    a1, a2, b1, b2 = (complex(x) for x in v)
    return np.array(
        [b1.conjugate(), -b2.conjugate(), a1.conjugate(), -a2.conjugate()], dtype=complex
    )


# --- structure ------------------------------------------------------------------


def canonicalize(rows):
    """Turn two independent homogeneous conditions ``rows @ z = 0`` into a spec.

    The left block (columns for ``alpha``) is tried first, then the right
    block; if both are singular the conditions split into one per end.
    """
    rows = np.asarray(rows, dtype=complex)
    if rows.shape != (2, 4):
        raise ValueError(f"expected a 2x4 matrix, got shape {rows.shape}")
    sv = singular_values(rows)
    if sv[0] == 0 or sv[-1] <= RANK_TOL * sv[0]:
        raise RankDeficient("boundary conditions are not independent", sv)
    left, right = rows[:, :2], rows[:, 2:]

    def invertible(block):
        return singular_values(block)[-1] > RANK_TOL * sv[0]

    if invertible(left):
        return MixedBC(-np.linalg.solve(left, right), Direction.ALPHA_FROM_BETA)
    if invertible(right):
        return MixedBC(-np.linalg.solve(right, left), Direction.BETA_FROM_ALPHA)
    # both blocks have rank one: take the combinations that kill one end
    t = _left_null(right)
    s = _left_null(left)
    return SeparatedBC.from_rows(t @ left, s @ right)


def _left_null(block):
    u, _, _ = np.linalg.svd(block)
    return u[:, -1].conj()


def boundary_subspace(spec):
    space = BoundarySubspace.from_constraints(spec.constraints())
    if space.dim != spec.dimension:
        raise RankDeficient(
            f"{type(spec).__name__} induces a {space.dim}-dimensional subspace, "
            f"expected {spec.dimension}",
            singular_values(spec.constraints()),
        )
    return space


def extension_dimension(spec):
    return 4 - numerical_rank(spec.constraints())


# --- adjoints -------------------------------------------------------------------


def _conj(z):
    return complex(z).conjugate()


def _mixed_adjoint_matrix(m):
    (a, b), (c, d) = m
    return ((_conj(d), -_conj(b)), (-_conj(c), _conj(a)))


def _mixed_p_adjoint_matrix(m):
    (a, b), (c, d) = m
    return ((_conj(d), _conj(b)), (_conj(c), _conj(a)))


def _pivot(values):
    return max(range(len(values)), key=lambda i: abs(values[i]))


def _three_dim_adjoint(spec):
    a, b, c, d = (_conj(v) for v in spec.coeffs)
    k = _pivot(spec.coeffs)
    if k == 0:
        return OneDimBC(Variant.I, (a, b), ((0, -d / a), (0, c / a)))
    if k == 1:
        return OneDimBC(Variant.I, (a, b), ((d / b, 0), (-c / b, 0)))
    if k == 2:
        return OneDimBC(Variant.II, (c, d), ((0, -b / c), (0, a / c)))
    return OneDimBC(Variant.II, (c, d), ((b / d, 0), (-a / d, 0)))


def _three_dim_p_adjoint(spec):
    a, b, c, d = (_conj(v) for v in spec.coeffs)
    k = _pivot(spec.coeffs)
    if k == 0:
        return OneDimBC(Variant.II, (a, -b), ((0, d / a), (0, c / a)))
    if k == 1:
        return OneDimBC(Variant.II, (a, -b), ((d / b, 0), (c / b, 0)))
    if k == 2:
        return OneDimBC(Variant.I, (c, -d), ((0, b / c), (0, a / c)))
    # the printed form of this case has a sign slip in the lower-left entry
    return OneDimBC(Variant.I, (c, -d), ((b / d, 0), (a / d, 0)))


def one_dim_adjoint_coeffs(spec):
    """Coefficients ``(a, b, c, d)`` of the 3-dimensional adjoint condition.

    The adjoint domain is ``a alpha1 + b alpha2 = c beta1 + d beta2``.
    """
    (al, be), (ga, de) = spec.matrix
    rot = np.array(
        [[_conj(de), -_conj(ga)], [-_conj(be), _conj(al)]], dtype=complex
    )
    p, q = (_conj(v) for v in spec.pair)
    x, y = rot @ np.array([p, q])
    if spec.variant is Variant.I:
        return (p, q, complex(x), complex(y))
    return (complex(x), complex(y), p, q)


def adjoint(spec):
    """Closed-form spec of the Hilbert-space adjoint."""
    if isinstance(spec, SeparatedBC):
        return SeparatedBC(spec.xi.conjugate(), spec.eta.conjugate(), spec.alpha, spec.beta).canonical()
    if isinstance(spec, MixedBC):
        flipped = (
            Direction.BETA_FROM_ALPHA
            if spec.direction is Direction.ALPHA_FROM_BETA
            else Direction.ALPHA_FROM_BETA
        )
        return MixedBC(_mixed_adjoint_matrix(spec.matrix), flipped)
    if isinstance(spec, ThreeDimBC):
        return _three_dim_adjoint(spec)
    if isinstance(spec, OneDimBC):
        return ThreeDimBC(*one_dim_adjoint_coeffs(spec))
    raise TypeError(f"not an extension spec: {spec!r}")


def p_adjoint(spec):
    """Closed-form spec of the adjoint in the parity Krein space."""
    if isinstance(spec, SeparatedBC):
        return SeparatedBC(
            spec.eta.conjugate(), spec.xi.conjugate(), -spec.beta, -spec.alpha
        ).canonical()
    if isinstance(spec, MixedBC):
        return MixedBC(_mixed_p_adjoint_matrix(spec.matrix), spec.direction)
    if isinstance(spec, ThreeDimBC):
        return _three_dim_p_adjoint(spec)
    if isinstance(spec, OneDimBC):
        a, b, c, d = one_dim_adjoint_coeffs(spec)
        return ThreeDimBC(c, -d, a, -b)
    raise TypeError(f"not an extension spec: {spec!r}")


# --- classification -------------------------------------------------------------


def _degenerate(angle):
    return abs(math.sin(angle) * math.cos(angle)) < CLOSED_TOL


def _mod_pi_zero(angle):
    return abs(math.sin(angle)) < CLOSED_TOL


def _scale(m):
    return max(1.0, float(np.max(np.abs(m))))


def _real(z, scale):
    return abs(complex(z).imag) <= CLOSED_TOL * scale


def _unit_det_phase(m):
    """``phi`` in ``[0, pi)`` with ``det m = exp(2 i phi)``, or None if ``|det m| != 1``."""
    det = complex(np.linalg.det(m))
    if abs(abs(det) - 1.0) > CLOSED_TOL * _scale(m) ** 2:
        return None
    phi = math.fmod(cmath.phase(det) / 2.0, math.pi)
    if phi < 0:
        phi += math.pi
    if math.pi - phi < 1e-12:
        phi = 0.0
    return phi


def pt_normal_form(spec):
    """``(phi, K)`` with ``M = exp(i phi) K`` in PT normal form, or None."""
    if not isinstance(spec, MixedBC):
        return None
    m = spec.array
    phi = _unit_det_phase(m)
    if phi is None:
        return None
    k = cmath.exp(-1j * phi) * m
    s = _scale(m)
    if not (_real(k[0, 1], s) and _real(k[1, 0], s)):
        return None
    if abs(k[1, 1] - k[0, 0].conjugate()) > CLOSED_TOL * s:
        return None
    return phi, k


def is_self_adjoint(spec):
    if isinstance(spec, SeparatedBC):
        c = spec.canonical()
        return abs(c.xi - 1) <= CLOSED_TOL and abs(c.eta - 1) <= CLOSED_TOL
    if isinstance(spec, MixedBC):
        m = spec.array
        phi = _unit_det_phase(m)
        if phi is None:
            return False
        k = cmath.exp(-1j * phi) * m
        s = _scale(m)
        return all(_real(x, s) for x in k.ravel())
    return False


def is_p_self_adjoint(spec):
    if isinstance(spec, SeparatedBC):
        c = spec.canonical()
        if _degenerate(c.alpha) or _degenerate(c.beta):
            return _mod_pi_zero(c.alpha + c.beta)
        prod = c.xi * c.eta
        if abs(prod - 1) <= CLOSED_TOL and _mod_pi_zero(c.alpha + c.beta):
            return True
        if abs(prod + 1) <= CLOSED_TOL and _mod_pi_zero(c.alpha - c.beta):
            return True
        return False
    if isinstance(spec, MixedBC):
        (a, b), (c, d) = spec.matrix
        s = _scale(spec.array)
        return abs(d - a.conjugate()) <= CLOSED_TOL * s and _real(b, s) and _real(c, s)
    return False


def _three_dim_pt(a, b, c, d):
    s = max(abs(a), abs(b), abs(c), abs(d))
    return (
        abs(abs(a) - abs(c)) <= CLOSED_TOL * s
        and abs(abs(b) - abs(d)) <= CLOSED_TOL * s
        and abs(a * d.conjugate() + b * c.conjugate()) <= CLOSED_TOL * s * s
    )


def is_pt_symmetric(spec):
    if isinstance(spec, SeparatedBC):
        return is_p_self_adjoint(spec)
    if isinstance(spec, MixedBC):
        return pt_normal_form(spec) is not None
    if isinstance(spec, ThreeDimBC):
        return _three_dim_pt(*spec.coeffs)
    if isinstance(spec, OneDimBC):
        # PT symmetry passes to the adjoint and back
        return _three_dim_pt(*one_dim_adjoint_coeffs(spec))
    raise TypeError(f"not an extension spec: {spec!r}")


def classify(spec, cross_check=False):
    """Closed-form classification.

    With ``cross_check`` the flags are compared with
    :func:`ptbiext.oracle.oracle_classify` and any disagreement raises
    :class:`InternalInconsistency`.
    """
    pt = is_pt_symmetric(spec)
    phase = normal = None
    if pt and isinstance(spec, MixedBC):
        phase, k = pt_normal_form(spec)
        normal = tuple(tuple(complex(x) for x in row) for row in k)
    report = ClassificationReport(
        dimension=spec.dimension,
        self_adjoint=is_self_adjoint(spec),
        p_self_adjoint=is_p_self_adjoint(spec),
        pt_symmetric=pt,
        phase=phase,
        normal_form=normal,
    )
    if cross_check:
        ref = oracle.oracle_classify(boundary_subspace(spec))
        if ref.flags != report.flags or ref.dimension != report.dimension:
            raise InternalInconsistency(
                f"closed form {report.flags} vs oracle {ref.flags} for {spec!r}"
            )
    return report
