"""Eigenvalues of truncated extensions and empty-resolvent witnesses.

On ``[-X, X]`` an extension with boundary subspace ``L`` (dimension ``k``) is
given by ``4 - k`` orthonormal constraint rows ``C``. A number ``lam`` is an
eigenvalue when some solution of ``tau y = lam y`` has boundary values in
``L``, i.e. when ``C @ B(lam)`` has a null vector, where the columns of
``B(lam)`` are the boundary values of the even and odd fundamental solutions.
For ``k = 3`` the matrix is ``1 x 2`` and a null vector always exists.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import boundary
from .errors import ConfigError, MaxIterations, NoRootInBracket
from .ode import (
    DEFAULT_TOL,
    Grid,
    bump,
    combine,
    construct_representative,
    inner,
    reference_solutions,
    solve_many,
)

CONSTRUCTION_DEFECT = 1e-8
ACCEPTANCE_DEFECT = 1e-6


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    potential: object
    grid: Grid
    ref: object
    spec: object
    constraint: np.ndarray
    tol: float = DEFAULT_TOL
    _ends: object = field(default=None, repr=False)

    @classmethod
    def build(cls, spec, potential, grid, tol=DEFAULT_TOL, ref=None):
        if ref is None:
            ref = reference_solutions(potential, grid, tol)
        space = boundary.boundary_subspace(spec)
        c = space.constraints()
        w1, w2 = ref
        # reference values at (-X, X): rows w1, w2; columns y, y'
        ends = np.array(
            [[[w.y[i], w.dy[i]] for i in (0, -1)] for w in (w1, w2)], dtype=complex
        )
        return cls(potential, grid, ref, spec, c, tol, ends)

    @property
    def X(self):
        return self.grid.X

    @property
    def k(self):
        return 4 - self.constraint.shape[0]

    def endpoint_forms(self, y_ends):
        """Boundary values from ``(y, y')`` at ``-X`` and ``X``.

        ``y_ends`` has shape ``(2, 2)``: rows for the two ends.
        """
        out = np.empty(4, dtype=complex)
        for e in range(2):
            y, dy = y_ends[e]
            for j in range(2):
                wy, wdy = self._ends[j, e]
                out[2 * e + j] = np.conj(wy) * dy - np.conj(wdy) * y
        return out


@dataclass(frozen=True)
class EigenResult:
    lam: complex
    coeffs: tuple
    defect: float
    ode_tol: float
    X: float

    def to_dict(self, k):
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "defect": self.defect,
            "k": k,
            "X": self.X,
        }


def fundamental_pair(q, lam, grid, tol=DEFAULT_TOL):
    """Even ``y_e`` (``y(0)=1, y'(0)=0``) and odd ``y_o`` (``y(0)=0, y'(0)=1``) solutions."""
    y_e, y_o = solve_many(q, lam, [[1.0, 0.0], [0.0, 1.0]], grid, tol)
    return y_e, y_o


def _end_grid(X):
    return Grid(X, np.array([-X, 0.0, X]))


def boundary_matrix(op, lam):
    """``4 x 2`` matrix of boundary values of the fundamental pair."""
    y_e, y_o = fundamental_pair(op.potential, lam, _end_grid(op.X), op.tol)
    cols = []
    for s in (y_e, y_o):
        cols.append(op.endpoint_forms(np.array([[s.y[0], s.dy[0]], [s.y[-1], s.dy[-1]]])))
    return np.column_stack(cols)


def char_matrix(op, lam):
    return op.constraint @ boundary_matrix(op, lam)


def char_det(op, lam):
    if op.k != 2:
        raise ConfigError("the characteristic determinant needs a 2-dimensional extension")
    return complex(np.linalg.det(char_matrix(op, lam)))


def _null_result(op, lam, m):
    lam = complex(lam)
    _, s, vh = np.linalg.svd(m)
    c = vh[-1].conj()
    defect = float(np.linalg.norm(m @ c))
    return EigenResult(lam, (complex(c[0]), complex(c[1])), defect, op.tol, op.X)


def eigen_result(op, lam):
    """Best null vector of the characteristic matrix at ``lam``."""
    return _null_result(op, lam, char_matrix(op, lam))


def smallest_singular_value(op, lam):
    """``min |M v|`` over unit ``v``; for the ``1 x 2`` matrix of a 3-dim op this is rounding noise."""
    m = char_matrix(op, lam)
    _, _, vh = np.linalg.svd(m)
    return float(np.linalg.norm(m @ vh[-1].conj()))


def eigenvalues_real_scan(op, lambda_min, lambda_max, count=200, xtol=1e-10):
    """Real eigenvalues in ``[lambda_min, lambda_max]`` of a self-adjoint 2-dim op.

    The determinant is sampled at ``count`` equally spaced points. For a
    self-adjoint condition it has constant phase on the real axis, so after
    removing the fitted phase its real part changes sign at each simple root.
    Each bracket is refined with Brent's method.
    """
    if op.k != 2:
        raise ConfigError("real scan needs a 2-dimensional extension")
    if count < 2 or not lambda_max > lambda_min:
        raise ConfigError("need lambda_max > lambda_min and count >= 2")
    grid = np.linspace(lambda_min, lambda_max, count)
    dets = np.array([char_det(op, x) for x in grid])
    theta = 0.5 * np.angle(np.sum(dets**2))
    rot = np.exp(-1j * theta)
    vals = (rot * dets).real

    def g(x):
        return (rot * char_det(op, x)).real

    roots = []
    for i in range(count - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(grid[i])
        elif a * b < 0:
            try:
                roots.append(optimize.brentq(g, grid[i], grid[i + 1], xtol=xtol, maxiter=200))
            except RuntimeError as exc:
                raise MaxIterations(str(exc)) from exc
    if vals[-1] == 0.0:
        roots.append(grid[-1])
    if not roots:
        raise NoRootInBracket(f"no sign change of the determinant in [{lambda_min}, {lambda_max}]")
    return [eigen_result(op, r) for r in roots]


def eigenvalue_newton(op, seed, tol=1e-10, maxiter=50):
    """Complex eigenvalue of a 2-dim op near ``seed`` (secant iteration on the determinant)."""
    try:
        lam = optimize.newton(lambda x: char_det(op, x), complex(seed), tol=tol, maxiter=maxiter)
    except RuntimeError as exc:
        raise MaxIterations(str(exc)) from exc
    return eigen_result(op, lam)


def empty_resolvent_witness(op, lam):
    """Eigen-solution at an arbitrary ``lam`` for a 3-dimensional extension."""
    if op.k != 3:
        raise ConfigError("empty-resolvent witnesses exist for 3-dimensional extensions")
    m = char_matrix(op, lam)
    r0, r1 = m[0]
    nrm = np.hypot(abs(r0), abs(r1))
    c = np.array([1.0, 0.0]) if nrm == 0 else np.array([-r1, r0]) / nrm
    defect = float(abs(m[0] @ c))
    return EigenResult(complex(lam), (complex(c[0]), complex(c[1])), defect, op.tol, op.X)


def eigenfunction(op, result):
    """The solution ``c0 * y_e + c1 * y_o`` on the operator's grid."""
    y_e, y_o = fundamental_pair(op.potential, result.lam, op.grid, op.tol)
    return combine([(result.coeffs[0], y_e), (result.coeffs[1], y_o)])


@dataclass(frozen=True)
class OrthogonalityReport:
    lam: complex
    residual: float
    per_function: tuple
    witness_defect: float
    panel_size: int


def domain_panel(op, rng, n_reps=6, n_bumps=4):
    """Functions in the domain of ``op``: representatives of random boundary
    vectors in ``L`` and compactly supported bumps."""
    space = boundary.boundary_subspace(op.spec)
    panel = []
    for _ in range(n_reps):
        c = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
        panel.append(construct_representative(space.basis @ c, op.ref))
    X = op.X
    for _ in range(n_bumps):
        r = rng.uniform(0.5, 0.4 * X)
        center = rng.uniform(-X + r, X - r)
        phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
        panel.append(bump(op.grid, center, r, op.potential).scaled(phase))
    return panel


def residual_spectrum_witness(op, lam, rng=None, n_reps=6, n_bumps=4):
    """Non-density of the range of ``op - lam`` for a 1-dimensional extension.

    The adjoint is 3-dimensional, so ``conj(lam)`` is an eigenvalue of it with
    eigenfunction ``g``. Every ``(tau - lam) f`` with ``f`` in the domain is
    then orthogonal to ``g``; the report gives the largest normalised overlap
    over a panel of such ``f``.
    """
    if op.k != 1:
        raise ConfigError("residual-spectrum witnesses are for 1-dimensional extensions")
    rng = np.random.default_rng(0) if rng is None else rng
    lam = complex(lam)
    adj = TruncatedOperator.build(
        boundary.adjoint(op.spec), op.potential, op.grid, op.tol, op.ref
    )
    res = empty_resolvent_witness(adj, lam.conjugate())
    g = eigenfunction(adj, res)
    g_norm = np.sqrt(abs(inner(g.y, g.y, op.grid)))
    overlaps = []
    for f in domain_panel(op, rng, n_reps, n_bumps):
        h = f.tau - lam * f.y
        h_norm = np.sqrt(abs(inner(h, h, op.grid)))
        if h_norm == 0.0:
            # f is itself an eigenfunction at lam; (tau - lam) f = 0 is trivially orthogonal
            overlaps.append(0.0)
            continue
        overlaps.append(float(abs(inner(h, g.y, op.grid)) / (h_norm * g_norm)))
    return OrthogonalityReport(lam, max(overlaps), tuple(overlaps), res.defect, len(overlaps))


# --- standard separated conditions -------------------------------------------------


def _end_rows(ref, use_derivative):
    w1, w2 = ref
    k = 1 if use_derivative else 0
    left = [(w2.y, w2.dy)[k][0], -(w1.y, w1.dy)[k][0]]
    right = [(w2.y, w2.dy)[k][-1], -(w1.y, w1.dy)[k][-1]]
    return np.array([[left[0], left[1], 0, 0], [0, 0, right[0], right[1]]], dtype=complex)


def dirichlet_spec(ref):
    """Separated condition ``f(-X) = f(X) = 0``.

    Uses ``f = w2 [w1, f] - w1 [w2, f]`` at each end.
    """
    return boundary.canonicalize(_end_rows(ref, False))


def neumann_spec(ref):
    """Separated condition ``f'(-X) = f'(X) = 0``."""
    return boundary.canonicalize(_end_rows(ref, True))
