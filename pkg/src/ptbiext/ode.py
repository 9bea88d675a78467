"""Numerical side of ``tau_q y = -y'' - q(x) y`` on a truncated interval ``[-X, X]``.

The boundary functionals are Wronskian-type brackets against an odd and an
even reference solution, evaluated at ``-X`` and ``X`` instead of the limits at
infinity. Because the bracket of the two reference solutions is identically 1,
all algebraic identities between the functionals hold exactly at finite ``X``.
"""

import cmath
import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from .errors import (
    AsymmetricGrid,
    ConfigError,
    NodeMissing,
    NonFiniteValue,
    StepSizeUnderflow,
)

DEFAULT_X = 8.0
DEFAULT_TOL = 1e-10
DEFAULT_NODES = 4097


# --- potentials ------------------------------------------------------------------


@dataclass(frozen=True)
class Potential:
    """Even real potential ``q``; the equation is ``-y'' - q y = lambda y``.

    ``kind`` is ``"monomial"`` (``q = x**degree``), ``"zero"`` or
    ``"tabulated"`` (cubic spline through ``samples`` given for ``x >= 0``).
    """

    kind: str = "monomial"
    degree: int = 4
    samples: tuple = ()

    def __post_init__(self):
        if self.kind not in ("monomial", "zero", "tabulated"):
            raise ConfigError(f"unknown potential kind {self.kind!r}")
        if self.kind == "monomial" and (self.degree < 4 or self.degree % 2):
            raise ConfigError("monomial degree must be an even integer >= 4")
        if self.kind == "tabulated":
            pts = np.asarray(self.samples, dtype=float)
            if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 4:
                raise ConfigError("tabulated potential needs at least 4 (x, q) pairs")
            if pts[0, 0] != 0.0 or np.any(np.diff(pts[:, 0]) <= 0):
                raise ConfigError("tabulated x values must start at 0 and increase")
            object.__setattr__(self, "samples", tuple(map(tuple, pts)))
            # zero slope at 0 keeps the even extension C^1
            spline = CubicSpline(pts[:, 0], pts[:, 1], bc_type=((1, 0.0), "not-a-knot"))
            object.__setattr__(self, "_spline", spline)

    @classmethod
    def monomial(cls, degree=4):
        return cls("monomial", degree)

    @classmethod
    def zero(cls):
        return cls("zero", 0)

    @classmethod
    def tabulated(cls, samples):
        return cls("tabulated", 0, tuple(samples))

    def __call__(self, x):
        x = np.abs(x)
        if self.kind == "zero":
            return np.zeros_like(x, dtype=float) if np.ndim(x) else 0.0
        if self.kind == "monomial":
            return x**self.degree
        xmax = self.samples[-1][0]
        if np.any(x > xmax * (1 + 1e-12)):
            raise ConfigError(f"tabulated potential only known up to |x| = {xmax}")
        out = self._spline(x)
        return out if np.ndim(x) else float(out)

    def to_dict(self):
        if self.kind == "monomial":
            return {"kind": "monomial", "degree": self.degree}
        if self.kind == "zero":
            return {"kind": "zero"}
        return {"kind": "tabulated", "samples": [list(p) for p in self.samples]}

    @classmethod
    def from_dict(cls, d):
        kind = d.get("kind", "monomial")
        if kind == "monomial":
            return cls.monomial(int(d.get("degree", 4)))
        if kind == "zero":
            return cls.zero()
        if kind == "tabulated":
            return cls.tabulated(d["samples"])
        raise ConfigError(f"unknown potential kind {kind!r}")


# --- grids -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Grid:
    X: float
    nodes: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.nodes, dtype=float)
        if x.ndim != 1 or x.size < 3 or np.any(np.diff(x) <= 0):
            raise ConfigError("grid nodes must be strictly increasing")
        if x[0] != -self.X or x[-1] != self.X:
            raise ConfigError("grid must start at -X and end at X")
        if not np.any(x == 0.0):
            raise ConfigError("grid must contain 0")
        x.setflags(write=False)
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "X", float(self.X))

    @classmethod
    def uniform(cls, X=DEFAULT_X, n=DEFAULT_NODES):
        if n < 5 or n % 2 == 0:
            raise ConfigError("node count must be odd and >= 5")
        half = np.linspace(0.0, X, (n + 1) // 2)
        half[-1] = X
        return cls(X, np.concatenate([-half[:0:-1], half]))

    @property
    def size(self):
        return self.nodes.size

    @property
    def zero_index(self):
        return int(np.flatnonzero(self.nodes == 0.0)[0])

    def is_symmetric(self):
        return bool(np.array_equal(self.nodes, -self.nodes[::-1]))

    def index_of(self, x):
        i = int(np.argmin(np.abs(self.nodes - x)))
        if abs(self.nodes[i] - x) > 1e-12 * max(1.0, self.X):
            raise NodeMissing(f"x = {x} is not a grid node")
        return i


# --- sampled functions -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Sample:
    """Values ``y`` and derivatives ``dy`` on a grid.

    ``tau`` holds ``tau_q y`` at the nodes when it is known exactly (ODE
    solutions and constructed representatives). ``lam`` and ``tol`` are set for
    ODE solutions.
    """

    grid: Grid
    y: np.ndarray
    dy: np.ndarray
    tau: Optional[np.ndarray] = None
    lam: Optional[complex] = None
    tol: Optional[float] = None

    def __add__(self, other):
        return _combine([(1.0, self), (1.0, other)])

    def scaled(self, c):
        return _combine([(c, self)])

    def at(self, x):
        i = self.grid.index_of(x)
        return complex(self.y[i]), complex(self.dy[i])


def _combine(terms):
    grid = terms[0][1].grid
    y = sum(c * s.y for c, s in terms)
    dy = sum(c * s.dy for c, s in terms)
    if all(s.tau is not None for _, s in terms):
        tau = sum(c * s.tau for c, s in terms)
    else:
        tau = None
    lams = {s.lam for _, s in terms}
    lam = lams.pop() if len(lams) == 1 else None
    return Sample(grid, np.asarray(y, complex), np.asarray(dy, complex), tau, lam)


def combine(terms):
    """Linear combination ``sum(c * f for c, f in terms)`` of samples on one grid."""
    return _combine(list(terms))


class ReferencePair(NamedTuple):
    w1: Sample
    w2: Sample

    def bracket_deviation(self):
        """Largest ``|[w1, w2]_x - 1|`` over the grid."""
        return float(np.max(np.abs(bracket(self.w1, self.w2) - 1.0)))


# --- integration -----------------------------------------------------------------


def _integrate(q, lam, inits, grid, tol):
    """Integrate several solutions at once from 0 outward in both directions.

    ``inits`` is an ``(m, 2)`` array of ``(y(0), y'(0))``. Returns ``(y, dy)``
    arrays of shape ``(m, grid.size)``.
    """
    if tol <= 0:
        raise ConfigError("integration tolerance must be positive")
    inits = np.asarray(inits, dtype=complex).reshape(-1, 2)
    m = inits.shape[0]
    lam = complex(lam)
    if not (cmath.isfinite(lam) and np.all(np.isfinite(inits))):
        # scipy's step control never terminates on nan input
        raise NonFiniteValue(f"non-finite lambda or initial data (lambda = {lam})")

    def rhs(x, state):
        out = np.empty_like(state)
        out[0::2] = state[1::2]
        out[1::2] = -(q(x) + lam) * state[0::2]
        return out

    y0 = inits.reshape(-1)
    x = grid.nodes
    i0 = grid.zero_index
    ys = np.empty((m, x.size), dtype=complex)
    dys = np.empty((m, x.size), dtype=complex)
    ys[:, i0] = inits[:, 0]
    dys[:, i0] = inits[:, 1]
    for sl, end in ((slice(i0 + 1, None), x[-1]), (slice(None, i0), x[0])):
        targets = x[sl]
        if targets.size == 0:
            continue
        order = np.argsort(np.abs(targets))
        sol = integrate.solve_ivp(
            rhs,
            (0.0, end),
            y0,
            method="DOP853",
            t_eval=targets[order],
            rtol=tol,
            atol=tol * 1e-2,
        )
        if sol.status != 0:
            raise StepSizeUnderflow(
                f"integration to x = {end} failed: {sol.message} "
                f"(lambda = {lam}, tol = {tol})"
            )
        vals = np.empty((2 * m, targets.size), dtype=complex)
        vals[:, order] = sol.y
        ys[:, sl] = vals[0::2]
        dys[:, sl] = vals[1::2]
    if not (np.all(np.isfinite(ys)) and np.all(np.isfinite(dys))):
        raise NonFiniteValue(f"non-finite solution values (lambda = {lam})")
    return ys, dys


def solve_ivp(q, lam, y0, dy0, grid, tol=DEFAULT_TOL):
    """Solution of ``-y'' - q y = lam y`` with ``y(0) = y0``, ``y'(0) = dy0``."""
    ys, dys = _integrate(q, lam, [[y0, dy0]], grid, tol)
    return Sample(grid, ys[0], dys[0], complex(lam) * ys[0], complex(lam), tol)


def solve_many(q, lam, inits, grid, tol=DEFAULT_TOL):
    """Several solutions at the same ``lam`` in one integration pass."""
    ys, dys = _integrate(q, lam, inits, grid, tol)
    lam = complex(lam)
    return [Sample(grid, y, dy, lam * y, lam, tol) for y, dy in zip(ys, dys)]


def reference_solutions(q, grid, tol=DEFAULT_TOL):
    """Odd ``w1`` (``w1(0)=0, w1'(0)=1``) and even ``w2`` (``w2(0)=-1, w2'(0)=0``).

    With this normalisation ``[w1, w2]_x = 1``.
    """
    if not grid.is_symmetric():
        raise AsymmetricGrid("reference solutions need a grid symmetric about 0")
    w1, w2 = solve_many(q, 0.0, [[0.0, 1.0], [-1.0, 0.0]], grid, tol)
    return ReferencePair(w1, w2)


# --- brackets and boundary values -------------------------------------------------


def bracket(f, g):
    """``[f, g]_x = conj(f) g' - conj(f') g`` at every node."""
    return np.conj(f.y) * g.dy - np.conj(f.dy) * g.y


def wronskian_bracket(f, g, x):
    i = f.grid.index_of(x)
    return complex(np.conj(f.y[i]) * g.dy[i] - np.conj(f.dy[i]) * g.y[i])


def boundary_form(f, ref, x=None):
    """``(alpha1, alpha2, beta1, beta2)`` of ``f`` with the ends placed at ``-x`` and ``x``.

    ``x`` defaults to the truncation point ``X``.
    """
    from .boundary import BoundaryForm

    grid = f.grid
    x = grid.X if x is None else x
    i_left, i_right = grid.index_of(-x), grid.index_of(x)
    w1, w2 = ref

    def br(w, i):
        return complex(np.conj(w.y[i]) * f.dy[i] - np.conj(w.dy[i]) * f.y[i])

    return BoundaryForm(br(w1, i_left), br(w2, i_left), br(w1, i_right), br(w2, i_right))


def boundary_form_convergence(f, ref, fractions=(0.5, 0.75, 1.0)):
    """Boundary values at several truncation points, largest last.

    Descriptive only: the functionals are limits at infinity and this shows
    how far they are from settling at the chosen ``X``.
    """
    X = f.grid.X
    return [(fr * X, boundary_form(f, ref, fr * X)) for fr in fractions]


# --- representatives -------------------------------------------------------------


def smoothstep(x):
    """Quintic step: 0 for ``x <= -1``, 1 for ``x >= 1``; returns ``(s, s', s'')``."""
    t = np.clip((np.asarray(x, dtype=float) + 1.0) / 2.0, 0.0, 1.0)
    s = t**3 * (10 - 15 * t + 6 * t**2)
    ds = 30 * t**2 * (1 - t) ** 2 / 2.0
    d2s = 60 * t * (1 - t) * (1 - 2 * t) / 4.0
    return s, ds, d2s


def _cutoff(w, s, ds, d2s, sign):
    # sign=+1: s*w, sign=-1: (1-s)*w; tau(w) = 0 so tau(s w) = -s'' w - 2 s' w'
    if sign > 0:
        y, dy = s * w.y, ds * w.y + s * w.dy
    else:
        y, dy = (1 - s) * w.y, -ds * w.y + (1 - s) * w.dy
    tau = -sign * (d2s * w.y + 2 * ds * w.dy)
    return y, dy, tau


def construct_representative(z, ref):
    """A function with prescribed boundary values ``z``.

    Built as ``-z4 u1 + z3 u2 - z2 v1 + z1 v2`` where ``u_j`` equals ``w_j``
    right of ``x = 1`` and vanishes left of ``x = -1``, and ``v_j`` the other
    way round.
    """
    z1, z2, z3, z4 = (complex(v) for v in z)
    w1, w2 = ref
    grid = w1.grid
    if grid.X <= 1.0:
        raise ConfigError("constructing representatives needs X > 1")
    s, ds, d2s = smoothstep(grid.nodes)
    parts = [
        (-z4, _cutoff(w1, s, ds, d2s, +1)),
        (z3, _cutoff(w2, s, ds, d2s, +1)),
        (-z2, _cutoff(w1, s, ds, d2s, -1)),
        (z1, _cutoff(w2, s, ds, d2s, -1)),
    ]
    y = sum(c * p[0] for c, p in parts)
    dy = sum(c * p[1] for c, p in parts)
    tau = sum(c * p[2] for c, p in parts)
    return Sample(grid, np.asarray(y, complex), np.asarray(dy, complex), np.asarray(tau, complex))


def bump(grid, center, radius, q, power=8):
    """Compactly supported ``(1 - t^2)^power`` bump with exact ``tau_q`` values.

    The default power keeps ``tau_q`` of the bump smooth enough at the edge of
    its support for Simpson quadrature to stay accurate.
    """
    x = grid.nodes
    t = (x - center) / radius
    inside = np.abs(t) < 1
    u = np.where(inside, 1 - t**2, 0.0)
    p = power
    y = u**p
    dy = np.where(inside, -2 * p * t * u ** (p - 1) / radius, 0.0)
    d2y = np.where(
        inside, (4 * p * (p - 1) * t**2 * u ** (p - 2) - 2 * p * u ** (p - 1)) / radius**2, 0.0
    )
    tau = -d2y - q(x) * y
    return Sample(grid, y.astype(complex), dy.astype(complex), tau.astype(complex))


# --- identities --------------------------------------------------------------------


def verify_plucker(f, g, ref):
    """Largest residual of ``[g,f][w1,w2] = [g,w2][w1,f] - [g,w1][w2,f]`` over the grid."""
    w1, w2 = ref
    lhs = bracket(g, f) * bracket(w1, w2)
    rhs = bracket(g, w2) * bracket(w1, f) - bracket(g, w1) * bracket(w2, f)
    return float(np.max(np.abs(lhs - rhs)))


def apply_tau(f, q):
    """``tau_q f`` at the nodes: stored values if present, else finite differences.

    The fallback differentiates ``f'`` with fourth-order stencils (central in
    the interior, one-sided at the two outermost nodes of each end) on a
    uniform grid of at least 5 nodes.
    """
    if f.tau is not None:
        return f.tau
    x = f.grid.nodes
    h = x[1] - x[0]
    if x.size < 5 or not np.allclose(np.diff(x), h, rtol=1e-9, atol=0):
        raise ConfigError("finite-difference second derivatives need a uniform grid of >= 5 nodes")
    p = f.dy
    d2 = np.empty_like(p)
    d2[2:-2] = (p[:-4] - 8 * p[1:-3] + 8 * p[3:-1] - p[4:]) / (12 * h)
    head = np.array([[-25, 48, -36, 16, -3], [-3, -10, 18, -6, 1]]) / (12 * h)
    d2[:2] = head @ p[:5]
    d2[-2:] = -(head @ p[-1:-6:-1])[::-1]
    return -d2 - q(x) * f.y


def inner(f_vals, g_vals, grid):
    """``(f, g) = integral of f conj(g)`` by composite Simpson on the grid."""
    return complex(integrate.simpson(f_vals * np.conj(g_vals), x=grid.nodes))


def green_identity_defect(f, g, q=None):
    """``(g, tau f) - (tau g, f) - ([f,g]_X - [f,g]_{-X})``.

    Zero up to quadrature and integration error.
    """
    grid = f.grid
    tf = apply_tau(f, q)
    tg = apply_tau(g, q)
    lhs = inner(g.y, tf, grid) - inner(tg, f.y, grid)
    b = bracket(f, g)
    return complex(lhs - (b[-1] - b[0]))


# --- parity and time reversal ------------------------------------------------------


def p_action(f):
    """``(P f)(x) = f(-x)``; the derivative picks up a sign."""
    if not f.grid.is_symmetric():
        raise AsymmetricGrid("parity needs a grid symmetric about 0")
    tau = None if f.tau is None else f.tau[::-1].copy()
    return Sample(f.grid, f.y[::-1].copy(), -f.dy[::-1], tau, f.lam, f.tol)


def t_action(f):
    """``(T f)(x) = conj(f(x))``."""
    tau = None if f.tau is None else np.conj(f.tau)
    lam = None if f.lam is None else complex(f.lam).conjugate()
    return Sample(f.grid, np.conj(f.y), np.conj(f.dy), tau, lam, f.tol)


# --- configuration and export ---------------------------------------------------------


@dataclass(frozen=True)
class OdeConfig:
    potential: Potential = Potential()
    X: float = DEFAULT_X
    tol: float = DEFAULT_TOL
    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if not (isinstance(self.X, (int, float)) and math.isfinite(self.X)) or self.X <= 1.0:
            raise ConfigError(f"X must be a finite number > 1, got {self.X!r}")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol!r}")
        if int(self.nodes) < 5 or int(self.nodes) % 2 == 0:
            raise ConfigError(f"nodes must be odd and >= 5, got {self.nodes!r}")

    def grid(self):
        return Grid.uniform(self.X, int(self.nodes))

    def to_dict(self):
        return {"q": self.potential.to_dict(), "X": self.X, "tol": self.tol, "nodes": self.nodes}

    @classmethod
    def from_dict(cls, d):
        known = {"q", "X", "tol", "nodes"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        base = cls()
        return cls(
            Potential.from_dict(d["q"]) if "q" in d else base.potential,
            float(d.get("X", base.X)),
            float(d.get("tol", base.tol)),
            int(d.get("nodes", base.nodes)),
        )


def to_csv(f, fh=None):
    """Write ``x, Re y, Im y, Re y', Im y'`` rows; returns the text if ``fh`` is None."""
    out = io.StringIO() if fh is None else fh
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x", "re_y", "im_y", "re_dy", "im_dy"])
    for x, y, dy in zip(f.grid.nodes, f.y, f.dy):
        w.writerow([f"{x:.17g}", f"{y.real:.17g}", f"{y.imag:.17g}", f"{dy.real:.17g}", f"{dy.imag:.17g}"])
    if fh is None:
        return out.getvalue()
    return None
