"""Invariant suites run by ``ptbiext verify`` and the acceptance tests.

Each suite returns a :class:`SuiteResult` with a pass flag, the largest
residual seen, and the threshold it was held to. Nothing here records
timings, so a summary depends only on the configuration and the seed.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import boundary as B
from . import oracle as O
from .boundary import Direction, MixedBC, OneDimBC, ThreeDimBC, Variant
from .ode import (
    Grid,
    OdeConfig,
    Potential,
    boundary_form,
    bracket,
    combine,
    construct_representative,
    green_identity_defect,
    p_action,
    reference_solutions,
    solve_many,
    t_action,
    verify_plucker,
)
from .sampling import VARIANTS, random_separated, random_spec
from .spectral import (
    TruncatedOperator,
    dirichlet_spec,
    eigenvalues_real_scan,
    empty_resolvent_witness,
    residual_spectrum_witness,
)

WRONSKIAN_TOL = 1e-8
PLUCKER_TOL = 1e-9
LAGRANGE_TOL = 1e-8
GREEN_TOL = 1e-6
PARITY_TOL = 1e-8
ROUNDTRIP_TOL = 1e-6
SUBSPACE_TOL = 1e-9
DIRICHLET_REL_TOL = 1e-6
WITNESS_TOL = 1e-8
ORTHOGONALITY_TOL = 1e-6
FAMILY_TOL = 1e-9


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_residual: float
    threshold: float
    cases: int
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "threshold": self.threshold,
            "cases": self.cases,
            "detail": self.detail,
        }


def _suite(name, residuals, threshold, detail=None):
    worst = float(max(residuals)) if len(residuals) else 0.0
    ok = bool(np.all(np.isfinite(residuals))) and worst < threshold
    return SuiteResult(name, ok, worst, threshold, len(residuals), detail or {})


def _count_suite(name, failures, cases, detail=None):
    """Suite whose residual is a number of exact (boolean) disagreements."""
    return SuiteResult(name, failures == 0, float(failures), 1.0, cases, detail or {})


def _cplx(rng, size=None):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


# --- boundary algebra sweeps -----------------------------------------------------------


def algebra_sweeps(rng, n_per_variant):
    """Classification agreement, adjoint formulas and dimension duality in one pass."""
    mismatches = {}
    star, plus, double = [], [], []
    duality_fail = 0
    total = 0
    for variant in VARIANTS:
        bad = 0
        for _ in range(n_per_variant):
            spec = random_spec(rng, variant)
            space = B.boundary_subspace(spec)
            if B.classify(spec).flags != O.oracle_classify(space).flags:
                bad += 1
            comp = O.omega_complement(space)
            adj, padj = B.adjoint(spec), B.p_adjoint(spec)
            star.append(O.projection_residual(B.boundary_subspace(adj), comp))
            plus.append(O.projection_residual(B.boundary_subspace(padj), O.apply_p(comp)))
            if B.extension_dimension(adj) != 4 - B.extension_dimension(spec):
                duality_fail += 1
            if B.extension_dimension(padj) != 4 - B.extension_dimension(spec):
                duality_fail += 1
            double.append(O.projection_residual(O.omega_complement(comp), space))
            total += 1
        mismatches[variant] = bad
    # generic random subspaces of every dimension, including 0 and 4
    for dim in range(5):
        for _ in range(50):
            space = O.BoundarySubspace.span(_cplx(rng, (dim, 4)))
            comp = O.omega_complement(space)
            if comp.dim != 4 - space.dim:
                duality_fail += 1
            double.append(O.projection_residual(O.omega_complement(comp), space))
    return [
        _count_suite("classification_agreement", sum(mismatches.values()), total, {"mismatches": mismatches}),
        _suite(
            "adjoint_formulas",
            star + plus,
            SUBSPACE_TOL,
            {"max_adjoint": float(max(star)), "max_p_adjoint": float(max(plus))},
        ),
        SuiteResult(
            "dimension_duality",
            bool(duality_fail == 0 and max(double) < SUBSPACE_TOL),
            float(max(double)),
            SUBSPACE_TOL,
            len(double),
            {"dimension_failures": duality_fail},
        ),
    ]


# --- separated and mixed families -------------------------------------------------------


def _mod_pi_zero(t, tol=FAMILY_TOL):
    r = math.remainder(t, math.pi)
    return abs(r) < tol


def separated_all_three_condition(spec):
    """``xi = eta = 1`` and ``alpha + beta = 0 (mod pi)`` on the canonical form."""
    c = spec.canonical()
    return abs(c.xi - 1) < FAMILY_TOL and abs(c.eta - 1) < FAMILY_TOL and _mod_pi_zero(c.alpha + c.beta)


def separated_suite(rng, n):
    pt_vs_psa = 0
    neu = 0
    for _ in range(n):
        spec = random_separated(rng)
        if B.is_pt_symmetric(spec) != B.is_p_self_adjoint(spec):
            pt_vs_psa += 1
        flags = O.oracle_classify(B.boundary_subspace(spec)).flags
        if all(flags) != separated_all_three_condition(spec):
            neu += 1
    return _count_suite(
        "separated_equivalence",
        pt_vs_psa + neu,
        n,
        {"pt_vs_p_self_adjoint": pt_vs_psa, "all_three_condition": neu},
    )


def _entries(m):
    return m[0, 0], m[0, 1], m[1, 0], m[1, 1]


def _close(x, y):
    return abs(x - y) < FAMILY_TOL


def real_unimodular_condition(m):
    """``a, b, c, d`` real, ``a = d`` and ``a^2 - bc = 1``."""
    a, b, c, d = _entries(m)
    real = all(abs(v.imag) < FAMILY_TOL for v in (a, b, c, d))
    return real and _close(a, d) and _close(a * a - b * c, 1)


def sa_pt_condition(m):
    """``exp(-i phi) M`` real, ``d = exp(2 i phi) conj(a)`` and ``det M = exp(2 i phi)``."""
    a, b, c, d = _entries(m)
    det = a * d - b * c
    if not _close(abs(det), 1):
        return False
    e2 = det / abs(det)
    e1 = cmath.sqrt(e2)
    real = all(abs((v / e1).imag) < FAMILY_TOL for v in (a, b, c, d))
    return real and _close(d, e2 * a.conjugate())


def psa_pt_condition(m):
    """``b, c`` real, ``d = conj(a)`` and ``|a|^2 - bc = 1``."""
    a, b, c, d = _entries(m)
    return (
        abs(b.imag) < FAMILY_TOL
        and abs(c.imag) < FAMILY_TOL
        and _close(d, a.conjugate())
        and _close(abs(a) ** 2 - b * c, 1)
    )


def _family_matrix(rng, family):
    """A random matrix from one of the structured mixed-condition families."""
    if family == "real_unimodular":
        a, b = rng.standard_normal(2)
        while abs(b) < 1e-2:
            b = rng.standard_normal()
        return np.array([[a, b], [(a * a - 1) / b, a]], dtype=complex)
    if family == "sa_pt":
        # exp(i phi) [[r, s], [t, r]] with r^2 - st = 1; not P-self-adjoint for phi != 0 mod pi
        phi = rng.uniform(0.1, math.pi - 0.1)
        r, s = rng.standard_normal(2)
        while abs(s) < 1e-2:
            s = rng.standard_normal()
        return cmath.exp(1j * phi) * np.array([[r, s], [(r * r - 1) / s, r]])
    if family == "psa_pt":
        z = complex(_cplx(rng))
        s = rng.standard_normal()
        while abs(s) < 1e-2:
            s = rng.standard_normal()
        return np.array([[z, s], [(abs(z) ** 2 - 1) / s, z.conjugate()]])
    m = _cplx(rng, (2, 2))
    while abs(np.linalg.det(m)) < 1e-3:
        m = _cplx(rng, (2, 2))
    return m


def mixed_class_suite(rng, n_per_family):
    """Each class-combination condition for mixed specs, checked as an iff against the oracle."""
    failures = {"all_three": 0, "sa_and_psa": 0, "sa_and_pt": 0, "psa_and_pt": 0, "sa_psa_implies_pt": 0, "sa_pt_family_not_psa": 0}
    total = 0
    for family in ("real_unimodular", "sa_pt", "psa_pt", "generic"):
        for _ in range(n_per_family):
            m = _family_matrix(rng, family)
            direction = Direction.ALPHA_FROM_BETA if rng.random() < 0.5 else Direction.BETA_FROM_ALPHA
            spec = MixedBC(m, direction)
            sa, psa, pt = O.oracle_classify(B.boundary_subspace(spec)).flags
            sp = real_unimodular_condition(m)
            failures["all_three"] += int((sa and psa and pt) != sp)
            failures["sa_and_psa"] += int((sa and psa) != sp)
            failures["sa_and_pt"] += int((sa and pt) != sa_pt_condition(m))
            failures["psa_and_pt"] += int((psa and pt) != psa_pt_condition(m))
            failures["sa_psa_implies_pt"] += int(sa and psa and not pt)
            if family == "sa_pt":
                # SA and PT but never P-SA for phi away from 0 mod pi
                failures["sa_pt_family_not_psa"] += int(not (sa and pt and not psa))
            total += 1
    return _count_suite("mixed_class_conditions", sum(failures.values()), total, failures)


# --- ODE identities ------------------------------------------------------------------------


class OdeContext:
    """Reference pair, solutions at a few random ``lam`` and random representatives."""

    def __init__(self, config, rng):
        self.config = config
        self.q = config.potential
        self.grid = config.grid()
        self.tol = config.tol
        self.ref = reference_solutions(self.q, self.grid, self.tol)
        self.rng = rng
        lams = [0.5 + 3.0 * rng.random(), -2.0 + rng.random()]
        lams += [complex(v) for v in rng.uniform(-5, 5, 2) + 1j * rng.uniform(-5, 5, 2)]
        self.solutions = []
        for lam in lams:
            inits = _cplx(rng, (2, 2))
            self.solutions.append((lam, solve_many(self.q, lam, inits, self.grid, self.tol)))
        self.representatives = [construct_representative(_cplx(rng, 4), self.ref) for _ in range(4)]

    def functions(self):
        return [f for _, pair in self.solutions for f in pair] + self.representatives


def wronskian_suite(ctx):
    """Constant brackets between solutions at one ``lam``.

    The conjugating bracket ``[f, g]`` is constant only for real ``lam``; at
    nonreal ``lam`` the bilinear Wronskian ``f g' - f' g`` is checked instead.
    Residuals are relative to the value at 0.
    """
    res = [ctx.ref.bracket_deviation()]
    i0 = ctx.grid.zero_index
    for lam, (f, g) in ctx.solutions:
        if np.isreal(lam):
            b = bracket(f, g)
        else:
            b = f.y * g.dy - f.dy * g.y
        res.append(float(np.max(np.abs(b - b[i0])) / max(1.0, abs(b[i0]))))
    return _suite("wronskian", res, WRONSKIAN_TOL, {"reference_bracket": res[0]})


def plucker_suite(ctx):
    funcs = ctx.functions()
    res = [verify_plucker(f, g, ctx.ref) for f in funcs for g in funcs]
    return _suite("plucker", res, PLUCKER_TOL)


def lagrange_suite(ctx):
    """``omega(B g, B f) = -([g, f]_X - [g, f]_{-X})`` for truncated boundary values.

    Residuals are relative to ``max(1, |B g| |B f|)``.
    """
    funcs = ctx.functions()
    forms = [np.array(boundary_form(f, ctx.ref)) for f in funcs]
    res = []
    for f, bf in zip(funcs, forms):
        for g, bg in zip(funcs, forms):
            b = bracket(g, f)
            lhs = O.omega(bg, bf)
            scale = max(1.0, np.linalg.norm(bg) * np.linalg.norm(bf))
            res.append(abs(lhs + (b[-1] - b[0])) / scale)
    return _suite("lagrange_form", res, LAGRANGE_TOL)


def green_suite(ctx):
    real_pairs = [pair for lam, pair in ctx.solutions if np.isreal(lam)]
    res = []
    for f, g in real_pairs:
        res.append(abs(green_identity_defect(f, g, ctx.q)))
        fr = t_action(f) + f  # real-valued
        res.append(abs(green_identity_defect(fr, fr, ctx.q)))
    reps = ctx.representatives
    for f in reps:
        for g in reps:
            res.append(abs(green_identity_defect(f, g, ctx.q)))
    return _suite("green_identity", res, GREEN_TOL)


def parity_suite(ctx):
    w1, w2 = ctx.ref
    funcs = [combine([(c[0], w1), (c[1], w2)]) for c in _cplx(ctx.rng, (4, 2))]
    funcs += ctx.functions()
    res = []
    for f in funcs:
        bf = boundary_form(f, ctx.ref)
        res.append(np.max(np.abs(np.array(boundary_form(p_action(f), ctx.ref)) - B.p_map(bf))))
        res.append(np.max(np.abs(np.array(boundary_form(p_action(t_action(f)), ctx.ref)) - B.pt_map(bf))))
    return _suite("parity_commutation", res, PARITY_TOL)


def roundtrip_suite(ctx):
    res = []
    zs = list(_cplx(ctx.rng, (10, 4))) + [np.zeros(4), np.eye(4)[0]]
    for z in zs:
        f = construct_representative(z, ctx.ref)
        res.append(np.max(np.abs(np.array(boundary_form(f, ctx.ref)) - z)))
    return _suite("representative_roundtrip", res, ROUNDTRIP_TOL)


def ode_suites(ctx):
    """The six identity suites on one context, in a fixed order."""
    return [
        fn(ctx)
        for fn in (wronskian_suite, plucker_suite, lagrange_suite, green_suite, parity_suite, roundtrip_suite)
    ]


# --- spectra ----------------------------------------------------------------------------------

DIRICHLET_EXPECTED = tuple((k * math.pi / 2) ** 2 for k in (1, 2, 3))


def dirichlet_suite(tol=1e-10):
    """``q = 0`` on ``[-1, 1]``: eigenvalues ``(k pi / 2)^2`` and full symmetry."""
    q = Potential.zero()
    grid = Grid.uniform(1.0, 201)
    ref = reference_solutions(q, grid, tol)
    spec = dirichlet_spec(ref)
    op = TruncatedOperator.build(spec, q, grid, tol, ref)
    found = [e.lam.real for e in eigenvalues_real_scan(op, 0.5, 25.0, 60)]
    errs = []
    for target in DIRICHLET_EXPECTED:
        errs.append(min(abs(x - target) / target for x in found) if found else math.inf)
    flags = B.classify(spec).flags
    return SuiteResult(
        "dirichlet",
        bool(max(errs) < DIRICHLET_REL_TOL and all(flags) and len(found) == 3),
        float(max(errs)),
        DIRICHLET_REL_TOL,
        3,
        {"eigenvalues": found, "self_adjoint": bool(flags[0]), "p_self_adjoint": bool(flags[1]), "pt_symmetric": bool(flags[2])},
    )


PT_THREE_DIM = ThreeDimBC(1, 1, 1, -1)
PT_ONE_DIM = OneDimBC(Variant.I, (1, 0), [[0, 0], [0, 1]])


def empty_resolvent_suite(ctx, n=20):
    op = TruncatedOperator.build(PT_THREE_DIM, ctx.q, ctx.grid, ctx.tol, ctx.ref)
    lams = ctx.rng.uniform(-5, 5, n) + 1j * ctx.rng.uniform(-5, 5, n)
    res = [empty_resolvent_witness(op, lam).defect for lam in lams]
    return _suite("empty_resolvent", res, WITNESS_TOL, {"pt_symmetric": bool(B.is_pt_symmetric(PT_THREE_DIM))})


def residual_spectrum_suite(ctx, n=10):
    op = TruncatedOperator.build(PT_ONE_DIM, ctx.q, ctx.grid, ctx.tol, ctx.ref)
    lams = ctx.rng.uniform(-5, 5, n) + 1j * ctx.rng.uniform(-5, 5, n)
    res = [residual_spectrum_witness(op, lam, ctx.rng).residual for lam in lams]
    return _suite("residual_spectrum", res, ORTHOGONALITY_TOL, {"pt_symmetric": bool(B.is_pt_symmetric(PT_ONE_DIM))})


# --- driver -------------------------------------------------------------------------------------


def run_all(config=None, seed=42, sweep=10000, family=1000):
    """Run every suite; returns a JSON-ready summary dict."""
    config = OdeConfig() if config is None else config
    streams = iter(np.random.default_rng(seed).spawn(8))
    suites = []
    suites += algebra_sweeps(next(streams), sweep)
    suites.append(separated_suite(next(streams), sweep))
    suites.append(mixed_class_suite(next(streams), family))
    ctx = OdeContext(config, next(streams))
    suites += ode_suites(ctx)
    suites.append(dirichlet_suite(config.tol))
    ctx.rng = next(streams)
    suites.append(empty_resolvent_suite(ctx))
    ctx.rng = next(streams)
    suites.append(residual_spectrum_suite(ctx))
    return {
        "seed": seed,
        "sweep": sweep,
        "config": config.to_dict(),
        "passed": all(s.passed for s in suites),
        "suites": [s.to_dict() for s in suites],
    }
