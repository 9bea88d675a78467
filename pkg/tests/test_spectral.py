import cmath
import math

import numpy as np
import pytest

from ptbiext import oracle as O
from ptbiext.boundary import (
    MixedBC,
    OneDimBC,
    ThreeDimBC,
    Variant,
    adjoint,
    boundary_subspace,
    classify,
)
from ptbiext.errors import ConfigError, NoRootInBracket
from ptbiext.ode import Grid, Potential, bracket, reference_solutions
from ptbiext.spectral import (
    TruncatedOperator,
    char_det,
    char_matrix,
    dirichlet_spec,
    eigen_result,
    eigenfunction,
    eigenvalue_newton,
    eigenvalues_real_scan,
    empty_resolvent_witness,
    fundamental_pair,
    neumann_spec,
    residual_spectrum_witness,
    smallest_singular_value,
)

ZERO = Potential.zero()
QUARTIC = Potential.monomial(4)
IDENTITY = MixedBC(np.eye(2))
PT_THREE = ThreeDimBC(1, 1, 1, -1)
PT_ONE = OneDimBC(Variant.I, (1, 0), [[0, 0], [0, 1]])


def build(spec, q, X, n, tol=1e-10):
    return TruncatedOperator.build(spec, q, Grid.uniform(X, n), tol)


@pytest.fixture(scope="module")
def unit_ref():
    return reference_solutions(ZERO, Grid.uniform(1.0, 201))


@pytest.fixture(scope="module")
def dirichlet_op(unit_ref):
    return TruncatedOperator.build(dirichlet_spec(unit_ref), ZERO, unit_ref.w1.grid, 1e-10, unit_ref)


@pytest.fixture(scope="module")
def quartic_identity(quartic, grid8, ref8):
    return TruncatedOperator.build(IDENTITY, quartic, grid8, 1e-10, ref8)


# --- operator ------------------------------------------------------------------------


def test_constraint_rows(quartic_identity):
    c = quartic_identity.constraint
    basis = boundary_subspace(IDENTITY).basis
    assert quartic_identity.k == 2
    assert np.max(np.abs(c @ basis)) < 1e-10
    assert np.allclose(c @ c.conj().T, np.eye(2))


def test_fundamental_pair_closed_forms():
    grid = Grid.uniform(2.0, 201)
    x = grid.nodes
    ye, yo = fundamental_pair(ZERO, 1.0, grid)
    assert np.max(np.abs(ye.y - np.cos(x))) < 1e-9 and np.max(np.abs(yo.y - np.sin(x))) < 1e-9
    ye, yo = fundamental_pair(ZERO, -1.0, grid)
    assert np.max(np.abs(ye.y - np.cosh(x))) < 1e-8 and np.max(np.abs(yo.y - np.sinh(x))) < 1e-8


def test_fundamental_pair_bilinear_wronskian_constant(quartic, grid8):
    ye, yo = fundamental_pair(quartic, 3 - 2j, grid8)
    w = ye.y * yo.dy - ye.dy * yo.y
    assert np.max(np.abs(w - 1)) < 1e-8


def test_fundamental_pair_bracket_constant_real_lambda(quartic, grid8):
    ye, yo = fundamental_pair(quartic, 4.5, grid8)
    b = bracket(ye, yo)
    assert np.max(np.abs(b - b[0])) < 1e-8


# --- characteristic matrix --------------------------------------------------------------


def test_char_matrix_shapes():
    assert char_matrix(build(PT_THREE, QUARTIC, 3.0, 61), 1 + 1j).shape == (1, 2)
    assert char_matrix(build(PT_ONE, QUARTIC, 3.0, 61), 1 + 1j).shape == (3, 2)


def test_dirichlet_singular_values(dirichlet_op):
    assert smallest_singular_value(dirichlet_op, (math.pi / 2) ** 2) < 1e-7
    assert smallest_singular_value(dirichlet_op, 1.0) > 1e-2


def test_char_det_only_for_two_dimensional():
    with pytest.raises(ConfigError):
        char_det(build(PT_THREE, ZERO, 2.0, 21), 1.0)


def test_char_det_cauchy_riemann():
    op = build(IDENTITY, ZERO, 2.0, 21)
    lam, h = 1.3 + 0.4j, 1e-5
    dx = (char_det(op, lam + h) - char_det(op, lam - h)) / (2 * h)
    dy = (char_det(op, lam + 1j * h) - char_det(op, lam - 1j * h)) / (2 * h)
    assert abs(dy - 1j * dx) < 1e-5


# --- real scan -----------------------------------------------------------------------------


def test_dirichlet_eigenvalues(dirichlet_op):
    roots = eigenvalues_real_scan(dirichlet_op, 0.5, 25.0, count=60)
    lams = [r.lam.real for r in roots]
    expected = [(k * math.pi / 2) ** 2 for k in (1, 2, 3)]
    assert len(lams) == 3
    for got, want in zip(lams, expected):
        assert abs(got - want) / want < 1e-6
    assert all(r.defect < 1e-6 for r in roots)
    assert all(r.X == 1.0 for r in roots)


def test_neumann_ground_state(unit_ref):
    op = TruncatedOperator.build(neumann_spec(unit_ref), ZERO, unit_ref.w1.grid, 1e-10, unit_ref)
    roots = eigenvalues_real_scan(op, -0.5, 3.0, count=15)
    assert abs(roots[0].lam) < 1e-8
    f = eigenfunction(op, roots[0])
    assert np.max(np.abs(f.y - f.y[0])) < 1e-8
    assert abs(roots[1].lam - math.pi**2 / 4) < 1e-6


def test_quartic_identity_roots(quartic_identity):
    assert classify(IDENTITY).self_adjoint
    roots = eigenvalues_real_scan(quartic_identity, 0.0, 6.0, count=25)
    assert roots
    assert all(r.defect < 1e-6 for r in roots)
    assert all(abs(r.lam.imag) == 0 for r in roots)


def test_quartic_identity_dependence_on_X(quartic):
    """The truncated eigenvalue near 2.9 drifts like 1/X, so successive gaps shrink geometrically."""
    lams = []
    for X in (8.0, 10.0, 12.0):
        op = build(IDENTITY, quartic, X, 5)
        (root,) = eigenvalues_real_scan(op, 2.5, 3.5, count=6)
        lams.append(root.lam.real)
    d1, d2 = lams[0] - lams[1], lams[1] - lams[2]
    assert d1 > 0 and d2 > 0
    # 1/X spacing: (1/8 - 1/10) / (1/10 - 1/12) = 1.5
    assert 1.2 < d1 / d2 < 1.8


def test_scan_errors(dirichlet_op):
    with pytest.raises(NoRootInBracket):
        eigenvalues_real_scan(dirichlet_op, 3.0, 9.0, count=10)
    with pytest.raises(ConfigError):
        eigenvalues_real_scan(dirichlet_op, 5.0, 1.0)
    with pytest.raises(ConfigError):
        eigenvalues_real_scan(build(PT_THREE, ZERO, 2.0, 21), 0.0, 1.0)


def test_self_adjoint_nonreal_probes_are_regular(quartic_identity):
    for sigma in (0.0, 3.0, 10.0):
        for t in (0.1, -0.1, 1.0):
            assert smallest_singular_value(quartic_identity, sigma + 1j * t) > 1e-3


# --- PT symmetric, not self-adjoint -------------------------------------------------------


def test_pt_symmetric_conjugate_pair():
    phi, z, s = 2.71, -0.63 + 0.82j, 1.04
    t = (abs(z) ** 2 - 1) / s
    spec = MixedBC(cmath.exp(1j * phi) * np.array([[z, s], [t, z.conjugate()]]))
    assert classify(spec).flags == (False, False, True)
    op = build(spec, ZERO, 2.0, 5)
    root = eigenvalue_newton(op, 0.1 + 0.1j)
    assert abs(root.lam.imag) > 0.1
    assert root.defect < 1e-10
    mirror = eigen_result(op, root.lam.conjugate())
    assert mirror.defect <= 10 * max(root.defect, 1e-15)
    other = eigenvalue_newton(op, 0.1 - 0.1j)
    assert abs(other.lam - root.lam.conjugate()) < 1e-8
    assert smallest_singular_value(op, root.lam + 0.05) > 1e-2


# --- empty resolvent ----------------------------------------------------------------------


def test_three_dim_witness_examples(quartic, grid8, ref8):
    op = TruncatedOperator.build(PT_THREE, quartic, grid8, 1e-10, ref8)
    assert classify(PT_THREE).pt_symmetric
    res = empty_resolvent_witness(op, 2 + 3j)
    assert res.defect < 1e-8
    assert abs(np.linalg.norm(res.coeffs) - 1) < 1e-12
    f = eigenfunction(op, res)
    assert np.max(np.abs(f.tau - (2 + 3j) * f.y)) < 1e-12


def test_three_dim_witness_at_zero_is_reference_combination(quartic, grid8, ref8):
    op = TruncatedOperator.build(PT_THREE, quartic, grid8, 1e-10, ref8)
    res = empty_resolvent_witness(op, 0.0)
    f = eigenfunction(op, res)
    # y_e = -w2 and y_o = w1 at lambda = 0
    expect = -res.coeffs[0] * ref8.w2.y + res.coeffs[1] * ref8.w1.y
    assert np.max(np.abs(f.y - expect)) < 1e-8


def test_three_dim_random_lambdas(quartic, grid8, ref8):
    op = TruncatedOperator.build(PT_THREE, quartic, grid8, 1e-10, ref8)
    rng = np.random.default_rng(5)
    for lam in rng.uniform(-5, 5, 20) + 1j * rng.uniform(-5, 5, 20):
        res = empty_resolvent_witness(op, lam)
        assert res.defect < 1e-8
        assert smallest_singular_value(op, lam) < 1e-10 * max(1.0, np.abs(char_matrix(op, lam)).max())


def test_witness_needs_three_dimensions(quartic_identity):
    with pytest.raises(ConfigError):
        empty_resolvent_witness(quartic_identity, 1.0)


# --- residual spectrum --------------------------------------------------------------------


@pytest.mark.parametrize("lam", [1 + 1j, 0.0])
def test_residual_spectrum_witness(quartic, grid8, ref8, lam):
    op = TruncatedOperator.build(PT_ONE, quartic, grid8, 1e-10, ref8)
    rep = residual_spectrum_witness(op, lam, np.random.default_rng(2), n_reps=6, n_bumps=4)
    assert rep.panel_size == 10
    assert rep.residual < 1e-6
    assert rep.witness_defect < 1e-8


def test_one_dim_adjoint_matches_oracle():
    space = boundary_subspace(PT_ONE)
    assert O.subspace_equal(boundary_subspace(adjoint(PT_ONE)), O.omega_complement(space))


def test_residual_witness_needs_one_dimension(quartic_identity):
    with pytest.raises(ConfigError):
        residual_spectrum_witness(quartic_identity, 1.0)


def test_result_json_fields(dirichlet_op):
    res = eigen_result(dirichlet_op, 2.0)
    assert set(res.to_dict(2)) == {"lambda", "defect", "k", "X"}
