import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptbiext import oracle as O
from ptbiext.boundary import (
    Direction,
    InternalInconsistency,
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
    pt_normal_form,
)
from ptbiext.errors import RankDeficient

AB = Direction.ALPHA_FROM_BETA
BA = Direction.BETA_FROM_ALPHA

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)
vec4 = st.lists(cplx, min_size=4, max_size=4).map(lambda v: np.array(v, dtype=complex))
angle = st.floats(0, 2 * math.pi, allow_nan=False)
unit = angle.map(lambda t: cmath.exp(1j * t))


def span_of(*vectors):
    return O.BoundarySubspace.span(vectors)


def same_space(spec, *vectors):
    return O.subspace_equal(boundary_subspace(spec), span_of(*vectors))


# --- canonicalize ------------------------------------------------------------------------


def test_canonicalize_identity_rows():
    spec = canonicalize([[1, 0, -1, 0], [0, 1, 0, -1]])
    assert isinstance(spec, MixedBC) and spec.direction is AB
    assert np.allclose(spec.array, np.eye(2))


def test_canonicalize_split_conditions():
    rows = np.array([[1, 0, 0, 0], [0, 0, 1, 0]], dtype=complex)
    spec = canonicalize(rows)
    assert isinstance(spec, SeparatedBC)
    assert spec.xi == 1 and spec.eta == 1
    # the conditions are alpha1 = 0 and beta1 = 0
    assert O.subspace_equal(boundary_subspace(spec), O.BoundarySubspace.from_constraints(rows))


def test_canonicalize_inverts_left_block():
    rows = np.array([[2, 1, 1, 0], [1, 1, 0, 1]], dtype=complex)
    spec = canonicalize(rows)
    assert spec.direction is AB
    # homogeneous reading: alpha = -L^{-1} R beta
    assert np.allclose(spec.array, [[-1, 1], [1, -2]])
    basis = boundary_subspace(spec).basis
    assert np.linalg.norm(rows @ basis) < 1e-12


def test_canonicalize_rejects_rank_one_mixed_reading():
    # left block singular, right block invertible: beta = M alpha with rank M = 1
    rows = np.array([[1, 1, 2, 0], [2, 2, 0, 1]], dtype=complex)
    with pytest.raises(RankDeficient):
        canonicalize(rows)


def test_canonicalize_rank_deficient_reports_singular_values():
    with pytest.raises(RankDeficient) as err:
        canonicalize([[1, 2, 3, 4], [2, 4, 6, 8]])
    assert len(err.value.singular_values) == 2
    assert "singular values" in str(err.value)


@given(st.lists(cplx, min_size=8, max_size=8))
def test_canonicalize_preserves_subspace(entries):
    rows = np.array(entries).reshape(2, 4)
    try:
        spec = canonicalize(rows)
    except RankDeficient:
        return
    assert O.projection_residual(boundary_subspace(spec), O.BoundarySubspace.from_constraints(rows)) < 1e-8


# --- construction -----------------------------------------------------------------------


def test_mixed_rejects_rank_one_matrix():
    with pytest.raises(RankDeficient):
        MixedBC([[1, 2], [2, 4]])


def test_separated_validates_and_reduces_angles():
    with pytest.raises(ValueError):
        SeparatedBC(2, 1, 0.1, 0.2)
    spec = SeparatedBC(1, 1, -0.5, 7.0)
    assert 0 <= spec.alpha < 2 * math.pi and math.isclose(spec.alpha, 2 * math.pi - 0.5)
    assert math.isclose(spec.beta, 7.0 - 2 * math.pi)


def test_degenerate_separated_canonical_phase():
    # sin(alpha) = 0: xi is immaterial and normalised to 1
    spec = SeparatedBC(cmath.exp(0.4j), 1, 0.0, 0.3).canonical()
    assert spec.xi == 1


def test_three_dim_rejects_zero_condition():
    with pytest.raises(RankDeficient):
        ThreeDimBC(0, 0, 0, 0)


# --- dimension and subspace -------------------------------------------------------------


def test_extension_dimension_examples():
    assert extension_dimension(ThreeDimBC(1, 0, 0, 0)) == 3
    assert extension_dimension(SeparatedBC(1, 1j, 0.4, 2.0)) == 2
    assert extension_dimension(OneDimBC(Variant.I, (1, 0), [[0, 0], [0, 1]])) == 1


def test_boundary_subspace_examples():
    assert same_space(MixedBC(np.eye(2)), [1, 0, 1, 0], [0, 1, 0, 1])
    assert same_space(ThreeDimBC(1, 0, 0, 0), [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1])
    assert same_space(OneDimBC(Variant.I, (1, 0), [[0, 0], [0, 1]]), [0, 1, 0, 1])


# --- adjoints ---------------------------------------------------------------------------


def test_separated_adjoint_conditions():
    xi, eta, a, b = cmath.exp(0.3j), cmath.exp(-1.1j), 0.7, 2.1
    adj = adjoint(SeparatedBC(xi, eta, a, b))
    rows = np.array(
        [[math.cos(a), -xi * math.sin(a), 0, 0], [0, 0, math.cos(b), -eta * math.sin(b)]]
    )
    assert O.subspace_equal(boundary_subspace(adj), O.BoundarySubspace.from_constraints(rows))


def test_separated_p_adjoint_conditions():
    xi, eta, a, b = cmath.exp(0.3j), cmath.exp(-1.1j), 0.7, 2.1
    padj = p_adjoint(SeparatedBC(xi, eta, a, b))
    rows = np.array(
        [[math.cos(b), eta * math.sin(b), 0, 0], [0, 0, math.cos(a), xi * math.sin(a)]]
    )
    assert O.subspace_equal(boundary_subspace(padj), O.BoundarySubspace.from_constraints(rows))


def test_three_dim_adjoint_example():
    adj = adjoint(ThreeDimBC(1, 0, 0, 0))
    assert isinstance(adj, OneDimBC)
    # alpha1 = beta1 = beta2 = 0
    assert same_space(adj, [0, 1, 0, 0])


def test_mixed_adjoint_matrix():
    a, b, c, d = 1 + 2j, -0.5j, 3.0, 2 - 1j
    adj = adjoint(MixedBC([[a, b], [c, d]], AB))
    assert adj.direction is BA
    expected = np.conj([[d, -b], [-c, a]])
    assert np.allclose(adj.array, expected)


def test_mixed_p_adjoint_matrix():
    a, b, c, d = 1 + 2j, -0.5j, 3.0, 2 - 1j
    padj = p_adjoint(MixedBC([[a, b], [c, d]], BA))
    assert padj.direction is BA
    assert np.allclose(padj.array, np.conj([[d, b], [c, a]]))


def test_identity_is_its_own_p_adjoint():
    padj = p_adjoint(MixedBC(np.eye(2), AB))
    assert padj.direction is AB and np.allclose(padj.array, np.eye(2))


def _random_spec(draw_kind, entries):
    e = entries
    if draw_kind == 0:
        return MixedBC(np.array(e[:4]).reshape(2, 2), AB)
    if draw_kind == 1:
        return MixedBC(np.array(e[:4]).reshape(2, 2), BA)
    if draw_kind == 2:
        return ThreeDimBC(*e[:4])
    variant = Variant.I if draw_kind == 3 else Variant.II
    return OneDimBC(variant, tuple(e[4:6]), np.array(e[:4]).reshape(2, 2))


spec_strategy = st.builds(
    lambda k, e: (k, e), st.integers(0, 4), st.lists(cplx, min_size=6, max_size=6)
)


def _build(drawn):
    try:
        spec = _random_spec(*drawn)
        boundary_subspace(spec)
    except RankDeficient:
        return None
    return spec


@given(spec_strategy)
def test_adjoint_matches_omega_complement(drawn):
    spec = _build(drawn)
    if spec is None:
        return
    space = boundary_subspace(spec)
    comp = O.omega_complement(space)
    assert O.projection_residual(boundary_subspace(adjoint(spec)), comp) < 1e-8
    assert O.projection_residual(boundary_subspace(p_adjoint(spec)), O.apply_p(comp)) < 1e-8


@given(spec_strategy)
def test_adjoint_is_an_involution(drawn):
    spec = _build(drawn)
    if spec is None:
        return
    space = boundary_subspace(spec)
    assert O.projection_residual(boundary_subspace(adjoint(adjoint(spec))), space) < 1e-8
    assert O.projection_residual(boundary_subspace(p_adjoint(p_adjoint(spec))), space) < 1e-8
    assert extension_dimension(adjoint(spec)) == 4 - extension_dimension(spec)


@given(unit, unit, angle, angle)
def test_separated_adjoint_property(xi, eta, a, b):
    spec = SeparatedBC(xi, eta, a, b)
    space = boundary_subspace(spec)
    assert O.subspace_equal(boundary_subspace(adjoint(spec)), O.omega_complement(space), 1e-8)


# --- predicates -------------------------------------------------------------------------


def test_self_adjoint_examples():
    assert is_self_adjoint(SeparatedBC(1, 1, 0.3, 1.2))
    assert is_self_adjoint(MixedBC([[1j, 0], [0, 1j]]))
    assert not is_self_adjoint(ThreeDimBC(1, 1, 1, -1))


def test_p_self_adjoint_examples():
    assert is_p_self_adjoint(SeparatedBC(1, -1, math.pi / 4, math.pi / 4))
    assert is_p_self_adjoint(MixedBC([[1j, 1], [2, -1j]]))
    assert not is_p_self_adjoint(MixedBC([[1j, 1], [2, 1j]]))


def test_pt_symmetric_examples():
    assert is_pt_symmetric(ThreeDimBC(1, 1, 1, -1))
    assert is_pt_symmetric(MixedBC([[2, 1], [3, 2]]))
    assert is_pt_symmetric(OneDimBC(Variant.I, (1, 0), [[0, 0], [0, 1]]))


def test_three_dim_pt_fails_when_moduli_differ():
    assert not is_pt_symmetric(ThreeDimBC(1, 0, 2, 0))
    assert not O.oracle_classify(boundary_subspace(ThreeDimBC(1, 0, 2, 0))).pt_symmetric


def test_classify_examples():
    r = classify(MixedBC([[2, 1], [3, 2]]))
    assert (r.dimension, r.flags) == (2, (True, True, True))
    r = classify(MixedBC([[1j, 0], [0, 1j]]))
    assert r.flags == (True, False, True)
    assert math.isclose(r.phase, math.pi / 2)
    r = classify(SeparatedBC(cmath.exp(1j * math.pi / 3), 1, math.pi / 4, 7 * math.pi / 4))
    assert r.flags == (False, False, False)


def test_classify_cross_check_passes_and_detects(monkeypatch):
    spec = MixedBC([[2, 1], [3, 2]])
    assert classify(spec, cross_check=True).flags == (True, True, True)
    import ptbiext.boundary as B

    monkeypatch.setattr(B, "is_self_adjoint", lambda s: False)
    with pytest.raises(InternalInconsistency):
        B.classify(spec, cross_check=True)


def test_off_dimension_never_self_adjoint():
    for spec in (ThreeDimBC(1, 1, 1, -1), OneDimBC(Variant.I, (1, 0), [[0, 0], [0, 1]])):
        r = classify(spec)
        assert not r.self_adjoint and not r.p_self_adjoint and r.phase is None


@given(unit, finite, finite, st.floats(0.05, 3), st.booleans())
def test_pt_normal_form(phase, zr, zi, s, flip):
    z = complex(zr, zi)
    t = (abs(z) ** 2 - 1) / s
    m = phase * np.array([[z, s], [t, z.conjugate()]])
    spec = MixedBC(m, BA if flip else AB)
    r = classify(spec)
    assert r.pt_symmetric
    phi, k = pt_normal_form(spec)
    assert 0 <= phi < math.pi
    assert math.isclose(abs(np.linalg.det(k)), 1, rel_tol=1e-9)
    assert abs(k[0, 1].imag) < 1e-12 * max(1, abs(k[0, 1])) * 10
    assert abs(k[1, 0].imag) < 1e-12 * max(1, abs(k[1, 0])) * 10
    assert abs(k[1, 1] - k[0, 0].conjugate()) < 1e-9 * max(1, abs(k[0, 0]))


@given(unit, unit, angle, angle)
def test_separated_pt_iff_p_self_adjoint(xi, eta, a, b):
    spec = SeparatedBC(xi, eta, a, b)
    assert is_pt_symmetric(spec) == is_p_self_adjoint(spec)


def test_sa_and_psa_imply_pt_on_real_unimodular_family():
    for a, b in ((2.0, 1.0), (0.5, -3.0), (-1.5, 0.25)):
        m = np.array([[a, b], [(a * a - 1) / b, a]])
        r = classify(MixedBC(m))
        assert r.flags == (True, True, True)


# --- boundary maps ----------------------------------------------------------------------


def test_p_map_examples():
    assert np.allclose(p_map([1, 0, 0, 0]), [0, 0, 1, 0])
    assert np.allclose(p_map([0, 1, 0, 1]), [0, -1, 0, -1])


def test_pt_map_examples():
    assert np.allclose(pt_map([0, 1, 0, 1]), [0, -1, 0, -1])
    assert np.allclose(pt_map([1j, 0, 0, 0]), [0, 0, -1j, 0])


@given(vec4)
def test_boundary_maps_are_involutions(v):
    assert np.allclose(p_map(p_map(v)), v)
    assert np.allclose(pt_map(pt_map(v)), v)


@given(vec4, cplx)
def test_pt_map_is_antilinear(v, c):
    assert np.allclose(pt_map(c * v), np.conj(c) * pt_map(v))
