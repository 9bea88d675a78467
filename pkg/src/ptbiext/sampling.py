"""Random extension specs for agreement sweeps.

Generic draws almost never land in any symmetry class, so each sampler mixes
generic draws with draws from the structured families (self-adjoint,
parity-self-adjoint, PT-symmetric and their intersections). Family members are
built from their defining parametrisation, never from the closed-form
predicates under test.
"""

import math

import numpy as np

from .boundary import (
    Direction,
    MixedBC,
    OneDimBC,
    SeparatedBC,
    ThreeDimBC,
    Variant,
)

VARIANTS = ("separated", "mixed_ab", "mixed_ba", "three_dim", "one_dim")

_QUARTER = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)


def _cplx(rng, size=None):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def _unit(rng):
    return complex(np.exp(1j * rng.uniform(0, 2 * math.pi)))


def _angle(rng, degenerate_prob=0.2):
    if rng.random() < degenerate_prob:
        return float(rng.choice(_QUARTER))
    return float(rng.uniform(0, 2 * math.pi))


def random_separated(rng):
    family = rng.integers(6)
    alpha, beta = _angle(rng), _angle(rng)
    if family == 0:
        return SeparatedBC(_unit(rng), _unit(rng), alpha, beta)
    if family == 1:
        # xi, eta in {+1, -1}
        return SeparatedBC(rng.choice([1, -1]), rng.choice([1, -1]), alpha, beta)
    if family == 2:
        # alpha + beta = 0 mod pi, xi eta = 1
        xi = _unit(rng)
        k = int(rng.integers(2))
        return SeparatedBC(xi, xi.conjugate(), alpha, k * math.pi - alpha)
    if family == 3:
        # alpha - beta = 0 mod pi, xi eta = -1
        xi = _unit(rng)
        k = int(rng.integers(2))
        return SeparatedBC(xi, -xi.conjugate(), alpha, alpha + k * math.pi)
    if family == 4:
        # Dirichlet-like: xi = eta = 1, alpha + beta = 0 mod pi
        return SeparatedBC(1, 1, alpha, -alpha)
    # one end at a quarter angle, phases arbitrary
    return SeparatedBC(_unit(rng), _unit(rng), float(rng.choice(_QUARTER)), beta)


def _real_unimodular(rng):
    r = rng.standard_normal((2, 2))
    det = np.linalg.det(r)
    while abs(det) < 1e-2:
        r = rng.standard_normal((2, 2))
        det = np.linalg.det(r)
    if det < 0:
        r[0] *= -1
        det = -det
    return r / math.sqrt(det)


def random_mixed_matrix(rng):
    family = rng.integers(7)
    phase = _unit(rng)
    if family == 0:
        m = _cplx(rng, (2, 2))
    elif family == 1:
        # self-adjoint: exp(i phi) * real unimodular
        m = phase * _real_unimodular(rng)
    elif family == 2:
        # parity-self-adjoint: d = conj(a), b and c real
        a = complex(_cplx(rng))
        b, c = rng.standard_normal(2)
        m = np.array([[a, b], [c, a.conjugate()]])
    elif family == 3:
        # PT: exp(i phi) [[z, s], [t, conj(z)]], s, t real, |z|^2 - s t = 1
        z = complex(_cplx(rng))
        s = rng.standard_normal()
        while abs(s) < 1e-2:
            s = rng.standard_normal()
        t = (abs(z) ** 2 - 1) / s
        m = phase * np.array([[z, s], [t, z.conjugate()]])
    elif family == 4:
        # all three: real, a = d, a^2 - bc = 1
        a, b = rng.standard_normal(2)
        while abs(b) < 1e-2:
            b = rng.standard_normal()
        c = (a * a - 1) / b
        m = np.array([[a, b], [c, a]], dtype=complex)
    elif family == 5:
        # self-adjoint and PT but (for generic phase) not parity-self-adjoint
        r, s = rng.standard_normal(2)
        while abs(s) < 1e-2:
            s = rng.standard_normal()
        t = (r * r - 1) / s
        m = phase * np.array([[r, s], [t, r]])
    else:
        # parity-self-adjoint with |det| = 1 (hence also PT)
        z = complex(_cplx(rng))
        s = rng.standard_normal()
        while abs(s) < 1e-2:
            s = rng.standard_normal()
        t = (abs(z) ** 2 - 1) / s
        m = np.array([[z, s], [t, z.conjugate()]])
    if abs(np.linalg.det(m)) < 1e-3:
        return random_mixed_matrix(rng)
    return m


def random_mixed(rng, direction):
    return MixedBC(random_mixed_matrix(rng), direction)


def random_three_dim(rng):
    family = rng.integers(5)
    if family == 0:
        return ThreeDimBC(*_cplx(rng, 4))
    if family == 1:
        # |a| = |c|, |b| = |d|, a conj(d) + b conj(c) = 0
        a, b = _cplx(rng, 2)
        c = abs(a) * _unit(rng)
        d = -np.conj(b) * c / np.conj(a)
        return ThreeDimBC(a, b, c, d)
    if family == 2:
        # a = c = 0 with |b| = |d|
        b = complex(_cplx(rng))
        return ThreeDimBC(0, b, 0, abs(b) * _unit(rng))
    if family == 3:
        # b = d = 0 with |a| = |c|, or a near miss with |a| != |c|
        a = complex(_cplx(rng))
        c = abs(a) * _unit(rng) * (1.0 if rng.random() < 0.5 else 2.0)
        return ThreeDimBC(a, 0, c, 0)
    # sparse generic
    v = _cplx(rng, 4)
    v[rng.random(4) < 0.5] = 0
    if not np.any(v):
        v[rng.integers(4)] = 1.0
    return ThreeDimBC(*v)


def _one_dim_through(rng, v, variant):
    """A 1-dimensional spec whose boundary subspace is the line through ``v``."""
    v = np.asarray(v, dtype=complex)
    if variant is Variant.I:
        src, dst = v[:2], v[2:]
    else:
        src, dst = v[2:], v[:2]
    if np.linalg.norm(src) < 1e-6:
        src = src + np.array([1.0, 0.0])
        # keep the line consistent
        if variant is Variant.I:
            v = np.concatenate([src, dst])
        else:
            v = np.concatenate([dst, src])
    pair = (src[1], -src[0])
    m = np.outer(dst, src.conj()) / np.vdot(src, src)
    m = m + np.outer(_cplx(rng, 2), np.array([src[1], -src[0]]))
    return OneDimBC(variant, pair, m)


def random_one_dim(rng):
    family = rng.integers(3)
    variant = Variant.I if rng.random() < 0.5 else Variant.II
    if family == 0:
        return OneDimBC(variant, tuple(_cplx(rng, 2)), _cplx(rng, (2, 2)))
    if family == 1:
        # PT-invariant line: (u1, u2, conj(u1), -conj(u2)) times a phase
        u = _cplx(rng, 2)
        v = _unit(rng) * np.array([u[0], u[1], np.conj(u[0]), -np.conj(u[1])])
        return _one_dim_through(rng, v, variant)
    return _one_dim_through(rng, _cplx(rng, 4), variant)


def random_spec(rng, variant):
    if variant == "separated":
        return random_separated(rng)
    if variant == "mixed_ab":
        return random_mixed(rng, Direction.ALPHA_FROM_BETA)
    if variant == "mixed_ba":
        return random_mixed(rng, Direction.BETA_FROM_ALPHA)
    if variant == "three_dim":
        return random_three_dim(rng)
    if variant == "one_dim":
        return random_one_dim(rng)
    raise ValueError(f"unknown variant {variant!r}")
