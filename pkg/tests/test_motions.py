"""Linear isometries, motions, composition/decomposition, and motion audits."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ballcover.motions import (
    ComposedLinear,
    Identity,
    Motion,
    PlanarRotation,
    ScaledLinear,
    SignedPermutation,
    compose,
    decompose,
    identity_motion,
    motion_audit,
    planar_rotation_between,
    scale_linear_part,
    translation,
    trivial_shift_premise,
)
from ballcover.spaces import Space


def rotation_matrix(e1u, u, alpha):
    """Dense oracle: I + (cos a - 1)(aa^T + uu^T) + sin a (ua^T - au^T)."""
    a = np.asarray(e1u, dtype=float)
    u = np.asarray(u, dtype=float)
    eye = np.eye(a.shape[0])
    c, s = math.cos(alpha), math.sin(alpha)
    return eye + (c - 1.0) * (np.outer(a, a) + np.outer(u, u)) + s * (np.outer(u, a) - np.outer(a, u))


def signed_permutation_matrix(perm, signs):
    dim = len(perm)
    mat = np.zeros((dim, dim))
    for i in range(dim):
        mat[i, perm[i]] = signs[i]
    return mat


def test_identity_apply():
    x = np.array([1.0, -2.0, 3.0])
    assert np.array_equal(Identity(3).apply(x), x)
    assert np.array_equal(Identity(3).inverse().apply(x), x)


def test_planar_rotation_matches_dense_oracle():
    rng = np.random.default_rng(0)
    for _ in range(20):
        dim = int(rng.integers(2, 6))
        a = rng.standard_normal(dim)
        a /= np.linalg.norm(a)
        raw = rng.standard_normal(dim)
        u = raw - np.dot(raw, a) * a
        u /= np.linalg.norm(u)
        alpha = float(rng.uniform(-math.pi, math.pi))
        rot = PlanarRotation(a, u, alpha)
        mat = rotation_matrix(a, u, alpha)
        pts = rng.standard_normal((7, dim))
        assert np.allclose(rot.apply(pts), pts @ mat.T, atol=1e-12)
        assert np.allclose(rot.inverse().apply(rot.apply(pts)), pts, atol=1e-12)


def test_planar_rotation_quarter_turn_frozen():
    rot = PlanarRotation(np.array([1.0, 0.0]), np.array([0.0, 1.0]), math.pi / 2)
    out = rot.apply(np.array([1.0, 0.0]))
    assert out == pytest.approx([0.0, 1.0], abs=1e-15)


def test_planar_rotation_validation():
    with pytest.raises(ValueError):
        PlanarRotation(np.array([2.0, 0.0]), np.array([0.0, 1.0]), 1.0)  # not unit
    with pytest.raises(ValueError):
        PlanarRotation(np.array([1.0, 0.0]), np.array([1.0, 0.0]), 1.0)  # not orthogonal


def test_signed_permutation_matches_dense_oracle():
    rng = np.random.default_rng(1)
    for _ in range(20):
        dim = int(rng.integers(1, 7))
        perm = tuple(int(i) for i in rng.permutation(dim))
        signs = tuple(int(s) for s in rng.choice([-1, 1], dim))
        sp = SignedPermutation(perm, signs)
        mat = signed_permutation_matrix(perm, signs)
        pts = rng.standard_normal((5, dim))
        assert np.allclose(sp.apply(pts), pts @ mat.T, atol=0)
        assert np.allclose(sp.inverse().apply(sp.apply(pts)), pts, atol=0)


def test_signed_permutation_validation():
    with pytest.raises(ValueError):
        SignedPermutation((0, 0), (1, 1))
    with pytest.raises(ValueError):
        SignedPermutation((0, 1), (1, 2))


def test_motion_apply_and_inverse_roundtrip():
    flip = SignedPermutation((1, 0), (1, -1))
    m = Motion(flip, np.array([0.5, -0.25]))
    x = np.array([1.0, 2.0])
    y = m.apply(x)
    assert np.allclose(y, [2.0 + 0.5, -1.0 - 0.25], atol=0)
    assert np.allclose(m.inverse().apply(y), x, atol=1e-15)


small_dims = st.integers(2, 4)


@st.composite
def motions(draw, dim):
    kind = draw(st.sampled_from(["identity", "translation", "signed", "rotation"]))
    shift = np.asarray(draw(st.lists(st.floats(-2, 2), min_size=dim, max_size=dim)))
    if kind == "identity":
        lin = Identity(dim)
    elif kind == "translation":
        return translation(shift)
    elif kind == "signed":
        perm = tuple(draw(st.permutations(range(dim))))
        signs = tuple(draw(st.lists(st.sampled_from([-1, 1]), min_size=dim, max_size=dim)))
        lin = SignedPermutation(perm, signs)
    else:
        alpha = draw(st.floats(-3.0, 3.0))
        a = np.zeros(dim)
        a[0] = 1.0
        u = np.zeros(dim)
        u[1] = 1.0
        lin = PlanarRotation(a, u, alpha)
    return Motion(lin, shift)


@given(data=st.data(), dim=small_dims)
@settings(max_examples=60, deadline=None)
def test_compose_agrees_with_pointwise_application(data, dim):
    f = data.draw(motions(dim))
    g = data.draw(motions(dim))
    x = np.asarray(data.draw(st.lists(st.floats(-3, 3), min_size=dim, max_size=dim)))
    fg = compose(f, g)
    assert np.allclose(fg.apply(x), f.apply(g.apply(x)), atol=1e-9)


@given(data=st.data(), dim=small_dims)
@settings(max_examples=60, deadline=None)
def test_decompose_is_exact(data, dim):
    m = data.draw(motions(dim))
    g, h = data.draw(st.just(decompose(m)))
    x = np.asarray(data.draw(st.lists(st.floats(-3, 3), min_size=dim, max_size=dim)))
    # bitwise: h(g(x)) is literally linear(x) + shift on both paths
    assert np.array_equal(h.apply(g.apply(x)), m.apply(x))
    assert np.array_equal(g.apply(np.zeros(dim)), np.zeros(dim))
    assert isinstance(h.linear, Identity)


def test_compose_closures():
    sp1 = SignedPermutation((1, 2, 0), (1, -1, 1))
    sp2 = SignedPermutation((2, 0, 1), (-1, 1, 1))
    lin = compose(Motion(sp1, np.zeros(3)), Motion(sp2, np.zeros(3))).linear
    assert isinstance(lin, SignedPermutation)
    a = np.array([1.0, 0.0, 0.0])
    u = np.array([0.0, 1.0, 0.0])
    r1 = Motion(PlanarRotation(a, u, 0.4), np.zeros(3))
    r2 = Motion(PlanarRotation(a, u, 0.3), np.zeros(3))
    lin = compose(r1, r2).linear
    assert isinstance(lin, PlanarRotation)
    assert lin.alpha == pytest.approx(0.7)
    mixed = compose(r1, Motion(sp1, np.zeros(3))).linear
    assert isinstance(mixed, ComposedLinear)
    x = np.array([0.3, -1.2, 0.8])
    assert np.allclose(mixed.apply(x), r1.linear.apply(sp1.apply(x)), atol=1e-14)
    assert np.allclose(mixed.inverse().apply(mixed.apply(x)), x, atol=1e-14)


def test_planar_rotation_between_generic():
    e1 = np.array([1.0, 0.0, 0.0])
    e2 = np.array([0.0, 1.0, 0.0])
    m = planar_rotation_between(e1, e2)
    assert np.allclose(m.apply(e1), e2, atol=1e-12)
    assert np.allclose(m.shift, 0.0)
    rng = np.random.default_rng(4)
    for _ in range(10):
        a = rng.standard_normal(4)
        b = rng.standard_normal(4)
        b *= np.linalg.norm(a) / np.linalg.norm(b)
        m = planar_rotation_between(a, b)
        assert np.allclose(m.apply(a), b, atol=1e-9)


def test_planar_rotation_between_identity_and_antipodal():
    e = np.array([0.6, 0.8])
    assert isinstance(planar_rotation_between(e, e).linear, Identity)
    m = planar_rotation_between(e, -e)
    assert np.allclose(m.apply(e), -e, atol=1e-12)
    with pytest.raises(ValueError):
        planar_rotation_between(e, 2.0 * e)
    with pytest.raises(ValueError):
        planar_rotation_between(np.array([1.0]), np.array([-1.0]))


def test_trivial_shift_premise():
    space = Space(2, 2.0)
    x = np.array([1.0, 0.0])
    assert trivial_shift_premise(space, identity_motion(2), x)
    assert not trivial_shift_premise(space, translation(np.array([0.5, 0.0])), x)
    # non-strictly-convex norms admit shifted motions satisfying the premise:
    # shifting along axis 1 does not change the sup-norm of (+-1, 0)
    space_inf = Space(2, math.inf)
    shifted = translation(np.array([0.0, 0.5]))
    assert trivial_shift_premise(space_inf, shifted, x)


@pytest.mark.parametrize(
    "space,m",
    [
        (Space(3, 2.0), identity_motion(3)),
        (Space(3, 2.0), translation(np.array([0.3, -1.0, 2.0]))),
        (
            Space(3, 2.0),
            Motion(
                PlanarRotation(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]), 0.7),
                np.array([0.1, 0.2, -0.3]),
            ),
        ),
        (Space(4, math.inf), Motion(SignedPermutation((2, 0, 3, 1), (1, -1, -1, 1)), np.ones(4))),
        (Space(2, 1.0), Motion(SignedPermutation((1, 0), (-1, 1)), np.zeros(2))),
    ],
)
def test_motion_audit_passes_for_true_motions(space, m):
    report = motion_audit(space, m, 2000, seed=11)
    assert report.verdict == "pass"
    assert report.failures == 0
    assert report.residual_max <= 1e-9
    assert report.witnesses == ()


def test_motion_audit_fails_for_scaled_control():
    space = Space(3, 2.0)
    m = translation(np.array([0.1, 0.0, 0.0]))
    bad = scale_linear_part(m, 1.01)
    assert isinstance(bad.linear, ScaledLinear)
    report = motion_audit(space, bad, 2000, seed=11)
    assert report.verdict == "fail"
    assert report.failures > 0
    assert report.residual_max >= 1e-3
    assert len(report.witnesses) > 0


def test_motion_audit_worker_invariance():
    space = Space(3, 2.0)
    m = Motion(
        PlanarRotation(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]), 1.1),
        np.array([0.5, 0.0, -0.5]),
    )
    r1 = motion_audit(space, m, 20_000, seed=3, workers=1)
    r4 = motion_audit(space, m, 20_000, seed=3, workers=4)
    assert r1.to_json() == r4.to_json()


def test_rotation_on_non_euclidean_space_rejected():
    space = Space(2, 1.0)
    rot = Motion(PlanarRotation(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 0.3), np.zeros(2))
    with pytest.raises(ValueError):
        rot.check_space(space)
    with pytest.raises(ValueError):
        motion_audit(space, rot, 100, seed=0)
