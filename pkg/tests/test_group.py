import numpy as np
import pytest

from todahess.errors import DomainError
from todahess.group import (GrpElt, TorusChar, adjoint, center_elements, char_of,
                            compose_borel, exp_nilpotent, identity, is_in_borel,
                            log_near_identity, random_group_element, split_borel,
                            torus_lift)


def random_u(L, rng, scale=1.0):
    y = L.zero()
    npos = L.rs.n_positive
    y.coeffs[L.rank: L.rank + npos] = scale * (
        rng.standard_normal(npos) + 1j * rng.standard_normal(npos)) / np.sqrt(2)
    return y


def random_char(L, rng):
    return TorusChar(np.exp(0.5 * (rng.standard_normal(L.rank)
                                   + 1j * rng.standard_normal(L.rank))))


def test_exp_zero_is_identity(A2):
    g = exp_nilpotent(A2, A2.zero())
    np.testing.assert_allclose(g.mat, np.eye(3), atol=1e-15)


def test_exp_a1_truncates_at_order_two(A1):
    # oracle: the 2x2 series stops after the linear term
    c = 0.8 - 0.3j
    g = exp_nilpotent(A1, c * A1.e(0))
    np.testing.assert_allclose(g.mat, np.eye(2) + c * A1.to_matrix(A1.e(0)),
                               atol=1e-15)


def test_exp_inverse_pair(A2, rng):
    y = random_u(A2, rng)
    g = exp_nilpotent(A2, y) @ exp_nilpotent(A2, -y)
    np.testing.assert_allclose(g.mat, np.eye(3), atol=1e-12)


def test_exp_rejects_non_nilpotent(A2):
    with pytest.raises(DomainError):
        exp_nilpotent(A2, A2.h(0))


def test_unimodularity(A3, rng):
    y = random_u(A3, rng)
    assert abs(np.linalg.det(exp_nilpotent(A3, y).mat) - 1) < 1e-10
    t = torus_lift(A3, random_char(A3, rng))
    assert abs(np.linalg.det(t.mat) - 1) < 1e-10
    g = random_group_element(A3, rng)
    assert abs(np.linalg.det(g.mat) - 1) < 1e-10


def test_torus_lift_trivial_char_is_central(A2, rng):
    t = torus_lift(A2, TorusChar(np.ones(2, dtype=complex)))
    off = t.mat - t.mat[0, 0] * np.eye(3)
    assert np.abs(off).max() < 1e-12
    x = A2.random_vec(rng)
    assert A2.norm(adjoint(A2, t, x) - x) < 1e-12


def test_torus_lift_a1_scales_root_vectors(A1):
    # oracle: conjugating the elementary matrix by diag(t1, t2) scales by t1/t2
    q = 1.3 - 0.4j
    t = torus_lift(A1, TorusChar(np.array([q])))
    e, f = A1.e(0), A1.e(A1.rs.negative(0))
    assert A1.norm(adjoint(A1, t, e) - q * e) < 1e-12
    assert A1.norm(adjoint(A1, t, f) - (1.0 / q) * f) < 1e-12


def test_torus_char_roundtrip(A3, rng):
    ch = random_char(A3, rng)
    got = char_of(A3, torus_lift(A3, ch))
    np.testing.assert_allclose(got.values, ch.values, atol=1e-12)


def test_torus_lift_products_up_to_centre(A2, rng):
    ch1, ch2 = random_char(A2, rng), random_char(A2, rng)
    lhs = torus_lift(A2, ch1 * ch2)
    rhs = torus_lift(A2, ch1) @ torus_lift(A2, ch2)
    ratio = lhs.mat[0, 0] / rhs.mat[0, 0]
    np.testing.assert_allclose(lhs.mat, ratio * rhs.mat, atol=1e-12)
    assert abs(ratio ** A2.n - 1) < 1e-10
    x = A2.random_vec(rng)
    assert A2.norm(adjoint(A2, lhs, x) - adjoint(A2, rhs, x)) < 1e-10


def test_adjoint_identity(A2, rng):
    x = A2.random_vec(rng)
    assert A2.norm(adjoint(A2, identity(A2), x) - x) < 1e-14


def test_adjoint_preserves_killing(A2, rng):
    g = random_group_element(A2, rng)
    x, y = A2.random_vec(rng), A2.random_vec(rng)
    assert abs(A2.killing(adjoint(A2, g, x), adjoint(A2, g, y))
               - A2.killing(x, y)) < 1e-9


def test_adjoint_of_exp_is_exp_ad(A2, rng):
    y = random_u(A2, rng, scale=0.6)
    x = A2.random_vec(rng)
    lhs = adjoint(A2, exp_nilpotent(A2, y), x)
    acc = x.copy()
    term = x.copy()
    for k in range(1, 12):
        term = A2.bracket(y, term) * (1.0 / k)
        acc = acc + term
    assert A2.norm(lhs - acc) < 1e-10


def test_log_near_identity(A2, rng):
    assert A2.norm(log_near_identity(A2, identity(A2))) == 0.0
    y = random_u(A2, rng, scale=0.1)
    g = exp_nilpotent(A2, y)
    assert A2.norm(log_near_identity(A2, g) - y) < 1e-10
    # exp of the returned value reproduces g (general small element this time)
    x = A2.random_vec(rng) * 0.05
    import scipy.linalg
    g2 = GrpElt(scipy.linalg.expm(A2.to_matrix(x)))
    back = log_near_identity(A2, g2)
    np.testing.assert_allclose(scipy.linalg.expm(A2.to_matrix(back)), g2.mat,
                               atol=1e-9)


def test_log_out_of_radius(A2):
    with pytest.raises(DomainError):
        log_near_identity(A2, GrpElt(3.0 * np.eye(3, dtype=complex)))


def test_borel_membership(A2, rng):
    assert is_in_borel(identity(A2))
    assert is_in_borel(torus_lift(A2, random_char(A2, rng)))
    assert not is_in_borel(random_group_element(A2, rng))


def test_split_borel_diagonal_and_unipotent(A2, rng):
    t = torus_lift(A2, random_char(A2, rng))
    ch, y = split_borel(A2, t)
    assert A2.norm(y) < 1e-12
    u = exp_nilpotent(A2, random_u(A2, rng))
    ch2, y2 = split_borel(A2, u)
    np.testing.assert_allclose(ch2.values, 1.0, atol=1e-12)


def test_split_borel_roundtrip(A3, rng):
    # oracle: build b = t exp(y) from principal-branch data, split, recompose
    ch = random_char(A3, rng)
    y = random_u(A3, rng)
    b = compose_borel(A3, ch, y)
    ch2, y2 = split_borel(A3, b)
    b2 = compose_borel(A3, ch2, y2)
    assert np.abs(b2.mat - b.mat).max() < 1e-9


def test_split_borel_rejects_lower(A2, rng):
    g = GrpElt(np.eye(3, dtype=complex) + np.tril(np.ones((3, 3)), -1))
    with pytest.raises(DomainError):
        split_borel(A2, g)


def test_centre_acts_trivially(A2, rng):
    x = A2.random_vec(rng)
    zs = center_elements(A2)
    assert len(zs) == A2.n
    for z in zs:
        assert abs(np.linalg.det(z.mat) - 1) < 1e-12
        assert A2.norm(adjoint(A2, z, x) - x) < 1e-12
