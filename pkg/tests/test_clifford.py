import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eprgames.clifford import (
    Blade,
    DimensionError,
    Multivector,
    bivector_exp,
    correlators,
    geometric_product,
    get_algebra,
    reversion,
    scalar_part,
    scalar_product,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
particles = st.sampled_from([1, 2, 3])


def rand_mv(n, seed, density=1.0):
    alg = get_algebra(n)
    rng = np.random.default_rng(seed)
    c = rng.normal(size=alg.dim)
    if density < 1.0:
        c[rng.random(alg.dim) > density] = 0.0
    return Multivector(alg, c)


def test_vectors_square_to_one_and_anticommute():
    alg = get_algebra(1)
    e = [alg.vector(1, k) for k in (1, 2, 3)]
    for k in range(3):
        assert (e[k] * e[k]).allclose(alg.scalar(1.0))
    for i in range(3):
        for j in range(i + 1, 3):
            assert (e[i] * e[j]).allclose(-(e[j] * e[i]))


def test_pseudoscalar_is_central_and_squares_to_minus_one():
    alg = get_algebra(1)
    iota = alg.pseudoscalar(1)
    assert (iota * iota).allclose(alg.scalar(-1.0))
    for k in (1, 2, 3):
        v = alg.vector(1, k)
        assert (iota * v).allclose(v * iota)
        assert (iota * v).allclose(alg.isigma(1, k))


def test_bivector_algebra_is_quaternionic():
    alg = get_algebra(1)
    i1, i2, i3 = (alg.isigma(1, k) for k in (1, 2, 3))
    minus_one = alg.scalar(-1.0)
    for b in (i1, i2, i3):
        assert (b * b).allclose(minus_one)
    assert (i1 * i2).allclose(-i3)
    assert (i2 * i3).allclose(-i1)
    assert (i3 * i1).allclose(-i2)


def test_blade_index_roundtrip():
    for n in (1, 2, 3):
        for idx in range(8**n):
            assert Blade.from_index(idx, n).index == idx
    assert Blade((0b011, 0, 0b100)).label == "e12^1 e3^3"
    assert Blade((0,)).label == "1"


def test_blade_validation():
    with pytest.raises(ValueError):
        Blade((8,))
    with pytest.raises(DimensionError):
        Blade(())


@pytest.mark.parametrize("n", [0, 4, 2.5])
def test_bad_particle_count(n):
    with pytest.raises(DimensionError):
        get_algebra(n)


def test_mixed_dimensions_rejected():
    a, b = get_algebra(2).scalar(1.0), get_algebra(3).scalar(1.0)
    with pytest.raises(DimensionError):
        a * b
    with pytest.raises(DimensionError):
        a + b
    with pytest.raises(DimensionError):
        get_algebra(2).blade(Blade((1, 2, 3)))


def test_nonfinite_coefficients_rejected():
    with pytest.raises(ValueError):
        Multivector(get_algebra(1), [np.nan] + [0.0] * 7)


def test_scalar_arithmetic():
    alg = get_algebra(2)
    v = alg.vector(2, 1)
    assert ((v + 2) - 2).allclose(v)
    assert (3 - v).allclose(alg.scalar(3.0) - v)
    assert (v * 2 / 2).allclose(v)
    assert (2 * v).allclose(v + v)


@settings(max_examples=200, deadline=None)
@given(n=particles, s1=seeds, s2=seeds, s3=seeds)
def test_associativity(n, s1, s2, s3):
    a, b, c = rand_mv(n, s1, 0.3), rand_mv(n, s2, 0.3), rand_mv(n, s3, 0.3)
    lhs, rhs = (a * b) * c, a * (b * c)
    assert np.max(np.abs(lhs.coefficients - rhs.coefficients)) <= 1e-12 * max(1.0, np.max(np.abs(lhs.coefficients)))


@settings(max_examples=200, deadline=None)
@given(n=particles, s1=seeds, s2=seeds)
def test_reversion_is_anti_automorphism(n, s1, s2):
    a, b = rand_mv(n, s1, 0.5), rand_mv(n, s2, 0.5)
    assert (~(a * b)).allclose((~b) * (~a), atol=1e-12 * 8**n)
    assert (~~a).allclose(a)


@settings(max_examples=200, deadline=None)
@given(s1=seeds, s2=seeds, p=st.sampled_from([(1, 2), (1, 3), (2, 3)]))
def test_cross_particle_commutation(s1, s2, p):
    """Elements living on different particles commute, whatever their grade."""
    alg = get_algebra(3)
    r1, r2 = np.random.default_rng(s1), np.random.default_rng(s2)
    a = sum((alg._single(p[0], m, r1.normal()) for m in range(8)), alg.zero())
    b = sum((alg._single(p[1], m, r2.normal()) for m in range(8)), alg.zero())
    assert (a * b).allclose(b * a, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(n=particles, s1=seeds, s2=seeds)
def test_scalar_part_is_cyclic(n, s1, s2):
    a, b = rand_mv(n, s1, 0.4), rand_mv(n, s2, 0.4)
    assert math.isclose(scalar_part(a * b), scalar_part(b * a), abs_tol=1e-10)
    assert math.isclose(scalar_product(a, b), scalar_part(a * b), abs_tol=1e-10)


def test_sparse_product_matches_dense_reference():
    rng = np.random.default_rng(3)
    alg = get_algebra(2)
    a, b = rng.normal(size=alg.dim), rng.normal(size=alg.dim)
    dense = np.zeros(alg.dim)
    for i in range(alg.dim):
        for j in range(alg.dim):
            dense[i ^ j] += alg.sign[i, j] * a[i] * b[j]
    got = geometric_product(Multivector(alg, a), Multivector(alg, b)).coefficients
    assert np.allclose(got, dense, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_correlator_properties(n):
    e, j = correlators(n)
    assert (e * e).allclose(e)
    assert (j * j).allclose(-e)
    assert (~e).allclose(e)
    assert math.isclose(scalar_part(e), 2.0 ** (1 - n))


@settings(max_examples=200, deadline=None)
@given(p=particles, axis=st.sampled_from([1, 2, 3]), t1=st.floats(-10, 10), t2=st.floats(-10, 10))
def test_rotors_are_unitary_and_compose(p, axis, t1, t2):
    r1, r2 = bivector_exp(p, axis, t1), bivector_exp(p, axis, t2)
    one = get_algebra(3).scalar(1.0)
    assert (r1 * reversion(r1)).allclose(one)
    assert (r1 * r2).allclose(bivector_exp(p, axis, t1 + t2))


def test_terms_and_repr():
    alg = get_algebra(3)
    mv = alg.vector(1, 1) * 2.0 + alg.isigma(3, 2)
    terms = mv.terms()
    assert terms[Blade((1, 0, 0))] == 2.0
    assert terms[Blade((0, 0, 0b101))] == -1.0
    assert "e1^1" in repr(mv)
    assert repr(alg.zero()) == "Multivector(n=3, 0)"


def test_algebra_pickles_to_shared_instance():
    import pickle

    assert pickle.loads(pickle.dumps(get_algebra(2))) is get_algebra(2)
