import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcgshadow.symplectic import (
    ConfigurationError,
    DegenerateCurveError,
    DimensionError,
    NotSymplecticError,
    SympMatrix,
    as_vector,
    identity,
    is_involution,
    is_symplectic,
    is_symplectic_mod,
    omega,
    pairing,
    primitive,
    reduce_mod,
    transvection,
    x,
    y,
)

CASES = settings(max_examples=1000, derandomize=True, deadline=None)


def test_pairing_basis():
    assert pairing(x(3, 1), y(3, 1)) == 1
    assert pairing(y(3, 1), x(3, 1)) == -1
    assert pairing(x(3, 1), x(3, 2)) == 0
    assert pairing(x(3, 2), y(3, 1)) == 0


def test_pairing_dimension_error():
    with pytest.raises(DimensionError):
        pairing(x(2, 1), x(3, 1))


def test_omega_shape():
    om = omega(3)
    assert (om.T == -om).all()
    assert round(np.linalg.det(np.array(om, dtype=float))) == 1


def test_transvection_examples():
    t = transvection(x(1, 1))
    assert list(t @ y(1, 1)) == list(y(1, 1) - x(1, 1))
    assert list(t @ x(1, 1)) == list(x(1, 1))
    c = x(2, 1) + x(2, 2)
    assert transvection(c) == transvection(-c)


def test_transvection_zero():
    with pytest.raises(DegenerateCurveError):
        transvection([0, 0, 0, 0])


def test_symp_matrix_rejects_non_symplectic():
    with pytest.raises(NotSymplecticError):
        SympMatrix([[1, 1], [0, 2]])
    with pytest.raises(DimensionError):
        SympMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_is_involution_examples():
    assert is_involution(SympMatrix.identity(2))
    assert not is_involution(transvection(x(2, 1)))
    assert is_involution(SympMatrix(-identity(2)))


def test_reduce_mod_examples():
    assert (reduce_mod(SympMatrix.identity(2), 2) == np.identity(4)).all()
    t = reduce_mod(transvection(x(1, 1)), 2)
    assert is_symplectic_mod(t, 2)
    assert reduce_mod(transvection(x(1, 1)), 3)[0, 1] == 2  # the -1 entry
    with pytest.raises(ConfigurationError):
        reduce_mod(SympMatrix.identity(1), 4)


def test_inverse_and_power():
    t = transvection(x(2, 1) + y(2, 2))
    assert (t @ t.inverse()).is_identity()
    assert t ** -3 == t.inverse() ** 3
    assert (t ** 0).is_identity()


def test_primitive():
    assert primitive([0, 2, 3, 0])
    assert not primitive([0, 2, 4, 0])
    assert not primitive([0, 0])


def test_wrong_length_vector():
    with pytest.raises(DimensionError):
        as_vector([1, 2, 3], genus=2)
    with pytest.raises(DimensionError):
        transvection(x(2, 1)) @ x(3, 1)


# -- property suites ---------------------------------------------------------

small = st.integers(-2, 2)


@st.composite
def genus_and_vectors(draw, count=2):
    g = draw(st.integers(1, 4))
    vecs = [np.array(draw(st.lists(small, min_size=2 * g, max_size=2 * g)), dtype=object) for _ in range(count)]
    return g, vecs


@st.composite
def symplectic_matrix(draw, g):
    m = SympMatrix.identity(g)
    for _ in range(draw(st.integers(0, 4))):
        c = draw(st.lists(st.integers(-1, 1), min_size=2 * g, max_size=2 * g))
        if any(c):
            t = transvection(c)
            m = m @ (t if draw(st.booleans()) else t.inverse())
    return m


@CASES
@given(st.data())
def test_conjugation_law(data):
    g, (c, _) = data.draw(genus_and_vectors())
    if not any(c):
        return
    m = data.draw(symplectic_matrix(g))
    assert m @ transvection(c) @ m.inverse() == transvection(m @ c)


@CASES
@given(st.data())
def test_commutation_law(data):
    g, (c, d) = data.draw(genus_and_vectors())
    if not any(c) or not any(d) or pairing(c, d):
        return
    tc, td = transvection(c), transvection(d)
    assert tc @ td == td @ tc


@CASES
@given(genus_and_vectors(count=1))
def test_transvection_symplectic(gv):
    g, (c,) = gv
    if any(c):
        assert is_symplectic(transvection(c).array)


@CASES
@given(st.data())
def test_reduce_mod_multiplicative(data):
    g = data.draw(st.integers(1, 3))
    p = data.draw(st.sampled_from([2, 3, 5, 7]))
    a = data.draw(symplectic_matrix(g))
    b = data.draw(symplectic_matrix(g))
    assert ((reduce_mod(a, p) @ reduce_mod(b, p)) % p == reduce_mod(a @ b, p)).all()
