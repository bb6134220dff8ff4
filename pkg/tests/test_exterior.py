"""Tests for exterior algebra on a frame."""

from __future__ import annotations

from fractions import Fraction
import math

from hypothesis import given, seed, settings, strategies as st
from hypothesis.extra.numpy import arrays
import numpy as np
import pytest

from lp_hodge.exceptions import ExponentError, FrameError, RootSystemError
from lp_hodge.exterior import (
    FormVector,
    Frame,
    StarSign,
    bndry_identity_residual,
    contract,
    contraction_norms,
    diagonal_form_extremes,
    ext_mul,
    hodge_star,
    interior_product,
    nonlinear_star,
    weight_extremes,
    wedge,
)
from lp_hodge.roots import build_root_system

EXPONENTS = [1.1, 1.5, 2.0, 3.0, 10.0]
COEFFICIENTS = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


@st.composite
def forms(draw, max_n: int = 6, min_degree: int = 0) -> FormVector:
    """Draw a form on a standard frame."""

    n = draw(st.integers(min_value=max(1, min_degree), max_value=max_n))
    k = draw(st.integers(min_value=min_degree, max_value=n))
    coeffs = draw(arrays(np.float64, (math.comb(n, k),), elements=COEFFICIENTS))

    return FormVector(Frame.standard(n), k, coeffs)


@seed(1)
@settings(deadline=None)
@given(f=forms(max_n=8))
def test_star_squared_is_sign(f: FormVector) -> None:
    """Test ∗∗ = (-1)^{k(n-k)}."""

    sign = StarSign(f.degree, f.frame.n).sign
    assert hodge_star(hodge_star(f)).allclose(f * sign, atol=1e-12)


@seed(2)
@settings(deadline=None)
@given(f=forms(), p=st.sampled_from(EXPONENTS))
def test_nonlinear_star_duality(f: FormVector, p: float) -> None:
    """Test ∗_{p'}∗_p = (-1)^{k(n-k)} and |∗_p f|^{p'} = |f|^p."""

    conjugate = p / (p - 1)
    sign = StarSign(f.degree, f.frame.n).sign
    image = nonlinear_star(f, p)
    scale = max(1.0, f.norm())

    assert (nonlinear_star(image, conjugate) - f * sign).norm() <= 1e-10 * scale
    assert image.norm() ** conjugate == pytest.approx(f.norm() ** p, rel=1e-10, abs=1e-12)


@seed(3)
@settings(deadline=None)
@given(f=forms())
def test_wedge_with_star_is_volume(f: FormVector) -> None:
    """Test f ∧ ∗f = |f|² vol."""

    volume = wedge(f, hodge_star(f))
    assert volume.degree == f.frame.n
    assert volume.coeffs[0] == pytest.approx(f.norm() ** 2, rel=1e-12, abs=1e-12)


@seed(4)
@settings(deadline=None)
@given(f=forms())
def test_contraction_norms_sum_to_degree(f: FormVector) -> None:
    """Test Σ_a |e*(ω^a)f|² = k|f|²."""

    assert contraction_norms(f).sum() == pytest.approx(f.degree * f.norm() ** 2, rel=1e-12, abs=1e-12)


@seed(5)
@settings(deadline=None)
@given(data=st.data())
def test_anticommutator_is_identity(data: st.DataObject) -> None:
    """Test e(ω^c)e*(ω^c) + e*(ω^c)e(ω^c) = Id."""

    n = data.draw(st.integers(min_value=2, max_value=6))
    k = data.draw(st.integers(min_value=1, max_value=n - 1))
    c = data.draw(st.integers(min_value=0, max_value=n - 1))
    f = FormVector(Frame.standard(n), k, data.draw(arrays(np.float64, (math.comb(n, k),), elements=COEFFICIENTS)))

    assert (ext_mul(c, contract(c, f)) + contract(c, ext_mul(c, f))).allclose(f)


def test_monomial_reorders_with_sign() -> None:
    """Test monomials in non-increasing order pick up the permutation sign."""

    frame = Frame.standard(3)
    assert FormVector.monomial(frame, 1, 0).terms() == {(0, 1): -1.0}
    assert FormVector.monomial(frame, 2, 0, 1).terms() == {(0, 1, 2): 1.0}
    assert FormVector.monomial(frame, 1, 1).terms() == {}


def test_star_of_constant_is_volume() -> None:
    """Test ∗1 = ω^0 ∧ ... ∧ ω^{n-1}."""

    frame = Frame.standard(4)
    assert hodge_star(FormVector(frame, 0, [2.0])).terms() == {(0, 1, 2, 3): 2.0}


def test_interior_product_along_basis_vector() -> None:
    """Test interior product with a basis covector is the contraction."""

    frame = Frame.standard(3)
    f = FormVector.monomial(frame, 0, 2, coefficient=3.0)
    v = np.array([0.0, 0.0, 1.0])
    assert interior_product(v, f).allclose(contract(2, f))
    assert interior_product(v, f).terms() == {(0,): -3.0}


def test_weight_extremes_exact() -> None:
    """Test extremes over exact weights keep Fractions."""

    extremes = weight_extremes([Fraction(1), Fraction(2), Fraction(0), Fraction(1, 2)], 2)
    assert extremes.minimum == Fraction(1, 2)
    assert extremes.maximum == Fraction(3)
    assert extremes.argmin == (2, 3)
    assert extremes.argmax == (0, 1)


def test_diagonal_form_extremes_match_monomials(rng: np.random.Generator) -> None:
    """Test diagonal extremes against every monomial."""

    frame = Frame.standard(5).with_weights(list(rng.uniform(-1, 2, 5)))
    extremes = diagonal_form_extremes(frame, 2)
    values = [
        float(np.asarray(frame.weights) @ contraction_norms(FormVector.monomial(frame, i, j)))
        for i in range(5)
        for j in range(i + 1, 5)
    ]
    assert extremes.minimum == pytest.approx(min(values))
    assert extremes.maximum == pytest.approx(max(values))


@pytest.mark.parametrize(("type_label", "rank"), [("A", 2), ("A", 3), ("C", 2), ("C", 3)])
def test_boundary_identity(type_label: str, rank: int, rng: np.random.Generator) -> None:
    """Test both sides of the boundary identity agree on random forms."""

    rd = build_root_system(type_label, rank)
    frame = rd.iwasawa_frame()
    for _ in range(50):
        phi = FormVector(frame, rank - 1, rng.standard_normal(math.comb(frame.n, rank - 1)))
        identity = bndry_identity_residual(rd, phi)
        assert identity.residual <= 1e-10 * max(1.0, abs(identity.lhs))


def test_boundary_identity_rejects_other_types() -> None:
    """Test the boundary identity needs split A_n or C_n and degree rank - 1."""

    rd = build_root_system("B", 3)
    with pytest.raises(RootSystemError):
        bndry_identity_residual(rd, FormVector.zero(rd.iwasawa_frame(), 2))

    rd = build_root_system("A", 3)
    with pytest.raises(RootSystemError):
        bndry_identity_residual(rd, FormVector.zero(rd.iwasawa_frame(), 1))


def test_invalid_forms() -> None:
    """Test frame and exponent validation."""

    frame = Frame.standard(3)
    with pytest.raises(FrameError):
        FormVector(frame, 1, [1.0, 2.0])
    with pytest.raises(FrameError):
        FormVector(frame, 4, [1.0])
    with pytest.raises(FrameError):
        Frame.standard(17)
    with pytest.raises(FrameError):
        FormVector.monomial(frame, 3)
    with pytest.raises(FrameError):
        FormVector.monomial(frame, 0) + FormVector.monomial(Frame.standard(4), 0)
    with pytest.raises(ExponentError):
        nonlinear_star(FormVector.monomial(frame, 0), 1.0)
