"""Exterior algebra over an orthonormal coframe.

Forms are stored densely over the monomial basis ω^{i1}∧…∧ω^{ik}, i1 < … < ik, in
lexicographic order. Covector indices are 0-based.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cache
from itertools import combinations
import logging
from math import comb
from numbers import Real
from typing import TYPE_CHECKING

import numpy as np
from scipy import sparse

from .const import MAX_FRAME_DIMENSION
from .exceptions import FrameError, RootSystemError
from .utils import check_exponent

if TYPE_CHECKING:
    from .roots import RootDatum

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Frame:
    """Orthonormal coframe with optional per-direction weights."""

    n: int
    labels: tuple[str, ...]
    weights: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        """Validate frame invariants."""

        if self.n < 1:
            raise FrameError("invalid_frame", detail=f"dimension {self.n} < 1")
        if self.n > MAX_FRAME_DIMENSION:
            raise FrameError("frame_too_large", n=self.n, maximum=MAX_FRAME_DIMENSION)
        if len(self.labels) != self.n or len(set(self.labels)) != self.n:
            raise FrameError("invalid_frame", detail="labels must be n distinct names")
        if self.weights is not None and len(self.weights) != self.n:
            raise FrameError("invalid_frame", detail="weights must have length n")

    @classmethod
    def standard(cls, n: int, prefix: str = "w", weights: list[float] | None = None) -> Frame:
        """Return frame with labels prefix0..prefix{n-1}."""

        return cls(n, tuple(f"{prefix}{index}" for index in range(n)), None if weights is None else tuple(weights))

    def with_weights(self, weights: list[float]) -> Frame:
        """Return same frame carrying the given weights."""

        return Frame(self.n, self.labels, tuple(float(weight) for weight in weights))


@cache
def basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Return lexicographically ordered k-subsets of range(n)."""

    return tuple(combinations(range(n), k))


@cache
def basis_index(n: int, k: int) -> dict[tuple[int, ...], int]:
    """Return position of every k-subset in the basis."""

    return {subset: position for position, subset in enumerate(basis(n, k))}


def permutation_sign(sequence: tuple[int, ...]) -> int:
    """Return sign of the permutation sorting a sequence of distinct integers."""

    inversions = sum(1 for i, a in enumerate(sequence) for b in sequence[i + 1 :] if a > b)
    return -1 if inversions % 2 else 1


@dataclass(frozen=True, eq=False)
class FormVector:
    """A k-form given by its coefficients over the monomial basis."""

    frame: Frame
    degree: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        """Validate degree and coefficient length, then freeze coefficients."""

        if not 0 <= self.degree <= self.frame.n:
            raise FrameError("degree_overflow", degree=self.degree, n=self.frame.n)
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.shape != (comb(self.frame.n, self.degree),):
            raise FrameError("invalid_frame", detail=f"expected {comb(self.frame.n, self.degree)} coefficients")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, frame: Frame, degree: int) -> FormVector:
        """Return the zero k-form."""

        return cls(frame, degree, np.zeros(comb(frame.n, degree)))

    @classmethod
    def monomial(cls, frame: Frame, *indices: int, coefficient: float = 1.0) -> FormVector:
        """Return coefficient·ω^{indices} with signs from reordering."""

        for index in indices:
            _check_index(frame, index)
        coeffs = np.zeros(comb(frame.n, len(indices)))
        if len(set(indices)) == len(indices):
            subset = tuple(sorted(indices))
            coeffs[basis_index(frame.n, len(indices))[subset]] = coefficient * permutation_sign(indices)

        return cls(frame, len(indices), coeffs)

    @classmethod
    def from_terms(cls, frame: Frame, degree: int, terms: dict[tuple[int, ...], float]) -> FormVector:
        """Return k-form from a map of strictly increasing index tuples to coefficients."""

        coeffs = np.zeros(comb(frame.n, degree))
        index = basis_index(frame.n, degree)
        for subset, value in terms.items():
            if subset not in index:
                raise FrameError("invalid_frame", detail=f"{subset} is not an increasing {degree}-subset")
            coeffs[index[subset]] = value

        return cls(frame, degree, coeffs)

    def terms(self, tol: float = 0.0) -> dict[tuple[int, ...], float]:
        """Return nonzero coefficients keyed by index subset."""

        return {
            subset: float(value)
            for subset, value in zip(basis(self.frame.n, self.degree), self.coeffs, strict=True)
            if abs(value) > tol
        }

    def norm(self) -> float:
        """Return pointwise norm of the form."""

        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: FormVector) -> float:
        """Return inner product with a form of the same degree."""

        _check_same(self, other)
        return float(self.coeffs @ other.coeffs)

    def __add__(self, other: FormVector) -> FormVector:
        """Return sum of two forms."""

        _check_same(self, other)
        return FormVector(self.frame, self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other: FormVector) -> FormVector:
        """Return difference of two forms."""

        _check_same(self, other)
        return FormVector(self.frame, self.degree, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> FormVector:
        """Return form scaled by a number."""

        return FormVector(self.frame, self.degree, scalar * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self) -> FormVector:
        """Return negated form."""

        return FormVector(self.frame, self.degree, -self.coeffs)

    def allclose(self, other: FormVector, atol: float = 1e-12) -> bool:
        """Return whether two forms agree coefficientwise."""

        return self.frame == other.frame and self.degree == other.degree and np.allclose(
            self.coeffs, other.coeffs, rtol=0, atol=atol
        )


@dataclass(frozen=True)
class StarSign:
    """Sign of the Hodge star squared on k-forms in dimension n."""

    k: int
    n: int

    @property
    def sign(self) -> int:
        """Return (-1)^{k(n-k)}."""

        return -1 if (self.k * (self.n - self.k)) % 2 else 1


@dataclass(frozen=True)
class DiagonalExtremes:
    """Extremes of Σ c_a|e*(ω^a)h|² over unit k-forms."""

    minimum: Real
    maximum: Real
    argmin: tuple[int, ...]
    argmax: tuple[int, ...]


@dataclass(frozen=True)
class IdentityResidual:
    """Both sides of the boundary identity for split A_n or C_n."""

    lhs: float
    rhs: float
    middle: float

    @property
    def residual(self) -> float:
        """Return |LHS - RHS|."""

        return abs(self.lhs - self.rhs)

    @property
    def middle_residual(self) -> float:
        """Return |LHS - middle line| with degree-count normalization."""

        return abs(self.lhs - self.middle)


def _check_index(frame: Frame, index: int) -> None:
    """Raise when covector index is outside the frame."""

    if not 0 <= index < frame.n:
        raise FrameError("index_out_of_range", index=index, n=frame.n)


def _check_same(a: FormVector, b: FormVector) -> None:
    """Raise when forms differ in frame or degree."""

    if a.frame != b.frame:
        raise FrameError("frame_mismatch")
    if a.degree != b.degree:
        raise FrameError("invalid_frame", detail=f"degrees {a.degree} and {b.degree} differ")


def wedge(a: FormVector, b: FormVector) -> FormVector:
    """Return a ∧ b."""

    if a.frame != b.frame:
        raise FrameError("frame_mismatch")
    n = a.frame.n
    degree = a.degree + b.degree
    if degree > n:
        raise FrameError("degree_overflow", degree=degree, n=n)

    coeffs = np.zeros(comb(n, degree))
    index = basis_index(n, degree)
    for left, x in a.terms().items():
        for right, y in b.terms().items():
            if set(left) & set(right):
                continue
            merged = left + right
            coeffs[index[tuple(sorted(merged))]] += permutation_sign(merged) * x * y

    return FormVector(a.frame, degree, coeffs)


@cache
def ext_mul_matrix(n: int, k: int, c: int) -> sparse.csr_matrix:
    """Return matrix of e(ω^c) from k-forms to (k+1)-forms."""

    rows, cols, vals = [], [], []
    if k < n:
        target = basis_index(n, k + 1)
        for col, subset in enumerate(basis(n, k)):
            if c in subset:
                continue
            # Moving ω^c past the smaller indices
            position = sum(1 for index in subset if index < c)
            rows.append(target[tuple(sorted((*subset, c)))])
            cols.append(col)
            vals.append(-1.0 if position % 2 else 1.0)

    return sparse.csr_matrix((vals, (rows, cols)), shape=(comb(n, k + 1), comb(n, k)))


@cache
def contract_matrix(n: int, k: int, c: int) -> sparse.csr_matrix:
    """Return matrix of e*(ω^c) from k-forms to (k-1)-forms."""

    if k == 0:
        return sparse.csr_matrix((0, 1))

    return ext_mul_matrix(n, k - 1, c).T.tocsr()


def ext_mul(c: int, f: FormVector) -> FormVector:
    """Return e(ω^c)f = ω^c ∧ f."""

    _check_index(f.frame, c)
    if f.degree == f.frame.n:
        raise FrameError("degree_overflow", degree=f.degree + 1, n=f.frame.n)

    return FormVector(f.frame, f.degree + 1, ext_mul_matrix(f.frame.n, f.degree, c) @ f.coeffs)


def contract(c: int, f: FormVector) -> FormVector:
    """Return e*(ω^c)f, the adjoint of exterior multiplication."""

    _check_index(f.frame, c)
    if f.degree == 0:
        # Contraction kills functions; keep a degree-0 zero for uniform handling
        return FormVector.zero(f.frame, 0)

    return FormVector(f.frame, f.degree - 1, contract_matrix(f.frame.n, f.degree, c) @ f.coeffs)


def interior_product(v: np.ndarray, f: FormVector) -> FormVector:
    """Return Σ_c v_c e*(ω^c)f for a covector with coefficients v."""

    if len(v) != f.frame.n:
        raise FrameError("frame_mismatch")
    if f.degree == 0:
        return FormVector.zero(f.frame, 0)

    coeffs = sum(v[c] * (contract_matrix(f.frame.n, f.degree, c) @ f.coeffs) for c in range(f.frame.n))
    return FormVector(f.frame, f.degree - 1, np.asarray(coeffs))


def contraction_norms(f: FormVector) -> np.ndarray:
    """Return |e*(ω^a)f|² for every direction a."""

    if f.degree == 0:
        return np.zeros(f.frame.n)

    return np.array(
        [np.sum((contract_matrix(f.frame.n, f.degree, c) @ f.coeffs) ** 2) for c in range(f.frame.n)]
    )


def hodge_star(f: FormVector, orientation: int = 1) -> FormVector:
    """Return ∗f with ∗ω^I = orientation·sign(I, I^c)·ω^{I^c}."""

    n = f.frame.n
    coeffs = np.zeros(comb(n, n - f.degree))
    index = basis_index(n, n - f.degree)
    for subset, value in zip(basis(n, f.degree), f.coeffs, strict=True):
        complement = tuple(i for i in range(n) if i not in subset)
        coeffs[index[complement]] = orientation * permutation_sign(subset + complement) * value

    return FormVector(f.frame, n - f.degree, coeffs)


def nonlinear_star(f: FormVector, p: float) -> FormVector:
    """Return ∗_p f = ∗(|f|^{p-2}f)."""

    check_exponent(p)
    magnitude = f.norm()
    if magnitude == 0:
        return FormVector.zero(f.frame, f.frame.n - f.degree)

    return hodge_star(magnitude ** (p - 2) * f)


def quadratic_form(weights: np.ndarray | tuple[float, ...], h: FormVector) -> float:
    """Return Q(h) = Σ_a c_a|e*(ω^a)h|²."""

    return float(np.asarray(weights, dtype=float) @ contraction_norms(h))


def weight_extremes(weights: Sequence[Real], k: int) -> DiagonalExtremes:
    """Return the k-subset sums of smallest and largest weights.

    Works on exact numbers as well as floats and has no dimension limit.
    """

    if not 0 <= k <= len(weights):
        raise FrameError("degree_range", k=k, n=len(weights))

    # Ties resolved by index so the lexicographically first subset wins
    order = sorted(range(len(weights)), key=lambda i: (weights[i], i))
    argmin = tuple(sorted(order[:k]))
    argmax = tuple(sorted(order[len(weights) - k :])) if k else ()

    return DiagonalExtremes(
        minimum=sum((weights[i] for i in argmin), start=0),
        maximum=sum((weights[i] for i in argmax), start=0),
        argmin=argmin,
        argmax=argmax,
    )


def diagonal_form_extremes(frame: Frame, k: int) -> DiagonalExtremes:
    """Return extremes of Q over unit k-forms.

    Q is diagonal on monomials with eigenvalue Σ_{a∈I} c_a, so its extremes are
    the sums of the k smallest and k largest weights.
    """

    weights = [0.0] * frame.n if frame.weights is None else [float(weight) for weight in frame.weights]

    return weight_extremes(weights, k)


def weighted_defect(frame: Frame, k: int, p: float) -> float:
    """Return min over unit k-forms of Σ_a c_a(1/p - |e*(ω^a)h|²)."""

    check_exponent(p)
    weights = np.zeros(frame.n) if frame.weights is None else np.asarray(frame.weights, dtype=float)

    return float(weights.sum() / p - diagonal_form_extremes(frame, k).maximum)


def bndry_identity_residual(rd: RootDatum, phi: FormVector) -> IdentityResidual:
    """Evaluate both sides of the p=2 boundary identity for split A_n or C_n.

    The frame is the Iwasawa frame of the root datum: one direction per positive
    root with weight β(T) in units of |μ|/2, then rank flat directions dt^j.
    """

    if rd.type_label not in ("A", "C") or not rd.is_split:
        raise RootSystemError("identity_type", type=rd.label)
    frame = rd.iwasawa_frame()
    if phi.frame != frame:
        raise FrameError("frame_mismatch")
    if phi.degree != rd.rank - 1:
        raise RootSystemError("identity_degree", expected=rd.rank - 1, k=phi.degree)

    weights = np.asarray(frame.weights, dtype=float)
    norms = contraction_norms(phi)
    phi_norm2 = phi.norm() ** 2
    mu = rd.maximal_root_index
    flat = weights == 0

    lhs = float(np.sum(weights * (0.5 * phi_norm2 - norms)))
    # Zero-weight roots together with the flat directions
    kernel_terms = float(norms[flat].sum())
    rhs = ext_mul(mu, phi).norm() ** 2 + kernel_terms
    middle = (weights.sum() / 2) * phi_norm2 - norms[mu] - phi.degree * phi_norm2 + kernel_terms

    return IdentityResidual(lhs=lhs, rhs=float(rhs), middle=float(middle))
