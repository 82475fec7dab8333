"""Generators of the invariant polynomial algebra and their gradients.

For sl_n the chosen generators are the characteristic-polynomial
coefficients

    f_i(x) = coefficient of lambda^(n-1-i) in det(lambda - x),   i = 1..n-1,

of degrees 2..n, computed by the Faddeev-LeVerrier recursion.  Gradients
are taken with respect to the Killing form: grad F is the unique vector
with dF_x(y) = <grad F(x), y> for all y, assembled from central
differences in the basis directions followed by a Killing-matrix solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .liealg import AlgVec, LieAlgebra

FD_STEP = 1e-5


def char_poly_coeffs(m: np.ndarray) -> np.ndarray:
    """Coefficients c with det(lambda - m) = sum_k c[k] lambda^k (Faddeev-LeVerrier)."""
    n = m.shape[0]
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    work = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        prod = m @ work
        c[n - k] = -np.trace(prod) / k
        work = prod + c[n - k] * np.eye(n)
    return c


@dataclass
class InvariantFamily:
    """The fixed generators f_1..f_r with degrees and Killing gradients."""

    algebra: LieAlgebra
    degrees: tuple

    @property
    def r(self) -> int:
        return len(self.degrees)

    @property
    def ell(self) -> int:
        """dim B = (dim G + rank) / 2, which the degrees must sum to."""
        return (self.algebra.dim + self.algebra.rank) // 2

    def values_at(self, x: AlgVec) -> np.ndarray:
        """All f_i(x) in one characteristic-polynomial pass."""
        c = char_poly_coeffs(self.algebra.to_matrix(x))
        n = self.algebra.n
        return np.array([c[n - 1 - i] for i in range(1, n)])

    def eval(self, i: int, x: AlgVec) -> complex:
        """f_i(x), 0-based index."""
        return complex(self.values_at(x)[i])

    def gradient(self, i: int, x: AlgVec, step: float = FD_STEP) -> AlgVec:
        return gradient_killing(self.algebra, lambda v: self.eval(i, v), x, step)


def invariant_generators(L: LieAlgebra) -> InvariantFamily:
    if L.rs.series != "A":
        raise ConfigurationError("invariant generators are realized for series A only")
    degrees = tuple(range(2, L.n + 1))
    return InvariantFamily(L, degrees)


def gradient_killing(L: LieAlgebra, F, x: AlgVec, step: float = FD_STEP) -> AlgVec:
    """Killing-dual gradient of a holomorphic evaluator by central differences."""
    fd = np.empty(L.dim, dtype=complex)
    for i in range(L.dim):
        b = L.basis_vec(i)
        fd[i] = (F(x + step * b) - F(x - step * b)) / (2 * step)
    return AlgVec(np.linalg.solve(L.killing_matrix, fd))


def directional_derivative(F, x: AlgVec, y: AlgVec, step: float = FD_STEP) -> complex:
    """Central-difference dF_x(y); the independent check for gradient_killing."""
    return (F(x + step * y) - F(x - step * y)) / (2 * step)
