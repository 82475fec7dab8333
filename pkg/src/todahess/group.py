"""Elements of G = SL_n and its subgroups B, U, T.

The Borel B is upper-triangular in the matrix realization, matching the
triangular projections of :mod:`todahess.liealg`.  Quotients by the finite
centre Z (the scalar n-th roots of unity) are never materialized: every
consumer works with lifts and compares through Ad or other Z-invariant
data.  Torus lifts from simple-root character values use the principal
branch throughout; a different branch changes the lift by an element of Z
only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .liealg import AlgVec, LieAlgebra


@dataclass
class GrpElt:
    """Group element as an explicit unimodular matrix."""

    mat: np.ndarray

    def __matmul__(self, other: "GrpElt") -> "GrpElt":
        return GrpElt(self.mat @ other.mat)

    @property
    def inv(self) -> "GrpElt":
        return GrpElt(np.linalg.inv(self.mat))


@dataclass
class TorusChar:
    """Values (alpha(t)) of the simple roots on a torus element."""

    values: np.ndarray

    def __mul__(self, other: "TorusChar") -> "TorusChar":
        return TorusChar(self.values * other.values)

    @property
    def inv(self) -> "TorusChar":
        return TorusChar(1.0 / self.values)


def identity(L: LieAlgebra) -> GrpElt:
    return GrpElt(np.eye(L.n, dtype=complex))


def center_elements(L: LieAlgebra) -> list:
    """The centre of SL_n: scalar matrices by the n-th roots of unity."""
    n = L.n
    return [GrpElt(np.exp(2j * np.pi * k / n) * np.eye(n, dtype=complex)) for k in range(n)]


def _strictly_triangular(m: np.ndarray, tol: float) -> bool:
    scale = max(np.linalg.norm(m), 1.0)
    upper = np.linalg.norm(np.tril(m)) <= tol * scale
    lower = np.linalg.norm(np.triu(m)) <= tol * scale
    return upper or lower


def exp_nilpotent(L: LieAlgebra, y: AlgVec, tol: float = 1e-10) -> GrpElt:
    """exp(y) for strictly triangular y, as the exact finite power series."""
    m = L.to_matrix(y)
    if not _strictly_triangular(m, tol):
        raise DomainError("exp_nilpotent needs a strictly triangular argument")
    out = np.eye(L.n, dtype=complex)
    term = np.eye(L.n, dtype=complex)
    for k in range(1, L.n):
        term = term @ m / k
        out = out + term
    return GrpElt(out)


def log_unipotent(L: LieAlgebra, g: GrpElt, tol: float = 1e-8) -> AlgVec:
    """Inverse of exp_nilpotent: finite log series of a unipotent triangular matrix."""
    m = g.mat - np.eye(L.n)
    if not _strictly_triangular(m, tol):
        raise DomainError("log_unipotent needs a unipotent triangular argument")
    out = np.zeros_like(m)
    term = np.eye(L.n, dtype=complex)
    for k in range(1, L.n):
        term = term @ m
        out = out + ((-1) ** (k + 1)) * term / k
    return L.from_matrix(out)


def torus_lift(L: LieAlgebra, ch: TorusChar) -> GrpElt:
    """Diagonal g in SL_n with alpha(g) = ch(alpha) for all simple alpha.

    Back-substitution from t_n = 1 followed by a principal-branch n-th-root
    determinant normalization; the leftover ambiguity is central.
    """
    if np.any(ch.values == 0):
        raise DomainError("torus character values must be nonzero")
    n = L.n
    diag = np.empty(n, dtype=complex)
    diag[-1] = 1.0
    for i in range(n - 2, -1, -1):
        diag[i] = ch.values[i] * diag[i + 1]
    det = np.prod(diag)
    diag = diag * np.exp(-np.log(det) / n)
    return GrpElt(np.diag(diag))


def char_of(L: LieAlgebra, g: GrpElt) -> TorusChar:
    """Simple-root values of a torus (or triangular) element, from its diagonal."""
    d = np.diag(g.mat)
    return TorusChar(d[:-1] / d[1:])


def adjoint(L: LieAlgebra, g: GrpElt, x: AlgVec) -> AlgVec:
    """Ad_g(x) = g x g^{-1} back in basis coordinates."""
    m = L.to_matrix(x)
    return L.from_matrix(g.mat @ m @ np.linalg.inv(g.mat))


def log_near_identity(L: LieAlgebra, g: GrpElt, radius: float = 0.5) -> AlgVec:
    """Principal matrix log of g close to the identity, projected traceless.

    The series log(1 + X) is summed until the terms fall below machine
    precision; callers stay well inside the radius, where convergence is
    geometric.
    """
    x = g.mat - np.eye(L.n)
    if np.linalg.norm(x) >= radius:
        raise DomainError(f"log_near_identity needs |g - 1| < {radius}")
    out = np.zeros_like(x)
    term = np.eye(L.n, dtype=complex)
    for k in range(1, 80):
        term = term @ x
        contrib = ((-1) ** (k + 1)) * term / k
        out = out + contrib
        if np.linalg.norm(contrib) < 1e-18:
            break
    out = out - (np.trace(out) / L.n) * np.eye(L.n)
    return L.from_matrix(out)


def is_in_borel(g: GrpElt, tol: float = 1e-9) -> bool:
    m = g.mat
    return np.linalg.norm(np.tril(m, -1)) <= tol * max(np.linalg.norm(m), 1.0)


def split_borel(L: LieAlgebra, g: GrpElt, tol: float = 1e-9):
    """Split g in B as t * exp(y) with t in T and y in u.

    Returns (TorusChar of t, y).  Recomposing through torus_lift recovers g
    up to a central factor; it recovers g exactly whenever the torus part
    of g is itself a principal-branch lift.
    """
    if not is_in_borel(g, tol):
        raise DomainError("split_borel needs an upper-triangular argument")
    d = np.diag(g.mat)
    if np.any(np.abs(d) < tol):
        raise DomainError("split_borel needs nonzero diagonal entries")
    unip = np.diag(1.0 / d) @ g.mat
    y = log_unipotent(L, GrpElt(unip))
    return TorusChar(d[:-1] / d[1:]), y


def compose_borel(L: LieAlgebra, ch: TorusChar, y: AlgVec) -> GrpElt:
    """t * exp(y) from character data; the torus part is the principal lift."""
    return torus_lift(L, ch) @ exp_nilpotent(L, y)


def random_group_element(L: LieAlgebra, rng: np.random.Generator) -> GrpElt:
    """Generic element of SL_n (Gaussian matrix, determinant-normalized)."""
    while True:
        m = rng.standard_normal((L.n, L.n)) + 1j * rng.standard_normal((L.n, L.n))
        det = np.linalg.det(m)
        if abs(det) > 1e-6:
            return GrpElt(m * np.exp(-np.log(det) / L.n))
