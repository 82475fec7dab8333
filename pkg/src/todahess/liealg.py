"""Matrix realization of the split simple Lie algebra, type A.

Ground truth is the defining representation by traceless n x n complex
matrices (the algebra of SL_n).  The basis is

    h_1 .. h_r,  e_{beta}  for every root beta,

in the root order fixed by :mod:`todahess.rootsys`.  Simple-root vectors
carry the normalization <e_a, e_-a> = 1 under the Killing form, which for
sl_n (where <x, y> = 2n tr(xy)) forces

    e_a  = E_{i,i+1},      e_-a = E_{i+1,i} / (2n),
    h_a  = [e_a, e_-a] = (E_ii - E_{i+1,i+1}) / (2n).

Root vectors for non-simple roots are raw elementary matrices; nothing
downstream depends on their scale.  All structure data (ad matrices,
Killing matrix, bracket tensor) is derived from commutators of these
matrices, never from abstract relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError
from .rootsys import RootSystem

#: Series with a matrix realization.  Root systems exist for all classical
#: series; the Lie algebra, group and everything downstream are A-only.
MATRIX_SERIES = frozenset({"A"})


@dataclass
class AlgVec:
    """Element of the Lie algebra as a coefficient vector over the fixed basis."""

    coeffs: np.ndarray

    def __add__(self, other: "AlgVec") -> "AlgVec":
        return AlgVec(self.coeffs + other.coeffs)

    def __sub__(self, other: "AlgVec") -> "AlgVec":
        return AlgVec(self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "AlgVec":
        return AlgVec(self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "AlgVec":
        return AlgVec(-self.coeffs)

    def copy(self) -> "AlgVec":
        return AlgVec(self.coeffs.copy())


def _matrix_position(coords) -> tuple:
    """Row/column of the elementary matrix realizing an A-type root.

    A-type root coordinates are a consecutive run of +1 (positive roots,
    epsilon_i - epsilon_j with i < j) or -1 entries.
    """
    nz = np.nonzero(coords)[0]
    i, j = int(nz[0]), int(nz[-1]) + 1
    if coords[nz[0]] > 0:
        return i, j
    return j, i


class LieAlgebra:
    """sl_n with basis, Killing form, grading and adjoint machinery."""

    def __init__(self, rs: RootSystem):
        if rs.series not in MATRIX_SERIES:
            raise ConfigurationError(
                f"matrix realization only available for series {sorted(MATRIX_SERIES)}, "
                f"got {rs.series}"
            )
        self.rs = rs
        self.rank = rs.rank
        self.n = rs.rank + 1
        self.dim = rs.n_roots + rs.rank

        n = self.n
        mats = []
        # Simple-root pairs first fix the Cartan basis h_a = [e_a, e_-a].
        e_pos = [self._root_matrix(k) for k in range(rs.n_roots)]
        for i in range(self.rank):
            ei = e_pos[i]
            fi = e_pos[rs.negative(i)]
            mats.append(ei @ fi - fi @ ei)
        mats.extend(e_pos)
        self.basis_mats = np.array(mats)

        self.grading = np.concatenate(
            [np.zeros(self.rank, dtype=int), rs.heights]
        )

        flat = self.basis_mats.reshape(self.dim, n * n)
        self._to_coords_op = np.linalg.pinv(flat.T)

        # ad matrices of the basis elements (column j of ads[i] holds the
        # coordinates of [b_i, b_j]), then the Killing matrix K_ij = tr(ad_i ad_j).
        ads = np.empty((self.dim, self.dim, self.dim), dtype=complex)
        for i in range(self.dim):
            bi = self.basis_mats[i]
            comm = bi[None, :, :] @ self.basis_mats - self.basis_mats @ bi[None, :, :]
            ads[i] = self._to_coords_op @ comm.reshape(self.dim, n * n).T
        self._basis_ads = ads
        self.killing_matrix = np.einsum("iab,jba->ij", ads, ads)

    def _root_matrix(self, k: int) -> np.ndarray:
        rs = self.rs
        i, j = _matrix_position(rs.coords[k])
        scale = 1.0
        if rs.heights[k] == -1:
            scale = 1.0 / (2 * self.n)
        m = np.zeros((self.n, self.n), dtype=complex)
        m[i, j] = scale
        return m

    # -- coordinate <-> matrix conversion ---------------------------------

    def zero(self) -> AlgVec:
        return AlgVec(np.zeros(self.dim, dtype=complex))

    def basis_vec(self, i: int) -> AlgVec:
        v = np.zeros(self.dim, dtype=complex)
        v[i] = 1.0
        return AlgVec(v)

    def h(self, i: int) -> AlgVec:
        """Cartan basis vector h_{alpha_i}."""
        return self.basis_vec(i)

    def e(self, root_id: int) -> AlgVec:
        """Root vector e_beta for the given root id."""
        return self.basis_vec(self.rank + root_id)

    def e_index(self, root_id: int) -> int:
        return self.rank + root_id

    def to_matrix(self, x: AlgVec) -> np.ndarray:
        return np.tensordot(x.coeffs, self.basis_mats, axes=1)

    def from_matrix(self, m: np.ndarray) -> AlgVec:
        return AlgVec(self._to_coords_op @ np.asarray(m, dtype=complex).ravel())

    # -- bilinear structure -----------------------------------------------

    def bracket(self, x: AlgVec, y: AlgVec) -> AlgVec:
        mx, my = self.to_matrix(x), self.to_matrix(y)
        return self.from_matrix(mx @ my - my @ mx)

    def ad_matrix(self, x: AlgVec) -> np.ndarray:
        """Matrix of y -> [x, y] over the basis."""
        return np.tensordot(x.coeffs, self._basis_ads, axes=1)

    def killing(self, x: AlgVec, y: AlgVec) -> complex:
        """The (complex-bilinear) Killing form."""
        return complex(x.coeffs @ self.killing_matrix @ y.coeffs)

    @cached_property
    def killing_inverse(self) -> np.ndarray:
        return np.linalg.inv(self.killing_matrix)

    @cached_property
    def bracket_tensor(self) -> np.ndarray:
        """C[i, j, :] = coordinates of [b_i, b_j]; columns of the basis ads."""
        return np.transpose(self._basis_ads, (0, 2, 1))

    def norm(self, x: AlgVec) -> float:
        return float(np.linalg.norm(x.coeffs))

    # -- grading and triangular projections -------------------------------

    def graded_component(self, x: AlgVec, n: int) -> AlgVec:
        return AlgVec(np.where(self.grading == n, x.coeffs, 0.0))

    def heights_present(self):
        return sorted(set(int(g) for g in self.grading))

    def project_bminus(self, x: AlgVec) -> AlgVec:
        """Projection killing the positive-root components."""
        return AlgVec(np.where(self.grading <= 0, x.coeffs, 0.0))

    def project_u(self, x: AlgVec) -> AlgVec:
        return AlgVec(np.where(self.grading > 0, x.coeffs, 0.0))

    def project_cartan(self, x: AlgVec) -> AlgVec:
        return self.graded_component(x, 0)

    def cartan_coeffs(self, x: AlgVec) -> np.ndarray:
        return x.coeffs[: self.rank].copy()

    def root_coeff(self, x: AlgVec, root_id: int) -> complex:
        return complex(x.coeffs[self.rank + root_id])

    def basis_indices_of_height(self, n: int) -> np.ndarray:
        return np.nonzero(self.grading == n)[0]

    def root_value(self, root_id: int, x: AlgVec) -> complex:
        """beta(x) for x in the Cartan, read off from [x, e_beta] = beta(x) e_beta."""
        br = self.bracket(x, self.e(root_id))
        return complex(br.coeffs[self.e_index(root_id)])

    # -- regularity --------------------------------------------------------

    def is_regular(self, x: AlgVec, tol: float = 1e-8) -> bool:
        """True iff the numerical nullity of ad_x equals the rank."""
        sv = np.linalg.svd(self.ad_matrix(x), compute_uv=False)
        if sv[0] == 0.0:
            return self.dim == self.rank
        nullity = int(np.sum(sv < tol * sv[0]))
        return nullity == self.rank

    def centralizer_basis(self, x: AlgVec, tol: float = 1e-8) -> list:
        """Orthonormal numerical basis of ker(ad_x)."""
        ad = self.ad_matrix(x)
        _, sv, vh = np.linalg.svd(ad)
        if sv[0] == 0.0:
            return [self.basis_vec(i) for i in range(self.dim)]
        kernel_rows = vh[sv < tol * sv[0], :]
        # rows of vh with tiny singular values, conjugated back to vectors
        return [AlgVec(row.conj()) for row in kernel_rows]

    # -- sampling -----------------------------------------------------------

    def random_vec(self, rng: np.random.Generator, scale: float = 1.0) -> AlgVec:
        re = rng.standard_normal(self.dim)
        im = rng.standard_normal(self.dim)
        return AlgVec(scale * (re + 1j * im) / np.sqrt(2.0))


def build_lie_algebra(rs: RootSystem) -> LieAlgebra:
    return LieAlgebra(rs)
