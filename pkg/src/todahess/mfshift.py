"""Shift-of-argument families and the Lie-Poisson bracket.

For a shift direction a, the polynomials F[i][j] are the lambda-expansion
coefficients

    f_i(x + lambda a) = f_i(a) lambda^{d_i} + sum_{j < d_i} F[i][j](x) lambda^j.

Coefficients are recovered by evaluating on scaled roots of unity and
inverting the discrete Fourier relation, which is exact for polynomials up
to conditioning.  The flat enumeration into ell = dim B members is fixed
as: the r base invariants first (these are the j = 0 coefficients), then
the shifted coefficients ordered by (i, ascending j >= 1).  Downstream
index bookkeeping (the 0/1 coefficients relating the Toda Hamiltonians to
this family) relies on this order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .invariants import InvariantFamily, gradient_killing
from .liealg import AlgVec, LieAlgebra


def standard_shift(L: LieAlgebra) -> AlgVec:
    """The canonical regular-nilpotent shift direction, minus the sum of the
    simple positive root vectors."""
    v = L.zero()
    for i in range(L.rank):
        v = v - L.e(i)
    return v


def _nodes(n_nodes: int, x_norm: float, a_norm: float) -> np.ndarray:
    """Interpolation nodes: roots of unity scaled to balance |x| against |a|."""
    s = (1.0 + x_norm) / (1.0 + a_norm)
    return s * np.exp(2j * np.pi * np.arange(n_nodes) / n_nodes)


def _coeffs_from_samples(samples: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Polynomial coefficients from values on scaled roots of unity.

    Accepts a vector of samples or a (n_nodes, m) stack of sample columns.
    """
    n = len(nodes)
    k = np.arange(n)
    omega_pow = np.exp(-2j * np.pi * np.outer(k, k) / n)
    s = nodes[0]  # nodes = s * omega^k, omega^0 = 1
    scale = s ** k if samples.ndim == 1 else (s ** k)[:, None]
    return (omega_pow @ samples) / n / scale


def mf_expand(fam: InvariantFamily, a: AlgVec, i: int, x: AlgVec) -> np.ndarray:
    """Expansion coefficients (F[i][0](x), ..., F[i][d_i - 1](x), f_i(a)).

    Index i is 0-based; d_i + 1 interpolation nodes are used, and the
    reconstruction is exact for the degree-d_i polynomial lambda -> f_i(x + lambda a).
    """
    d = fam.degrees[i]
    L = fam.algebra
    nodes = _nodes(d + 1, L.norm(x), L.norm(a))
    samples = np.array([fam.eval(i, x + lam * a) for lam in nodes])
    coeffs = _coeffs_from_samples(samples, nodes)
    return np.concatenate([coeffs[:d], [fam.eval(i, a)]])


@dataclass(frozen=True)
class MFMember:
    """One member of the flat family: coefficient j of the expansion of f_i."""

    inv_index: int   # 0-based i
    shift_order: int  # j
    degree: int       # d_i - j


@dataclass
class ShiftFamily:
    """The flat Poisson-commuting family of ell members for one shift direction."""

    base: InvariantFamily
    a: AlgVec
    members: list
    leading: np.ndarray  # f_i(a)
    _node_count: int = field(init=False)

    def __post_init__(self):
        self._node_count = max(self.base.degrees) + 1

    @property
    def algebra(self) -> LieAlgebra:
        return self.base.algebra

    @property
    def ell(self) -> int:
        return len(self.members)

    def values_at(self, x: AlgVec) -> np.ndarray:
        """All ell member values at x from one shared set of nodes.

        One node set of size max(d_i) + 1 serves every i: interpolation on
        more nodes than the degree reproduces the same coefficients.
        """
        L = self.algebra
        nodes = _nodes(self._node_count, L.norm(x), L.norm(self.a))
        samples = np.array([self.base.values_at(x + lam * self.a) for lam in nodes])
        coeffs = _coeffs_from_samples(samples, nodes)  # (n_nodes, r)
        return np.array([coeffs[m.shift_order, m.inv_index] for m in self.members])

    def value(self, k: int, x: AlgVec) -> complex:
        return complex(self.values_at(x)[k])

    def gradients_at(self, x: AlgVec, step: float = 1e-5) -> np.ndarray:
        """Killing gradients of all members at x, as an (ell, dim) matrix."""
        L = self.algebra
        fd = np.empty((self.ell, L.dim), dtype=complex)
        for i in range(L.dim):
            b = L.basis_vec(i)
            fd[:, i] = (self.values_at(x + step * b) - self.values_at(x - step * b)) / (2 * step)
        return np.linalg.solve(L.killing_matrix, fd.T).T

    def pair_brackets(self, x: AlgVec, step: float = 1e-5):
        """All pairwise Lie-Poisson brackets at x plus normalized residuals."""
        L = self.algebra
        grads = self.gradients_at(x, step)
        C = L.bracket_tensor
        half = np.tensordot(grads, C, axes=(1, 0))          # (ell, dim, dim)
        pairwise = np.einsum("mq,iqk->imk", grads, half)    # [i,m,:] = [grad_i, grad_m]
        kx = L.killing_matrix @ x.coeffs
        vals = pairwise @ kx                                # <x, [grad_i, grad_m]>
        norms = np.linalg.norm(grads, axis=1)
        # the eps floor keeps members with (numerically) zero differentials,
        # e.g. the vanishing coefficients of a zero shift, trivially commuting
        scale = np.outer(norms, norms) * np.linalg.norm(x.coeffs) + 1e-12
        return vals, np.abs(vals) / scale


def mf_family(fam: InvariantFamily, a: AlgVec) -> ShiftFamily:
    """Enumerate the expansion coefficients into the documented flat order."""
    members = [MFMember(i, 0, fam.degrees[i]) for i in range(fam.r)]
    for i in range(fam.r):
        for j in range(1, fam.degrees[i]):
            members.append(MFMember(i, j, fam.degrees[i] - j))
    leading = fam.values_at(a)
    sf = ShiftFamily(fam, a, members, leading)
    if sf.ell != fam.ell:
        raise DomainError(f"family has {sf.ell} members, expected ell = {fam.ell}")
    return sf


def toda_coefficient_matrix(sf: ShiftFamily) -> np.ndarray:
    """0/1 matrix c with sum_j f_i^a,j = sum_k c[i, k] * member_k."""
    c = np.zeros((sf.base.r, sf.ell))
    for k, m in enumerate(sf.members):
        c[m.inv_index, k] = 1.0
    return c


def lie_poisson_bracket(L: LieAlgebra, F, G, x: AlgVec, step: float = 1e-5) -> complex:
    """{F, G}(x) = <x, [grad F(x), grad G(x)]> under the Killing identification."""
    gf = gradient_killing(L, F, x, step)
    gg = gradient_killing(L, G, x, step)
    return L.killing(x, L.bracket(gf, gg))


@dataclass
class CommutationReport:
    max_residual: float
    tol: float
    n_samples: int
    worst_pair: tuple
    passed: bool


def check_commutation(sf: ShiftFamily, n_samples: int, tol: float,
                      seed: int) -> CommutationReport:
    """Max normalized pairwise bracket over Gaussian samples."""
    L = sf.algebra
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_pair = (0, 0)
    for _ in range(n_samples):
        x = L.random_vec(rng)
        _, resid = sf.pair_brackets(x)
        k = np.unravel_index(np.argmax(resid), resid.shape)
        if resid[k] > worst:
            worst = float(resid[k])
            worst_pair = (int(k[0]), int(k[1]))
    return CommutationReport(worst, tol, n_samples, worst_pair, worst <= tol)


def independence_rank(sf: ShiftFamily, x: AlgVec, tol: float = 1e-8) -> int:
    """Numerical rank of the (ell x dim) gradient matrix at x."""
    sv = np.linalg.svd(sf.gradients_at(x), compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def decomposition_identity_check(sf: ShiftFamily, x: AlgVec, tol: float = 1e-9) -> bool:
    """f_i(x + a) = sum_j F[i][j](x) for the regular-nilpotent shift.

    Valid because every invariant vanishes on the nilpotent shift direction
    (the leading coefficients are zero), which is asserted.
    """
    if np.linalg.norm(sf.leading) > 1e-9:
        raise DomainError("decomposition identity needs a nilpotent shift direction")
    lhs = sf.base.values_at(x + sf.a)
    vals = sf.values_at(x)
    c = toda_coefficient_matrix(sf)
    rhs = c @ vals
    return bool(np.all(np.abs(lhs - rhs) <= tol * (1.0 + np.abs(lhs))))
