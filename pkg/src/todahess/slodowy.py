"""Principal triple, regular slice, and the embedding of the Toda lattice.

The principal triple (xi, h, eta) is fixed by: h is the Cartan element
with alpha(h) = -2 on every simple root, xi is the sum of the normalized
simple-negative root vectors, and eta = -sum c_a e_a where h = sum c_a h_a.
The regular slice is xi + ker(ad_eta); its kernel basis is chosen graded
(each basis vector inside a single height space), which is what makes the
height-by-height inversion of the dressing map

    (y, m)  ->  exp(ad_y)(xi + m)  in  xi + b

terminate exactly after h_max + 1 levels: at height n the fresh unknowns
are y at height n+1 and the kernel component at height n, and

    g_(n) = [xi, g_(n+1)]  (+)  ker(ad_eta)_(n)

splits the equation (ad_xi is injective on the positive part).

From the inversion come the three maps into the group: theta (torus values
from the simple-negative coefficients), gamma (the unipotent dressing of
xi + t), and nu = theta^{-1} gamma^{-1}, giving the slice embedding

    kappa(v) = (nu(v), Ad_{nu(v)^{-1}}(v)).

The symplectic form on the group-times-algebra model is evaluated in left
trivialization,

    Omega((y1, z1), (y2, z2)) = <y1, z2> - <y2, z1> + <x, [y1, y2]>,

and the pullback comparison against the orbit form is done with central
finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, NumericalError
from .group import GrpElt, TorusChar, adjoint, exp_nilpotent, log_near_identity, torus_lift
from .liealg import AlgVec, LieAlgebra
from .mfshift import ShiftFamily, toda_coefficient_matrix
from .toda import TodaPoint, frame_vectors, omega_gram, sigma_all, to_vec


@dataclass
class PrincipalTriple:
    xi: AlgVec
    h: AlgVec
    eta: AlgVec
    c: np.ndarray  # h = sum c_a h_a

    def residual(self, L: LieAlgebra) -> float:
        r1 = L.bracket(self.xi, self.eta) - self.h
        r2 = L.bracket(self.h, self.xi) - 2.0 * self.xi
        r3 = L.bracket(self.h, self.eta) + 2.0 * self.eta
        return max(L.norm(r1), L.norm(r2), L.norm(r3))


@dataclass
class SregPoint:
    """Slice point by its coordinates in the fixed kernel basis."""

    m: np.ndarray


def principal_triple(L: LieAlgebra) -> PrincipalTriple:
    """Solve alpha(h) = -2 over the Cartan basis and build (xi, h, eta)."""
    r = L.rank
    pairing = np.empty((r, r), dtype=complex)
    for i in range(r):
        for k in range(r):
            pairing[i, k] = L.root_value(i, L.h(k))
    c = np.linalg.solve(pairing, -2.0 * np.ones(r))
    h = L.zero()
    h.coeffs[:r] = c
    xi = L.zero()
    eta = L.zero()
    for i in range(r):
        xi = xi + L.e(L.rs.negative(i))
        eta = eta - c[i] * L.e(i)
    triple = PrincipalTriple(xi, h, eta, c)
    if triple.residual(L) > 1e-10:
        raise NumericalError("principal triple relations failed")
    if np.any(np.abs(c) < 1e-12):
        raise NumericalError("principal triple has a vanishing Cartan coefficient")
    return triple


def sreg_basis(L: LieAlgebra, triple: PrincipalTriple, tol: float = 1e-10) -> list:
    """Graded orthonormal basis of ker(ad_eta), height by height.

    eta is graded of height one, so ad_eta maps each height space to the
    next and the kernel splits along the grading; every kernel vector lies
    in the positive part.
    """
    basis = []
    ad = L.ad_matrix(triple.eta)
    for n in range(1, L.rs.highest_height + 1):
        rows = L.basis_indices_of_height(n + 1)
        cols = L.basis_indices_of_height(n)
        if len(cols) == 0:
            continue
        block = ad[np.ix_(rows, cols)] if len(rows) else np.zeros((1, len(cols)))
        _, sv, vh = np.linalg.svd(block)
        smax = sv[0] if len(sv) and sv[0] > 0 else 1.0
        null_rows = vh[np.concatenate([sv, np.zeros(len(cols) - len(sv))]) < tol * smax, :]
        for row in null_rows:
            v = L.zero()
            v.coeffs[cols] = row.conj()
            basis.append(v)
    if len(basis) != L.rank:
        raise NumericalError(f"kernel basis has {len(basis)} vectors, expected {L.rank}")
    return basis


class RegularSlice:
    """xi + ker(ad_eta) with its graded kernel basis and level solvers."""

    def __init__(self, L: LieAlgebra):
        self.algebra = L
        self.triple = principal_triple(L)
        self.basis = sreg_basis(L, self.triple)
        self.heights = [int(L.grading[np.argmax(np.abs(b.coeffs))]) for b in self.basis]
        self.basis_matrix = np.array([b.coeffs for b in self.basis])  # (r, dim)

    @property
    def xi(self) -> AlgVec:
        return self.triple.xi

    def embed(self, s: SregPoint) -> AlgVec:
        return AlgVec(self.xi.coeffs + self.basis_matrix.T @ s.m)

    def project(self, x: AlgVec):
        """Best kernel-basis coordinates of x - xi and the relative residual."""
        diff = x.coeffs - self.xi.coeffs
        m, *_ = np.linalg.lstsq(self.basis_matrix.T, diff, rcond=None)
        resid = np.linalg.norm(self.basis_matrix.T @ m - diff)
        return SregPoint(m), float(resid / (1.0 + np.linalg.norm(diff)))

    def coords(self, x: AlgVec, tol: float = 1e-9) -> SregPoint:
        """Kernel-basis coordinates of x - xi, with a membership check."""
        s, resid = self.project(x)
        if resid > tol:
            raise DomainError(f"vector is not on the slice (residual {resid:.2e})")
        return s

    def contains(self, x: AlgVec, tol: float = 1e-9) -> bool:
        try:
            self.coords(x, tol)
            return True
        except DomainError:
            return False

    def random_point(self, rng: np.random.Generator, scale: float = 1.0) -> SregPoint:
        r = self.algebra.rank
        return SregPoint(scale * (rng.standard_normal(r) + 1j * rng.standard_normal(r))
                         / np.sqrt(2.0))

    @cached_property
    def _level_solvers(self) -> dict:
        """Per-height data for the graded inversion: basis columns and a solver."""
        L = self.algebra
        out = {}
        for n in range(0, L.rs.highest_height + 1):
            rows = L.basis_indices_of_height(n)
            y_cols = L.basis_indices_of_height(n + 1)
            ker_cols = [k for k, hgt in enumerate(self.heights) if hgt == n]
            cols = []
            for j in y_cols:
                cols.append(L.bracket(L.basis_vec(j), self.xi).coeffs[rows])
            for k in ker_cols:
                cols.append(self.basis[k].coeffs[rows])
            mat = np.array(cols).T if cols else np.zeros((len(rows), 0))
            if mat.shape[0] != mat.shape[1]:
                raise NumericalError(f"graded splitting is not square at height {n}")
            out[n] = (rows, y_cols, ker_cols, np.linalg.inv(mat))
        return out


def graded_kostant_inverse(sl: RegularSlice, w: AlgVec, tol: float = 1e-9):
    """Invert the dressing map on xi + b: find (y, s) with Ad_{exp y}(xi + m) = w.

    Proceeds height by height; each level is an exact linear solve on the
    graded splitting, so the loop finishes in h_max + 1 steps.
    """
    L = sl.algebra
    if L.norm(L.project_u(w - sl.xi) + L.project_cartan(w - sl.xi) - (w - sl.xi)) \
            > 1e-10 * (1.0 + L.norm(w)):
        raise DomainError("input must lie in xi + b")
    y = L.zero()
    m = np.zeros(L.rank, dtype=complex)
    for n in range(0, L.rs.highest_height + 1):
        current = adjoint(L, exp_nilpotent(L, y), sl.embed(SregPoint(m)))
        resid = w - current
        rows, y_cols, ker_cols, solver = sl._level_solvers[n]
        if len(rows) == 0:
            continue
        sol = solver @ resid.coeffs[rows]
        y.coeffs[y_cols] += sol[: len(y_cols)]
        for idx, k in enumerate(ker_cols):
            m[k] += sol[len(y_cols) + idx]
    final = adjoint(L, exp_nilpotent(L, y), sl.embed(SregPoint(m)))
    if L.norm(final - w) > tol * (1.0 + L.norm(w)):
        raise NumericalError("graded inversion failed to converge")
    return y, SregPoint(m)


def kostant_inverse_newton(sl: RegularSlice, w: AlgVec, tol: float = 1e-10,
                           max_iter: int = 50):
    """Newton fallback for the dressing inversion (diagnostics only).

    Starts from (y, m) = (0, projection of w - xi) and iterates a full
    finite-difference Jacobian solve in the (y, m) unknowns.
    """
    L = sl.algebra
    u_idx = np.nonzero(L.grading > 0)[0]
    n_y = len(u_idx)

    def unpack(vec):
        y = L.zero()
        y.coeffs[u_idx] = vec[:n_y]
        return y, SregPoint(vec[n_y:])

    def residual(vec):
        y, s = unpack(vec)
        return (adjoint(L, exp_nilpotent(L, y), sl.embed(s)) - w).coeffs

    state = np.zeros(n_y + L.rank, dtype=complex)
    state[n_y:] = np.linalg.lstsq(sl.basis_matrix.T, (w - sl.xi).coeffs, rcond=None)[0]
    step = 1e-7
    for _ in range(max_iter):
        res = residual(state)
        if np.linalg.norm(res) <= tol * (1.0 + L.norm(w)):
            return unpack(state)
        jac = np.empty((L.dim, len(state)), dtype=complex)
        for j in range(len(state)):
            probe = np.zeros_like(state)
            probe[j] = step
            jac[:, j] = (residual(state + probe) - residual(state - probe)) / (2 * step)
        delta, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        state = state + delta
    raise NumericalError("Newton inversion did not converge")


# -- the three morphisms and the embedding -----------------------------------


def theta(L: LieAlgebra, v: TodaPoint) -> TorusChar:
    """Torus character with alpha-value equal to the e_{-alpha} coefficient."""
    if np.any(v.c == 0):
        raise DomainError("theta needs all simple-negative coefficients nonzero")
    return TorusChar(v.c.copy())


def gamma(sl: RegularSlice, z: AlgVec) -> AlgVec:
    """Log of the unipotent element carrying xi + z onto the slice.

    Returned y satisfies Ad_{exp y}(xi + z) in the slice; its height-one
    part is minus the simple-positive transplant of z.
    """
    L = sl.algebra
    if L.norm(z - L.project_cartan(z)) > 1e-10 * (1.0 + L.norm(z)):
        raise DomainError("gamma needs a Cartan argument")
    y, _ = graded_kostant_inverse(sl, sl.xi + z)
    return -y


def nu(sl: RegularSlice, v: TodaPoint) -> GrpElt:
    """Upper-triangular lift of theta(v)^{-1} gamma(xi + v_0)^{-1}."""
    L = sl.algebra
    t = torus_lift(L, theta(L, v))
    z = L.zero()
    z.coeffs[: L.rank] = v.a
    g = exp_nilpotent(L, gamma(sl, z))
    return t.inv @ g.inv


def kappa(sl: RegularSlice, v: TodaPoint, tol: float = 1e-9):
    """The slice embedding v -> (nu(v), slice coordinates of Ad_{nu^{-1}} v)."""
    L = sl.algebra
    g = nu(sl, v)
    x = adjoint(L, g.inv, to_vec(L, v))
    return g, sl.coords(x, tol)


def omega_big(L: LieAlgebra, x: AlgVec, t1, t2) -> complex:
    """Left-trivialized symplectic pairing at fiber point x.

    t1 and t2 are (group direction, fiber direction) pairs of algebra
    elements.
    """
    y1, z1 = t1
    y2, z2 = t2
    return (L.killing(y1, z2) - L.killing(y2, z1)
            + L.killing(x, L.bracket(y1, y2)))


def tau(sl: RegularSlice, sf: ShiftFamily, k: int, g: GrpElt, s: SregPoint) -> complex:
    """tau_k = member k of the shifted family evaluated on Ad_g(xi + m)."""
    L = sl.algebra
    return sf.value(k, adjoint(L, g, sl.embed(s)))


def tau_all(sl: RegularSlice, sf: ShiftFamily, g: GrpElt, s: SregPoint) -> np.ndarray:
    L = sl.algebra
    return sf.values_at(adjoint(L, g, sl.embed(s)))


@dataclass
class EmbeddingReport:
    sreg_residual: float
    inclusion_residual: float
    combination_residual: float
    passed: bool


def embedding_check(sl: RegularSlice, sf: ShiftFamily, v: TodaPoint,
                    tol: float = 1e-8) -> EmbeddingReport:
    """The two defining identities of the embedding at one point.

    First, composing with the moment map recovers v.  Second, each Toda
    Hamiltonian is the 0/1 combination of the pulled-back family members
    given by the documented enumeration.
    """
    L = sl.algebra
    g = nu(sl, v)
    x = adjoint(L, g.inv, to_vec(L, v))
    s, sreg_res = sl.project(x)
    v_vec = to_vec(L, v)
    back = adjoint(L, g, sl.embed(s))
    inclusion = L.norm(back - v_vec) / (1.0 + L.norm(v_vec))

    taus = tau_all(sl, sf, g, s)
    cmat = toda_coefficient_matrix(sf)
    sig = sigma_all(sf.base, v)
    comb = float(np.max(np.abs(sig - cmat @ taus) / (1.0 + np.abs(sig))))
    passed = sreg_res <= 1e-9 and inclusion <= 1e-9 and comb <= tol
    return EmbeddingReport(sreg_res, inclusion, comb, passed)


@dataclass
class PullbackReport:
    max_difference: float
    omega_scale: float
    passed: bool


def kappa_differential(sl: RegularSlice, v: TodaPoint, fd_step: float = 1e-5):
    """Central-difference differential of kappa along the 2r frame directions.

    Group parts are left-trivialized logs of nu(v)^{-1} nu(v +/- eps u);
    slice parts are difference quotients of the embedded slice points.
    """
    L = sl.algebra
    base = nu(sl, v)
    base_inv = base.inv
    frame = frame_vectors(L)
    v_vec = to_vec(L, v)
    group_dirs, slice_dirs = [], []
    for u in frame:
        logs, pts = [], []
        for sign in (+1.0, -1.0):
            shifted = v_vec + (sign * fd_step) * u
            vs = TodaPoint(L.cartan_coeffs(shifted),
                           np.array([L.root_coeff(shifted, L.rs.negative(i))
                                     for i in range(L.rank)]))
            g = nu(sl, vs)
            logs.append(log_near_identity(L, GrpElt(base_inv.mat @ g.mat)))
            pts.append(adjoint(L, g.inv, shifted))
        group_dirs.append((logs[0] - logs[1]) * (1.0 / (2 * fd_step)))
        slice_dirs.append((pts[0] - pts[1]) * (1.0 / (2 * fd_step)))
    return group_dirs, slice_dirs


def kappa_pullback_check(sl: RegularSlice, v: TodaPoint, fd_step: float = 1e-5,
                         tol: float = 1e-4) -> PullbackReport:
    """Gram-matrix comparison of the pulled-back form with the orbit form."""
    L = sl.algebra
    group_dirs, slice_dirs = kappa_differential(sl, v, fd_step)
    _, s = kappa(sl, v)
    x = sl.embed(s)
    k = 2 * L.rank
    pulled = np.empty((k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            pulled[i, j] = omega_big(L, x, (group_dirs[i], slice_dirs[i]),
                                     (group_dirs[j], slice_dirs[j]))
    direct = omega_gram(L, v)
    scale = float(np.abs(direct).max())
    diff = float(np.abs(pulled - direct).max())
    return PullbackReport(diff, scale, diff <= tol * (1.0 + scale))


def b_stabilizer_check(sl: RegularSlice, s: SregPoint, tol: float = 1e-8):
    """Infinitesimal triviality of the Borel stabilizer on the slice.

    Returns (normalized smallest singular value of ad_x restricted to b,
    nullity of the full ad_x); the first must stay above tol, the second
    must equal the rank.
    """
    L = sl.algebra
    x = sl.embed(s)
    ad = L.ad_matrix(x)
    borel_idx = list(range(L.rank)) + [L.e_index(kk) for kk in range(L.rs.n_positive)]
    block = ad[:, borel_idx]
    sv = np.linalg.svd(block, compute_uv=False)
    normalized_min = float(sv[-1] / sv[0])
    sv_full = np.linalg.svd(ad, compute_uv=False)
    nullity = int(np.sum(sv_full < 1e-8 * sv_full[0]))
    return normalized_min, nullity, normalized_min > tol and nullity == L.rank
