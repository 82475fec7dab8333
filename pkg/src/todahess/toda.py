"""The Toda phase space and its Hamiltonian system.

The module V = t + sum of the simple negative root spaces sits inside the
lower Borel and carries the dualized coadjoint action of B,

    b * x = pi_{b_-}(Ad_b(x)).

Orbits are indexed by pairs (S, z) with S a subset of the simple roots and
z a Cartan vector supported off S; the open dense orbit (S = all, z = 0)
is the Toda phase space.  Points of it are written in the (a, c) frame

    v = sum_k a_k h_k + sum_k c_k e_{-alpha_k},       all c_k nonzero,

and every coordinate-level quantity below (tangent vectors, the symplectic
Gram matrix, trajectories) refers to this frame.  The Hamiltonians are the
invariants shifted by the regular nilpotent direction, sigma_i(v) =
f_i(v + shift).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError
from .group import TorusChar, adjoint, compose_borel
from .invariants import InvariantFamily
from .liealg import AlgVec, LieAlgebra
from .mfshift import standard_shift

SUPPORT_TOL = 1e-9


@dataclass
class OrbitIndex:
    """Index (S, z) of a B-orbit: support set and off-support Cartan part."""

    S: frozenset
    z: np.ndarray

    def matches(self, other: "OrbitIndex", tol: float = 1e-8) -> bool:
        if self.S != other.S:
            return False
        return bool(np.linalg.norm(self.z - other.z) <= tol * (1.0 + np.linalg.norm(self.z)))

    def sorted_support(self):
        return sorted(self.S)


@dataclass
class TodaPoint:
    """Point of the open orbit in the (a, c) frame."""

    a: np.ndarray
    c: np.ndarray

    def copy(self) -> "TodaPoint":
        return TodaPoint(self.a.copy(), self.c.copy())


def vtoda_mask(L: LieAlgebra) -> np.ndarray:
    mask = np.zeros(L.dim, dtype=bool)
    mask[: L.rank] = True
    for i in range(L.rank):
        mask[L.e_index(L.rs.negative(i))] = True
    return mask


def in_vtoda(L: LieAlgebra, x: AlgVec, tol: float = SUPPORT_TOL) -> bool:
    off = np.where(vtoda_mask(L), 0.0, x.coeffs)
    return float(np.linalg.norm(off)) <= tol * (1.0 + float(np.linalg.norm(x.coeffs)))


def to_vec(L: LieAlgebra, v: TodaPoint) -> AlgVec:
    x = L.zero()
    x.coeffs[: L.rank] = v.a
    for i in range(L.rank):
        x.coeffs[L.e_index(L.rs.negative(i))] = v.c[i]
    return x


def from_vec(L: LieAlgebra, x: AlgVec, tol: float = SUPPORT_TOL) -> TodaPoint:
    if not in_vtoda(L, x, tol):
        raise DomainError("vector is not in the Toda module")
    a = L.cartan_coeffs(x)
    c = np.array([L.root_coeff(x, L.rs.negative(i)) for i in range(L.rank)])
    if np.any(np.abs(c) <= tol * (1.0 + np.linalg.norm(x.coeffs))):
        raise DomainError("point has a vanishing simple-negative coefficient")
    return TodaPoint(a, c)


def vtoda_coords(L: LieAlgebra, x: AlgVec) -> np.ndarray:
    """The 2r frame coordinates (a_1..a_r, c_1..c_r) of a module element."""
    a = L.cartan_coeffs(x)
    c = np.array([L.root_coeff(x, L.rs.negative(i)) for i in range(L.rank)])
    return np.concatenate([a, c])


def frame_vectors(L: LieAlgebra) -> list:
    """The 2r coordinate directions h_1..h_r, e_{-alpha_1}..e_{-alpha_r}."""
    out = [L.h(i) for i in range(L.rank)]
    out += [L.e(L.rs.negative(i)) for i in range(L.rank)]
    return out


# -- the B-action ----------------------------------------------------------


def b_act(L: LieAlgebra, ch: TorusChar, y: AlgVec, x: AlgVec,
          tol: float = SUPPORT_TOL) -> AlgVec:
    """b * x = pi_{b_-}(Ad_b(x)) for b = t exp(y), via the matrix realization."""
    if not in_vtoda(L, x, tol):
        raise DomainError("b_act needs an element of the Toda module")
    b = compose_borel(L, ch, y)
    return L.project_bminus(adjoint(L, b, x))


def b_act_closed(L: LieAlgebra, ch: TorusChar, y: AlgVec, x: AlgVec) -> AlgVec:
    """Closed form of the action: the Cartan part gains y_k c_k h_k and each
    c_k is scaled by the inverse simple-root value of the torus part."""
    out = L.zero()
    y1 = np.array([L.root_coeff(y, i) for i in range(L.rank)])
    c = np.array([L.root_coeff(x, L.rs.negative(i)) for i in range(L.rank)])
    out.coeffs[: L.rank] = L.cartan_coeffs(x) + y1 * c
    for i in range(L.rank):
        out.coeffs[L.e_index(L.rs.negative(i))] = c[i] / ch.values[i]
    return out


def orbit_index(L: LieAlgebra, x: AlgVec, tol: float = SUPPORT_TOL) -> OrbitIndex:
    """Support set of the simple-negative part plus the leftover Cartan data."""
    if not in_vtoda(L, x, tol):
        raise DomainError("orbit_index needs an element of the Toda module")
    scale = float(np.linalg.norm(x.coeffs))
    c = np.array([L.root_coeff(x, L.rs.negative(i)) for i in range(L.rank)])
    support = frozenset(i for i in range(L.rank) if abs(c[i]) > tol * max(scale, 1.0))
    z = L.cartan_coeffs(x)
    for i in support:
        z[i] = 0.0
    return OrbitIndex(support, z)


def canonical_point(L: LieAlgebra, idx: OrbitIndex) -> AlgVec:
    """z plus the sum of e_{-alpha} over the support."""
    x = L.zero()
    x.coeffs[: L.rank] = idx.z
    for i in idx.S:
        x.coeffs[L.e_index(L.rs.negative(i))] = 1.0
    return x


def closure_leq(p: OrbitIndex, q: OrbitIndex, tol: float = 1e-9) -> bool:
    """Whether the orbit of p lies in the closure of the orbit of q:
    S_p contained in S_q and z_p - z_q supported on S_q minus S_p."""
    if not p.S.issubset(q.S):
        return False
    diff = p.z - q.z
    allowed = q.S - p.S
    scale = 1.0 + float(np.linalg.norm(diff))
    return all(abs(diff[i]) <= tol * scale for i in range(len(diff)) if i not in allowed)


def surjectivity_witness(L: LieAlgebra, x: AlgVec, tol: float = SUPPORT_TOL):
    """The explicit b = t exp(y) carrying the canonical point of x's orbit to x."""
    idx = orbit_index(L, x, tol)
    values = np.ones(L.rank, dtype=complex)
    c = np.array([L.root_coeff(x, L.rs.negative(i)) for i in range(L.rank)])
    for i in idx.S:
        values[i] = 1.0 / c[i]
    y = L.zero()
    y.coeffs[L.rank: 2 * L.rank] = L.cartan_coeffs(x)  # sum of a_k e_{alpha_k}
    return idx, TorusChar(values), y


def action_tangent_matrix(L: LieAlgebra, x: AlgVec) -> np.ndarray:
    """Differential of the action at x over a basis of b, in frame coordinates."""
    cols = []
    borel_idx = list(range(L.rank)) + [L.e_index(k) for k in range(L.rs.n_positive)]
    for j in borel_idx:
        w = L.basis_vec(j)
        cols.append(vtoda_coords(L, L.project_bminus(L.bracket(w, x))))
    return np.array(cols).T  # (2r, dim b)


def action_rank(L: LieAlgebra, x: AlgVec, tol: float = 1e-10) -> int:
    sv = np.linalg.svd(action_tangent_matrix(L, x), compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


@dataclass
class OrbitSuiteReport:
    bad_roundtrips: int
    bad_witnesses: int
    bad_ranks: int
    samples: int

    @property
    def passed(self) -> bool:
        return self.bad_roundtrips == 0 and self.bad_witnesses == 0 \
            and self.bad_ranks == 0


def bijectivity_suite(L: LieAlgebra, seed: int, n: int,
                      tol: float = SUPPORT_TOL) -> OrbitSuiteReport:
    """Orbit indexing against the action, in both directions.

    Random canonical points moved by random Borel data must keep their
    index; random module elements must be reached from their canonical
    point by the explicitly constructed witness; the action differential
    at a canonical point has rank twice the support size.
    """
    rng = np.random.default_rng(seed)
    mask = vtoda_mask(L)
    bad_roundtrips = bad_witnesses = bad_ranks = 0
    for _ in range(n):
        idx = random_orbit_index(L, rng)
        ch = TorusChar(np.exp(0.4 * (rng.standard_normal(L.rank)
                                     + 1j * rng.standard_normal(L.rank))))
        y = L.zero()
        npos = L.rs.n_positive
        y.coeffs[L.rank: L.rank + npos] = (
            rng.standard_normal(npos) + 1j * rng.standard_normal(npos))
        moved = b_act(L, ch, y, canonical_point(L, idx), tol)
        if not orbit_index(L, moved, tol).matches(idx):
            bad_roundtrips += 1

        x = L.zero()
        x.coeffs[mask] = (rng.standard_normal(int(mask.sum()))
                          + 1j * rng.standard_normal(int(mask.sum())))
        widx, wch, wy = surjectivity_witness(L, x, tol)
        reached = b_act(L, wch, wy, canonical_point(L, widx), tol)
        if float(np.linalg.norm((reached - x).coeffs)) \
                > 1e-9 * (1.0 + float(np.linalg.norm(x.coeffs))):
            bad_witnesses += 1

        if action_rank(L, canonical_point(L, idx)) != 2 * len(idx.S):
            bad_ranks += 1
    return OrbitSuiteReport(bad_roundtrips, bad_witnesses, bad_ranks, n)


# -- symplectic structure ---------------------------------------------------


def _lift_matrix(L: LieAlgebra, v_vec: AlgVec) -> np.ndarray:
    """Matrix of b -> V, w -> pi_{b_-}([v, w]), in frame coordinates."""
    borel_idx = list(range(L.rank)) + [L.e_index(k) for k in range(L.rs.n_positive)]
    cols = []
    for j in borel_idx:
        w = L.basis_vec(j)
        cols.append(vtoda_coords(L, L.project_bminus(L.bracket(v_vec, w))))
    return np.array(cols).T, borel_idx


def _solve_lift(L: LieAlgebra, v_vec: AlgVec, targets: np.ndarray, tol: float = 1e-8):
    """Minimum-norm w in b with pi_{b_-}([v, w]) matching each target column."""
    A, borel_idx = _lift_matrix(L, v_vec)
    sol, *_ = np.linalg.lstsq(A, targets, rcond=None)
    resid = np.linalg.norm(A @ sol - targets, axis=0)
    scale = np.maximum(np.linalg.norm(targets, axis=0), 1.0)
    if np.any(resid > tol * scale):
        raise DomainError("tangent vector is not in the image of the action differential")
    lifts = []
    for col in sol.T:
        w = L.zero()
        w.coeffs[borel_idx] = col
        lifts.append(w)
    return lifts


def omega_toda(L: LieAlgebra, v: TodaPoint, u1: AlgVec, u2: AlgVec,
               tol: float = 1e-8) -> complex:
    """Orbit symplectic form: lift the tangents through the action and pair.

    With pi_{b_-}([v, w_i]) = u_i the value is <v, [w_1, w_2]>; it does not
    depend on the choice of lifts.
    """
    v_vec = to_vec(L, v)
    targets = np.stack([vtoda_coords(L, u1), vtoda_coords(L, u2)], axis=1)
    w1, w2 = _solve_lift(L, v_vec, targets, tol)
    return L.killing(v_vec, L.bracket(w1, w2))


def omega_gram(L: LieAlgebra, v: TodaPoint, tol: float = 1e-8) -> np.ndarray:
    """Gram matrix of the symplectic form on the 2r frame directions."""
    v_vec = to_vec(L, v)
    targets = np.eye(2 * L.rank, dtype=complex)
    lifts = _solve_lift(L, v_vec, targets, tol)
    mats = [L.to_matrix(w) for w in lifts]
    vm = L.to_matrix(v_vec)
    gram = np.empty((2 * L.rank, 2 * L.rank), dtype=complex)
    for i in range(2 * L.rank):
        for j in range(2 * L.rank):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            gram[i, j] = 2 * L.n * np.trace(vm @ comm)
    return gram


# -- Hamiltonians and flow ---------------------------------------------------


def sigma(fam: InvariantFamily, i: int, v: TodaPoint) -> complex:
    """sigma_i(v) = f_i(v + shift), 0-based index."""
    L = fam.algebra
    return fam.eval(i, to_vec(L, v) + standard_shift(L))


def sigma_all(fam: InvariantFamily, v: TodaPoint) -> np.ndarray:
    L = fam.algebra
    return fam.values_at(to_vec(L, v) + standard_shift(L))


def hamiltonian_vf(fam: InvariantFamily, i: int, v: TodaPoint,
                   fd_step: float = 1e-6, cond_limit: float = 1e12) -> np.ndarray:
    """Frame coordinates of the Hamiltonian vector field of sigma_i at v.

    Solves omega(X, u) = d sigma_i(u) over the frame, with the differential
    taken by central differences.
    """
    L = fam.algebra
    gram = omega_gram(L, v)
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > cond_limit:
        raise NumericalError(f"symplectic Gram matrix is ill-conditioned ({cond:.2e})")
    zeta = standard_shift(L)
    v_vec = to_vec(L, v)
    frame = frame_vectors(L)
    dsig = np.empty(2 * L.rank, dtype=complex)
    for k, u in enumerate(frame):
        plus = fam.eval(i, v_vec + fd_step * u + zeta)
        minus = fam.eval(i, v_vec - fd_step * u + zeta)
        dsig[k] = (plus - minus) / (2 * fd_step)
    # omega(X, frame_k) = sum_j X_j gram[j, k]; gram is antisymmetric
    return np.linalg.solve(gram.T, dsig)


@dataclass
class Trajectory:
    times: np.ndarray
    a: np.ndarray        # (n_samples, r)
    c: np.ndarray        # (n_samples, r)
    sigmas: np.ndarray   # (n_samples, r)
    aborted: bool = False

    @property
    def drift(self) -> float:
        ref = self.sigmas[0]
        err = np.abs(self.sigmas - ref[None, :]) / (1.0 + np.abs(ref[None, :]))
        return float(err.max())

    def point(self, k: int) -> TodaPoint:
        return TodaPoint(self.a[k].copy(), self.c[k].copy())


def flow(fam: InvariantFamily, i: int, v0: TodaPoint, t_end: float, steps: int,
         min_c: float = 1e-12) -> Trajectory:
    """Fixed-step RK4 integration of the sigma_i flow.

    Aborts cleanly (returning the partial trajectory) if some c coordinate
    collapses below min_c, i.e. the flow reaches the orbit boundary.
    """
    if steps < 1:
        raise DomainError("steps must be >= 1")
    L = fam.algebra
    r = L.rank

    def deriv(state):
        pt = TodaPoint(state[:r], state[r:])
        return hamiltonian_vf(fam, i, pt)

    times = [0.0]
    states = [np.concatenate([v0.a, v0.c]).astype(complex)]
    sig = [sigma_all(fam, v0)]
    if t_end == 0.0:
        return Trajectory(np.array(times), np.array([v0.a]), np.array([v0.c]),
                          np.array(sig))

    h = t_end / steps
    state = states[0]
    aborted = False
    for k in range(steps):
        k1 = deriv(state)
        k2 = deriv(state + 0.5 * h * k1)
        k3 = deriv(state + 0.5 * h * k2)
        k4 = deriv(state + h * k3)
        state = state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if np.any(np.abs(state[r:]) <= min_c):
            aborted = True
            break
        times.append((k + 1) * h)
        states.append(state)
        sig.append(sigma_all(fam, TodaPoint(state[:r], state[r:])))

    arr = np.array(states)
    return Trajectory(np.array(times), arr[:, :r], arr[:, r:], np.array(sig), aborted)


def observed_order(fam: InvariantFamily, i: int, v0: TodaPoint, t_end: float,
                   steps_base: int) -> float:
    """Convergence order from endpoint differences under step halving."""
    ends = []
    for mult in (1, 2, 4):
        tr = flow(fam, i, v0, t_end, steps_base * mult)
        if tr.aborted:
            raise NumericalError("flow aborted during the order measurement")
        ends.append(np.concatenate([tr.a[-1], tr.c[-1]]))
    e1 = np.linalg.norm(ends[0] - ends[1])
    e2 = np.linalg.norm(ends[1] - ends[2])
    return float(np.log2(e1 / e2))


def random_point(L: LieAlgebra, rng: np.random.Generator, scale: float = 1.0) -> TodaPoint:
    """Generic point with c bounded away from zero (log-normal magnitudes)."""
    a = scale * (rng.standard_normal(L.rank) + 1j * rng.standard_normal(L.rank)) / np.sqrt(2)
    mag = np.exp(0.4 * rng.standard_normal(L.rank))
    phase = np.exp(2j * np.pi * rng.random(L.rank))
    return TodaPoint(a, scale * mag * phase)


def random_orbit_index(L: LieAlgebra, rng: np.random.Generator) -> OrbitIndex:
    support = frozenset(i for i in range(L.rank) if rng.random() < 0.6)
    z = (rng.standard_normal(L.rank) + 1j * rng.standard_normal(L.rank)) / np.sqrt(2)
    z = np.asarray(z, dtype=complex)
    for i in support:
        z[i] = 0.0
    return OrbitIndex(support, z)
