"""The stratified family over the flag variety and its open leaf.

Points of the family are gauge classes [(g, x)] with x in the distinguished
fiber space H = b + (simple negative root spaces); the gauge group is B
acting by b . (g, x) = (g b^{-1}, Ad_b(x)).  A point is stored by a
representative and never canonicalized; equality is the gauge test.

The stratum of [(g, x)] is the orbit index of -pi_{b_-}(x) in the Toda
module, the open dense leaf being the full-support stratum.  The open
leaf is the image of the quotient of group x slice under

    varphi(g, s) = [(g, xi + m)],

which is inverted on the leaf by a torus move followed by the graded
dressing inversion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError
from .group import (GrpElt, TorusChar, adjoint, exp_nilpotent, is_in_borel,
                    random_group_element, torus_lift)
from .liealg import AlgVec, LieAlgebra
from .mfshift import ShiftFamily
from .slodowy import RegularSlice, SregPoint, graded_kostant_inverse, omega_big
from .toda import (OrbitIndex, canonical_point, closure_leq, orbit_index,
                   random_orbit_index)

SUPPORT_TOL = 1e-9


@dataclass
class HessPoint:
    """Gauge-class representative (g, x) with x in the fiber space."""

    g: GrpElt
    x: AlgVec


def fiber_mask(L: LieAlgebra) -> np.ndarray:
    """Coefficient support of H: Cartan, positive roots, simple negatives."""
    mask = L.grading > 0
    mask = mask | (np.arange(L.dim) < L.rank)
    for i in range(L.rank):
        mask[L.e_index(L.rs.negative(i))] = True
    return mask


def h0_contains(L: LieAlgebra, x: AlgVec, tol: float = SUPPORT_TOL) -> bool:
    """Membership in the fiber space: nothing on non-simple negative roots."""
    off = np.where(fiber_mask(L), 0.0, x.coeffs)
    return float(np.linalg.norm(off)) <= tol * (1.0 + float(np.linalg.norm(x.coeffs)))


def h0x_contains(L: LieAlgebra, x: AlgVec, tol: float = SUPPORT_TOL) -> bool:
    """Membership in the open part: additionally every simple-negative
    coefficient is nonzero."""
    if not h0_contains(L, x, tol):
        return False
    scale = max(float(np.linalg.norm(x.coeffs)), 1.0)
    c = np.array([L.root_coeff(x, L.rs.negative(i)) for i in range(L.rank)])
    return bool(np.all(np.abs(c) > tol * scale))


def points_equal(L: LieAlgebra, p: HessPoint, q: HessPoint,
                 tol: float = 1e-8) -> bool:
    """Gauge test: g_p^{-1} g_q lands in B and the matching Ad moves x_p to x_q."""
    b = GrpElt(np.linalg.solve(p.g.mat, q.g.mat))
    if not is_in_borel(b, tol):
        return False
    moved = adjoint(L, b.inv, p.x)
    return L.norm(moved - q.x) <= tol * (1.0 + L.norm(q.x))


def gauge_move(L: LieAlgebra, p: HessPoint, b: GrpElt) -> HessPoint:
    """The equivalent representative (g b^{-1}, Ad_b(x))."""
    return HessPoint(p.g @ b.inv, adjoint(L, b, p.x))


def mu0(L: LieAlgebra, p: HessPoint) -> AlgVec:
    """The family map [(g, x)] -> Ad_g(x); gauge invariant by construction."""
    return adjoint(L, p.g, p.x)


def in_fiber(L: LieAlgebra, p: HessPoint, x0: AlgVec, tol: float = 1e-8) -> bool:
    return L.norm(mu0(L, p) - x0) <= tol * (1.0 + L.norm(x0))


def flag_membership(L: LieAlgebra, g: GrpElt, x0: AlgVec, tol: float = SUPPORT_TOL) -> bool:
    """Flag-variety form of the fiber test: Ad_{g^{-1}}(x0) lies in the fiber space."""
    return h0_contains(L, adjoint(L, g.inv, x0), tol)


def stratum(L: LieAlgebra, p: HessPoint, tol: float = SUPPORT_TOL) -> OrbitIndex:
    """Orbit index of the Toda-module shadow -pi_{b_-}(x)."""
    return orbit_index(L, -1.0 * L.project_bminus(p.x), tol)


def open_leaf_index(L: LieAlgebra) -> OrbitIndex:
    return OrbitIndex(frozenset(range(L.rank)), np.zeros(L.rank, dtype=complex))


def stratum_dim(L: LieAlgebra, idx: OrbitIndex) -> int:
    """dim G - rank + 2 |S|; fixed against the rank oracle below."""
    return L.dim - L.rank + 2 * len(idx.S)


def random_stratum_point(L: LieAlgebra, idx: OrbitIndex,
                         rng: np.random.Generator) -> HessPoint:
    """Random representative of a point in the given stratum."""
    shadow = canonical_point(L, idx).coeffs.copy()
    for i in idx.S:
        shadow[i] = (rng.standard_normal() + 1j * rng.standard_normal()) / np.sqrt(2)
        shadow[L.e_index(L.rs.negative(i))] = np.exp(0.3 * rng.standard_normal()
                                                     + 2j * np.pi * rng.random())
    x = L.zero()
    x.coeffs = -shadow
    u_part = L.random_vec(rng)
    x.coeffs += np.where(L.grading > 0, u_part.coeffs, 0.0)
    return HessPoint(random_group_element(L, rng), x)


def stratum_dim_rank_oracle(L: LieAlgebra, idx: OrbitIndex,
                            rng: np.random.Generator) -> int:
    """Dimension of the stratum measured at a random point.

    Spans the tangent of the pre-quotient chart (all group directions plus
    the fiber directions along the orbit and the positive part) and removes
    the free gauge directions.
    """
    p = random_stratum_point(L, idx, rng)
    shadow = -1.0 * L.project_bminus(p.x)
    cols = []
    for i in range(L.dim):
        cols.append(np.concatenate([L.basis_vec(i).coeffs, np.zeros(L.dim)]))
    for i in np.nonzero(L.grading > 0)[0]:
        cols.append(np.concatenate([np.zeros(L.dim), L.basis_vec(i).coeffs]))
    borel_idx = list(range(L.rank)) + [L.e_index(k) for k in range(L.rs.n_positive)]
    for j in borel_idx:
        w = L.basis_vec(j)
        orbit_dir = L.project_bminus(L.bracket(w, shadow))
        cols.append(np.concatenate([np.zeros(L.dim), orbit_dir.coeffs]))
    total = np.array(cols).T
    sv = np.linalg.svd(total, compute_uv=False)
    rank_total = int(np.sum(sv > 1e-10 * sv[0]))

    gauge_cols = []
    for j in borel_idx:
        eps = L.basis_vec(j)
        gauge_cols.append(np.concatenate([-eps.coeffs, L.bracket(eps, p.x).coeffs]))
    both = np.hstack([total, np.array(gauge_cols).T])
    sv2 = np.linalg.svd(both, compute_uv=False)
    if int(np.sum(sv2 > 1e-10 * sv2[0])) != rank_total:
        raise DomainError("gauge directions escaped the chart tangent")
    n_gauge = len(borel_idx)
    return rank_total - n_gauge


# -- the open immersion -------------------------------------------------------


def varphi(sl: RegularSlice, g: GrpElt, s: SregPoint) -> HessPoint:
    """Representative of the image of (g Z, s) in the family."""
    return HessPoint(g, sl.embed(s))


def leaf_surjectivity_witness(sl: RegularSlice, p: HessPoint,
                              tol: float = SUPPORT_TOL):
    """Invert varphi on the open leaf.

    A torus move rescales the simple-negative coefficients onto the slice
    nilpotent, then the graded dressing inversion supplies the unipotent
    part: with b = t exp(y), Ad_{b^{-1}}(x) lands on the slice and
    (g b, slice point) represents the same gauge class.
    """
    L = sl.algebra
    if stratum(L, p).S != frozenset(range(L.rank)):
        raise DomainError("point is not on the open leaf")
    c = np.array([L.root_coeff(p.x, L.rs.negative(i)) for i in range(L.rank)])
    t = torus_lift(L, TorusChar(1.0 / c))
    xb = L.project_u(p.x) + L.project_cartan(p.x)
    inner = adjoint(L, t.inv, xb)
    y, s = graded_kostant_inverse(sl, sl.xi + inner)
    b = t @ exp_nilpotent(L, y)
    resid = L.norm(adjoint(L, b.inv, p.x) - sl.embed(s))
    if resid > 1e-8 * (1.0 + L.norm(p.x)):
        raise DomainError(f"witness failed to land on the slice ({resid:.2e})")
    return p.g @ b, s


def tilde_tau(L: LieAlgebra, sf: ShiftFamily, k: int, p: HessPoint) -> complex:
    """Member k of the shifted family through the family map."""
    return sf.value(k, mu0(L, p))


def tilde_tau_all(L: LieAlgebra, sf: ShiftFamily, p: HessPoint) -> np.ndarray:
    return sf.values_at(mu0(L, p))


# -- fiber geometry -----------------------------------------------------------


def random_open_fiber_element(L: LieAlgebra, rng: np.random.Generator) -> AlgVec:
    """Random element of the open fiber part (generic b-part, nonzero c)."""
    x = L.random_vec(rng)
    x.coeffs = np.where(fiber_mask(L), x.coeffs, 0.0)
    for i in range(L.rank):
        x.coeffs[L.e_index(L.rs.negative(i))] = np.exp(
            0.3 * rng.standard_normal() + 2j * np.pi * rng.random())
    return x


def group_exp(L: LieAlgebra, k: AlgVec, t: complex = 1.0) -> GrpElt:
    """exp(t k) for an arbitrary algebra element (unimodular since traceless)."""
    return GrpElt(scipy.linalg.expm(t * L.to_matrix(k)))


@dataclass
class FiberReport:
    regular_scan_ok: bool
    fiber_stay: float
    leaf_stay: bool
    distinct_ok: bool
    tangent_rank: int
    isotropy: float
    empty_branch: bool
    passed: bool


def regular_fiber_suite(sl: RegularSlice, witness, seed: int, n: int,
                        tol: float = 1e-9) -> FiberReport:
    """Fiber geometry over a regular value of the family map.

    witness is either (g, s) fixing a fiber point, or a bare vector; a
    non-regular vector exercises the emptiness branch: the open fiber part
    consists of regular elements only, so the open-leaf fiber is empty.
    """
    L = sl.algebra
    rng = np.random.default_rng(seed)

    scan_ok = all(L.is_regular(random_open_fiber_element(L, rng)) for _ in range(n))

    if isinstance(witness, AlgVec):
        if not L.is_regular(witness):
            return FiberReport(scan_ok, 0.0, True, True, 0, 0.0, True, scan_ok)
        raise DomainError("regular witness must come with its (g, s) data")

    g, s = witness
    x = adjoint(L, g, sl.embed(s))
    cent = L.centralizer_basis(x)
    base = varphi(sl, g, s)

    fiber_stay = 0.0
    leaf_stay = True
    tangent_cols = []
    pts = []
    for k in cent:
        c = group_exp(L, k, t=0.37)
        moved = HessPoint(c @ g, base.x)
        fiber_stay = max(fiber_stay, L.norm(mu0(L, moved) - x) / (1.0 + L.norm(x)))
        leaf_stay = leaf_stay and stratum(L, moved).S == frozenset(range(L.rank))
        pts.append(moved)
        tangent_cols.append(adjoint(L, g.inv, k).coeffs)

    distinct_ok = True
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if points_equal(L, pts[i], pts[j]):
                distinct_ok = False

    sv = np.linalg.svd(np.array(tangent_cols).T, compute_uv=False)
    tangent_rank = int(np.sum(sv > 1e-10 * sv[0]))

    s_vec = sl.embed(s)
    isotropy = 0.0
    dirs = [AlgVec(col) for col in tangent_cols]
    for i in range(len(dirs)):
        for j in range(len(dirs)):
            val = omega_big(L, s_vec, (dirs[i], L.zero()), (dirs[j], L.zero()))
            isotropy = max(isotropy, abs(val))

    passed = (scan_ok and fiber_stay <= tol and leaf_stay and distinct_ok
              and tangent_rank == L.rank and isotropy <= tol)
    return FiberReport(scan_ok, fiber_stay, leaf_stay, distinct_ok,
                       tangent_rank, isotropy, False, passed)


# -- strata closure ------------------------------------------------------------


def degeneration_curve(L: LieAlgebra, lower: OrbitIndex, upper: OrbitIndex,
                       eps: complex) -> AlgVec:
    """Point of the canonical curve in the upper orbit at parameter eps.

    The support coefficients over S \\ S' are scaled by eps while the free
    Cartan coordinates over S carry the target values; for eps != 0 the
    point stays in the upper orbit, and its eps -> 0 limit classifies as
    the lower index exactly under the closure order.
    """
    v = L.zero()
    v.coeffs[: L.rank] = upper.z
    for i in upper.S:
        v.coeffs[i] = lower.z[i]
        v.coeffs[L.e_index(L.rs.negative(i))] = 1.0 if i in lower.S else eps
    return v


def degeneration_curve_hits(L: LieAlgebra, lower: OrbitIndex, upper: OrbitIndex,
                            tol: float = SUPPORT_TOL) -> bool:
    """Whether the degeneration curve limits onto the lower stratum."""
    limit = degeneration_curve(L, lower, upper, 0.0)
    target = orbit_index(L, canonical_point(L, lower), tol)
    return orbit_index(L, limit, tol).matches(target)


@dataclass
class StrataReport:
    curve_mismatches: int
    curve_membership_failures: int
    invariance_failures: int
    pairs: int

    @property
    def passed(self) -> bool:
        return (self.curve_mismatches == 0 and self.invariance_failures == 0
                and self.curve_membership_failures == 0)


def strata_closure_suite(L: LieAlgebra, seed: int, n_pairs: int = 20,
                         tol: float = SUPPORT_TOL) -> StrataReport:
    """Closure order via degeneration curves, plus stratum invariance.

    For sampled index pairs the curve limit lands on the lower stratum
    exactly when the closure order holds, intermediate curve points stay
    in the upper stratum, and strata are invariant under left translations
    of the representative.
    """
    rng = np.random.default_rng(seed)
    mismatches = membership_failures = invariance_failures = 0
    for _ in range(n_pairs):
        lower = random_orbit_index(L, rng)
        upper = random_orbit_index(L, rng)
        if degeneration_curve_hits(L, lower, upper, tol) \
                != closure_leq(lower, upper):
            mismatches += 1
        if not degeneration_curve_hits(L, lower, open_leaf_index(L), tol):
            mismatches += 1
        if upper.S:
            mid = degeneration_curve(L, lower, upper, 0.5)
            if not orbit_index(L, mid, tol).matches(upper):
                membership_failures += 1
        p = random_stratum_point(L, upper, rng)
        h = random_group_element(L, rng)
        if not stratum(L, HessPoint(h @ p.g, p.x), tol).matches(upper):
            invariance_failures += 1
    return StrataReport(mismatches, membership_failures, invariance_failures,
                        n_pairs)
