"""Verification suites and machine-readable reports.

Each suite re-runs one cluster of the package's mathematical claims at a
configurable type/rank/seed and reduces the outcome to a pass flag plus a
small metric map.  Reports are deterministic for fixed parameters: every
random draw comes from a generator seeded by (root seed, fixed suite
index), and the serialized form excludes wall-clock duration.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .group import (TorusChar, adjoint, compose_borel, exp_nilpotent,
                    random_group_element)
from .invariants import invariant_generators
from .liealg import build_lie_algebra
from .mfshift import check_commutation, independence_rank, mf_family, standard_shift
from .rootsys import build_root_system
from . import hessenberg as hb
from . import slodowy as sd
from . import toda


@dataclass
class SuiteReport:
    suite_id: str
    claim: str
    params: dict
    passed: bool
    metrics: dict
    duration: float = 0.0

    def to_dict(self, include_duration: bool = False) -> dict:
        out = {
            "schema": REPORT_SCHEMA,
            "suite_id": self.suite_id,
            "claim": self.claim,
            "params": {k: self.params[k] for k in sorted(self.params)},
            "passed": bool(self.passed),
            "metrics": {k: float(self.metrics[k]) for k in sorted(self.metrics)},
        }
        if include_duration:
            out["duration_s"] = float(self.duration)
        return out


REPORT_SCHEMA = "todahess-report-v1"


class _Context:
    """Shared per-(series, rank) objects for the suite runners."""

    def __init__(self, series: str, rank: int):
        self.rs = build_root_system(series, rank)
        self.L = build_lie_algebra(self.rs)
        self.fam = invariant_generators(self.L)
        self.zeta = standard_shift(self.L)
        self.sf = mf_family(self.fam, self.zeta)
        self.slice = sd.RegularSlice(self.L)


_CONTEXT_CACHE: dict = {}


def get_context(series: str, rank: int) -> _Context:
    key = (series, rank)
    if key not in _CONTEXT_CACHE:
        _CONTEXT_CACHE[key] = _Context(series, rank)
    return _CONTEXT_CACHE[key]


def _random_borel(ctx, rng):
    ch = TorusChar(np.exp(0.5 * (rng.standard_normal(ctx.L.rank)
                                 + 1j * rng.standard_normal(ctx.L.rank))))
    y = ctx.L.zero()
    npos = ctx.rs.n_positive
    y.coeffs[ctx.L.rank: ctx.L.rank + npos] = (
        rng.standard_normal(npos) + 1j * rng.standard_normal(npos)) / np.sqrt(2)
    return ch, y


# -- runners -------------------------------------------------------------------


def _run_mf_commute(ctx, rng, samples, tol):
    tol = tol or 1e-6
    samples = samples or 100
    shifts = [ctx.zeta]
    for _ in range(5):
        a = ctx.L.random_vec(rng)
        if ctx.L.is_regular(a):
            shifts.append(a)
    worst = 0.0
    for k, a in enumerate(shifts):
        sf = ctx.sf if k == 0 else mf_family(ctx.fam, a)
        rep = check_commutation(sf, samples, tol, seed=int(rng.integers(2 ** 31)))
        worst = max(worst, rep.max_residual)
    return worst <= tol, {"max_residual": worst, "n_shifts": float(len(shifts)),
                          "samples_per_shift": float(samples)}


def _run_mf_independence(ctx, rng, samples, tol):
    tol = tol or 1e-8
    samples = samples or 20
    ell = ctx.sf.ell
    min_rank = ell
    for _ in range(samples):
        x = ctx.L.random_vec(rng)
        min_rank = min(min_rank, independence_rank(ctx.sf, x, tol))
    degrees_ok = sum(ctx.fam.degrees) == ctx.fam.ell
    return min_rank == ell and degrees_ok, {
        "min_rank": float(min_rank), "ell": float(ell),
        "degree_sum_matches": float(degrees_ok)}


def _run_toda_orbits(ctx, rng, samples, tol):
    tol = tol or 1e-9
    samples = samples or 200
    L = ctx.L
    suite = toda.bijectivity_suite(L, seed=int(rng.integers(2 ** 31)),
                                   n=samples, tol=tol)

    indices = [toda.random_orbit_index(L, rng) for _ in range(12)]
    poset_ok = True
    for p in indices:
        poset_ok &= toda.closure_leq(p, p)
        for q in indices:
            if toda.closure_leq(p, q) and toda.closure_leq(q, p):
                poset_ok &= p.matches(q)
            for s in indices:
                if toda.closure_leq(p, q) and toda.closure_leq(q, s):
                    poset_ok &= toda.closure_leq(p, s)

    curves_ok = True
    top = hb.open_leaf_index(L)
    for p in indices:
        curves_ok &= toda.closure_leq(p, top)
        for q in indices:
            hits = hb.degeneration_curve_hits(L, p, q)
            curves_ok &= (hits == toda.closure_leq(p, q))

    passed = suite.passed and poset_ok and curves_ok
    return passed, {"bad_roundtrips": float(suite.bad_roundtrips),
                    "bad_witnesses": float(suite.bad_witnesses),
                    "bad_ranks": float(suite.bad_ranks),
                    "poset_ok": float(poset_ok), "curves_ok": float(curves_ok)}


def _run_toda_flow(ctx, rng, samples, tol):
    tol = tol or 1e-6
    steps = samples or 1000
    v0 = toda.random_point(ctx.L, rng)
    worst_drift = 0.0
    stayed = True
    for i in range(ctx.L.rank):
        tr = toda.flow(ctx.fam, i, v0, 1.0, steps)
        worst_drift = max(worst_drift, tr.drift)
        stayed &= not tr.aborted
    order = toda.observed_order(ctx.fam, 0, v0, 4.0, 8)
    passed = worst_drift <= tol and stayed and order >= 3.5
    return passed, {"max_drift": worst_drift, "observed_order": order,
                    "stayed_in_orbit": float(stayed), "steps": float(steps)}


def _run_kostant_roundtrip(ctx, rng, samples, tol):
    tol = tol or 1e-8
    samples = samples or 100
    L = ctx.L
    sl = ctx.slice
    worst = 0.0
    for _ in range(samples):
        y0 = L.zero()
        npos = ctx.rs.n_positive
        y0.coeffs[L.rank: L.rank + npos] = 0.5 * (
            rng.standard_normal(npos) + 1j * rng.standard_normal(npos))
        s0 = sl.random_point(rng)
        w = adjoint(L, exp_nilpotent(L, y0), sl.embed(s0))
        y, s = sd.graded_kostant_inverse(sl, w)
        worst = max(worst,
                    float(np.abs(y.coeffs - y0.coeffs).max()),
                    float(np.abs(s.m - s0.m).max()))
        # forward roundtrip from a fresh point of xi + b
        wb = L.zero()
        wb.coeffs[: L.rank] = (rng.standard_normal(L.rank)
                               + 1j * rng.standard_normal(L.rank)) / np.sqrt(2)
        wb.coeffs[L.rank: L.rank + npos] = (
            rng.standard_normal(npos) + 1j * rng.standard_normal(npos)) / np.sqrt(2)
        w2 = sl.xi + wb
        y2, s2 = sd.graded_kostant_inverse(sl, w2)
        back = adjoint(L, exp_nilpotent(L, y2), sl.embed(s2))
        worst = max(worst, L.norm(back - w2) / (1.0 + L.norm(w2)))
    return worst <= tol, {"max_residual": worst, "samples": float(samples)}


def _run_kappa_embed(ctx, rng, samples, tol):
    tol = tol or 1e-8
    samples = samples or 50
    worst_sreg = worst_inc = worst_comb = 0.0
    for _ in range(samples):
        v = toda.random_point(ctx.L, rng)
        rep = sd.embedding_check(ctx.slice, ctx.sf, v, tol)
        worst_sreg = max(worst_sreg, rep.sreg_residual)
        worst_inc = max(worst_inc, rep.inclusion_residual)
        worst_comb = max(worst_comb, rep.combination_residual)
    passed = worst_sreg <= 1e-9 and worst_inc <= 1e-9 and worst_comb <= tol
    return passed, {"max_sreg_residual": worst_sreg,
                    "max_inclusion_residual": worst_inc,
                    "max_combination_residual": worst_comb,
                    "samples": float(samples)}


def _run_kappa_symplectic(ctx, rng, samples, tol):
    tol = tol or 1e-4
    samples = samples or 50
    worst = 0.0
    for _ in range(samples):
        v = toda.random_point(ctx.L, rng)
        rep = sd.kappa_pullback_check(ctx.slice, v, fd_step=1e-5, tol=tol)
        worst = max(worst, rep.max_difference / (1.0 + rep.omega_scale))
    # central differences: halving the step divides the defect by about 4
    v = toda.random_point(ctx.L, rng)
    coarse = sd.kappa_pullback_check(ctx.slice, v, fd_step=2e-4, tol=1.0)
    fine = sd.kappa_pullback_check(ctx.slice, v, fd_step=1e-4, tol=1.0)
    if fine.max_difference > 0:
        order = float(np.log2(coarse.max_difference / fine.max_difference))
    else:
        order = 2.0
    passed = worst <= tol and 1.5 <= order <= 2.5
    return passed, {"max_gram_difference": worst, "fd_order": order,
                    "samples": float(samples)}


def _run_b_stabilizer(ctx, rng, samples, tol):
    tol = tol or 1e-8
    samples = samples or 20
    worst_min = np.inf
    nullities_ok = True
    for _ in range(samples):
        s = ctx.slice.random_point(rng)
        smin, nullity, _ = sd.b_stabilizer_check(ctx.slice, s, tol)
        worst_min = min(worst_min, smin)
        nullities_ok &= (nullity == ctx.L.rank)
    s0 = sd.SregPoint(np.zeros(ctx.L.rank, dtype=complex))
    smin, nullity, _ = sd.b_stabilizer_check(ctx.slice, s0, tol)
    worst_min = min(worst_min, smin)
    nullities_ok &= (nullity == ctx.L.rank)
    passed = worst_min > tol and nullities_ok
    return passed, {"min_normalized_sv": float(worst_min),
                    "full_nullity_ok": float(nullities_ok),
                    "samples": float(samples)}


def _run_strata(ctx, rng, samples, tol):
    tol = tol or 1e-9
    samples = samples or 100
    L = ctx.L
    invariant_ok = True
    for _ in range(samples):
        idx = toda.random_orbit_index(L, rng)
        p = hb.random_stratum_point(L, idx, rng)
        if not hb.stratum(L, p, tol).matches(idx):
            invariant_ok = False
        b = compose_borel(L, *_random_borel(ctx, rng))
        if not hb.stratum(L, hb.gauge_move(L, p, b), tol).matches(idx):
            invariant_ok = False
        h = random_group_element(L, rng)
        if not hb.stratum(L, hb.HessPoint(h @ p.g, p.x), tol).matches(idx):
            invariant_ok = False

    closure = hb.strata_closure_suite(L, seed=int(rng.integers(2 ** 31)),
                                      n_pairs=20, tol=tol)
    passed = invariant_ok and closure.passed
    return passed, {"invariance_ok": float(invariant_ok),
                    "curve_mismatches": float(closure.curve_mismatches),
                    "curve_membership_failures":
                        float(closure.curve_membership_failures),
                    "translation_failures": float(closure.invariance_failures),
                    "samples": float(samples)}


def _run_open_leaf(ctx, rng, samples, tol):
    tol = tol or 1e-8
    samples = samples or 50
    L = ctx.L
    sl = ctx.slice
    top = frozenset(range(L.rank))

    support_ok = True
    dim_ok = hb.stratum_dim(L, hb.open_leaf_index(L)) == L.dim + L.rank
    for _ in range(10):
        idx = toda.random_orbit_index(L, rng)
        formula = hb.stratum_dim(L, idx)
        dim_ok &= (formula == hb.stratum_dim_rank_oracle(L, idx, rng))
        dim_ok &= (formula <= L.dim + L.rank)

    worst_triangle = 0.0
    inj_ok = True
    witness_ok = True
    for _ in range(samples):
        g = random_group_element(L, rng)
        s = sl.random_point(rng)
        p = hb.varphi(sl, g, s)
        support_ok &= (hb.stratum(L, p).S == top)
        support_ok &= hb.h0x_contains(L, p.x)
        worst_triangle = max(worst_triangle,
                             L.norm(hb.mu0(L, p) - adjoint(L, g, sl.embed(s))))
        g2, s2 = hb.leaf_surjectivity_witness(sl, p)
        witness_ok &= hb.points_equal(L, hb.varphi(sl, g2, s2), p, tol)
        witness_ok &= bool(np.abs(s2.m - s.m).max() <= tol)
        # a fresh open-leaf point, from scratch
        q = hb.HessPoint(random_group_element(L, rng),
                         hb.random_open_fiber_element(L, rng))
        g3, s3 = hb.leaf_surjectivity_witness(sl, q)
        witness_ok &= hb.points_equal(L, hb.varphi(sl, g3, s3), q, tol)
        # injectivity mod centre: distinct slice points give distinct classes
        s4 = sl.random_point(rng)
        if np.abs(s4.m - s.m).max() > 1e-6:
            inj_ok &= not hb.points_equal(L, p, hb.varphi(sl, g, s4))

    passed = support_ok and dim_ok and worst_triangle <= 1e-10 and inj_ok and witness_ok
    return passed, {"support_ok": float(support_ok), "dims_ok": float(dim_ok),
                    "max_mu_triangle": worst_triangle,
                    "injectivity_ok": float(inj_ok),
                    "witness_ok": float(witness_ok), "samples": float(samples)}


def _run_regular_fibers(ctx, rng, samples, tol):
    tol = tol or 1e-9
    samples = samples or 200
    L = ctx.L
    g = random_group_element(L, rng)
    s = ctx.slice.random_point(rng)
    rep = hb.regular_fiber_suite(ctx.slice, (g, s), seed=int(rng.integers(2 ** 31)),
                                 n=samples, tol=tol)
    empty = hb.regular_fiber_suite(ctx.slice, L.zero(), seed=int(rng.integers(2 ** 31)),
                                   n=10, tol=tol)
    passed = rep.passed and empty.empty_branch and empty.passed
    return passed, {"regular_scan_ok": float(rep.regular_scan_ok),
                    "max_fiber_stay": rep.fiber_stay,
                    "tangent_rank": float(rep.tangent_rank),
                    "max_isotropy": rep.isotropy,
                    "distinct_ok": float(rep.distinct_ok),
                    "empty_branch_ok": float(empty.passed),
                    "samples": float(samples)}


def _run_tau_extension(ctx, rng, samples, tol):
    tol = tol or 1e-8
    samples = samples or 50
    L = ctx.L
    sl = ctx.slice
    worst_ext = worst_gauge = worst_base = 0.0
    for _ in range(samples):
        g = random_group_element(L, rng)
        s = sl.random_point(rng)
        p = hb.varphi(sl, g, s)
        direct = sd.tau_all(sl, ctx.sf, g, s)
        through = hb.tilde_tau_all(L, ctx.sf, p)
        worst_ext = max(worst_ext, float(np.abs(direct - through).max()
                                         / (1.0 + np.abs(direct).max())))
        b = compose_borel(L, *_random_borel(ctx, rng))
        moved = hb.gauge_move(L, p, b)
        worst_gauge = max(worst_gauge, float(
            np.abs(through - hb.tilde_tau_all(L, ctx.sf, moved)).max()
            / (1.0 + np.abs(through).max())))
        base_vals = ctx.fam.values_at(hb.mu0(L, p))
        worst_base = max(worst_base, float(
            np.abs(through[: L.rank] - base_vals).max()
            / (1.0 + np.abs(base_vals).max())))
    passed = worst_ext <= tol and worst_gauge <= tol and worst_base <= tol
    return passed, {"max_extension_residual": worst_ext,
                    "max_gauge_residual": worst_gauge,
                    "max_base_residual": worst_base, "samples": float(samples)}


#: suite id -> (claim, runner); the order fixes the per-suite seed offsets.
SUITES = {
    "mf-commute": ("pairwise Poisson commutation of the shifted family",
                   _run_mf_commute),
    "mf-independence": ("functional independence of the shifted family at "
                        "regular shifts", _run_mf_independence),
    "toda-orbits": ("orbit classification, closure order, and action "
                    "dimensions in the Toda module", _run_toda_orbits),
    "toda-flow": ("conserved quantities and integrator order along the Toda "
                  "flow", _run_toda_flow),
    "kostant-roundtrip": ("graded inversion of the dressing map on the "
                          "slice", _run_kostant_roundtrip),
    "kappa-embed": ("slice embedding of the Toda lattice: recovery and "
                    "Hamiltonian matching", _run_kappa_embed),
    "kappa-symplectic": ("pullback of the symplectic form along the slice "
                         "embedding", _run_kappa_symplectic),
    "b-stabilizer": ("triviality of Borel stabilizers on the slice",
                     _run_b_stabilizer),
    "strata": ("stratification of the family: invariance and degeneration "
               "curves", _run_strata),
    "open-leaf": ("open leaf: dimensions, immersion, and surjectivity "
                  "witnesses", _run_open_leaf),
    "regular-fibers": ("regular fibers: regularity scan, centralizer "
                       "directions, isotropy", _run_regular_fibers),
    "tau-extension": ("extension of the integrable system to the whole "
                      "family", _run_tau_extension),
}

_SUITE_INDEX = {sid: k for k, sid in enumerate(SUITES)}


def run_suite(suite_id: str, series: str = "A", rank: int = 2, seed: int = 0,
              samples: int = None, tol: float = None) -> SuiteReport:
    if suite_id not in SUITES:
        raise ConfigurationError(
            f"unknown suite {suite_id!r}; known: {', '.join(SUITES)}")
    ctx = get_context(series, rank)
    claim, runner = SUITES[suite_id]
    rng = np.random.default_rng([seed, _SUITE_INDEX[suite_id]])
    start = time.perf_counter()
    passed, metrics = runner(ctx, rng, samples, tol)
    duration = time.perf_counter() - start
    params = {"series": series, "rank": rank, "seed": seed}
    if samples is not None:
        params["samples"] = samples
    if tol is not None:
        params["tol"] = tol
    return SuiteReport(suite_id, claim, params, bool(passed), metrics, duration)


def run_all(series: str = "A", rank: int = 2, seed: int = 0) -> list:
    return [run_suite(sid, series, rank, seed) for sid in SUITES]
