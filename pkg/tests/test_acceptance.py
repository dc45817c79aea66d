"""Acceptance suite: ten end-to-end checks, one test per criterion.

Each test prints a single summary line with the measured figure of
merit (visible with -rA or on failure); the pytest -v node line is the
pass/fail record.  Criteria 1, 4, and 7 also enforce wall-clock
budgets, so run this file without a debugger attached.
"""

import time

import numpy as np
import pytest

from polydisklab import (
    BlaschkeProduct,
    DiskPickData,
    MobiusMap,
    Polynomial,
    PolyPickData,
    agler_feasible,
    build_tuple_from_kernel,
    builtin_v0,
    defect_identity_residual,
    exg1_reproduce,
    extract_graph,
    minimal_norm,
    pseudo_hyperbolic,
    random_polynomial,
    retract_check,
    schur_agler_norm,
    schur_construct,
    sup_on_torus,
    uniqueness_coincidence_check,
    uniqueness_variety_points,
    violation_witness,
    von_neumann_check,
)
from polydisklab.errors import DegenerateDataError

CANONICAL = PolyPickData(d=2, nodes=((0.0, 0.0), (0.5, 0.5)), targets=(0.0, 0.7))


def random_disk(rng, n, rmax=0.9):
    r = rmax * np.sqrt(rng.random(n))
    th = 2 * np.pi * rng.random(n)
    return r * np.exp(1j * th)


def separated_disk(rng, n, rmax, min_sep):
    """Disk sample with pairwise separation at least min_sep."""
    while True:
        pts = random_disk(rng, n, rmax=rmax)
        sep = min(
            abs(pts[i] - pts[j]) for i in range(n) for j in range(i + 1, n)
        )
        if sep >= min_sep:
            return pts


def test_01_distance_invariance_and_triangle_inequality():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()

    worst = 0.0
    for _ in range(10_000):
        z, w, a = random_disk(rng, 3, rmax=0.95)
        m = MobiusMap(a, np.exp(2j * np.pi * rng.random()))
        worst = max(
            worst, abs(pseudo_hyperbolic(m(z), m(w)) - pseudo_hyperbolic(z, w))
        )
    assert worst <= 1e-12

    worst_slack = -np.inf
    for _ in range(10_000):
        z, v, w = random_disk(rng, 3, rmax=0.999)
        slack = (
            pseudo_hyperbolic(z, w)
            - pseudo_hyperbolic(z, v)
            - pseudo_hyperbolic(v, w)
        )
        worst_slack = max(worst_slack, slack)
    assert worst_slack <= 1e-12

    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    print(
        f"acceptance 01 pass: invariance error {worst:.2e}, "
        f"triangle slack {worst_slack:.2e}, {elapsed:.2f}s"
    )


def test_02_two_point_minimal_norm_closed_form():
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(1000):
        lam = (0.1 + 0.8 * rng.random()) * np.exp(2j * np.pi * rng.random())
        w = 0.9 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        data = DiskPickData(nodes=(0.0, lam), targets=(0.0, w))
        got = minimal_norm(data)
        worst = max(worst, abs(got - abs(w) / abs(lam)))
    assert worst <= 1e-9
    print(f"acceptance 02 pass: worst closed-form error {worst:.2e}")


def test_03_blaschke_recovery_from_samples():
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(200):
        deg = int(rng.integers(1, 5))
        ref = BlaschkeProduct(
            zeros=tuple(random_disk(rng, deg, rmax=0.8)),
            unimodular_constant=np.exp(2j * np.pi * rng.random()),
        )
        nodes = separated_disk(rng, deg + 1, rmax=0.75, min_sep=0.05)
        data = DiskPickData(
            nodes=tuple(nodes), targets=tuple(ref(z) for z in nodes)
        )
        got = schur_construct(data)
        fresh = random_disk(rng, 100, rmax=0.9)
        worst = max(worst, max(abs(got(z) - ref(z)) for z in fresh))
    assert worst <= 1e-7
    print(f"acceptance 03 pass: 200 recoveries, worst fresh error {worst:.2e}")


def test_04_one_variable_agreement_and_canonical_norm():
    rng = np.random.default_rng(104)
    t0 = time.perf_counter()

    worst = 0.0
    for _ in range(100):
        nodes = separated_disk(rng, 3, rmax=0.7, min_sep=0.1)
        targets = random_disk(rng, 3, rmax=0.8)
        ref = minimal_norm(
            DiskPickData(nodes=tuple(nodes), targets=tuple(targets))
        )
        got = schur_agler_norm(
            PolyPickData(
                d=1, nodes=tuple((z,) for z in nodes), targets=tuple(targets)
            )
        )
        worst = max(worst, abs(float(got) - ref))
    assert worst <= 1e-4

    canonical = schur_agler_norm(CANONICAL)
    assert float(canonical) == pytest.approx(1.4, abs=1e-4)
    assert canonical.caveat_flag is None

    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    print(
        f"acceptance 04 pass: worst route gap {worst:.2e}, "
        f"canonical norm {float(canonical):.6f}, {elapsed:.1f}s"
    )


def test_05_infeasibility_certificate_chain():
    out = agler_feasible(CANONICAL, t=1.0, optimal_certificate=True)
    K = out.kernel.K
    assert np.abs(np.diag(K) - 1.0).max() <= 1e-12
    eigs = np.linalg.eigvalsh(K)
    assert eigs.min() > 0.0

    tup = build_tuple_from_kernel(out.kernel, CANONICAL.nodes)
    res = tup.verify()
    assert res["eigen_residual"] <= 1e-10
    assert res["commutation_residual"] <= 1e-10
    assert res["gram_residual"] <= 1e-10
    assert res["contraction_excess"] <= 1e-9

    vn = von_neumann_check(tup, samples=1000, seed=105)
    assert vn.max_ratio <= 1.0 + 1e-6

    w = violation_witness(CANONICAL, t=1.0)
    assert w.f_norm >= 1.4 - 1e-3
    print(
        f"acceptance 05 pass: kernel eig min {eigs.min():.3f}, "
        f"vN ratio {vn.max_ratio:.6f}, witness norm {w.f_norm:.6f}"
    )


def test_06_defect_identity_on_random_draws():
    out = agler_feasible(CANONICAL, t=1.0, optimal_certificate=True)
    tup = build_tuple_from_kernel(out.kernel, CANONICAL.nodes)
    rng = np.random.default_rng(106)
    worst = 0.0
    for _ in range(1000):
        p = random_polynomial(rng, 2, int(rng.integers(0, 6)))
        c = rng.normal(size=2) + 1j * rng.normal(size=2)
        worst = max(worst, defect_identity_residual(tup, p, c))
    assert worst <= 1e-9
    print(f"acceptance 06 pass: worst defect residual {worst:.2e}")


def test_07_extension_counterexample_reproduction():
    t0 = time.perf_counter()
    r = exg1_reproduce(0.9)
    elapsed = time.perf_counter() - t0
    assert r.verdict == "violation_detected"
    assert r.slack >= 1e-6
    assert r.sa_norm == pytest.approx(1.0, abs=1e-3)
    assert r.circle_gap > 0.05
    assert elapsed < 120.0
    print(
        f"acceptance 07 pass: slack {r.slack:.4f}, sa_norm {r.sa_norm:.6f}, "
        f"gap {r.circle_gap:.3f} rad, {elapsed:.1f}s"
    )


def test_08_plane_variety_graphs_and_retract_verdict():
    gens = builtin_v0()
    # dependent coordinate of z1 + z2 - z3 = 0 over each base pair:
    # (1,2) -> z3 = b1 + b2, (1,3) -> z2 = b2 - b1, (2,3) -> z1 = b2 - b1
    expected = {
        (1, 2): lambda b: b[:, 0] + b[:, 1],
        (1, 3): lambda b: b[:, 1] - b[:, 0],
        (2, 3): lambda b: b[:, 1] - b[:, 0],
    }
    for pair, dep in expected.items():
        rep = extract_graph(gens, pair)
        assert rep.single_sheeted
        want = dep(rep.base_points)
        s = np.abs(want)
        assert np.all(s[rep.mask] >= 1.0 - 1e-7)
        assert np.all(s[~rep.mask] <= 1.0 + 1e-7)
        assert np.allclose(rep.values[~rep.mask], want[~rep.mask], atol=1e-10)

    verdict = retract_check(gens)
    assert verdict.verdict == "not_retract"
    pair, base, escaped = verdict.witness
    assert max(abs(b) for b in base) < 1.0
    assert abs(escaped) > 1.0
    print(
        "acceptance 08 pass: three single-sheeted graphs with exact masks, "
        f"not_retract witness escape modulus {abs(escaped):.4f}"
    )


def test_09_uniqueness_curve_coincidence():
    rng = np.random.default_rng(109)
    worst_fit = 0.0
    worst_holdout = 0.0
    done = 0
    while done < 20:
        a, b, g = 0.6 * np.sqrt(rng.random(3)) * np.exp(
            2j * np.pi * rng.random(3)
        )
        try:
            fit = uniqueness_coincidence_check(a, b, g)
        except DegenerateDataError:
            continue
        assert fit.residual < 1e-6
        t = 0.3 + 0.4 * rng.random()
        zet = 0.55 * np.exp(2j * np.pi * (np.arange(40) + rng.random()) / 40)
        fresh = uniqueness_variety_points(a, b, g, t, zet)
        hold = float(np.abs(fit.generator(fresh)).max())
        assert hold < 1e-5
        worst_fit = max(worst_fit, fit.residual)
        worst_holdout = max(worst_holdout, hold)
        done += 1
    assert done == 20
    print(
        f"acceptance 09 pass: worst fit residual {worst_fit:.2e}, "
        f"worst holdout {worst_holdout:.2e}"
    )


def test_10_contractive_graphs_are_retracts():
    rng = np.random.default_rng(110)
    done = 0
    while done < 10:
        h = random_polynomial(rng, 2, int(rng.integers(1, 3)))
        sup = sup_on_torus(h)
        if sup < 1e-6:
            continue
        h = h * (0.9 / sup)
        gen = Polynomial(3, {(0, 0, 1): 1.0}) - Polynomial(
            3, {(a, b, 0): c for (a, b), c in h.coeffs.items()}
        )
        rep = retract_check((gen,))
        assert rep.verdict == "retract_graph"
        swapped = Polynomial(
            3, {(e[1], e[0], e[2]): c for e, c in gen.coeffs.items()}
        )
        rep_swapped = retract_check((swapped,))
        assert rep_swapped.verdict == rep.verdict
        done += 1
    print("acceptance 10 pass: 10 contractive graphs, permutation invariant")
