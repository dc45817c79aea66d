"""Tests for one-variable Pick interpolation and the infinitesimal
l1 extremality test at the origin."""

import numpy as np
import pytest

from polydisklab import (
    BlaschkeProduct,
    CPDataOrigin,
    DiskPickData,
    infinitesimal_extremal_origin,
    is_extremal,
    minimal_norm,
    pick_matrix,
    schur_construct,
    solvable,
)
from polydisklab.errors import (
    ConditioningError,
    DegenerateDataError,
    DomainError,
    InfeasibleConstraintsError,
)


def random_disk(rng, n, rmax=0.9):
    r = rmax * np.sqrt(rng.random(n))
    th = 2 * np.pi * rng.random(n)
    return r * np.exp(1j * th)


class TestDiskPickData:
    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            DiskPickData(nodes=(0.0, 0.5), targets=(0.1,))

    def test_empty(self):
        with pytest.raises(DegenerateDataError):
            DiskPickData(nodes=(), targets=())

    def test_coincident_nodes(self):
        with pytest.raises(DegenerateDataError):
            DiskPickData(nodes=(0.3, 0.3), targets=(0.1, 0.2))

    def test_node_outside_disk(self):
        with pytest.raises(DomainError):
            DiskPickData(nodes=(1.0,), targets=(0.5,))

    def test_bad_derivative_index(self):
        with pytest.raises(DomainError):
            DiskPickData(nodes=(0.0,), targets=(0.0,),
                         derivative_constraints=((3, 0.1),))


class TestMinimalNorm:
    def test_two_point_closed_form(self):
        # {0 -> 0, lam -> w} has minimal norm |w| / |lam|.
        rng = np.random.default_rng(11)
        for _ in range(200):
            lam = random_disk(rng, 1)[0]
            if abs(lam) < 0.05:
                continue
            w = random_disk(rng, 1)[0]
            data = DiskPickData(nodes=(0.0, lam), targets=(0.0, w))
            assert minimal_norm(data) == pytest.approx(abs(w) / abs(lam), abs=1e-8)

    def test_known_value(self):
        data = DiskPickData(nodes=(0.0, 0.5), targets=(0.0, 0.25))
        assert minimal_norm(data) == pytest.approx(0.5, abs=1e-8)

    def test_single_node_constant(self):
        data = DiskPickData(nodes=(0.3 + 0.1j,), targets=(0.45j,))
        assert minimal_norm(data) == pytest.approx(0.45, abs=1e-9)

    def test_zero_data(self):
        data = DiskPickData(nodes=(0.0, 0.2, -0.4j), targets=(0.0, 0.0, 0.0))
        assert minimal_norm(data) == 0.0

    def test_solvable_monotone_in_t(self):
        rng = np.random.default_rng(5)
        nodes = random_disk(rng, 4, rmax=0.8)
        targets = random_disk(rng, 4)
        data = DiskPickData(nodes=tuple(nodes), targets=tuple(targets))
        t = minimal_norm(data)
        assert not solvable(data, max(t - 1e-3, 1e-6))
        assert solvable(data, t + 1e-3)

    def test_derivative_constraint_oracle(self):
        # f(z) = z^2 has sup norm 1; data {0 -> 0, 0.5 -> 0.25} plus
        # f'(0.5) = 1 pins the minimal norm at 1.
        data = DiskPickData(nodes=(0.0, 0.5), targets=(0.0, 0.25),
                            derivative_constraints=((1, 1.0),))
        assert minimal_norm(data) == pytest.approx(1.0, abs=1e-6)

    def test_adding_constraint_never_decreases(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            nodes = random_disk(rng, 3, rmax=0.7)
            targets = random_disk(rng, 3, rmax=0.8)
            base = DiskPickData(nodes=tuple(nodes), targets=tuple(targets))
            dval = complex(rng.standard_normal() + 1j * rng.standard_normal())
            more = DiskPickData(nodes=tuple(nodes), targets=tuple(targets),
                                derivative_constraints=((0, dval),))
            assert minimal_norm(more) >= minimal_norm(base) - 1e-8

    def test_invalid_level(self):
        data = DiskPickData(nodes=(0.0,), targets=(0.5,))
        with pytest.raises(DomainError):
            solvable(data, 0.0)


class TestSchurConstruct:
    def test_identity_map(self):
        data = DiskPickData(nodes=(0.0, 0.5), targets=(0.0, 0.5))
        b = schur_construct(data)
        assert b.degree == 1
        assert b.zeros[0] == pytest.approx(0.0, abs=1e-9)
        assert abs(b(0.3) - 0.3) < 1e-8

    def test_single_node_constant(self):
        b = schur_construct(DiskPickData(nodes=(0.0,), targets=(0.3,)))
        assert b.degree == 0
        assert b.scale == pytest.approx(0.3, abs=1e-9)
        assert abs(b(0.7j) - 0.3) < 1e-9

    def test_blaschke_round_trip(self):
        # Sample a random Blaschke product of degree <= 4 at degree + 1
        # nodes, reconstruct, and compare at fresh points.
        rng = np.random.default_rng(31)
        for _ in range(25):
            deg = int(rng.integers(1, 5))
            zeros = random_disk(rng, deg, rmax=0.8)
            c = np.exp(2j * np.pi * rng.random())
            ref = BlaschkeProduct(zeros=tuple(zeros), unimodular_constant=c)
            nodes = random_disk(rng, deg + 1, rmax=0.75)
            # keep nodes separated so the reduction stays well conditioned
            if min(abs(nodes[i] - nodes[j])
                   for i in range(len(nodes))
                   for j in range(i + 1, len(nodes))) < 0.05:
                continue
            data = DiskPickData(nodes=tuple(nodes),
                                targets=tuple(ref(z) for z in nodes))
            got = schur_construct(data)
            fresh = random_disk(rng, 100, rmax=0.9)
            err = max(abs(got(z) - ref(z)) for z in fresh)
            assert err < 1e-7

    def test_degree_two_extremal_round_trip(self):
        ref = BlaschkeProduct(zeros=(0.2, -0.4j), unimodular_constant=1.0)
        nodes = (0.0, 0.5, -0.3 + 0.2j)
        data = DiskPickData(nodes=nodes, targets=tuple(ref(z) for z in nodes))
        got = schur_construct(data)
        assert got.degree == 2
        resid = max(abs(got(z) - w) for z, w in zip(data.nodes, data.targets))
        assert resid < 1e-8

    def test_rejects_derivative_data(self):
        data = DiskPickData(nodes=(0.0, 0.5), targets=(0.0, 0.25),
                            derivative_constraints=((1, 1.0),))
        with pytest.raises(DomainError):
            schur_construct(data)

    def test_zero_data_degenerate(self):
        data = DiskPickData(nodes=(0.0, 0.5), targets=(0.0, 0.0))
        with pytest.raises(DegenerateDataError):
            schur_construct(data)


class TestIsExtremal:
    def test_identity_data_extremal(self):
        assert is_extremal(DiskPickData(nodes=(0.0, 0.5), targets=(0.0, 0.5)))

    def test_strictly_solvable_not_extremal(self):
        assert not is_extremal(
            DiskPickData(nodes=(0.0, 0.5), targets=(0.0, 0.25))
        )

    def test_blaschke_samples_extremal(self):
        ref = BlaschkeProduct(zeros=(0.3,), unimodular_constant=1.0)
        nodes = (0.0, 0.5, -0.2j)
        data = DiskPickData(nodes=nodes, targets=tuple(ref(z) for z in nodes))
        assert is_extremal(data)
        assert minimal_norm(data) == pytest.approx(1.0, abs=1e-8)
        assert schur_construct(data).degree <= np.linalg.matrix_rank(
            pick_matrix(data), tol=1e-8
        )


class TestInfinitesimalExtremal:
    def test_single_axis_direction(self):
        cp = CPDataOrigin(vectors=((1.0, 0.0, 0.0),), targets=(1.0,))
        m, ext, wit = infinitesimal_extremal_origin(cp)
        assert m == pytest.approx(1.0, abs=1e-9)
        assert ext
        assert np.allclose(wit, (1.0, 0.0, 0.0), atol=1e-9)

    def test_split_direction(self):
        # minimize |c1| + |c2| with c1 + c2 = 1: the triangle inequality
        # forces the minimum to be exactly 1.
        cp = CPDataOrigin(vectors=((1.0, 1.0),), targets=(1.0,))
        m, ext, wit = infinitesimal_extremal_origin(cp)
        assert m == pytest.approx(1.0, abs=1e-9)
        assert ext
        assert np.dot(np.array(wit), np.ones(2)) == pytest.approx(1.0, abs=1e-9)

    def test_two_constraint_extremal_family(self):
        # v1 = (1, a), v2 = (b, 1) with targets alpha + beta a and
        # alpha b + beta: the minimizer is (alpha, beta), so the norm is
        # |alpha| + |beta| = 1 exactly.
        rng = np.random.default_rng(17)
        for _ in range(10):
            a = random_disk(rng, 1, rmax=0.6)[0]
            b = random_disk(rng, 1, rmax=0.6)[0]
            s = rng.random()
            alpha = s * np.exp(2j * np.pi * rng.random())
            beta = (1 - s) * np.exp(2j * np.pi * rng.random())
            cp = CPDataOrigin(vectors=((1.0, a), (b, 1.0)),
                              targets=(alpha + beta * a, alpha * b + beta))
            m, ext, wit = infinitesimal_extremal_origin(cp)
            assert m == pytest.approx(1.0, abs=1e-7)
            assert ext
            assert np.allclose(wit, (alpha, beta), atol=1e-6)

    def test_single_row_closed_form(self):
        # With one constraint v . c = u the minimum is |u| / max|v_k|.
        rng = np.random.default_rng(7)
        for _ in range(20):
            v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            u = rng.standard_normal() + 1j * rng.standard_normal()
            cp = CPDataOrigin(vectors=(tuple(v),), targets=(complex(u),))
            m, _, wit = infinitesimal_extremal_origin(cp)
            oracle = abs(u) / np.max(np.abs(v))
            assert m == pytest.approx(oracle, rel=5e-3)
            assert abs(np.dot(np.array(wit), v) - u) < 1e-9

    def test_unimodular_rescaling_invariance(self):
        rng = np.random.default_rng(41)
        vecs = tuple(tuple(random_disk(rng, 3)) for _ in range(2))
        targs = tuple(random_disk(rng, 2))
        m0, _, _ = infinitesimal_extremal_origin(
            CPDataOrigin(vectors=vecs, targets=targs)
        )
        for _ in range(5):
            om = np.exp(2j * np.pi * rng.random())
            m1, _, _ = infinitesimal_extremal_origin(
                CPDataOrigin(vectors=vecs, targets=tuple(om * u for u in targs))
            )
            assert abs(m1 - m0) < 1e-10

    def test_infeasible_system(self):
        cp = CPDataOrigin(vectors=((1.0, 0.0), (1.0, 0.0)),
                          targets=(1.0, 2.0))
        with pytest.raises(InfeasibleConstraintsError):
            infinitesimal_extremal_origin(cp)

    def test_validation(self):
        with pytest.raises(DegenerateDataError):
            CPDataOrigin(vectors=(), targets=())
        with pytest.raises(DomainError):
            CPDataOrigin(vectors=((1.0, 0.0), (1.0,)), targets=(0.1, 0.2))
