import numpy as np
import pytest

from conftest import (
    blaschke_dv,
    four_minus_z_minus_w,
    one_minus_z3w2,
    poly,
    two_minus_z_minus_w,
    w3_minus_z2,
    z3_minus_w2,
)
from dvkit.classify import (
    FiberError,
    QuadratureError,
    ZeroLabel,
    classify_zero_set,
    fiber_roots,
    is_squarefree,
    root_count_in_disk,
    torus_singularities,
)
from dvkit.poly2 import (
    derived_dv_poly,
    derived_symmetric_poly,
    reflected_derivatives,
    swap_transform,
    symmetrize,
)


class TestFiberRoots:
    def test_square_root_fiber(self):
        roots = sorted(fiber_roots(z3_minus_w2(), 0.25).real)
        assert np.allclose(roots, [-0.125, 0.125], atol=1e-12)

    def test_linear_fiber(self):
        roots = fiber_roots(poly({(0, 0): 4, (1, 0): -1, (0, 1): -1}), 0)
        assert len(roots) == 1 and abs(roots[0] - 4) < 1e-12

    def test_constant_fiber_has_no_roots(self):
        assert len(fiber_roots(one_minus_z3w2(), 0)) == 0

    def test_degenerate_fiber_raises(self):
        with pytest.raises(FiberError):
            fiber_roots(poly({(1, 0): 1, (1, 1): 1}), 0)  # z(1 + w) at z = 0

    def test_swap_exchanges_fibers(self):
        # roots of swap_transform(p)(z, .) equal roots of p(1/z, .)
        p = z3_minus_w2()
        q = swap_transform(p)
        rng = np.random.default_rng(1)
        for _ in range(10):
            z = rng.uniform(0.3, 1.5) * np.exp(2j * np.pi * rng.uniform())
            a = np.sort_complex(fiber_roots(q, z))
            b = np.sort_complex(fiber_roots(p, 1 / z))
            assert np.allclose(a, b, atol=1e-9)


class TestRootCount:
    def test_two_roots_inside(self):
        assert root_count_in_disk(z3_minus_w2(), 0.5) == 2

    def test_root_outside(self):
        assert root_count_in_disk(four_minus_z_minus_w(), 0.3) == 0

    def test_exterior_roots(self):
        assert root_count_in_disk(one_minus_z3w2(), 0.5) == 0

    def test_constant_over_disk(self):
        rng = np.random.default_rng(2)
        p = z3_minus_w2()
        counts = {
            root_count_in_disk(p, complex(0.9 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())))
            for _ in range(20)
        }
        assert counts == {2}

    def test_zero_on_circle_rejected(self):
        # 1 - zw has |w| = 1 root when |z| = 1
        with pytest.raises(FiberError):
            root_count_in_disk(poly({(0, 0): 1, (1, 1): -1}), np.exp(0.3j))

    def test_explicit_quad_points_unresolved(self):
        # fiber root just off the circle: 8 nodes give a non-integral value
        p = poly({(0, 0): 1.05, (0, 1): -1})
        with pytest.raises(QuadratureError):
            root_count_in_disk(p, 0.0, quad_points=8)


class TestClassification:
    def test_dv_example(self):
        assert classify_zero_set(z3_minus_w2()).label is ZeroLabel.DV_DEFINING

    def test_symmetric_nonvanishing(self):
        q = symmetrize(one_minus_z3w2())
        assert (
            classify_zero_set(q).label is ZeroLabel.SYMMETRIC_NONVANISHING_OFF_TORUS
        )

    def test_stable_closed(self):
        assert classify_zero_set(four_minus_z_minus_w()).label is ZeroLabel.STABLE_CLOSED

    def test_stable_open(self):
        assert classify_zero_set(two_minus_z_minus_w()).label is ZeroLabel.STABLE_OPEN

    def test_derived_dv(self):
        assert classify_zero_set(derived_dv_poly(z3_minus_w2())).label is ZeroLabel.DV_DEFINING

    def test_affirmative_labels_have_no_witnesses(self):
        zc = classify_zero_set(z3_minus_w2())
        assert zc.witnesses == ()

    def test_indeterminate_collects_witnesses(self):
        # zeros crossing both (D x T) and (D x D): (w - 1/2)(w - 2) = scaled
        p = poly({(0, 0): 1, (0, 1): -2.5, (0, 2): 1}, (1, 2)) + poly({(1, 0): 1e-3})
        zc = classify_zero_set(p, grid_n=32)
        assert zc.label is ZeroLabel.INDETERMINATE
        assert len(zc.witnesses) > 0

    def test_swap_duality_both_directions(self):
        for p in (z3_minus_w2(), w3_minus_z2(), blaschke_dv(2, [0.4, -0.2]), derived_dv_poly(z3_minus_w2())):
            assert classify_zero_set(p, grid_n=32).label is ZeroLabel.DV_DEFINING
            q = swap_transform(symmetrize(p))
            assert (
                classify_zero_set(q, grid_n=32).label
                is ZeroLabel.SYMMETRIC_NONVANISHING_OFF_TORUS
            )
            back = swap_transform(q)
            assert classify_zero_set(back, grid_n=32).label is ZeroLabel.DV_DEFINING

    def test_derived_symmetric_reclassifies_iterated(self):
        q = symmetrize(one_minus_z3w2())
        for _ in range(2):
            q = derived_symmetric_poly(q)
            q = symmetrize(q)
            assert (
                classify_zero_set(q, grid_n=32).label
                is ZeroLabel.SYMMETRIC_NONVANISHING_OFF_TORUS
            )


class TestTildeNoZeros:
    def test_reflected_derivatives_nonvanishing(self):
        # for symmetric q with no zeros off the torus, the reflected
        # derivatives and their positive combinations stay zero-free on the
        # closed bidisk away from their common zero set
        rng = np.random.default_rng(9)
        for p in (z3_minus_w2(), blaschke_dv(2, [0.3, 0.1j])):
            q = symmetrize(swap_transform(symmetrize(p)))
            qz_ref, qw_ref = reflected_derivatives(q)
            r = np.sqrt(np.linspace(0.01, 0.96, 40))
            ang = np.exp(2j * np.pi * np.arange(40) / 40)
            zg = (r[:, None] * ang[None, :]).ravel()
            vals_z = np.abs(qz_ref.evaluate(zg[:, None], zg[None, :]))
            vals_w = np.abs(qw_ref.evaluate(zg[:, None], zg[None, :]))
            assert np.min(vals_z) > 1e-7
            assert np.min(vals_w) > 1e-7
            a, b = rng.uniform(0.2, 2.0, 2)
            comb = np.abs(
                a * qz_ref.evaluate(zg[:, None], zg[None, :])
                + b * qw_ref.evaluate(zg[:, None], zg[None, :])
            )
            common = np.minimum(vals_z, vals_w)
            assert np.min(comb[common > 1e-6]) > 1e-7


class TestTorusSingularities:
    def test_smooth_example(self):
        assert torus_singularities(z3_minus_w2()).smooth_on_torus

    def test_linear_smooth(self):
        assert torus_singularities(poly({(1, 0): 1, (0, 1): -1})).smooth_on_torus

    def test_singular_curve_detected(self):
        zw1 = poly({(1, 1): 1, (0, 0): -1})
        report = torus_singularities(zw1 * zw1)
        assert not report.smooth_on_torus
        for z, w in report.points:
            assert abs(z * w - 1) < 1e-6

    def test_isolated_torus_singularity(self):
        p = z3_minus_w2() * poly({(1, 0): 1, (0, 1): -1})
        report = torus_singularities(p)
        assert not report.smooth_on_torus


class TestSquarefree:
    def test_squarefree_accepted(self):
        assert is_squarefree(z3_minus_w2())
        assert is_squarefree(poly({(0, 3): 1, (3, 0): -1}))

    def test_repeated_factor_rejected(self):
        zw1 = poly({(1, 1): 1, (0, 0): -1})
        assert not is_squarefree(zw1 * zw1)
        p = z3_minus_w2()
        assert not is_squarefree(p * p)
