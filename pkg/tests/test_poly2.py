import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    one_minus_z3w2,
    poly,
    random_poly,
    random_symmetric_poly,
    two_minus_z_minus_w,
    z3_minus_w2,
)
from dvkit.poly2 import (
    DegreeMismatchError,
    SymmetryKind,
    derived_dv_poly,
    derived_symmetric_poly,
    reflect,
    reflected_derivatives,
    swap_transform,
    symmetrize,
    symmetry_analysis,
    transpose_vars,
)

Z = poly({(1, 0): 1})
W = poly({(0, 1): 1})


@st.composite
def poly_strategy(draw, max_deg=4):
    n = draw(st.integers(0, max_deg))
    m = draw(st.integers(0, max_deg))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return random_poly(rng, n, m)


class TestEvaluate:
    def test_constant_term(self):
        assert one_minus_z3w2()(0, 0) == 1

    def test_point_on_variety(self):
        assert z3_minus_w2()(1, 1) == 0

    def test_boundary_zero(self):
        assert two_minus_z_minus_w()(1, 1) == 0

    def test_vectorized_matches_scalar(self):
        p = random_poly(np.random.default_rng(0), 3, 2)
        zs = np.array([0.3 + 0.2j, -1j, 2.0])
        ws = np.array([0.5, 0.1j, -0.7 + 0.2j])
        vals = p.evaluate(zs, ws)
        for k in range(3):
            assert abs(vals[k] - p.evaluate(zs[k], ws[k])) < 1e-12


class TestDerivatives:
    def test_power_rule_z(self):
        assert z3_minus_w2().partial_z().max_coeff_distance(poly({(2, 0): 3}, (2, 2))) == 0

    def test_power_rule_w(self):
        assert z3_minus_w2().partial_w().max_coeff_distance(poly({(0, 1): -2}, (3, 1))) == 0

    def test_power_rule_mixed(self):
        assert one_minus_z3w2().partial_z().max_coeff_distance(
            poly({(2, 2): -3}, (2, 2))
        ) == 0

    def test_degree_clamp_at_zero(self):
        p = poly({(0, 2): 1})
        dz = p.partial_z()
        assert dz.degree == (0, 2)
        assert dz.is_zero()

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(3)
        p = random_poly(rng, 4, 3)
        dz, dw = p.partial_z(), p.partial_w()
        h = 1e-5
        for _ in range(20):
            z = rng.uniform(-0.7, 0.7) + 1j * rng.uniform(-0.7, 0.7)
            w = rng.uniform(-0.7, 0.7) + 1j * rng.uniform(-0.7, 0.7)
            fd_z = (p(z + h, w) - p(z - h, w)) / (2 * h)
            fd_w = (p(z, w + h) - p(z, w - h)) / (2 * h)
            assert abs(fd_z - dz(z, w)) < 1e-7 * p.scale
            assert abs(fd_w - dw(z, w)) < 1e-7 * p.scale


class TestReflect:
    def test_two_minus_z_minus_w(self):
        got = reflect(two_minus_z_minus_w(), (1, 1))
        want = poly({(1, 1): 2, (0, 1): -1, (1, 0): -1})
        assert got.max_coeff_distance(want) == 0

    def test_one_minus_z3w2(self):
        got = reflect(one_minus_z3w2(), (3, 2))
        want = poly({(3, 2): 1, (0, 0): -1})
        assert got.max_coeff_distance(want) == 0

    def test_degree_mismatch_rejected(self):
        with pytest.raises(DegreeMismatchError):
            reflect(z3_minus_w2(), (2, 2))

    @given(poly_strategy())
    @settings(max_examples=40, deadline=None)
    def test_involution(self, p):
        d = p.degree
        assert reflect(reflect(p, d), d).max_coeff_distance(p) == 0

    @given(poly_strategy())
    @settings(max_examples=30, deadline=None)
    def test_modulus_symmetry_on_torus(self, p):
        rng = np.random.default_rng(11)
        theta = rng.uniform(0, 2 * np.pi, (2, 200))
        z, w = np.exp(1j * theta[0]), np.exp(1j * theta[1])
        q = reflect(p)
        diff = np.abs(np.abs(p.evaluate(z, w)) - np.abs(q.evaluate(z, w)))
        assert np.max(diff) <= 1e-12 * p.scale


class TestReflectedDerivatives:
    def test_one_minus_z3w2_closed_form(self):
        qz_ref, qw_ref = reflected_derivatives(one_minus_z3w2())
        assert qz_ref.max_coeff_distance(poly({(0, 0): -3}, (2, 2))) == 0
        assert qw_ref.max_coeff_distance(poly({(0, 0): -2}, (3, 1))) == 0

    def test_constant_gives_zero(self):
        qz_ref, qw_ref = reflected_derivatives(poly({(0, 0): 4}, (3, 2)))
        assert qz_ref.is_zero() and qw_ref.is_zero()

    @given(poly_strategy())
    @settings(max_examples=40, deadline=None)
    def test_reflection_derivative_identity(self, q):
        # z * d/dz reflect(q) + reflect(q_z) = n * reflect(q), coefficientwise
        n, m = q.degree
        qr = reflect(q)
        lhs = Z * qr.partial_z() + reflect(q.partial_z(), (max(n - 1, 0), m))
        assert lhs.max_coeff_distance(n * qr) <= 1e-12 * max(q.scale, 1.0) * n

    @given(poly_strategy())
    @settings(max_examples=40, deadline=None)
    def test_reflection_derivative_identity_w(self, q):
        n, m = q.degree
        qr = reflect(q)
        lhs = W * qr.partial_w() + reflect(q.partial_w(), (n, max(m - 1, 0)))
        assert lhs.max_coeff_distance(m * qr) <= 1e-12 * max(q.scale, 1.0) * m

    def test_symmetric_euler_identity(self):
        # z q_z + reflect(q_z) = n q for torus-symmetric q
        rng = np.random.default_rng(5)
        for _ in range(10):
            q = random_symmetric_poly(rng, 3, 4)
            n, m = q.degree
            lhs = Z * q.partial_z() + reflected_derivatives(q)[0]
            assert lhs.max_coeff_distance(n * q) <= 1e-12 * q.scale * n


class TestSymmetry:
    def test_one_minus_z3w2(self):
        res = symmetry_analysis(one_minus_z3w2())
        assert res.kind is SymmetryKind.ESSENTIALLY_T2_SYMMETRIC
        assert abs(res.constant + 1) < 1e-12
        assert abs(res.symmetrizing_factor - 1j) < 1e-12

    def test_z3_minus_w2(self):
        res = symmetry_analysis(z3_minus_w2())
        assert res.kind is SymmetryKind.ESSENTIALLY_T2_SYMMETRIC
        assert abs(res.constant + 1) < 1e-12

    def test_two_minus_z_minus_w_not_symmetric(self):
        assert symmetry_analysis(two_minus_z_minus_w()).kind is SymmetryKind.NOT_SYMMETRIC

    def test_symmetric_detected(self):
        q = random_symmetric_poly(np.random.default_rng(1), 2, 3)
        res = symmetry_analysis(q)
        assert res.kind is SymmetryKind.T2_SYMMETRIC
        assert abs(res.constant - 1) < 1e-9

    def test_symmetrize_examples(self):
        got = symmetrize(one_minus_z3w2())
        assert got.max_coeff_distance(poly({(0, 0): 1j, (3, 2): -1j})) < 1e-12
        got2 = symmetrize(z3_minus_w2())
        assert got2.max_coeff_distance(poly({(3, 0): 1j, (0, 2): -1j})) < 1e-12

    def test_symmetrize_fixes_symmetric_input(self):
        q = random_symmetric_poly(np.random.default_rng(2), 3, 2)
        assert symmetrize(q) is q

    def test_symmetrize_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            symmetrize(two_minus_z_minus_w())

    @given(poly_strategy(max_deg=3), st.floats(0, 2 * np.pi))
    @settings(max_examples=30, deadline=None)
    def test_symmetrized_phase_family_is_symmetric(self, p, phase):
        # any unimodular multiple of a symmetric polynomial symmetrizes back
        q = random_symmetric_poly(np.random.default_rng(p.coeffs.size), *p.degree)
        rotated = np.exp(1j * phase) * q
        res = symmetry_analysis(rotated)
        assert res.is_symmetric
        fixed = symmetrize(rotated)
        assert reflect(fixed).max_coeff_distance(fixed) <= 1e-9 * fixed.scale


class TestSwap:
    def test_z3_minus_w2(self):
        assert swap_transform(z3_minus_w2()).max_coeff_distance(one_minus_z3w2()) == 0

    def test_inverse_direction(self):
        assert swap_transform(one_minus_z3w2()).max_coeff_distance(z3_minus_w2()) == 0

    @given(poly_strategy())
    @settings(max_examples=40, deadline=None)
    def test_involution(self, p):
        n = p.degree[0]
        if np.max(np.abs(p.coeffs[n, :])) <= 1e-12 * p.scale:
            return
        assert swap_transform(swap_transform(p)).max_coeff_distance(p) == 0

    def test_degree_deficient_rejected(self):
        p = poly({(0, 1): 1}, (2, 1))
        with pytest.raises(DegreeMismatchError):
            swap_transform(p)

    def test_preserves_symmetry_class(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            q = random_symmetric_poly(rng, 3, 2)
            if np.max(np.abs(q.coeffs[3, :])) <= 1e-9 * q.scale:
                continue
            assert symmetry_analysis(swap_transform(q)).is_symmetric


class TestDerivedPolynomials:
    def test_dv_example(self):
        got = derived_dv_poly(z3_minus_w2())
        assert got.max_coeff_distance(poly({(3, 0): 6, (0, 2): 6}, (3, 2))) == 0

    def test_symmetric_example(self):
        got = derived_symmetric_poly(one_minus_z3w2())
        assert got.max_coeff_distance(poly({(0, 0): 6, (3, 2): 6}, (3, 2))) == 0

    def test_constant(self):
        q = poly({(0, 0): 2.5}, (3, 2))
        assert derived_symmetric_poly(q).max_coeff_distance(6 * 2.5 * q * (1 / 2.5)) < 1e-12
        assert derived_symmetric_poly(q)(0, 0) == 6 * 2.5


class TestModulusLemma:
    @staticmethod
    def residual(q, a, b, z, w):
        n, m = q.degree
        qz, qw = q.partial_z(), q.partial_w()
        qz_ref, qw_ref = reflected_derivatives(q)
        s = a * n + b * m
        qv = q.evaluate(z, w)
        dv = a * z * qz.evaluate(z, w) + b * w * qw.evaluate(z, w)
        rv = a * qz_ref.evaluate(z, w) + b * qw_ref.evaluate(z, w)
        lhs = s**2 * np.abs(qv) ** 2 - 2 * np.real(dv * s * np.conj(qv))
        rhs = np.abs(rv) ** 2 - np.abs(dv) ** 2
        scale = np.maximum(
            np.abs(lhs) + np.abs(rhs) + s**2 * np.abs(qv) ** 2 + np.abs(dv) ** 2, 1.0
        )
        return np.max(np.abs(lhs - rhs) / scale)

    def test_pointwise_identity(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            q = random_symmetric_poly(rng, rng.integers(1, 5), rng.integers(1, 5))
            a, b = rng.uniform(0, 3, 2)
            z = rng.uniform(-1.2, 1.2, 50) + 1j * rng.uniform(-1.2, 1.2, 50)
            w = rng.uniform(-1.2, 1.2, 50) + 1j * rng.uniform(-1.2, 1.2, 50)
            assert self.residual(q, a, b, z, w) <= 1e-9


class TestTranspose:
    def test_transpose_swaps_roles(self):
        p = random_poly(np.random.default_rng(4), 3, 2)
        t = transpose_vars(p)
        assert t.degree == (2, 3)
        assert abs(p.evaluate(0.3, -0.5j) - t.evaluate(-0.5j, 0.3)) < 1e-14
