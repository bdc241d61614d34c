import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracsolve.femcore import (
    UniformMesh1D,
    assemble_mass,
    assemble_stiffness,
    interpolate,
    l2_error,
    l2_project,
    load_vector,
    mass_apply,
    normalization_constant,
    solve_mass,
    stiffness_row,
)
from fracsolve.harness import fit_rate
from fracsolve.manufactured import ManufacturedCase
from fracsolve.specfun import gamma_fn

from oracles import hat, stiffness_by_quadrature


class TestMesh:
    def test_geometry(self):
        mesh = UniformMesh1D(4)
        assert mesh.h == 0.5
        np.testing.assert_array_equal(mesh.nodes, [-1.0, -0.5, 0.0, 0.5, 1.0])
        np.testing.assert_array_equal(mesh.interior, [-0.5, 0.0, 0.5])
        assert mesh.dof == 3

    @pytest.mark.parametrize("m,a,b", [(1, -1, 1), (4, 1, 1), (4, 2, 1)])
    def test_invalid(self, m, a, b):
        with pytest.raises(ValueError):
            UniformMesh1D(m, a, b)


class TestNormalization:
    def test_half(self):
        assert normalization_constant(1, 0.5) == pytest.approx(1 / math.pi, rel=1e-14)

    def test_three_quarters(self):
        import mpmath

        with mpmath.workdps(30):
            ref = 2**1.5 * 0.75 * mpmath.gamma(1.25) / (mpmath.sqrt(mpmath.pi) * mpmath.gamma(0.25))
        assert normalization_constant(1, 0.75) == pytest.approx(float(ref), rel=1e-14)

    def test_small_s_vanishes(self):
        assert normalization_constant(1, 1e-9) < 1e-8

    @pytest.mark.parametrize("s", [0.0, 1.0, -0.2])
    def test_domain(self, s):
        with pytest.raises(ValueError):
            normalization_constant(1, s)


class TestMass:
    def test_m4(self):
        M = assemble_mass(UniformMesh1D(4))
        expected = np.array([[1 / 3, 1 / 12, 0], [1 / 12, 1 / 3, 1 / 12], [0, 1 / 12, 1 / 3]])
        np.testing.assert_allclose(M, expected, rtol=1e-15)

    def test_m2(self):
        M = assemble_mass(UniformMesh1D(2))
        assert M.shape == (1, 1) and M[0, 0] == pytest.approx(2 / 3)

    def test_interior_row_sums(self):
        mesh = UniformMesh1D(10)
        np.testing.assert_allclose(assemble_mass(mesh).sum(axis=1)[1:-1], mesh.h, rtol=1e-14)

    def test_apply_and_solve(self):
        mesh = UniformMesh1D(9)
        v = np.random.default_rng(0).standard_normal(mesh.dof)
        np.testing.assert_allclose(mass_apply(mesh, v), assemble_mass(mesh) @ v, rtol=1e-14)
        np.testing.assert_allclose(solve_mass(mesh, mass_apply(mesh, v)), v, rtol=1e-12)


class TestStiffness:
    def test_closed_form_m2_half(self):
        # single hat on (-1, 1) with h = 1: K = 4 log 2 / pi
        K = assemble_stiffness(UniformMesh1D(2), 0.5)
        assert K[0, 0] == pytest.approx(4 * math.log(2) / math.pi, rel=1e-14)

    def test_m2_half_against_quadrature(self):
        mesh = UniformMesh1D(2)
        ref = stiffness_by_quadrature(mesh, 0.5, tol=1e-11)
        assert assemble_stiffness(mesh, 0.5)[0, 0] == pytest.approx(ref[0, 0], rel=1e-8)

    @pytest.mark.parametrize("s", [0.1, 0.25, 0.5, 0.75, 0.9])
    def test_symmetric_positive_definite(self, s):
        K = assemble_stiffness(UniformMesh1D(33), s)
        assert np.array_equal(K, K.T)
        x = np.random.default_rng(1).standard_normal((100, K.shape[0]))
        assert np.all(np.einsum("ij,jk,ik->i", x, K, x) > 0)
        assert np.linalg.eigvalsh(K).min() > 0

    def test_toeplitz(self):
        K = assemble_stiffness(UniformMesh1D(16), 0.5)
        assert K[3, 7] == K[2, 6] == K[0, 4]
        row = stiffness_row(UniformMesh1D(16), 0.5)
        for i in range(K.shape[0]):
            np.testing.assert_array_equal(K[i, i:], row[: K.shape[0] - i])

    @pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
    def test_scaling(self, s):
        rho = 0.37
        base = UniformMesh1D(12)
        scaled = UniformMesh1D(12, -rho, rho)
        np.testing.assert_allclose(stiffness_row(scaled, s), rho ** (1 - 2 * s) * stiffness_row(base, s), rtol=1e-8)

    def test_far_entries_extended_precision(self):
        # far-offset entries must not suffer from cancellation in the fourth difference
        import mpmath

        s, m = 0.25, 1024
        row = stiffness_row(UniformMesh1D(m), s)
        with mpmath.workdps(40):
            S = mpmath.mpf(s)
            F = lambda r: abs(mpmath.mpf(r)) ** (3 - 2 * S) / ((2 - 2 * S) * (3 - 2 * S))  # noqa: E731
            c = mpmath.gamma(S - 0.5) / (mpmath.sqrt(mpmath.pi) * 2 ** (2 - 2 * S) * mpmath.gamma(1 - S))
            h = mpmath.mpf(2) / m
            for ell in (7, 100, 1000):
                d4 = F(ell + 2) - 4 * F(ell + 1) + 6 * F(ell) - 4 * F(ell - 1) + F(ell - 2)
                ref = float(-c * h ** (1 - 2 * S) * d4)
                assert row[ell] == pytest.approx(ref, rel=1e-11)

    @pytest.mark.parametrize("s", [0.0, 1.0])
    def test_range(self, s):
        with pytest.raises(ValueError):
            assemble_stiffness(UniformMesh1D(4), s)


class TestProjection:
    def test_zero(self):
        np.testing.assert_array_equal(l2_project(lambda x: 0.0 * x, UniformMesh1D(6)), np.zeros(5))

    def test_hat(self):
        mesh = UniformMesh1D(8)
        np.testing.assert_allclose(l2_project(lambda x: hat(mesh, 3, x), mesh), np.eye(7)[2], atol=1e-14)

    def test_linear_example(self):
        # x is nonzero at the ends, so P_h x is not its interpolant: the load is
        # (-1/4, 0, 1/4) and M c = load gives c = (-3/4, 0, 3/4)
        c = l2_project(lambda x: x, UniformMesh1D(4))
        np.testing.assert_allclose(c, [-0.75, 0.0, 0.75], atol=1e-15)
        # a member of X_h with the same nodal values is reproduced exactly
        tent = lambda x: np.interp(x, [-1, -0.5, 0, 0.5, 1], [0, -0.5, 0, 0.5, 0])  # noqa: E731
        np.testing.assert_allclose(l2_project(tent, UniformMesh1D(4)), [-0.5, 0.0, 0.5], atol=1e-15)

    def test_load_vector_constant(self):
        mesh = UniformMesh1D(5)
        np.testing.assert_allclose(load_vector(lambda x: np.ones_like(x), mesh), mesh.h, rtol=1e-14)

    def test_low_order_rejected(self):
        with pytest.raises(ValueError):
            load_vector(np.sin, UniformMesh1D(4), quad_order=1)


class TestInterpolate:
    def test_nodes_endpoints_midpoints(self):
        mesh = UniformMesh1D(4)
        c = np.array([1.0, -2.0, 3.0])
        np.testing.assert_allclose(interpolate(c, mesh, mesh.interior), c)
        assert interpolate(c, mesh, -1.0) == 0.0 and interpolate(c, mesh, 1.0) == 0.0
        assert interpolate(c, mesh, -0.25) == pytest.approx(-0.5)
        assert interpolate(c, mesh, 3.0) == 0.0


class TestL2Error:
    def test_member_of_space(self):
        mesh = UniformMesh1D(8)
        f = lambda x: hat(mesh, 2, x) - 0.5 * hat(mesh, 5, x)  # noqa: E731
        assert l2_error(l2_project(f, mesh), f, mesh) <= 1e-12

    def test_weight_half(self):
        mesh = UniformMesh1D(16)
        got = l2_error(np.zeros(15), lambda x: np.sqrt(np.maximum(1 - x * x, 0.0)), mesh)
        assert got == pytest.approx(math.sqrt(4 / 3), rel=1e-10)

    def test_manufactured_profile(self):
        import mpmath

        case = ManufacturedCase("a", 0.5, 0.75)
        with mpmath.workdps(30):
            g = lambda x: 12.1875 * x**3 - 5.625 * x  # noqa: E731
            ref = float(mpmath.sqrt(mpmath.quad(lambda x: (1 - x * x) ** 1.5 * g(x) ** 2, [-1, 0, 1])))
        got = l2_error(np.zeros(31), case.profile, UniformMesh1D(32))
        assert got == pytest.approx(ref, rel=1e-10)


@given(st.integers(4, 40), st.floats(0.05, 0.95))
def test_kernel_positive_quadratic_form(m, s):
    K = assemble_stiffness(UniformMesh1D(m), s)
    v = np.linspace(-1, 1, m - 1) ** 2 + 0.1
    assert v @ K @ v > 0


class TestSteadyProblem:
    def test_linear_solver_consistency(self):
        case = ManufacturedCase("a", 0.5, 0.75)
        mesh = UniformMesh1D(128)
        K = assemble_stiffness(mesh, 0.75)
        b = load_vector(lambda x: case.mu * case.g(x), mesh)
        c = np.linalg.solve(K, b)
        assert np.linalg.norm(K @ c - b) <= 1e-10 * np.linalg.norm(b)

    @pytest.mark.parametrize("s,floor", [(0.75, 0.75 + 0.5 - 0.1), (0.25, 0.25 + 0.25 - 0.1)])
    def test_convergence_order(self, s, floor):
        case = ManufacturedCase("a", 0.5, s)
        ms = [32, 64, 128, 256, 512]
        errs = []
        for m in ms:
            mesh = UniformMesh1D(m)
            c = np.linalg.solve(assemble_stiffness(mesh, s), load_vector(lambda x: case.mu * case.g(x), mesh))
            errs.append(l2_error(c, case.profile, mesh))
        assert fit_rate([2 / m for m in ms], errs) >= floor


def test_gamma_reexport_consistency():
    # C(1, s) written with gamma_fn agrees with math.gamma
    s = 0.3
    ref = 4**s * s * math.gamma(s + 0.5) / (math.sqrt(math.pi) * math.gamma(1 - s))
    assert normalization_constant(1, s) == pytest.approx(ref, rel=1e-14)
    assert gamma_fn(s + 0.5) == pytest.approx(math.gamma(s + 0.5), rel=1e-14)
