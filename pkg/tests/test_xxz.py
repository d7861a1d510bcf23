"""Trigonometric limit: reduced equations, phantom strings, continuation."""

import cmath
import copy

import numpy as np
import pytest

from xyzbethe.baesolver import SolverConfig
from xyzbethe.errors import DegenerateGamma
from xyzbethe.lattice import ModelParams, r_matrix
from xyzbethe.xxz import (
    MINUS_INFINITY,
    PLUS_INFINITY,
    XXZParams,
    asymptotic_beta_check,
    homotopy_correspondence,
    lambda_xxz_tq,
    phantom_string,
    xxz_bae_residual,
    xxz_energy,
    xxz_exact_spectrum,
    xxz_r_matrix,
    xxz_solve,
)

GAMMA = 1j * np.pi ** 2 / 10
CONFIG = SolverConfig(n_starts=120)


@pytest.fixture(scope="module")
def n4_xxz():
    params = XXZParams(N=4, gamma=GAMMA)
    return params, xxz_solve(params, CONFIG)


class TestRMatrix:
    def test_permutation_structure_at_zero(self):
        r0 = xxz_r_matrix(0.0, GAMMA)
        perm = np.array([[1, 0, 0, 0], [0, 0, 1, 0],
                         [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
        np.testing.assert_allclose(r0, perm, atol=1e-14)

    def test_yang_baxter(self):
        rng = np.random.default_rng(5)

        def lift(r, spaces):
            r4 = r.reshape(2, 2, 2, 2)
            a, b = spaces
            c = next(k for k in (0, 1, 2) if k not in spaces)
            out = np.zeros((2,) * 6, dtype=complex)
            for ii in np.ndindex(2, 2, 2):
                for jj in np.ndindex(2, 2, 2):
                    if ii[c] == jj[c]:
                        out[ii + jj] = r4[ii[a], ii[b], jj[a], jj[b]]
            return out.reshape(8, 8)

        for _ in range(20):
            u = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            v = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            r12 = lift(xxz_r_matrix(u - v, GAMMA), (0, 1))
            r13 = lift(xxz_r_matrix(u, GAMMA), (0, 2))
            r23 = lift(xxz_r_matrix(v, GAMMA), (1, 2))
            assert np.max(np.abs(r12 @ r13 @ r23 - r23 @ r13 @ r12)) < 1e-12

    def test_elliptic_limit_approaches_trigonometric(self):
        """Large Im tau: the elliptic entries converge to sinh ratios."""
        eta = np.pi / 10
        params = ModelParams(N=2, tau=6j, eta=eta)
        gamma = 1j * np.pi * eta
        for u in (0.07, 0.19 + 0.02j, -0.11):
            r_ell = r_matrix(u, params)
            r_trig = xxz_r_matrix(1j * np.pi * u, gamma)
            assert np.max(np.abs(r_ell - r_trig)) < 1e-6

    def test_degenerate_gamma_rejected(self):
        with pytest.raises(DegenerateGamma):
            xxz_r_matrix(0.1, 0.0)
        with pytest.raises(DegenerateGamma):
            XXZParams(N=4, gamma=1j * np.pi)


class TestResidualsAndEnergy:
    def test_solver_roots_satisfy_equations(self, n4_xxz):
        params, solutions = n4_xxz
        checked = 0
        for s in solutions:
            if s.kind != "regular" or s.phantom_count or not len(s.regular_roots):
                continue
            res = xxz_bae_residual(s.regular_roots, s.beta, params)
            assert np.max(np.abs(res)) < 1e-9
            checked += 1
        assert checked > 0

    def test_energy_additive_over_roots(self, n4_xxz):
        params, _ = n4_xxz
        u = np.array([0.3 + 0.1j, -0.2 + 0.05j])
        total = xxz_energy(u, params)
        parts = (xxz_energy(u[:1], params) + xxz_energy(u[1:], params)
                 - params.N * np.cosh(params.gamma))
        assert abs(total - parts) < 1e-12

    def test_singular_pair_is_a_pole(self, n4_xxz):
        from xyzbethe.errors import PoleProximity
        params, _ = n4_xxz
        with pytest.raises(PoleProximity):
            xxz_bae_residual(np.array([GAMMA / 2, -GAMMA / 2]), 0, params)


class TestSolve:
    def test_sixteen_solutions_match_oracle(self, n4_xxz):
        params, solutions = n4_xxz
        assert len(solutions) == 16
        spectrum = xxz_exact_spectrum(params, [0.17 - 0.05j])
        got = sorted((s.energy for s in solutions),
                     key=lambda z: (z.real, z.imag))
        ref = sorted((e.energy for e in spectrum),
                     key=lambda z: (z.real, z.imag))
        assert max(abs(a - b) for a, b in zip(got, ref)) < 1e-6

    def test_beta_phantom_relation(self, n4_xxz):
        _, solutions = n4_xxz
        for s in solutions:
            if s.phantom_side == PLUS_INFINITY:
                assert s.beta + s.phantom_count == 0
            elif s.phantom_side == MINUS_INFINITY:
                assert s.beta - s.phantom_count == 0
            else:
                assert s.beta == 0 and s.phantom_count == 0

    def test_full_phantom_energy(self, n4_xxz):
        params, solutions = n4_xxz
        full = [s for s in solutions if s.phantom_count == params.M]
        assert len(full) == 2
        for s in full:
            assert abs(s.energy - params.N * cmath.cosh(params.gamma)) < 1e-12

    def test_phantom_sides_degenerate(self, n4_xxz):
        _, solutions = n4_xxz
        plus = sorted(s.energy.real for s in solutions
                      if s.phantom_side == PLUS_INFINITY)
        minus = sorted(s.energy.real for s in solutions
                       if s.phantom_side == MINUS_INFINITY)
        np.testing.assert_allclose(plus, minus, atol=1e-9)

    def test_m_zero_sum_rule(self, n4_xxz):
        _, solutions = n4_xxz
        for s in solutions:
            if s.phantom_count == 0 and s.kind == "regular":
                total = 2.0 * complex(np.sum(s.regular_roots))
                assert abs(np.sinh(total)) < 1e-8

    def test_complex_gamma_spectrum(self):
        params = XXZParams(N=4, gamma=1j * np.pi * (1 / np.e + 1j * np.pi / 10))
        solutions = xxz_solve(params, CONFIG)
        assert len(solutions) == 16
        spectrum = xxz_exact_spectrum(params, [0.17 - 0.05j])
        got = sorted((s.energy for s in solutions),
                     key=lambda z: (z.real, z.imag))
        ref = sorted((e.energy for e in spectrum),
                     key=lambda z: (z.real, z.imag))
        assert max(abs(a - b) for a, b in zip(got, ref)) < 1e-6


class TestPhantomString:
    def test_equispaced_offsets(self):
        ps = phantom_string(2, MINUS_INFINITY)
        np.testing.assert_allclose([o.imag for o in ps.offsets],
                                   [np.pi / 2, np.pi])
        assert all("-inf" in lab for lab in ps.labels())

    def test_phase_shift(self):
        ps = phantom_string(3, PLUS_INFINITY, c=0.3)
        np.testing.assert_allclose(
            [o.imag for o in ps.offsets],
            [(np.pi * j + 0.3) / 3 for j in (1, 2, 3)])

    @pytest.mark.parametrize("m", range(2, 9))
    def test_telescoping_identity(self, m):
        rng = np.random.default_rng(100 + m)
        for _ in range(20):
            g = complex(rng.normal(), rng.normal())
            if abs(cmath.sinh(g)) < 1e-3:
                continue
            prod = np.prod([cmath.sinh(1j * np.pi * k / m - g)
                            / cmath.sinh(1j * np.pi * k / m + g)
                            for k in range(1, m)])
            assert abs(prod - 1.0) < 1e-12


class TestAsymptotics:
    def test_all_solutions_pass(self, n4_xxz):
        params, solutions = n4_xxz
        for s in solutions:
            assert asymptotic_beta_check(s, params)

    def test_wrong_beta_detected(self, n4_xxz):
        params, solutions = n4_xxz
        sol = copy.deepcopy(next(s for s in solutions
                                 if s.phantom_count == 1))
        sol.beta += 1
        assert not asymptotic_beta_check(sol, params)

    def test_eigenvalue_matches_oracle(self, n4_xxz):
        params, solutions = n4_xxz
        u0 = 0.17 - 0.05j
        spectrum = xxz_exact_spectrum(params, [u0])
        ref = sorted((complex(v) for e in spectrum
                      for _, v in e.lambda_samples),
                     key=lambda z: (z.real, z.imag))
        got = sorted((lambda_xxz_tq(u0, s, params) for s in solutions),
                     key=lambda z: (z.real, z.imag))
        assert max(abs(a - b) for a, b in zip(got, ref)) < 1e-9


class TestHomotopy:
    def test_n2_correspondence(self):
        params = ModelParams(N=2, tau=1.8j, eta=np.pi / 10)
        report = homotopy_correspondence(params, target_im_tau=12.0,
                                         config=SolverConfig(n_starts=40,
                                                             n_deflation_starts=30))
        assert len(report.entries) == 4
        assert report.all_paired
        paired = [e["xxz_index"] for e in report.entries]
        assert len(set(paired)) == 4
        assert report.warnings == []

    def test_trivial_path_is_identity(self):
        params = ModelParams(N=2, tau=12j, eta=np.pi / 10)
        report = homotopy_correspondence(params, target_im_tau=12.0,
                                         config=SolverConfig(n_starts=40,
                                                             n_deflation_starts=30))
        assert report.all_paired
        assert report.path_log == []

    def test_report_serializes(self):
        params = ModelParams(N=2, tau=6j, eta=np.pi / 10)
        report = homotopy_correspondence(params, target_im_tau=12.0,
                                         config=SolverConfig(n_starts=40,
                                                             n_deflation_starts=30))
        data = report.to_json()
        assert set(data) == {"entries", "warnings", "path_log"}
