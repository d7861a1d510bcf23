"""Eigenvalue evaluation from roots, entireness detector, spectrum matching."""

import copy

import numpy as np
import pytest

from xyzbethe.baesolver import REGULAR, SINGULAR
from xyzbethe.elliptic import ell, ell_prime
from xyzbethe.tqverify import entireness_check, lambda_tq, match_spectrum


class TestLambdaEvaluation:
    def test_second_term_vanishes_at_origin(self, n2_hermitian):
        """ell_1(0) = 0 kills the bare-site term; the value stays finite."""
        params, solutions, _ = n2_hermitian
        sol = next(s for s in solutions
                   if abs(s.roots[0]) < 1e-9 and s.beta == 0)
        val = lambda_tq(1e-9, sol, params)
        assert np.isfinite(val)
        ctx = params.ctx
        first_term = (ell(1, params.eta, ctx) / ell(1, params.eta, ctx)) ** 2
        # Q(-eta)/Q(0) at root 0 equals ell_1(-eta/2)/ell_1(eta/2) = -1
        assert abs(val - (-1.0) * first_term) < 1e-6

    def test_matches_oracle_eigenvalues(self, n4_hermitian):
        params, solutions, spectrum = n4_hermitian
        report = match_spectrum(solutions, spectrum, params, tol=1e-6)
        assert report.complete
        for _, _, e_gap, l_gap in report.pairs:
            assert e_gap < 1e-6
            assert l_gap < 1e-6

    def test_period_one_in_u(self, n4_hermitian):
        params, solutions, _ = n4_hermitian
        u = 0.217 - 0.09j
        for sol in solutions[:4]:
            gap = abs(lambda_tq(u + 1.0, sol, params) - lambda_tq(u, sol, params))
            assert gap < 1e-8

    def test_energy_from_logarithmic_derivative(self, n4_hermitian):
        params, solutions, _ = n4_hermitian
        ctx = params.ctx
        h = 1e-6
        for sol in solutions[:6]:
            l0 = lambda_tq(0.0, sol, params)
            deriv = (lambda_tq(h, sol, params)
                     - lambda_tq(-h, sol, params)) / (2 * h)
            e_tq = (2 * ell(1, params.eta, ctx) / ell_prime(0.0, ctx)
                    * deriv / l0
                    - params.N * ell_prime(params.eta, ctx)
                    / ell_prime(0.0, ctx))
            assert abs(e_tq - sol.energy) < 1e-6

    def test_singular_solutions_match_oracle(self, n6_hermitian):
        params, solutions, spectrum = n6_hermitian
        u0 = spectrum[0].lambda_samples[0][0]
        ref = sorted((complex(v) for e in spectrum
                      for u, v in e.lambda_samples[:1]),
                     key=lambda z: (z.real, z.imag))
        for sol in solutions:
            if sol.kind != SINGULAR:
                continue
            val = lambda_tq(complex(u0), sol, params)
            assert min(abs(val - r) for r in ref) < 1e-6


class TestEntireness:
    def test_converged_solutions_have_no_poles(self, n4_hermitian):
        params, solutions, _ = n4_hermitian
        for sol in solutions:
            assert entireness_check(sol, params) < 1e-6

    def test_detector_sensitivity(self, n4_hermitian):
        params, solutions, _ = n4_hermitian
        sol = next(s for s in solutions if s.kind == REGULAR)
        bad = copy.deepcopy(sol)
        bad.roots = bad.roots + np.array([1e-3] + [0.0] * (len(bad.roots) - 1))
        assert entireness_check(bad, params) > 1e-4


class TestMatching:
    def test_missing_solution_flags_incomplete(self, n4_hermitian):
        params, solutions, spectrum = n4_hermitian
        report = match_spectrum(solutions[1:], spectrum, params, tol=1e-6)
        assert not report.complete
        assert len(report.unmatched_spectrum) == 1
        assert report.unmatched_solutions == []

    def test_empty_inputs(self, n4_hermitian):
        params, solutions, spectrum = n4_hermitian
        report = match_spectrum([], spectrum, params)
        assert not report.complete
        assert len(report.unmatched_spectrum) == len(spectrum)

    def test_report_serializes(self, n4_hermitian):
        params, solutions, spectrum = n4_hermitian
        report = match_spectrum(solutions, spectrum, params, tol=1e-6)
        data = report.to_json()
        assert data["complete"] is True
        assert len(data["pairs"]) == len(spectrum)
        assert "COMPLETE" in report.summary()
