"""Bethe equation residuals, Newton refinement, canonical form, sum rule."""

import numpy as np
import pytest

from xyzbethe.baesolver import (
    REGULAR,
    SINGULAR,
    BetheSolution,
    SolverConfig,
    _deduplicate,
    _root_set_distance,
    bae_residual,
    canonicalize,
    energy,
    newton_solve,
    singular_solve,
    sum_rule,
)
from xyzbethe.elliptic import ell
from xyzbethe.errors import PoleProximity
from xyzbethe.lattice import ModelParams

TAU = 0.6j
ETA = np.pi / 10
CONFIG = SolverConfig()


@pytest.fixture(scope="module")
def params():
    return ModelParams(N=4, tau=TAU, eta=ETA)


@pytest.fixture(scope="module")
def params_n2():
    return ModelParams(N=2, tau=TAU, eta=ETA)


class TestAnalyticN2:
    def test_four_half_period_solutions(self, params_n2, n2_hermitian):
        _, solutions, _ = n2_hermitian
        assert len(solutions) == 4
        expected = [(np.array([0.0 + 0.0j]), 0),
                    (np.array([0.5 + 0.0j]), 0),
                    (np.array([TAU / 2]), 1),
                    (np.array([0.5 + TAU / 2]), 1)]
        for roots, beta in expected:
            ref = canonicalize(
                BetheSolution(roots=roots, beta=beta, sum_ints=(0, beta),
                              residual_norm=0.0), params_n2)
            hits = [s for s in solutions
                    if s.beta == ref.beta
                    and _root_set_distance(s.roots, ref.roots, TAU) < 1e-10]
            assert len(hits) == 1

    def test_half_periods_are_exact_roots(self, params_n2):
        for seed, beta in [([0.0], 0), ([0.5], 0)]:
            res = bae_residual(np.array(seed, dtype=complex), beta, params_n2)
            assert np.max(np.abs(res)) < 1e-12


class TestResidualAndNewton:
    def test_newton_refines_perturbed_solution(self, params, n4_hermitian):
        _, solutions, _ = n4_hermitian
        sol = solutions[0]
        noisy = sol.roots + 1e-3 * np.array([1 + 1j, -1 + 0.5j])[:len(sol.roots)]
        refined = newton_solve(noisy, sol.beta, params)
        assert _root_set_distance(refined.roots, sol.roots, TAU) < 1e-9

    def test_singular_pair_is_a_pole(self, params):
        roots = np.array([ETA / 2, -ETA / 2])
        with pytest.raises(PoleProximity):
            bae_residual(roots, 0, params)

    def test_product_form_consistency(self, n4_hermitian):
        """The log-form zero must also satisfy the product-form equations."""
        params, solutions, _ = n4_hermitian
        ctx = params.ctx
        eta, gamma = params.eta, params.gamma
        for sol in solutions:
            if sol.kind != REGULAR:
                continue
            lam = sol.roots
            for j, lj in enumerate(lam):
                lhs = np.exp(2 * sol.beta * gamma)
                lhs *= (ell(1, lj + eta / 2, ctx)
                        / ell(1, lj - eta / 2, ctx)) ** params.N
                for k, lk in enumerate(lam):
                    if k == j:
                        continue
                    lhs *= (ell(1, lj - lk - eta, ctx)
                            / ell(1, lj - lk + eta, ctx))
                assert abs(lhs - 1.0) < 1e-8


class TestSumRule:
    def test_defect_vanishes_on_solutions(self, n4_hermitian):
        params, solutions, _ = n4_hermitian
        for sol in solutions:
            roots = sol.nu_roots if sol.kind == SINGULAR else sol.roots
            defect, _, p = sum_rule(roots, sol.beta, params)
            assert defect < 1e-8
            assert p == sol.beta

    def test_defect_detects_wrong_beta(self, n4_hermitian):
        params, solutions, _ = n4_hermitian
        sol = next(s for s in solutions if s.kind == REGULAR)
        defect, _, _ = sum_rule(sol.roots, sol.beta, params)
        bad, _, _ = sum_rule(sol.roots + 0.07, sol.beta, params)
        assert bad > 1e-3 > defect


class TestCanonicalization:
    def test_idempotent(self, n4_hermitian):
        params, solutions, _ = n4_hermitian
        for sol in solutions:
            once = canonicalize(sol, params)
            twice = canonicalize(once, params)
            np.testing.assert_allclose(once.roots, twice.roots, atol=1e-12)
            assert once.beta == twice.beta

    def test_lattice_shift_invariance(self, params, n4_hermitian):
        _, solutions, _ = n4_hermitian
        sol = next(s for s in solutions if s.kind == REGULAR)
        shifted = BetheSolution(
            roots=sol.roots + np.array([1.0, TAU])[:len(sol.roots)],
            beta=sol.beta + 2, sum_ints=sol.sum_ints,
            residual_norm=sol.residual_norm, energy=sol.energy)
        back = canonicalize(shifted, params)
        assert back.beta == sol.beta
        assert _root_set_distance(back.roots, sol.roots, TAU) < 1e-10

    def test_energy_invariant_under_shift(self, params, n4_hermitian):
        _, solutions, _ = n4_hermitian
        sol = next(s for s in solutions if s.kind == REGULAR)
        e_shifted = energy(sol.roots + 1.0, params)
        assert abs(e_shifted - sol.energy) < 1e-9


class TestDeduplication:
    def test_exact_duplicates_collapse(self, params, n4_hermitian):
        _, solutions, _ = n4_hermitian
        doubled = list(solutions) + list(solutions)
        kept = _deduplicate(doubled, params, 1e-7)
        assert len(kept) == len(solutions)

    def test_root_set_distance_permutation_invariant(self):
        a = np.array([0.1 + 0.2j, 0.4 - 0.1j])
        assert _root_set_distance(a, a[::-1], TAU) < 1e-15
        assert _root_set_distance(a, a + 1.0, TAU) < 1e-15
        assert _root_set_distance(a, a + 0.3, TAU) > 0.1


class TestSymmetryClosure:
    def test_negated_roots_solve_with_negated_beta(self, n4_hermitian):
        params, solutions, _ = n4_hermitian
        for sol in solutions:
            if sol.kind != REGULAR:
                continue
            res = bae_residual(-sol.roots, -sol.beta, params)
            assert np.max(np.abs(res)) < 1e-9

    def test_conjugate_closure_in_hermitian_regime(self, n4_hermitian):
        params, solutions, _ = n4_hermitian
        regular = [s for s in solutions if s.kind == REGULAR]
        for sol in regular:
            image = canonicalize(
                BetheSolution(roots=np.conj(sol.roots), beta=-sol.beta,
                              sum_ints=(0, 0), residual_norm=0.0), params)
            partners = [t for t in regular
                        if t.beta == image.beta
                        and _root_set_distance(image.roots, t.roots,
                                               TAU) < 1e-7]
            assert partners, f"conjugate image of beta={sol.beta} missing"


class TestSingularSolve:
    def test_pair_plus_reduced_roots_structure(self, n6_hermitian):
        params, solutions, _ = n6_hermitian
        singular = [s for s in solutions if s.kind == SINGULAR]
        for sol in singular:
            np.testing.assert_allclose(sol.roots[:2],
                                       [params.eta / 2, -params.eta / 2],
                                       atol=1e-12)
            assert len(sol.nu_roots) == params.M - 2

    def test_n2_has_no_singular_solutions(self, params_n2):
        assert singular_solve(params_n2, CONFIG) == []
