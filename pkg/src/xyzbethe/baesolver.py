"""Numerical solver for the elliptic Bethe ansatz equations.

The equations are treated in logarithmic form: each residual is the log of
the left-hand side of the product-form equation, reduced mod 2*pi*i so the
target is exactly zero.  The integer exponent beta is scanned over a finite
window rather than solved for, and candidate solutions are kept only when
the lattice sum rule holds with p = beta.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .elliptic import ell, ell_prime
from .errors import JacobianSingular, MaxIters, PoleProximity
from .lattice import ModelParams

__all__ = [
    "SolverConfig",
    "BetheSolution",
    "bae_residual",
    "singular_bae_residual",
    "sum_rule",
    "newton_solve",
    "multi_start_solve",
    "singular_solve",
    "energy",
    "energy_singular",
    "canonicalize",
]

log = logging.getLogger(__name__)

REGULAR = "regular"
SINGULAR = "singular"


@dataclass(frozen=True)
class SolverConfig:
    newton_tol: float = 1e-11
    max_newton_iters: int = 80
    n_starts: int = 160
    n_deflation_starts: int = 200
    beta_range: int | None = None  # defaults to M
    dedup_tol: float = 1e-7
    sum_rule_tol: float = 1e-8
    pole_tol: float = 1e-8
    rng_seed: int = 7

    def resolved_beta_range(self, m: int) -> int:
        return self.beta_range if self.beta_range is not None else m


@dataclass
class BetheSolution:
    roots: np.ndarray  # M complex Bethe roots (includes the pair if singular)
    beta: int
    sum_ints: tuple[int, int]  # (k, p)
    residual_norm: float
    kind: str = REGULAR
    nu_roots: np.ndarray | None = None  # M-2 reduced roots, singular only
    energy: complex = 0.0
    sum_defect: float = 0.0

    @property
    def M(self) -> int:
        return len(self.roots)


def _ell1_checked(u, params: ModelParams, pole_tol: float) -> np.ndarray:
    """ell_1 at the given points; raises if any value is pole-close."""
    vals = np.atleast_1d(ell(1, u, params.ctx))
    scale = 2.0 * abs(params.ctx.q_single) ** 0.25
    bad = np.abs(vals) < pole_tol * scale
    if np.any(bad):
        raise PoleProximity(
            f"ell_1 vanishes to {np.min(np.abs(vals)):.2e} at argument(s) "
            f"{np.atleast_1d(np.asarray(u))[bad][:3]}"
        )
    return vals


def _log_deriv(u, params: ModelParams) -> np.ndarray:
    """ell_1'(u)/ell_1(u), the logarithmic derivative entering the Jacobian."""
    ctx = params.ctx
    return np.atleast_1d(ell_prime(u, ctx)) / np.atleast_1d(ell(1, u, ctx))


def _mod_2pii(values: np.ndarray) -> np.ndarray:
    """Reduce imaginary parts to (-pi, pi]; the target of the log-form is 0."""
    return values - 2j * np.pi * np.ceil((values.imag - np.pi) / (2 * np.pi))


def bae_residual(roots, beta: int, params: ModelParams,
                 pole_tol: float = 1e-8) -> np.ndarray:
    """Log-form residuals of the Bethe equations for an M-root candidate."""
    roots = np.asarray(roots, dtype=complex)
    m = len(roots)
    eta = params.eta
    gamma = params.gamma

    pts = [roots + eta / 2, roots - eta / 2]
    if m > 1:
        diff = roots[:, None] - roots[None, :]
        off = ~np.eye(m, dtype=bool)
        pts.append(diff[off] - eta)
        pts.append(diff[off] + eta)
    flat = np.concatenate([p.ravel() for p in pts])
    vals = _ell1_checked(flat, params, pole_tol)
    logs = np.log(vals)

    res = 2 * beta * gamma + params.N * (logs[:m] - logs[m:2 * m])
    if m > 1:
        lm = np.zeros((m, m), dtype=complex)
        lp = np.zeros((m, m), dtype=complex)
        lm[off] = logs[2 * m:2 * m + m * (m - 1)]
        lp[off] = logs[2 * m + m * (m - 1):]
        res = res + np.sum(lm - lp, axis=1)
    return _mod_2pii(res)


def _bae_jacobian(roots, params: ModelParams) -> np.ndarray:
    roots = np.asarray(roots, dtype=complex)
    m = len(roots)
    eta = params.eta
    hp = _log_deriv(roots + eta / 2, params)
    hm = _log_deriv(roots - eta / 2, params)
    jac = np.zeros((m, m), dtype=complex)
    diag = params.N * (hp - hm)
    if m > 1:
        diff = roots[:, None] - roots[None, :]
        off = ~np.eye(m, dtype=bool)
        g = np.zeros((m, m), dtype=complex)
        g[off] = (_log_deriv(diff[off] - eta, params)
                  - _log_deriv(diff[off] + eta, params))
        diag = diag + np.sum(g, axis=1)
        jac = -g
    np.fill_diagonal(jac, diag)
    return jac


def singular_bae_residual(nu_roots, beta: int, params: ModelParams,
                          pole_tol: float = 1e-8) -> np.ndarray:
    """Residuals of the reduced equations once a bound pair sits at +-eta/2.

    The site exponent drops to N-1 and each root picks up the extra factor
    ell_1(nu - 3 eta/2) / ell_1(nu + 3 eta/2).
    """
    nu = np.asarray(nu_roots, dtype=complex)
    m = len(nu)
    eta = params.eta
    gamma = params.gamma
    if m == 0:
        return np.zeros(0, dtype=complex)

    pts = [nu + eta / 2, nu - eta / 2, nu - 3 * eta / 2, nu + 3 * eta / 2]
    if m > 1:
        diff = nu[:, None] - nu[None, :]
        off = ~np.eye(m, dtype=bool)
        pts.append(diff[off] - eta)
        pts.append(diff[off] + eta)
    flat = np.concatenate([p.ravel() for p in pts])
    logs = np.log(_ell1_checked(flat, params, pole_tol))

    res = (2 * beta * gamma
           + (params.N - 1) * (logs[:m] - logs[m:2 * m])
           + logs[2 * m:3 * m] - logs[3 * m:4 * m])
    if m > 1:
        n_off = m * (m - 1)
        lm = np.zeros((m, m), dtype=complex)
        lp = np.zeros((m, m), dtype=complex)
        lm[off] = logs[4 * m:4 * m + n_off]
        lp[off] = logs[4 * m + n_off:]
        res = res + np.sum(lm - lp, axis=1)
    return _mod_2pii(res)


def _singular_jacobian(nu_roots, params: ModelParams) -> np.ndarray:
    nu = np.asarray(nu_roots, dtype=complex)
    m = len(nu)
    eta = params.eta
    diag = ((params.N - 1) * (_log_deriv(nu + eta / 2, params)
                              - _log_deriv(nu - eta / 2, params))
            + _log_deriv(nu - 3 * eta / 2, params)
            - _log_deriv(nu + 3 * eta / 2, params))
    jac = np.zeros((m, m), dtype=complex)
    if m > 1:
        diff = nu[:, None] - nu[None, :]
        off = ~np.eye(m, dtype=bool)
        g = np.zeros((m, m), dtype=complex)
        g[off] = (_log_deriv(diff[off] - eta, params)
                  - _log_deriv(diff[off] + eta, params))
        diag = diag + np.sum(g, axis=1)
        jac = -g
    np.fill_diagonal(jac, diag)
    return jac


def sum_rule(roots, beta: int, params: ModelParams) -> tuple[float, int, int]:
    """Nearest lattice point k + p*tau to 2*sum(roots), plus the sin defect.

    The defect |sin(pi (2 sum - beta tau))| vanishes exactly when the sum
    rule holds with p equal to beta.
    """
    s = 2.0 * complex(np.sum(np.asarray(roots, dtype=complex)))
    tau = params.tau
    p = round(s.imag / tau.imag)
    k = round(s.real - p * tau.real)
    defect = abs(np.sin(np.pi * (s - beta * tau)))
    return defect, k, p


def energy(roots, params: ModelParams, pole_tol: float = 1e-8) -> complex:
    """Energy of a regular Bethe solution."""
    roots = np.asarray(roots, dtype=complex)
    return _energy_terms(roots, params, pole_tol) + params.N * _g(params.eta, params)


def energy_singular(nu_roots, params: ModelParams, pole_tol: float = 1e-8) -> complex:
    """Energy once the bound pair's -4 g(eta) contribution is folded in."""
    nu = np.asarray(nu_roots, dtype=complex)
    return _energy_terms(nu, params, pole_tol) + (params.N - 4) * _g(params.eta, params)


def _g(u, params: ModelParams):
    ctx = params.ctx
    return (ell(1, params.eta, ctx) * ell_prime(u, ctx)
            / (ell_prime(0.0, ctx) * ell(1, u, ctx)))


def _energy_terms(roots: np.ndarray, params: ModelParams, pole_tol: float) -> complex:
    if len(roots) == 0:
        return 0.0 + 0.0j
    eta = params.eta
    _ell1_checked(np.concatenate([roots - eta / 2, roots + eta / 2]),
                  params, pole_tol)
    return complex(2.0 * np.sum(_g(roots - eta / 2, params)
                                - _g(roots + eta / 2, params)))


def _damped_newton(x0: np.ndarray, residual_fn, jacobian_fn, config: SolverConfig,
                   step_cap: float = 1.0):
    """Newton with backtracking line search on the residual max-norm."""
    x = np.asarray(x0, dtype=complex).copy()
    f = residual_fn(x)
    norm = np.max(np.abs(f)) if len(f) else 0.0
    for _ in range(config.max_newton_iters):
        if norm < config.newton_tol:
            return x, norm
        jac = jacobian_fn(x)
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError as exc:
            raise JacobianSingular(str(exc)) from exc
        if not np.all(np.isfinite(step)):
            raise JacobianSingular("non-finite Newton step")
        # keep steps inside a fraction of the fundamental cell
        cap = step_cap
        big = np.max(np.abs(step))
        if big > cap:
            step *= cap / big
        t = 1.0
        accepted = False
        for _ in range(25):
            try:
                f_new = residual_fn(x + t * step)
            except PoleProximity:
                t /= 2.0
                continue
            new_norm = np.max(np.abs(f_new))
            if new_norm < norm:
                x = x + t * step
                f, norm = f_new, new_norm
                accepted = True
                break
            t /= 2.0
        if not accepted:
            raise MaxIters(f"line search stalled at residual {norm:.2e}")
    if norm < config.newton_tol:
        return x, norm
    raise MaxIters(f"no convergence after {config.max_newton_iters} iterations "
                   f"(residual {norm:.2e})")


def newton_solve(seed_roots, beta: int, params: ModelParams,
                 config: SolverConfig | None = None) -> BetheSolution:
    """Refine one seed into a converged regular Bethe solution."""
    config = config or SolverConfig()
    roots, norm = _damped_newton(
        np.asarray(seed_roots, dtype=complex),
        lambda x: bae_residual(x, beta, params, config.pole_tol),
        lambda x: _bae_jacobian(x, params),
        config,
        step_cap=0.45 * (1.0 + abs(params.tau)),
    )
    defect, k, p = sum_rule(roots, beta, params)
    return BetheSolution(
        roots=roots, beta=beta, sum_ints=(k, p), residual_norm=norm,
        kind=REGULAR, energy=energy(roots, params, config.pole_tol),
        sum_defect=defect,
    )


def _lattice_coords(z: complex, tau: complex) -> tuple[float, float]:
    b = z.imag / tau.imag
    a = z.real - b * tau.real
    return a, b


def _reduce_roots(roots: np.ndarray, beta: int, tau: complex,
                  snap: float = 1e-7) -> tuple[np.ndarray, int]:
    """Shift each root into a in [0,1), b in [-1/2,1/2); beta tracks tau shifts."""
    out = np.empty_like(roots)
    for i, z in enumerate(roots):
        a, b = _lattice_coords(complex(z), tau)
        tau_shift = int(np.floor(b + 0.5 + snap))
        b -= tau_shift
        beta -= 2 * tau_shift
        a -= np.floor(a + snap)
        out[i] = a + b * tau
    return out, beta


def canonicalize(solution: BetheSolution, params: ModelParams) -> BetheSolution:
    """Map a solution to its canonical lattice representative.

    Each root moves into the fundamental cell of the lattice {1, tau}; every
    tau-shift of a single root changes beta by two.  Roots are then ordered
    lexicographically by (Re, Im).
    """
    tau = params.tau
    if solution.kind == SINGULAR:
        nu, beta = _reduce_roots(np.asarray(solution.nu_roots, dtype=complex),
                                 solution.beta, tau)
        order = np.lexsort((nu.imag.round(9), nu.real.round(9)))
        nu = nu[order]
        roots = np.concatenate(([params.eta / 2, -params.eta / 2], nu))
        defect, k, p = sum_rule(nu, beta, params)
        return BetheSolution(roots=roots, beta=beta, sum_ints=(k, p),
                             residual_norm=solution.residual_norm, kind=SINGULAR,
                             nu_roots=nu, energy=solution.energy,
                             sum_defect=defect)

    roots, beta = _reduce_roots(np.asarray(solution.roots, dtype=complex),
                                solution.beta, tau)
    order = np.lexsort((roots.imag.round(9), roots.real.round(9)))
    roots = roots[order]
    defect, k, p = sum_rule(roots, beta, params)
    return BetheSolution(roots=roots, beta=beta, sum_ints=(k, p),
                         residual_norm=solution.residual_norm, kind=REGULAR,
                         energy=solution.energy, sum_defect=defect)


def _min_pair_separation(roots: np.ndarray, tau: complex) -> float:
    """Smallest pairwise root distance modulo the lattice {1, tau}."""
    m = len(roots)
    if m < 2:
        return np.inf
    best = np.inf
    for i in range(m):
        for j in range(i + 1, m):
            d = complex(roots[i] - roots[j])
            for s1 in (-1, 0, 1):
                for s2 in (-1, 0, 1):
                    best = min(best, abs(d - s1 - s2 * tau))
    return best


def _root_set_distance(a: np.ndarray, b: np.ndarray, tau: complex) -> float:
    """Min over pairings of the max root distance, modulo the lattice {1, tau}."""
    if len(a) != len(b):
        return np.inf
    if len(a) == 0:
        return 0.0
    shifts = np.array([s1 + s2 * tau
                       for s1 in (-1, 0, 1) for s2 in (-1, 0, 1)])
    dist = np.min(np.abs((a[:, None] - b[None, :])[:, :, None] - shifts), axis=2)
    best = np.inf
    for perm in itertools.permutations(range(len(a))):
        cand = max(dist[i, j] for i, j in enumerate(perm))
        if cand < best:
            best = cand
    return best


def _deduplicate(solutions: list[BetheSolution], params: ModelParams,
                 tol: float) -> list[BetheSolution]:
    kept: list[BetheSolution] = []
    for sol in sorted(solutions, key=lambda s: s.residual_norm):
        duplicate = False
        for ref in kept:
            if ref.kind != sol.kind or ref.beta != sol.beta:
                continue
            if abs(ref.energy - sol.energy) > 1e-5 * (1 + abs(ref.energy)):
                continue
            if sol.kind == SINGULAR:
                d = _root_set_distance(np.asarray(sol.nu_roots),
                                       np.asarray(ref.nu_roots), params.tau)
            else:
                d = _root_set_distance(sol.roots, ref.roots, params.tau)
            if d < tol:
                duplicate = True
                break
        if not duplicate:
            kept.append(sol)
    kept.sort(key=lambda s: (s.energy.real, s.energy.imag))
    return kept


def _structured_seeds(params: ModelParams, size: int, rng: np.random.Generator,
                      perturbed_copies: int = 6) -> list[np.ndarray]:
    """Half-period multisets, exact and jittered; these recur in the spectrum.

    Jitters are zero-mean: the sum rule pins the root sum, so physical
    solutions near a half-period multiset deviate by zero-sum displacements.
    """
    tau = params.tau
    base_pts = [0.0 + 0.0j, 0.5 + 0.0j, tau / 2, 0.5 + tau / 2]
    seeds = []
    scales = [0.04, 0.1, 0.2]
    for combo in itertools.combinations_with_replacement(base_pts, size):
        arr = np.array(combo, dtype=complex)
        seeds.append(arr)
        for copy in range(perturbed_copies):
            scale = scales[copy % len(scales)]
            jitter = (rng.normal(scale=scale, size=size)
                      + 1j * rng.normal(scale=scale, size=size)
                      * min(params.tau.imag, 2.0))
            if size > 1:
                jitter -= jitter.mean()
            seeds.append(arr + jitter)
    return seeds


def _random_seeds(params: ModelParams, size: int, count: int,
                  rng: np.random.Generator) -> list[np.ndarray]:
    seeds = []
    for _ in range(count):
        a = rng.uniform(0.0, 1.0, size)
        b = rng.uniform(-0.5, 0.5, size)
        seeds.append(a + b * params.tau)
    return seeds


def _symmetric_seeds(params: ModelParams, size: int, count: int,
                     rng: np.random.Generator) -> list[np.ndarray]:
    """Seeds invariant under the lattice reflections a -> -a and b -> -b.

    Many solutions sit on these symmetric submanifolds (root pairs mirrored
    about Re = 0 or 1/2, or conjugate pairs); Newton preserves the symmetry,
    so a symmetric seed explores the submanifold with a full-dimension basin.
    """
    if size < 2:
        return []
    tau = params.tau
    seeds = []
    for i in range(count):
        flip_a = i % 2 == 0  # mirror a -> -a, else mirror b -> -b
        n_pairs = 1 + (i // 2) % (size // 2)
        roots = []
        for _ in range(n_pairs):
            a, b = rng.uniform(0.0, 1.0), rng.uniform(-0.5, 0.5)
            roots.append(a + b * tau)
            roots.append((-a % 1.0) + b * tau if flip_a else a - b * tau)
        while len(roots) < size:
            # singles stay on the fixed lines of the reflection
            if flip_a:
                a = rng.choice([0.0, 0.5])
                b = rng.uniform(-0.5, 0.5)
            else:
                a = rng.uniform(0.0, 1.0)
                b = rng.choice([0.0, 0.5])
            roots.append(a + b * tau)
        seeds.append(np.array(roots, dtype=complex))
    # doubly symmetric families: mirrored pairs confined to one axis
    for i in range(count // 2):
        on_real = i % 2 == 0
        n_pairs = 1 + i % max(1, size // 2)
        n_pairs = min(n_pairs, size // 2)
        roots = []
        for _ in range(n_pairs):
            if on_real:
                a = rng.uniform(0.0, 1.0)
                roots.append(a + 0.0j)
                roots.append((-a % 1.0) + 0.0j)
            else:
                b = rng.uniform(0.0, 0.5)
                roots.append(b * tau)
                roots.append(-b * tau)
        while len(roots) < size:
            roots.append(complex(rng.choice([0.0, 0.5]))
                         + complex(rng.choice([0.0, 0.5])) * tau)
        seeds.append(np.array(roots[:size], dtype=complex))
    return seeds


def _grid_symmetric_seeds(params: ModelParams,
                          size: int) -> list[tuple[np.ndarray, int]]:
    """Deterministic scan of the doubly symmetric one-parameter families.

    A mirrored pair (x, -x mod 1) or (b*tau, -b*tau), optionally recentred
    at 1/2, plus half-period singles is a one-dimensional family once the
    sum rule is imposed; a uniform grid over the free coordinate catches
    solutions whose basins are too small for random seeding.  Each seed
    fixes its own beta through the lattice point nearest to twice its sum.
    """
    if size < 2:
        return []
    tau = params.tau
    half_pts = [0.0 + 0.0j, 0.5 + 0.0j, tau / 2, 0.5 + tau / 2]
    seeds = []
    for singles in itertools.combinations_with_replacement(half_pts, size - 2):
        tail = np.array(singles, dtype=complex)
        for x in np.linspace(0.03, 0.97, 41):
            pair = np.array([x, (-x) % 1.0], dtype=complex)
            seeds.append(np.concatenate([pair, tail]))
        for center in (0.0, 0.5):
            for b in np.linspace(0.03, 0.47, 21):
                pair = np.array([center + b * tau, center - b * tau])
                seeds.append(np.concatenate([pair, tail]))
    out = []
    for seed in seeds:
        s = 2.0 * complex(np.sum(seed))
        p = round(s.imag / tau.imag)
        out.append((seed, p))
    return out


def _symmetry_image_seeds(candidates: list[BetheSolution],
                          params: ModelParams) -> list[tuple[np.ndarray, int]]:
    """(seed, beta) pairs from symmetry images of found solutions.

    Root negation with beta -> -beta is an exact symmetry of the equations;
    the two lattice reflections are exact in the Hermitian regime and still
    useful first guesses elsewhere.
    """
    tau = params.tau
    images = []
    for sol in candidates:
        if sol.kind != REGULAR:
            continue
        roots = sol.roots
        images.append((-roots, -sol.beta))
        coords = [(z.real - (z.imag / tau.imag) * tau.real, z.imag / tau.imag)
                  for z in roots.tolist()]
        images.append((np.array([a - b * tau for a, b in coords]), -sol.beta))
        images.append((np.array([-a + b * tau for a, b in coords]), sol.beta))
    return images


def _symmetry_closure(candidates: list[BetheSolution], params: ModelParams,
                      config: SolverConfig, beta_range: int,
                      max_rounds: int = 2) -> list[BetheSolution]:
    """Refine symmetry images of found solutions until no new ones appear.

    A solution whose negation or reflection partner was missed by the seed
    sweep is recovered here from an already-converged nearby guess.
    """
    for _ in range(max_rounds):
        grew = False
        for seed, beta in _symmetry_image_seeds(candidates, params):
            if abs(beta) > beta_range:
                continue
            try:
                sol = newton_solve(seed, beta, params, config)
            except (PoleProximity, MaxIters, JacobianSingular):
                continue
            sol = canonicalize(sol, params)
            if _min_pair_separation(sol.roots, params.tau) <= 1e-6:
                continue
            if (sol.sum_defect < config.sum_rule_tol
                    and sol.sum_ints[1] == sol.beta):
                merged = _deduplicate(candidates + [sol], params,
                                      config.dedup_tol)
                if len(merged) > len(candidates):
                    candidates = merged
                    grew = True
        if not grew:
            break
    return candidates


def _sum_constrained_seeds(params: ModelParams, size: int, count: int, beta: int,
                           rng: np.random.Generator) -> list[np.ndarray]:
    """Random seeds whose root sum already satisfies 2*sum = k + beta*tau."""
    if size < 2:
        return []
    seeds = []
    for i in range(count):
        k = i % (2 * size)
        a = rng.uniform(0.0, 1.0, size - 1)
        b = rng.uniform(-0.5, 0.5, size - 1)
        head = a + b * params.tau
        last = (k + beta * params.tau) / 2.0 - head.sum()
        seeds.append(np.concatenate([head, [last]]))
    return seeds


def _deflated_solve(seed, beta: int, params: ModelParams, config: SolverConfig,
                    known_sigs: list[np.ndarray]) -> BetheSolution:
    """Newton on the deflated residual, then a plain refinement pass."""
    def residual(x):
        f = bae_residual(x, beta, params, config.pole_tol)
        mult, _ = _deflation_factor(x, known_sigs)
        return mult * f

    def jacobian(x):
        f = bae_residual(x, beta, params, config.pole_tol)
        jac = _bae_jacobian(x, params)
        mult, grad = _deflation_factor(x, known_sigs)
        return mult * jac + np.outer(f, grad)

    x, _ = _damped_newton(np.asarray(seed, dtype=complex), residual, jacobian,
                          config, step_cap=0.45 * (1.0 + abs(params.tau)))
    return newton_solve(x, beta, params, config)


def _symmetric_functions(roots: np.ndarray) -> np.ndarray:
    """Elementary symmetric polynomials: a permutation-invariant signature."""
    coeffs = np.polynomial.polynomial.polyfromroots(roots)
    return coeffs[:-1]


def _deflation_factor(roots: np.ndarray, known_sigs: list[np.ndarray]):
    """Scalar holomorphic deflation multiplier and its gradient.

    Each known solution contributes 1 + 1/P_k with P_k the squared distance
    of elementary-symmetric signatures; the multiplier diverges at known
    solutions, pushing Newton toward undiscovered basins.
    """
    m = len(roots)
    sig = _symmetric_functions(roots)
    # d sig_i / d root_l: derivative of polynomial coefficients wrt a root
    dsig = np.zeros((m, m), dtype=complex)
    for l in range(m):
        others = np.delete(roots, l)
        sub = np.polynomial.polynomial.polyfromroots(others)  # length m
        # roots contribute via factor (x - root_l): d coeff_i = -sub_i shifted
        dsig[:, l] = -sub[:m]
    total = 1.0 + 0.0j
    grad = np.zeros(m, dtype=complex)
    for ref in known_sigs:
        delta = sig - ref
        p = np.sum(delta * delta)
        if abs(p) < 1e-30:
            p = 1e-30
        factor = 1.0 + 1.0 / p
        dp = 2.0 * (delta @ dsig)
        grad = grad * factor + total * (-dp / (p * p))
        total *= factor
    return total, grad


def multi_start_solve(params: ModelParams,
                      config: SolverConfig | None = None) -> list[BetheSolution]:
    """All canonical Bethe solutions found by the beta scan and seeding policy.

    Regular solutions come from damped Newton over structured plus stratified
    random seeds for every beta in the scan window; singular bound-pair
    solutions are appended from the reduced equations.  The result is
    canonicalized, sum-rule filtered (p = beta), and deduplicated.
    """
    config = config or SolverConfig()
    rng = np.random.default_rng(config.rng_seed)
    m = params.M
    beta_range = config.resolved_beta_range(m)

    candidates: list[BetheSolution] = []
    blockers: dict[int, list[np.ndarray]] = {}  # coincident-root fixed points
    attempts = failures = 0
    for beta in range(-beta_range, beta_range + 1):
        seeds = _structured_seeds(params, m, rng)
        seeds += _random_seeds(params, m, config.n_starts // 3, rng)
        seeds += _symmetric_seeds(params, m, config.n_starts // 3, rng)
        seeds += _sum_constrained_seeds(params, m, config.n_starts
                                        - 2 * (config.n_starts // 3), beta, rng)
        for seed in seeds:
            attempts += 1
            try:
                sol = newton_solve(seed, beta, params, config)
            except (PoleProximity, MaxIters, JacobianSingular):
                failures += 1
                continue
            sol = canonicalize(sol, params)
            if _min_pair_separation(sol.roots, params.tau) <= 1e-6:
                blockers.setdefault(beta, []).append(sol.roots)
                continue
            if (sol.sum_defect < config.sum_rule_tol
                    and sol.sum_ints[1] == sol.beta):
                candidates.append(sol)

    for seed, beta in _grid_symmetric_seeds(params, m):
        if abs(beta) > beta_range:
            continue
        attempts += 1
        try:
            sol = newton_solve(seed, beta, params, config)
        except (PoleProximity, MaxIters, JacobianSingular):
            failures += 1
            continue
        sol = canonicalize(sol, params)
        if _min_pair_separation(sol.roots, params.tau) <= 1e-6:
            blockers.setdefault(beta, []).append(sol.roots)
            continue
        if (sol.sum_defect < config.sum_rule_tol
                and sol.sum_ints[1] == sol.beta):
            candidates.append(sol)

    candidates = _deduplicate(candidates, params, config.dedup_tol)
    candidates = _symmetry_closure(candidates, params, config, beta_range)

    # deflation sweep: repel Newton from everything found so far, so that
    # solutions with tiny basins of attraction become reachable
    for beta in range(-beta_range, beta_range + 1):
        known = [c for c in candidates if c.beta == beta and c.kind == REGULAR]
        known_sigs = [_symmetric_functions(c.roots) for c in known]
        block_sigs = [_symmetric_functions(r) for r in blockers.get(beta, [])]
        seen = set()
        for sig in block_sigs:
            key = tuple(np.round(sig, 6))
            if key not in seen:
                seen.add(key)
                known_sigs.append(sig)
        seeds = _random_seeds(params, m, config.n_deflation_starts // 3, rng)
        seeds += _symmetric_seeds(params, m, config.n_deflation_starts // 3, rng)
        seeds += _sum_constrained_seeds(params, m,
                                        config.n_deflation_starts
                                        - 2 * (config.n_deflation_starts // 3),
                                        beta, rng)
        for seed in seeds:
            attempts += 1
            try:
                sol = _deflated_solve(seed, beta, params, config, known_sigs)
            except (PoleProximity, MaxIters, JacobianSingular):
                failures += 1
                continue
            sol = canonicalize(sol, params)
            if _min_pair_separation(sol.roots, params.tau) <= 1e-6:
                key = tuple(np.round(_symmetric_functions(sol.roots), 6))
                if key not in seen:
                    seen.add(key)
                    known_sigs.append(_symmetric_functions(sol.roots))
                continue
            if (sol.sum_defect < config.sum_rule_tol
                    and sol.sum_ints[1] == sol.beta):
                merged = _deduplicate(candidates + [sol], params,
                                      config.dedup_tol)
                if len(merged) > len(candidates):
                    candidates = merged
                    known_sigs.append(_symmetric_functions(sol.roots))

    candidates = _symmetry_closure(candidates, params, config, beta_range)

    if params.N >= 4:
        candidates.extend(singular_solve(params, config))

    solutions = _deduplicate(candidates, params, config.dedup_tol)
    log.info("multi_start_solve: %d attempts, %d failures, %d candidates, "
             "%d distinct solutions", attempts, failures, len(candidates),
             len(solutions))
    return solutions


def singular_solve(params: ModelParams,
                   config: SolverConfig | None = None) -> list[BetheSolution]:
    """Bound-pair solutions: roots +-eta/2 plus M-2 reduced roots."""
    if params.N < 4:
        return []
    config = config or SolverConfig()
    rng = np.random.default_rng(config.rng_seed + 1)
    m_red = params.M - 2
    beta_range = config.resolved_beta_range(params.M)

    candidates: list[BetheSolution] = []
    for beta in range(-beta_range, beta_range + 1):
        if m_red == 0:
            defect, k, p = sum_rule([], beta, params)
            if defect < config.sum_rule_tol and p == beta:
                candidates.append(BetheSolution(
                    roots=np.array([params.eta / 2, -params.eta / 2]),
                    beta=beta, sum_ints=(k, p), residual_norm=0.0,
                    kind=SINGULAR, nu_roots=np.zeros(0, dtype=complex),
                    energy=energy_singular([], params), sum_defect=defect))
            continue

        seeds = _structured_seeds(params, m_red, rng)
        seeds += _random_seeds(params, m_red, config.n_starts, rng)
        for seed in seeds:
            try:
                nu, norm = _damped_newton(
                    seed,
                    lambda x: singular_bae_residual(x, beta, params,
                                                    config.pole_tol),
                    lambda x: _singular_jacobian(x, params),
                    config,
                    step_cap=0.45 * (1.0 + abs(params.tau)),
                )
            except (PoleProximity, MaxIters, JacobianSingular):
                continue
            defect, k, p = sum_rule(nu, beta, params)
            sol = BetheSolution(
                roots=np.concatenate(([params.eta / 2, -params.eta / 2], nu)),
                beta=beta, sum_ints=(k, p), residual_norm=norm, kind=SINGULAR,
                nu_roots=nu, energy=energy_singular(nu, params, config.pole_tol),
                sum_defect=defect)
            sol = canonicalize(sol, params)
            if (sol.sum_defect < config.sum_rule_tol
                    and sol.sum_ints[1] == sol.beta
                    and _min_pair_separation(np.asarray(sol.nu_roots),
                                             params.tau) > 1e-6):
                candidates.append(sol)

    return _deduplicate(candidates, params, config.dedup_tol)
