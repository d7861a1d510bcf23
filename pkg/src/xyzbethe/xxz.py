"""Trigonometric (XXZ) degeneration of the elliptic chain.

In the limit of large Im tau the R-matrix becomes trigonometric and some
Bethe roots escape to Re = +-infinity, forming equispaced phantom strings.
This module solves the XXZ Bethe equations with explicit phantom
bookkeeping, checks the exponent relation beta -+ m = 0, and verifies the
correspondence with the elliptic solver by homotopy continuation in tau.
"""

from __future__ import annotations

import cmath
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .baesolver import (
    REGULAR,
    SINGULAR,
    BetheSolution,
    SolverConfig,
    _damped_newton,
    _lattice_coords,
    canonicalize,
    multi_start_solve,
    newton_solve,
)
from .errors import (
    DegenerateGamma,
    FitFailure,
    JacobianSingular,
    MaxIters,
    PoleProximity,
)
from .lattice import ModelParams, SpectrumEntry, _joint_diagonalize, _transfer_from_r

__all__ = [
    "XXZParams",
    "XXZSolution",
    "PhantomString",
    "PLUS_INFINITY",
    "MINUS_INFINITY",
    "xxz_r_matrix",
    "xxz_bae_residual",
    "xxz_solve",
    "xxz_energy",
    "xxz_hamiltonian",
    "xxz_exact_spectrum",
    "lambda_xxz_tq",
    "phantom_string",
    "asymptotic_beta_check",
    "homotopy_correspondence",
    "CorrespondenceReport",
]

log = logging.getLogger(__name__)

PLUS_INFINITY = "PlusInfinity"
MINUS_INFINITY = "MinusInfinity"


@dataclass(frozen=True)
class XXZParams:
    """Chain length and anisotropy gamma; J_z = cosh(gamma), J_x = J_y = 1."""

    N: int
    gamma: complex

    def __post_init__(self):
        if self.N < 2 or self.N % 2 != 0:
            raise ValueError(f"N must be even and >= 2, got {self.N}")
        object.__setattr__(self, "gamma", complex(self.gamma))
        if abs(cmath.sinh(self.gamma)) < 1e-12:
            raise DegenerateGamma(f"sinh(gamma) = 0 at gamma = {self.gamma}")

    @property
    def M(self) -> int:
        return self.N // 2

    @property
    def dim(self) -> int:
        return 2 ** self.N


@dataclass
class XXZSolution:
    """Finite roots plus a symbolic record of the phantom string.

    Phantom roots are never stored as large floats: only their count, the
    side whose real part diverges, and the string phase are kept, since
    nothing finite depends on more than that.
    """

    regular_roots: np.ndarray
    phantom_count: int
    phantom_side: str | None  # PLUS_INFINITY / MINUS_INFINITY, None when m = 0
    beta: int
    energy: complex
    residual_norm: float
    kind: str = REGULAR
    string_phase: float = 0.0
    sum_int: int | None = None  # l in 2*sum(u) = i*pi*l, m = 0 only

    @property
    def m(self) -> int:
        return self.phantom_count


@dataclass
class PhantomString:
    """Equispaced imaginary offsets attached to a divergent real part."""

    side: str
    offsets: list  # i*pi*j/m + i*c/m, j = 1..m

    def labels(self) -> list[str]:
        mark = "+inf" if self.side == PLUS_INFINITY else "-inf"
        return [f"{mark}{off.imag:+.4f}i" for off in self.offsets]


def phantom_string(m: int, side: str, c: float = 0.0) -> PhantomString:
    """The string of m phantom roots on the given side with phase c."""
    if m < 1:
        raise ValueError("phantom string needs m >= 1")
    if side not in (PLUS_INFINITY, MINUS_INFINITY):
        raise ValueError(f"unknown side {side!r}")
    offsets = [1j * (np.pi * j + c) / m for j in range(1, m + 1)]
    return PhantomString(side=side, offsets=offsets)


def xxz_r_matrix(u: complex, gamma: complex) -> np.ndarray:
    """4x4 trigonometric R-matrix."""
    sg = cmath.sinh(gamma)
    if abs(sg) < 1e-12:
        raise DegenerateGamma(f"sinh(gamma) = 0 at gamma = {gamma}")
    a = cmath.sinh(u + gamma) / sg
    b = cmath.sinh(u) / sg
    return np.array(
        [
            [a, 0, 0, 0],
            [0, b, 1, 0],
            [0, 1, b, 0],
            [0, 0, 0, a],
        ],
        dtype=complex,
    )


def _sinh_checked(pts: np.ndarray, pole_tol: float) -> np.ndarray:
    vals = np.sinh(pts)
    if np.any(np.abs(vals) < pole_tol):
        raise PoleProximity(
            f"sinh vanishes to {np.min(np.abs(vals)):.2e} on the residual stencil"
        )
    return vals


def _reduced_residual(roots: np.ndarray, params: XXZParams,
                      pole_tol: float = 1e-8) -> np.ndarray:
    """Log form of the regular-root equations (no beta factor: it is 0 here)."""
    m = len(roots)
    g = params.gamma
    if m == 0:
        return np.zeros(0, dtype=complex)
    pts = [roots + g / 2, roots - g / 2]
    off = None
    if m > 1:
        diff = roots[:, None] - roots[None, :]
        off = ~np.eye(m, dtype=bool)
        pts.append(diff[off] - g)
        pts.append(diff[off] + g)
    logs = np.log(_sinh_checked(np.concatenate([p.ravel() for p in pts]), pole_tol))
    res = params.N * (logs[:m] - logs[m:2 * m])
    if m > 1:
        n_off = m * (m - 1)
        lm = np.zeros((m, m), dtype=complex)
        lp = np.zeros((m, m), dtype=complex)
        lm[off] = logs[2 * m:2 * m + n_off]
        lp[off] = logs[2 * m + n_off:]
        res = res + np.sum(lm - lp, axis=1)
    return res - 2j * np.pi * np.ceil((res.imag - np.pi) / (2 * np.pi))


def _reduced_jacobian(roots: np.ndarray, params: XXZParams) -> np.ndarray:
    m = len(roots)
    g = params.gamma
    diag = params.N * (1.0 / np.tanh(roots + g / 2) - 1.0 / np.tanh(roots - g / 2))
    jac = np.zeros((m, m), dtype=complex)
    if m > 1:
        diff = roots[:, None] - roots[None, :]
        off = ~np.eye(m, dtype=bool)
        grid = np.zeros((m, m), dtype=complex)
        grid[off] = (1.0 / np.tanh(diff[off] - g)
                     - 1.0 / np.tanh(diff[off] + g))
        diag = diag + np.sum(grid, axis=1)
        jac = -grid
    np.fill_diagonal(jac, diag)
    return jac


def xxz_bae_residual(mu_roots, beta: int, params: XXZParams,
                     pole_tol: float = 1e-8) -> np.ndarray:
    """Log-form residuals of the full M-root XXZ equations with the beta factor."""
    mu = np.asarray(mu_roots, dtype=complex)
    base = _reduced_residual(mu, params, pole_tol)
    res = base + 2 * beta * params.gamma
    return res - 2j * np.pi * np.ceil((res.imag - np.pi) / (2 * np.pi))


def xxz_energy(regular_roots, params: XXZParams) -> complex:
    """Energy from the finite roots alone; phantom roots contribute nothing."""
    u = np.asarray(regular_roots, dtype=complex)
    g = params.gamma
    if len(u) == 0:
        return complex(params.N * cmath.cosh(g))
    terms = 4.0 * cmath.sinh(g) ** 2 / (np.cosh(2 * u) - cmath.cosh(g))
    return complex(np.sum(terms) + params.N * cmath.cosh(g))


def _xxz_energy_singular(nu_roots, params: XXZParams) -> complex:
    nu = np.asarray(nu_roots, dtype=complex)
    g = params.gamma
    base = (params.N - 4) * cmath.cosh(g)
    if len(nu) == 0:
        return complex(base)
    terms = 4.0 * cmath.sinh(g) ** 2 / (np.cosh(2 * nu) - cmath.cosh(g))
    return complex(np.sum(terms) + base)


def _reduce_mod_ipi(roots: np.ndarray, snap: float = 1e-9) -> np.ndarray:
    """Shift imaginary parts into (-pi/2, pi/2]; roots live modulo i*pi."""
    out = roots.copy()
    shift = np.ceil((out.imag - np.pi / 2 - snap) / np.pi)
    return out - 1j * np.pi * shift


def _xxz_set_distance(a: np.ndarray, b: np.ndarray) -> float:
    if len(a) != len(b):
        return np.inf
    if len(a) == 0:
        return 0.0
    shifts = np.array([-1j * np.pi, 0.0, 1j * np.pi])
    dist = np.min(np.abs((a[:, None] - b[None, :])[:, :, None] - shifts), axis=2)
    best = np.inf
    for perm in itertools.permutations(range(len(a))):
        cand = max(dist[i, j] for i, j in enumerate(perm))
        best = min(best, cand)
    return best


def _reduced_solutions(size: int, params: XXZParams, config: SolverConfig,
                       rng: np.random.Generator) -> list[tuple[np.ndarray, float]]:
    """Distinct solutions of the regular-root equations with ``size`` roots."""
    if size == 0:
        return [(np.zeros(0, dtype=complex), 0.0)]
    seeds = []
    base_pts = [0.0 + 0.0j, 0.5j * np.pi]
    for combo in itertools.combinations_with_replacement(base_pts, size):
        arr = np.array(combo, dtype=complex)
        for scale in (0.05, 0.15, 0.35, 0.7):
            for _ in range(4):
                jitter = (rng.normal(scale=scale, size=size)
                          + 1j * rng.normal(scale=scale, size=size))
                seeds.append(arr + jitter)
    for _ in range(config.n_starts):
        seeds.append(rng.uniform(-1.5, 1.5, size)
                     + 1j * rng.uniform(-np.pi / 2, np.pi / 2, size))

    found: list[tuple[np.ndarray, float]] = []
    for seed in seeds:
        try:
            roots, norm = _damped_newton(
                seed,
                lambda x: _reduced_residual(x, params, config.pole_tol),
                lambda x: _reduced_jacobian(x, params),
                config,
                step_cap=1.5,
            )
        except (PoleProximity, MaxIters, JacobianSingular):
            continue
        roots = _reduce_mod_ipi(roots)
        if np.max(np.abs(roots.real)) > 8.0:
            continue  # runaway toward the phantom region
        if size > 1:
            sep = min(abs(complex(roots[i] - roots[j]) - 1j * np.pi * s)
                      for i in range(size) for j in range(i + 1, size)
                      for s in (-1, 0, 1))
            if sep < 1e-6:
                continue
        order = np.lexsort((roots.imag.round(9), roots.real.round(9)))
        roots = roots[order]
        if all(_xxz_set_distance(roots, ref) > config.dedup_tol
               for ref, _ in found):
            found.append((roots, norm))
    return found


def _singular_xxz(params: XXZParams, config: SolverConfig,
                  rng: np.random.Generator) -> list[XXZSolution]:
    """Bound-pair solutions with roots +-gamma/2; reduced roots solved if any."""
    if params.N < 4:
        return []
    g = params.gamma
    m_red = params.M - 2
    out = []
    if m_red == 0:
        pair = np.array([g / 2, -g / 2])
        out.append(XXZSolution(
            regular_roots=pair, phantom_count=0, phantom_side=None, beta=0,
            energy=_xxz_energy_singular([], params), residual_norm=0.0,
            kind=SINGULAR, sum_int=0))
        return out

    def residual(nu):
        m = len(nu)
        pts = [nu + g / 2, nu - g / 2, nu - 3 * g / 2, nu + 3 * g / 2]
        diff = nu[:, None] - nu[None, :]
        off = ~np.eye(m, dtype=bool)
        if m > 1:
            pts.append(diff[off] - g)
            pts.append(diff[off] + g)
        logs = np.log(_sinh_checked(np.concatenate([p.ravel() for p in pts]),
                                    config.pole_tol))
        res = ((params.N - 1) * (logs[:m] - logs[m:2 * m])
               + logs[2 * m:3 * m] - logs[3 * m:4 * m])
        if m > 1:
            n_off = m * (m - 1)
            lm = np.zeros((m, m), dtype=complex)
            lp = np.zeros((m, m), dtype=complex)
            lm[off] = logs[4 * m:4 * m + n_off]
            lp[off] = logs[4 * m + n_off:]
            res = res + np.sum(lm - lp, axis=1)
        return res - 2j * np.pi * np.ceil((res.imag - np.pi) / (2 * np.pi))

    def jacobian(nu):
        m = len(nu)
        diag = ((params.N - 1) * (1 / np.tanh(nu + g / 2)
                                  - 1 / np.tanh(nu - g / 2))
                + 1 / np.tanh(nu - 3 * g / 2) - 1 / np.tanh(nu + 3 * g / 2))
        jac = np.zeros((m, m), dtype=complex)
        if m > 1:
            diff = nu[:, None] - nu[None, :]
            off = ~np.eye(m, dtype=bool)
            grid = np.zeros((m, m), dtype=complex)
            grid[off] = 1 / np.tanh(diff[off] - g) - 1 / np.tanh(diff[off] + g)
            diag = diag + np.sum(grid, axis=1)
            jac = -grid
        np.fill_diagonal(jac, diag)
        return jac

    found: list[np.ndarray] = []
    for _ in range(config.n_starts):
        seed = (rng.uniform(-1.5, 1.5, m_red)
                + 1j * rng.uniform(-np.pi / 2, np.pi / 2, m_red))
        try:
            nu, norm = _damped_newton(seed, residual, jacobian, config,
                                      step_cap=1.5)
        except (PoleProximity, MaxIters, JacobianSingular):
            continue
        nu = _reduce_mod_ipi(nu)
        if np.max(np.abs(nu.real)) > 8.0:
            continue
        s2 = 2.0 * complex(np.sum(nu))
        if abs(np.sinh(s2)) > config.sum_rule_tol:
            continue
        order = np.lexsort((nu.imag.round(9), nu.real.round(9)))
        nu = nu[order]
        if all(_xxz_set_distance(nu, ref) > config.dedup_tol for ref in found):
            found.append(nu)
            pair = np.array([g / 2, -g / 2])
            out.append(XXZSolution(
                regular_roots=np.concatenate([pair, nu]), phantom_count=0,
                phantom_side=None, beta=0,
                energy=_xxz_energy_singular(nu, params), residual_norm=norm,
                kind=SINGULAR, sum_int=round((s2.imag) / np.pi)))
    return out


def xxz_solve(params: XXZParams,
              config: SolverConfig | None = None) -> list[XXZSolution]:
    """All XXZ solutions, organized by phantom count m and side.

    For each m the M - m regular-root equations are solved; each solution
    with m >= 1 appears on both sides (real parts diverging to + or -
    infinity) with beta = -m and +m respectively.  The m = 0 sector is
    additionally filtered by the sum rule 2*sum(u) = i*pi*l and completed
    with the bound-pair solution.
    """
    config = config or SolverConfig()
    rng = np.random.default_rng(config.rng_seed)
    out: list[XXZSolution] = []
    for m in range(params.M + 1):
        size = params.M - m
        for roots, norm in _reduced_solutions(size, params, config, rng):
            if m == 0:
                s2 = 2.0 * complex(np.sum(roots))
                defect = abs(np.sinh(s2))
                if defect > config.sum_rule_tol:
                    continue
                out.append(XXZSolution(
                    regular_roots=roots, phantom_count=0, phantom_side=None,
                    beta=0, energy=xxz_energy(roots, params),
                    residual_norm=norm, sum_int=round(s2.imag / np.pi)))
            else:
                e = xxz_energy(roots, params)
                out.append(XXZSolution(
                    regular_roots=roots, phantom_count=m,
                    phantom_side=PLUS_INFINITY, beta=-m, energy=e,
                    residual_norm=norm))
                out.append(XXZSolution(
                    regular_roots=roots, phantom_count=m,
                    phantom_side=MINUS_INFINITY, beta=m, energy=e,
                    residual_norm=norm))
    out.extend(_singular_xxz(params, config, rng))
    out.sort(key=lambda s: (s.energy.real, s.energy.imag, s.beta))
    return out


def xxz_hamiltonian(params: XXZParams) -> np.ndarray:
    """XXZ Hamiltonian with J_x = J_y = 1 and J_z = cosh(gamma)."""
    from .lattice import _pauli_on, _SIGMA_X, _SIGMA_Y, _SIGMA_Z

    n = params.N
    jz = cmath.cosh(params.gamma)
    h = np.zeros((params.dim, params.dim), dtype=complex)
    for site in range(1, n + 1):
        nxt = site % n + 1
        for coupling, sigma in ((1.0, _SIGMA_X), (1.0, _SIGMA_Y), (jz, _SIGMA_Z)):
            h += coupling * _pauli_on(sigma, site, n) @ _pauli_on(sigma, nxt, n)
    return h


def xxz_transfer_matrix(u: complex, params: XXZParams) -> np.ndarray:
    r4 = xxz_r_matrix(u, params.gamma).reshape(2, 2, 2, 2)
    return _transfer_from_r(r4, params.N)


def xxz_exact_spectrum(params: XXZParams,
                       u_samples: list[complex]) -> list[SpectrumEntry]:
    """Dense diagonalization of the trigonometric commuting family."""
    t0 = xxz_transfer_matrix(0.2371 + 0.0193j, params)
    t1 = xxz_transfer_matrix(0.3139 - 0.0271j, params)
    h = xxz_hamiltonian(params)
    vecs, inv = _joint_diagonalize([t0, t1, h])
    energies = np.diag(inv @ h @ vecs)
    sample_vals = [np.diag(inv @ xxz_transfer_matrix(u, params) @ vecs)
                   for u in u_samples]
    entries = []
    for i in range(params.dim):
        samples = [(u, sample_vals[k][i]) for k, u in enumerate(u_samples)]
        entries.append(SpectrumEntry(energy=complex(energies[i]),
                                     lambda_samples=samples))
    entries.sort(key=lambda e: (e.energy.real, e.energy.imag))
    return entries


def lambda_xxz_tq(u: complex, solution: XXZSolution, params: XXZParams,
                  pole_tol: float = 1e-8) -> complex:
    """Transfer eigenvalue from the finite-root form of the functional relation.

    The phantom string contributes only through the exponent beta +- m,
    which vanishes for a physical solution but is kept explicit so that a
    wrong beta is detectable.
    """
    g = params.gamma
    n = params.N
    sg = cmath.sinh(g)
    if solution.kind == SINGULAR:
        pair_sep = np.asarray(solution.regular_roots, dtype=complex)
        nu = pair_sep[2:]
        den = np.sinh(u - nu + g / 2)
        if len(nu) and np.min(np.abs(den)) < pole_tol:
            raise PoleProximity(f"u = {u} hits a zero of Q")
        t1 = (cmath.sinh(u + g) ** (n - 1) * cmath.sinh(u - g) / sg ** n
              * np.prod(np.sinh(u - nu - g / 2) / den))
        t2 = (cmath.sinh(u) ** (n - 1) * cmath.sinh(u + 2 * g) / sg ** n
              * np.prod(np.sinh(u - nu + 3 * g / 2) / den))
        return complex(t1 + t2)

    side_sign = {PLUS_INFINITY: 1, MINUS_INFINITY: -1, None: 1}[solution.phantom_side]
    exponent = solution.beta + side_sign * solution.phantom_count
    roots = np.asarray(solution.regular_roots, dtype=complex)
    den = np.sinh(u - roots + g / 2)
    if len(roots) and np.min(np.abs(den)) < pole_tol:
        raise PoleProximity(f"u = {u} hits a zero of Q")
    t1 = (cmath.exp(exponent * g) * cmath.sinh(u + g) ** n / sg ** n
          * np.prod(np.sinh(u - roots - g / 2) / den))
    t2 = (cmath.exp(-exponent * g) * cmath.sinh(u) ** n / sg ** n
          * np.prod(np.sinh(u - roots + 3 * g / 2) / den))
    return complex(t1 + t2)


def asymptotic_beta_check(solution: XXZSolution, params: XXZParams,
                          probes: tuple[float, float] = (8.0, 10.0)) -> bool:
    """Fit the large-u leading coefficient and test the integer exponent.

    The eigenvalue must behave like
    e^{Nu} (e^{(N-m')gamma} + e^{m'gamma}) / (2 sinh gamma)^N for an
    integer m'; consistency with the phantom count requires m' = M - m
    (or its mirror N - M + m).
    """
    g = params.gamma
    n = params.N
    coeffs = []
    for u in probes:
        lam = lambda_xxz_tq(u, solution, params)
        coeffs.append(lam * (2 * cmath.sinh(g)) ** n * cmath.exp(-n * u))
    if abs(coeffs[0] - coeffs[1]) > 1e-4 * (1.0 + abs(coeffs[1])):
        raise FitFailure(
            f"leading coefficient not stable between probes: {coeffs}"
        )
    target = coeffs[1]
    best_mp, best_err = None, np.inf
    for mp in range(n + 1):
        model = cmath.exp((n - mp) * g) + cmath.exp(mp * g)
        err = abs(target - model) / (1.0 + abs(model))
        if err < best_err:
            best_mp, best_err = mp, err
    if best_err > 1e-3:
        return False
    m = solution.phantom_count
    return best_mp in (params.M - m, n - params.M + m)


@dataclass
class CorrespondenceReport:
    """Pairing of continued elliptic solutions with XXZ solutions."""

    entries: list  # dicts: elliptic_index, xxz_index, m, side, root_gap, ...
    warnings: list  # PathJumping messages
    path_log: list  # dicts: step, im_tau, solution_index, energy, residual

    @property
    def all_paired(self) -> bool:
        return all(e["xxz_index"] is not None for e in self.entries)

    def to_json(self) -> dict:
        return {"entries": self.entries, "warnings": list(self.warnings),
                "path_log": self.path_log}


def _classify_roots(sol: BetheSolution, params: ModelParams,
                    phantom_cut: float = 0.25):
    """Split continued roots into finite images and phantom escapes.

    A root with lattice coordinate b beyond the cut sits near +-tau/2; its
    image under i*pi has divergent real part (b > 0 maps to -infinity).
    """
    regular = []
    n_plus = n_minus = 0
    for z in np.asarray(sol.roots, dtype=complex):
        _, b = _lattice_coords(complex(z), params.tau)
        if b > phantom_cut:
            n_minus += 1
        elif b < -phantom_cut:
            n_plus += 1
        else:
            regular.append(_reduce_mod_ipi(np.array([1j * np.pi * z]))[0])
    if n_plus and n_minus:
        return regular, n_plus + n_minus, None
    side = PLUS_INFINITY if n_plus else (MINUS_INFINITY if n_minus else None)
    return regular, n_plus + n_minus, side


def homotopy_correspondence(params_start: ModelParams,
                            target_im_tau: float = 12.0,
                            growth: float = 1.15,
                            config: SolverConfig | None = None,
                            elliptic_solutions: list[BetheSolution] | None = None,
                            xxz_solutions: list[XXZSolution] | None = None,
                            root_tol: float = 1e-3) -> CorrespondenceReport:
    """Continue every elliptic solution in Im tau and pair it with XXZ data.

    Im tau grows geometrically; at each step Newton restarts from the
    previous roots.  A residual jump above 1e-4 triggers step halving, and
    a surviving jump is logged as a path warning rather than raised.
    """
    config = config or SolverConfig()
    if elliptic_solutions is None:
        elliptic_solutions = multi_start_solve(params_start, config)
    xxz_params = XXZParams(N=params_start.N, gamma=params_start.gamma)
    if xxz_solutions is None:
        xxz_solutions = xxz_solve(xxz_params, config)

    warnings: list[str] = []
    path_log: list[dict] = []
    finals: list[BetheSolution | None] = []
    for idx, sol in enumerate(elliptic_solutions):
        current = sol
        params = params_start
        im_tau = params_start.tau.imag
        step = 0
        lost = False
        while im_tau < target_im_tau and not lost:
            factor = growth
            advanced = False
            for _ in range(6):
                new_im = min(im_tau * factor, target_im_tau)
                new_tau = params_start.tau.real + 1j * new_im
                new_params = ModelParams(N=params_start.N, tau=new_tau,
                                         eta=params_start.eta)
                try:
                    if current.kind == SINGULAR:
                        nxt = _continue_singular(current, new_params, config)
                    else:
                        nxt = newton_solve(current.roots, current.beta,
                                           new_params, config)
                except (PoleProximity, MaxIters, JacobianSingular):
                    factor = 1.0 + (factor - 1.0) / 2.0
                    continue
                moved = (np.max(np.abs(np.asarray(nxt.roots)
                                       - np.asarray(current.roots)))
                         if len(current.roots) else 0.0)
                if moved > 0.35 * (1.0 + new_im - im_tau):
                    factor = 1.0 + (factor - 1.0) / 2.0
                    continue
                current, params, im_tau = nxt, new_params, new_im
                advanced = True
                break
            step += 1
            if not advanced:
                warnings.append(
                    f"solution {idx}: path lost at Im tau = {im_tau:.3f}"
                )
                lost = True
                break
            path_log.append({"step": step, "im_tau": im_tau,
                             "solution_index": idx,
                             "energy_re": current.energy.real,
                             "energy_im": current.energy.imag,
                             "residual": current.residual_norm,
                             "roots": [[z.real, z.imag]
                                       for z in np.asarray(current.roots)]})
        finals.append(None if lost else current)

    classified = []
    end_params = ModelParams(N=params_start.N,
                             tau=params_start.tau.real + 1j * target_im_tau,
                             eta=params_start.eta)
    for idx, final in enumerate(finals):
        if final is None:
            classified.append(None)
        elif final.kind == SINGULAR:
            regular = list(_reduce_mod_ipi(
                1j * np.pi * np.asarray(final.nu_roots, dtype=complex)))
            classified.append((regular, 0, None, SINGULAR))
        else:
            regular, m, side = _classify_roots(final, end_params)
            classified.append((regular, m, side, REGULAR))

    # injective assignment; a phantom exactly at the half period is
    # side-ambiguous up to the lattice gauge, so a side mismatch is only
    # penalized, which still separates the degenerate partner solutions
    big = 1e9
    cost = np.full((len(finals), len(xxz_solutions)), big)
    for i, cls in enumerate(classified):
        if cls is None:
            continue
        regular, m, side, kind = cls
        for j, xs in enumerate(xxz_solutions):
            if xs.phantom_count != m or xs.kind != kind:
                continue
            ref = (np.asarray(xs.regular_roots[2:], dtype=complex)
                   if kind == SINGULAR
                   else np.asarray(xs.regular_roots, dtype=complex))
            gap = _xxz_set_distance(np.asarray(regular, dtype=complex), ref)
            if gap > root_tol:
                continue
            penalty = 0.0 if (m == 0 or xs.phantom_side == side) else root_tol / 2
            cost[i, j] = gap + penalty

    from scipy.optimize import linear_sum_assignment
    rows, cols = linear_sum_assignment(cost)
    assignment = {int(i): int(j) for i, j in zip(rows, cols)
                  if cost[i, j] < big}

    entries = []
    for idx, cls in enumerate(classified):
        if cls is None:
            entries.append({"elliptic_index": idx, "xxz_index": None,
                            "m": None, "side": None, "root_gap": None,
                            "beta": elliptic_solutions[idx].beta})
            continue
        regular, m, side, kind = cls
        j = assignment.get(idx)
        gap = None
        if j is not None:
            xs = xxz_solutions[j]
            ref = (np.asarray(xs.regular_roots[2:], dtype=complex)
                   if kind == SINGULAR
                   else np.asarray(xs.regular_roots, dtype=complex))
            gap = float(_xxz_set_distance(np.asarray(regular, dtype=complex), ref))
        entries.append({
            "elliptic_index": idx,
            "xxz_index": j,
            "m": m,
            "side": side,
            "root_gap": gap,
            "beta": elliptic_solutions[idx].beta,
        })
    return CorrespondenceReport(entries=entries, warnings=warnings,
                                path_log=path_log)


def _continue_singular(sol: BetheSolution, params: ModelParams,
                       config: SolverConfig) -> BetheSolution:
    """Re-converge a bound-pair solution at new parameters."""
    from .baesolver import (
        _singular_jacobian,
        energy_singular,
        singular_bae_residual,
        sum_rule,
    )

    nu0 = np.asarray(sol.nu_roots, dtype=complex)
    if len(nu0) == 0:
        nu, norm = nu0, 0.0
    else:
        nu, norm = _damped_newton(
            nu0,
            lambda x: singular_bae_residual(x, sol.beta, params, config.pole_tol),
            lambda x: _singular_jacobian(x, params),
            config,
            step_cap=0.45 * (1.0 + abs(params.tau)),
        )
    defect, k, p = sum_rule(nu, sol.beta, params)
    out = BetheSolution(
        roots=np.concatenate(([params.eta / 2, -params.eta / 2], nu)),
        beta=sol.beta, sum_ints=(k, p), residual_norm=norm, kind=SINGULAR,
        nu_roots=nu, energy=energy_singular(nu, params, config.pole_tol),
        sum_defect=defect)
    return canonicalize(out, params)
