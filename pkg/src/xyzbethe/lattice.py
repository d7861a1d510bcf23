"""XYZ R-matrix, transfer matrix, Hamiltonian, and the dense ED oracle.

Site ``n`` of the chain occupies bit ``n - 1`` of the 2**N dimensional basis
index, so site 1 is the least significant bit.  Dense operators are plain
complex numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .elliptic import EllipticContext, bar_ell, ell, ell_prime
from .errors import (
    DegeneracyUnresolved,
    DimensionTooLarge,
    SingularInverse,
)

__all__ = [
    "ModelParams",
    "SpectrumEntry",
    "couplings",
    "r_matrix",
    "transfer_matrix",
    "hamiltonian",
    "hamiltonian_from_transfer",
    "exact_spectrum",
    "spectrum_to_json",
]

N_MAX_DEFAULT = 10

# probe points kept away from 0, eta and lattice shifts
PROBE_U0 = 0.2371 + 0.0193j
PROBE_U1 = 0.3139 - 0.0271j

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class ModelParams:
    """Problem definition: chain length, modular parameter, crossing parameter."""

    N: int
    tau: complex
    eta: complex
    genericity_guard: float = 1e-6
    n_max: int = N_MAX_DEFAULT
    ctx: EllipticContext = field(init=False)

    def __post_init__(self):
        if self.N < 2 or self.N % 2 != 0:
            raise ValueError(f"N must be even and >= 2, got {self.N}")
        object.__setattr__(self, "tau", complex(self.tau))
        object.__setattr__(self, "eta", complex(self.eta))
        object.__setattr__(self, "ctx", EllipticContext(self.tau))
        self._check_genericity()

    def _check_genericity(self, p_max: int = 8):
        """Reject eta at (2K + 2L*tau)/P for small integers: degenerate points."""
        eta, tau = self.eta, self.tau
        for p in range(1, p_max + 1):
            # only K, L making the candidate land near eta can matter
            k0 = round((eta.real * p) / 2)
            l0 = round((eta.imag * p) / (2 * tau.imag))
            for k in (k0 - 1, k0, k0 + 1):
                for l in (l0 - 1, l0, l0 + 1):
                    cand = (2 * k + 2 * l * tau) / p
                    if abs(eta - cand) < self.genericity_guard:
                        raise ValueError(
                            f"eta = {eta} is within {self.genericity_guard} of the "
                            f"root-of-unity point (2*{k} + 2*{l}*tau)/{p}"
                        )

    @property
    def M(self) -> int:
        return self.N // 2

    @property
    def dim(self) -> int:
        return 2 ** self.N

    @property
    def gamma(self) -> complex:
        return 1j * np.pi * self.eta


@dataclass
class SpectrumEntry:
    """One transfer-matrix eigenstate of the ED oracle."""

    energy: complex
    lambda_samples: list  # [(u, Lambda(u)), ...]
    degeneracy_tag: int = 0


def couplings(params: ModelParams) -> tuple[complex, complex, complex]:
    """Exchange couplings (J_x, J_y, J_z) from the crossing parameter."""
    ctx = params.ctx
    jx = ell(4, params.eta, ctx) / ell(4, 0.0, ctx)
    jy = ell(3, params.eta, ctx) / ell(3, 0.0, ctx)
    jz = ell(2, params.eta, ctx) / ell(2, 0.0, ctx)
    return jx, jy, jz


def r_matrix(u: complex, params: ModelParams) -> np.ndarray:
    """4x4 XYZ R-matrix at spectral parameter u."""
    ctx = params.ctx
    eta = params.eta
    b1_u, b4_u = bar_ell(1, u, ctx), bar_ell(4, u, ctx)
    b1_ue, b4_ue = bar_ell(1, u + eta, ctx), bar_ell(4, u + eta, ctx)
    b4_0 = bar_ell(4, 0.0, ctx)
    b1_e, b4_e = bar_ell(1, eta, ctx), bar_ell(4, eta, ctx)
    if abs(b1_e) < 1e-14 or abs(b4_e) < 1e-14:
        raise ZeroDivisionError(f"degenerate eta = {eta}: bar_ell_1/4(eta) vanishes")

    a1 = b4_u * b1_ue / (b4_0 * b1_e)
    a2 = b1_u * b4_ue / (b4_0 * b1_e)
    a3 = b4_u * b4_ue / (b4_0 * b4_e)
    a4 = b1_u * b1_ue / (b4_0 * b4_e)
    return np.array(
        [
            [a1, 0, 0, a4],
            [0, a2, a3, 0],
            [0, a3, a2, 0],
            [a4, 0, 0, a1],
        ],
        dtype=complex,
    )


def _transfer_from_r(r4: np.ndarray, n_sites: int) -> np.ndarray:
    """tr_0 { R_{0,N} ... R_{0,1} } by sequential auxiliary-space contraction.

    ``r4`` is the R-matrix reshaped to (a', s', a, s).  The chain block grows
    one site per step; site n becomes the most significant bit of the block.
    """
    # T[a', r', a, r] over sites 1..n
    t_blk = r4.copy()  # sites handled: {1}; shape (2, 2, 2, 2)
    d = 2
    for _ in range(1, n_sites):
        t_new = np.einsum("isbt,brau->isratu", r4, t_blk.reshape(2, d, 2, d))
        d *= 2
        t_blk = t_new.reshape(2, d, 2, d)
    return t_blk[0, :, 0, :] + t_blk[1, :, 1, :]


def transfer_matrix(u: complex, params: ModelParams) -> np.ndarray:
    """Dense transfer matrix t(u) on the 2**N chain space."""
    if params.N > params.n_max:
        raise DimensionTooLarge(f"N = {params.N} exceeds cap {params.n_max}")
    r4 = r_matrix(u, params).reshape(2, 2, 2, 2)
    return _transfer_from_r(r4, params.N)


def _pauli_on(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Single-site operator embedded on ``site`` (1-based, bit site-1)."""
    dim = 2 ** n_sites
    full = np.zeros((dim, dim), dtype=complex)
    low = 2 ** (site - 1)
    high = dim // (2 * low)
    block = np.kron(np.kron(np.eye(high), op), np.eye(low))
    full[:, :] = block
    return full


def hamiltonian(params: ModelParams) -> np.ndarray:
    """Nearest-neighbour XYZ Hamiltonian with periodic wrap."""
    if params.N > params.n_max:
        raise DimensionTooLarge(f"N = {params.N} exceeds cap {params.n_max}")
    n = params.N
    jx, jy, jz = couplings(params)
    h = np.zeros((params.dim, params.dim), dtype=complex)
    for site in range(1, n + 1):
        nxt = site % n + 1
        for coupling, sigma in ((jx, _SIGMA_X), (jy, _SIGMA_Y), (jz, _SIGMA_Z)):
            h += coupling * _pauli_on(sigma, site, n) @ _pauli_on(sigma, nxt, n)
    return h


def hamiltonian_from_transfer(params: ModelParams, step: float = 1e-6) -> np.ndarray:
    """H = 2 (ell_1(eta)/ell_1'(0)) t'(0) t(0)^{-1} - N (ell_1'(eta)/ell_1'(0)).

    t'(0) is a Richardson-extrapolated central difference.
    """
    ctx = params.ctx
    t0 = transfer_matrix(0.0, params)
    tp = transfer_matrix(step, params)
    tm = transfer_matrix(-step, params)
    tp2 = transfer_matrix(2 * step, params)
    tm2 = transfer_matrix(-2 * step, params)
    t_deriv = (8.0 * (tp - tm) - (tp2 - tm2)) / (12.0 * step)

    cond_probe = np.linalg.cond(t0)
    if not np.isfinite(cond_probe) or cond_probe > 1e12:
        raise SingularInverse(f"t(0) is numerically singular (cond ~ {cond_probe:.2e})")
    log_deriv = np.linalg.solve(t0.T, t_deriv.T).T  # t'(0) t(0)^{-1}

    coef = 2.0 * ell(1, params.eta, ctx) / ell_prime(0.0, ctx)
    shift = params.N * ell_prime(params.eta, ctx) / ell_prime(0.0, ctx)
    return coef * log_deriv - shift * np.eye(params.dim)


def _joint_diagonalize(mats: list[np.ndarray], max_attempts: int = 6):
    """Similarity that diagonalizes a commuting family of dense matrices.

    Diagonalizes a generic linear combination; the combination is re-drawn if
    the candidate eigenbasis fails to diagonalize every member.
    """
    rng = np.random.default_rng(20240611)
    dim = mats[0].shape[0]
    for _ in range(max_attempts):
        weights = rng.normal(size=len(mats)) + 1j * rng.normal(size=len(mats))
        combo = sum(w * m for w, m in zip(weights, mats))
        _, vecs = np.linalg.eig(combo)
        try:
            inv = np.linalg.inv(vecs)
        except np.linalg.LinAlgError:
            continue
        ok = True
        for m in mats:
            d = inv @ m @ vecs
            off = d - np.diag(np.diag(d))
            scale = max(np.max(np.abs(np.diag(d))), 1.0)
            if np.max(np.abs(off)) > 1e-8 * scale:
                ok = False
                break
        if ok:
            return vecs, inv
    raise DegeneracyUnresolved("no random probe combination split the spectrum")


def exact_spectrum(params: ModelParams, u_samples: list[complex],
                   u_probe: complex = PROBE_U0,
                   u_probe2: complex = PROBE_U1) -> list[SpectrumEntry]:
    """Full eigendecomposition of the commuting family {t(u), H}.

    Degenerate clusters of t(u_probe) are resolved by joint diagonalization
    with t at a second probe point.
    """
    if params.N > params.n_max:
        raise DimensionTooLarge(f"N = {params.N} exceeds cap {params.n_max}")
    t0 = transfer_matrix(u_probe, params)
    t1 = transfer_matrix(u_probe2, params)
    h = hamiltonian(params)
    vecs, inv = _joint_diagonalize([t0, t1, h])

    energies = np.diag(inv @ h @ vecs)
    sample_vals = [np.diag(inv @ transfer_matrix(u, params) @ vecs)
                   for u in u_samples]

    entries = []
    for i in range(params.dim):
        samples = [(u, sample_vals[k][i]) for k, u in enumerate(u_samples)]
        entries.append(SpectrumEntry(energy=complex(energies[i]),
                                     lambda_samples=samples))
    entries.sort(key=lambda e: (e.energy.real, e.energy.imag))
    for tag, entry in enumerate(entries):
        entry.degeneracy_tag = tag
    return entries


def spectrum_to_json(entries: list[SpectrumEntry]) -> list[dict]:
    """JSON-ready spectrum export, sorted by (Re E, Im E)."""
    out = []
    for e in sorted(entries, key=lambda s: (s.energy.real, s.energy.imag)):
        out.append({
            "energy_re": e.energy.real,
            "energy_im": e.energy.imag,
            "lambda_samples": [
                {"u_re": complex(u).real, "u_im": complex(u).imag,
                 "val_re": complex(v).real, "val_im": complex(v).imag}
                for u, v in e.lambda_samples
            ],
        })
    return out
