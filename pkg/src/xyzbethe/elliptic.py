"""Jacobi theta functions and the two wrapper families used by the XYZ chain.

The four theta functions are evaluated by direct summation of their
q-series.  Two nomes appear throughout: exp(i*pi*tau) for the ell_* family
and exp(2*i*pi*tau) for the bar_ell_* family.  All evaluations accept
scalars or numpy arrays in the argument u.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import NonConvergentNome, TruncationFailure

__all__ = [
    "EllipticContext",
    "theta",
    "theta1_prime",
    "ell",
    "ell_prime",
    "bar_ell",
]

_DEFAULT_TOL = 1e-14
_DEFAULT_MAX_TERMS = 64


def _q_power(q: complex, log_q: complex | None, power: float) -> complex:
    """q**power, using the supplied branch of log q when available.

    Powers of the nome are taken as exp(power * log_q) with log_q = i*pi*tau
    (or 2*i*pi*tau), so no principal-branch jump can occur when tau moves.
    """
    if q == 0:
        return 1.0 + 0.0j if power == 0 else 0.0 + 0.0j
    if log_q is None:
        log_q = cmath.log(q)
    return cmath.exp(power * log_q)


def _term_counts(q_abs: float, im_scale: float, half_integer: bool,
                 series_tol: float, max_terms: int) -> int:
    """Smallest term count whose next-term bound drops below series_tol."""
    if q_abs == 0.0:
        return 1
    log_q_abs = np.log(q_abs)
    for n in range(max_terms):
        if half_integer:
            exponent = (n + 0.5) ** 2
            growth = (2 * n + 1) * im_scale
        else:
            exponent = (n + 1) ** 2
            growth = 2 * (n + 1) * im_scale
        bound = 2.0 * np.exp(exponent * log_q_abs + growth)
        if bound < series_tol:
            return n + 1
    raise TruncationFailure(bound)


def theta(alpha: int, u, q: complex, *, series_tol: float = _DEFAULT_TOL,
          max_terms: int = _DEFAULT_MAX_TERMS, log_q: complex | None = None):
    """Jacobi theta function theta_alpha(u, q), alpha in {1, 2, 3, 4}.

    Summation stops once the modulus bound of the next term falls below
    ``series_tol``; TruncationFailure reports the achieved bound otherwise.
    """
    if alpha not in (1, 2, 3, 4):
        raise ValueError(f"alpha must be 1..4, got {alpha}")
    if abs(q) >= 1.0:
        raise NonConvergentNome(f"|q| = {abs(q)} >= 1")

    u_arr = np.asarray(u, dtype=complex)
    scalar = u_arr.ndim == 0
    u_flat = np.atleast_1d(u_arr)
    im_scale = float(np.max(np.abs(u_flat.imag))) if u_flat.size else 0.0

    half = alpha in (1, 2)
    n_terms = _term_counts(abs(q), im_scale, half, series_tol, max_terms)
    n = np.arange(n_terms)

    if half:
        coeff = np.array([2.0 * _q_power(q, log_q, (k + 0.5) ** 2) for k in n])
        if alpha == 1:
            coeff = coeff * (-1.0) ** n
            val = coeff @ np.sin(np.outer(2 * n + 1, u_flat))
        else:
            val = coeff @ np.cos(np.outer(2 * n + 1, u_flat))
    else:
        m = n + 1
        coeff = np.array([2.0 * _q_power(q, log_q, k ** 2) for k in m])
        if alpha == 4:
            coeff = coeff * (-1.0) ** m
        val = 1.0 + coeff @ np.cos(np.outer(2 * m, u_flat))

    return complex(val[0]) if scalar else val.reshape(u_arr.shape)


def theta1_prime(u, q: complex, *, series_tol: float = _DEFAULT_TOL,
                 max_terms: int = _DEFAULT_MAX_TERMS, log_q: complex | None = None):
    """d/du theta_1(u, q), by term-wise differentiation of the series."""
    if abs(q) >= 1.0:
        raise NonConvergentNome(f"|q| = {abs(q)} >= 1")

    u_arr = np.asarray(u, dtype=complex)
    scalar = u_arr.ndim == 0
    u_flat = np.atleast_1d(u_arr)
    im_scale = float(np.max(np.abs(u_flat.imag))) if u_flat.size else 0.0

    n_terms = _term_counts(abs(q), im_scale, True, series_tol, max_terms)
    n = np.arange(n_terms)
    coeff = np.array([2.0 * _q_power(q, log_q, (k + 0.5) ** 2) for k in n])
    coeff = coeff * (-1.0) ** n * (2 * n + 1)
    val = coeff @ np.cos(np.outer(2 * n + 1, u_flat))

    return complex(val[0]) if scalar else val.reshape(u_arr.shape)


@dataclass(frozen=True)
class EllipticContext:
    """Modular parameter, both nomes, and the series-truncation policy.

    Immutable after construction; safe to share across threads.
    """

    tau: complex
    series_tol: float = _DEFAULT_TOL
    max_terms: int = _DEFAULT_MAX_TERMS
    q_single: complex = field(init=False)
    q_double: complex = field(init=False)

    def __post_init__(self):
        tau = complex(self.tau)
        if tau.imag <= 0:
            raise ValueError(f"Im tau must be positive, got {tau}")
        if self.series_tol <= 0:
            raise ValueError("series_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")
        q1 = cmath.exp(1j * cmath.pi * tau)
        q2 = cmath.exp(2j * cmath.pi * tau)
        if abs(q1) > 0.95:
            raise NonConvergentNome(
                f"|exp(i pi tau)| = {abs(q1):.4f} > 0.95; tau too close to the real axis"
            )
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "q_single", q1)
        object.__setattr__(self, "q_double", q2)

    @property
    def log_q_single(self) -> complex:
        return 1j * cmath.pi * self.tau

    @property
    def log_q_double(self) -> complex:
        return 2j * cmath.pi * self.tau


def ell(alpha: int, u, ctx: EllipticContext):
    """ell_alpha(u) = theta_alpha(pi*u, exp(i*pi*tau))."""
    return theta(alpha, np.asarray(u, dtype=complex) * np.pi, ctx.q_single,
                 series_tol=ctx.series_tol, max_terms=ctx.max_terms,
                 log_q=ctx.log_q_single)


def ell_prime(u, ctx: EllipticContext):
    """d/du ell_1(u); the chain rule brings in a factor pi."""
    return np.pi * theta1_prime(np.asarray(u, dtype=complex) * np.pi, ctx.q_single,
                                series_tol=ctx.series_tol, max_terms=ctx.max_terms,
                                log_q=ctx.log_q_single)


def bar_ell(alpha: int, u, ctx: EllipticContext):
    """bar_ell_alpha(u) = theta_alpha(pi*u, exp(2*i*pi*tau))."""
    return theta(alpha, np.asarray(u, dtype=complex) * np.pi, ctx.q_double,
                 series_tol=ctx.series_tol, max_terms=ctx.max_terms,
                 log_q=ctx.log_q_double)
