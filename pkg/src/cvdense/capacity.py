"""Closed-form capacities, optimal resource split and break-even squeezing.

All information quantities are in nats. ``nbar`` is the mean number of
photons in the transmitted mode, counting both the modulation and the
photons already present in the squeezed resource.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .gaussian import ComplexAmplitude, _check_squeezing
from .protocol import conditional_beta_distribution, marginal_beta_distribution

BREAK_EVEN_BRACKET = (0.1, 2.0)
BREAK_EVEN_XTOL = 1e-9
DB_PER_NEPER = 20 * np.log10(np.e)


class BracketError(RuntimeError):
    """Raised when a root-finding bracket does not straddle a sign change."""


def _as_nbar(nbar):
    arr = np.asarray(nbar, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ValueError(f"photon number must be finite and >= 0, got {nbar!r}")
    return arr


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


def h_dense(sigma2, r):
    """Mutual information ``ln(1 + sigma2 * exp(2r))`` of the dense-coding channel."""
    s = np.asarray(sigma2, dtype=float)
    rr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(s)) or np.any(s < 0):
        raise ValueError(f"sigma2 must be finite and >= 0, got {sigma2!r}")
    if not np.all(np.isfinite(rr)) or np.any(rr < 0):
        raise ValueError(f"r must be finite and >= 0, got {r!r}")
    return _out(np.log1p(s * np.exp(2 * rr)))


def nbar_of_squeezing(r):
    """Photon budget ``exp(r) sinh(r)`` whose optimal squeezing is ``r``."""
    return _out(0.5 * np.expm1(2 * np.asarray(r, dtype=float)))


def optimal_allocation(nbar: float) -> tuple[float, float]:
    """Split a photon budget between squeezing and modulation.

    Maximizes ``h_dense(nbar - sinh(r)**2, r)`` over ``r``. The optimum sits at
    ``nbar = exp(r) sinh(r)``, i.e. ``r = ln(1 + 2 nbar) / 2`` and
    ``sigma2 = sinh(r) cosh(r)``.

    Returns:
        ``(r_opt, sigma2_opt)``.
    """
    nbar = float(_as_nbar(nbar))
    r_opt = 0.5 * np.log1p(2 * nbar)
    sigma2_opt = 0.5 * np.sinh(2 * r_opt)
    return float(r_opt), float(sigma2_opt)


def c_dense(nbar):
    """Dense-coding capacity ``ln(1 + nbar + nbar**2)``."""
    n = _as_nbar(nbar)
    big = n > 1
    safe = np.where(big, n, 1.0)
    with np.errstate(over="ignore"):
        # 2 ln n + ln(1 + 1/n + 1/n^2) keeps n^2 from overflowing
        c = np.where(
            big,
            2 * np.log(safe) + np.log1p(1 / safe + 1 / safe**2),
            np.log1p(n + n * np.where(big, 0.0, n)),
        )
    return _out(c)


def c_number(nbar):
    """Number-state (photon counting) capacity ``(1+n) ln(1+n) - n ln n``."""
    n = _as_nbar(nbar)
    big = n >= 1
    small = np.where(big | (n == 0), 0.5, n)
    large = np.where(big, n, 1.0)
    # n ln(1 + 1/n), split so that neither 1/n nor the difference of logs misbehaves
    tail = np.where(
        big,
        large * np.log1p(1.0 / large),
        np.where(n == 0, 0.0, small * (np.log1p(small) - np.log(small))),
    )
    return _out(np.log1p(n) + tail)


def c_coh(nbar):
    """Coherent-state heterodyne capacity ``ln(1 + nbar)``."""
    return _out(np.log1p(_as_nbar(nbar)))


def c_sq(nbar):
    """Single-mode squeezed-state capacity ``ln(1 + 2 nbar)``."""
    return _out(np.log1p(2 * _as_nbar(nbar)))


def squeezing_db(r):
    """Two-mode squeezing in decibels, ``10 log10(exp(2r))``."""
    rr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(rr)) or np.any(rr < 0):
        raise ValueError(f"r must be finite and >= 0, got {r!r}")
    return _out(DB_PER_NEPER * rr)


@dataclass(frozen=True)
class CapacityReport:
    nbar: float
    r_opt: float
    sigma2_opt: float
    c_dense: float
    c_number: float
    c_coh: float
    c_sq: float


@dataclass(frozen=True)
class BreakEvenResult:
    """Squeezing at which dense coding matches a single-mode benchmark."""

    r: float
    nbar: float
    db: float

    @classmethod
    def from_squeezing(cls, r: float) -> "BreakEvenResult":
        return cls(float(r), nbar_of_squeezing(r), squeezing_db(r))


def capacity_report(nbar: float) -> CapacityReport:
    r_opt, sigma2_opt = optimal_allocation(nbar)
    return CapacityReport(
        nbar=float(nbar),
        r_opt=r_opt,
        sigma2_opt=sigma2_opt,
        c_dense=c_dense(nbar),
        c_number=c_number(nbar),
        c_coh=c_coh(nbar),
        c_sq=c_sq(nbar),
    )


def capacity_sweep(nbar_grid) -> list[CapacityReport]:
    """One :class:`CapacityReport` per photon budget in ``nbar_grid``."""
    reports = []
    for i, nbar in enumerate(nbar_grid):
        try:
            nbar = float(nbar)
            _as_nbar(nbar)
        except (TypeError, ValueError):
            raise ValueError(f"invalid photon number at index {i}: {nbar!r}") from None
        reports.append(capacity_report(nbar))
    return reports


def bisect_root(func, lo: float, hi: float, xtol: float = BREAK_EVEN_XTOL) -> float:
    """Bracketed bisection; raises :class:`BracketError` on a bad bracket."""
    flo, fhi = func(lo), func(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo:.3g}, {fhi:.3g}")
    return optimize.bisect(func, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)


def _gap_vs_number(r: float) -> float:
    n = nbar_of_squeezing(r)
    return c_dense(n) - c_number(n)


def _gap_vs_squeezed(r: float) -> float:
    n = nbar_of_squeezing(r)
    return c_dense(n) - c_sq(n)


def break_even_vs_number() -> BreakEvenResult:
    """Squeezing above which dense coding beats number-state signalling."""
    return BreakEvenResult.from_squeezing(bisect_root(_gap_vs_number, *BREAK_EVEN_BRACKET))


def break_even_vs_squeezed(validate: bool = True) -> BreakEvenResult:
    """Squeezing above which dense coding beats single-mode squeezed signalling.

    The crossing is at ``nbar = 1`` exactly, i.e. ``r = ln(3)/2``. With
    ``validate`` the closed form is checked against bisection.
    """
    r = 0.5 * np.log(3.0)
    if validate:
        r_num = bisect_root(_gap_vs_squeezed, *BREAK_EVEN_BRACKET)
        if abs(r_num - r) > 2 * BREAK_EVEN_XTOL:
            raise RuntimeError(f"bisection root {r_num} disagrees with ln(3)/2")
    return BreakEvenResult(float(r), 1.0, squeezing_db(r))


def mutual_information_quadrature(sigma2: float, r: float, width: float = 12.0) -> float:
    """Mutual information of the dense-coding channel by direct integration.

    Integrates ``P(alpha) P(beta|alpha) ln(P(beta|alpha) / P(beta))`` using the
    conditional and marginal homodyne densities. The integrand factorizes over
    the two quadratures, so each is a 2-D integral over ``(alpha_d, beta_d)``;
    both are evaluated in coordinates standardized to the prior and the noise.
    """
    r = _check_squeezing(r)
    if not sigma2 > 0:
        raise ValueError("quadrature needs a non-degenerate prior (sigma2 > 0)")
    marginal = marginal_beta_distribution(r, sigma2)
    prior_std = np.sqrt(sigma2 / 2)
    total = 0.0
    for axis in ("re", "im"):
        var_m = getattr(marginal, f"var_{axis}")

        def integrand(v, u, axis=axis, var_m=var_m):
            a = prior_std * u
            alpha = ComplexAmplitude(a, 0.0) if axis == "re" else ComplexAmplitude(0.0, a)
            cond = conditional_beta_distribution(r, alpha)
            mu = getattr(cond.mean, axis)
            var_c = getattr(cond, f"var_{axis}")
            b = mu + np.sqrt(var_c) * v
            log_cond = -0.5 * v * v - 0.5 * np.log(2 * np.pi * var_c)
            log_marg = -0.5 * b * b / var_m - 0.5 * np.log(2 * np.pi * var_m)
            weight = np.exp(-0.5 * (u * u + v * v)) / (2 * np.pi)
            return weight * (log_cond - log_marg)

        val, _ = integrate.dblquad(
            integrand, -width, width, -width, width, epsabs=1e-11, epsrel=1e-11
        )
        total += val
    return float(total)
