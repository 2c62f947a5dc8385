"""Gaussian states of bosonic modes and the symplectic operations used by the
dense-coding protocol.

Conventions
-----------
* Quadratures are ordered ``(x_1, p_1, ..., x_N, p_N)``.
* The vacuum variance of every quadrature is **1/4** (so ``alpha = x + i p``
  with ``<x> = Re alpha``). Many texts use 1/2; every variance in this package
  is in the 1/4 convention.
* The two-mode squeezed state squeezes ``x_1 + x_2`` and ``p_1 - p_2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np

VACUUM_VARIANCE = 0.25

Quadrature = Literal["x", "p"]

_SYMMETRY_RTOL = 1e-12
_ADMISSIBILITY_SLACK = 1e-9


@dataclass(frozen=True)
class ComplexAmplitude:
    """Classical phase-space point ``alpha = re + i*im`` in quadrature units."""

    re: float
    im: float

    def __post_init__(self):
        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "im", float(self.im))
        if not (np.isfinite(self.re) and np.isfinite(self.im)):
            raise ValueError(f"amplitude must be finite, got ({self.re}, {self.im})")

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexAmplitude":
        z = complex(z)
        return cls(z.real, z.imag)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return float(np.hypot(self.re, self.im))

    def __add__(self, other: "ComplexAmplitude") -> "ComplexAmplitude":
        if not isinstance(other, ComplexAmplitude):
            return NotImplemented
        return ComplexAmplitude(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexAmplitude") -> "ComplexAmplitude":
        if not isinstance(other, ComplexAmplitude):
            return NotImplemented
        return ComplexAmplitude(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexAmplitude":
        return ComplexAmplitude(-self.re, -self.im)

    def __mul__(self, factor: float) -> "ComplexAmplitude":
        if isinstance(factor, ComplexAmplitude):
            return NotImplemented
        return ComplexAmplitude(self.re * factor, self.im * factor)

    __rmul__ = __mul__

    def __truediv__(self, factor: float) -> "ComplexAmplitude":
        return ComplexAmplitude(self.re / factor, self.im / factor)


@dataclass(frozen=True)
class ScalarGaussian:
    """Mean and variance of a one-dimensional normal distribution."""

    mean: float
    variance: float

    def __post_init__(self):
        if not self.variance > 0:
            raise ValueError(f"variance must be positive, got {self.variance}")

    @property
    def std(self) -> float:
        return float(np.sqrt(self.variance))


def symplectic_form(num_modes: int) -> np.ndarray:
    """Symplectic form for the ``(x_1, p_1, x_2, p_2, ...)`` ordering."""
    return np.kron(np.eye(num_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a covariance matrix, sorted ascending.

    Uses the Hermitian matrix ``i * S @ Omega @ S`` with ``S = sqrt(cov)``,
    whose eigenvalues are ``+/- nu``; this stays accurate for strongly squeezed
    states where ``i * Omega @ cov`` does not.
    """
    num_modes = cov.shape[0] // 2
    w, v = np.linalg.eigh(cov)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    eig = np.linalg.eigvalsh(1j * (root @ symplectic_form(num_modes) @ root))
    return np.sort(np.abs(eig))[::2]


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First and second quadrature moments of an ``N``-mode Gaussian state.

    Instances are immutable; all operations return new states. The arrays
    are marked read-only after validation.

    Args:
        num_modes: Number of bosonic modes ``N``.
        mean: Length ``2N`` mean vector ordered ``(x_1, p_1, ..., x_N, p_N)``.
        cov: ``2N x 2N`` covariance matrix (vacuum = ``0.25 * I``).

    Raises:
        ValueError: If shapes are inconsistent, ``cov`` is not symmetric or not
            positive definite, or violates the uncertainty principle.
    """

    num_modes: int
    mean: np.ndarray = field(repr=False)
    cov: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = int(self.num_modes)
        if n < 1:
            raise ValueError(f"num_modes must be >= 1, got {self.num_modes}")
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float)
        if mean.shape != (2 * n,):
            raise ValueError(f"mean must have length {2 * n}, got shape {mean.shape}")
        if cov.shape != (2 * n, 2 * n):
            raise ValueError(f"cov must be {2 * n}x{2 * n}, got shape {cov.shape}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise ValueError("mean and cov must be finite")
        scale = max(np.max(np.abs(cov)), 1.0)
        if np.max(np.abs(cov - cov.T)) > _SYMMETRY_RTOL * scale:
            raise ValueError("cov is not symmetric")
        cov = 0.5 * (cov + cov.T)
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise ValueError("cov is not positive definite") from None
        nu_min = symplectic_eigenvalues(cov)[0]
        # entry rounding of size eps*||cov|| moves nu by up to nu*eps*cond(cov)
        slack = _ADMISSIBILITY_SLACK + 16 * VACUUM_VARIANCE * np.finfo(float).eps * np.linalg.cond(cov)
        if nu_min < VACUUM_VARIANCE - slack:
            raise ValueError(
                f"cov violates the uncertainty principle "
                f"(smallest symplectic eigenvalue {nu_min:.6g} < 1/4)"
            )
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "num_modes", n)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    def __repr__(self):
        return f"GaussianState(num_modes={self.num_modes}, mean={self.mean.tolist()})"

    @property
    def purity(self) -> float:
        """``Tr(rho^2) = (1/4)^N / sqrt(det cov)``; equals 1 for pure states."""
        return float(VACUUM_VARIANCE**self.num_modes / np.sqrt(np.linalg.det(self.cov)))

    def transform(self, symplectic: np.ndarray) -> "GaussianState":
        """Apply a linear symplectic map ``S`` congruently: ``S m``, ``S V S^T``."""
        s = np.asarray(symplectic, dtype=float)
        cov = s @ self.cov @ s.T
        return GaussianState(self.num_modes, s @ self.mean, 0.5 * (cov + cov.T))

    def reduced(self, modes: Sequence[int]) -> "GaussianState":
        """Marginal state of a subset of modes."""
        idx = _quadrature_indices(self.num_modes, modes)
        return GaussianState(len(modes), self.mean[idx], self.cov[np.ix_(idx, idx)])


def _check_mode(state: GaussianState, mode: int) -> int:
    if not isinstance(mode, (int, np.integer)) or not 0 <= mode < state.num_modes:
        raise IndexError(f"mode {mode!r} out of range for {state.num_modes}-mode state")
    return int(mode)


def _quadrature_indices(num_modes: int, modes: Iterable[int]) -> list[int]:
    idx = []
    for m in modes:
        if not 0 <= m < num_modes:
            raise IndexError(f"mode {m} out of range for {num_modes}-mode state")
        idx.extend((2 * m, 2 * m + 1))
    return idx


def _quadrature_index(state: GaussianState, mode: int, which: Quadrature) -> int:
    mode = _check_mode(state, mode)
    if which not in ("x", "p"):
        raise ValueError(f"quadrature must be 'x' or 'p', got {which!r}")
    return 2 * mode + (which == "p")


def vacuum(num_modes: int) -> GaussianState:
    """Vacuum state of ``num_modes`` modes."""
    if not isinstance(num_modes, (int, np.integer)) or num_modes < 1:
        raise ValueError(f"num_modes must be a positive integer, got {num_modes!r}")
    return GaussianState(
        num_modes, np.zeros(2 * num_modes), VACUUM_VARIANCE * np.eye(2 * num_modes)
    )


def two_mode_squeezed(r: float) -> GaussianState:
    """Two-mode squeezed vacuum with squeezing parameter ``r >= 0``.

    ``var(x_i) = var(p_i) = cosh(2r)/4``, ``cov(x_1, x_2) = -sinh(2r)/4`` and
    ``cov(p_1, p_2) = +sinh(2r)/4``, so ``x_1 + x_2`` and ``p_1 - p_2`` have
    variance ``exp(-2r)/2``.
    """
    r = _check_squeezing(r)
    c = np.cosh(2 * r) * VACUUM_VARIANCE
    s = np.sinh(2 * r) * VACUUM_VARIANCE
    cov = np.array(
        [
            [c, 0.0, -s, 0.0],
            [0.0, c, 0.0, s],
            [-s, 0.0, c, 0.0],
            [0.0, s, 0.0, c],
        ]
    )
    return GaussianState(2, np.zeros(4), cov)


def _check_squeezing(r: float) -> float:
    r = float(r)
    if not np.isfinite(r) or r < 0:
        raise ValueError(f"squeezing parameter must be finite and >= 0, got {r}")
    return r


def displace(state: GaussianState, mode: int, amount: ComplexAmplitude) -> GaussianState:
    """Shift the mean of ``mode`` by ``amount``; the covariance is untouched."""
    mode = _check_mode(state, mode)
    if not isinstance(amount, ComplexAmplitude):
        amount = ComplexAmplitude.from_complex(amount)
    mean = state.mean.copy()
    mean[2 * mode] += amount.re
    mean[2 * mode + 1] += amount.im
    return GaussianState(state.num_modes, mean, state.cov)


def beamsplitter_matrix(num_modes: int, mode_a: int, mode_b: int) -> np.ndarray:
    """Symplectic matrix of a 50-50 beam splitter.

    Output ``mode_a`` carries ``(a + b)/sqrt(2)`` and output ``mode_b`` carries
    ``(a - b)/sqrt(2)``, for both quadratures.
    """
    h = np.sqrt(0.5)
    s = np.eye(2 * num_modes)
    for q in (0, 1):
        ia, ib = 2 * mode_a + q, 2 * mode_b + q
        s[ia, ia], s[ia, ib] = h, h
        s[ib, ia], s[ib, ib] = h, -h
    return s


def beamsplitter_5050(state: GaussianState, mode_a: int, mode_b: int) -> GaussianState:
    """Combine two modes on a balanced beam splitter.

    Output ``mode_a`` is the sum port and output ``mode_b`` the difference
    port. The map is its own inverse.
    """
    mode_a = _check_mode(state, mode_a)
    mode_b = _check_mode(state, mode_b)
    if mode_a == mode_b:
        raise ValueError(f"beam splitter needs two distinct modes, got {mode_a} twice")
    return state.transform(beamsplitter_matrix(state.num_modes, mode_a, mode_b))


def quadrature_marginal(state: GaussianState, mode: int, which: Quadrature) -> ScalarGaussian:
    """Exact distribution of a single quadrature of one mode."""
    i = _quadrature_index(state, mode, which)
    return ScalarGaussian(float(state.mean[i]), float(state.cov[i, i]))


def _cholesky_psd(cov: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        # semidefinite: clip negative rounding eigenvalues to zero
        w, v = np.linalg.eigh(cov)
        return v * np.sqrt(np.clip(w, 0.0, None))


def homodyne_sampler(
    state: GaussianState, selections: Sequence[tuple[int, Quadrature]]
) -> tuple[np.ndarray, np.ndarray]:
    """Mean subvector and a square-root factor for the selected quadratures.

    A draw is ``mean + factor @ z`` with ``z`` standard normal. Selections on
    the same mode are rejected because ``x`` and ``p`` of one mode do not
    commute.
    """
    modes = [m for m, _ in selections]
    if len(set(modes)) != len(modes):
        raise ValueError("homodyne selections must reference distinct modes")
    if not selections:
        raise ValueError("at least one quadrature must be selected")
    idx = [_quadrature_index(state, m, q) for m, q in selections]
    return state.mean[idx].copy(), _cholesky_psd(state.cov[np.ix_(idx, idx)])


def joint_homodyne_sample(
    state: GaussianState,
    selections: Sequence[tuple[int, Quadrature]],
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw one joint outcome of ideal homodyne detection.

    Args:
        state: State being measured.
        selections: ``(mode, "x" | "p")`` pairs, at most one per mode.
        rng: Generator consumed for ``len(selections)`` standard normals.

    Returns:
        Outcome vector in the order of ``selections``.
    """
    mean, factor = homodyne_sampler(state, selections)
    return mean + factor @ rng.standard_normal(len(selections))


def mean_photon(state: GaussianState, mode: int) -> float:
    """Mean photon number ``var(x) + var(p) + <x>^2 + <p>^2 - 1/2`` of ``mode``."""
    mode = _check_mode(state, mode)
    i = 2 * mode
    n = (
        state.cov[i, i]
        + state.cov[i + 1, i + 1]
        + state.mean[i] ** 2
        + state.mean[i + 1] ** 2
        - 2 * VACUUM_VARIANCE
    )
    return float(max(n, 0.0))
