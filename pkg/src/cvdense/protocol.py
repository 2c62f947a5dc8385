"""End-to-end dense-coding rounds.

Alice displaces mode 0 of a two-mode squeezed pair by her symbol ``alpha_in``
and sends it to Bob. Bob mixes it with mode 1 on a 50-50 beam splitter, reads
``x`` on the sum port and ``p`` on the difference port, and rescales the pair
by ``sqrt(2)`` to obtain an unbiased estimate ``alpha_out`` of ``alpha_in``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence, overload

import numpy as np

from .gaussian import (
    VACUUM_VARIANCE,
    ComplexAmplitude,
    GaussianState,
    beamsplitter_5050,
    displace,
    homodyne_sampler,
    two_mode_squeezed,
    _check_squeezing,
)

RECEIVER_GAIN = np.sqrt(2.0)
DECODE_SELECTIONS = ((0, "x"), (1, "p"))
DEFAULT_CHUNK_SIZE = 1 << 16


@dataclass(frozen=True)
class ProtocolConfig:
    """Parameters of a batch of protocol rounds.

    Attributes:
        r: Squeezing parameter of the shared EPR pair.
        sigma2: Variance of the Gaussian signal prior, ``E|alpha|^2``.
        trials: Number of independent rounds.
        seed: Unsigned 64-bit seed for the whole batch.
    """

    r: float
    sigma2: float
    trials: int
    seed: int = 0

    def __post_init__(self):
        _check_squeezing(self.r)
        _check_sigma2(self.sigma2)
        if not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class TrialRecord:
    """One protocol round: sent symbol, raw homodyne pair, rescaled output."""

    alpha_in: ComplexAmplitude
    beta: ComplexAmplitude

    @property
    def alpha_out(self) -> ComplexAmplitude:
        return self.beta * RECEIVER_GAIN


class TrialRecords(Sequence[TrialRecord]):
    """Column-oriented batch of protocol rounds.

    Behaves as a read-only sequence of :class:`TrialRecord` while keeping the
    data in ``(n, 2)`` arrays so that a million rounds stay cheap.
    """

    def __init__(self, alpha_in: np.ndarray, beta: np.ndarray):
        alpha_in = np.asarray(alpha_in, dtype=float)
        beta = np.asarray(beta, dtype=float)
        if alpha_in.ndim != 2 or alpha_in.shape[1] != 2 or alpha_in.shape != beta.shape:
            raise ValueError("alpha_in and beta must both have shape (n, 2)")
        alpha_in.setflags(write=False)
        beta.setflags(write=False)
        self.alpha_in = alpha_in
        self.beta = beta

    @classmethod
    def from_records(cls, records: Sequence[TrialRecord]) -> "TrialRecords":
        if isinstance(records, TrialRecords):
            return records
        alpha_in = np.array([(t.alpha_in.re, t.alpha_in.im) for t in records], dtype=float)
        beta = np.array([(t.beta.re, t.beta.im) for t in records], dtype=float)
        return cls(alpha_in.reshape(-1, 2), beta.reshape(-1, 2))

    @classmethod
    def concatenate(cls, parts: Sequence["TrialRecords"]) -> "TrialRecords":
        return cls(
            np.concatenate([p.alpha_in for p in parts]),
            np.concatenate([p.beta for p in parts]),
        )

    @property
    def alpha_out(self) -> np.ndarray:
        return self.beta * RECEIVER_GAIN

    def __len__(self) -> int:
        return self.alpha_in.shape[0]

    @overload
    def __getitem__(self, i: int) -> TrialRecord: ...

    @overload
    def __getitem__(self, i: slice) -> "TrialRecords": ...

    def __getitem__(self, i):
        if isinstance(i, slice):
            return TrialRecords(self.alpha_in[i], self.beta[i])
        a, b = self.alpha_in[i], self.beta[i]
        return TrialRecord(ComplexAmplitude(a[0], a[1]), ComplexAmplitude(b[0], b[1]))

    def __iter__(self) -> Iterator[TrialRecord]:
        for i in range(len(self)):
            yield self[i]


@dataclass(frozen=True)
class BivariateGaussian:
    """Complex-valued normal variable with independent real and imaginary parts."""

    mean: ComplexAmplitude
    var_re: float
    var_im: float

    def __post_init__(self):
        if not (self.var_re > 0 and self.var_im > 0):
            raise ValueError("variances must be positive")

    def pdf(self, re, im):
        """Joint density at ``(re, im)``; broadcasts over arrays."""
        return np.exp(self.logpdf(re, im))

    def logpdf(self, re, im):
        dre = np.asarray(re) - self.mean.re
        dim = np.asarray(im) - self.mean.im
        return (
            -0.5 * dre**2 / self.var_re
            - 0.5 * dim**2 / self.var_im
            - 0.5 * np.log(4 * np.pi**2 * self.var_re * self.var_im)
        )


def _check_sigma2(sigma2: float) -> float:
    sigma2 = float(sigma2)
    if not np.isfinite(sigma2) or sigma2 < 0:
        raise ValueError(f"signal variance must be finite and >= 0, got {sigma2}")
    return sigma2


def sample_signals(sigma2: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` symbols from the Gaussian prior as an ``(size, 2)`` array."""
    sigma2 = _check_sigma2(sigma2)
    return np.sqrt(sigma2 / 2) * rng.standard_normal((size, 2))


def sample_signal(sigma2: float, rng: np.random.Generator) -> ComplexAmplitude:
    """Draw one symbol with independent quadratures of variance ``sigma2/2``."""
    re, im = sample_signals(sigma2, 1, rng)[0]
    return ComplexAmplitude(re, im)


def encode(r: float, alpha_in: ComplexAmplitude) -> GaussianState:
    """Alice's transmitted state: the EPR pair with mode 0 displaced by ``alpha_in``."""
    return displace(two_mode_squeezed(r), 0, alpha_in)


def decode(
    state: GaussianState, rng: np.random.Generator
) -> tuple[ComplexAmplitude, ComplexAmplitude]:
    """Bob's receiver: beam splitter, homodyne on both ports, rescale.

    Returns:
        ``(beta, alpha_out)`` with ``beta = x_sum + i p_diff`` and
        ``alpha_out = sqrt(2) * beta``.
    """
    if state.num_modes != 2:
        raise ValueError(f"decoder expects a 2-mode state, got {state.num_modes} modes")
    mixed = beamsplitter_5050(state, 0, 1)
    mean, factor = homodyne_sampler(mixed, DECODE_SELECTIONS)
    x, p = mean + factor @ rng.standard_normal(2)
    beta = ComplexAmplitude(x, p)
    return beta, beta * RECEIVER_GAIN


def conditional_beta_distribution(r: float, alpha_in: ComplexAmplitude) -> BivariateGaussian:
    """Distribution of the homodyne pair given the sent symbol."""
    r = _check_squeezing(r)
    if not isinstance(alpha_in, ComplexAmplitude):
        alpha_in = ComplexAmplitude.from_complex(alpha_in)
    var = VACUUM_VARIANCE * np.exp(-2 * r)
    return BivariateGaussian(alpha_in / RECEIVER_GAIN, var, var)


def marginal_beta_distribution(r: float, sigma2: float) -> BivariateGaussian:
    """Distribution of the homodyne pair averaged over the signal prior."""
    r = _check_squeezing(r)
    sigma2 = _check_sigma2(sigma2)
    var = VACUUM_VARIANCE * (sigma2 + np.exp(-2 * r))
    return BivariateGaussian(ComplexAmplitude(0.0, 0.0), var, var)


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    """Independent generator for chunk ``chunk`` of a batch seeded by ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))


def _receiver_factor(r: float) -> np.ndarray:
    # mean of the homodyne pair is linear in alpha_in; covariance is fixed
    mixed = beamsplitter_5050(two_mode_squeezed(r), 0, 1)
    _, factor = homodyne_sampler(mixed, DECODE_SELECTIONS)
    return factor


def _run_chunk(config: ProtocolConfig, chunk: int, size: int, factor: np.ndarray) -> TrialRecords:
    rng = chunk_rng(config.seed, chunk)
    alpha_in = sample_signals(config.sigma2, size, rng)
    noise = rng.standard_normal((size, 2)) @ factor.T
    return TrialRecords(alpha_in, alpha_in / RECEIVER_GAIN + noise)


def run_trials(
    config: ProtocolConfig,
    *,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> TrialRecords:
    """Simulate ``config.trials`` independent protocol rounds.

    The batch is split into chunks of ``chunk_size`` rounds; chunk ``k`` draws
    from its own stream derived from ``(config.seed, k)``, so the result
    depends on ``(seed, chunk_size)`` only and not on ``workers``.

    Each chunk applies the same linear map as :func:`encode` followed by
    :func:`decode`, vectorized over rounds.
    """
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    factor = _receiver_factor(config.r)
    sizes = [min(chunk_size, config.trials - start) for start in range(0, config.trials, chunk_size)]
    try:
        if workers == 1 or len(sizes) == 1:
            parts = [_run_chunk(config, k, n, factor) for k, n in enumerate(sizes)]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(
                    pool.map(lambda kn: _run_chunk(config, kn[0], kn[1], factor), enumerate(sizes))
                )
        return TrialRecords.concatenate(parts)
    except MemoryError:
        raise MemoryError(
            f"not enough memory to simulate {config.trials} trials; reduce the trial count"
        ) from None
