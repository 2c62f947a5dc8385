"""Monte Carlo estimates of the channel's mutual information and noise."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .capacity import h_dense
from .protocol import RECEIVER_GAIN, ProtocolConfig, TrialRecord, TrialRecords, run_trials

MIN_MI_RECORDS = 100
BOOTSTRAP_RESAMPLES = 200


@dataclass(frozen=True)
class MiEstimate:
    """Estimated mutual information in nats.

    ``degenerate`` is set when the raw variance-ratio estimate came out
    negative and was clamped to zero.
    """

    nats: float
    std_error: float
    trials: int
    degenerate: bool = False


@dataclass(frozen=True)
class ResidualVariance:
    re: float
    im: float


@dataclass(frozen=True)
class BiasRow:
    trials: int
    estimate: float
    analytic: float
    gap: float


class DegenerateChannelError(ValueError):
    """Raised when the residual noise has zero sample variance."""


def _columns(records) -> TrialRecords:
    if isinstance(records, TrialRecords):
        return records
    return TrialRecords.from_records(list(records))


def _moment_columns(batch: TrialRecords) -> np.ndarray:
    # columns: beta_re, beta_im, residual_re, residual_im
    residual = batch.beta - batch.alpha_in / RECEIVER_GAIN
    return np.hstack([batch.beta, residual])


def _mi_from_moments(s1: np.ndarray, s2: np.ndarray, n: float) -> np.ndarray:
    """Variance-ratio MI from column sums ``s1`` and sums of squares ``s2``.

    Works on stacked rows, one row per (re)sample.
    """
    var = (s2 - s1 * s1 / n) / (n - 1)
    var_tot, var_res = var[..., :2], var[..., 2:]
    return 0.5 * np.sum(np.log(var_tot / var_res), axis=-1)


def estimate_mi_gaussian(
    records: Sequence[TrialRecord],
    *,
    n_boot: int = BOOTSTRAP_RESAMPLES,
    seed: int = 0,
) -> MiEstimate:
    """Variance-ratio estimate of the mutual information between symbol and output.

    Every distribution in the protocol is Gaussian, so per quadrature the
    mutual information is ``0.5 * ln(V_tot / V_res)`` with ``V_tot`` the sample
    variance of ``beta`` and ``V_res`` that of ``beta - alpha_in/sqrt(2)``.
    The standard error comes from a nonparametric bootstrap whose resampling
    stream is fixed by ``seed``.

    Raises:
        ValueError: Fewer than 100 records.
        DegenerateChannelError: The residual has zero sample variance.
    """
    batch = _columns(records)
    n = len(batch)
    if n < MIN_MI_RECORDS:
        raise ValueError(f"need at least {MIN_MI_RECORDS} records, got {n}")
    cols = _moment_columns(batch)
    s1, s2 = cols.sum(axis=0), (cols * cols).sum(axis=0)
    var_res = (s2[2:] - s1[2:] ** 2 / n) / (n - 1)
    if np.any(var_res <= 0):
        raise DegenerateChannelError("residual variance is zero; mutual information is unbounded")
    raw = float(_mi_from_moments(s1, s2, n))

    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0x5EED,)))
    sq = cols * cols
    boot = np.empty(n_boot)
    for b in range(n_boot):
        # multiplicity weights of a size-n resample with replacement
        w = np.bincount(rng.integers(0, n, n), minlength=n).astype(float)
        boot[b] = _mi_from_moments(w @ cols, w @ sq, n)
    std_error = float(np.std(boot, ddof=1)) if n_boot > 1 else float("nan")

    degenerate = raw < 0
    return MiEstimate(max(raw, 0.0), std_error, n, degenerate)


def estimate_residual_variance(records: Sequence[TrialRecord]) -> ResidualVariance:
    """Sample variance of ``alpha_out - alpha_in`` for each quadrature."""
    batch = _columns(records)
    if len(batch) < 2:
        raise ValueError(f"need at least 2 records, got {len(batch)}")
    var = np.var(batch.alpha_out - batch.alpha_in, axis=0, ddof=1)
    return ResidualVariance(float(var[0]), float(var[1]))


def estimator_bias_report(
    r: float, sigma2: float, trial_counts: Sequence[int], seed: int = 0
) -> list[BiasRow]:
    """Point estimates against the analytic value for increasing trial counts.

    Each row uses an independent batch; the batch for the ``i``-th count is
    seeded from ``(seed, i)``.
    """
    analytic = h_dense(sigma2, r)
    base = np.random.SeedSequence(seed)
    rows = []
    for count, child in zip(trial_counts, base.spawn(len(trial_counts))):
        if not isinstance(count, (int, np.integer)) or count < MIN_MI_RECORDS:
            raise ValueError(f"trial counts must be integers >= {MIN_MI_RECORDS}, got {count!r}")
        batch_seed = int(child.generate_state(1, np.uint64)[0])
        batch = run_trials(ProtocolConfig(r, sigma2, int(count), batch_seed))
        est = estimate_mi_gaussian(batch, n_boot=0).nats
        rows.append(BiasRow(int(count), est, analytic, abs(est - analytic)))
    return rows
