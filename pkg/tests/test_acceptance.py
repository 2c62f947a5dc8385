"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (with timing) that ``conftest.py`` prints
in the terminal summary.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy import stats

from cvdense.capacity import (
    break_even_vs_number,
    break_even_vs_squeezed,
    c_coh,
    c_dense,
    c_number,
    c_sq,
    h_dense,
    mutual_information_quadrature,
    nbar_of_squeezing,
    optimal_allocation,
)
from cvdense.estimation import estimate_mi_gaussian, estimate_residual_variance
from cvdense.gaussian import ComplexAmplitude, beamsplitter_5050, two_mode_squeezed
from cvdense.protocol import (
    ProtocolConfig,
    conditional_beta_distribution,
    decode,
    encode,
    run_trials,
)

RESULTS = []


class Criterion:
    def __init__(self, number, title, budget_s):
        self.number, self.title, self.budget_s = number, title, budget_s
        self.checks = []

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def check(self, label, ok):
        self.checks.append((label, bool(ok)))

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        self.check(f"runtime {elapsed:.2f}s < {self.budget_s}s", elapsed < self.budget_s)
        failed = [label for label, ok in self.checks if not ok]
        status = "PASS" if exc_type is None and not failed else "FAIL"
        detail = "; ".join(label for label, _ in self.checks)
        RESULTS.append(f"[{status}] AC{self.number} {self.title}: {detail}")
        print(RESULTS[-1])
        if exc_type is None:
            assert not failed, f"AC{self.number} failed: {failed}"
        return False


def test_ac1_break_even_vs_number():
    with Criterion(1, "break-even vs number state", 1.0) as c:
        res = break_even_vs_number()
        c.check(f"r={res.r:.6f} in 0.7809+-5e-4", abs(res.r - 0.7809) <= 5e-4)
        c.check(f"dB={res.db:.4f} in 6.78+-0.01", abs(res.db - 6.78) <= 0.01)
        c.check(f"nbar={res.nbar:.5f} in 1.884+-1e-3", abs(res.nbar - 1.884) <= 1e-3)


def test_ac2_break_even_vs_squeezed():
    with Criterion(2, "break-even vs squeezed state", 1.0) as c:
        res = break_even_vs_squeezed()
        c.check(f"r={res.r:.9f} = ln3/2 +-1e-6", abs(res.r - 0.5 * math.log(3)) <= 1e-6)
        c.check(f"dB={res.db:.4f} in 4.77+-0.01", abs(res.db - 4.77) <= 0.01)
        c.check(f"nbar={res.nbar!r} == 1", res.nbar == 1.0)


def test_ac3_capacity_identities():
    with Criterion(3, "capacity identities", 1.0) as c:
        ln3 = math.log(3)
        c.check("c_dense(1)=ln3 to 1e-12", abs(c_dense(1.0) - ln3) <= 1e-12)
        c.check("c_sq(1)=ln3 to 1e-12", abs(c_sq(1.0) - ln3) <= 1e-12)
        grid = np.geomspace(1e-3, 1e3, 50)
        c.check("c_dense > c_coh on 50 log points", np.all(c_dense(grid) > c_coh(grid)))


def test_ac4_asymptotic_doubling():
    with Criterion(4, "asymptotic doubling at r=5", 1.0) as c:
        r = 5.0
        n = nbar_of_squeezing(r)
        ratio = c_dense(n) / c_number(n)
        dense_4r = c_dense(n) / (4 * r)
        c.check(f"c_dense/c_number={ratio:.4f} in [1.9, 2.0]", 1.9 <= ratio <= 2.0)
        c.check(f"c_dense/(4r)={dense_4r:.4f} in [0.95, 1.05]", 0.95 <= dense_4r <= 1.05)


@pytest.mark.parametrize("nbar", [0.5, 1.0, 3.194528, 10.0])
def test_ac5_allocation_optimality(nbar):
    with Criterion(5, f"allocation optimality nbar={nbar}", 5.0) as c:
        r_opt, sigma2_opt = optimal_allocation(nbar)
        r = np.linspace(0.0, 1.2 * r_opt + 0.5, 1000)
        sigma2 = nbar - np.sinh(r) ** 2
        feasible = sigma2 >= 0
        h = np.full(r.shape, -np.inf)
        h[feasible] = h_dense(sigma2[feasible], r[feasible])
        step = r[1] - r[0]
        r_peak = r[np.argmax(h)]
        c.check(f"|r_peak - r_opt|={abs(r_peak - r_opt):.2e} <= step {step:.2e}", abs(r_peak - r_opt) <= step)
        gap = abs(h_dense(sigma2_opt, r_opt) - c_dense(nbar))
        c.check(f"h_dense(opt) - c_dense = {gap:.1e} <= 1e-12", gap <= 1e-12)


def test_ac6_monte_carlo_mi():
    with Criterion(6, "Monte Carlo MI at r=1, sigma2=1.813430", 30.0) as c:
        sigma2, r = 1.813430, 1.0
        batch = run_trials(ProtocolConfig(r, sigma2, 1_000_000, seed=2024))
        est = estimate_mi_gaussian(batch, seed=2024)
        analytic = h_dense(sigma2, r)
        c.check(f"|I - 2.667158|={abs(est.nats - 2.667158):.4f} <= 0.02", abs(est.nats - 2.667158) <= 0.02)
        c.check(
            f"|I - ln(1+s2 e^2r)|={abs(est.nats - analytic):.4f} <= 4 se ({4 * est.std_error:.4f})",
            abs(est.nats - analytic) <= 4 * est.std_error,
        )


def test_ac7_conditional_statistics():
    with Criterion(7, "conditional statistics", 60.0) as c:
        for r in (0.0, 1.0):
            res = estimate_residual_variance(run_trials(ProtocolConfig(r, 1.0, 1_000_000, seed=77)))
            expected = math.exp(-2 * r) / 2
            for name, v in (("re", res.re), ("im", res.im)):
                rel = abs(v / expected - 1)
                c.check(f"r={r} {name} residual rel err {rel:.4f} <= 0.02", rel <= 0.02)
        r, alpha = 1.0, ComplexAmplitude(0.6, -0.3)
        rng = np.random.default_rng(707)
        betas = np.array([complex(decode(encode(r, alpha), rng)[0]) for _ in range(10_000)])
        dist = conditional_beta_distribution(r, alpha)
        for name, vals, mu, var in (
            ("re", betas.real, dist.mean.re, dist.var_re),
            ("im", betas.imag, dist.mean.im, dist.var_im),
        ):
            p = stats.kstest(vals, "norm", args=(mu, math.sqrt(var))).pvalue
            c.check(f"KS {name} p={p:.3f} >= 0.01", p >= 0.01)


def test_ac8_structural_invariants():
    with Criterion(8, "structural invariants", 1.0) as c:
        for r in (0.0, 0.5, 1.0, 2.0):
            out = beamsplitter_5050(two_mode_squeezed(r), 0, 1)
            expected = np.diag([math.exp(-2 * r), math.exp(2 * r), math.exp(2 * r), math.exp(-2 * r)]) / 4
            err = np.max(np.abs(out.cov - expected))
            c.check(f"r={r} block-diagonal err {err:.1e} <= 1e-12", err <= 1e-12)
            state = encode(r, ComplexAmplitude(1.5, -2.5))
            mixed = beamsplitter_5050(state, 0, 1)
            for label, s in (("encoded", state), ("mixed", mixed)):
                rel = abs(np.linalg.det(s.cov) / 0.25**4 - 1)
                c.check(f"r={r} {label} det rel err {rel:.1e} <= 1e-9", rel <= 1e-9)


def test_ac9_quadrature_oracle():
    with Criterion(9, "MI quadrature oracle", 10.0) as c:
        for sigma2, r in ((1.0, 0.0), (1.813430, 1.0)):
            err = abs(mutual_information_quadrature(sigma2, r) - math.log1p(sigma2 * math.exp(2 * r)))
            c.check(f"(s2={sigma2}, r={r}) err {err:.1e} <= 1e-6", err <= 1e-6)


def test_ac10_determinism():
    with Criterion(10, "determinism", 60.0) as c:
        base = [sys.executable, "-m", "cvdense", "simulate", "--r", "1", "--sigma2", "1.81343"]
        base += ["--trials", "200000", "--seed", "7", "--chunk-size", "16384"]
        first = subprocess.run(base, capture_output=True, check=True).stdout
        second = subprocess.run(base, capture_output=True, check=True).stdout
        c.check("two invocations byte-identical", first == second and len(first) > 0)
        threaded = subprocess.run(base + ["--workers", "4"], capture_output=True, check=True).stdout
        c.check("output invariant to worker count", threaded == first)
