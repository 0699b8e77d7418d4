"""End-to-end acceptance checks at their full stated sizes and tolerances.

Each test is one criterion; ``conftest.py`` prints a PASS/FAIL line per
criterion with the measured values recorded through ``record_property``.
"""
import filecmp
import time

import numpy as np
import pytest

from _oracles import brute_force_tr, kkt_residual, random_tr_instance, tr_objective
from arnoldi_sam.harness import cli
from arnoldi_sam.harness.config import config_from_dict
from arnoldi_sam.harness.experiments import run_experiment
from arnoldi_sam.harness.stats import bootstrap_median_interval
from arnoldi_sam.model import build_directional, solve_trust_region_subproblem
from arnoldi_sam.problems import (
    ModifiedRosenbrock,
    NoiseModel,
    ObjectiveOracle,
    SyntheticQuadratic,
    make_oracle,
    sine_start,
)
from arnoldi_sam.sampling import SampleSet, arnoldi_sample, truncate_spectrum

pytestmark = pytest.mark.acceptance

Q = (0.5, 1.0, 2.0)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


@pytest.fixture(scope="module")
def benchmark_result():
    cfg = config_from_dict({"experiment": "benchmark", "runs": 20, "seed": 0})
    with Timer() as t:
        res = run_experiment(cfg)
    res.elapsed = t.elapsed
    return res


def test_criterion_1_zero_noise_spectral_exactness(record_property):
    worst = 0.0
    with Timer() as t:
        for q in Q:
            prob = SyntheticQuadratic(4, q)
            dense = np.sort(np.linalg.eigvalsh(prob.hessian()))
            for alpha in (0.1, 1.0, 10.0):
                oracle = ObjectiveOracle(prob)
                x0 = sine_start(16)
                f0, g0 = oracle(x0)
                _, spec = arnoldi_sample(oracle, x0, f0, g0, 16, alpha)
                est = np.sort(spec.eigenvalues)
                assert est.shape == dense.shape
                worst = max(worst, float(np.max(np.abs(est / dense - 1))))
    record_property("max_rel_error", f"{worst:.2e}")
    record_property("seconds", f"{t.elapsed:.2f}")
    assert worst <= 1e-8
    assert t.elapsed < 1.0


def test_criterion_2_eigenvalue_study(record_property):
    cfg = config_from_dict({"experiment": "eig_study", "runs": 100, "seed": 0})
    with Timer() as t:
        res = run_experiment(cfg)
    ref = {q: res.values(f"q={q:g};sigma_g=0;bias=0", "eig_error", 1)[0] for q in Q}
    levels = (0.005, 0.025, 0.05)
    med = {(i, s): res.stats(f"q=2;sigma_g={s:g};bias=0", "eig_error", i).median
           for i in range(1, 5) for s in levels}
    all_medians = [row.stats.median for row in res.summary]
    record_property("zero_noise_dominant_error", ", ".join(f"q={q:g}: {v:.1e}" for q, v in ref.items()))
    record_property("q2_medians", "; ".join(
        f"eig{i}: " + " -> ".join(f"{med[(i, s)]:.2e}" for s in levels) for i in range(1, 5)))
    record_property("seconds", f"{t.elapsed:.1f}")
    assert all(v <= 1e-8 for v in ref.values())
    for i in range(1, 5):
        assert med[(i, 0.005)] <= med[(i, 0.025)] <= med[(i, 0.05)]
    assert np.all(np.isfinite(all_medians))
    assert t.elapsed < 120.0


def test_criterion_3_subproblem_oracle(record_property):
    rng = np.random.default_rng(2024)
    kinds = ("plain", "hard", "flat")
    worst_gap = worst_kkt = 0.0
    with Timer() as t:
        for k in range(1000):
            r = 1 + k % 3
            g, lam, delta = random_tr_instance(rng, r, kinds[(k // 3) % 3])
            step = solve_trust_region_subproblem(g, lam, delta)
            worst_gap = max(worst_gap, abs(tr_objective(g, lam, step.y) - brute_force_tr(g, lam, delta)))
            worst_kkt = max(worst_kkt, kkt_residual(g, lam, delta, step))
        for k in range(1000):
            r = int(rng.integers(1, 17))
            g, lam, delta = random_tr_instance(rng, r, kinds[k % 3])
            worst_kkt = max(worst_kkt, kkt_residual(g, lam, delta, solve_trust_region_subproblem(g, lam, delta)))
    record_property("max_objective_gap", f"{worst_gap:.2e}")
    record_property("max_kkt_residual", f"{worst_kkt:.2e}")
    record_property("seconds", f"{t.elapsed:.1f}")
    assert worst_gap <= 1e-6
    assert worst_kkt <= 1e-9
    assert t.elapsed < 30.0


def _central_diff(f, x):
    g = np.empty_like(x)
    for i in range(x.size):
        h = 1e-6 * (1.0 + abs(x[i]))
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def test_criterion_4_gradient_checks(record_property):
    rng = np.random.default_rng(4)
    worst = 0.0
    with Timer() as t:
        for prob in (SyntheticQuadratic(5, 1.0), ModifiedRosenbrock(32)):
            f = lambda x, prob=prob: prob.evaluate(x)[0]  # noqa: E731
            for _ in range(20):
                x = rng.uniform(-2, 2, prob.n)
                g = prob.evaluate(x)[1]
                worst = max(worst, float(np.linalg.norm(g - _central_diff(f, x)) / np.linalg.norm(g)))
    record_property("max_rel_error", f"{worst:.2e}")
    record_property("seconds", f"{t.elapsed:.2f}")
    assert worst <= 1e-5
    assert t.elapsed < 1.0


def test_criterion_5_bias_immunity(record_property):
    prob = SyntheticQuadratic(6, 2.0)
    x0 = sine_start(64)
    rng = np.random.default_rng(5)
    identical = 0
    for trial in range(10):
        oracle = make_oracle(prob, NoiseModel(0.025, 0.025, 0.0), x0, rng)
        f0, g0 = oracle(x0)
        samples, spec = arnoldi_sample(oracle, x0, f0, g0, 16, 1.0)
        lam, V, Vt = truncate_spectrum(spec, 4)
        bias = rng.normal(0.0, 10.0, 64)
        biased = SampleSet(samples.X, samples.F, samples.G + bias[:, None], samples.alpha)
        a = build_directional(samples, lam, V, Vt, samples.alpha).g_red
        b = build_directional(biased, lam, V, Vt, samples.alpha).g_red
        identical += bool(np.array_equal(a, b))
    record_property("bit_identical_trials", f"{identical}/10")
    assert identical == 10


def test_criterion_6_variant_comparison(record_property):
    cfg = config_from_dict({"experiment": "variant_compare", "runs": 1000, "seed": 0})
    with Timer() as t:
        res = run_experiment(cfg)
    boot = np.random.default_rng(6)
    step_med, overlaps, detail = {}, {}, []
    for q in Q:
        step_med[q] = res.stats(f"q={q:g};sigma_g=0.025;bias=0;variant=step_average", "ratio").median
        ci = {}
        for b in (0, 0.1):
            ci[b] = bootstrap_median_interval(res.values(f"q={q:g};sigma_g=0.025;bias={b:g};variant=directional",
                                                         "ratio"), boot)
        overlaps[q] = ci[0][0] <= ci[0.1][1] and ci[0.1][0] <= ci[0][1]
        detail.append(f"q={q:g}: unbiased [{ci[0][0]:.3f}, {ci[0][1]:.3f}] "
                      f"biased [{ci[0.1][0]:.3f}, {ci[0.1][1]:.3f}]")
    record_property("step_average_medians", ", ".join(f"q={q:g}: {v:.3f}" for q, v in step_med.items()))
    record_property("directional_median_CIs", "; ".join(detail))
    record_property("seconds", f"{t.elapsed:.1f}")
    assert all(v < 1.0 for v in step_med.values())
    assert all(overlaps.values()), f"non-overlapping intervals for q in {[q for q, o in overlaps.items() if not o]}"
    assert t.elapsed < 300.0


def test_criterion_7_benchmark(benchmark_result, record_property):
    res = benchmark_result
    med = {mth: res.stats(f"n=256;sigma_g=0.025;bias=0;method={mth}", "final_ratio").median
           for mth in ("sam_step_average", "sam_directional", "bfgs", "nelder_mead")}
    record_property("median_final_ratio", ", ".join(f"{k}: {v:.3g}" for k, v in med.items()))
    record_property("seconds", f"{res.elapsed:.1f}")
    sam = med["sam_step_average"]
    assert sam <= 10**-1.5
    assert med["bfgs"] >= 10 * sam and med["nelder_mead"] >= 10 * sam
    assert res.elapsed < 600.0


SMALL = {
    "eig-study": "experiment: eig_study\nruns: 3\nproblem:\n  p: 5\nnoise:\n  rel_sigma_g: [0.01, 0.05]\n",
    "variants": "experiment: variant_compare\nruns: 5\nproblem:\n  p: 5\n",
    "benchmark": "experiment: benchmark\nruns: 2\nproblem:\n  n: 32\n",
    "run": "experiment: single_run\nruns: 2\nproblem:\n  n: 32\n",
}


def test_criterion_8_determinism(tmp_path, record_property):
    checked = 0
    for sub, text in SMALL.items():
        cfg = tmp_path / f"{sub}.yaml"
        cfg.write_text(text)
        for fmt in ("csv", "json"):
            paths = [tmp_path / f"{sub}-{k}.{fmt}" for k in range(2)]
            for p in paths:
                assert cli.main([sub, "--config", str(cfg), "--seed", "17", "--format", fmt,
                                 "--out", str(p), "--quiet"]) == 0
            assert filecmp.cmp(paths[0], paths[1], shallow=False), f"{sub} {fmt} differs"
            checked += 1
    record_property("identical_output_pairs", f"{checked}/8")


def test_criterion_9_accounting(benchmark_result, record_property):
    m = benchmark_result.config.sam.m
    iters = bad = 0
    for traces in benchmark_result.traces.values():
        for mth in ("sam_step_average", "sam_directional"):
            t = traces[mth]
            prev = t.initial_evals
            bad += prev != 1 + m
            for rec in t.records:
                expected = m + 1 + (0 if rec.accepted else 1)
                bad += (rec.evals - prev) != expected or rec.samples != m
                prev = rec.evals
                iters += 1
            bad += prev != t.evals
    record_property("iterations_checked", iters)
    record_property("mismatches", bad)
    assert iters > 0 and bad == 0
