"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are repeated in the pytest terminal summary under
"acceptance criteria".
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from gazekit.classify import DispersionScanner, dispersion, ivt_classify
from gazekit.cli import main
from gazekit.experiment import run_noise_sweep
from gazekit.kratio import SweepGrid, adaptive_classify, default_grid, k_ratio
from gazekit.metrics import evaluate
from gazekit.model import Algorithm, GazeSeries, LabelSeries
from gazekit.noise import DEFAULT_SIGMAS, NoiseSpec, add_noise
from gazekit.synth import SynthConfig, generate


def brute_k(codes):
    n = len(codes)
    n_s = Fraction(sum(codes), n)
    fs = sum(1 for a, b in zip(codes, codes[1:]) if a == 0 and b == 1)
    denom = n_s * (1 - n_s)
    return None if denom == 0 else Fraction(fs, n) / denom


@pytest.fixture(scope="module")
def default_sweep():
    """Default trajectory (seed 0), default noise levels, noise seed 0."""
    series, truth = generate(SynthConfig())
    return run_noise_sweep(series, truth, sigmas=DEFAULT_SIGMAS, seed=0)


def test_c01_k_ratio_oracle(criterion):
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst = 0.0
    mismatched_undefined = 0
    for _ in range(1000):
        n = int(rng.integers(2, 501))
        codes = (rng.random(n) < rng.random()).astype(np.int8)
        got = k_ratio(LabelSeries(codes))
        want = brute_k(codes.tolist())
        if (got is None) != (want is None):
            mismatched_undefined += 1
        elif want is not None and want != 0:
            worst = max(worst, abs(got - float(want)) / float(want))
        elif want == 0 and got != 0:
            worst = max(worst, abs(got))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and mismatched_undefined == 0 and elapsed < 5.0
    criterion(1, ok, f"max rel err {worst:.2e}, undefined mismatches {mismatched_undefined}, {elapsed:.2f} s")
    assert ok


def test_c02_independence_baseline(criterion):
    rng = np.random.default_rng(92)
    ks = [k_ratio(LabelSeries((rng.random(100_000) < 0.08).astype(np.int8))) for _ in range(100)]
    mean = float(np.mean(ks))
    ok = 0.95 <= mean <= 1.05
    criterion(2, ok, f"mean K over 100 i.i.d. strings (P(S)=0.08, N=1e5) = {mean:.4f}")
    assert ok


def test_c03_dispersion_exact(criterion):
    def series(points):
        pts = np.array(points, dtype=float)
        return GazeSeries(np.arange(len(pts), dtype=float), pts[:, 0], pts[:, 1])

    cases = [
        (series([(5, 5)]), 0, 0, 0),
        (series([(0, 0), (3, 0), (0, 4)]), 0, 2, 7),
        (series([(1, 1), (4, 5), (2, 3)]), 0, 2, 7),
    ]
    exact = [dispersion(s, i, k) == want for s, i, k, want in cases]
    # the scanner's range queries must agree exactly as well
    rng = np.random.default_rng(3)
    s = series(rng.integers(-50, 50, (200, 2)))
    scanner = DispersionScanner(s, 5.0)
    starts = rng.integers(0, 150, 200)
    pairs = list(zip(starts.tolist(), (starts + rng.integers(0, 50, 200)).tolist()))
    scan_ok = all(scanner._disp(i, k) == dispersion(s, i, k) for i, k in pairs)
    ok = all(exact) and scan_ok
    criterion(3, ok, f"hand cases {sum(exact)}/3 exact, scanner range queries exact: {scan_ok}")
    assert ok


def test_c04_clean_adaptive_ivt(criterion):
    start = time.perf_counter()
    accs = []
    for seed in range(10):
        series, truth = generate(SynthConfig(seed=seed))
        labels, _ = adaptive_classify(series, Algorithm.IVT)
        accs.append(evaluate(labels, truth).accuracy)
    elapsed = time.perf_counter() - start
    ok = min(accs) >= 0.90 and elapsed < 10.0
    criterion(4, ok, f"adaptive I-VT accuracy seeds 0-9: min {min(accs):.4f}, max {max(accs):.4f}; {elapsed:.2f} s")
    assert ok


def test_c05_fixed_threshold_collapse(criterion, default_sweep):
    row = default_sweep.row(Algorithm.IVT, "original", 50.0)
    ok = row.metrics.accuracy < 0.35 and row.fix_pct < 10.0
    criterion(5, ok, f"fixed I-VT at sigma=50: accuracy {row.metrics.accuracy:.4f}, fix% {row.fix_pct:.2f}")
    assert ok


def test_c06_adaptive_mitigation(criterion, default_sweep):
    worse = []
    for alg in Algorithm:
        for sigma in (s for s in DEFAULT_SIGMAS if s >= 5):
            fixed = default_sweep.row(alg, "original", sigma).metrics.accuracy
            adaptive = default_sweep.row(alg, "adaptive", sigma).metrics.accuracy
            if adaptive < fixed:
                worse.append(f"{alg.value}@{sigma:g} ({adaptive:.4f} < {fixed:.4f})")
    idt50 = default_sweep.row(Algorithm.IDT, "adaptive", 50.0).metrics.accuracy
    ok = not worse and idt50 >= 0.75
    detail = f"ordering violations: {', '.join(worse) or 'none'}; adaptive I-DT accuracy at sigma=50 = {idt50:.4f} (need >= 0.75)"
    criterion(6, ok, detail)
    assert ok


def test_c07_precision_recall_signature(criterion, default_sweep):
    parts = []
    ok = True
    for sigma in (30.0, 40.0, 50.0):
        m = default_sweep.row(Algorithm.IDT, "adaptive", sigma).metrics
        good = m.f1_f is not None and m.f1_f >= 0.85 and (m.f1_s is None or m.f1_s <= 0.30)
        ok &= good
        f1f = "undef" if m.f1_f is None else f"{m.f1_f:.3f}"
        f1s = "undef" if m.f1_s is None else f"{m.f1_s:.3f}"
        parts.append(f"sigma={sigma:g}: F1_F {f1f}, F1_S {f1s}")
    criterion(7, ok, "adaptive I-DT " + "; ".join(parts))
    assert ok


def test_c08_noise_statistics(criterion):
    n = 100_000
    flat = GazeSeries(np.arange(n, dtype=float), np.zeros(n), np.zeros(n))
    noisy = add_noise(flat, NoiseSpec(10.0, 0))
    stats = [(float(o.mean()), float(o.std(ddof=1))) for o in (noisy.x, noisy.y)]
    ok = all(abs(m) <= 0.15 and abs(s - 10.0) <= 0.1 for m, s in stats)
    criterion(8, ok, "offsets (mean, std): " + ", ".join(f"({m:+.4f}, {s:.4f})" for m, s in stats))
    assert ok


def test_c09_end_to_end_determinism(criterion, tmp_path):
    runs = []
    for name in ("first", "second"):
        out = tmp_path / name
        assert main(["noise-sweep", "--seed", "0", "--out-dir", str(out)]) == 0
        runs.append({f: (out / f).read_bytes() for f in ("noise_sweep.csv", "noise_sweep.json")})
    same = [f for f in runs[0] if runs[0][f] == runs[1][f]]
    ok = len(same) == 2
    criterion(9, ok, f"byte-identical reports: {', '.join(same) or 'none'}")
    assert ok


def test_c10_ivt_monotone(criterion):
    grid = SweepGrid(default_grid(Algorithm.IVT).lo, default_grid(Algorithm.IVT).hi, 50).thresholds()
    violations = 0
    for j in range(20):
        series, _ = generate(SynthConfig(duration_ms=10_000, seed=500 + j))
        series = add_noise(series, NoiseSpec(float(j % 5) * 2.5, j))
        counts = [ivt_classify(series, thr).n_fixation for thr in grid]
        violations += sum(1 for a, b in zip(counts, counts[1:]) if b < a)
    ok = violations == 0
    criterion(10, ok, f"fixation-count decreases across 50 thresholds x 20 series: {violations}")
    assert ok
