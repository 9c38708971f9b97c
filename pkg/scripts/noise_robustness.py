"""Fixed versus adaptive thresholds across noise levels, printed as tables.

Runs the same sweep as ``gazekit noise-sweep`` on the default synthetic
trajectory and prints, per algorithm, accuracy and class-wise F1 for both
conditions plus fixation share and agreement with the clean labeling.

    python3 scripts/noise_robustness.py --seed 0
"""

import argparse

from gazekit.experiment import run_noise_sweep
from gazekit.model import Algorithm
from gazekit.noise import DEFAULT_SIGMAS
from gazekit.synth import SynthConfig, generate


def cell(v):
    return "  -  " if v is None else f"{v:5.2f}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0, help="trajectory and noise seed")
    ap.add_argument("--duration-ms", type=float, default=60_000.0)
    args = ap.parse_args()

    series, truth = generate(SynthConfig(duration_ms=args.duration_ms, seed=args.seed))
    result = run_noise_sweep(series, truth, sigmas=DEFAULT_SIGMAS, seed=args.seed)
    print(f"truth fixation share {truth.n_fixation / len(truth):.3f}")
    for alg in Algorithm:
        print(f"\n{alg.value}: fixed threshold {result.fixed[alg.value]['threshold']:.4g}")
        print(" sigma | acc  f1_f  f1_s  fix%  agr  (fixed) | thr       acc  f1_f  f1_s  fix%  agr  (adaptive)")
        for sigma in DEFAULT_SIGMAS:
            o = result.row(alg, "original", sigma)
            a = result.row(alg, "adaptive", sigma)
            print(
                f" {sigma:5g} | {cell(o.metrics.accuracy)} {cell(o.metrics.f1_f)} {cell(o.metrics.f1_s)}"
                f" {o.fix_pct:5.1f} {o.agreement:5.1f}        | {a.threshold:9.4g} {cell(a.metrics.accuracy)}"
                f" {cell(a.metrics.f1_f)} {cell(a.metrics.f1_s)} {a.fix_pct:5.1f} {a.agreement:5.1f}"
            )


if __name__ == "__main__":
    main()
