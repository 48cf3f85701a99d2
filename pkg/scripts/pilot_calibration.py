"""Manual pilot run for calibrating acceptance tolerances.

Run this to see the Monte Carlo spread behind the thresholds in
tests/integration/test_acceptance.py.

Usage:
    uv run python scripts/pilot_calibration.py [master_seed]

This script will:
1. Run a small convergence study per density family and print bias ± se_mean
2. Print the KS distance of ξ_{N,x} to its exponential limit along N
3. Print the variance-decomposition gap at N = 512
"""

import sys

from entrokl.models import ExponentialSpec, GaussianSpec, UniformBoxSpec
from entrokl.services import (
    AnalyticDensity,
    conditional_law_report,
    convergence_study,
    variance_decomposition,
)

DENSITIES = {
    "gaussian d=1": AnalyticDensity(GaussianSpec(mean=[0.0], cov=[[1.0]])),
    "gaussian d=2": AnalyticDensity(GaussianSpec(mean=[0.0, 0.0], cov=[[1.0, 0.0], [0.0, 1.0]])),
    "uniform [0,1]": AnalyticDensity(UniformBoxSpec(lower=[0.0], upper=[1.0])),
    "exponential": AnalyticDensity(ExponentialSpec(rate=1.0)),
}


def main():
    """Print pilot statistics for one master seed."""
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    print("=" * 60)
    print(f"Pilot calibration, master seed {seed}")
    print("=" * 60)

    print("\nBias at N = 1000, 4000 (100 reps)")
    for name, density in DENSITIES.items():
        report = convergence_study(density, n_grid=[1000, 4000], reps=100, master_seed=seed)
        for row in report.per_n:
            print(f"  {name:<14} N={row.n:<5} bias={row.bias:+.4f} ± {row.se_mean:.4f}  mse={row.mse:.2e}")

    print("\nKS distance to the exponential limit, standard normal at x = 0 (4096 reps)")
    density = DENSITIES["gaussian d=1"]
    for n in (2, 8, 32, 128, 512, 2048):
        report = conditional_law_report(density, [0.0], n, 4096, seed)
        print(f"  N={n:<5} KS={report.ks_distance:.4f}  mean log ξ={report.empirical_mean_log:+.4f}")

    print("\nVariance decomposition, standard normal, N = 512 (2000 reps)")
    report = variance_decomposition(density, 512, reps=2000, master_seed=seed)
    print(f"  var(H_N)={report.var_h:.3e}  recombined={report.recombined:.3e}")
    print(f"  gap={report.gap:+.3e} ± {report.gap_std_error:.3e}  passed={report.passed}")


if __name__ == "__main__":
    main()
