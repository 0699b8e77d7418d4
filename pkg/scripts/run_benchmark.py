"""Final objective ratio per method, plus accounting of SAM evaluations.

    python scripts/run_benchmark.py [--config configs/benchmark.yaml] [--runs N] [--out results/benchmark.csv]
"""
import argparse
from pathlib import Path

from arnoldi_sam.harness.config import load_config
from arnoldi_sam.harness.experiments import run_benchmark
from arnoldi_sam.harness.output import write

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--config", default=ROOT / "configs" / "benchmark.yaml")
    ap.add_argument("--runs", type=int)
    ap.add_argument("--out", default=ROOT / "results" / "benchmark.csv")
    args = ap.parse_args()

    cfg = load_config(args.config)
    if args.runs:
        cfg.runs = args.runs
    res = run_benchmark(cfg)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write(res, args.out, "csv")

    print(f"{'cell':<58s}{'median':>10s}{'q025':>10s}{'q975':>10s}{'evals':>8s}")
    for row in res.summary:
        if row.quantity != "final_ratio":
            continue
        s = row.stats
        ev = res.stats(row.cell, "evals").median
        print(f"{row.cell:<58s}{s.median:10.3e}{s.quantile_025:10.3e}{s.quantile_975:10.3e}{ev:8.0f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
