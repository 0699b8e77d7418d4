"""Distribution of F(x0 + p) / F(x0) for one step of each model variant.

Also prints percentile-bootstrap 95% intervals for each median.

    python scripts/run_variants.py [--config configs/variants.yaml] [--runs N] [--out results/variants.csv]
"""
import argparse
from pathlib import Path

import numpy as np

from arnoldi_sam.harness.config import load_config
from arnoldi_sam.harness.experiments import run_variant_compare
from arnoldi_sam.harness.output import write
from arnoldi_sam.harness.stats import bootstrap_median_interval

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--config", default=ROOT / "configs" / "variants.yaml")
    ap.add_argument("--runs", type=int)
    ap.add_argument("--out", default=ROOT / "results" / "variants.csv")
    args = ap.parse_args()

    cfg = load_config(args.config)
    if args.runs:
        cfg.runs = args.runs
    res = run_variant_compare(cfg)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write(res, args.out, "csv")

    boot = np.random.default_rng(cfg.seed)
    print(f"{'cell':<52s}{'median':>9s}{'q025':>9s}{'q975':>9s}   median 95% CI")
    for row in res.summary:
        s = row.stats
        lo, hi = bootstrap_median_interval(res.values(row.cell, "ratio"), boot)
        print(f"{row.cell:<52s}{s.median:9.4f}{s.quantile_025:9.4f}{s.quantile_975:9.4f}   [{lo:.4f}, {hi:.4f}]")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
