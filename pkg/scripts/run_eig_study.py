"""Median inverse-eigenvalue error vs eigenvalue index, one line per (q, noise) cell.

    python scripts/run_eig_study.py [--config configs/eig_study.yaml] [--runs N] [--out results/eig_study.csv]
"""
import argparse
from pathlib import Path

from arnoldi_sam.harness.config import load_config
from arnoldi_sam.harness.experiments import run_eig_study
from arnoldi_sam.harness.output import write

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--config", default=ROOT / "configs" / "eig_study.yaml")
    ap.add_argument("--runs", type=int)
    ap.add_argument("--out", default=ROOT / "results" / "eig_study.csv")
    args = ap.parse_args()

    cfg = load_config(args.config)
    if args.runs:
        cfg.runs = args.runs
    res = run_eig_study(cfg)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write(res, args.out, "csv")

    cells = dict.fromkeys(row.cell for row in res.summary)
    print(f"{'cell':<28s}" + "".join(f"{'eig' + str(i):>10s}" for i in range(1, cfg.eig_count + 1)))
    for cell in cells:
        meds = [res.stats(cell, "eig_error", i).median for i in range(1, cfg.eig_count + 1)]
        print(f"{cell:<28s}" + "".join(f"{v:10.2e}" for v in meds))
    for cell in res.cells():
        if cell.endswith("sigma_g=0;bias=0"):
            print(f"zero-noise dominant error {cell.split(';')[0]}: {res.values(cell, 'eig_error', 1)[0]:.1e}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
