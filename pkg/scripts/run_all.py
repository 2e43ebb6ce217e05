"""Run every campaign over a range of orders, write the reports, print a margin table."""

import argparse
import time
from pathlib import Path

from treeshift.config import DEFAULT_ALPHA_GRID
from treeshift.reports import reports_to_csv, reports_to_json
from treeshift.verify import CAMPAIGNS, run_campaign

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-min", type=int, default=5)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    reports = []
    for name in CAMPAIGNS:
        for n in range(args.n_min, args.n_max + 1):
            t0 = time.perf_counter()
            rep = run_campaign(name, n, DEFAULT_ALPHA_GRID, workers=args.workers)
            if rep is None:
                continue
            reports.append(rep)
            margins = " ".join(f"{k}={v:.4g}" for k, v in rep.min_margin.items())
            print(f"{name:14s} n={n:2d} {len(rep.records):6d} records "
                  f"{'ok  ' if rep.passed else 'FAIL'} {time.perf_counter() - t0:6.1f}s  {margins}")
    (outdir / "reports.json").write_text(reports_to_json(reports))
    (outdir / "reports.csv").write_text(reports_to_csv(reports))
    print(f"wrote {outdir}/reports.json and reports.csv")
