#!/usr/bin/env python3
"""Fit the growth exponent of median |C1| vs n from a sweep CSV.

Usage: tools/fit_exponent.py sweep.csv [--column c1] [--lambda 0.0]

Reads the CSV produced by `critwin-cli sweep` (columns
n,lambda,replica,c1,c2,surplus1,diam1,edges), takes the per-n median of the
chosen column at one lambda, and least-squares fits log(median) vs log(n).
"""
import argparse
import csv
import math
import statistics
import sys
from collections import defaultdict


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv_path")
    ap.add_argument("--column", default="c1")
    ap.add_argument("--lambda", dest="lam", type=float, default=None,
                    help="restrict to one lambda (default: first seen)")
    args = ap.parse_args()

    by_n = defaultdict(list)
    with open(args.csv_path, newline="") as f:
        rows = csv.DictReader(f)
        lam = args.lam
        for row in rows:
            if lam is None:
                lam = float(row["lambda"])
            if float(row["lambda"]) != lam:
                continue
            by_n[int(row["n"])].append(float(row[args.column]))

    if len(by_n) < 3:
        sys.exit("need at least 3 distinct n values")

    pts = [(math.log(n), math.log(statistics.median(v)))
           for n, v in sorted(by_n.items())]
    xbar = statistics.fmean(x for x, _ in pts)
    ybar = statistics.fmean(y for _, y in pts)
    sxx = sum((x - xbar) ** 2 for x, _ in pts)
    slope = sum((x - xbar) * (y - ybar) for x, y in pts) / sxx
    resid = sum((y - ybar - slope * (x - xbar)) ** 2 for x, y in pts)
    stderr = math.sqrt(resid / ((len(pts) - 2) * sxx)) if len(pts) > 2 else 0.0

    for (x, y), (n, v) in zip(pts, sorted(by_n.items())):
        print(f"n={n:<9d} median {args.column} = {statistics.median(v):.6g}")
    print(f"exponent = {slope:.4f} +/- {stderr:.4f}")


if __name__ == "__main__":
    main()
