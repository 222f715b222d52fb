#!/usr/bin/env python3
"""Cross-check the committed fixture snapshot with scipy's Spearman.

Usage: spearman_crosscheck.py <synth.csv> <fixture_snapshot.json>
Generate the CSV with: spatcorr synth --config tests/data/fixture.json --out synth.csv
"""
import csv
import json
import sys

from scipy.stats import spearmanr


def main():
    rows = list(csv.DictReader(open(sys.argv[1], newline="")))
    snap = json.load(open(sys.argv[2]))

    def rho(sel):
        return spearmanr([float(r["c"]) for r in sel], [float(r["n"]) for r in sel]).statistic

    got = {
        "pooled_r": rho(rows),
        "low_r": rho([r for r in rows if float(r["y"]) < 30]),
        "high_r": rho([r for r in rows if float(r["y"]) >= 30]),
    }
    ok = True
    for key, value in got.items():
        diff = abs(value - snap[key])
        print(f"{key}: scipy={value!r} snapshot={snap[key]!r} diff={diff:.3g}")
        ok &= diff <= 1e-12
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
