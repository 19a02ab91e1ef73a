#!/usr/bin/env python3
"""Frobenius traces of the Frey-curve reductions for every residue pair, via PARI's ellcard.

Usage: python3 tools/trace_oracle.py Q_LIST > crates/core/tests/golden/traces.json
Each entry is [a, b, kind, trace] with kind in {mult, split, inert}; trace is null for mult.
"""
import json
import sys

from sieve_oracle import curve_trace


def main():
    qs = [int(x) for x in sys.argv[1].split(",")]
    out = {}
    for q in qs:
        rows = []
        for a in range(q):
            for b in range(q):
                if a == 0 and b == 0:
                    continue
                kind, tr = curve_trace(a, b, q)
                rows.append([a, b, kind, tr])
        out[str(q)] = rows
    json.dump(out, sys.stdout, separators=(",", ":"), sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
