#!/usr/bin/env python3
"""Regenerate a bundled newform fixture with PARI/GP (through the `cypari` wheel).

Usage: python3 tools/newforms_pari.py LEVEL [Q_MAX] > crates/core/data/newforms_LEVEL_2.json

Orbits are labelled with the LMFDB convention for trivial character: sorted by
dimension, then lexicographically by the trace vector (tr a_1, tr a_2, ...).
Eigenvalues are written in the power basis of the coefficient-field generator.
"""
import json
import sys

import cypari

pari = cypari.pari
pari.allocatemem(2 * 10**9, silent=True)


def letters(i):
    s = ""
    i += 1
    while i > 0:
        i, r = divmod(i - 1, 26)
        s = chr(ord("a") + r) + s
    return s


def main():
    level = int(sys.argv[1])
    q_max = int(sys.argv[2]) if len(sys.argv) > 2 else 200
    mf = pari.mfinit([level, 2], 0)
    basis = pari.mfeigenbasis(mf)
    fields = pari.mffields(mf)
    records = []
    for F, P in zip(basis, fields):
        deg = int(pari.poldegree(P, "y"))
        if pari.pollead(P, "y") != 1:
            raise SystemExit("non-monic field polynomial")
        field_poly = [str(int(pari.polcoef(P, i, "y"))) for i in range(deg + 1)]
        coefs = pari.mfcoefs(F, q_max)

        def lifted(c):
            return pari.lift(c) if str(pari.type(c)) == "t_POLMOD" else c

        def coords(c):
            out = []
            for i in range(deg):
                v = pari.polcoef(lifted(c), i, "y")
                if pari.denominator(v) != 1:
                    raise SystemExit("eigenvalue with non-integral power-basis coordinates")
                out.append(str(int(v)))
            return out

        eigen = {str(int(q)): coords(coefs[int(q)]) for q in pari.primes([2, q_max])}
        traces = [int(pari.trace(pari.Mod(lifted(c), P))) for c in coefs[1:80]]
        cm = int(pari.mfisCM(F))
        records.append({
            "degree": deg,
            "field_poly": field_poly,
            "is_cm": cm != 0,
            "cm_disc": str(cm),
            "eigen": eigen,
            "_traces": traces,
        })
    records.sort(key=lambda r: (r["degree"], r["_traces"]))
    for i, r in enumerate(records):
        r["label"] = f"{level}.2.a.{letters(i)}"
    records.sort(key=lambda r: r["label"])
    doc = {
        "level": level,
        "weight": 2,
        "fetched_at": "2026-10-15T00:00:00Z",
        "records": [
            {k: r[k] for k in ["label", "degree", "field_poly", "is_cm", "cm_disc", "eigen"]}
            for r in records
        ],
    }
    json.dump(doc, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
