#!/usr/bin/env python3
"""Regenerate the frozen multiprecision reference values used by the test suite.

Run offline (requires mpmath, which is NOT a runtime dependency of the
package) and commit the resulting JSON.  The hypergeometric values are
computed by direct power series in 60-digit arithmetic after a Pfaff
(Gauss) / Kummer (confluent) transformation that maps the nonpositive
argument into a regime where every series term is well behaved.  This
deliberately avoids mpmath's own hyp2f1/hyp1f1 drivers so the reference
is an independent evaluation route.

    python3 tools/gen_reference_values.py

Writes tests/data/hyp_reference.json.
"""

import json
import pathlib
import random

import mpmath as mp

mp.mp.dps = 60

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "hyp_reference.json"

# Parameter boxes actually exercised by the solver: the Gauss function is
# evaluated at (a, b, c, z) = ((2+alpha)/2, (3+alpha)/2, 1, -|x|^2) and the
# confluent one at ((2+alpha)/2, 1, -|x|^2), alpha in [0.05, 1.95],
# z in [-40, 0].
ALPHA_GRID = [0.05, 0.4, 0.8, 1.0, 1.2, 1.6, 1.95]
Z_GRID = [0.0, -1e-3, -0.1, -0.3, -0.5, -1.0, -2.0, -4.0, -10.0, -25.0, -40.0]

N_RANDOM = 100
SEED = 20240817

MAXTERMS = 200000


def series_2f1(a, b, c, w):
    """Plain Gauss series sum_k (a)_k (b)_k / (c)_k w^k / k!, |w| < 1."""
    term = mp.mpf(1)
    total = mp.mpf(1)
    k = 0
    while k < MAXTERMS:
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1)) * w
        total += term
        k += 1
        if abs(term) < mp.mpf(10) ** (-mp.mp.dps - 5) * max(1, abs(total)):
            return total
    raise RuntimeError(f"2F1 series did not converge at w={w}")


def series_1f1(a, c, z):
    """Plain Kummer series, z >= 0 here so all terms are positive."""
    term = mp.mpf(1)
    total = mp.mpf(1)
    k = 0
    while k < MAXTERMS:
        term = term * (a + k) / ((c + k) * (k + 1)) * z
        total += term
        k += 1
        if abs(term) < mp.mpf(10) ** (-mp.mp.dps - 5) * max(1, abs(total)):
            return total
    raise RuntimeError(f"1F1 series did not converge at z={z}")


def hyp2f1_ref(a, b, c, z):
    """2F1(a,b;c;z) for z <= 0 via Pfaff: (1-z)^(-b) 2F1(c-a, b; c; z/(z-1))."""
    a, b, c, z = map(mp.mpf, (a, b, c, z))
    if z == 0:
        return mp.mpf(1)
    w = z / (z - 1)  # in [0, 1) for z <= 0
    return (1 - z) ** (-b) * series_2f1(c - a, b, c, w)


def hyp1f1_ref(a, c, z):
    """1F1(a;c;z) for z <= 0 via Kummer: e^z 1F1(c-a; c; -z)."""
    a, c, z = map(mp.mpf, (a, c, z))
    if z == 0:
        return mp.mpf(1)
    return mp.e**z * series_1f1(c - a, c, -z)


def main():
    rng = random.Random(SEED)
    records_2f1 = []
    records_1f1 = []

    pairs = [(al, z) for al in ALPHA_GRID for z in Z_GRID]
    pairs += [
        (rng.uniform(0.05, 1.95), -rng.uniform(0.0, 40.0)) for _ in range(N_RANDOM)
    ]

    for al, z in pairs:
        a = (2.0 + al) / 2.0
        b = (3.0 + al) / 2.0
        v2 = hyp2f1_ref(a, b, 1.0, z)
        records_2f1.append(
            {"a": a, "b": b, "c": 1.0, "z": z, "value": mp.nstr(v2, 25)}
        )
        v1 = hyp1f1_ref(a, 1.0, z)
        records_1f1.append({"a": a, "c": 1.0, "z": z, "value": mp.nstr(v1, 25)})

    # sanity anchors with known closed forms
    assert abs(hyp2f1_ref(1, 1, 2, -1) - mp.log(2)) < mp.mpf(10) ** -50
    assert abs(hyp1f1_ref(1, 1, -1) - mp.exp(-1)) < mp.mpf(10) ** -50

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w") as fh:
        json.dump(
            {
                "generator": "tools/gen_reference_values.py",
                "dps": mp.mp.dps,
                "seed": SEED,
                "hyp2f1": records_2f1,
                "hyp1f1": records_1f1,
            },
            fh,
            indent=1,
        )
    print(f"wrote {OUT} ({len(records_2f1)} + {len(records_1f1)} records)")


if __name__ == "__main__":
    main()
