#!/usr/bin/env python3
"""Rebuild a synthetic PI/TA panel whose first-digit tallies equal the
published FTSE counts.

The published first-digit counts for PI(-), PI(+), TA and PI/TA constrain
which (PI digit, TA digit, ratio digit) triples each company-year can take.
An integer program assigns triples so that all four marginals match exactly;
concrete values are then drawn inside the feasible region with a margin that
keeps every digit stable under 15-significant-digit rendering.

Usage: python3 tools/rebuild_panel.py > crates/cli/tests/data/ftse_rebuilt_panel.csv
"""

import math
import random
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

PI_NEG = [374, 214, 120, 111, 96, 84, 67, 51, 43]
PI_POS = [1661, 1048, 665, 590, 412, 352, 349, 281, 250]
TA = [2084, 1186, 829, 761, 494, 400, 399, 340, 318]
RATIO = [2223, 1100, 655, 564, 523, 508, 446, 386, 360]
PI_ONLY = {0: 2, 1: 1}  # negatives, positives without a TA partner
COMPANIES, YEARS = 567, range(2009, 2023)
MARGIN = 2e-3  # in log10 units
SEED = 20240601

rng = random.Random(SEED)
log = math.log10


def first_digit_of(x):
    s = f"{abs(x):.14e}"
    return int(s[0])


def draw(a, b, c, tries=4000):
    """Random (lp, lt) with first digits a, b and ratio digit c, or None."""
    for _ in range(tries):
        lp = rng.uniform(log(a) + MARGIN, log(a + 1) - MARGIN)
        lt = rng.uniform(log(b) + MARGIN, log(b + 1) - MARGIN)
        r = (lp - lt) % 1.0
        if log(c) + MARGIN < r < log(c + 1) - MARGIN:
            return lp, lt
    return None


feasible = [
    (a, b, c)
    for a in range(1, 10)
    for b in range(1, 10)
    for c in range(1, 10)
    if draw(a, b, c, tries=20000) is not None
]
var = [(s, a, b, c) for s in (0, 1) for (a, b, c) in feasible]
ny = 18  # y[s][a]
nz = 9  # z[b]
nx = len(var)
n = nx + ny + nz

rows, lo, hi = [], [], []


def add(coeffs, value):
    row = np.zeros(n)
    for i, v in coeffs:
        row[i] = v
    rows.append(row)
    lo.append(value)
    hi.append(value)


for s, counts in ((0, PI_NEG), (1, PI_POS)):
    for a in range(1, 10):
        idx = [(i, 1) for i, (vs, va, _, _) in enumerate(var) if vs == s and va == a]
        idx.append((nx + 9 * s + a - 1, 1))
        add(idx, counts[a - 1])
for b in range(1, 10):
    idx = [(i, 1) for i, (_, _, vb, _) in enumerate(var) if vb == b]
    idx.append((nx + ny + b - 1, 1))
    add(idx, TA[b - 1])
for c in range(1, 10):
    add([(i, 1) for i, (_, _, _, vc) in enumerate(var) if vc == c], RATIO[c - 1])
for s, k in PI_ONLY.items():
    add([(nx + 9 * s + a, 1) for a in range(9)], k)

res = milp(
    c=np.zeros(n),
    constraints=LinearConstraint(np.array(rows), lo, hi),
    integrality=np.ones(n),
    bounds=Bounds(0, np.inf),
)
if not res.success:
    sys.exit(f"no assignment: {res.message}")
sol = np.rint(res.x).astype(int)


def render(mantissa_log, exponent, negative):
    x = 10 ** (mantissa_log + exponent)
    v = float(f"{x:.6g}")
    return -v if negative else v


records = []  # (pi or None, ta or None)
for i, (s, a, b, c) in enumerate(var):
    for _ in range(sol[i]):
        while True:
            lp, lt = draw(a, b, c)
            pi = render(lp, rng.randint(5, 9), s == 0)
            ta = render(lt, rng.randint(7, 11), False)
            if (
                first_digit_of(pi) == a
                and first_digit_of(ta) == b
                and first_digit_of(float(f"{pi / ta:.14e}")) == c
            ):
                break
        records.append((pi, ta))
for s in (0, 1):
    for a in range(1, 10):
        for _ in range(sol[nx + 9 * s + a - 1]):
            lp = rng.uniform(log(a) + MARGIN, log(a + 1) - MARGIN)
            records.append((render(lp, rng.randint(5, 9), s == 0), None))
for b in range(1, 10):
    for _ in range(sol[nx + ny + b - 1]):
        lt = rng.uniform(log(b) + MARGIN, log(b + 1) - MARGIN)
        records.append((None, render(lt, rng.randint(7, 11), False)))

slots = [(f"C{c:03d}", y) for c in range(1, COMPANIES + 1) for y in YEARS]
rng.shuffle(records)
chosen = sorted(rng.sample(range(len(slots)), len(records)))
by_slot = dict(zip(chosen, records))


def cell(v):
    if v is None:
        return ""
    return f"{v:.6g}" if abs(v) < 1e5 else str(int(round(v)))


out = sys.stdout
out.write("company,year,PI,TA\n")
for i, (company, year) in enumerate(slots):
    pi, ta = by_slot.get(i, (None, None))
    out.write(f"{company},{year},{cell(pi)},{cell(ta)}\n")
