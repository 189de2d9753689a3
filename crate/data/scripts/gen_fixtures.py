"""Regenerate the bundled fixture tables.

Requires `database_knotinfo` (PD codes and bridge indices) and `snappy`
(14-crossing diagrams and independent reference values for omega/rho).
Run from the repository root:  python3 data/scripts/gen_fixtures.py
"""
import csv
import random
import re

import spherogram
from database_knotinfo import link_list


def pd_text(pd):
    return " ".join("X(%d,%d,%d,%d)" % tuple(x) for x in pd)


def knotinfo_pd(s):
    return [list(map(int, t)) for t in re.findall(r"\[(\d+),(\d+),(\d+),(\d+)\]", s.replace(" ", ""))]


def knotinfo_link_pd(s):
    return [list(map(int, t)) for t in re.findall(r"\{(\d+),(\d+),(\d+),(\d+)\}", s.replace(" ", ""))]


def spherogram_pd(link):
    return [[e + 1 for e in x] for x in link.PD_code()]


def reference(pd):
    link = spherogram.Link([tuple(x) for x in pd])
    assert len(link.crossings) == len(pd)
    return (link.bridge_upper_bound(method="wirtinger"),
            link.bridge_upper_bound())


def write(path, rows, header):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


refs = []

# Knots through 10 crossings with tabulated bridge index.
knots = [k for k in link_list() if k["name"] != "0_1" and k["crossing_number"].isdigit()
         and int(k["crossing_number"]) <= 10]
table = []
for k in knots:
    pd = knotinfo_pd(k["pd_notation"])
    table.append((k["name"], pd_text(pd), k["bridge_index"]))
    refs.append((k["name"], pd_text(pd)))
write("data/knots_through_10.csv", table, ["name", "pd_notation", "bridge_number"])

# Small diagrams (<= 6 crossings): table knots, table links, unknot and
# non-reduced diagrams, composites and random projections.
small = [(k["name"], pd_text(knotinfo_pd(k["pd_notation"])), k["bridge_index"])
         for k in knots if int(k["crossing_number"]) <= 6]
seen = set()
for l in link_list(proper_links=True)[1:]:
    base = l["name"].split("{")[0]
    if int(l["crossing_number"]) <= 6 and base not in seen:
        seen.add(base)
        small.append((base, pd_text(knotinfo_link_pd(l["pd_notation_vector"])), ""))
small.append(("unknot_1", "X(1,2,2,1)", "1"))
small.append(("unknot_1b", "X(1,1,2,2)", "1"))
small.append(("unknot_2_twist", "X(1,4,2,1) X(2,4,3,3)", "1"))
tref = spherogram.Link("3_1")
small.append(("3_1_sharp_3_1", pd_text(spherogram_pd(tref.connected_sum(tref))), "3"))
small.append(("3_1_sharp_3_1_mirror", pd_text(spherogram_pd(tref.connected_sum(tref.mirror()))), "3"))
rng = random.Random(20251016)
count = 0
while count < 8:
    L = spherogram.random_link(rng.randint(4, 6), num_components=1, simplify=None,
                               prime_decomposition=False, initial_map_gives_link=True)
    if 3 <= len(L.crossings) <= 6 and L.is_alternating() is not None:
        pd = spherogram_pd(L)
        small.append(("random_%d_%dc" % (count, len(pd)), pd_text(pd), ""))
        count += 1
write("data/small_diagrams.csv", small, ["name", "pd_notation", "bridge_number"])
refs.extend((n, p) for n, p, _ in small)

# A 14-crossing slice of the nonalternating table around 14n1527.
slice_rows = []
for i in range(1500, 1561):
    name = "14n%d" % i
    pd = spherogram_pd(spherogram.Link("K" + name))
    slice_rows.append((name, pd_text(pd), ""))
write("data/slice_14n.csv", slice_rows, ["name", "pd_notation", "bridge_number"])
refs.extend((n, p) for n, p, _ in slice_rows)
with open("data/14n1527.pd", "w") as f:
    f.write(dict((n, p) for n, p, _ in slice_rows)["14n1527"] + "\n")

# Independent reference values for cross-checking.
seen_names = set()
out = []
for name, pd in refs:
    if name in seen_names:
        continue
    seen_names.add(name)
    pd_list = [list(map(int, t)) for t in re.findall(r"X\((\d+),(\d+),(\d+),(\d+)\)", pd)]
    w, r = reference(pd_list)
    out.append((name, len(pd_list), w, r))
write("data/reference_values.csv", out, ["name", "n", "omega", "rho"])
