"""
Why the statistics peak at the truth
====================================

Instead of sampling graphs, work with population expectations: for a planted
connectivity matrix, expected_counts_sbm gives the expected centered statistics
when a candidate labeling misplaces (d1, d2) nodes from the two communities.
Printing the landscape over all (d1, d2) shows the extremum sitting at the
uncorrupted corners — the property the grid verifier checks wholesale.
"""

import numpy as np

from bicomm import ConnectivityMatrix, expected_counts_sbm, verify_theorem_2_3

m = n = 8

for title, rows, field in (
        ("assortative: expected centered R_w", [[0.5, 0.3], [0.3, 0.5]], 3),
        ("core-periphery: expected centered R_d", [[0.5, 0.3], [0.3, 0.1]], 2)):
    p = ConnectivityMatrix.from_rows(rows)
    print(f"\n{title}, P = {rows}, m = n = {m}")
    print("rows: d1 = misplaced community-1 nodes; cols: d2\n")
    header = "     " + "".join(f"{d2:>8d}" for d2 in range(n + 1))
    print(header)
    for d1 in range(m + 1):
        vals = [expected_counts_sbm(p, m, n, d1, d2, directed=False)[field]
                for d2 in range(n + 1)]
        print(f"d1={d1:2d} " + "".join(f"{v:8.2f}" for v in vals))

    report = verify_theorem_2_3(p, m, n)
    print("\ngrid verifier:", report)

print("""
Reading the tables: (0,0) is the truth and (m,n) is its relabeled twin — the
same split with the community names swapped. In the assortative table both
corners carry the maximum; everything in between is smaller. In the
core-periphery table the sign flips between the corners (swapping the names
negates the difference statistic), so the truth is where |expected R_d - null|
peaks, which the ratio fields of the verifier confirm.""")
