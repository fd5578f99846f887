"""
The defect of the rotation number
=================================

rho(gh) - rho(g) - rho(h) depends only on the endpoints and is bounded by
n/4.  A closed form through Siegel-disk coordinates reproduces every
path-level defect.
"""
import numpy as np

from maslovqm.qm import defect_scan, load_defect_baseline

scan = defect_scan(n=1, count=200, seed=0)
gaps = [abs(s.defect - abs(s.cocycle)) for s in scan.samples]
print("max defect over 200 pairs", scan.max_defect)
print("max gap to closed form   ", max(gaps))
print("committed baseline       ", load_defect_baseline()["max_defect"])

hist, edges = np.histogram([s.defect for s in scan.samples], bins=6, range=(0, 0.15))
for count, lo in zip(hist, edges):
    print(f"{lo:.3f}  {'#' * int(count // 2)}")

# unitary pairs commute with the determinant, so the defect vanishes
print("unitary corpus max defect", defect_scan(n=2, count=20, kind="unitary").max_defect)
