"""
How the distances scale with series length
==========================================

"""

from tsgraphssl.harness import bench_distances

rows = bench_distances(lengths=[10, 100, 500], repeats=3)
for r in rows:
    print("%-10s %5d  %.2e s" % (r["measure"], r["length"], r["median_s"]))
