"""
Running a small experiment grid
===============================

The same thing as ``tsgraphssl run``, driven from Python.
"""

import tempfile
from pathlib import Path

from _synthetic import two_sines
from tsgraphssl.dataset import write_ucr_tsv
from tsgraphssl.harness import DistanceCache, ExperimentSpec, run_experiment, write_results

work = Path(tempfile.mkdtemp())
write_ucr_tsv(two_sines(n=80, seed=4), work / "two_sines.tsv")

spec = ExperimentSpec(
    datasets=[str(work / "two_sines.tsv")],
    distances=["euclidean", "dtw"],
    methods=["ac", "ls", "1nn"],
    fractions=[0.05, 0.2],
    repeats=10,
    cache_dir=str(work / "cache"),
)
cache = DistanceCache(spec.cache_dir)
results = run_experiment(spec, cache)
write_results(results, work / "results.csv")
print("computed %d distance matrices" % cache.computed)

# second run: every matrix comes from the cache
run_experiment(spec, cache)
print("cache hits on rerun: %d" % cache.hits)

for line in (work / "results.csv").read_text().splitlines():
    if "summary" in line:
        print(line)
