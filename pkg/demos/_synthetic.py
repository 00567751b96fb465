"""Small synthetic two-class dataset shared by the demos."""

import numpy as np

from tsgraphssl import Dataset, TimeSeries


def two_sines(n=120, length=80, shift=1.0, noise=0.35, seed=0, ragged=False):
    rng = np.random.default_rng(seed)
    series = []
    for i in range(n):
        label = 1 if i % 2 else -1
        m = int(rng.integers(length - 15, length + 1)) if ragged else length
        t = np.linspace(0, 2 * np.pi, m)
        phase = shift if label > 0 else 0.0
        series.append(TimeSeries(np.sin(t + phase) + noise * rng.standard_normal(m), label))
    return Dataset(tuple(series), name="two_sines")
