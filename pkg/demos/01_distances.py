"""
Four ways to compare two time series
====================================

"""

import numpy as np

from tsgraphssl import distance as D

t = np.linspace(0, 2 * np.pi, 60)
x = np.sin(t)
y = np.sin(t + 0.6)          # same shape, shifted in time
z = np.random.default_rng(1).standard_normal(60)

# Euclidean compares samples at equal time stamps, so a phase shift costs a lot
print("euclidean  x-y %.3f   x-z %.3f" % (D.euclidean_distance(x, y), D.euclidean_distance(x, z)))

# DTW is allowed to warp the time axis and mostly forgives the shift
print("dtw        x-y %.3f   x-z %.3f" % (D.dtw_distance(x, y), D.dtw_distance(x, z)))

# soft-DTW replaces the min by a smooth soft-min; as gamma shrinks it approaches DTW
for gamma in (10.0, 1.0, 0.01):
    print("soft_dtw   gamma=%-5g %.4f" % (gamma, D.soft_dtw(x, y, gamma)))

# soft-DTW itself can be negative; the divergence removes the self terms and is 0 on x-x
print("divergence x-x %.2e   x-y %.3f" % (D.soft_dtw_divergence(x, x, 1.0),
                                            D.soft_dtw_divergence(x, y, 1.0)))

# MPdist looks at sliding windows, here half the series long
L = D.mpdist_window(x.size, y.size, 0.5)
profile = D.matrix_profile(x, y, L)
print("matrix profile: %d entries, window %d" % (profile.size, L))
print("mpdist     x-y %.3f   x-z %.3f" % (D.mpdist(x, y), D.mpdist(x, z)))

# series of different lengths are fine for everything except Euclidean
short = np.sin(np.linspace(0, 2 * np.pi, 45))
print("dtw on lengths 60/45: %.3f" % D.dtw_distance(x, short))
