"""How raw errors become credibility indices.

Every assessment in simcred ends in the same normalization: an error e with
a tolerance eps maps to an index in (0, 1], pinned so e == eps scores
exactly the passing mark (0.6 by default).  This script walks the map and
shows why indices from unrelated quantities are comparable.
"""

import numpy as np

from simcred import CredibilityConfig, normalize, scale_factor

config = CredibilityConfig()
print(f"passing mark eta_pass = {config.eta_pass}")
print(f"scale factor k_e = {config.k_e}  (= eta_pass / sqrt(1 - eta_pass^2))")
print()

# the index as the error grows past its tolerance
eps = 1.0
print(f"error e (tolerance {eps}) -> index")
for e in (0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0):
    print(f"  e = {e:5.2f}   eta = {normalize(e, eps):.4f}")
print("note: e == eps lands exactly on the 0.6 passing mark")
print()

# scale invariance: a 2 mm error on a 10 mm tolerance scores the same as
# 2 um on 10 um, so unit choices cannot skew an assessment
a = normalize(2e-3, 10e-3)
b = normalize(2e-6, 10e-6)
print(f"2 mm vs 10 mm tolerance : {a:.6f}")
print(f"2 um vs 10 um tolerance : {b:.6f}  (identical)")
print()

# a stricter culture can raise the passing mark; the scale factor follows
for eta_pass in (0.5, 0.6, 0.75, 0.9):
    k_e = scale_factor(eta_pass)
    check = normalize(1.0, 1.0, CredibilityConfig(eta_pass=eta_pass))
    print(f"eta_pass = {eta_pass:>4}  k_e = {k_e:7.4f}   normalize(eps, eps) = {check:.12f}")
print()

# the half-way landmark: the index crosses 0.5 where e = k_e * eps... which
# is why the curve is gentle near zero error and unforgiving far beyond
errors = np.geomspace(0.01, 100.0, 9)
indices = [normalize(float(e), 1.0) for e in errors]
width = 44
print("index vs error (log-spaced), tolerance 1.0:")
for e, eta in zip(errors, indices):
    bar = "#" * int(round(eta * width))
    print(f"  e = {e:8.3f}  {bar:<{width}} {eta:.3f}")
