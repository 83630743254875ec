# Debug the worst-case oracle disagreement. Not part of the deliverable.
import math

import numpy as np

from cvdiscord.covariance import StandardForm, random_standard_form, symplectic_data
from cvdiscord.correlations import (
    brute_force_e_min, e_min, _det_at, _det_surface,
)

rng = np.random.default_rng(12345)
worst = None
for _ in range(100):
    sf = random_standard_form(rng)
    sd = symplectic_data(sf)
    val, br = e_min(sd)
    bf = brute_force_e_min(sf)
    d = abs(val - bf)
    if worst is None or d > worst[0]:
        worst = (d, sf, val, br, bf)

d, sf, val, br, bf = worst
print("worst diff:", d)
print("state:", sf)
print("closed:", val, br, " oracle:", bf, " oracle-closed:", bf - val)

# dense scan around the global minimum
sq = np.linspace(0, 7, 2000)
th = np.linspace(0, math.pi, 2000, endpoint=False)
S = _det_surface(sf, sq[:, None], th[None, :])
i, j = np.unravel_index(int(np.argmin(S)), S.shape)
print("dense grid min:", S[i, j], "at squeeze", sq[i], "angle", th[j])

# even denser local refinement via simple nested scan
lo_s, hi_s = max(0, sq[i] - 0.01), min(7, sq[i] + 0.01)
lo_t, hi_t = th[j] - 0.01, th[j] + 0.01
for _ in range(6):
    s2 = np.linspace(lo_s, hi_s, 200)
    t2 = np.linspace(lo_t, hi_t, 200)
    S2 = _det_surface(sf, s2[:, None], t2[None, :])
    a, b = np.unravel_index(int(np.argmin(S2)), S2.shape)
    width_s = (hi_s - lo_s) / 10
    width_t = (hi_t - lo_t) / 10
    lo_s, hi_s = max(0, s2[a] - width_s), min(7, s2[a] + width_s)
    lo_t, hi_t = t2[b] - width_t, t2[b] + width_t
print("nested-scan min:", S2[a, b], "at squeeze", s2[a], "angle", t2[b])
print("closed-form value again:", val)

# check: maybe closed form < true min (formula wrong?) or oracle stuck high
print("diff nested vs closed:", S2[a, b] - val)

# look at the theta = 0 section at various squeezes for structure
for q in (0.0, 0.5, 1.0, 2.0, 4.0, 6.0, 7.0):
    print(f"  f(sq={q}, th=0) = {_det_at(sf, q, 0.0):.9f}   f(sq={q}, th=pi/2) = {_det_at(sf, q, math.pi/2):.9f}")
