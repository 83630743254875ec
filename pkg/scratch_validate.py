# Scratch validation of core physics before freezing test values. Not part of the deliverable.
import math
import time

import numpy as np

from cvdiscord.covariance import (
    StandardForm, entropy_h, random_standard_form, standard_form,
    symplectic_data, symplectic_eigenvalues,
)
from cvdiscord.correlations import (
    DiscordDirection, EMinBranch, brute_force_e_min, classical_correlations,
    conditional_determinant, correlation_report, discord, e_min,
    inseparability, mutual_information, GaussianMeasurement,
)

# --- spec example values ---
vac = StandardForm(0.5, 0.5, 0.0, 0.0)
sdv = symplectic_data(vac)
print("vacuum:", sdv.i1, sdv.i2, sdv.i3, sdv.i4, sdv.d_plus, sdv.d_minus, sdv.physical)

c = math.sqrt(3) / 2
tmsv = StandardForm(1.0, 1.0, c, c)
sdt = symplectic_data(tmsv)
print("tmsv: d+ d- =", sdt.d_plus, sdt.d_minus, "physical", sdt.physical)
print("h(1.0) =", repr(entropy_h(1.0)), " 2h(1) =", 2 * entropy_h(1.0))
print("h(1.5) =", entropy_h(1.5))

over = StandardForm(1.0, 1.0, 0.9, 0.9)
sdo = symplectic_data(over)
print("overcorrelated d- =", sdo.d_minus, "physical", sdo.physical)

print("IM(tmsv) =", mutual_information(sdt))
print("e_min(tmsv) =", e_min(sdt))
print("D(tmsv) =", discord(sdt), " J =", classical_correlations(sdt))
print("insep: vac", inseparability(vac), "tmsv", inseparability(tmsv),
      "= 2(2-sqrt3)?", 2 * (2 - math.sqrt(3)))

prod = StandardForm(1.0, 1.0, 0.0, 0.0)
sdp = symplectic_data(prod)
print("product thermal: e_min", e_min(sdp), "IM", mutual_information(sdp),
      "D", discord(sdp), "insep", inseparability(prod))

# discord-without-squeezing state
dws = StandardForm(1.0, 1.0, 0.5, 0.5)
print("no-squeezing state: insep =", inseparability(dws),
      "D =", discord(symplectic_data(dws)))

# --- brute force oracle checks ---
print("\noracle tmsv:", brute_force_e_min(tmsv), "(expect 0.25)")
print("oracle product:", brute_force_e_min(prod), "(expect 1.0)")

# branch-2 exemplar
b2 = StandardForm(1.0, 1.0, 0.6, 0.1)
sd2 = symplectic_data(b2)
print("branch2 state: physical", sd2.physical, "e_min", e_min(sd2),
      "oracle", brute_force_e_min(b2))

# --- random-state sweep: closed form vs oracle, branch counts ---
for seed in (0, 1, 2, 12345):
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst = 0.0
    counts = {EMinBranch.FIRST: 0, EMinBranch.SECOND: 0}
    for _ in range(100):
        sf = random_standard_form(rng)
        sd = symplectic_data(sf)
        val, br = e_min(sd)
        counts[br] += 1
        bf = brute_force_e_min(sf)
        worst = max(worst, abs(val - bf))
    dt = time.perf_counter() - t0
    print(f"seed {seed}: max|closed-oracle| = {worst:.3g} counts "
          f"first={counts[EMinBranch.FIRST]} second={counts[EMinBranch.SECOND]} "
          f"({dt:.1f}s)")

# --- general eigenvalue cross-check ---
rng = np.random.default_rng(7)
worst = 0.0
for _ in range(200):
    sf = random_standard_form(rng)
    sd = symplectic_data(sf)
    dp, dm = symplectic_eigenvalues(sf.to_covariance())
    worst = max(worst, abs(dp - sd.d_plus), abs(dm - sd.d_minus))
print("max |closed-form d± - eig(iΩγ)| over 200 states:", worst)

# --- noisy measurements never beat pure ones ---
rng = np.random.default_rng(11)
bad = 0
for _ in range(10):
    sf = random_standard_form(rng)
    base = brute_force_e_min(sf)
    for _ in range(50):
        meas = GaussianMeasurement(rng.uniform(0, 3), rng.uniform(0, math.pi))
        noisy = conditional_determinant(sf, meas, added_noise=rng.uniform(0.01, 1.0))
        if noisy < base - 1e-9:
            bad += 1
print("noisy-measurement violations:", bad)

# --- first-branch discriminant sanity on a big sweep ---
rng = np.random.default_rng(99)
neg = 0
for _ in range(2000):
    sf = random_standard_form(rng)
    sd = symplectic_data(sf)
    i1, i2, i3, i4 = sd.i1, sd.i2, sd.i3, sd.i4
    if abs(i3) >= 1e-12 and (i2 - 0.25) >= 1e-12:
        if (i1 * i2 - i4) ** 2 <= i3 * i3 * (i2 + 0.25) * (i1 + 4 * i4):
            disc = i3 * i3 - (i1 - 4 * i4) * (i2 - 0.25)
            if disc < -1e-12:
                neg += 1
print("first-branch negative discriminants in 2000 states:", neg)

# report timing for the acceptance criterion
t0 = time.perf_counter()
for _ in range(200):
    correlation_report(tmsv)
dt = (time.perf_counter() - t0) / 200
print(f"correlation_report time: {dt*1e3:.3f} ms")
