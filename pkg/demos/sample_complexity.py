"""The worst-case / typical-case sample-complexity dichotomy.

The statistic mu0 = d max_P sum_ij |<l_i|P|l_j>|^2 governs how many Pauli
samples preserve the projected CM's rank.  Computational-basis Schmidt
vectors give mu0 = d chi (worst case, K ~ d chi needed); Haar-rotated bases
concentrate near chi^2 (typical case, K ~ chi^2 log chi suffices).  The
isotropic-vector experiment shows the underlying random-matrix mechanism.
"""

import math

import numpy as np

import schmidt_cert as sc
from schmidt_cert.cm import projected_cm_spectrum
from schmidt_cert.state import SchmidtData

d, m, chi = 64, 6, 4
rng = sc.derive_rng(0, "complexity-demo")

eye = np.eye(d, dtype=complex)
comp = SchmidtData(np.full(chi, 1 / chi), eye[:, :chi], eye[:, :chi])
print(f"computational basis: mu0 = {sc.mu0_exact(comp):.0f} (= d*chi = {d * chi})")

basis = sc.haar_unitary(d, rng).entries[:, :chi]
haar = SchmidtData(np.full(chi, 1 / chi), basis, basis)
print(f"Haar-rotated basis:  mu_U = {sc.mu0_exact(haar):.1f} (chi^2 = {chi**2})")

print("\nfull-rank recovery frequency over 20 seeds:")
lam = np.full(chi, 1 / chi)
for basis_kind in ("computational", "haar"):
    for k in (64, 512, 2048):
        wins = 0
        for seed in range(20):
            trial_rng = sc.derive_rng(1, "demo-scan", basis_kind, k, seed)
            if basis_kind == "computational":
                left = right = eye[:, :chi]
            else:
                left = sc.haar_unitary(d, trial_rng).entries[:, :chi]
                right = sc.haar_unitary(d, trial_rng).entries[:, :chi]
            pauli_set = sc.sample_pauli_set(m, k, trial_rng)
            svals = projected_cm_spectrum(left, right, lam, pauli_set)
            rank = sc.numerical_rank(
                np.sort(svals)[::-1] / (pauli_set.distinct + 1), 1e-7
            )
            wins += rank == chi * chi
        print(f"  {basis_kind:>13} K={k:>4}: {wins}/20")

# The abstract mechanism: N isotropic draws of norm <= sqrt(mu) reach full
# rank n once N ~ mu log n (coupon collector at mu = n).
n, mu = 16, 16.0
for draws in (8, 16, 32, 64, 128):
    freq = sc.isotropic_rank_experiment(n, mu, draws, 200, sc.derive_rng(2, "demo-iso", draws))
    print(f"isotropic n={n}, mu={mu:.0f}, N={draws:>3}: full-rank frequency {freq:.2f}")
print("coupon-collector estimate for 95% success:", math.ceil(n * math.log(n / 0.05)), "draws")
