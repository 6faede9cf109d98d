"""Schmidt-number certification of interacting fermion ground states.

A 12-site spinless chain at hopping t = 1 is solved exactly (particle-number
sectors, dense diagonalization) and cut in half.  Unlike the flat trial
state, a physical ground state has a steeply decaying Schmidt spectrum, so
the projected CM's singular values fade into the cutoff gradually.
"""

import numpy as np

import schmidt_cert as sc

rng = sc.derive_rng(0, "fermion-demo")

for u_int in (0.0, 6.0):
    psi = sc.fermion_chain_ground_state(12, 1.0, u_int, 6)
    data = sc.schmidt_decompose(psi, cutoff=1e-7)
    print(f"U = {u_int:>3}: chi = {data.chi} (cutoff 1e-7)")
    print("   top Schmidt coefficients:", np.round(data.coefficients[:6], 6))
    if u_int == 0:
        print("   free-fermion energy oracle:", sc.free_fermion_ground_energy(12, 1.0))
    report = sc.certify(psi, k=2 * data.chi, rng=rng, rotation="haar", seed_label=0)
    print(
        f"   rotated K={2 * data.chi}: rank {report.numerical_rank}, "
        f"certified Schmidt number >= {report.certified_schmidt_lower_bound}"
    )
