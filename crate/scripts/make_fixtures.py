"""Regenerate the STO-3G FCIDUMP fixtures and their manifests.

Requires pyscf. Run from the repository root:

    python3 scripts/make_fixtures.py
"""

import os

import pyscf
from pyscf import fci, gto, scf
from pyscf.tools import fcidump

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")


def geometry(molecule, r):
    if molecule == "h2":
        return f"H 0 0 0; H 0 0 {r}"
    if molecule == "lih":
        return f"Li 0 0 0; H 0 0 {r}"
    if molecule == "beh2":
        return f"H 0 0 {-r}; Be 0 0 0; H 0 0 {r}"
    raise ValueError(molecule)


def build(molecule, r):
    mol = gto.M(atom=geometry(molecule, r), basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-13
    mf.conv_tol_grad = 1e-10
    mf.kernel()
    # Follow internal instabilities so stretched geometries land on the lowest RHF solution.
    for _ in range(4):
        mo, _, stable, _ = mf.stability(return_status=True)
        if stable:
            break
        dm = mf.make_rdm1(mo, mf.mo_occ)
        mf.kernel(dm)
    assert mf.converged
    e_fci = fci.FCI(mf).kernel()[0]
    name = f"{molecule}_{r:.3f}"
    path = os.path.join(OUT, name + ".fcidump")
    fcidump.from_scf(mf, path, tol=1e-14)
    with open(os.path.join(OUT, name + ".manifest"), "w") as f:
        f.write(f"name = {name}\n")
        f.write(f"molecule = {molecule}\n")
        f.write(f"basis = sto-3g\n")
        f.write(f"bond_length_angstrom = {r:.3f}\n")
        f.write(f"n_spatial = {mol.nao}\n")
        f.write(f"n_electrons = {mol.nelectron}\n")
        f.write(f"scf_energy = {mf.e_tot:.12f}\n")
        f.write(f"fci_energy = {e_fci:.12f}\n")
        f.write(f"source = pyscf {pyscf.__version__}\n")
    return name, mf.e_tot, e_fci


GRIDS = {
    "h2": [0.5, 0.735, 1.0, 1.5, 2.0, 2.5],
    "lih": [1.0, 1.546, 2.0, 2.5, 3.0],
    "beh2": [1.316, 3.0],
}

if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    for molecule, grid in GRIDS.items():
        rows = []
        for r in grid:
            name, e_scf, e_fci = build(molecule, r)
            print(f"{name:12s} scf={e_scf:.10f} fci={e_fci:.10f}")
            rows.append(f"{r:.3f} {name}.fcidump {e_scf:.12f} {e_fci:.12f}")
        with open(os.path.join(OUT, f"{molecule}_sweep.txt"), "w") as f:
            f.write(f"# {molecule} STO-3G dissociation sweep: bond_length fcidump scf fci\n")
            f.write("\n".join(rows) + "\n")
