#!/usr/bin/env python3
"""Regenerate the FCIDUMP fixtures under tests/fixtures with PySCF.

Each fixture gets a JSON sidecar holding the FCI ground energy (total energy,
core included) computed in the same run.
"""
import json
import os
import sys

from pyscf import fci, gto, scf, tools

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests", "fixtures")


def chain(n_atoms, r):
    return "; ".join(f"H 0 0 {i * r:.6f}" for i in range(n_atoms))


def make(name, atom, basis="sto-3g"):
    mol = gto.M(atom=atom, basis=basis, unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    path = os.path.join(OUT, name + ".fcidump")
    tools.fcidump.from_scf(mf, path, tol=1e-15)
    cis = fci.FCI(mf)
    e_fci, _ = cis.kernel()
    sidecar = {
        "description": f"{atom} / {basis}, RHF orbitals",
        "n_spatial": int(mol.nao),
        "n_electrons": int(mol.nelectron),
        "hf_energy": float(mf.e_tot),
        "fci_energy": float(e_fci),
    }
    with open(os.path.join(OUT, name + ".json"), "w") as f:
        json.dump(sidecar, f, indent=2)
        f.write("\n")
    print(name, sidecar)


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    make("h2_sto3g", "H 0 0 0; H 0 0 0.74")
    for r in (1.0, 1.5, 2.0, 2.5):
        make(f"h4_chain_r{int(r * 10):02d}", chain(4, r))
    sys.exit(0)
