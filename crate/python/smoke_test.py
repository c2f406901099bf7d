"""Smoke test for the vqe_sim extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

import json
import math
from pathlib import Path

import vqe_sim

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def check_algebra():
    x, y = vqe_sim.PauliString("X0"), vqe_sim.PauliString("Y0")
    phase, z = x * y
    assert str(z) == "Z0" and phase == 1j
    assert not x.commutes_with(y)

    a = vqe_sim.PauliSum([(0.5, "X0 X1"), (0.25, "Z0")])
    b = vqe_sim.PauliSum([(1.0, "Z1")])
    assert a.is_hermitian()
    assert len(a.commutator(b)) == 1
    assert (a - a).terms() == []


def check_states():
    psi = vqe_sim.StateVector.basis(0b0011, 4)
    g = vqe_sim.ExcitationGenerator.qubit_double(0, 1, 2, 3)
    out = g.apply(psi, math.pi / 2)
    assert abs(out.norm() - 1.0) < 1e-12
    assert abs(abs(out.amplitudes()[0b1100]) - 1.0) < 1e-12
    assert g.cnot_cost == 13
    assert g.qasm(0.3).startswith("OPENQASM 2.0;")
    assert len(vqe_sim.pool("qubit", 12)) == 1551
    assert len(vqe_sim.pool("pauli", 4)) == 20


def check_runs():
    h2 = vqe_sim.Problem.from_fcidump(str(FIXTURES / "h2_0.735.fcidump"))
    assert h2.n_qubits == 4 and h2.e_fci < h2.e_hf
    hf = vqe_sim.StateVector.basis(h2.reference, h2.n_qubits)
    assert abs(h2.hamiltonian().expectation(hf) - h2.e_hf) < 1e-10

    rec = vqe_sim.run_iqeb(h2, epsilon=1e-8)
    assert abs(rec.final_error) <= 1e-8, rec
    assert rec.termination == "epsilon_reached"
    assert json.loads(rec.to_json())["method"] == "iqeb"

    u = vqe_sim.run_uccsd(h2)
    assert u.n_params == 3 and abs(u.final_error) <= 1e-6

    g = vqe_sim.run_greedy(h2, "fermionic_pairs", epsilon=1e-6)
    assert g.n_params == g.n_iterations

    try:
        vqe_sim.Problem.from_fcidump("/no/such/file")
    except OSError as e:
        assert "/no/such/file" in str(e)
    else:
        raise AssertionError("missing file accepted")


if __name__ == "__main__":
    check_algebra()
    check_states()
    check_runs()
    print("vqe_sim smoke test passed")
