//! Jordan–Wigner ladders, molecular Hamiltonians and reference energies.

mod common;

use common::*;
use num_complex::Complex64;
use vqe_core::driver::reference_energies;
use vqe_core::fixture::{FixtureManifest, SweepManifest};
use vqe_core::ground::{dense_ground_state, exact_ground_energy, lanczos_ground_state};
use vqe_core::fermion::{build_molecular_hamiltonian, jw_ladder};
use vqe_core::*;

fn anticommutator(a: &PauliSum, b: &PauliSum) -> PauliSum {
    &a.multiply(b) + &b.multiply(a)
}

#[test]
fn ladders_anticommute() {
    let n = 6;
    let id = PauliSum::identity(1.0);
    for i in 0..n {
        for j in 0..n {
            let (ai, aj) = (jw_ladder(i, false, n).unwrap(), jw_ladder(j, false, n).unwrap());
            let adj = jw_ladder(j, true, n).unwrap();
            let expected = if i == j { id.clone() } else { PauliSum::zero() };
            assert!(anticommutator(&ai, &adj).approx_eq(&expected, 1e-14), "{{a_{i}, a†_{j}}}");
            assert!(anticommutator(&ai, &aj).is_empty(), "{{a_{i}, a_{j}}}");
            assert!(anticommutator(&adj, &jw_ladder(i, true, n).unwrap()).is_empty());
        }
    }
}

#[test]
fn ladders_are_adjoints_and_act_on_occupations() {
    let n = 4;
    for i in 0..n {
        let a = jw_ladder(i, false, n).unwrap();
        assert!(a.adjoint().approx_eq(&jw_ladder(i, true, n).unwrap(), 1e-15));
        // a†_i a_i is the occupation projector on bit i
        let num = sum_matrix(&jw_ladder(i, true, n).unwrap().multiply(&a), n);
        for b in 0..1usize << n {
            for b2 in 0..1usize << n {
                let expected = if b == b2 && b >> i & 1 == 1 { 1.0 } else { 0.0 };
                assert!((num[(b2, b)] - Complex64::new(expected, 0.0)).norm() < 1e-15);
            }
        }
    }
    // a†_2 |0011⟩ = (−1)^2 |0111⟩
    let m = sum_matrix(&jw_ladder(2, true, n).unwrap(), n);
    assert!((m[(0b0111, 0b0011)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    let m = sum_matrix(&jw_ladder(1, false, n).unwrap(), n);
    assert!((m[(0b0101, 0b0111)] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn hartree_fock_occupies_lowest_orbitals() {
    assert_eq!(hartree_fock_reference(2, 4).unwrap(), 0b0011);
    assert_eq!(hartree_fock_reference(4, 12).unwrap(), 0b1111);
    assert!(hartree_fock_reference(0, 4).is_err());
    assert!(hartree_fock_reference(5, 4).is_err());
}

#[test]
fn qubit_single_matrix() {
    // T̃_10 = Q†_1 Q_0 − Q†_0 Q_1 maps |01⟩ → |10⟩ and |10⟩ → −|01⟩
    let g = ExcitationGenerator::qubit_single(1, 0).unwrap();
    let m = sum_matrix(g.generator(), 2);
    let mut expected = CMat::zeros(4, 4);
    expected[(0b10, 0b01)] = c(1.0, 0.0);
    expected[(0b01, 0b10)] = c(-1.0, 0.0);
    assert!((m - expected).iter().all(|z| z.norm() < 1e-15));
}

#[test]
fn h2_reference_energies_match_manifest() {
    let mf = FixtureManifest::from_file(fixture("h2_0.735.manifest")).unwrap();
    let ints = MolecularIntegrals::from_fcidump_file(fixture("h2_0.735.fcidump")).unwrap();
    let h = qubit_hamiltonian(&ints);
    assert_eq!(ints.n_qubits(), 4);
    assert!(h.is_hermitian(1e-12));
    let (e_hf, e_fci) = reference_energies(&h, &ints).unwrap();
    assert!((e_hf - mf.scf_energy).abs() <= 1e-8, "{e_hf} vs {}", mf.scf_energy);
    assert!((e_fci - mf.fci_energy.unwrap()).abs() <= 1e-8);
    assert!(e_fci <= e_hf);
}

#[test]
fn unrestricted_ground_energy_matches_dense_spectrum() {
    let ints = MolecularIntegrals::from_fcidump_file(fixture("h2_0.735.fcidump")).unwrap();
    let h = jw_transform(&build_molecular_hamiltonian(&ints), 4).unwrap();
    let dense = sum_matrix(&h, 4);
    let eig = nalgebra::SymmetricEigen::new(dense.map(|z| z.re));
    let lowest = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    // the unrestricted minimum is the two-electron ground state for H2
    let e = exact_ground_energy(&h, 4, None).unwrap();
    assert!((lowest - e).abs() < 1e-10);
}

#[test]
fn dense_and_lanczos_agree() {
    for name in ["h2_0.735", "h2_2.000"] {
        let ints = MolecularIntegrals::from_fcidump_file(fixture(&format!("{name}.fcidump"))).unwrap();
        let h = qubit_hamiltonian(&ints);
        for sector in [None, Some(2)] {
            let d = dense_ground_state(&h, 4, sector).unwrap();
            let l = lanczos_ground_state(&h, 4, sector).unwrap();
            assert!((d.energy - l.energy).abs() < 1e-9, "{name} {sector:?}");
            assert!(phase_distance(d.state.amplitudes(), l.state.amplitudes()) < 1e-8);
        }
    }
}

#[test]
fn lih_exact_energy_matches_manifest() {
    let mf = FixtureManifest::from_file(fixture("lih_1.546.manifest")).unwrap();
    let p = problem("lih_1.546");
    assert_eq!(p.n_qubits, 12);
    assert!((p.e_hf - mf.scf_energy).abs() <= 1e-8);
    assert!((p.e_fci - mf.fci_energy.unwrap()).abs() <= 1e-8);
}

#[test]
fn lih_stretched_is_strongly_correlated() {
    let p = problem("lih_3.000");
    assert!(p.e_hf - p.e_fci > 1e-2, "{}", p.e_hf - p.e_fci);
}

#[test]
fn sweep_manifests_parse() {
    for m in ["h2", "lih", "beh2"] {
        let s = SweepManifest::from_file(fixture(&format!("{m}_sweep.txt"))).unwrap();
        assert_eq!(s.molecule, m);
        assert!(s.points.len() >= 2);
        assert!(s.points.iter().all(|p| p.fcidump.exists()));
    }
    let err = SweepManifest::parse("1.0 a\n0.5 b\n", "x", std::path::Path::new(".")).unwrap_err();
    assert!(matches!(err, vqe_core::Error::Parse { line: Some(2), .. }));
}
