use std::f64::consts::PI;

use parafermi_jc_core::exact::{
    exact_f2_deformed, exact_f2_undeformed, exact_f3_k1, semiclassical_levels_f2, semiclassical_log_z_k1,
    semiclassical_z_f2, semiclassical_z_f2_closed_form, semiclassical_z_k1,
};
use parafermi_jc_core::thermo::{log_partition, n_via_mu_derivative, phi_n_via_omega_derivative};
use parafermi_jc_core::{
    add_mu_number_term, block_dimension, build_block, build_full_truncated, build_higher_spin_block, build_mode_matrix,
    clifford_mode, destruction_phase, eigendecompose, enumerate_block_basis, number_operator_matrix,
    thermo_from_spectrum, CMatrix, Complex64, Deformation, ModelParams, OccupationConfig,
};

fn cfg(v: &[u32], f: u32) -> OccupationConfig {
    OccupationConfig::new(v.to_vec(), f).unwrap()
}

fn eigenvalues(h: &CMatrix) -> Vec<f64> {
    eigendecompose(h, false).unwrap().eigenvalues
}

fn assert_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= tol * (1.0 + y.abs()), "{a:?} vs {b:?}");
    }
}

#[test]
fn block_bases() {
    assert_eq!(enumerate_block_basis(2, 1, 0).unwrap(), vec![cfg(&[0], 2)]);
    assert_eq!(enumerate_block_basis(2, 1, 1).unwrap(), vec![cfg(&[0], 2), cfg(&[1], 2)]);
    let b = enumerate_block_basis(4, 3, 2).unwrap();
    assert_eq!(b.len(), 10);
    assert!(b.windows(2).all(|w| w[0].occupations() < w[1].occupations()));
    assert_eq!(block_dimension(4, 3, 5).unwrap(), 44);
    assert_eq!(block_dimension(4, 3, 10).unwrap(), 64);
    assert_eq!(block_dimension(3, 2, 0).unwrap(), 1);
    assert!(enumerate_block_basis(1, 2, 0).is_err());
}

#[test]
fn destruction_phases() {
    let q_inv = Complex64::from_polar(1.0, -2.0 * PI / 3.0);
    let ph = destruction_phase(&cfg(&[0, 1], 3), 0, &cfg(&[1, 1], 3), 3).unwrap().unwrap();
    assert!((ph.to_complex() - q_inv).norm() < 1e-15);
    let ph = destruction_phase(&cfg(&[0], 2), 0, &cfg(&[1], 2), 2).unwrap().unwrap();
    assert_eq!(ph.to_complex(), Complex64::new(1.0, 0.0));
    assert!(destruction_phase(&cfg(&[1, 1], 3), 0, &cfg(&[1, 2], 3), 3).unwrap().is_none());
    assert!(destruction_phase(&cfg(&[1, 1], 3), 2, &cfg(&[1, 2], 3), 3).is_err());
}

#[test]
fn mode_and_number_matrices() {
    let t = build_mode_matrix(2, 1, 0).unwrap();
    assert_eq!(t, CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));
    let t3 = build_mode_matrix(3, 1, 0).unwrap();
    assert!(t3.pow(2).max_abs() > 0.5);
    assert_eq!(t3.pow(3).max_abs(), 0.0);
    assert_eq!(number_operator_matrix(2, 1, 0).unwrap(), CMatrix::from_real_diagonal(&[0.0, 1.0]));
    assert_eq!(number_operator_matrix(3, 1, 0).unwrap(), CMatrix::from_real_diagonal(&[0.0, 1.0, 2.0]));
}

#[test]
fn clifford_modes() {
    let a = clifford_mode(2, &Deformation::ParafermionicOsc { order: 2 }).unwrap();
    assert_eq!(a, CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));
    let a = clifford_mode(3, &Deformation::ParafermionicOsc { order: 3 }).unwrap();
    let r2 = 2f64.sqrt();
    let expected = CMatrix::from_real_rows(&[&[0.0, r2, 0.0], &[0.0, 0.0, r2], &[0.0, 0.0, 0.0]]);
    assert!(a.max_abs_diff(&expected) < 1e-15);
    assert!(clifford_mode(3, &Deformation::Undeformed).is_err());
}

#[test]
fn deformation_values() {
    assert_eq!(Deformation::Undeformed.evaluate(5.0).unwrap(), 5.0);
    assert!((Deformation::QNumberExp { hbar: 1.0 }.evaluate(1.0).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(Deformation::ParafermionicOsc { order: 4 }.evaluate(2.0).unwrap(), 4.0);
    assert_eq!(Deformation::Undeformed.ladder_amplitudes(0).unwrap(), (0.0, 1.0));
    let (a, b) = Deformation::LinearHbar { hbar: 2.0 }.ladder_amplitudes(3).unwrap();
    assert!((a - 6f64.sqrt()).abs() < 1e-15 && (b - 8f64.sqrt()).abs() < 1e-15);
    let (a, b) = Deformation::QNumberExp { hbar: 1.0 }.ladder_amplitudes(2).unwrap();
    assert!((a - (2f64.sinh() / 1f64.sinh()).sqrt()).abs() < 1e-14);
    assert!((b - (3f64.sinh() / 1f64.sinh()).sqrt()).abs() < 1e-14);
}

#[test]
fn two_by_two_block() {
    let p = ModelParams::new(2, 1);
    let b = build_block(&p, 1).unwrap();
    assert_eq!(b.matrix, CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]));
    assert_close(&eigenvalues(&b.matrix), &[0.0, 2.0], 1e-14);
    assert_eq!(build_higher_spin_block(&p, 1).unwrap().matrix, b.matrix);
    assert_eq!(build_block(&ModelParams::new(4, 3), 5).unwrap().dim(), 44);

    let free = ModelParams::new(2, 1).with_couplings(1.0, 1.0, 0.0);
    let shifted = add_mu_number_term(&build_block(&free, 1).unwrap(), 2.0);
    assert_eq!(shifted.matrix, CMatrix::from_real_diagonal(&[3.0, 1.0]));
}

#[test]
fn uncoupled_blocks_are_diagonal() {
    let p =
        ModelParams::new(3, 2).with_couplings(0.7, 1.9, 0.0).with_deformation(Deformation::QNumberExp { hbar: 0.4 });
    let b = build_block(&p, 3).unwrap();
    assert!(b.matrix.is_diagonal());
    for (i, conf) in b.basis.iter().enumerate() {
        let w = conf.weight();
        let expected = 0.7 * p.deformation.at(3 - w).unwrap() + 1.9 * w as f64;
        assert!((b.matrix[(i, i)].re - expected).abs() < 1e-14);
    }
    let full = build_full_truncated(&p, 6).unwrap();
    assert!(full.matrix.is_diagonal());
}

#[test]
fn f2_closed_forms() {
    let s = exact_f2_undeformed(1, 1, 1.0, 1.0, 1.0).unwrap();
    assert_close(&s.expanded(), &[0.0, 2.0], 1e-15);
    let s = exact_f2_undeformed(3, 4, 1.2, 0.7, 0.4).unwrap();
    let degs: Vec<u64> = s.levels.iter().filter(|l| l.branch == 1).map(|l| l.degeneracy).collect();
    assert_eq!(degs, vec![1, 2, 1]);
    assert_eq!(s.total_degeneracy(), 8);
    assert!(exact_f2_undeformed(2, 1, 1.0, 1.0, 1.0).is_err());

    let d = exact_f2_deformed(1, 1, 1.0, 1.0, 1.0, &Deformation::Undeformed).unwrap();
    assert_close(&d.expanded(), &[0.0, 2.0], 1e-15);
    let phi = Deformation::QNumberExp { hbar: 1.0 };
    let p = ModelParams::new(2, 2).with_couplings(1.0, 2.0, 0.5).with_deformation(phi.clone());
    let d = exact_f2_deformed(2, 3, 1.0, 2.0, 0.5, &phi).unwrap();
    assert_close(&eigenvalues(&build_block(&p, 3).unwrap().matrix), &d.expanded(), 1e-9);

    // g = 0 collapses onto the diagonal entries
    let p0 = ModelParams::new(2, 3).with_couplings(1.3, 0.4, 0.0);
    let mut diag: Vec<f64> = build_block(&p0, 5).unwrap().matrix.diagonal().iter().map(|z| z.re).collect();
    diag.sort_by(f64::total_cmp);
    assert_close(&exact_f2_undeformed(3, 5, 1.3, 0.4, 0.0).unwrap().expanded(), &diag, 1e-14);
}

#[test]
fn f3_cubic() {
    let p = ModelParams::new(3, 1).with_couplings(1.0, 2.0, 1.0);
    let s = exact_f3_k1(3, 1.0, 2.0, 1.0).unwrap();
    assert_close(&eigenvalues(&build_block(&p, 3).unwrap().matrix), &s.spectrum.expanded(), 1e-8);
    let tr = build_block(&p, 3).unwrap().matrix.trace().re;
    assert!((s.spectrum.weighted_sum() - tr).abs() < 1e-9 * (1.0 + tr.abs()));

    let weak = ModelParams::new(3, 1).with_couplings(1.5, 1.5, 1e-6);
    let s = exact_f3_k1(3, 1.5, 1.5, 1e-6).unwrap();
    assert_close(&eigenvalues(&build_block(&weak, 3).unwrap().matrix), &s.spectrum.expanded(), 1e-8);
    assert!(exact_f3_k1(2, 1.0, 1.0, 1.0).is_err());
}

#[test]
fn semiclassical_partition_functions() {
    let z_sum = semiclassical_z_f2(1, 2, 1.0, 1.0, 20.0, 1.0, 1.0).unwrap();
    let z_closed = semiclassical_z_f2_closed_form(1, 2, 1.0, 1.0, 20.0, 1.0).unwrap();
    assert!((z_sum - z_closed).abs() <= 1e-10 * z_sum);

    // linearized levels sit within O(ħ²) of the exact ones
    let lin = semiclassical_levels_f2(1, 2, 1.0, 1.0, 20.0, 1.0).unwrap().expanded();
    let exact = exact_f2_undeformed(1, 2, 1.0, 20.0, 1.0).unwrap().expanded();
    for (a, b) in lin.iter().zip(&exact) {
        assert!((a - b).abs() < 0.05, "{lin:?} vs {exact:?}");
    }
    let tiny = semiclassical_levels_f2(2, 4, 1e-9, 1.0, 20.0, 1.0).unwrap().expanded();
    assert_close(&tiny, &[0.0, 20.0, 20.0, 40.0], 1e-8);

    for n in 2..6 {
        let a = semiclassical_z_k1(2, n, 0.7, 1.1, 9.0, 0.8, 1.0).unwrap();
        let b = semiclassical_z_f2(1, n, 0.7, 1.1, 9.0, 0.8, 1.0).unwrap();
        assert!((a - b).abs() <= 1e-10 * b);
    }

    let delta: f64 = 3.0;
    for f in 2..6u32 {
        let z = semiclassical_z_k1(f, f + 1, 1.0, 0.0, delta, 0.0, 1.0).unwrap();
        let hand = 1.0 + (-delta * (f - 1) as f64).exp() + (1..f - 1).map(|s| (-delta * s as f64).exp()).sum::<f64>();
        assert!((z - hand).abs() < 1e-14 * hand);
    }
}

#[test]
fn semiclassical_tracks_numerics() {
    let linear = Deformation::LinearHbar { hbar: 1.0 };
    let p = ModelParams::new(2, 2).with_couplings(5.0, 20.0, 1.0).with_deformation(linear.clone());
    let numeric = log_partition(&p, 4).unwrap();
    let semi = semiclassical_z_f2(2, 4, 1.0, 5.0, 20.0, 1.0, 1.0).unwrap().ln();
    assert!((semi - numeric).abs() / numeric.abs() < 0.05);

    let p = ModelParams::new(3, 1).with_couplings(2.0, 20.0, 1.0).with_deformation(linear);
    let numeric = log_partition(&p, 5).unwrap();
    let semi = semiclassical_log_z_k1(3, 5, 1.0, 2.0, 20.0, 1.0, 1.0).unwrap();
    assert!((semi - numeric).abs() / numeric.abs() < 0.05);
}

#[test]
fn thermal_examples() {
    let p = ModelParams::new(2, 1).with_couplings(1.0, 1.0, 0.0);
    let t = thermo_from_spectrum(&p, 1).unwrap();
    assert!((t.z - 2.0 * (-1f64).exp()).abs() < 1e-15);
    assert!((t.n_expect - 0.5).abs() < 1e-15);

    // mid-plateau of the F = 4, k = 1, n = 5 staircase
    let q = ModelParams::new(4, 1)
        .with_couplings(40.0, 1000.0, 1.0)
        .with_deformation(Deformation::QNumberExp { hbar: 1.0 });
    let n = n_via_mu_derivative(&q, 5, 1e-4).unwrap();
    assert!((n - n.round()).abs() < 1e-2 && n.round() == 4.0, "{n}");

    // single-mode fermion, small ω: ⟨a†a⟩ sits at n
    let f =
        ModelParams::new(2, 1).with_couplings(2.0, 20.0, 1.0).with_deformation(Deformation::LinearHbar { hbar: 1.0 });
    let v = phi_n_via_omega_derivative(&f, 4, 1e-4).unwrap();
    assert!((v - 4.0).abs() < 0.1, "{v}");
}
