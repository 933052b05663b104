//! Fock parafermion operators on the full `F^k` occupation space and the
//! generalized Clifford matrices of a single mode.
//!
//! Phases are powers of `q = e^{2πi/F}` and are carried as an integer
//! exponent modulo `F` until a matrix is assembled.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::basis::{enumerate_full_basis, validate_modes, validate_order, OccupationConfig};
use crate::deformation::Deformation;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// The primitive root `q = e^{2πi/F}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRoot {
    order: u32,
    q: Complex64,
}

impl PhaseRoot {
    pub fn new(order: u32) -> Result<Self> {
        validate_order(order)?;
        Ok(PhaseRoot { order, q: Phase::new(1, order).to_complex() })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn pow(&self, exponent: i64) -> Complex64 {
        Phase::new(exponent, self.order).to_complex()
    }
}

/// `q^exponent`, exponent reduced modulo the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Phase {
    exponent: u32,
    order: u32,
}

impl Phase {
    pub fn new(exponent: i64, order: u32) -> Self {
        Phase { exponent: exponent.rem_euclid(order as i64) as u32, order }
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn conj(self) -> Self {
        Phase::new(-(self.exponent as i64), self.order)
    }

    pub fn to_complex(self) -> Complex64 {
        // exact values on the real and imaginary axes
        let twice = 4 * self.exponent as u64;
        if twice.is_multiple_of(self.order as u64) {
            return match (twice / self.order as u64) % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        // q^{F-a} is computed as conj(q^a) so conjugate pairs agree bitwise
        if 2 * self.exponent as u64 > self.order as u64 {
            return Phase::new(self.order as i64 - self.exponent as i64, self.order).to_complex().conj();
        }
        let angle = 2.0 * PI * self.exponent as f64 / self.order as f64;
        Complex64::new(angle.cos(), angle.sin())
    }
}

/// `⟨bra|θ_mode|ket⟩`: equals `q^{-Σ_{s>mode} i_s(bra)}` when `ket` is `bra`
/// with `mode` raised by one, and is absent otherwise.
pub fn destruction_phase(
    bra: &OccupationConfig,
    mode: usize,
    ket: &OccupationConfig,
    order: u32,
) -> Result<Option<Phase>> {
    validate_order(order)?;
    if bra.modes() != ket.modes() {
        return Err(Error::param("ket", "bra and ket have different numbers of modes"));
    }
    if mode >= bra.modes() {
        return Err(Error::param("m", alloc::format!("mode {mode} out of range for k = {}", bra.modes())));
    }
    Ok(match bra.raised(mode, order) {
        Some(raised) if &raised == ket => Some(Phase::new(-(bra.tail_weight(mode) as i64), order)),
        _ => None,
    })
}

/// Matrix of `θ_mode` on the full lexicographic `F^k` basis.
pub fn build_mode_matrix(order: u32, modes: usize, mode: usize) -> Result<CMatrix> {
    validate_order(order)?;
    validate_modes(modes)?;
    if mode >= modes {
        return Err(Error::param("m", alloc::format!("mode {mode} out of range for k = {modes}")));
    }
    let basis = enumerate_full_basis(order, modes)?;
    let dim = basis.len();
    let mut theta = CMatrix::zeros(dim, dim);
    for (row, bra) in basis.iter().enumerate() {
        if let Some(ket) = bra.raised(mode, order) {
            let col = ket.full_rank(order);
            if let Some(phase) = destruction_phase(bra, mode, &ket, order)? {
                theta[(row, col)] = phase.to_complex();
            }
        }
    }
    Ok(theta)
}

/// All `k` mode matrices.
pub fn build_all_modes(order: u32, modes: usize) -> Result<Vec<CMatrix>> {
    (0..modes).map(|m| build_mode_matrix(order, modes, m)).collect()
}

/// `N_i`, diagonal with entry `i_i(P)`.
pub fn number_operator_matrix(order: u32, modes: usize, mode: usize) -> Result<CMatrix> {
    validate_order(order)?;
    validate_modes(modes)?;
    if mode >= modes {
        return Err(Error::param("i", alloc::format!("mode {mode} out of range for k = {modes}")));
    }
    let diag: Vec<f64> = enumerate_full_basis(order, modes)?.iter().map(|p| p.occupations()[mode] as f64).collect();
    Ok(CMatrix::from_real_diagonal(&diag))
}

/// `N_i = Σ_{s=1}^{F-1} (θ_i†)^s θ_i^s`, evaluated from a mode matrix.
pub fn number_operator_from_powers(theta: &CMatrix, order: u32) -> CMatrix {
    let dim = theta.dim();
    let dagger = theta.adjoint();
    let mut acc = CMatrix::zeros(dim, dim);
    let mut pow = CMatrix::identity(dim);
    let mut pow_dag = CMatrix::identity(dim);
    for _ in 1..order {
        pow = pow.matmul(theta);
        pow_dag = dagger.matmul(&pow_dag);
        acc = acc.add(&pow_dag.matmul(&pow));
    }
    acc
}

/// Total parafermion number `Σ_i N_i`.
pub fn total_number_matrix(order: u32, modes: usize) -> Result<CMatrix> {
    let diag: Vec<f64> = enumerate_full_basis(order, modes)?.iter().map(|p| p.weight() as f64).collect();
    Ok(CMatrix::from_real_diagonal(&diag))
}

/// Largest entry of `θ_iθ_j - qθ_jθ_i` over all `i < j`.
pub fn q_commutation_defect(modes: &[CMatrix], q: Complex64) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..modes.len() {
        for j in i + 1..modes.len() {
            let lhs = modes[i].matmul(&modes[j]);
            let rhs = modes[j].matmul(&modes[i]).scale(q);
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    worst
}

/// Largest entry of `θ^F` over all modes.
pub fn nilpotency_defect(modes: &[CMatrix], order: u32) -> f64 {
    modes.iter().fold(0.0, |w, t| w.max(t.pow(order).max_abs()))
}

/// Largest entry of `[N_i, θ_j] + δ_ij θ_j` and `[N_i, θ_j†] - δ_ij θ_j†`.
pub fn number_commutator_defect(numbers: &[CMatrix], modes: &[CMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, n_i) in numbers.iter().enumerate() {
        for (j, theta) in modes.iter().enumerate() {
            let dag = theta.adjoint();
            let mut lower = n_i.commutator(theta);
            let mut raise = n_i.commutator(&dag);
            if i == j {
                lower = lower.add(theta);
                raise = raise.sub(&dag);
            }
            worst = worst.max(lower.max_abs()).max(raise.max_abs());
        }
    }
    worst
}

/// Generalized Clifford matrices of order `F`: the cyclic shift `σ1`, the
/// clock `σ3 = diag(q^j)` and `σ2 = σ3σ1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordTriple {
    pub root: PhaseRoot,
    pub sigma1: CMatrix,
    pub sigma2: CMatrix,
    pub sigma3: CMatrix,
}

impl CliffordTriple {
    pub fn new(order: u32) -> Result<Self> {
        let root = PhaseRoot::new(order)?;
        let f = order as usize;
        let mut sigma1 = CMatrix::zeros(f, f);
        for j in 0..f {
            sigma1[(j, (j + 1) % f)] = Complex64::new(1.0, 0.0);
        }
        let clock: Vec<Complex64> = (0..f).map(|j| root.pow(j as i64)).collect();
        let sigma3 = CMatrix::from_diagonal(&clock);
        let sigma2 = sigma3.matmul(&sigma1);
        Ok(CliffordTriple { root, sigma1, sigma2, sigma3 })
    }

    /// Largest violation among `σ1^F = 1`, `σ3^F = 1`, `σ1σ3 = qσ3σ1`.
    pub fn relation_defect(&self) -> f64 {
        let f = self.root.order();
        let id = CMatrix::identity(f as usize);
        let shift = self.sigma1.pow(f).max_abs_diff(&id);
        let clock = self.sigma3.pow(f).max_abs_diff(&id);
        let braid =
            self.sigma1.matmul(&self.sigma3).max_abs_diff(&self.sigma3.matmul(&self.sigma1).scale(self.root.q()));
        shift.max(clock).max(braid)
    }
}

/// Single-mode annihilator `a = √Φ(N+1) / (1 - q^{N+1}) · (σ1 - qσ2)`.
///
/// `σ1 - qσ2 = (1 - qσ3)σ1`, so the diagonal denominator cancels exactly and
/// `a = diag(√Φ(j+1)) σ1`. The wrap-around entry carries `√Φ(F)`, which must
/// vanish.
pub fn clifford_mode(order: u32, phi: &Deformation) -> Result<CMatrix> {
    let triple = CliffordTriple::new(order)?;
    phi.check_nilpotent(order)?;
    let f = order as usize;
    let amplitudes: Vec<Complex64> = (0..f)
        .map(|j| {
            if j + 1 == f {
                Ok(Complex64::new(0.0, 0.0))
            } else {
                phi.at(j as u32 + 1).map(|v| Complex64::new(v.sqrt(), 0.0))
            }
        })
        .collect::<Result<_>>()?;
    Ok(CMatrix::from_diagonal(&amplitudes).matmul(&triple.sigma1))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn cfg(v: &[u32], f: u32) -> OccupationConfig {
        OccupationConfig::new(v.to_vec(), f).unwrap()
    }

    #[test]
    fn destruction_phase_examples() {
        // reorder θ_1 (θ_2†)(θ_1†)|0⟩ by hand: one swap past θ_2† costs q^{-1}
        let ph = destruction_phase(&cfg(&[0, 1], 3), 0, &cfg(&[1, 1], 3), 3).unwrap().unwrap();
        let expected = Complex64::new((2.0 * PI / 3.0).cos(), -(2.0 * PI / 3.0).sin());
        assert!((ph.to_complex() - expected).norm() < 1e-15);

        let ph = destruction_phase(&cfg(&[0], 2), 0, &cfg(&[1], 2), 2).unwrap().unwrap();
        assert_eq!(ph.to_complex(), Complex64::new(1.0, 0.0));

        assert!(destruction_phase(&cfg(&[1, 1], 3), 0, &cfg(&[1, 2], 3), 3).unwrap().is_none());
        assert!(destruction_phase(&cfg(&[1, 1], 3), 2, &cfg(&[1, 2], 3), 3).is_err());
    }

    #[test]
    fn single_fermion_mode() {
        let theta = build_mode_matrix(2, 1, 0).unwrap();
        assert_eq!(theta, CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));
    }

    #[test]
    fn nilpotency_order_three() {
        let theta = build_mode_matrix(3, 1, 0).unwrap();
        assert!(theta.pow(2).max_abs() > 0.5);
        assert_eq!(theta.pow(3).max_abs(), 0.0);
    }

    #[test]
    fn q_commutation_holds() {
        for (f, k) in [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)] {
            let modes = build_all_modes(f, k).unwrap();
            let q = PhaseRoot::new(f).unwrap().q();
            let d = q_commutation_defect(&modes, q);
            assert!(d <= TOL, "F={f} k={k}: defect {d:e}");
            assert!(nilpotency_defect(&modes, f) <= TOL);
        }
    }

    #[test]
    fn phase_sign_flip_breaks_q_commutation() {
        let mut modes = build_all_modes(3, 2).unwrap();
        let q = PhaseRoot::new(3).unwrap().q();
        // conjugate every phase of θ_1
        modes[0] = CMatrix::from_row_major(9, 9, modes[0].as_slice().iter().map(|z| z.conj()).collect());
        assert!(q_commutation_defect(&modes, q) > 0.1);
    }

    #[test]
    fn number_operators() {
        assert_eq!(number_operator_matrix(2, 1, 0).unwrap(), CMatrix::from_real_diagonal(&[0.0, 1.0]));
        assert_eq!(number_operator_matrix(3, 1, 0).unwrap(), CMatrix::from_real_diagonal(&[0.0, 1.0, 2.0]));
        for (f, k) in [(2, 2), (3, 2), (4, 2), (3, 3)] {
            let modes = build_all_modes(f, k).unwrap();
            let numbers: Vec<CMatrix> = (0..k).map(|i| number_operator_matrix(f, k, i).unwrap()).collect();
            for (n, theta) in numbers.iter().zip(&modes) {
                assert!(number_operator_from_powers(theta, f).max_abs_diff(n) <= TOL);
            }
            assert!(number_commutator_defect(&numbers, &modes) <= TOL);
            let total = numbers.iter().skip(1).fold(numbers[0].clone(), |acc, n| acc.add(n));
            assert_eq!(total, total_number_matrix(f, k).unwrap());
        }
    }

    #[test]
    fn clifford_relations() {
        for f in 2..=6 {
            let t = CliffordTriple::new(f).unwrap();
            assert!(t.relation_defect() <= TOL, "F={f}");
            let q = t.root.q();
            assert!((q.powu(f) - Complex64::new(1.0, 0.0)).norm() <= TOL);
            // σ1 - qσ2 = (1 - qσ3)σ1
            let lhs = t.sigma1.sub(&t.sigma2.scale(q));
            let rhs = CMatrix::identity(f as usize).sub(&t.sigma3.scale(q)).matmul(&t.sigma1);
            assert!(lhs.max_abs_diff(&rhs) <= TOL);
        }
    }

    #[test]
    fn clifford_mode_examples() {
        let a = clifford_mode(2, &Deformation::ParafermionicOsc { order: 2 }).unwrap();
        assert_eq!(a, CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));

        let a = clifford_mode(3, &Deformation::ParafermionicOsc { order: 3 }).unwrap();
        let s2 = 2f64.sqrt();
        let expected = CMatrix::from_real_rows(&[&[0.0, s2, 0.0], &[0.0, 0.0, s2], &[0.0, 0.0, 0.0]]);
        assert!(a.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn clifford_mode_contract() {
        for f in 2..=5 {
            let phi = Deformation::ParafermionicOsc { order: f };
            let a = clifford_mode(f, &phi).unwrap();
            assert!(a.pow(f).max_abs() <= TOL);
            let ada = a.adjoint().matmul(&a);
            let expected: Vec<f64> = (0..f).map(|j| phi.at(j).unwrap()).collect();
            assert!(ada.max_abs_diff(&CMatrix::from_real_diagonal(&expected)) <= TOL);
        }
        let sine = Deformation::custom("sin", |x| (PI * x / 3.0).sin().abs()).unwrap();
        let a = clifford_mode(3, &sine).unwrap();
        assert!(a.pow(3).max_abs() <= TOL);
        assert!(matches!(clifford_mode(3, &Deformation::Undeformed), Err(Error::DeformationContract { .. })));
    }

    #[test]
    fn phase_exact_quarter_turns() {
        assert_eq!(Phase::new(1, 4).to_complex(), Complex64::new(0.0, 1.0));
        assert_eq!(Phase::new(-1, 2).to_complex(), Complex64::new(-1.0, 0.0));
        assert_eq!(Phase::new(5, 3).exponent(), 2);
    }
}
