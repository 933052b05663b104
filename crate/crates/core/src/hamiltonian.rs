//! Block Hamiltonians of the parafermionic Jaynes-Cummings model
//!
//! `H = ω Φ(N) + Δ Σ_i N_i + g Σ_i (a θ_i† + a† θ_i)`
//!
//! restricted to the eigenspace `N_tot = n`, with basis states
//! `|n − W(P)⟩ ⊗ |P⟩` for every occupation configuration of weight `≤ n`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{build_all_modes, total_number_matrix, Phase};
use crate::basis::{
    enumerate_block_basis, enumerate_full_basis, validate_modes, validate_order, BasisIndex, OccupationConfig,
};
use crate::deformation::Deformation;
use crate::eigen::HERMITIAN_TOLERANCE;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Couplings, sizes and temperature of one model instance.
#[derive(Debug, Clone)]
pub struct ModelParams {
    /// Nilpotency order `F ≥ 2`.
    pub order: u32,
    /// Number of parafermion modes `k ≥ 1`.
    pub modes: usize,
    pub omega: f64,
    pub delta: f64,
    pub g: f64,
    /// Scale used by the semiclassical formulas and to normalize `⟨Φ(N)⟩`
    /// when detecting plateaus. The Hamiltonian itself only sees
    /// `deformation`.
    pub hbar: f64,
    pub beta: f64,
    pub deformation: Deformation,
}

impl ModelParams {
    /// Unit couplings, `ħ = β = 1`, undeformed boson.
    pub fn new(order: u32, modes: usize) -> Self {
        ModelParams {
            order,
            modes,
            omega: 1.0,
            delta: 1.0,
            g: 1.0,
            hbar: 1.0,
            beta: 1.0,
            deformation: Deformation::Undeformed,
        }
    }

    pub fn with_couplings(mut self, omega: f64, delta: f64, g: f64) -> Self {
        self.omega = omega;
        self.delta = delta;
        self.g = g;
        self
    }

    pub fn with_deformation(mut self, deformation: Deformation) -> Self {
        self.deformation = deformation;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    /// Largest parafermion weight `k(F − 1)`.
    pub fn max_weight(&self) -> u32 {
        self.modes as u32 * (self.order - 1)
    }

    pub fn validate(&self) -> Result<()> {
        validate_order(self.order)?;
        validate_modes(self.modes)?;
        for (name, v) in [("omega", self.omega), ("delta", self.delta), ("g", self.g)] {
            if !v.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(Error::param("hbar", alloc::format!("must be > 0, got {}", self.hbar)));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::param("beta", alloc::format!("must be > 0, got {}", self.beta)));
        }
        self.deformation.validate()
    }
}

/// One `N_tot = n` block: its basis and dense Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockHamiltonian {
    pub n: u32,
    pub basis: Vec<OccupationConfig>,
    pub matrix: CMatrix,
}

impl BlockHamiltonian {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Boson number `n − W(P)` of every basis state.
    pub fn boson_numbers(&self) -> Vec<u32> {
        self.basis.iter().map(|p| self.n - p.weight()).collect()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.basis.iter().map(OccupationConfig::weight).collect()
    }
}

fn assert_hermitian(matrix: &CMatrix) -> Result<()> {
    let defect = matrix.hermiticity_defect();
    if defect > HERMITIAN_TOLERANCE * matrix.max_abs() {
        return Err(Error::NotHermitian { dim: matrix.dim(), deviation: defect });
    }
    Ok(())
}

enum Hopping {
    Parafermion,
    Spin,
}

fn assemble(params: &ModelParams, n: u32, hopping: Hopping) -> Result<BlockHamiltonian> {
    params.validate()?;
    let order = params.order;
    let phi = &params.deformation;
    let basis = enumerate_block_basis(order, params.modes, n)?;
    let index = BasisIndex::new(order, params.modes, &basis)?;
    let dim = basis.len();
    let mut h = CMatrix::zeros(dim, dim);

    for (col, p) in basis.iter().enumerate() {
        let w = p.weight();
        let bosons = n - w;
        h[(col, col)] = Complex64::new(params.omega * phi.at(bosons)? + params.delta * w as f64, 0.0);
        if params.g == 0.0 {
            continue;
        }
        for l in 0..params.modes {
            let i_l = p.occupations()[l];
            // a θ_l†: parafermion up, boson down
            if let Some(up) = p.raised(l, order) {
                if let Some(row) = index.position(&up) {
                    let amp = params.g * phi.at(bosons)?.sqrt();
                    h[(row, col)] += match hopping {
                        Hopping::Parafermion => Phase::new(up.tail_weight(l) as i64, order).to_complex() * amp,
                        Hopping::Spin => {
                            let s = ((i_l + 1) as f64 * (order - 1 - i_l) as f64).sqrt();
                            Complex64::new(amp * s, 0.0)
                        }
                    };
                }
            }
            // a† θ_l: parafermion down, boson up
            if let Some(down) = p.lowered(l) {
                if let Some(row) = index.position(&down) {
                    let amp = params.g * phi.at(bosons + 1)?.sqrt();
                    h[(row, col)] += match hopping {
                        Hopping::Parafermion => Phase::new(-(p.tail_weight(l) as i64), order).to_complex() * amp,
                        Hopping::Spin => {
                            let s = (i_l as f64 * (order - i_l) as f64).sqrt();
                            Complex64::new(amp * s, 0.0)
                        }
                    };
                }
            }
        }
    }
    assert_hermitian(&h)?;
    Ok(BlockHamiltonian { n, basis, matrix: h })
}

/// `H_n` with q-phase hopping amplitudes.
pub fn build_block(params: &ModelParams, n: u32) -> Result<BlockHamiltonian> {
    assemble(params, n, Hopping::Parafermion)
}

/// `H_n` of the higher-spin JC model: the q-phases are replaced by the
/// spin-`(F−1)/2` ladder factors `√(i(F−i))`.
pub fn build_higher_spin_block(params: &ModelParams, n: u32) -> Result<BlockHamiltonian> {
    assemble(params, n, Hopping::Spin)
}

/// Adds `μ N` (boson number) to a block.
pub fn add_mu_number_term(block: &BlockHamiltonian, mu: f64) -> BlockHamiltonian {
    let mut out = block.clone();
    for (i, bosons) in block.boson_numbers().into_iter().enumerate() {
        out.matrix[(i, i)] += Complex64::new(mu * bosons as f64, 0.0);
    }
    out
}

/// Hamiltonian on `span{|b⟩ ⊗ |P⟩ : b ≤ n_max}` built from the boson ladder
/// and the full parafermion mode matrices, boson index outermost.
#[derive(Debug, Clone)]
pub struct TruncatedHamiltonian {
    pub n_max: u32,
    pub matrix: CMatrix,
    /// `(boson number, configuration)` of every row.
    pub labels: Vec<(u32, OccupationConfig)>,
}

impl TruncatedHamiltonian {
    /// Diagonal matrix of `N_tot = b + W(P)`.
    pub fn total_number_matrix(&self) -> CMatrix {
        let diag: Vec<f64> = self.labels.iter().map(|(b, p)| (b + p.weight()) as f64).collect();
        CMatrix::from_real_diagonal(&diag)
    }

    /// Rows belonging to the `N_tot = n` sector.
    pub fn sector_rows(&self, n: u32) -> Vec<usize> {
        self.labels.iter().enumerate().filter(|(_, (b, p))| b + p.weight() == n).map(|(i, _)| i).collect()
    }

    /// Principal submatrix on the given rows.
    pub fn submatrix(&self, rows: &[usize]) -> CMatrix {
        let mut out = CMatrix::zeros(rows.len(), rows.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in rows.iter().enumerate() {
                out[(i, j)] = self.matrix[(r, c)];
            }
        }
        out
    }
}

pub fn build_full_truncated(params: &ModelParams, n_max: u32) -> Result<TruncatedHamiltonian> {
    params.validate()?;
    if n_max < params.max_weight() {
        return Err(Error::param("n_max", alloc::format!("must be >= k(F-1) = {}", params.max_weight())));
    }
    let phi = &params.deformation;
    let nb = n_max as usize + 1;

    let mut boson_energy = Vec::with_capacity(nb);
    let mut annihilate = CMatrix::zeros(nb, nb);
    for b in 0..nb {
        boson_energy.push(phi.at(b as u32)?);
        if b > 0 {
            annihilate[(b - 1, b)] = Complex64::new(phi.at(b as u32)?.sqrt(), 0.0);
        }
    }
    let create = annihilate.adjoint();

    let order = params.order;
    let modes = build_all_modes(order, params.modes)?;
    let pf_dim = modes[0].dim();
    let pf_id = CMatrix::identity(pf_dim);
    let boson_id = CMatrix::identity(nb);

    let mut h = CMatrix::from_real_diagonal(&boson_energy)
        .kron(&pf_id)
        .scale(Complex64::new(params.omega, 0.0))
        .add(&boson_id.kron(&total_number_matrix(order, params.modes)?).scale(Complex64::new(params.delta, 0.0)));
    let g = Complex64::new(params.g, 0.0);
    for theta in &modes {
        let hop = annihilate.kron(&theta.adjoint()).add(&create.kron(theta)).scale(g);
        h = h.add(&hop);
    }
    assert_hermitian(&h)?;

    let configs = enumerate_full_basis(order, params.modes)?;
    let labels = (0..=n_max).flat_map(|b| configs.iter().map(move |p| (b, p.clone()))).collect();
    Ok(TruncatedHamiltonian { n_max, matrix: h, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigendecompose;

    fn unit(order: u32, modes: usize) -> ModelParams {
        ModelParams::new(order, modes)
    }

    fn spectrum(m: &CMatrix) -> Vec<f64> {
        eigendecompose(m, false).unwrap().eigenvalues
    }

    #[test]
    fn two_level_block() {
        let b = build_block(&unit(2, 1), 1).unwrap();
        assert_eq!(b.matrix, CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]));
        let ev = spectrum(&b.matrix);
        assert!(ev[0].abs() < 1e-14 && (ev[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn no_coupling_is_diagonal() {
        let p = unit(3, 2).with_couplings(0.7, 1.3, 0.0);
        let b = build_block(&p, 3).unwrap();
        assert!(b.matrix.is_diagonal());
        for (i, cfg) in b.basis.iter().enumerate() {
            let w = cfg.weight() as f64;
            assert_eq!(b.matrix[(i, i)].re, 0.7 * (3.0 - w) + 1.3 * w);
        }
        let s = build_higher_spin_block(&p, 3).unwrap();
        assert_eq!(s.matrix.diagonal(), b.matrix.diagonal());
    }

    #[test]
    fn block_sizes_follow_generating_function() {
        let b = build_block(&unit(4, 3), 5).unwrap();
        assert_eq!(b.dim(), 44);
        for n in 7..10 {
            assert_eq!(build_block(&unit(3, 3), n).unwrap().dim(), 27);
        }
    }

    #[test]
    fn blocks_are_hermitian_and_k1_real() {
        for (f, k) in [(2, 3), (3, 2), (4, 2), (5, 1)] {
            for n in 0..k as u32 * (f - 1) + 3 {
                let p = unit(f, k).with_couplings(0.9, 1.7, 0.6);
                let b = build_block(&p, n).unwrap();
                assert_eq!(b.matrix.hermiticity_defect(), 0.0);
                if k == 1 {
                    assert!(b.matrix.as_slice().iter().all(|z| z.im == 0.0 && z.re >= 0.0));
                }
            }
        }
    }

    #[test]
    fn linear_hbar_one_is_undeformed() {
        let a = build_block(&unit(3, 2).with_couplings(1.1, 0.4, 0.8), 5).unwrap();
        let b = build_block(
            &unit(3, 2).with_couplings(1.1, 0.4, 0.8).with_deformation(Deformation::LinearHbar { hbar: 1.0 }),
            5,
        )
        .unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn spin_half_matches_fermion() {
        let p = unit(2, 1);
        assert_eq!(build_block(&p, 1).unwrap().matrix, build_higher_spin_block(&p, 1).unwrap().matrix);
    }

    #[test]
    fn spin_one_differs_by_sqrt_two_in_coupling() {
        // spin-1 ladder entries are √2 where the F = 3 parafermion has 1
        let g = 0.8;
        let pf = build_block(&unit(3, 1).with_couplings(1.0, 2.0, g), 4).unwrap();
        let spin = build_higher_spin_block(&unit(3, 1).with_couplings(1.0, 2.0, g / 2f64.sqrt()), 4).unwrap();
        assert!(pf.matrix.max_abs_diff(&spin.matrix) < 1e-14);
    }

    #[test]
    fn mu_term() {
        let p = unit(2, 1).with_couplings(1.0, 1.0, 0.0);
        let b = build_block(&p, 1).unwrap();
        assert_eq!(add_mu_number_term(&b, 0.0), b);
        let shifted = add_mu_number_term(&b, 2.0);
        // basis [(0), (1)]: boson numbers 1 and 0
        assert_eq!(shifted.matrix, CMatrix::from_real_diagonal(&[3.0, 1.0]));
    }

    #[test]
    fn negative_structure_function_is_reported() {
        let p = unit(2, 1).with_deformation(Deformation::ParafermionicOsc { order: 3 });
        assert!(build_block(&p, 2).is_ok());
        assert!(matches!(build_block(&p, 4), Err(Error::DeformationContract { .. })));
    }

    #[test]
    fn truncated_space_conserves_total_number() {
        let p = unit(3, 2).with_couplings(0.8, 1.2, 0.5);
        let t = build_full_truncated(&p, 6).unwrap();
        assert_eq!(t.matrix.dim(), 7 * 9);
        assert!(t.matrix.commutator(&t.total_number_matrix()).max_abs() < 1e-14);
        for n in 0..=6 {
            let rows = t.sector_rows(n);
            let block = build_block(&p, n).unwrap();
            assert_eq!(rows.len(), block.dim());
            // same basis order: boson-outer layout sorted by configuration
            let a = spectrum(&t.submatrix(&rows));
            let b = spectrum(&block.matrix);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        assert!(build_full_truncated(&p, 3).is_err());
        let free = build_full_truncated(&p.clone().with_couplings(1.0, 1.0, 0.0), 4).unwrap();
        assert!(free.matrix.is_diagonal());
    }
}
