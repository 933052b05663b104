//! Canonical thermodynamics of a single block `H_n`.
//!
//! `Z = Tr e^{−βH_n}` is evaluated with a shifted log-sum-exp, so very large
//! level spacings (`Δ ~ 10³` at `β = 1`) stay finite in `log Z` even when
//! `Z` itself under- or overflows.
//!
//! Expectation values come from the eigenvectors: every observable used
//! here (`Φ(N)`, `N`, `W`) is diagonal in the block basis. Two independent
//! routes are offered for cross-checking them:
//!
//! * `⟨Φ(N)⟩ = −(1/β) ∂_ω log Z` (Hellmann-Feynman, central differences in ω);
//! * `⟨N⟩ = ∂_μ F` with `F = −(1/β) log Z` of `H_n + μN`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::eigen::eigendecompose;
use crate::error::{Error, Result};
use crate::hamiltonian::{add_mu_number_term, build_block, BlockHamiltonian, ModelParams};

/// `log Σ e^{x_i}` without overflow. Empty input gives `−∞`.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let xs: Vec<f64> = terms.into_iter().collect();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || !max.is_finite() {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoObservables {
    /// `Z`; may underflow to zero or overflow, `log_z` is always finite.
    pub z: f64,
    pub log_z: f64,
    /// `−(1/β) log Z`.
    pub free_energy: f64,
    /// `⟨a†a⟩ = ⟨Φ(N)⟩`.
    pub phi_n_expect: f64,
    /// `⟨N⟩`, boson number.
    pub n_expect: f64,
    /// `⟨W⟩`, total parafermion number.
    pub w_expect: f64,
}

/// Boltzmann-weighted observables of an already built block.
pub fn thermo_from_block(params: &ModelParams, block: &BlockHamiltonian) -> Result<ThermoObservables> {
    params.validate()?;
    let spec = eigendecompose(&block.matrix, true)?;
    let vecs = spec.eigenvectors.as_ref().expect("requested eigenvectors");
    let beta = params.beta;
    let ground = spec.eigenvalues.first().copied().unwrap_or(0.0);

    let boltz: Vec<f64> = spec.eigenvalues.iter().map(|&e| (-beta * (e - ground)).exp()).collect();
    let norm: f64 = boltz.iter().sum();
    let log_z = -beta * ground + norm.ln();

    let bosons = block.boson_numbers();
    let mut phi_n = 0.0;
    let mut n_expect = 0.0;
    let mut w_expect = 0.0;
    for (row, &b) in bosons.iter().enumerate() {
        let occupation: f64 = vecs.row(row).iter().zip(&boltz).map(|(v, p)| v.norm_sqr() * p).sum::<f64>() / norm;
        phi_n += occupation * params.deformation.at(b)?;
        n_expect += occupation * b as f64;
        w_expect += occupation * (block.n - b) as f64;
    }

    Ok(ThermoObservables { z: log_z.exp(), log_z, free_energy: -log_z / beta, phi_n_expect: phi_n, n_expect, w_expect })
}

/// Builds `H_n`, diagonalizes it and returns its thermal observables.
pub fn thermo_from_spectrum(params: &ModelParams, n: u32) -> Result<ThermoObservables> {
    thermo_from_block(params, &build_block(params, n)?)
}

fn log_z_of(block: &BlockHamiltonian, beta: f64) -> Result<f64> {
    let spec = eigendecompose(&block.matrix, false)?;
    Ok(log_sum_exp(spec.eigenvalues.iter().map(|&e| -beta * e)))
}

/// `log Z` of `H_n` from eigenvalues alone.
pub fn log_partition(params: &ModelParams, n: u32) -> Result<f64> {
    log_z_of(&build_block(params, n)?, params.beta)
}

/// Default central-difference step `10⁻⁴ (1 + |x|)`.
pub fn default_step(x: f64) -> f64 {
    1e-4 * (1.0 + x.abs())
}

fn require_step(step: f64) -> Result<()> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::param("step", alloc::format!("must be > 0, got {step}")));
    }
    Ok(())
}

/// `⟨Φ(N)⟩ ≈ −[log Z(ω+h) − log Z(ω−h)] / (2hβ)`.
pub fn phi_n_via_omega_derivative(params: &ModelParams, n: u32, step: f64) -> Result<f64> {
    require_step(step)?;
    let mut shifted = params.clone();
    shifted.omega = params.omega + step;
    let up = log_partition(&shifted, n)?;
    shifted.omega = params.omega - step;
    let down = log_partition(&shifted, n)?;
    Ok(-(up - down) / (2.0 * step * params.beta))
}

/// `⟨N⟩ ≈ [F(μ=h) − F(μ=−h)] / 2h` for `H_n + μN`.
pub fn n_via_mu_derivative(params: &ModelParams, n: u32, step: f64) -> Result<f64> {
    require_step(step)?;
    let block = build_block(params, n)?;
    let free = |mu: f64| -> Result<f64> { Ok(-log_z_of(&add_mu_number_term(&block, mu), params.beta)? / params.beta) };
    Ok((free(step)? - free(-step)?) / (2.0 * step))
}

/// Outcome of comparing a finite-difference estimate with the trace value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeCheck {
    pub finite_difference: f64,
    pub trace: f64,
    pub tolerance: f64,
}

impl DerivativeCheck {
    /// Tolerance `max(10⁻⁶, h² · (1 + |trace|))`.
    pub fn new(finite_difference: f64, trace: f64, step: f64) -> Self {
        DerivativeCheck { finite_difference, trace, tolerance: 1e-6f64.max(step * step * (1.0 + trace.abs())) }
    }

    /// Widens the tolerance by the rounding error `ε · |f| / h` of a central
    /// difference of a function of magnitude `f`.
    pub fn with_rounding(mut self, magnitude: f64, step: f64) -> Self {
        self.tolerance += 64.0 * f64::EPSILON * (1.0 + magnitude.abs()) / step;
        self
    }

    pub fn deviation(&self) -> f64 {
        (self.finite_difference - self.trace).abs()
    }

    pub fn passed(&self) -> bool {
        self.deviation() <= self.tolerance
    }
}

/// One [`ThermoObservables`] per grid point, in grid order.
pub fn omega_scan(params: &ModelParams, n: u32, omega_grid: &[f64]) -> Result<Vec<(f64, ThermoObservables)>> {
    validate_grid(omega_grid)?;
    omega_grid
        .iter()
        .map(|&omega| {
            let mut p = params.clone();
            p.omega = omega;
            thermo_from_spectrum(&p, n).map(|t| (omega, t))
        })
        .collect()
}

pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::param("omega_grid", "grid is empty"));
    }
    if grid.iter().any(|w| !w.is_finite()) {
        return Err(Error::param("omega_grid", "grid has non-finite points"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("omega_grid", "grid must be strictly ascending"));
    }
    Ok(())
}

/// Which observable a staircase is read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlateauObservable {
    /// `⟨a†a⟩ / ħ`; integer-valued on plateaus when `Φ(x) = ħx`.
    PhiN,
    /// `⟨N⟩`, a bare count, not rescaled.
    BosonNumber,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    pub omega_lo: f64,
    pub omega_hi: f64,
    pub level: i64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlateauReport {
    pub plateaus: Vec<Plateau>,
    /// Midpoints between the edges of adjacent plateaus.
    pub crossover_points: Vec<f64>,
}

impl PlateauReport {
    pub fn levels(&self) -> Vec<i64> {
        self.plateaus.iter().map(|p| p.level).collect()
    }

    /// True if levels fall by exactly one from each plateau to the next.
    pub fn is_unit_staircase(&self) -> bool {
        self.plateaus.windows(2).all(|w| w[0].level - w[1].level == 1)
    }
}

/// Maximal runs of grid points whose observable lies within `tol` of an
/// integer. Levels are the nearest integers; no runs yields an empty report.
pub fn detect_plateaus(
    scan: &[(f64, ThermoObservables)],
    observable: PlateauObservable,
    hbar: f64,
    tol: f64,
) -> Result<PlateauReport> {
    if !(tol > 0.0 && tol < 0.5) {
        return Err(Error::param("tol", alloc::format!("must lie in (0, 0.5), got {tol}")));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::param("hbar", "must be > 0"));
    }
    let mut plateaus: Vec<Plateau> = Vec::new();
    let mut open = false;
    for &(omega, ref obs) in scan {
        let value = match observable {
            PlateauObservable::PhiN => obs.phi_n_expect / hbar,
            PlateauObservable::BosonNumber => obs.n_expect,
        };
        let level = value.round();
        if (value - level).abs() < tol {
            let level = level as i64;
            match plateaus.last_mut() {
                Some(last) if open && last.level == level => last.omega_hi = omega,
                _ => plateaus.push(Plateau { omega_lo: omega, omega_hi: omega, level }),
            }
            open = true;
        } else {
            open = false;
        }
    }
    let crossover_points = plateaus.windows(2).map(|w| 0.5 * (w[0].omega_hi + w[1].omega_lo)).collect();
    Ok(PlateauReport { plateaus, crossover_points })
}

/// `n` points from `min` to `max` inclusive, evenly spaced in `log ω`.
pub fn log_grid(min: f64, max: f64, n: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = spaced(min.ln(), max.ln(), n).into_iter().map(f64::exp).collect();
    if let Some(first) = grid.first_mut() {
        *first = min;
    }
    if n > 1 {
        grid[n - 1] = max;
    }
    grid
}

/// `n` points from `min` to `max` inclusive, evenly spaced.
pub fn linear_grid(min: f64, max: f64, n: usize) -> Vec<f64> {
    spaced(min, max, n)
}

fn spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect(),
    }
}
