//! The table-producing subcommands.

use parafermi_jc_core::exact::{
    exact_f2_deformed, exact_f2_undeformed, exact_f3_k1, semiclassical_log_z_f2, semiclassical_log_z_k1,
};
use parafermi_jc_core::thermo::{n_via_mu_derivative, thermo_from_spectrum, validate_grid};
use parafermi_jc_core::{block_dimension, build_block, eigendecompose, Deformation, ModelParams};
use rayon::prelude::*;

use crate::config::{DeformationSpec, RunConfig};
use crate::output::{Cell, Table};
use crate::CliError;

/// `spectrum` flags a mismatch above this absolute difference.
pub const SPECTRUM_TOLERANCE: f64 = 1e-8;

pub const THERMO_HEADER: [&str; 6] = ["omega", "Z", "free_energy", "phi_N", "N", "W"];

pub const SEMICLASSICAL_HEADER: [&str; 4] = ["omega", "F_numeric", "F_semiclassical", "rel_err"];

pub fn dims(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut table = Table::new(vec!["n", "dimension"]);
    for n in 0..=cfg.n_max {
        let d = block_dimension(cfg.order, cfg.k, n)?;
        table.push(vec![Cell::Int(n as i64), Cell::Int(d as i64)]);
    }
    Ok(table)
}

/// Closed-form levels of `H_n` if a formula covers this configuration.
pub fn closed_form(params: &ModelParams, n: u32) -> Result<Option<Vec<f64>>, CliError> {
    let (f, k) = (params.order, params.modes);
    let undeformed = match params.deformation {
        Deformation::Undeformed => true,
        Deformation::LinearHbar { hbar } => hbar == 1.0,
        _ => false,
    };
    if f == 2 && n as usize >= k {
        let spec = if undeformed {
            exact_f2_undeformed(k, n, params.omega, params.delta, params.g)?
        } else {
            exact_f2_deformed(k, n, params.omega, params.delta, params.g, &params.deformation)?
        };
        return Ok(Some(spec.expanded()));
    }
    if f == 3 && k == 1 && n >= 3 && undeformed {
        return Ok(Some(exact_f3_k1(n, params.omega, params.delta, params.g)?.spectrum.expanded()));
    }
    Ok(None)
}

/// Eigenvalues of `H_n`; the flag is false if a closed form disagrees.
pub fn spectrum(cfg: &RunConfig) -> Result<(Table, bool), CliError> {
    let params = cfg.params();
    let block = build_block(&params, cfg.n)?;
    let eig = eigendecompose(&block.matrix, false)?;
    let exact = closed_form(&params, cfg.n)?;
    let mut table = Table::new(vec!["index", "eigenvalue", "exact", "abs_diff", "match"]);
    let mut ok = true;
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let row = match exact.as_ref().and_then(|e| e.get(j)) {
            Some(&e) => {
                let diff = (lambda - e).abs();
                let good = diff <= SPECTRUM_TOLERANCE;
                ok &= good;
                vec![Cell::Int(j as i64), lambda.into(), e.into(), diff.into(), Cell::Bool(good)]
            }
            None => vec![Cell::Int(j as i64), lambda.into(), Cell::Empty, Cell::Empty, Cell::Empty],
        };
        table.push(row);
    }
    Ok((table, ok))
}

fn at_omega(params: &ModelParams, omega: f64) -> ModelParams {
    let mut p = params.clone();
    p.omega = omega;
    p
}

pub fn thermo_scan(cfg: &RunConfig) -> Result<Table, CliError> {
    let params = cfg.params();
    let grid = cfg.omega_grid();
    validate_grid(&grid)?;
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&omega| {
            let p = at_omega(&params, omega);
            let t = thermo_from_spectrum(&p, cfg.n)?;
            // ⟨N⟩ through the μN perturbation, cross-checked against the trace
            let n_mu = n_via_mu_derivative(&p, cfg.n, cfg.mu_step)?;
            let check = parafermi_jc_core::thermo::DerivativeCheck::new(n_mu, t.n_expect, cfg.mu_step)
                .with_rounding(t.free_energy, cfg.mu_step);
            if !check.passed() {
                return Err(CliError::Numerical(format!(
                    "mu derivative {n_mu} disagrees with trace value {} at omega = {omega}",
                    t.n_expect
                )));
            }
            Ok(vec![
                omega.into(),
                t.z.into(),
                t.free_energy.into(),
                t.phi_n_expect.into(),
                t.n_expect.into(),
                t.w_expect.into(),
            ])
        })
        .collect::<Result<_, CliError>>()?;
    let mut table = Table::new(THERMO_HEADER.to_vec());
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

/// Free energy from the linearized levels.
pub fn semiclassical_free_energy(params: &ModelParams, n: u32) -> Result<f64, CliError> {
    let (f, k) = (params.order, params.modes);
    let log_z = if f == 2 {
        semiclassical_log_z_f2(k, n, params.hbar, params.omega, params.delta, params.g, params.beta)?
    } else if k == 1 {
        semiclassical_log_z_k1(f, n, params.hbar, params.omega, params.delta, params.g, params.beta)?
    } else {
        return Err(CliError::Parameter(format!(
            "semiclassical partition functions exist for F = 2 or k = 1, got F = {f}, k = {k}"
        )));
    };
    Ok(-log_z / params.beta)
}

/// Numeric free energy of `H_n` with `Φ(x) = ħx` against the semiclassical one.
pub fn semiclassical_compare(cfg: &RunConfig) -> Result<Table, CliError> {
    match cfg.deformation {
        DeformationSpec::Undeformed => {}
        DeformationSpec::Linear { hbar: Some(h) } if h == cfg.hbar => {}
        _ => {
            return Err(CliError::Parameter(
                "semiclassical-compare uses the linear deformation with --hbar; drop --deformation".into(),
            ))
        }
    }
    let params = cfg.params().with_deformation(Deformation::LinearHbar { hbar: cfg.hbar });
    let grid = cfg.omega_grid();
    validate_grid(&grid)?;
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&omega| {
            let p = at_omega(&params, omega);
            let numeric = thermo_from_spectrum(&p, cfg.n)?.free_energy;
            let semi = semiclassical_free_energy(&p, cfg.n)?;
            let rel = (semi - numeric).abs() / numeric.abs();
            Ok(vec![omega.into(), numeric.into(), semi.into(), rel.into()])
        })
        .collect::<Result<_, CliError>>()?;
    let mut table = Table::new(SEMICLASSICAL_HEADER.to_vec());
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}
