//! Built-in invariant suites behind `parafermi-jc verify`.

use std::f64::consts::SQRT_2;

use parafermi_jc_core::algebra::{
    build_all_modes, nilpotency_defect, number_commutator_defect, number_operator_from_powers, q_commutation_defect,
    total_number_matrix,
};
use parafermi_jc_core::basis::block_dimension_alternating;
use parafermi_jc_core::exact::{
    binomial, exact_f2_deformed, exact_f2_undeformed, exact_f3_k1, semiclassical_log_z_f2, semiclassical_log_z_k1,
    semiclassical_z_f2, semiclassical_z_f2_closed_form,
};
use parafermi_jc_core::thermo::{
    default_step, log_grid, n_via_mu_derivative, phi_n_via_omega_derivative, thermo_from_spectrum,
};
use parafermi_jc_core::{
    block_dimension, build_block, build_full_truncated, build_higher_spin_block, clifford_mode, detect_plateaus,
    eigendecompose, number_operator_matrix, omega_scan, CMatrix, CliffordTriple, Complex64, Deformation, ModelParams,
    PhaseRoot, PlateauObservable, Result,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::config::Scope;

const SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    /// Worst observed deviation, when the check is numeric.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub scope: String,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl Summary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

struct Suite {
    name: &'static str,
    checks: Vec<Check>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { name, checks: Vec::new() }
    }

    fn within(&mut self, name: impl Into<String>, deviation: Result<f64>, tolerance: f64) {
        let name = name.into();
        let check = match deviation {
            Ok(d) => Check {
                suite: self.name,
                name,
                passed: d <= tolerance,
                deviation: Some(d),
                tolerance: Some(tolerance),
                detail: None,
            },
            Err(e) => Check {
                suite: self.name,
                name,
                passed: false,
                deviation: None,
                tolerance: Some(tolerance),
                detail: Some(e.to_string()),
            },
        };
        self.checks.push(check);
    }

    fn holds(&mut self, name: impl Into<String>, outcome: Result<bool>) {
        let (passed, detail) = match outcome {
            Ok(p) => (p, None),
            Err(e) => (false, Some(e.to_string())),
        };
        self.checks.push(Check {
            suite: self.name,
            name: name.into(),
            passed,
            deviation: None,
            tolerance: None,
            detail,
        });
    }
}

pub fn run(scope: Scope) -> Summary {
    let suites: Vec<(Scope, fn() -> Suite)> = vec![
        (Scope::Algebra, algebra),
        (Scope::Deformation, deformation),
        (Scope::Hamiltonian, hamiltonian),
        (Scope::Eigen, eigen),
        (Scope::Exact, exact),
        (Scope::Thermo, thermo),
    ];
    let checks: Vec<Check> =
        suites.into_iter().filter(|(s, _)| scope == Scope::All || *s == scope).flat_map(|(_, f)| f().checks).collect();
    let failed = checks.iter().filter(|c| !c.passed).count();
    Summary { scope: format!("{scope:?}").to_lowercase(), passed: checks.len() - failed, failed, checks }
}

fn max_abs_vec_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).fold(0.0, |w, (x, y)| w.max((x - y).abs()))
}

fn max_scaled_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).fold(0.0, |w, (x, y)| w.max((x - y).abs() / (1.0 + y.abs())))
}

fn eigenvalues(h: &CMatrix) -> Result<Vec<f64>> {
    Ok(eigendecompose(h, false)?.eigenvalues)
}

fn block_eigenvalues(params: &ModelParams, n: u32) -> Result<Vec<f64>> {
    eigenvalues(&build_block(params, n)?.matrix)
}

fn algebra() -> Suite {
    let mut s = Suite::new("algebra");
    for (f, k) in [(2u32, 2usize), (3, 2), (3, 3), (4, 2), (4, 3)] {
        let modes = build_all_modes(f, k);
        let q = PhaseRoot::new(f).map(|r| r.q());
        s.within(
            format!("q_commutation F={f} k={k}"),
            modes.clone().and_then(|m| Ok(q_commutation_defect(&m, q?))),
            1e-12,
        );
        s.within(format!("nilpotency F={f} k={k}"), modes.clone().map(|m| nilpotency_defect(&m, f)), 1e-12);
        s.within(
            format!("number_commutators F={f} k={k}"),
            modes.clone().and_then(|m| {
                let numbers = (0..k).map(|i| number_operator_matrix(f, k, i)).collect::<Result<Vec<_>>>()?;
                Ok(number_commutator_defect(&numbers, &m))
            }),
            1e-12,
        );
        s.within(
            format!("number_operator_from_powers F={f} k={k}"),
            modes.and_then(|m| {
                let mut worst: f64 = 0.0;
                let mut total = CMatrix::zeros(m[0].dim(), m[0].dim());
                for (i, theta) in m.iter().enumerate() {
                    let direct = number_operator_matrix(f, k, i)?;
                    worst = worst.max(number_operator_from_powers(theta, f).max_abs_diff(&direct));
                    total = total.add(&direct);
                }
                Ok(worst.max(total.max_abs_diff(&total_number_matrix(f, k)?)))
            }),
            1e-12,
        );
    }
    for f in 2..=6 {
        s.within(format!("clifford_relations F={f}"), CliffordTriple::new(f).map(|t| t.relation_defect()), 1e-12);
    }
    for f in 2..=5 {
        let phi = Deformation::ParafermionicOsc { order: f };
        s.within(
            format!("clifford_mode F={f}"),
            clifford_mode(f, &phi).and_then(|a| {
                let nil = a.pow(f).max_abs();
                let diag: Vec<f64> = (0..f).map(|j| phi.at(j)).collect::<Result<_>>()?;
                let number = a.adjoint().matmul(&a).max_abs_diff(&CMatrix::from_real_diagonal(&diag));
                Ok(nil.max(number))
            }),
            1e-12,
        );
    }
    s.holds(
        "dimension_series F=4 k=3",
        (0..=10)
            .map(|n| block_dimension(4, 3, n))
            .collect::<Result<Vec<_>>>()
            .map(|d| d == [1, 4, 10, 20, 32, 44, 54, 60, 63, 64, 64]),
    );
    s.holds(
        "dimension_alternating_form",
        (|| {
            for f in 2..=5u32 {
                for k in 1..=4usize {
                    for n in 0..=3 * k as u32 * (f - 1) {
                        if block_dimension(f, k, n)? as i128 != block_dimension_alternating(f, k, n)? {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        })(),
    );
    s
}

fn deformation() -> Suite {
    let mut s = Suite::new("deformation");
    let variants = [
        Deformation::Undeformed,
        Deformation::LinearHbar { hbar: 0.3 },
        Deformation::QNumberSym { q: 1.7 },
        Deformation::QNumberExp { hbar: 1.0 },
        Deformation::ParafermionicOsc { order: 4 },
    ];
    for phi in &variants {
        s.within(format!("vacuum {}", phi.name()), phi.evaluate(0.0).map(f64::abs), 0.0);
    }
    for f in 2..=6 {
        s.holds(
            format!("pfosc_nilpotent F={f}"),
            Deformation::ParafermionicOsc { order: f }.check_nilpotent(f).map(|_| true),
        );
    }
    for phi in &variants[..4] {
        s.holds(
            format!("monotone {}", phi.name()),
            (0..20u32)
                .map(|n| Ok(phi.at(n + 1)? > phi.at(n)?))
                .collect::<Result<Vec<bool>>>()
                .map(|v| v.into_iter().all(|b| b)),
        );
    }
    for hbar in [1e-2, 1e-3] {
        s.holds(
            format!("qexp_small_hbar hbar={hbar}"),
            (0..=10u32)
                .map(|n| {
                    let v = Deformation::QNumberExp { hbar }.at(n)?;
                    let nf = n as f64;
                    Ok((v - nf).abs() <= nf.powi(3) * hbar * hbar / 6.0 + 1e-12)
                })
                .collect::<Result<Vec<bool>>>()
                .map(|v| v.into_iter().all(|b| b)),
        );
    }
    s.within(
        "qsym_matches_qexp",
        (0..=12u32)
            .map(|n| {
                let a = Deformation::QNumberSym { q: 1f64.exp() }.at(n)?;
                let b = Deformation::QNumberExp { hbar: 1.0 }.at(n)?;
                Ok((a - b).abs() / (1.0 + b))
            })
            .collect::<Result<Vec<f64>>>()
            .map(|v| v.into_iter().fold(0.0, f64::max)),
        1e-12,
    );
    s
}

fn hamiltonian() -> Suite {
    let mut s = Suite::new("hamiltonian");
    let mut rng = StdRng::seed_from_u64(SEED);
    for (f, k) in [(2u32, 3usize), (3, 2), (4, 2), (3, 3), (5, 1)] {
        s.within(
            format!("hermitian F={f} k={k}"),
            (|| {
                let mut worst: f64 = 0.0;
                for n in 0..=k as u32 * (f - 1) + 2 {
                    let p = ModelParams::new(f, k).with_couplings(
                        rng.gen_range(0.1..3.0),
                        rng.gen_range(0.1..3.0),
                        rng.gen_range(0.1..3.0),
                    );
                    let h = build_block(&p, n)?.matrix;
                    worst = worst.max(h.hermiticity_defect() / h.max_abs().max(1.0));
                }
                Ok(worst)
            })(),
            1e-12,
        );
        let sat = k as u32 * (f - 1) + 1;
        s.holds(
            format!("saturation F={f} k={k}"),
            (|| {
                let a = block_dimension(f, k, sat)?;
                let b = block_dimension(f, k, sat + 1)?;
                Ok(a == b && a == (f as u64).pow(k as u32))
            })(),
        );
    }
    s.within(
        "linear_hbar_one_is_undeformed",
        (|| {
            let p = ModelParams::new(3, 2).with_couplings(0.7, 1.3, 0.9);
            let a = build_block(&p, 5)?.matrix;
            let b = build_block(&p.clone().with_deformation(Deformation::LinearHbar { hbar: 1.0 }), 5)?.matrix;
            Ok(a.max_abs_diff(&b))
        })(),
        0.0,
    );
    let spin_grid = [(0.5, 1.0, 0.3), (1.0, 2.0, 1.0), (2.5, 0.7, 1.7)];
    for (f, rescale) in [(2u32, 1.0), (3, SQRT_2)] {
        s.within(
            format!("spin_equivalence F={f} g_scale={rescale}"),
            (|| {
                let mut worst: f64 = 0.0;
                for &(w, d, g) in &spin_grid {
                    for phi in [Deformation::Undeformed, Deformation::QNumberExp { hbar: 0.5 }] {
                        for n in 0..6 {
                            let p = ModelParams::new(f, 1).with_couplings(w, d, g).with_deformation(phi.clone());
                            let mut spin = p.clone();
                            spin.g = g / rescale;
                            let a = block_eigenvalues(&p, n)?;
                            let b = eigenvalues(&build_higher_spin_block(&spin, n)?.matrix)?;
                            worst = worst.max(max_abs_vec_diff(&a, &b));
                        }
                    }
                }
                Ok(worst)
            })(),
            1e-10,
        );
    }
    s.holds(
        "k1_blocks_real_nonnegative",
        (|| {
            for f in 2..=5 {
                let b = build_block(&ModelParams::new(f, 1).with_couplings(0.4, 1.1, 0.8), f + 1)?;
                if !b.matrix.as_slice().iter().all(|z| z.im == 0.0 && z.re >= 0.0) {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
    );
    for (f, k) in [(2u32, 2usize), (3, 2)] {
        s.within(format!("block_full_equivalence F={f} k={k}"), block_full_defect(f, k), 1e-9);
    }
    s
}

/// Worst distance from a block eigenvalue to the truncated full spectrum.
fn block_full_defect(f: u32, k: usize) -> Result<f64> {
    let p = ModelParams::new(f, k).with_couplings(0.9, 1.3, 0.6);
    let n_max = k as u32 * (f - 1) + 4;
    let full = eigenvalues(&build_full_truncated(&p, n_max)?.matrix)?;
    let mut worst: f64 = 0.0;
    for n in 0..n_max {
        for lambda in block_eigenvalues(&p, n)? {
            let nearest = full.iter().map(|e| (e - lambda).abs()).fold(f64::INFINITY, f64::min);
            worst = worst.max(nearest);
        }
    }
    Ok(worst)
}

fn random_hermitian(n: usize, rng: &mut StdRng) -> CMatrix {
    let mut h = CMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

fn eigen() -> Suite {
    let mut s = Suite::new("eigen");
    let mut rng = StdRng::seed_from_u64(SEED);
    for n in [2usize, 9, 50, 128] {
        let h = random_hermitian(n, &mut rng);
        let spec = eigendecompose(&h, true);
        s.within(
            format!("trace_and_frobenius n={n}"),
            spec.as_ref().map_err(Clone::clone).map(|sp| {
                let tr = h.trace().re;
                let fro = h.frobenius_norm_sq();
                let sum: f64 = sp.eigenvalues.iter().sum();
                let sq: f64 = sp.eigenvalues.iter().map(|x| x * x).sum();
                ((sum - tr).abs() / (1.0 + tr.abs())).max((sq - fro).abs() / (1.0 + fro))
            }),
            1e-9,
        );
        s.within(
            format!("residual n={n}"),
            spec.as_ref()
                .map_err(Clone::clone)
                .map(|sp| sp.max_residual(&h).unwrap_or(f64::INFINITY) / (1.0 + h.max_abs() * n as f64)),
            1e-10,
        );
        s.within(
            format!("orthonormality n={n}"),
            spec.as_ref().map_err(Clone::clone).map(|sp| sp.orthonormality_defect().unwrap_or(f64::INFINITY)),
            1e-10,
        );
    }
    s.within(
        "phased_permutation_invariance",
        (|| {
            let n = 40;
            let h = random_hermitian(n, &mut rng);
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let mut u = CMatrix::zeros(n, n);
            for (i, &p) in perm.iter().enumerate() {
                u[(i, p)] = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            }
            let rotated = u.matmul(&h).matmul(&u.adjoint());
            Ok(max_abs_vec_diff(&eigenvalues(&h)?, &eigenvalues(&rotated)?))
        })(),
        1e-9,
    );
    s.holds(
        "rejects_non_hermitian",
        Ok(eigendecompose(&CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]), false).is_err()),
    );
    s
}

const COUPLINGS: [f64; 3] = [0.1, 1.0, 10.0];

fn exact() -> Suite {
    let mut s = Suite::new("exact");
    for (label, phi) in [("undeformed", Deformation::Undeformed), ("qexp", Deformation::QNumberExp { hbar: 1.0 })] {
        s.within(
            format!("f2_{label}_vs_numeric"),
            (|| {
                let mut worst: f64 = 0.0;
                for k in 1..=3usize {
                    for n in k as u32..k as u32 + 3 {
                        for &(w, d, g) in &[(0.1, 1.0, 10.0), (1.0, 10.0, 0.1), (10.0, 0.1, 1.0), (1.0, 1.0, 1.0)] {
                            let p = ModelParams::new(2, k).with_couplings(w, d, g).with_deformation(phi.clone());
                            let exact = match phi {
                                Deformation::Undeformed => exact_f2_undeformed(k, n, w, d, g)?,
                                _ => exact_f2_deformed(k, n, w, d, g, &phi)?,
                            };
                            worst = worst.max(max_scaled_diff(&block_eigenvalues(&p, n)?, &exact.expanded()));
                        }
                    }
                }
                Ok(worst)
            })(),
            1e-9,
        );
    }
    s.holds(
        "f2_degeneracies",
        (|| {
            for k in 1..=4usize {
                let p = ModelParams::new(2, k).with_couplings(0.9, 2.3, 0.7);
                let n = k as u32 + 1;
                let mut counts: Vec<usize> =
                    eigendecompose(&build_block(&p, n)?.matrix, false)?.clusters().into_iter().map(|c| c.1).collect();
                let mut expected: Vec<usize> = (0..k as u64)
                    .flat_map(|l| {
                        let c = binomial(k as u64 - 1, l) as usize;
                        [c, c]
                    })
                    .collect();
                counts.sort_unstable();
                expected.sort_unstable();
                if counts != expected {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
    );
    s.within(
        "f3_k1_cubic_vs_numeric",
        (|| {
            let mut worst: f64 = 0.0;
            for n in 3..=8 {
                for &w in &COUPLINGS {
                    for &d in &COUPLINGS {
                        for &g in &COUPLINGS {
                            let p = ModelParams::new(3, 1).with_couplings(w, d, g);
                            let exact = exact_f3_k1(n, w, d, g)?.spectrum.expanded();
                            worst = worst.max(max_scaled_diff(&block_eigenvalues(&p, n)?, &exact));
                        }
                    }
                }
            }
            Ok(worst)
        })(),
        1e-8,
    );
    s.within(
        "trace_identities",
        (|| {
            let mut worst: f64 = 0.0;
            let cases: [(u32, usize, u32); 4] = [(2, 1, 2), (2, 3, 4), (2, 4, 6), (3, 1, 5)];
            for (f, k, n) in cases {
                let p = ModelParams::new(f, k).with_couplings(1.3, 0.8, 0.6);
                let tr = build_block(&p, n)?.matrix.trace().re;
                let sum = if f == 2 {
                    exact_f2_undeformed(k, n, 1.3, 0.8, 0.6)?.weighted_sum()
                } else {
                    exact_f3_k1(n, 1.3, 0.8, 0.6)?.spectrum.weighted_sum()
                };
                worst = worst.max((sum - tr).abs() / (1.0 + tr.abs()));
            }
            Ok(worst)
        })(),
        1e-9,
    );
    s.within(
        "semiclassical_sum_vs_closed_form",
        (|| {
            let mut worst: f64 = 0.0;
            for k in 1..=4usize {
                for &(hbar, w, d, g) in &[(1.0, 1.0, 20.0, 1.0), (0.3, 5.0, 20.0, 1.0), (1.0, 2.0, 3.0, 0.5)] {
                    let n = k as u32 + 2;
                    let sum = semiclassical_z_f2(k, n, hbar, w, d, g, 1.0)?;
                    let closed = semiclassical_z_f2_closed_form(k, n, hbar, w, d, g)?;
                    worst = worst.max((sum - closed).abs() / sum.abs());
                }
            }
            Ok(worst)
        })(),
        1e-10,
    );
    s.within(
        "semiclassical_k1_matches_f2",
        (|| {
            let mut worst: f64 = 0.0;
            for &(hbar, w, d, g, beta) in &[(1.0, 1.0, 20.0, 1.0, 1.0), (0.1, 3.0, 5.0, 2.0, 0.5)] {
                for n in 2..6 {
                    let a = semiclassical_log_z_k1(2, n, hbar, w, d, g, beta)?;
                    let b = semiclassical_log_z_f2(1, n, hbar, w, d, g, beta)?;
                    worst = worst.max((a - b).abs());
                }
            }
            Ok(worst)
        })(),
        1e-10,
    );
    s
}

fn thermo() -> Suite {
    let mut s = Suite::new("thermo");
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut triangle: f64 = 0.0;
    let mut conservation: f64 = 0.0;
    let mut failure: Option<parafermi_jc_core::Error> = None;
    for _ in 0..20 {
        let f = rng.gen_range(2..=4u32);
        let k = rng.gen_range(1..=if f == 2 { 3 } else { 2 });
        let n = rng.gen_range(0..=k as u32 * (f - 1) + 2);
        let phi = if rng.gen_bool(0.5) {
            Deformation::Undeformed
        } else {
            Deformation::QNumberExp { hbar: rng.gen_range(0.2..1.0) }
        };
        let p = ModelParams::new(f, k)
            .with_couplings(rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0), rng.gen_range(0.1..2.0))
            .with_beta(rng.gen_range(0.3..2.0))
            .with_deformation(phi);
        let outcome = (|| {
            let t = thermo_from_spectrum(&p, n)?;
            let phi_fd = phi_n_via_omega_derivative(&p, n, default_step(p.omega))?;
            let n_fd = n_via_mu_derivative(&p, n, default_step(0.0))?;
            Ok((t, phi_fd, n_fd))
        })();
        match outcome {
            Ok((t, phi_fd, n_fd)) => {
                triangle = triangle.max((phi_fd - t.phi_n_expect).abs()).max((n_fd - t.n_expect).abs());
                conservation = conservation.max((t.n_expect + t.w_expect - n as f64).abs());
            }
            Err(e) => failure = Some(e),
        }
    }
    match failure {
        Some(e) => {
            s.within("consistency_triangle", Err(e.clone()), 1e-6);
            s.within("conservation", Err(e), 1e-8);
        }
        None => {
            s.within("consistency_triangle", Ok(triangle), 1e-6);
            s.within("conservation", Ok(conservation), 1e-8);
        }
    }
    let grid = log_grid(1e-2, 1e5, 1400);
    for (f, k, n, levels) in
        [(4u32, 1usize, 5u32, vec![5, 4, 3, 2]), (3, 3, 8, (2..=8).rev().collect()), (4, 1, 2, vec![2, 1, 0])]
    {
        let p = ModelParams::new(f, k)
            .with_couplings(1.0, 1000.0, 1.0)
            .with_deformation(Deformation::QNumberExp { hbar: 1.0 });
        s.holds(
            format!("staircase F={f} k={k} n={n}"),
            omega_scan(&p, n, &grid)
                .and_then(|scan| detect_plateaus(&scan, PlateauObservable::BosonNumber, 1.0, 0.1))
                .map(|r| r.levels() == levels),
        );
    }
    s.holds("hbar_collapse", hbar_collapse());
    s
}

/// Shrinking `ħ` squeezes the intermediate plateaus together without
/// creating new ones.
fn hbar_collapse() -> Result<bool> {
    let grid = log_grid(1.0, 1e5, 2000);
    let mut previous: Option<(usize, f64)> = None;
    for hbar in [1.0, 0.3, 0.1] {
        let p =
            ModelParams::new(3, 3).with_couplings(1.0, 1000.0, 1.0).with_deformation(Deformation::QNumberExp { hbar });
        let report = detect_plateaus(&omega_scan(&p, 8, &grid)?, PlateauObservable::BosonNumber, 1.0, 0.1)?;
        let count = report.plateaus.len();
        let span = match (report.crossover_points.first(), report.crossover_points.last()) {
            (Some(a), Some(b)) => (b / a).ln(),
            _ => 0.0,
        };
        if let Some((c, w)) = previous {
            if count > c || span >= w {
                return Ok(false);
            }
        }
        previous = Some((count, span));
    }
    Ok(true)
}
