//! Occupation-number basis of `k` Fock parafermion modes and the dimensions
//! of the fixed-excitation blocks.
//!
//! Mode indices are zero-based throughout the crate: mode `m` of a
//! configuration is `occupations()[m]`.
//!
//! Basis order is lexicographic over `(i_1, …, i_k)` with `i_1` the most
//! significant digit. Every matrix layout and golden output depends on it.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Occupation numbers `(i_1, …, i_k)` with `0 ≤ i_m ≤ F - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationConfig {
    occupations: Vec<u32>,
}

impl OccupationConfig {
    pub fn new(occupations: Vec<u32>, order: u32) -> Result<Self> {
        validate_order(order)?;
        if occupations.is_empty() {
            return Err(Error::param("k", "configuration needs at least one mode"));
        }
        if let Some(&bad) = occupations.iter().find(|&&i| i >= order) {
            return Err(Error::param("occupations", alloc::format!("occupation {bad} exceeds F - 1 = {}", order - 1)));
        }
        Ok(OccupationConfig { occupations })
    }

    pub fn vacuum(modes: usize) -> Self {
        OccupationConfig { occupations: vec![0; modes] }
    }

    pub fn occupations(&self) -> &[u32] {
        &self.occupations
    }

    pub fn modes(&self) -> usize {
        self.occupations.len()
    }

    /// Total parafermion number `W(P) = Σ i_m`.
    pub fn weight(&self) -> u32 {
        self.occupations.iter().sum()
    }

    /// Sum of occupations of the modes strictly after `mode`; the exponent of
    /// the q-phase picked up when an operator on `mode` is moved into place.
    pub fn tail_weight(&self, mode: usize) -> u32 {
        self.occupations[mode + 1..].iter().sum()
    }

    /// `P ∪ {mode}`: the configuration with `mode` raised by one, if that
    /// stays below `order`.
    pub fn raised(&self, mode: usize, order: u32) -> Option<Self> {
        let mut occ = self.occupations.clone();
        let slot = occ.get_mut(mode)?;
        if *slot + 1 >= order {
            return None;
        }
        *slot += 1;
        Some(OccupationConfig { occupations: occ })
    }

    pub fn lowered(&self, mode: usize) -> Option<Self> {
        let mut occ = self.occupations.clone();
        let slot = occ.get_mut(mode)?;
        *slot = slot.checked_sub(1)?;
        Some(OccupationConfig { occupations: occ })
    }

    /// Position of this configuration in the full lexicographic `F^k` basis.
    pub fn full_rank(&self, order: u32) -> usize {
        self.occupations.iter().fold(0usize, |acc, &i| acc * order as usize + i as usize)
    }
}

impl fmt::Display for OccupationConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (idx, i) in self.occupations.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn validate_order(order: u32) -> Result<()> {
    if order < 2 {
        return Err(Error::param("F", alloc::format!("nilpotency order must be >= 2, got {order}")));
    }
    Ok(())
}

pub(crate) fn validate_modes(modes: usize) -> Result<()> {
    if modes == 0 {
        return Err(Error::param("k", "need at least one parafermion mode"));
    }
    Ok(())
}

fn full_space_size(order: u32, modes: usize) -> Result<usize> {
    u32::try_from(modes)
        .ok()
        .and_then(|k| (order as usize).checked_pow(k))
        .ok_or_else(|| Error::param("k", "F^k overflows usize"))
}

/// Every configuration of `modes` parafermions, lexicographic order.
pub fn enumerate_full_basis(order: u32, modes: usize) -> Result<Vec<OccupationConfig>> {
    validate_order(order)?;
    validate_modes(modes)?;
    let total = full_space_size(order, modes)?;
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0u32; modes];
    for _ in 0..total {
        out.push(OccupationConfig { occupations: digits.clone() });
        // odometer increment, last mode fastest
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < order {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

/// Configurations with weight `≤ n`, i.e. the basis of the `N_tot = n` block.
pub fn enumerate_block_basis(order: u32, modes: usize, n: u32) -> Result<Vec<OccupationConfig>> {
    Ok(enumerate_full_basis(order, modes)?.into_iter().filter(|p| p.weight() <= n).collect())
}

/// `d_n(k)`, the coefficient of `x^n` in `(1 - x^F)^k / (1 - x)^{k+1}`.
///
/// Computed by expanding `(1 + x + … + x^{F-1})^k` with integer convolutions
/// and taking a prefix sum (the extra `1/(1-x)`).
pub fn block_dimension(order: u32, modes: usize, n: u32) -> Result<u64> {
    validate_order(order)?;
    validate_modes(modes)?;
    let max_weight = modes as u64 * (order as u64 - 1);
    let top = (n as u64).min(max_weight) as usize;

    let mut poly = vec![0u64; top + 1];
    poly[0] = 1;
    for _ in 0..modes {
        let mut next = vec![0u64; top + 1];
        for (deg, &c) in poly.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for s in 0..order as usize {
                if deg + s > top {
                    break;
                }
                next[deg + s] =
                    next[deg + s].checked_add(c).ok_or_else(|| Error::param("k", "block dimension overflows u64"))?;
            }
        }
        poly = next;
    }
    poly.iter()
        .try_fold(0u64, |acc, &c| acc.checked_add(c).ok_or_else(|| Error::param("k", "block dimension overflows u64")))
}

/// Generalized binomial `C(top, m)` for any integer `top`, `m ≥ 0`.
pub fn generalized_binomial(top: i128, m: u32) -> i128 {
    let mut acc: i128 = 1;
    for j in 0..m as i128 {
        // C(top, j+1) = C(top, j) * (top - j) / (j + 1), exact at each step
        acc = acc * (top - j) / (j + 1);
    }
    acc
}

/// Alternating-sum form of `d_n(k)`:
/// `Σ_{s=0}^{min(k, n/F)} (-1)^{n - s(F-1)} C(k, s) C(-k-1, n - sF)`.
///
/// Kept as an independent cross-check of [`block_dimension`].
pub fn block_dimension_alternating(order: u32, modes: usize, n: u32) -> Result<i128> {
    validate_order(order)?;
    validate_modes(modes)?;
    let k = modes as i128;
    let f = order as i128;
    let n = n as i128;
    let s_max = k.min(n / f);
    let mut total: i128 = 0;
    for s in 0..=s_max {
        let sign_exp = n - s * (f - 1);
        let sign = if sign_exp.rem_euclid(2) == 0 { 1 } else { -1 };
        let lower = (n - s * f) as u32;
        total += sign * generalized_binomial(k, s as u32) * generalized_binomial(-k - 1, lower);
    }
    Ok(total)
}

/// Lookup from configuration to its row inside a block basis.
#[derive(Debug, Clone)]
pub(crate) struct BasisIndex {
    order: u32,
    slots: Vec<Option<usize>>,
}

impl BasisIndex {
    pub(crate) fn new(order: u32, modes: usize, basis: &[OccupationConfig]) -> Result<Self> {
        let mut slots = vec![None; full_space_size(order, modes)?];
        for (row, p) in basis.iter().enumerate() {
            slots[p.full_rank(order)] = Some(row);
        }
        Ok(BasisIndex { order, slots })
    }

    pub(crate) fn position(&self, p: &OccupationConfig) -> Option<usize> {
        self.slots.get(p.full_rank(self.order)).copied().flatten()
    }
}
