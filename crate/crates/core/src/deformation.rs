//! Structure functions `Φ` of deformed oscillator algebras, defined by
//! `a†a = Φ(N)`, `aa† = Φ(N + 1)`, `a|n⟩ = √Φ(n)|n-1⟩`.
//!
//! Integer arguments are the contract surface. Evaluation at non-integer
//! `x ≥ 0` is supported but nothing in the model needs it.

use alloc::sync::Arc;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Values with `|Φ(x)|` below this are treated as exact zeros when checking
/// `Φ(0) = 0` and `Φ(F) = 0`, and tiny negative round-off is clamped.
pub const ZERO_TOLERANCE: f64 = 1e-12;

type DeformFn = dyn Fn(f64) -> f64 + Send + Sync;

#[derive(Clone)]
pub struct CustomDeformation {
    name: &'static str,
    func: Arc<DeformFn>,
}

impl fmt::Debug for CustomDeformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDeformation").field("name", &self.name).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum Deformation {
    /// Ordinary boson, `Φ(x) = x`.
    Undeformed,
    /// Dimensionful boson, `Φ(x) = ħx`.
    LinearHbar {
        hbar: f64,
    },
    /// Symmetric q-number `[x]_q = (q^{-x} - q^x) / (q^{-1} - q)`, real `q > 0`.
    QNumberSym {
        q: f64,
    },
    /// `Φ(x) = (e^{ħx} - e^{-ħx}) / (e^ħ - e^{-ħ}) = sinh(ħx) / sinh(ħ)`.
    QNumberExp {
        hbar: f64,
    },
    /// Parafermionic oscillator `Φ(x) = x(F - x)`; realizes spin `(F-1)/2`.
    ParafermionicOsc {
        order: u32,
    },
    Custom(CustomDeformation),
}

impl Deformation {
    /// Wraps an arbitrary structure function. Fails unless `Φ(0) = 0`.
    pub fn custom<F>(name: &'static str, func: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let d = Deformation::Custom(CustomDeformation { name, func: Arc::new(func) });
        d.validate()?;
        Ok(d)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Deformation::Undeformed => "undeformed",
            Deformation::LinearHbar { .. } => "linear",
            Deformation::QNumberSym { .. } => "qsym",
            Deformation::QNumberExp { .. } => "qexp",
            Deformation::ParafermionicOsc { .. } => "pfosc",
            Deformation::Custom(c) => c.name,
        }
    }

    /// Checks the variant parameters and `Φ(0) = 0`.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Deformation::LinearHbar { hbar } | Deformation::QNumberExp { hbar } => {
                if !(hbar.is_finite() && hbar > 0.0) {
                    return Err(Error::param("hbar", alloc::format!("must be finite and > 0, got {hbar}")));
                }
            }
            Deformation::QNumberSym { q } => {
                if !(q.is_finite() && q > 0.0) {
                    return Err(Error::param("q", alloc::format!("must be finite and > 0, got {q}")));
                }
            }
            Deformation::ParafermionicOsc { order } => {
                if order < 2 {
                    return Err(Error::param("F", "parafermionic oscillator needs F >= 2"));
                }
            }
            Deformation::Undeformed | Deformation::Custom(_) => {}
        }
        let at_zero = self.raw(0.0);
        if at_zero.is_nan() || at_zero.abs() > ZERO_TOLERANCE {
            return Err(Error::DeformationContract { x: 0.0, value: at_zero, reason: "vacuum requires Φ(0) = 0" });
        }
        Ok(())
    }

    fn raw(&self, x: f64) -> f64 {
        match *self {
            Deformation::Undeformed => x,
            Deformation::LinearHbar { hbar } => hbar * x,
            Deformation::QNumberSym { q } => {
                if (q - 1.0).abs() < 1e-12 {
                    x
                } else {
                    (q.powf(-x) - q.powf(x)) / (q.recip() - q)
                }
            }
            Deformation::QNumberExp { hbar } => (hbar * x).sinh() / hbar.sinh(),
            Deformation::ParafermionicOsc { order } => x * (order as f64 - x),
            Deformation::Custom(ref c) => (c.func)(x),
        }
    }

    /// `Φ(x)`, which must be non-negative since it sits under square roots
    /// in the ladder amplitudes.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let v = self.raw(x);
        if v.is_nan() || v < -ZERO_TOLERANCE * (1.0 + x.abs()) {
            return Err(Error::DeformationContract { x, value: v, reason: "structure function must be non-negative" });
        }
        Ok(v.max(0.0))
    }

    /// `Φ(n)` at an integer occupation.
    pub fn at(&self, n: u32) -> Result<f64> {
        self.evaluate(n as f64)
    }

    /// `(√Φ(n), √Φ(n+1))`: the amplitudes of `a|n⟩` and `a†|n⟩`.
    pub fn ladder_amplitudes(&self, n: u32) -> Result<(f64, f64)> {
        Ok((self.at(n)?.sqrt(), self.at(n + 1)?.sqrt()))
    }

    /// Fails unless `Φ(order) = 0`, the condition for `a^F = 0`.
    pub fn check_nilpotent(&self, order: u32) -> Result<()> {
        let v = self.raw(order as f64);
        if v.abs() > ZERO_TOLERANCE {
            return Err(Error::DeformationContract {
                x: order as f64,
                value: v,
                reason: "nilpotency of order F requires Φ(F) = 0",
            });
        }
        Ok(())
    }
}
