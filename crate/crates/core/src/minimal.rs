//! Minimal-model data and the SLE parameterization of (c, delta).

use num_integer::Integer;
use num_traits::Signed;
use thiserror::Error;

use crate::rational::{rat_int, Rational};

/// Domain errors of the exact algebra engine.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("minimal model labels (p, p') = ({p}, {p_prime}) need p > p' >= 2 and gcd(p, p') = 1")]
    InvalidModel { p: i64, p_prime: i64 },
    #[error("weight labels (r, s) = ({r}, {s}) outside 1 <= r < {p_prime}, 1 <= s < {p}")]
    WeightOutOfRange { p: i64, p_prime: i64, r: i64, s: i64 },
    #[error("kappa must be positive, got {0}")]
    NonPositiveKappa(String),
    #[error("no singular vectors at or below level {level} for the given module")]
    EmptySubmodule { level: u32 },
    #[error("operation needs numeric (rational) module parameters")]
    SymbolicParams,
}

fn check_model(p: i64, p_prime: i64) -> Result<(), AlgebraError> {
    if p > p_prime && p_prime >= 2 && p.gcd(&p_prime) == 1 {
        Ok(())
    } else {
        Err(AlgebraError::InvalidModel { p, p_prime })
    }
}

/// Central charge `1 - 6 (p - p')^2 / (p p')` of the minimal model
/// labeled by coprime `p > p' >= 2`.
pub fn minimal_model_c(p: i64, p_prime: i64) -> Result<Rational, AlgebraError> {
    check_model(p, p_prime)?;
    let diff = rat_int(p - p_prime);
    Ok(rat_int(1) - rat_int(6) * &diff * &diff / (rat_int(p) * rat_int(p_prime)))
}

/// Conformal weight `((r p - s p')^2 - (p - p')^2) / (4 p p')` of the
/// `(r, s)` primary, `1 <= r < p'`, `1 <= s < p`.
pub fn minimal_model_weight(p: i64, p_prime: i64, r: i64, s: i64) -> Result<Rational, AlgebraError> {
    check_model(p, p_prime)?;
    if !(1..p_prime).contains(&r) || !(1..p).contains(&s) {
        return Err(AlgebraError::WeightOutOfRange { p, p_prime, r, s });
    }
    let a = rat_int(r * p - s * p_prime);
    let b = rat_int(p - p_prime);
    Ok((&a * &a - &b * &b) / (rat_int(4) * rat_int(p) * rat_int(p_prime)))
}

/// `(c, delta)` carried by diffusivity `kappa > 0`:
/// `c = 1 - 3 (4 - kappa)^2 / (2 kappa)`, `delta = (6 - kappa) / (2 kappa)`.
pub fn kappa_parameterization(kappa: &Rational) -> Result<(Rational, Rational), AlgebraError> {
    if !kappa.is_positive() {
        return Err(AlgebraError::NonPositiveKappa(kappa.to_string()));
    }
    let four_minus = rat_int(4) - kappa;
    let c = rat_int(1) - rat_int(3) * &four_minus * &four_minus / (rat_int(2) * kappa);
    let delta = (rat_int(6) - kappa) / (rat_int(2) * kappa);
    Ok((c, delta))
}
