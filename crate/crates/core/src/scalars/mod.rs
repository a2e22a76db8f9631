//! Exact scalars: `Z[v, v^-1]`, its fraction field, and quantum integers.

mod laurent;
pub(crate) mod poly;
mod rational;
mod serde_impl;

pub use laurent::LaurentPoly;
pub use rational::RationalFn;

use crate::error::{Error, Result};

/// The quantum integer `[n]` at `v_i = v^eps`:
/// `(v_i^n - v_i^-n) / (v_i - v_i^-1)`.
pub fn quantum_integer(n: i64, eps: i64) -> LaurentPoly {
    assert!(eps >= 1, "symmetrizer must be positive");
    let m = n.abs();
    let sum = LaurentPoly::from_terms((0..m).map(|k| (eps * (m - 1 - 2 * k), 1)));
    if n < 0 {
        -sum
    } else {
        sum
    }
}

/// `[n]! = [n][n-1]...[1]`, with `[0]! = 1`.
pub fn quantum_factorial(n: i64, eps: i64) -> Result<LaurentPoly> {
    if n < 0 {
        return Err(Error::NegativeArgument(n));
    }
    Ok((1..=n).fold(LaurentPoly::one(), |acc, k| &acc * &quantum_integer(k, eps)))
}

/// The Gaussian binomial `[n]! / ([k]! [n-k]!)`; the division is exact.
pub fn quantum_binomial(n: i64, k: i64, eps: i64) -> Result<LaurentPoly> {
    if n < 0 || k < 0 {
        return Err(Error::NegativeArgument(n.min(k)));
    }
    if k > n {
        return Err(Error::BinomialRange { n, k });
    }
    let top = quantum_factorial(n, eps)?;
    let bottom = &quantum_factorial(k, eps)? * &quantum_factorial(n - k, eps)?;
    Ok(top
        .div_exact(&bottom)
        .expect("quantum binomial coefficients are Laurent polynomials"))
}

/// Canonical reduced fraction `num / den`.
pub fn rf_normalize(num: LaurentPoly, den: LaurentPoly) -> Result<RationalFn> {
    RationalFn::new(num, den)
}
