//! Exact rationals and the small amount of integer arithmetic shared by the
//! counting and closed-form code.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// `C(n, k)` with overflow checking.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc
            .checked_mul(u128::from(n - i))
            .ok_or(Error::Overflow("binomial"))?
            / u128::from(i + 1);
    }
    u64::try_from(acc).map_err(|_| Error::Overflow("binomial"))
}

pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(i128::from(num), i128::from(den))
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn render(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fixed ten-significant-digit decimal rendering.
pub fn decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn render_decimal(r: &Rational) -> String {
    decimal(to_f64(r))
}
