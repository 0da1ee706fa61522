//! Closed-form densities and counts, evaluated exactly where rational and
//! to `1e-12` where irrational.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ratio::{binomial, render, to_f64, Rational};
use crate::word::Mode;

/// Tolerance for every real-valued constant.
pub const REAL_TOLERANCE: f64 = 1e-12;

/// `g(n) = (n³ - n)/24`, which is not an integer for even `n`.
pub fn g(n: u64) -> Rational {
    g_rational(Rational::from_integer(n as i128))
}

/// `g` at a rational argument.
pub fn g_rational(x: Rational) -> Rational {
    (x * x * x - x) / Rational::from_integer(24)
}

/// Exact number of unrestricted `121` copies in the alternating word of
/// length `n`.
pub fn alternating_count_exact(n: u64) -> u64 {
    if n % 2 == 1 {
        (n * n * n - n) / 24
    } else {
        let m = n / 2;
        (m * m * m - m) / 3
    }
}

/// `(p + q√3)/r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Sqrt3Expr {
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

impl Sqrt3Expr {
    pub const fn new(p: i64, q: i64, r: i64) -> Self {
        Sqrt3Expr { p, q, r }
    }

    pub fn value(&self) -> f64 {
        (self.p as f64 + self.q as f64 * 3f64.sqrt()) / self.r as f64
    }
}

impl fmt::Display for Sqrt3Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let surd = match self.q {
            0 => String::new(),
            1 => "√3".to_string(),
            -1 => "-√3".to_string(),
            q => format!("{q}√3"),
        };
        let body = match (surd.is_empty(), self.p) {
            (true, p) => p.to_string(),
            (false, 0) => surd,
            (false, p) if p < 0 => format!("{surd}{p}"),
            (false, p) => format!("{surd}+{p}"),
        };
        if self.r == 1 {
            f.write_str(&body)
        } else if surd_is_compound(self) {
            write!(f, "({body})/{}", self.r)
        } else {
            write!(f, "{body}/{}", self.r)
        }
    }
}

fn surd_is_compound(e: &Sqrt3Expr) -> bool {
    e.q != 0 && e.p != 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantValue {
    Exact(Rational),
    Surd(Sqrt3Expr),
}

impl ConstantValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            ConstantValue::Exact(r) => to_f64(r),
            ConstantValue::Surd(s) => s.value(),
        }
    }

    pub fn as_exact(&self) -> Option<Rational> {
        match self {
            ConstantValue::Exact(r) => Some(*r),
            ConstantValue::Surd(_) => None,
        }
    }

    /// Tolerance the value is stated to.
    pub fn tolerance(&self) -> f64 {
        match self {
            ConstantValue::Exact(_) => 0.0,
            ConstantValue::Surd(_) => REAL_TOLERANCE,
        }
    }
}

impl fmt::Display for ConstantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantValue::Exact(r) => f.write_str(&render(r)),
            ConstantValue::Surd(s) => s.fmt(f),
        }
    }
}

impl Serialize for ConstantValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A density stated in closed form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityConstant {
    pub label: String,
    pub value: ConstantValue,
    pub tolerance: f64,
    pub provenance: &'static str,
}

impl DensityConstant {
    fn new(label: &str, value: ConstantValue, provenance: &'static str) -> Self {
        DensityConstant {
            label: label.to_string(),
            tolerance: value.tolerance(),
            value,
            provenance,
        }
    }
}

pub const TWO_ROOT3_MINUS_3: Sqrt3Expr = Sqrt3Expr::new(-3, 2, 1);
pub const HALF_TWO_ROOT3_MINUS_3: Sqrt3Expr = Sqrt3Expr::new(-3, 2, 2);

/// Packing densities of the patterns of length three.
pub fn pi3_density_table(mode: Mode) -> Vec<DensityConstant> {
    let one = ConstantValue::Exact(Rational::one());
    match mode {
        Mode::Restricted => vec![
            DensityConstant::new("111", one, "restricted length-3 table"),
            DensityConstant::new("112", ConstantValue::Surd(TWO_ROOT3_MINUS_3), "restricted length-3 table"),
            DensityConstant::new("121", ConstantValue::Surd(HALF_TWO_ROOT3_MINUS_3), "restricted length-3 table"),
            DensityConstant::new("123", one, "restricted length-3 table"),
        ],
        Mode::Unrestricted => vec![
            DensityConstant::new("111", one, "unrestricted length-3 table"),
            DensityConstant::new("112", ConstantValue::Surd(TWO_ROOT3_MINUS_3), "unrestricted length-3 table"),
            DensityConstant::new(
                "121",
                ConstantValue::Exact(Rational::new(1, 4)),
                "unrestricted length-3 table",
            ),
            DensityConstant::new("123", one, "unrestricted length-3 table"),
        ],
    }
}

/// Densities of the length-four layered patterns.
pub fn other_constants() -> Vec<DensityConstant> {
    let three_eighths = ConstantValue::Exact(Rational::new(3, 8));
    vec![
        DensityConstant::new("1122", three_eighths, "two-layer formula"),
        DensityConstant::new("1123", three_eighths, "layered length-4 densities"),
        DensityConstant::new("1233", three_eighths, "layered length-4 densities"),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairDensity {
    #[serde(serialize_with = "crate::count::serialize_ratio")]
    pub value: Rational,
    /// Both layers have at least two elements.
    pub in_range: bool,
}

/// `C(a+b, a) aᵃ bᵇ / (a+b)^(a+b)`, the density of the two-layer pattern
/// `1ᵃ2ᵇ`.
pub fn layered_pair_density(a: u32, b: u32) -> Result<PairDensity> {
    let overflow = || Error::Overflow("layered pair density");
    let pow = |base: u32, e: u32| -> Result<i128> { (base as i128).checked_pow(e).ok_or_else(overflow) };
    let s = a.checked_add(b).ok_or_else(overflow)?;
    if s == 0 {
        return Err(Error::InvalidArgument("layered pair density needs a + b >= 1".into()));
    }
    let num = (binomial(s as u64, a as u64)? as i128)
        .checked_mul(pow(a, a)?)
        .and_then(|x| x.checked_mul(pow(b, b).ok()?))
        .ok_or_else(overflow)?;
    Ok(PairDensity {
        value: Rational::new(num, pow(s, s)?),
        in_range: a >= 2 && b >= 2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaRoot {
    pub k: u32,
    pub alpha: f64,
    pub residual: f64,
}

fn alpha_residual(k: u32, alpha: f64) -> f64 {
    (1.0 - k as f64 * alpha).powi(k as i32 + 1) - (1.0 - (k as f64 + 1.0) * alpha)
}

/// Nontrivial root in `(0,1)` of `(1 - kα)^(k+1) = 1 - (k+1)α`.
///
/// Scans `1e-6, 1e-3, 2e-3, ...` for the first sign change and bisects that
/// bracket 100 times.
pub fn solve_alpha(k: u32, tol: f64) -> Result<AlphaRoot> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
    }
    let f = |x: f64| alpha_residual(k, x);
    let grid = std::iter::once(1e-6).chain((1..1000).map(|i| i as f64 * 1e-3));
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for x in grid {
        let fx = f(x);
        if fx == 0.0 {
            bracket = Some((x, x));
            break;
        }
        if let Some((px, pf)) = prev {
            if (pf < 0.0) != (fx < 0.0) {
                bracket = Some((px, x));
                break;
            }
        }
        prev = Some((x, fx));
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoBracket { k })?;
    let lo_negative = f(lo) < 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);
    let residual = f(alpha).abs();
    if residual > tol {
        return Err(Error::Precondition(format!(
            "alpha for k={k} has residual {residual:e} above tolerance {tol:e}"
        )));
    }
    Ok(AlphaRoot { k, alpha, residual })
}

/// `k(1-α)α^(k-1)` with `α` from [`solve_alpha`].
pub fn ones2_density(k: u32) -> Result<f64> {
    let root = solve_alpha(k, REAL_TOLERANCE)?;
    Ok(k as f64 * (1.0 - root.alpha) * root.alpha.powi(k as i32 - 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KBlockBound {
    pub n: u64,
    pub k: u64,
    /// `C(k,2)·g(2n/k)`.
    #[serde(serialize_with = "crate::count::serialize_ratio")]
    pub direct: Rational,
    /// `n³/(24k) - n³/(24k²) - n(k-1)/24`.
    #[serde(serialize_with = "crate::count::serialize_ratio")]
    pub printed_expansion: Rational,
    /// `n³/27 - n/12`, the form stated for `k = 3`.
    #[serde(serialize_with = "serialize_opt_ratio")]
    pub k3_display: Option<Rational>,
}

fn serialize_opt_ratio<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(&render(r)),
        None => s.serialize_none(),
    }
}

impl KBlockBound {
    pub fn expansion_matches(&self) -> bool {
        self.direct == self.printed_expansion
    }
}

/// Upper bound on `121` copies in a partition of `[n]` with `k` blocks of
/// equal size, in three algebraically different renderings.
pub fn kblock_bound(n: u64, k: u64) -> Result<KBlockBound> {
    if k < 2 || n < 1 {
        return Err(Error::InvalidArgument(format!("kblock_bound needs k >= 2 and n >= 1, got n={n}, k={k}")));
    }
    let nr = Rational::from_integer(n as i128);
    let kr = Rational::from_integer(k as i128);
    let pairs = Rational::from_integer(binomial(k, 2)? as i128);
    let direct = pairs * g_rational(Rational::from_integer(2) * nr / kr);
    let n3 = nr * nr * nr;
    let c24 = Rational::from_integer(24);
    let printed_expansion = n3 / (c24 * kr) - n3 / (c24 * kr * kr) - nr * (kr - Rational::one()) / c24;
    let k3_display = (k == 3).then(|| n3 / Rational::from_integer(27) - nr / Rational::from_integer(12));
    Ok(KBlockBound {
        n,
        k,
        direct,
        printed_expansion,
        k3_display,
    })
}

pub fn in_unit_interval(x: &Rational) -> bool {
    *x >= Rational::zero() && *x <= Rational::one()
}
