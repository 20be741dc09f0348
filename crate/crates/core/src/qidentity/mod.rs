//! The q-series identity engine.
//!
//! Everything here revolves around the master double sum
//!
//! ```text
//! D_n(P,X,Y) = sum_{k=0}^n (-X)^k / (P^C(k,2) (P;P)_k)
//!              * sum_{i=0}^{n-k} P^{-ik} Y^i / (P;P)_i
//! ```
//!
//! whose specializations produce every distribution and moment in this
//! crate. The module evaluates the double sum and its single-sum closed
//! form, the q-binomial theorem, three alternating-sum evaluations, and a
//! generating function for the outer terms of `D_n` — all in exact rational
//! arithmetic. Statements that are analytic in the literature are checked
//! here as formal-power-series identities, coefficient by coefficient,
//! which is exact at every truncation degree.

mod series;

pub use series::TruncatedSeries;

use crate::error::{Error, Result};
use crate::exactnum::{binom2, qbinom, qpoch, Rational};

/// Parameters of the double sum `D_n(P,X,Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleSumParams {
    pub n: u32,
    pub p: Rational,
    pub x: Rational,
    pub y: Rational,
}

impl DoubleSumParams {
    pub fn new(n: u32, p: Rational, x: Rational, y: Rational) -> Self {
        DoubleSumParams { n, p, x, y }
    }
}

/// Result of evaluating both sides of a scalar identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: Rational,
    pub rhs: Rational,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Result of evaluating both sides of a formal-power-series identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCheck {
    pub lhs: TruncatedSeries,
    pub rhs: TruncatedSeries,
}

impl SeriesCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// A base is admissible when `(P;P)_i` never vanishes and negative powers
/// of `P` exist, i.e. `P` is not 0, 1, or -1.
fn validate_base(p: &Rational, context: &str) -> Result<()> {
    if p.is_zero() || p.abs().is_one() {
        return Err(Error::VanishingDenominator(format!(
            "{context}: base P = {p} makes (P;P)_i or a P-power degenerate"
        )));
    }
    Ok(())
}

/// `(P;P)_0 .. (P;P)_n` in one pass.
fn poch_table(p: &Rational, n: u32) -> Vec<Rational> {
    let mut table = Vec::with_capacity(n as usize + 1);
    table.push(Rational::one());
    let mut power = p.clone();
    for _ in 1..=n {
        let prev = table.last().unwrap().clone();
        table.push(prev * (Rational::one() - &power));
        power = power * p;
    }
    table
}

/// One outer term of the double sum:
/// `D_{nk} = (-X)^k / (P^C(k,2) (P;P)_k) * sum_{i=0}^{n-k} P^{-ik} Y^i / (P;P)_i`.
pub fn double_sum_term(n: u32, k: u32, p: &Rational, x: &Rational, y: &Rational) -> Result<Rational> {
    if k > n {
        return Ok(Rational::zero());
    }
    if n >= 1 {
        validate_base(p, "double sum")?;
    }
    let poch = poch_table(p, n);
    let coeff = (-x).pow(k as i64) / (p.pow(binom2(k as u64)) * &poch[k as usize]);
    let mut inner = Rational::zero();
    for i in 0..=(n - k) {
        inner = inner + p.pow(-((i * k) as i64)) * y.pow(i as i64) / &poch[i as usize];
    }
    Ok(coeff * inner)
}

/// The double sum `D_n(P,X,Y)`, evaluated term by term.
pub fn double_sum(params: &DoubleSumParams) -> Result<Rational> {
    let DoubleSumParams { n, p, x, y } = params;
    if *n == 0 {
        return Ok(Rational::one());
    }
    validate_base(p, "double sum")?;
    let poch = poch_table(p, *n);
    let mut total = Rational::zero();
    for k in 0..=*n {
        let coeff = (-x).pow(k as i64) / (p.pow(binom2(k as u64)) * &poch[k as usize]);
        let mut inner = Rational::zero();
        for i in 0..=(*n - k) {
            inner = inner + p.pow(-((i * k) as i64)) * y.pow(i as i64) / &poch[i as usize];
        }
        total = total + coeff * inner;
    }
    Ok(total)
}

/// Single-sum closed form of the same quantity:
/// `D_n(P,X,Y) = sum_{J=0}^n (X P^{1-J} / Y; P)_J / (P;P)_J * Y^J`.
pub fn single_sum(params: &DoubleSumParams) -> Result<Rational> {
    let DoubleSumParams { n, p, x, y } = params;
    if y.is_zero() {
        return Err(Error::InvalidParameter("single-sum form requires Y != 0".into()));
    }
    if *n == 0 {
        return Ok(Rational::one());
    }
    validate_base(p, "single sum")?;
    let poch = poch_table(p, *n);
    let mut total = Rational::zero();
    for j in 0..=*n {
        let z = x * &p.pow(1 - j as i64) / y;
        let term = qpoch(&z, p, j) / &poch[j as usize] * y.pow(j as i64);
        total = total + term;
    }
    Ok(total)
}

/// Closed form of `D_n(P, Y P^j, Y)` for a non-negative integer `j`:
/// `sum_{J=0}^n qbinom(j, J; P) Y^J`.
pub fn double_sum_qbinom_form(n: u32, j: u32, p: &Rational, y: &Rational) -> Result<Rational> {
    let mut total = Rational::zero();
    for big_j in 0..=n {
        total = total + qbinom(j, big_j, p)? * y.pow(big_j as i64);
    }
    Ok(total)
}

/// Closed form of `D_n(P, Y P^{-1}, Y)`:
/// `sum_{J=0}^n P^{-C(J+1,2)} (-Y)^J`.
pub fn double_sum_alternating_form(n: u32, p: &Rational, y: &Rational) -> Result<Rational> {
    validate_base(p, "alternating closed form")?;
    let mut total = Rational::zero();
    for j in 0..=n {
        total = total + p.pow(-binom2(j as u64 + 1)) * (-y).pow(j as i64);
    }
    Ok(total)
}

/// q-binomial theorem:
/// `sum_{k=0}^J qbinom(J,k;P) P^C(k,2) (-1)^k Z^k = (Z;P)_J`.
pub fn qbinom_theorem_check(j: u32, p: &Rational, z: &Rational) -> Result<IdentityCheck> {
    if j >= 1 {
        validate_base(p, "q-binomial theorem")?;
    }
    let mut lhs = Rational::zero();
    for k in 0..=j {
        let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
        lhs = lhs + qbinom(j, k, p)? * p.pow(binom2(k as u64)) * sign * z.pow(k as i64);
    }
    Ok(IdentityCheck { lhs, rhs: qpoch(z, p, j) })
}

/// Closed value of the first alternating evaluation: `(q;q^2)_j`.
pub fn andrews_1(j: u32, q: &Rational) -> Rational {
    qpoch(q, &(q * q), j)
}

/// Checks `sum_{J=0}^{2j} qbinom(2j,J;q) (-1)^J = (q;q^2)_j`.
pub fn andrews_check_1(j: u32, q: &Rational) -> Result<IdentityCheck> {
    if j >= 1 {
        validate_base(q, "alternating q-binomial sum")?;
    }
    let mut lhs = Rational::zero();
    for big_j in 0..=2 * j {
        let sign = if big_j % 2 == 0 { Rational::one() } else { -Rational::one() };
        lhs = lhs + sign * qbinom(2 * j, big_j, q)?;
    }
    Ok(IdentityCheck { lhs, rhs: andrews_1(j, q) })
}

/// Direction of the half-power evaluations: `+` uses `q^{J/2}`, `-` uses
/// `q^{-J/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPowerDirection {
    Plus,
    Minus,
}

/// Checks the two half-power evaluations with `q = t^2`, so that `q^{J/2}`
/// is realized exactly as `t^J`:
///
/// - `+`: `sum_J qbinom(n,J;t^2) t^J  = (-t;t)_n`
/// - `-`: `sum_J qbinom(n,J;t^2) t^-J = (-t;t)_n / t^n`
pub fn andrews_23(n: u32, t: &Rational, direction: HalfPowerDirection) -> Result<IdentityCheck> {
    if n >= 1 {
        validate_base(t, "half-power evaluation")?;
    }
    let q = t * t;
    let mut lhs = Rational::zero();
    for j in 0..=n {
        let power = match direction {
            HalfPowerDirection::Plus => t.pow(j as i64),
            HalfPowerDirection::Minus => t.pow(-(j as i64)),
        };
        lhs = lhs + qbinom(n, j, &q)? * power;
    }
    let base = qpoch(&(-t), t, n);
    let rhs = match direction {
        HalfPowerDirection::Plus => base,
        HalfPowerDirection::Minus => base / t.pow(n as i64),
    };
    Ok(IdentityCheck { lhs, rhs })
}

/// `F_k(a,X,Y;P) = (1-a) sum_{n>=k} D_{nk} a^n` summed directly, truncated
/// at degree `n_max`.
pub fn genfun_lhs(k: u32, x: &Rational, y: &Rational, p: &Rational, n_max: usize) -> Result<TruncatedSeries> {
    validate_base(p, "generating function")?;
    let mut raw = TruncatedSeries::zero(n_max);
    if (k as usize) <= n_max {
        let poch = poch_table(p, n_max as u32);
        let coeff = (-x).pow(k as i64) / (p.pow(binom2(k as u64)) * &poch[k as usize]);
        // D_{nk} shares its inner sum across n: extend it one term per degree.
        let mut inner = Rational::zero();
        for n in (k as usize)..=n_max {
            let i = (n - k as usize) as u32;
            inner = inner + p.pow(-((i * k) as i64)) * y.pow(i as i64) / &poch[i as usize];
            raw.set_coeff(n, &coeff * &inner);
        }
    }
    Ok(raw.mul_linear(&-Rational::one()))
}

/// The closed form of `F_k`:
///
/// ```text
/// (aYP^-1; P^-1)_inf * (aX)^k P^{-k^2} / ((P^-1;P^-1)_k (aYP^-1;P^-1)_k)
/// ```
///
/// expanded as a formal series in `a`. The infinite product contributes
/// `P^{-C(m,2)} (-YP^-1)^m / (P^-1;P^-1)_m` at degree `m`; the finite
/// product in the denominator is a polynomial inverted as a power series.
pub fn genfun_rhs(k: u32, x: &Rational, y: &Rational, p: &Rational, n_max: usize) -> Result<TruncatedSeries> {
    validate_base(p, "generating function closed form")?;
    let p_inv = p.recip()?;
    let poch_inv = poch_table(&p_inv, n_max.max(k as usize) as u32);

    // (aYP^-1; P^-1)_inf
    let mut infinite = TruncatedSeries::zero(n_max);
    for m in 0..=n_max {
        let c = p.pow(-binom2(m as u64))
            * (-(y * &p_inv)).pow(m as i64)
            / &poch_inv[m];
        infinite.set_coeff(m, c);
    }

    // (aYP^-1; P^-1)_k as a polynomial in a, then inverted.
    let mut denom = TruncatedSeries::one(n_max);
    for i in 0..k {
        denom = denom.mul_linear(&-(y * p.pow(-1 - i as i64)));
    }
    let series = &infinite * &denom.invert()?;

    let scalar = x.pow(k as i64) * p.pow(-((k as i64) * (k as i64))) / &poch_inv[k as usize];
    Ok(series.scale(&scalar).shift_up(k as usize))
}

/// Checks the summed normalization `sum_{k>=0} F_k(a,X,X;P) = 1` through
/// degree `n_max`. Since `F_k` starts at `a^k`, summing `k <= n_max` is
/// exact at that truncation.
pub fn qgauss_normalization(x: &Rational, p: &Rational, n_max: usize) -> Result<SeriesCheck> {
    let mut total = TruncatedSeries::zero(n_max);
    for k in 0..=n_max {
        total = &total + &genfun_rhs(k as u32, x, x, p, n_max)?;
    }
    Ok(SeriesCheck { lhs: total, rhs: TruncatedSeries::one(n_max) })
}
