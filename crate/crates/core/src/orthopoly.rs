//! Discrete orthogonal-polynomial measures matching the limiting
//! fixed-space distributions, and the randomized-rank series identities.
//!
//! Two families of weights appear, both supported on the geometric
//! sequence `p^-k`:
//!
//! - the first kind with masses
//!   `(ap;p)_inf p^{k^2} a^k / ((p;p)_k (ap;p)_k)` and moments
//!   `mu_j = sum_k qbinom(j,k; 1/p) a^k`;
//! - the second kind with masses
//!   `p^C(k,2) a^k / ((-a;p)_inf (p;p)_k)` and moments
//!   `mu_j = (-a/p; 1/p)_j`.
//!
//! Exact statements are checked through mass *ratios*, in which the
//! infinite-product prefactor cancels, plus one interval-certified
//! normalization check; the randomized-rank theorems are checked as
//! formal-power-series identities against the generating function of the
//! double-sum terms.

use crate::dist;
use crate::error::{Error, Result};
use crate::exactnum::{binom2, qbinom, qpoch, Rational};
use crate::interval::{self, IntervalReal};
use crate::qidentity::{genfun_rhs, SeriesCheck, TruncatedSeries};

/// Which discrete weight family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// Masses `(ap;p)_inf p^{k^2} a^k / ((p;p)_k (ap;p)_k)`.
    AlSalamCarlitz,
    /// Masses `p^C(k,2) a^k / ((-a;p)_inf (p;p)_k)`.
    QCharlier,
}

/// Parameters of one weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightParams {
    pub kind: WeightKind,
    pub a: Rational,
    /// The base; negative values arise for the unitary matchings. Numeric
    /// evaluation additionally needs `|p| < 1`.
    pub p: Rational,
}

impl WeightParams {
    pub fn new(kind: WeightKind, a: Rational, p: Rational) -> Self {
        WeightParams { kind, a, p }
    }
}

fn check_poch_nonzero(value: &Rational, what: &str) -> Result<()> {
    if value.is_zero() {
        return Err(Error::VanishingDenominator(format!("{what} vanishes")));
    }
    Ok(())
}

/// `mass(k)/mass(0)` of the first weight:
/// `p^{k^2} a^k / ((p;p)_k (ap;p)_k)`, exactly.
pub fn ac_mass_ratio(k: u32, params: &WeightParams) -> Result<Rational> {
    let WeightParams { a, p, .. } = params;
    let poch_p = qpoch(p, p, k);
    check_poch_nonzero(&poch_p, "(p;p)_k")?;
    let poch_ap = qpoch(&(a * p), p, k);
    check_poch_nonzero(&poch_ap, "(ap;p)_k")?;
    Ok(p.pow((k as i64) * (k as i64)) * a.pow(k as i64) / (poch_p * poch_ap))
}

/// `mass(k)/mass(0)` of the second weight: `p^C(k,2) a^k / (p;p)_k`.
pub fn qchar_mass_ratio(k: u32, params: &WeightParams) -> Result<Rational> {
    let WeightParams { a, p, .. } = params;
    let poch_p = qpoch(p, p, k);
    check_poch_nonzero(&poch_p, "(p;p)_k")?;
    Ok(p.pow(binom2(k as u64)) * a.pow(k as i64) / poch_p)
}

/// `j`-th moment of the first weight: `sum_{k<=j} qbinom(j,k; 1/p) a^k`.
pub fn ac_moment(j: u32, params: &WeightParams) -> Result<Rational> {
    let WeightParams { a, p, .. } = params;
    let base = p.recip()?;
    let mut total = Rational::zero();
    for k in 0..=j {
        total = total + qbinom(j, k, &base)? * a.pow(k as i64);
    }
    Ok(total)
}

/// `j`-th moment of the second weight: `(-a/p; 1/p)_j`.
pub fn qchar_moment(j: u32, params: &WeightParams) -> Result<Rational> {
    let WeightParams { a, p, .. } = params;
    Ok(qpoch(&(-(a / p)), &p.recip()?, j))
}

/// The full mass at `p^-k`, including the infinite-product prefactor,
/// enclosed in an interval of width at most `tolerance`. Requires
/// `|p| < 1`.
pub fn weight_numeric(k: u32, params: &WeightParams, tolerance: &Rational) -> Result<IntervalReal> {
    if tolerance <= &Rational::zero() {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    if params.p.abs() >= Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "numeric weight evaluation needs |p| < 1, got p = {}",
            params.p
        )));
    }
    let ratio = match params.kind {
        WeightKind::AlSalamCarlitz => ac_mass_ratio(k, params)?,
        WeightKind::QCharlier => qchar_mass_ratio(k, params)?,
    };
    let abs_p = params.p.abs();
    let abs_a = params.a.abs();

    let mut trunc = 16u32;
    loop {
        // Partial product and a bound on the sum of the dropped |terms|:
        // first kind: prod_{r=0..} (1 - a p^{r+1}); second: prod (1 + a p^r).
        let (mut partial, mut dropped) = (Rational::one(), Rational::zero());
        match params.kind {
            WeightKind::AlSalamCarlitz => {
                for r in 0..=trunc {
                    partial = partial * (Rational::one() - &params.a * params.p.pow(r as i64 + 1));
                }
                dropped = &abs_a * abs_p.pow(trunc as i64 + 2)
                    / (Rational::one() - &abs_p);
            }
            WeightKind::QCharlier => {
                for r in 0..=trunc {
                    partial = partial * (Rational::one() + &params.a * params.p.pow(r as i64));
                }
                dropped = &abs_a * abs_p.pow(trunc as i64 + 1) / (Rational::one() - &abs_p);
            }
        }
        if dropped >= Rational::one() {
            trunc *= 2;
            continue;
        }
        let product = interval::with_mixed_tail(partial, &dropped);
        let enclosure = match params.kind {
            WeightKind::AlSalamCarlitz => product.scale(&ratio),
            WeightKind::QCharlier => {
                // The prefactor is the reciprocal of the product.
                let inv = IntervalReal::new(product.upper().recip()?, product.lower().recip()?);
                inv.scale(&ratio)
            }
        };
        if enclosure.width() <= *tolerance {
            return Ok(enclosure);
        }
        trunc = trunc.checked_mul(2).filter(|&t| t <= 1 << 14).ok_or_else(|| {
            Error::InvalidParameter(format!("tolerance {tolerance} is unreachably small"))
        })?;
    }
}

/// The randomized-rank statements come in three shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomizedFamily {
    /// `sum_n P(Z_n = q^k) a^n (1-a) = F_k(a,1,1;q)`.
    Gl,
    /// `sum_n P(Z_n = q^{2k}) a^n (1-a) = F_k(a,-1,-1;-q)`.
    Unitary,
    /// `sum_n [P(Z_n = q^{2k}) + P(Z_n = q^{2k+1})] a^n (1-a)
    ///  = F_k(a, 1/q, q; q^2) + (a/q) F_k(a, 1/q^3, 1/q; q^2)`.
    SpCombined,
}

/// Verifies one randomized-rank identity coefficient-wise through degree
/// `n_max`: ranks are weighted `(1-a) a^n`, the left side is assembled
/// from the exact finite-rank distributions, and the right side from the
/// closed-form generating function.
pub fn randomized_n_check(
    family: RandomizedFamily,
    q: u64,
    k: u32,
    n_max: usize,
) -> Result<SeriesCheck> {
    if n_max < k as usize {
        return Err(Error::InvalidParameter(format!(
            "truncation degree {n_max} below the first contributing rank {k}"
        )));
    }
    let qr = Rational::from(q);
    // P(Z_n = target) per rank n.
    let mut raw = TruncatedSeries::zero(n_max);
    for n in 0..=n_max {
        let value = match family {
            RandomizedFamily::Gl => dist::gl(n as u32, q)?.prob(k),
            RandomizedFamily::Unitary => dist::unitary(n as u32, q)?.prob(k),
            RandomizedFamily::SpCombined => {
                let d = dist::symplectic(n as u32, q)?;
                d.prob(2 * k) + d.prob(2 * k + 1)
            }
        };
        raw.set_coeff(n, value);
    }
    let lhs = raw.mul_linear(&-Rational::one());

    let rhs = match family {
        RandomizedFamily::Gl => genfun_rhs(k, &Rational::one(), &Rational::one(), &qr, n_max)?,
        RandomizedFamily::Unitary => {
            genfun_rhs(k, &-Rational::one(), &-Rational::one(), &-qr, n_max)?
        }
        RandomizedFamily::SpCombined => {
            let r = &qr * &qr;
            let even = genfun_rhs(k, &qr.pow(-1), &qr, &r, n_max)?;
            let odd = genfun_rhs(k, &qr.pow(-3), &qr.pow(-1), &r, n_max)?;
            &even + &odd.shift_up(1).scale(&qr.pow(-1))
        }
    };
    Ok(SeriesCheck { lhs, rhs })
}
