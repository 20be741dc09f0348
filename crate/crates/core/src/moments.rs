//! Exact moments of the fixed-vector count, their limiting values, Galois
//! numbers, and the scanner locating the rank from which each moment
//! equals its limit.
//!
//! `Z` counts fixed vectors: `q^k` for a `k`-dimensional fixed space, and
//! `q^{2k}` for the unitary groups whose natural module sits over the
//! field with `q^2` elements. Moments are computed from the exact
//! distributions, so they form an independent route to the same numbers
//! the identity engine produces.

use num_traits::ToPrimitive;

use crate::dist;
use crate::error::{Error, Result};
use crate::exactnum::{qbinom, Family, GroupSpec, Rational};
use crate::sampler;

/// One exact moment next to its limiting value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentReport {
    pub spec: GroupSpec,
    pub j: u32,
    pub value: Rational,
    pub limit: Rational,
    pub stabilized: bool,
}

/// `E[Z^j]` for a uniform element of the group, computed from the exact
/// distribution.
pub fn moment(spec: &GroupSpec, j: u32) -> Result<Rational> {
    let d = dist::for_spec(spec)?;
    let base = Rational::from(spec.entry_field_order());
    let mut total = Rational::zero();
    for (k, p) in d.probs().iter().enumerate() {
        if !p.is_zero() {
            total = total + p * &base.pow((j as i64) * (k as i64));
        }
    }
    Ok(total)
}

/// The `n -> infinity` limit of `E[Z^j]`.
///
/// GL: the Galois number `G_j` (all subspaces of `F_q^j`);
/// U: `prod (q^{2i-1}+1)`; Sp: `prod (q^{i-1}+1)`;
/// all orthogonal families: `prod (q^i+1)`, `i = 1..j`.
pub fn limit_moment(family: Family, q: u64, j: u32) -> Result<Rational> {
    let qr = Rational::from(q);
    match family {
        Family::Gl => galois_sum(j, &qr),
        Family::Unitary => {
            let mut prod = Rational::one();
            for i in 1..=j {
                prod = prod * (qr.pow(2 * i as i64 - 1) + Rational::one());
            }
            Ok(prod)
        }
        Family::Symplectic => {
            let mut prod = Rational::one();
            for i in 1..=j {
                prod = prod * (qr.pow(i as i64 - 1) + Rational::one());
            }
            Ok(prod)
        }
        Family::OrthogonalOdd | Family::OrthogonalPlus | Family::OrthogonalMinus => {
            let mut prod = Rational::one();
            for i in 1..=j {
                prod = prod * (qr.pow(i as i64) + Rational::one());
            }
            Ok(prod)
        }
    }
}

/// Galois number `G_j` by the two-term recurrence
/// `G_{j+1} = 2 G_j + (q^j - 1) G_{j-1}` with `G_0 = 1`, `G_1 = 2`.
pub fn galois(j: u32, q: &Rational) -> Rational {
    if j == 0 {
        return Rational::one();
    }
    let mut prev = Rational::one();
    let mut current = Rational::from(2);
    for i in 1..j {
        let next = Rational::from(2) * &current + (q.pow(i as i64) - Rational::one()) * &prev;
        prev = current;
        current = next;
    }
    current
}

/// Galois number as the subspace-count sum `sum_J qbinom(j, J; q)`.
pub fn galois_sum(j: u32, q: &Rational) -> Result<Rational> {
    let mut total = Rational::zero();
    for big_j in 0..=j {
        total = total + qbinom(j, big_j, q)?;
    }
    Ok(total)
}

/// The rank from which the theory guarantees `E[Z_n^j]` equals its limit:
/// `j` for GL, Sp, odd orthogonal and plus-type; `2j` for U; `j+1` for
/// minus-type.
pub fn stabilization_threshold(family: Family, j: u32) -> u32 {
    match family {
        Family::Unitary => 2 * j,
        Family::OrthogonalMinus => j + 1,
        _ => j,
    }
}

/// One row of a stabilization scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub n: u32,
    pub moment: Rational,
    pub equals_limit: bool,
}

/// Per-rank comparison of `E[Z_n^j]` against the limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub family: Family,
    pub q: u64,
    pub j: u32,
    pub limit: Rational,
    pub rows: Vec<ScanRow>,
    /// Smallest scanned `n` from which every larger scanned rank agrees
    /// with the limit.
    pub min_stable_n: Option<u32>,
    /// The guaranteed threshold, for the report.
    pub threshold: u32,
}

/// Scans `n = n_min ..= n_max` (with `n_min` = 1 for the even orthogonal
/// families, 0 otherwise) and records where the moment equals its limit.
pub fn stabilization_scan(family: Family, q: u64, j: u32, n_max: u32) -> Result<ScanReport> {
    let threshold = stabilization_threshold(family, j);
    if n_max < threshold {
        return Err(Error::InvalidParameter(format!(
            "n_max = {n_max} does not reach the stabilization threshold {threshold}"
        )));
    }
    let limit = limit_moment(family, q, j)?;
    let n_min = match family {
        Family::OrthogonalPlus | Family::OrthogonalMinus => 1,
        _ => 0,
    };
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let spec = GroupSpec::new(family, n, q)?;
        let value = moment(&spec, j)?;
        rows.push(ScanRow { n, equals_limit: value == limit, moment: value });
    }
    // The trailing run of rows agreeing with the limit.
    let min_stable_n = rows.iter().rev().take_while(|row| row.equals_limit).last().map(|row| row.n);
    Ok(ScanReport { family, q, j, limit, rows, min_stable_n, threshold })
}

/// Moment for one rank packaged with its limit.
pub fn moment_report(spec: &GroupSpec, j: u32) -> Result<MomentReport> {
    let value = moment(spec, j)?;
    let limit = limit_moment(spec.family(), spec.q(), j)?;
    Ok(MomentReport { spec: *spec, j, stabilized: value == limit, value, limit })
}

/// Independent oracle: the literal average of `Z^j` over the fully
/// enumerated group, with `Z = |entry field|^(fixed-space dimension)`.
/// Only available below the enumeration cap.
pub fn oracle_moment_enumerate(spec: &GroupSpec, j: u32) -> Result<Rational> {
    if spec.space_dim() == 0 {
        // The trivial group fixes the zero space; Z = 1.
        return Ok(Rational::one());
    }
    let elements = sampler::enumerate_group(spec)?;
    let base = Rational::from(spec.entry_field_order());
    let mut total = Rational::zero();
    for g in &elements {
        let k = g.fixed_space_dim()?;
        total = total + base.pow((j as i64) * (k as i64));
    }
    let order = Rational::from(elements.len());
    debug_assert_eq!(
        order.numer().to_u64(),
        crate::exactnum::group_order(spec).to_u64(),
        "enumeration disagrees with the order formula for {spec}"
    );
    Ok(total / order)
}
