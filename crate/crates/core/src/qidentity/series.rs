//! Formal power series in one variable, truncated at a fixed degree, with
//! exact rational coefficients.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Coefficients of `a^0 .. a^N`; arithmetic discards terms above `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// The zero series truncated at degree `n`.
    pub fn zero(n: usize) -> Self {
        TruncatedSeries { coeffs: vec![Rational::zero(); n + 1] }
    }

    /// The constant series 1 truncated at degree `n`.
    pub fn one(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least the constant term");
        TruncatedSeries { coeffs }
    }

    /// Truncation degree `N`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &Rational {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, m: usize, value: Rational) {
        self.coeffs[m] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Multiplication by `a^k`; the top `k` coefficients fall off the end.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.degree();
        let mut out = Self::zero(n);
        for m in k..=n {
            out.coeffs[m] = self.coeffs[m - k].clone();
        }
        out
    }

    /// Multiplication by the linear factor `1 + c a`.
    pub fn mul_linear(&self, c: &Rational) -> Self {
        let n = self.degree();
        let mut out = self.clone();
        for m in (1..=n).rev() {
            let add = &self.coeffs[m - 1] * c;
            out.coeffs[m] = &out.coeffs[m] + &add;
        }
        out
    }

    /// Multiplicative inverse as a power series; errors when the constant
    /// term is zero.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::VanishingDenominator(
                "series with zero constant term has no inverse".into(),
            ));
        }
        let n = self.degree();
        let mut inv = Self::zero(n);
        inv.coeffs[0] = c0.recip()?;
        for m in 1..=n {
            let mut acc = Rational::zero();
            for i in 1..=m {
                acc = acc + &self.coeffs[i] * &inv.coeffs[m - i];
            }
            inv.coeffs[m] = -(acc / c0);
        }
        Ok(inv)
    }
}

impl Add<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.degree(), rhs.degree(), "series truncation degrees differ");
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.degree(), rhs.degree(), "series truncation degrees differ");
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.degree(), rhs.degree(), "series truncation degrees differ");
        let n = self.degree();
        let mut out = TruncatedSeries::zero(n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                let add = &self.coeffs[i] * &rhs.coeffs[j];
                out.coeffs[i + j] = &out.coeffs[i + j] + &add;
            }
        }
        out
    }
}
