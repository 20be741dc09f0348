//! Small finite fields with table-driven arithmetic.
//!
//! Elements of `F_{p^m}` are encoded as integers below `p^m` whose base-`p`
//! digits are the coefficients of the residue polynomial. Extension degrees
//! up to 3 are supported, which covers every field this crate samples or
//! enumerates over (the unitary groups need one quadratic extension).

use crate::error::{Error, Result};
use crate::exactnum::prime_power;

const MAX_DEGREE: u32 = 3;

/// A concrete finite field with precomputed operation tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u64,
    m: u32,
    q: u64,
    /// Monic modulus coefficients `c_0 .. c_m` (with `c_m = 1`); the vector
    /// `[0, 1]` stands for the prime field itself.
    modulus: Vec<u64>,
    add_t: Vec<u64>,
    mul_t: Vec<u64>,
    inv_t: Vec<u64>,
    neg_t: Vec<u64>,
    frob_t: Vec<u64>,
}

fn digits(x: u64, p: u64, m: u32) -> Vec<u64> {
    let mut out = vec![0; m as usize];
    let mut rest = x;
    for d in out.iter_mut() {
        *d = rest % p;
        rest /= p;
    }
    out
}

fn undigits(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Polynomial product of two residues reduced by the monic `modulus`.
fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * m];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // x^m = -(c_0 + c_1 x + ... + c_{m-1} x^{m-1})
    for deg in (m..2 * m).rev() {
        let lead = prod[deg];
        if lead == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &ci) in modulus.iter().take(m).enumerate() {
            let sub = (lead * ci) % p;
            prod[deg - m + i] = (prod[deg - m + i] + p - sub) % p;
        }
    }
    prod.truncate(m);
    prod
}

fn has_root(coeffs: &[u64], p: u64) -> bool {
    (0..p).any(|x| {
        coeffs.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0
    })
}

/// First monic irreducible of degree `m` over `F_p` in coefficient-code
/// order. For degrees 2 and 3, irreducible is the same as root-free.
/// Yields `t^2+t+1` for F_4, `t^3+t+1` for F_8, and `t^2+1` for F_9.
fn default_modulus(p: u64, m: u32) -> Vec<u64> {
    for code in 0..p.pow(m) {
        let mut coeffs = digits(code, p, m);
        coeffs.push(1);
        if !has_root(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of degree {m} exists over F_{p}")
}

impl Field {
    /// The field with `q` elements, using the default modulus when `q` is
    /// a proper prime power. Degrees above 3 are rejected.
    pub fn new(q: u64) -> Result<Field> {
        let (p, m) =
            prime_power(q).ok_or_else(|| Error::UnsupportedField(format!("{q} is not a prime power")))?;
        if m > MAX_DEGREE {
            return Err(Error::UnsupportedField(format!(
                "F_{q} needs extension degree {m}; only degrees <= {MAX_DEGREE} are built"
            )));
        }
        let modulus = if m == 1 { vec![0, 1] } else { default_modulus(p, m) };
        Ok(Self::build(p, m, modulus))
    }

    /// A field from an explicit monic modulus `c_0 + c_1 t + ... + t^m`;
    /// irreducibility is verified by the brute-force root check.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Field> {
        let m = modulus.len() as u32 - 1;
        if prime_power(p) != Some((p, 1)) {
            return Err(Error::UnsupportedField(format!("{p} is not prime")));
        }
        if !(2..=MAX_DEGREE).contains(&m) {
            return Err(Error::UnsupportedField(format!(
                "modulus degree {m} outside the supported range 2..={MAX_DEGREE}"
            )));
        }
        if modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(Error::UnsupportedField("modulus must be monic with reduced coefficients".into()));
        }
        if has_root(&modulus, p) {
            return Err(Error::UnsupportedField("modulus is reducible over the prime field".into()));
        }
        Ok(Self::build(p, m, modulus))
    }

    fn build(p: u64, m: u32, modulus: Vec<u64>) -> Field {
        let q = p.pow(m);
        let size = (q * q) as usize;
        let mut add_t = vec![0u64; size];
        let mut mul_t = vec![0u64; size];
        for a in 0..q {
            let da = digits(a, p, m);
            for b in 0..q {
                let db = digits(b, p, m);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add_t[(a * q + b) as usize] = undigits(&sum, p);
                mul_t[(a * q + b) as usize] = undigits(&poly_mul_mod(&da, &db, &modulus, p), p);
            }
        }
        let neg_t: Vec<u64> = (0..q)
            .map(|a| {
                let da = digits(a, p, m);
                let neg: Vec<u64> = da.iter().map(|&x| (p - x) % p).collect();
                undigits(&neg, p)
            })
            .collect();
        let mut inv_t = vec![0u64; q as usize];
        for a in 1..q {
            inv_t[a as usize] = (1..q).find(|&b| mul_t[(a * q + b) as usize] == 1).unwrap();
        }
        let frob_t: Vec<u64> = (0..q)
            .map(|a| {
                let mut acc = a;
                for _ in 1..p {
                    acc = mul_t[(acc * q + a) as usize];
                }
                acc
            })
            .collect();
        Field { p, m, q, modulus, add_t, mul_t, inv_t, neg_t, frob_t }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.add_t[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg_t[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.mul_t[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        self.neg_t[a as usize]
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_t[a as usize])
    }

    /// `x^{p^e}`.
    pub fn frobenius(&self, a: u64, e: u32) -> u64 {
        let mut acc = a;
        for _ in 0..e {
            acc = self.frob_t[acc as usize];
        }
        acc
    }

    /// The involution `x -> x^{p^{m/2}}` of a quadratic-style extension;
    /// errors when the degree is odd.
    pub fn conj(&self, a: u64) -> Result<u64> {
        if self.m % 2 != 0 {
            return Err(Error::UnsupportedField(format!(
                "F_{} has no conjugation of order two over its prime field",
                self.q
            )));
        }
        Ok(self.frobenius(a, self.m / 2))
    }

    /// Smallest non-square in encoding order; `None` in characteristic 2
    /// where every element is a square.
    pub fn smallest_nonsquare(&self) -> Option<u64> {
        if self.p == 2 {
            return None;
        }
        let squares: std::collections::HashSet<u64> = (0..self.q).map(|x| self.mul(x, x)).collect();
        (1..self.q).find(|s| !squares.contains(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(Field::new(4).unwrap().modulus(), &[1, 1, 1]); // t^2+t+1
        assert_eq!(Field::new(8).unwrap().modulus(), &[1, 1, 0, 1]); // t^3+t+1
        assert_eq!(Field::new(9).unwrap().modulus(), &[1, 0, 1]); // t^2+1
        assert!(Field::new(16).is_err());
        assert!(Field::new(6).is_err());
    }

    #[test]
    fn f4_forced_products() {
        // With modulus t^2+t+1: t * (t+1) = 1 and t^2 = t+1.
        let f4 = Field::new(4).unwrap();
        let t = 2;
        let t1 = 3;
        assert_eq!(f4.mul(t, t1), 1);
        assert_eq!(f4.frobenius(t, 1), t1);
    }

    #[test]
    fn prime_field_inverse() {
        let f5 = Field::new(5).unwrap();
        assert_eq!(f5.inv(2).unwrap(), 3);
        assert!(f5.inv(0).is_err());
    }

    #[test]
    fn field_axioms_hold_everywhere() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 25, 27] {
            let f = Field::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    // Frobenius is additive and multiplicative.
                    assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
                    assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
                }
            }
        }
    }

    #[test]
    fn conjugation_is_an_involution() {
        for q in [4u64, 9, 25] {
            let f = Field::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.conj(f.conj(a).unwrap()).unwrap(), a);
            }
            // conj fixes exactly the base field, sqrt(q) many elements.
            let fixed = (0..q).filter(|&a| f.conj(a).unwrap() == a).count() as u64;
            assert_eq!(fixed * fixed, q);
        }
        assert!(Field::new(8).unwrap().conj(1).is_err());
    }

    #[test]
    fn nonsquares() {
        assert_eq!(Field::new(3).unwrap().smallest_nonsquare(), Some(2));
        assert_eq!(Field::new(5).unwrap().smallest_nonsquare(), Some(2));
        assert_eq!(Field::new(7).unwrap().smallest_nonsquare(), Some(3));
        assert_eq!(Field::new(4).unwrap().smallest_nonsquare(), None);
        let f9 = Field::new(9).unwrap();
        let s = f9.smallest_nonsquare().unwrap();
        assert!((0..9).all(|x| f9.mul(x, x) != s));
    }

    #[test]
    fn explicit_modulus_validation() {
        assert!(Field::with_modulus(2, vec![1, 1, 1]).is_ok());
        assert!(Field::with_modulus(2, vec![1, 0, 1]).is_err()); // (t+1)^2
        assert!(Field::with_modulus(4, vec![1, 1, 1]).is_err()); // 4 not prime
        assert!(Field::with_modulus(3, vec![1, 0, 2]).is_err()); // not monic
    }
}
