//! Exact scalars: rationals, q-shifted factorials, Gaussian binomial
//! coefficients, and the orders of the finite classical groups.

mod rational;

pub use rational::Rational;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

/// The classical group families handled by this crate.
///
/// The rank parameter `n` of a [`GroupSpec`] refers to a vector space of
/// dimension `n` (GL, U), `2n` (Sp and even orthogonal), or `2n+1`
/// (odd orthogonal).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Gl,
    Unitary,
    Symplectic,
    OrthogonalOdd,
    OrthogonalPlus,
    OrthogonalMinus,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Gl,
        Family::Unitary,
        Family::Symplectic,
        Family::OrthogonalOdd,
        Family::OrthogonalPlus,
        Family::OrthogonalMinus,
    ];

    pub fn is_orthogonal(self) -> bool {
        matches!(
            self,
            Family::OrthogonalOdd | Family::OrthogonalPlus | Family::OrthogonalMinus
        )
    }

    /// Short name as used in reports, e.g. `gl`, `o_even_plus`.
    pub fn label(self) -> &'static str {
        match self {
            Family::Gl => "gl",
            Family::Unitary => "u",
            Family::Symplectic => "sp",
            Family::OrthogonalOdd => "o_odd",
            Family::OrthogonalPlus => "o_even_plus",
            Family::OrthogonalMinus => "o_even_minus",
        }
    }
}

/// One concrete finite classical group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    family: Family,
    n: u32,
    q: u64,
}

impl GroupSpec {
    /// Validates `q` (prime power, at least 2) and the odd-characteristic
    /// requirement of the odd orthogonal groups.
    pub fn new(family: Family, n: u32, q: u64) -> Result<Self> {
        if prime_power(q).is_none() {
            return Err(Error::InvalidSpec(format!("q = {q} is not a prime power >= 2")));
        }
        if family == Family::OrthogonalOdd && q % 2 == 0 {
            return Err(Error::InvalidSpec(format!(
                "odd orthogonal groups require odd q, got q = {q}"
            )));
        }
        Ok(GroupSpec { family, n, q })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Dimension of the natural module (`n`, `2n`, or `2n+1`).
    pub fn space_dim(&self) -> u32 {
        match self.family {
            Family::Gl | Family::Unitary => self.n,
            Family::Symplectic | Family::OrthogonalPlus | Family::OrthogonalMinus => 2 * self.n,
            Family::OrthogonalOdd => 2 * self.n + 1,
        }
    }

    /// Order of the field the matrix entries live in (`q`, or `q^2` for
    /// the unitary groups).
    pub fn entry_field_order(&self) -> u64 {
        match self.family {
            Family::Unitary => self.q * self.q,
            _ => self.q,
        }
    }
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (n, q) = (self.n, self.q);
        match self.family {
            Family::Gl => write!(f, "GL({n},{q})"),
            Family::Unitary => write!(f, "U({n},{q})"),
            Family::Symplectic => write!(f, "Sp({},{q})", 2 * n),
            Family::OrthogonalOdd => write!(f, "O({},{q})", 2 * n + 1),
            Family::OrthogonalPlus => write!(f, "O+({},{q})", 2 * n),
            Family::OrthogonalMinus => write!(f, "O-({},{q})", 2 * n),
        }
    }
}

/// Decomposes `q` as `p^m` with `p` prime; `None` when `q < 2` or not a
/// prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut m = 0;
            while rest % p == 0 {
                rest /= p;
                m += 1;
            }
            return (rest == 1).then_some((p, m));
        }
        p += 1;
    }
    Some((q, 1))
}

/// `C(n,2) = n(n-1)/2` as a signed exponent.
pub fn binom2(n: u64) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

/// q-shifted factorial `(a;q)_n = (1-a)(1-aq)...(1-aq^{n-1})`;
/// the empty product `(a;q)_0` is 1.
pub fn qpoch(a: &Rational, q: &Rational, n: u32) -> Rational {
    let mut product = Rational::one();
    let mut term = a.clone();
    for _ in 0..n {
        product = product * (Rational::one() - &term);
        term = term * q;
    }
    product
}

/// Gaussian binomial coefficient over an arbitrary rational base.
///
/// Computed by the telescoping product
/// `prod_{i=1}^{k} (q^{n-k+i} - 1) / (q^i - 1)`; zero when `k > n`.
/// Errors when a denominator factor `q^i - 1` vanishes.
pub fn qbinom(n: u32, k: u32, q: &Rational) -> Result<Rational> {
    if k > n {
        return Ok(Rational::zero());
    }
    let mut result = Rational::one();
    for i in 1..=k {
        let numer = q.pow((n - k + i) as i64) - Rational::one();
        let denom = q.pow(i as i64) - Rational::one();
        if denom.is_zero() {
            return Err(Error::VanishingDenominator(format!(
                "q^{i} - 1 = 0 in the Gaussian binomial with q = {q}"
            )));
        }
        result = result * numer / denom;
    }
    Ok(result)
}

fn int_pow(base: u64, exp: u64) -> BigInt {
    BigInt::from(base).pow(exp as u32)
}

/// Exact order of the group named by `spec`.
///
/// Rank 0 is the trivial group for GL, U, Sp, and the even orthogonal
/// families; `O(1,q)` has order 2 (the scalars +1 and -1).
pub fn group_order(spec: &GroupSpec) -> BigInt {
    let n = spec.rank() as u64;
    let q = spec.q();
    match spec.family() {
        // q^C(n,2) * prod (q^i - 1)
        Family::Gl => {
            let mut order = int_pow(q, n * n.saturating_sub(1) / 2);
            for i in 1..=n {
                order *= int_pow(q, i) - 1;
            }
            order
        }
        // q^C(n,2) * prod (q^i - (-1)^i)
        Family::Unitary => {
            let mut order = int_pow(q, n * n.saturating_sub(1) / 2);
            for i in 1..=n {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                order *= int_pow(q, i) - sign;
            }
            order
        }
        // q^{n^2} * prod (q^{2i} - 1)
        Family::Symplectic => {
            let mut order = int_pow(q, n * n);
            for i in 1..=n {
                order *= int_pow(q, 2 * i) - 1;
            }
            order
        }
        // 2 q^{n^2} * prod (q^{2i} - 1)
        Family::OrthogonalOdd => {
            let mut order = BigInt::from(2) * int_pow(q, n * n);
            for i in 1..=n {
                order *= int_pow(q, 2 * i) - 1;
            }
            order
        }
        // 2 q^{n(n-1)} (q^n -+ 1) * prod_{i<n} (q^{2i} - 1); trivial at n = 0
        Family::OrthogonalPlus | Family::OrthogonalMinus => {
            if n == 0 {
                return BigInt::one();
            }
            let eps = if spec.family() == Family::OrthogonalPlus { 1 } else { -1 };
            let mut order = BigInt::from(2) * int_pow(q, n * (n - 1)) * (int_pow(q, n) - eps);
            for i in 1..n {
                order *= int_pow(q, 2 * i) - 1;
            }
            order
        }
    }
}

/// The substituted base the identity engine uses for this family:
/// `q` for GL, `-q` for U, `q^2` for Sp and the orthogonal groups.
pub fn identity_base(spec: &GroupSpec) -> Rational {
    let q = Rational::from(spec.q());
    match spec.family() {
        Family::Gl => q,
        Family::Unitary => -q,
        _ => &q * &q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(num: i64, den: i64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    #[test]
    fn qpoch_small_cases() {
        let any = r(7, 3);
        assert_eq!(qpoch(&any, &any, 0), Rational::one());
        assert_eq!(qpoch(&r(1, 2), &r(1, 2), 2), r(3, 8));
        assert_eq!(qpoch(&Rational::from(2), &Rational::from(2), 2), Rational::from(3));
    }

    #[test]
    fn qbinom_conventions() {
        let q = r(5, 2);
        for j in 0..6 {
            assert_eq!(qbinom(j, 0, &q).unwrap(), Rational::one());
        }
        assert_eq!(qbinom(2, 1, &q).unwrap(), &q + &Rational::one());
        assert_eq!(qbinom(3, 5, &q).unwrap(), Rational::zero());
    }

    // Independent oracle: count k-dimensional subspaces of F_q^n by counting
    // ordered independent k-tuples and dividing by the count per subspace.
    fn subspace_count(n: u32, k: u32, q: u64) -> BigInt {
        let tuples = |dim: u32| -> BigInt {
            let mut c = BigInt::one();
            for i in 0..k {
                c *= int_pow(q, dim as u64) - int_pow(q, i as u64);
            }
            c
        };
        tuples(n) / tuples(k)
    }

    #[test]
    fn qbinom_counts_subspaces() {
        assert_eq!(subspace_count(4, 2, 2), BigInt::from(35));
        assert_eq!(qbinom(4, 2, &Rational::from(2)).unwrap(), Rational::from(35));
        for q in [2u64, 3, 4] {
            for n in 0..=5 {
                for k in 0..=n {
                    let expected = Rational::from_bigint(subspace_count(n, k, q));
                    assert_eq!(qbinom(n, k, &Rational::from(q)).unwrap(), expected, "n={n} k={k} q={q}");
                }
            }
        }
    }

    #[test]
    fn qbinom_pascal_recurrence() {
        // qbinom(n,k) = qbinom(n-1,k-1) + q^k qbinom(n-1,k)
        let bases = [Rational::from(2), Rational::from(3), Rational::from(5), r(1, 2), Rational::from(-2)];
        for q in &bases {
            for n in 1..=12u32 {
                for k in 1..=n {
                    let lhs = qbinom(n, k, q).unwrap();
                    let rhs = qbinom(n - 1, k - 1, q).unwrap()
                        + q.pow(k as i64) * qbinom(n - 1, k, q).unwrap();
                    assert_eq!(lhs, rhs, "n={n} k={k} q={q}");
                }
            }
        }
    }

    #[test]
    fn qbinom_vanishing_base() {
        assert!(qbinom(3, 2, &Rational::from(-1)).is_err());
        assert!(qbinom(2, 1, &Rational::one()).is_err());
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn spec_validation() {
        assert!(GroupSpec::new(Family::Gl, 2, 6).is_err());
        assert!(GroupSpec::new(Family::OrthogonalOdd, 1, 2).is_err());
        assert!(GroupSpec::new(Family::OrthogonalOdd, 1, 3).is_ok());
    }

    #[test]
    fn known_group_orders() {
        let cases = [
            (Family::Gl, 2, 2, 6i64),
            (Family::Gl, 2, 3, 48),
            (Family::Gl, 3, 2, 168),
            (Family::Unitary, 1, 2, 3),
            (Family::Unitary, 2, 2, 18),
            (Family::Symplectic, 1, 3, 24),
            (Family::Symplectic, 2, 2, 720),
            (Family::OrthogonalOdd, 1, 3, 48),
            (Family::OrthogonalPlus, 1, 3, 4),
            (Family::OrthogonalMinus, 1, 2, 6),
            (Family::OrthogonalMinus, 1, 3, 8),
            (Family::OrthogonalPlus, 2, 3, 1152),
            (Family::OrthogonalMinus, 2, 3, 1440),
        ];
        for (family, n, q, expected) in cases {
            let spec = GroupSpec::new(family, n, q).unwrap();
            assert_eq!(group_order(&spec), BigInt::from(expected), "{spec}");
        }
    }

    #[test]
    fn rank_zero_orders() {
        for family in [Family::Gl, Family::Unitary, Family::Symplectic] {
            let spec = GroupSpec::new(family, 0, 3).unwrap();
            assert_eq!(group_order(&spec), BigInt::one());
        }
        // O(1,q) = {+1, -1}
        let spec = GroupSpec::new(Family::OrthogonalOdd, 0, 3).unwrap();
        assert_eq!(group_order(&spec), BigInt::from(2));
        for family in [Family::OrthogonalPlus, Family::OrthogonalMinus] {
            let spec = GroupSpec::new(family, 0, 3).unwrap();
            assert_eq!(group_order(&spec), BigInt::one());
        }
    }

    #[test]
    fn gl_order_as_pochhammer() {
        // |GL(n,q)| = (-1)^n q^C(n,2) (q;q)_n
        for q in [2u64, 3, 4, 5, 9] {
            for n in 0..=8u32 {
                let spec = GroupSpec::new(Family::Gl, n, q).unwrap();
                let qr = Rational::from(q);
                let sign = if n % 2 == 0 { Rational::one() } else { -Rational::one() };
                let value = sign * qr.pow(binom2(n as u64)) * qpoch(&qr, &qr, n);
                assert_eq!(value, Rational::from_bigint(group_order(&spec)));
            }
        }
    }

    #[test]
    fn identity_base_per_family() {
        let gl = GroupSpec::new(Family::Gl, 1, 3).unwrap();
        assert_eq!(identity_base(&gl), Rational::from(3));
        let u = GroupSpec::new(Family::Unitary, 1, 2).unwrap();
        assert_eq!(identity_base(&u), Rational::from(-2));
        let sp = GroupSpec::new(Family::Symplectic, 1, 3).unwrap();
        assert_eq!(identity_base(&sp), Rational::from(9));
    }
}
