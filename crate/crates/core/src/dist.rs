//! Exact fixed-space distributions for the classical groups at finite rank,
//! and their rank-to-infinity limits as certified rational intervals.
//!
//! Each finite-rank distribution assigns to every dimension `k` the exact
//! probability that a uniform group element fixes a `k`-dimensional
//! subspace pointwise. For the unitary groups the dimension is taken over
//! the quadratic extension field, so an element with a `k`-dimensional
//! fixed space fixes `q^{2k}` vectors; that count enters only in the
//! moments module — the distributions here are always keyed by dimension.

use crate::error::{Error, Result};
use crate::exactnum::{binom2, group_order, Family, GroupSpec, Rational};
use crate::interval::{self, IntervalReal};

/// Exact distribution of the fixed-space dimension for one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixDist {
    spec: GroupSpec,
    probs: Vec<Rational>,
}

impl FixDist {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Probability of a `k`-dimensional fixed space; zero above the
    /// dimension of the natural module.
    pub fn prob(&self, k: u32) -> Rational {
        self.probs.get(k as usize).cloned().unwrap_or_else(Rational::zero)
    }

    /// All probabilities, indexed by fixed-space dimension.
    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Dimension of the natural module.
    pub fn space_dim(&self) -> u32 {
        self.probs.len() as u32 - 1
    }

    pub fn total(&self) -> Rational {
        self.probs.iter().cloned().sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.total().is_one() && self.probs.iter().all(|p| !p.is_negative())
    }
}

fn orders_table(family: Family, count: u32, q: u64) -> Result<Vec<Rational>> {
    (0..=count)
        .map(|i| {
            let spec = GroupSpec::new(family, i, q)?;
            Ok(Rational::from_bigint(group_order(&spec)))
        })
        .collect()
}

fn sign(i: u32) -> Rational {
    if i % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// `prod_{l=1}^{i} (1 - q^{-2l})` for `i = 0..=count`.
fn even_poch_table(q: u64, count: u32) -> Vec<Rational> {
    let qr = Rational::from(q);
    let mut table = Vec::with_capacity(count as usize + 1);
    table.push(Rational::one());
    for l in 1..=count {
        let prev = table.last().unwrap().clone();
        table.push(prev * (Rational::one() - qr.pow(-2 * l as i64)));
    }
    table
}

/// Distribution for `GL(n,q)`:
/// `P(dim = k) = 1/|GL(k,q)| sum_i (-1)^i q^C(i,2) / (q^{ki} |GL(i,q)|)`.
pub fn gl(n: u32, q: u64) -> Result<FixDist> {
    let spec = GroupSpec::new(Family::Gl, n, q)?;
    let qr = Rational::from(q);
    let orders = orders_table(Family::Gl, n, q)?;
    let probs = (0..=n)
        .map(|k| {
            let mut sum = Rational::zero();
            for i in 0..=(n - k) {
                sum = sum
                    + sign(i) * qr.pow(binom2(i as u64))
                        / (qr.pow((k * i) as i64) * &orders[i as usize]);
            }
            sum / &orders[k as usize]
        })
        .collect();
    Ok(FixDist { spec, probs })
}

/// Distribution for `U(n,q)`; `k` is the dimension over the field with
/// `q^2` elements.
pub fn unitary(n: u32, q: u64) -> Result<FixDist> {
    let spec = GroupSpec::new(Family::Unitary, n, q)?;
    let neg_q = -Rational::from(q);
    let orders = orders_table(Family::Unitary, n, q)?;
    let probs = (0..=n)
        .map(|k| {
            let mut sum = Rational::zero();
            for i in 0..=(n - k) {
                sum = sum
                    + sign(i) * neg_q.pow(binom2(i as u64))
                        / (neg_q.pow((k * i) as i64) * &orders[i as usize]);
            }
            sum / &orders[k as usize]
        })
        .collect();
    Ok(FixDist { spec, probs })
}

/// Distribution for `Sp(2n,q)`; both parities of the fixed-space dimension
/// are populated.
pub fn symplectic(n: u32, q: u64) -> Result<FixDist> {
    let spec = GroupSpec::new(Family::Symplectic, n, q)?;
    let qr = Rational::from(q);
    let orders = orders_table(Family::Symplectic, n, q)?;
    let mut probs = vec![Rational::zero(); 2 * n as usize + 1];
    for k in 0..=n {
        let mut sum = Rational::zero();
        for i in 0..=(n - k) {
            sum = sum
                + sign(i) * qr.pow((i * (i + 1)) as i64)
                    / (&orders[i as usize] * qr.pow((2 * i * k) as i64));
        }
        probs[2 * k as usize] = sum / &orders[k as usize];
    }
    for k in 0..n {
        let mut sum = Rational::zero();
        for i in 0..=(n - k - 1) {
            sum = sum
                + sign(i) * qr.pow((i * (i + 1)) as i64)
                    / (&orders[i as usize] * qr.pow((2 * i * (k + 1)) as i64));
        }
        probs[2 * k as usize + 1] = sum / (&orders[k as usize] * qr.pow((2 * k + 1) as i64));
    }
    Ok(FixDist { spec, probs })
}

/// Distribution for `O(2n+1,q)` with `q` odd.
pub fn orthogonal_odd(n: u32, q: u64) -> Result<FixDist> {
    let spec = GroupSpec::new(Family::OrthogonalOdd, n, q)?;
    let qr = Rational::from(q);
    let half = Rational::new(1, 2)?;
    let e2 = even_poch_table(q, n);
    let mut probs = vec![Rational::zero(); 2 * n as usize + 2];
    for k in 0..=n {
        let ki = k as i64;
        let even_front = &half / (qr.pow(2 * ki * ki - ki) * &e2[k as usize]);
        let odd_front = &half / (qr.pow(2 * ki * ki + ki) * &e2[k as usize]);
        let mut even_sum = Rational::zero();
        let mut odd_sum = Rational::zero();
        for i in 0..=(n - k) {
            let ii = i as i64;
            even_sum = even_sum + sign(i) / (qr.pow(ii * ii + 2 * ii * ki) * &e2[i as usize]);
            odd_sum = odd_sum + sign(i) / (qr.pow(ii * ii + 2 * ii * (ki + 1)) * &e2[i as usize]);
        }
        probs[2 * k as usize] = even_front * even_sum;
        probs[2 * k as usize + 1] = odd_front * odd_sum;
    }
    Ok(FixDist { spec, probs })
}

/// Distribution for `O^+(2n,q)` or `O^-(2n,q)`, `n >= 1`. The formulas are
/// identical in odd and even characteristic; the sign of the trailing term
/// follows the type of the form.
pub fn orthogonal_even(n: u32, q: u64, family: Family) -> Result<FixDist> {
    let eps = match family {
        Family::OrthogonalPlus => Rational::one(),
        Family::OrthogonalMinus => -Rational::one(),
        _ => return Err(Error::InvalidSpec("expected an even orthogonal family".into())),
    };
    let spec = GroupSpec::new(family, n, q)?;
    if n == 0 {
        return Err(Error::InvalidSpec("even orthogonal distributions need rank >= 1".into()));
    }
    let qr = Rational::from(q);
    let half = Rational::new(1, 2)?;
    // |GL(k,q^2)| appears in both parts.
    let gl_orders = orders_table(Family::Gl, n, q * q)?;
    // prod_{l=1}^{i} (q^{2l} - 1)
    let int_poch: Vec<Rational> = {
        let mut t = vec![Rational::one()];
        for l in 1..=n {
            let prev = t.last().unwrap().clone();
            t.push(prev * (qr.pow(2 * l as i64) - Rational::one()));
        }
        t
    };
    let e2 = even_poch_table(q, n);

    let mut probs = vec![Rational::zero(); 2 * n as usize + 1];
    for k in 0..=n {
        let ki = k as i64;
        let mut sum = Rational::zero();
        for i in 0..=(n - k) {
            let ii = i as i64;
            sum = sum + sign(i) / (qr.pow((2 * ki - 1) * ii) * &int_poch[i as usize]);
        }
        let main = qr.pow(ki) / (Rational::from(2) * &gl_orders[k as usize]) * sum;
        let tail = &half * sign(n - k) * &eps
            / (qr.pow(2 * ki * (n - k) as i64)
                * &gl_orders[k as usize]
                * &int_poch[(n - k) as usize]);
        probs[2 * k as usize] = main + tail;
    }
    for k in 0..n {
        let ki = k as i64;
        let mut sum = Rational::zero();
        for i in 0..=(n - k - 1) {
            let ii = i as i64;
            sum = sum + sign(i) / (qr.pow(ii * ii + 2 * (ki + 1) * ii) * &e2[i as usize]);
        }
        probs[2 * k as usize + 1] =
            sum / (Rational::from(2) * qr.pow(ki) * &gl_orders[k as usize]);
    }
    Ok(FixDist { spec, probs })
}

/// Distribution for the requested group.
pub fn for_spec(spec: &GroupSpec) -> Result<FixDist> {
    match spec.family() {
        Family::Gl => gl(spec.rank(), spec.q()),
        Family::Unitary => unitary(spec.rank(), spec.q()),
        Family::Symplectic => symplectic(spec.rank(), spec.q()),
        Family::OrthogonalOdd => orthogonal_odd(spec.rank(), spec.q()),
        Family::OrthogonalPlus | Family::OrthogonalMinus => {
            orthogonal_even(spec.rank(), spec.q(), spec.family())
        }
    }
}

/// Fixed-space distribution of `O(2n+1,q)` in even characteristic, exposed
/// as a derived view: that group is isomorphic to `Sp(2n,q)`, with the
/// fixed-space dimension shifted up by one.
pub fn orthogonal_odd_even_char_view(n: u32, q: u64) -> Result<FixDist> {
    let sp = symplectic(n, q)?;
    let mut probs = vec![Rational::zero(); 2 * n as usize + 2];
    for (k, p) in sp.probs.iter().enumerate() {
        probs[k + 1] = p.clone();
    }
    Ok(FixDist { spec: *sp.spec(), probs })
}

/// The limiting probability of a `k`-dimensional fixed space as the rank
/// grows, enclosed in an interval of width at most `tolerance`.
///
/// The infinite products are truncated exactly and the discarded tails are
/// enclosed with geometric bounds, so the interval is rigorous.
pub fn limit(family: Family, q: u64, k: u32, tolerance: &Rational) -> Result<IntervalReal> {
    if tolerance <= &Rational::zero() {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    GroupSpec::new(family, 1, q)?;
    let qr = Rational::from(q);
    let ki = k as i64;

    // The k-dependent factor is an exact rational.
    let fixed = match family {
        Family::Gl => {
            let mut f = qr.pow(-ki * ki);
            for i in 1..=ki {
                let d = Rational::one() - qr.pow(-i);
                f = f / (&d * &d);
            }
            f
        }
        Family::Unitary => {
            let mut f = qr.pow(-ki * ki);
            for i in 1..=ki {
                f = f / (Rational::one() - qr.pow(-2 * i));
            }
            f
        }
        Family::Symplectic => {
            let mut f = qr.pow(-(ki * ki + ki) / 2);
            for i in 1..=ki {
                f = f / (Rational::one() - qr.pow(-i));
            }
            f
        }
        Family::OrthogonalOdd | Family::OrthogonalPlus | Family::OrthogonalMinus => {
            let mut f = qr.pow(-(ki * ki - ki) / 2);
            for i in 1..=ki {
                f = f / (Rational::one() - qr.pow(-i));
            }
            f
        }
    };

    let mut trunc = 8u32;
    loop {
        let enclosure = match family {
            // prod_{r>=1} (1 - q^-r)
            Family::Gl => {
                let mut partial = Rational::one();
                for r in 1..=trunc {
                    partial = partial * (Rational::one() - qr.pow(-(r as i64)));
                }
                let tail = qr.pow(-(trunc as i64)) / (&qr - &Rational::one());
                interval::with_decreasing_tail(partial, &tail)
            }
            // 1 / prod_{r>=0} (1 + q^-(2r+1))
            Family::Unitary => {
                let mut partial = Rational::one();
                for r in 0..=trunc {
                    partial = partial * (Rational::one() + qr.pow(-(2 * r as i64 + 1)));
                }
                let tail = qr.pow(-(2 * trunc as i64 + 3)) / (Rational::one() - qr.pow(-2));
                let grown = interval::with_increasing_tail(partial, &tail);
                IntervalReal::new(grown.upper().recip()?, grown.lower().recip()?)
            }
            // 1 / prod_{r>=1} (1 + q^-r), or from r >= 0 for the
            // orthogonal groups (the extra factor is 2).
            Family::Symplectic
            | Family::OrthogonalOdd
            | Family::OrthogonalPlus
            | Family::OrthogonalMinus => {
                let start = if family == Family::Symplectic { 1 } else { 0 };
                let mut partial = Rational::one();
                for r in start..=trunc {
                    partial = partial * (Rational::one() + qr.pow(-(r as i64)));
                }
                let tail = qr.pow(-(trunc as i64)) / (&qr - &Rational::one());
                let grown = interval::with_increasing_tail(partial, &tail);
                IntervalReal::new(grown.upper().recip()?, grown.lower().recip()?)
            }
        };
        let result = enclosure.scale(&fixed);
        if result.width() <= *tolerance {
            return Ok(result);
        }
        trunc = trunc.checked_mul(2).filter(|&t| t <= 1 << 14).ok_or_else(|| {
            Error::InvalidParameter(format!("tolerance {tolerance} is unreachably small"))
        })?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(num: i64, den: i64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    fn assert_probs(dist: &FixDist, expected: &[(i64, i64)]) {
        let got: Vec<Rational> = dist.probs().to_vec();
        let want: Vec<Rational> = expected.iter().map(|&(n, d)| r(n, d)).collect();
        assert_eq!(got, want, "{}", dist.spec());
    }

    #[test]
    fn gl_small_cases() {
        assert_probs(&gl(0, 2).unwrap(), &[(1, 1)]);
        assert_probs(&gl(1, 3).unwrap(), &[(1, 2), (1, 2)]);
        // Matches the fixed-space histogram of the six elements of GL(2,2):
        // two of order three fix nothing, three involutions fix a line, and
        // the identity fixes the plane.
        assert_probs(&gl(2, 2).unwrap(), &[(1, 3), (1, 2), (1, 6)]);
    }

    #[test]
    fn unitary_small_cases() {
        assert_probs(&unitary(0, 3).unwrap(), &[(1, 1)]);
        assert_probs(&unitary(1, 2).unwrap(), &[(2, 3), (1, 3)]);
        assert_probs(&unitary(2, 2).unwrap(), &[(5, 9), (7, 18), (1, 18)]);
    }

    #[test]
    fn symplectic_small_cases() {
        assert_probs(&symplectic(1, 2).unwrap(), &[(1, 3), (1, 2), (1, 6)]);
        assert!(symplectic(1, 3).unwrap().is_normalized());
        for n in 1..=3 {
            for q in [2, 3, 5] {
                assert!(symplectic(n, q).unwrap().is_normalized(), "Sp n={n} q={q}");
            }
        }
    }

    #[test]
    fn orthogonal_odd_small_cases() {
        assert_probs(&orthogonal_odd(1, 3).unwrap(), &[(5, 16), (23, 48), (3, 16), (1, 48)]);
        for (n, q) in [(1, 3), (2, 3), (1, 5)] {
            let dist = orthogonal_odd(n, q).unwrap();
            assert!(dist.is_normalized(), "O(2n+1) n={n} q={q}");
            // Only the identity fixes the whole space.
            let order = Rational::from_bigint(group_order(dist.spec()));
            assert_eq!(dist.prob(2 * n + 1), order.recip().unwrap());
        }
        assert!(orthogonal_odd(1, 2).is_err());
    }

    #[test]
    fn orthogonal_even_small_cases() {
        assert_probs(
            &orthogonal_even(1, 3, Family::OrthogonalPlus).unwrap(),
            &[(1, 4), (1, 2), (1, 4)],
        );
        // O^-(2,2) coincides with GL(2,2) acting on the anisotropic plane.
        assert_probs(
            &orthogonal_even(1, 2, Family::OrthogonalMinus).unwrap(),
            &[(1, 3), (1, 2), (1, 6)],
        );
        for n in 1..=3 {
            for q in [2, 3, 4, 5] {
                for family in [Family::OrthogonalPlus, Family::OrthogonalMinus] {
                    let dist = orthogonal_even(n, q, family).unwrap();
                    assert!(dist.is_normalized(), "{}", dist.spec());
                }
            }
        }
        assert!(orthogonal_even(1, 3, Family::Gl).is_err());
        assert!(orthogonal_even(0, 3, Family::OrthogonalPlus).is_err());
    }

    #[test]
    fn shifted_view_renormalizes() {
        for (n, q) in [(1, 2), (2, 2), (2, 4), (3, 2)] {
            let sp = symplectic(n, q).unwrap();
            let shifted = orthogonal_odd_even_char_view(n, q).unwrap();
            assert!(shifted.is_normalized());
            assert_eq!(shifted.prob(0), Rational::zero());
            for k in 0..=2 * n {
                assert_eq!(shifted.prob(k + 1), sp.prob(k));
            }
        }
    }

    #[test]
    fn limit_tolerance_contract() {
        assert!(limit(Family::Gl, 2, 0, &Rational::zero()).is_err());
        let tol = r(1, 1_000_000);
        let enclosure = limit(Family::Gl, 2, 0, &tol).unwrap();
        assert!(enclosure.width() <= tol);
    }

    #[test]
    fn gl_limit_matches_large_rank() {
        // P(dim = 0) for GL(n,2) converges to prod_{r>=1}(1 - 2^-r); at
        // n = 30 the gap is far below 2^-25.
        let exact = gl(30, 2).unwrap().prob(0);
        let enclosure = limit(Family::Gl, 2, 0, &r(1, 1i64 << 30)).unwrap();
        let gap = r(1, 1i64 << 25);
        assert!(enclosure.max_distance_to(&exact) < gap);
    }

    #[test]
    fn gl_limit_near_one_for_huge_q() {
        let enclosure = limit(Family::Gl, 1024, 0, &r(1, 1_000_000)).unwrap();
        assert!(enclosure.lower() > &r(9, 10));
    }

    #[test]
    fn limits_sum_to_one() {
        let tol = Rational::parse_decimal("1e-12").unwrap();
        for family in Family::ALL {
            for q in [2u64, 3] {
                if family == Family::OrthogonalOdd && q % 2 == 0 {
                    continue;
                }
                let mut lower_sum = Rational::zero();
                let mut upper_sum = Rational::zero();
                for k in 0..=8 {
                    let enclosure = limit(family, q, k, &tol).unwrap();
                    lower_sum = lower_sum + enclosure.lower();
                    upper_sum = upper_sum + enclosure.upper();
                }
                assert!(upper_sum <= Rational::one() + Rational::parse_decimal("1e-9").unwrap());
                assert!(
                    lower_sum >= Rational::one() - Rational::parse_decimal("1e-4").unwrap(),
                    "family {family:?} q={q} lower sum {lower_sum}"
                );
            }
        }
    }
}
