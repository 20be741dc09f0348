//! Rational intervals certifying real quantities.
//!
//! Infinite products such as `prod_{r>=1} (1 - q^{-r})` are evaluated by
//! truncating exactly and enclosing the discarded tail with a geometric
//! bound. Endpoints are exact rationals, so no rounding ever occurs.

use crate::exactnum::Rational;

/// A closed interval `[lower, upper]` guaranteed to contain the value it
/// stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalReal {
    lower: Rational,
    upper: Rational,
}

impl IntervalReal {
    pub fn new(lower: Rational, upper: Rational) -> Self {
        assert!(lower <= upper, "inverted interval");
        IntervalReal { lower, upper }
    }

    pub fn point(value: Rational) -> Self {
        IntervalReal { lower: value.clone(), upper: value }
    }

    pub fn lower(&self) -> &Rational {
        &self.lower
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn intersects(&self, other: &IntervalReal) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }

    pub fn add(&self, other: &IntervalReal) -> IntervalReal {
        IntervalReal::new(&self.lower + &other.lower, &self.upper + &other.upper)
    }

    pub fn mul(&self, other: &IntervalReal) -> IntervalReal {
        let candidates = [
            &self.lower * &other.lower,
            &self.lower * &other.upper,
            &self.upper * &other.lower,
            &self.upper * &other.upper,
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        IntervalReal::new(lo, hi)
    }

    pub fn scale(&self, factor: &Rational) -> IntervalReal {
        let a = &self.lower * factor;
        let b = &self.upper * factor;
        if a <= b {
            IntervalReal::new(a, b)
        } else {
            IntervalReal::new(b, a)
        }
    }

    /// Largest distance from `x` to a point of the interval.
    pub fn max_distance_to(&self, x: &Rational) -> Rational {
        (x - &self.lower).abs().max((x - &self.upper).abs())
    }
}

/// Encloses `partial * prod_{r > R} (1 - x_r)` for factors with
/// `0 <= x_r` and `sum_{r > R} x_r <= tail_sum < 1`: the dropped tail lies
/// in `[1 - tail_sum, 1]`.
pub fn with_decreasing_tail(partial: Rational, tail_sum: &Rational) -> IntervalReal {
    debug_assert!(!tail_sum.is_negative() && tail_sum < &Rational::one());
    let lo = &partial * &(Rational::one() - tail_sum);
    IntervalReal::new(lo, partial)
}

/// Encloses `partial * prod_{r > R} (1 + x_r)` for factors with
/// `0 <= x_r` and tail sum below 1: the tail lies in `[1, 1/(1 - tail_sum)]`.
pub fn with_increasing_tail(partial: Rational, tail_sum: &Rational) -> IntervalReal {
    debug_assert!(!tail_sum.is_negative() && tail_sum < &Rational::one());
    let hi = &partial / &(Rational::one() - tail_sum);
    IntervalReal::new(partial, hi)
}

/// Encloses `partial * prod_{r > R} (1 + x_r)` when only `|x_r|` is bounded:
/// the tail lies in `[1 - tail_abs_sum, 1/(1 - tail_abs_sum)]` and `partial`
/// may carry either sign.
pub fn with_mixed_tail(partial: Rational, tail_abs_sum: &Rational) -> IntervalReal {
    debug_assert!(!tail_abs_sum.is_negative() && tail_abs_sum < &Rational::one());
    let a = &partial * &(Rational::one() - tail_abs_sum);
    let b = &partial / &(Rational::one() - tail_abs_sum);
    if a <= b {
        IntervalReal::new(a, b)
    } else {
        IntervalReal::new(b, a)
    }
}
