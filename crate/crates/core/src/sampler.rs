//! Uniform random elements of the classical groups, exhaustive enumeration
//! of tiny ones, and the Monte Carlo harness comparing empirical
//! fixed-space histograms against the exact distributions.
//!
//! Sampling is exact, not approximate: a GL element is built row by row
//! with each row uniform outside the span of the previous ones, and an
//! isometry is built column by column, drawing uniformly from the affine
//! set cut out by the linear form constraints and rejecting the candidates
//! that violate the quadratic (diagonal) condition or linear independence.
//! All valid prefixes of a given length extend in equally many ways, so
//! accepted matrices are uniform over the group; the chi-square suite
//! certifies this against full enumeration at small sizes.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist;
use crate::error::{Error, Result};
use crate::exactnum::{group_order, GroupSpec, Rational};
use crate::fqlinalg::{form_for_spec, Field, FormKind, FormSpec, FqMatrix};

/// Largest group order accepted by [`enumerate_group`].
pub const ENUMERATION_CAP: u64 = 20_000;

const MAX_REJECTIONS: u32 = 1_000_000;

/// Decodes `code` into a vector over `F_q` of length `d`.
fn decode_vector(mut code: u64, q: u64, d: usize) -> Vec<u64> {
    let mut v = vec![0u64; d];
    for x in v.iter_mut() {
        *x = code % q;
        code /= q;
    }
    v
}

/// Whether appending `cand` to the columns keeps them independent.
fn extends_independently(field: &Arc<Field>, cols: &[Vec<u64>], cand: &[u64]) -> bool {
    let mut rows: Vec<Vec<u64>> = cols.to_vec();
    rows.push(cand.to_vec());
    let j = rows.len();
    FqMatrix::from_rows(field.clone(), rows).rank() as usize == j
}

/// The linear system a new column `x` must satisfy given the previous
/// columns: `B(c_i, x) = gram[i][j]` for each `i < j`. The transposed
/// constraints `B(x, c_i)` follow automatically from the symmetry class
/// of the Gram matrix.
fn column_constraints(form: &FormSpec, cols: &[Vec<u64>], j: usize) -> (FqMatrix, Vec<u64>) {
    let d = form.dim();
    let f = form.field();
    let mut mat = FqMatrix::zero(f.clone(), cols.len(), d);
    let mut rhs = vec![0u64; cols.len()];
    for (i, ci) in cols.iter().enumerate() {
        for l in 0..d {
            let mut acc = 0u64;
            for (a, &cia) in ci.iter().enumerate() {
                let left = if form.is_hermitian() {
                    f.conj(cia).expect("validated Hermitian field")
                } else {
                    cia
                };
                acc = f.add(acc, f.mul(left, form.gram().get(a, l)));
            }
            mat.set(i, l, acc);
        }
        rhs[i] = form.gram().get(i, j);
    }
    (mat, rhs)
}

/// Whether the candidate satisfies the diagonal condition
/// `B(x,x) = gram[j][j]`. Alternating forms satisfy it identically.
fn diagonal_ok(form: &FormSpec, cand: &[u64], j: usize) -> bool {
    if form.kind() == FormKind::Symplectic {
        return true;
    }
    form.eval(cand, cand).expect("validated form") == form.gram().get(j, j)
}

/// Uniformly random element of `GL(n,q)` over the given field, built row
/// by row with rejection of rows inside the span of the previous ones.
pub fn sample_gl(n: u32, field: &Arc<Field>, rng: &mut ChaCha8Rng) -> FqMatrix {
    let d = n as usize;
    let q = field.q();
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(d);
    let mut attempts = 0;
    while rows.len() < d {
        let cand: Vec<u64> = (0..d).map(|_| rng.random_range(0..q)).collect();
        if extends_independently(field, &rows, &cand) {
            rows.push(cand);
        } else {
            attempts += 1;
            assert!(attempts < MAX_REJECTIONS, "row sampling stalled");
        }
    }
    FqMatrix::from_rows(field.clone(), rows)
}

/// Uniformly random isometry of `form`, built column by column. Each
/// column is drawn uniformly from the affine solution set of the linear
/// constraints; draws violating the diagonal condition or independence
/// are rejected and redrawn within the same set.
pub fn sample_isometry(form: &FormSpec, rng: &mut ChaCha8Rng) -> FqMatrix {
    let d = form.dim();
    let f = form.field();
    let q = f.q();
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(d);
    for j in 0..d {
        let (mat, rhs) = column_constraints(form, &cols, j);
        let particular = mat.solve(&rhs).expect("independent prefixes always extend");
        let kernel = mat.kernel_basis();
        let mut attempts = 0;
        loop {
            let mut cand = particular.clone();
            for basis_vec in &kernel {
                let c = rng.random_range(0..q);
                if c != 0 {
                    for (x, &b) in cand.iter_mut().zip(basis_vec) {
                        *x = f.add(*x, f.mul(c, b));
                    }
                }
            }
            if diagonal_ok(form, &cand, j) && extends_independently(f, &cols, &cand) {
                cols.push(cand);
                break;
            }
            attempts += 1;
            assert!(attempts < MAX_REJECTIONS, "column sampling stalled");
        }
    }
    FqMatrix::from_cols(f.clone(), &cols)
}

/// Uniformly random element of the group named by `spec`.
///
/// Even-characteristic orthogonal groups are rejected: their isometries
/// are defined by quadratic forms, which this crate deliberately omits.
pub fn sample_element(spec: &GroupSpec, rng: &mut ChaCha8Rng) -> Result<FqMatrix> {
    if spec.space_dim() == 0 {
        return Err(Error::InvalidParameter("sampling needs a nonzero-dimensional space".into()));
    }
    match form_for_spec(spec).map_err(|e| sampling_error(spec, e))? {
        None => {
            let field = Arc::new(Field::new(spec.q())?);
            Ok(sample_gl(spec.rank(), &field, rng))
        }
        Some(form) => Ok(sample_isometry(&form, rng)),
    }
}

fn sampling_error(spec: &GroupSpec, source: Error) -> Error {
    if spec.family().is_orthogonal() && spec.q() % 2 == 0 {
        Error::UnsupportedSampling(format!(
            "{spec}: even-characteristic orthogonal groups need quadratic-form machinery, \
             which is out of scope; exact distributions are still available"
        ))
    } else {
        source
    }
}

fn enumerate_gl(field: &Arc<Field>, d: usize) -> Vec<FqMatrix> {
    fn recurse(field: &Arc<Field>, d: usize, cols: &mut Vec<Vec<u64>>, out: &mut Vec<FqMatrix>) {
        if cols.len() == d {
            out.push(FqMatrix::from_cols(field.clone(), cols));
            return;
        }
        let q = field.q();
        for code in 0..q.pow(d as u32) {
            let cand = decode_vector(code, q, d);
            if extends_independently(field, cols, &cand) {
                cols.push(cand);
                recurse(field, d, cols, out);
                cols.pop();
            }
        }
    }
    let mut out = Vec::new();
    recurse(field, d, &mut Vec::new(), &mut out);
    out
}

fn enumerate_isometries(form: &FormSpec) -> Vec<FqMatrix> {
    fn recurse(form: &FormSpec, cols: &mut Vec<Vec<u64>>, out: &mut Vec<FqMatrix>) {
        let f = form.field();
        let q = f.q();
        let d = form.dim();
        let j = cols.len();
        if j == d {
            out.push(FqMatrix::from_cols(f.clone(), cols));
            return;
        }
        let (mat, rhs) = column_constraints(form, cols, j);
        let Some(particular) = mat.solve(&rhs) else {
            return;
        };
        let kernel = mat.kernel_basis();
        for code in 0..q.pow(kernel.len() as u32) {
            let coeffs = decode_vector(code, q, kernel.len());
            let mut cand = particular.clone();
            for (c, basis_vec) in coeffs.iter().zip(&kernel) {
                if *c != 0 {
                    for (x, &b) in cand.iter_mut().zip(basis_vec) {
                        *x = f.add(*x, f.mul(*c, b));
                    }
                }
            }
            if diagonal_ok(form, &cand, j) && extends_independently(f, cols, &cand) {
                cols.push(cand);
                recurse(form, cols, out);
                cols.pop();
            }
        }
    }
    let mut out = Vec::new();
    recurse(form, &mut Vec::new(), &mut out);
    out
}

/// Every element of the group, each exactly once, in a deterministic
/// order. Errors when the order exceeds [`ENUMERATION_CAP`].
pub fn enumerate_group(spec: &GroupSpec) -> Result<Vec<FqMatrix>> {
    let order = group_order(spec);
    if order.to_u64().is_none_or(|o| o > ENUMERATION_CAP) {
        return Err(Error::EnumerationTooLarge { order, cap: ENUMERATION_CAP });
    }
    let elements = match form_for_spec(spec).map_err(|e| sampling_error(spec, e))? {
        None => {
            let field = Arc::new(Field::new(spec.q())?);
            enumerate_gl(&field, spec.space_dim() as usize)
        }
        Some(form) => enumerate_isometries(&form),
    };
    Ok(elements)
}

/// Histogram of `fixed_space_dim` over a set of elements, indexed by
/// dimension `0..=d`.
pub fn fixdim_histogram(elements: &[FqMatrix]) -> Result<Vec<u64>> {
    let d = elements.first().map_or(0, FqMatrix::rows);
    let mut counts = vec![0u64; d + 1];
    for g in elements {
        counts[g.fixed_space_dim()? as usize] += 1;
    }
    Ok(counts)
}

/// Outcome of a Monte Carlo run against the exact distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub spec: GroupSpec,
    pub trials: u64,
    pub seed: u64,
    pub workers: u32,
    /// Sampled counts per fixed-space dimension.
    pub counts: Vec<u64>,
    /// `max_k |counts[k]/trials - p_k|`, exact.
    pub max_abs_dev: Rational,
    /// Goodness-of-fit statistic against the exact probabilities, over the
    /// cells with positive probability.
    pub chi_square: f64,
    pub dof: u32,
}

impl SampleReport {
    /// Whether every cell deviates from its exact probability by less than
    /// `sigmas * sqrt(p(1-p)/trials)`. Both sides are compared as squared
    /// rationals, so the check itself is exact.
    pub fn within_binomial_bound(&self, exact: &dist::FixDist, sigmas: u32) -> bool {
        let trials = Rational::from(self.trials);
        let factor = Rational::from(sigmas as u64 * sigmas as u64);
        self.counts.iter().enumerate().all(|(k, &c)| {
            let p = exact.prob(k as u32);
            let dev = Rational::from(c) / &trials - &p;
            if p.is_zero() {
                return dev.is_zero();
            }
            &dev * &dev < factor.clone() * &p * (Rational::one() - &p) / &trials
        })
    }
}

/// Runs `trials` independent samples of `spec`, split over `workers`
/// deterministic RNG streams derived from `seed`, and histograms the
/// fixed-space dimensions. The result depends only on
/// `(spec, trials, seed, workers)`.
pub fn empirical_fixdist(spec: &GroupSpec, trials: u64, seed: u64, workers: u32) -> Result<SampleReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    if workers == 0 {
        return Err(Error::InvalidParameter("at least one worker is required".into()));
    }
    // Fail before spawning when the family is unsupported.
    sample_element(spec, &mut ChaCha8Rng::seed_from_u64(seed))?;

    let dims = spec.space_dim() as usize + 1;
    let base = trials / workers as u64;
    let rem = trials % workers as u64;
    let mut counts = vec![0u64; dims];
    std::thread::scope(|scope| -> Result<()> {
        let mut handles = Vec::new();
        for w in 0..workers as u64 {
            let share = base + u64::from(w < rem);
            let spec = *spec;
            handles.push(scope.spawn(move || -> Result<Vec<u64>> {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(w + 1);
                let mut local = vec![0u64; dims];
                for _ in 0..share {
                    let g = sample_element(&spec, &mut rng)?;
                    local[g.fixed_space_dim()? as usize] += 1;
                }
                Ok(local)
            }));
        }
        for handle in handles {
            let local = handle.join().expect("sampler worker panicked")?;
            for (total, x) in counts.iter_mut().zip(local) {
                *total += x;
            }
        }
        Ok(())
    })?;

    let exact = dist::for_spec(spec)?;
    let trials_r = Rational::from(trials);
    let mut max_abs_dev = Rational::zero();
    let mut chi_square = 0.0;
    let mut cells = 0u32;
    for (k, &c) in counts.iter().enumerate() {
        let p = exact.prob(k as u32);
        let dev = (Rational::from(c) / &trials_r - &p).abs();
        max_abs_dev = max_abs_dev.max(dev);
        if !p.is_zero() {
            let expected = p.to_f64() * trials as f64;
            let diff = c as f64 - expected;
            chi_square += diff * diff / expected;
            cells += 1;
        }
    }
    Ok(SampleReport {
        spec: *spec,
        trials,
        seed,
        workers,
        counts,
        max_abs_dev,
        chi_square,
        dof: cells.saturating_sub(1),
    })
}

/// Chi-square test of sampler uniformity against the fully enumerated
/// group.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformityReport {
    pub spec: GroupSpec,
    pub order: u64,
    pub trials: u64,
    pub seed: u64,
    pub chi_square: f64,
    pub dof: u32,
    /// `dof + 5 sqrt(2 dof)`: five standard deviations above the mean of a
    /// chi-square variable with `dof` degrees of freedom.
    pub threshold: f64,
    pub min_count: u64,
    pub max_count: u64,
}

impl UniformityReport {
    pub fn passes(&self) -> bool {
        self.chi_square <= self.threshold
    }
}

/// Samples `trials` elements and counts hits per enumerated element.
/// Panics if a sampled matrix falls outside the enumerated group, which
/// would mean the sampler and the enumeration disagree about membership.
pub fn uniformity_report(spec: &GroupSpec, trials: u64, seed: u64) -> Result<UniformityReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    let elements = enumerate_group(spec)?;
    let order = elements.len() as u64;
    let index: HashMap<&[u64], usize> =
        elements.iter().enumerate().map(|(i, g)| (g.entries(), i)).collect();
    let mut counts = vec![0u64; elements.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    for _ in 0..trials {
        let g = sample_element(spec, &mut rng)?;
        let i = *index
            .get(g.entries())
            .unwrap_or_else(|| panic!("sampled a matrix outside the enumerated {spec}"));
        counts[i] += 1;
    }
    let expected = trials as f64 / order as f64;
    let chi_square = counts
        .iter()
        .map(|&c| {
            let diff = c as f64 - expected;
            diff * diff / expected
        })
        .sum();
    let dof = (order - 1) as u32;
    Ok(UniformityReport {
        spec: *spec,
        order,
        trials,
        seed,
        chi_square,
        dof,
        threshold: dof as f64 + 5.0 * (2.0 * dof as f64).sqrt(),
        min_count: counts.iter().copied().min().unwrap_or(0),
        max_count: counts.iter().copied().max().unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Family;
    use std::collections::HashSet;

    fn spec(family: Family, n: u32, q: u64) -> GroupSpec {
        GroupSpec::new(family, n, q).unwrap()
    }

    #[test]
    fn enumeration_counts_match_orders() {
        let cases = [
            (Family::Gl, 2, 2, 6usize),
            (Family::Symplectic, 1, 2, 6),
            (Family::Symplectic, 1, 3, 24),
            (Family::Unitary, 2, 2, 18),
            (Family::OrthogonalPlus, 1, 3, 4),
            (Family::OrthogonalMinus, 1, 3, 8),
            (Family::OrthogonalOdd, 1, 3, 48),
        ];
        for (family, n, q, expected) in cases {
            let s = spec(family, n, q);
            let elements = enumerate_group(&s).unwrap();
            assert_eq!(elements.len(), expected, "{s}");
            let distinct: HashSet<Vec<u64>> =
                elements.iter().map(|g| g.entries().to_vec()).collect();
            assert_eq!(distinct.len(), expected, "{s} has duplicates");
        }
    }

    #[test]
    fn enumerated_isometries_preserve_their_form() {
        for s in [
            spec(Family::Symplectic, 1, 3),
            spec(Family::Unitary, 2, 2),
            spec(Family::OrthogonalMinus, 1, 3),
        ] {
            let form = form_for_spec(&s).unwrap().unwrap();
            for g in enumerate_group(&s).unwrap() {
                assert!(form.preserves(&g).unwrap(), "{s}");
            }
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let too_big = spec(Family::Gl, 4, 2); // order 20160
        assert!(matches!(enumerate_group(&too_big), Err(Error::EnumerationTooLarge { .. })));
    }

    #[test]
    fn even_characteristic_orthogonal_sampling_is_rejected() {
        let s = spec(Family::OrthogonalMinus, 1, 2);
        let err = enumerate_group(&s).unwrap_err();
        assert!(matches!(err, Error::UnsupportedSampling(_)), "{err:?}");
        let err = empirical_fixdist(&s, 10, 1, 1).unwrap_err();
        assert!(matches!(err, Error::UnsupportedSampling(_)));
    }

    #[test]
    fn enumeration_histogram_matches_exact_distribution() {
        for s in [
            spec(Family::Gl, 2, 2),
            spec(Family::Symplectic, 1, 3),
            spec(Family::OrthogonalOdd, 1, 3),
        ] {
            let elements = enumerate_group(&s).unwrap();
            let hist = fixdim_histogram(&elements).unwrap();
            let exact = dist::for_spec(&s).unwrap();
            let order = Rational::from(elements.len());
            for (k, &c) in hist.iter().enumerate() {
                assert_eq!(Rational::from(c) / &order, exact.prob(k as u32), "{s} k={k}");
            }
        }
    }

    #[test]
    fn gl_1_2_sampling_is_trivial() {
        let field = Arc::new(Field::new(2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let g = sample_gl(1, &field, &mut rng);
            assert_eq!(g.entries(), &[1]);
        }
    }

    #[test]
    fn sampled_isometries_always_preserve_the_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for s in [
            spec(Family::Symplectic, 2, 3),
            spec(Family::Unitary, 2, 2),
            spec(Family::OrthogonalPlus, 2, 3),
            spec(Family::OrthogonalOdd, 1, 5),
        ] {
            let form = form_for_spec(&s).unwrap().unwrap();
            for _ in 0..200 {
                let g = sample_isometry(&form, &mut rng);
                assert!(form.preserves(&g).unwrap(), "{s}");
            }
        }
    }

    #[test]
    fn sampled_gl_is_invertible() {
        let field = Arc::new(Field::new(3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let g = sample_gl(3, &field, &mut rng);
            assert_eq!(g.rank(), 3);
        }
    }

    #[test]
    fn trial_count_contract() {
        let s = spec(Family::Gl, 2, 2);
        assert!(empirical_fixdist(&s, 0, 1, 1).is_err());
        let report = empirical_fixdist(&s, 1, 1, 1).unwrap();
        assert_eq!(report.counts.iter().sum::<u64>(), 1);
    }

    #[test]
    fn reports_are_reproducible() {
        let s = spec(Family::Symplectic, 1, 3);
        let a = empirical_fixdist(&s, 2000, 99, 3).unwrap();
        let b = empirical_fixdist(&s, 2000, 99, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.iter().sum::<u64>(), 2000);
        // A different seed moves the histogram with overwhelming probability.
        let c = empirical_fixdist(&s, 2000, 100, 3).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn quick_uniformity_smoke() {
        let s = spec(Family::Symplectic, 1, 2);
        let report = uniformity_report(&s, 6000, 5).unwrap();
        assert_eq!(report.order, 6);
        assert!(report.passes(), "chi^2 = {} > {}", report.chi_square, report.threshold);
    }
}
