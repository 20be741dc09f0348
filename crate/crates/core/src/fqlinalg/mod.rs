//! Matrices over small finite fields: rank and kernel computation, fixed
//! spaces, and the bilinear / sesquilinear forms whose isometry groups are
//! the symplectic, unitary, and orthogonal groups.

mod field;

pub use field::Field;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::{Family, GroupSpec};

/// A dense row-major matrix over a shared [`Field`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqMatrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FqMatrix {
    pub fn zero(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        FqMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Arc<Field>, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.into_iter().flatten().collect();
        FqMatrix { field, rows: r, cols: c, data }
    }

    /// Columns are the images of the standard basis vectors.
    pub fn from_cols(field: Arc<Field>, cols: &[Vec<u64>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zero(field, r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        debug_assert!(value < self.field.q());
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Row-major entries, the canonical key for element histograms.
    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!(self.field.q(), rhs.field.q(), "mixed fields");
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let f = &self.field;
        let mut out = FqMatrix::zero(self.field.clone(), self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = f.mul(a, rhs.get(k, j));
                    out.set(i, j, f.add(out.get(i, j), add));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut out = FqMatrix::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Transpose with entrywise conjugation (for sesquilinear forms).
    pub fn conj_transpose(&self) -> Result<FqMatrix> {
        let mut out = FqMatrix::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.field.conj(self.get(i, j))?);
            }
        }
        Ok(out)
    }

    /// `self - identity`, the map whose kernel is the fixed space.
    pub fn minus_identity(&self) -> Result<FqMatrix> {
        if !self.is_square() {
            return Err(Error::Shape("subtracting the identity from a non-square matrix".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            out.set(i, i, self.field.sub(self.get(i, i), 1));
        }
        Ok(out)
    }

    /// Row echelon reduction in place, scanning columns left to right;
    /// returns the pivot columns. Deterministic: the first nonzero entry
    /// from the top becomes the pivot.
    fn row_reduce(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(src) = (pivot_row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if src != pivot_row {
                for j in 0..self.cols {
                    let (a, b) = (self.get(pivot_row, j), self.get(src, j));
                    self.set(pivot_row, j, b);
                    self.set(src, j, a);
                }
            }
            let inv = f.inv(self.get(pivot_row, col)).expect("pivot is nonzero");
            for j in 0..self.cols {
                self.set(pivot_row, j, f.mul(inv, self.get(pivot_row, j)));
            }
            for r in 0..self.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let sub = f.mul(factor, self.get(pivot_row, j));
                    self.set(r, j, f.sub(self.get(r, j), sub));
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> u32 {
        let mut work = self.clone();
        work.row_reduce().len() as u32
    }

    /// Dimension of the null space; errors on non-square input.
    pub fn kernel_dim(&self) -> Result<u32> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "kernel dimension of a {}x{} matrix is not defined here",
                self.rows, self.cols
            )));
        }
        Ok(self.cols as u32 - self.rank())
    }

    /// A basis of the null space (the matrix may be rectangular).
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let f = &self.field;
        let mut work = self.clone();
        let pivots = work.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u64; self.cols];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(work.get(row, fc));
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(rhs.len(), self.rows, "right-hand side length");
        let f = self.field.clone();
        let mut work = FqMatrix::zero(f.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                work.set(i, j, self.get(i, j));
            }
            work.set(i, self.cols, rhs[i]);
        }
        let pivots = work.row_reduce();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = work.get(row, self.cols);
        }
        Some(x)
    }

    /// `dim ker(g - 1)`: the dimension of the subspace fixed pointwise.
    /// Requires a square invertible matrix.
    pub fn fixed_space_dim(&self) -> Result<u32> {
        let shifted = self.minus_identity()?;
        if self.rank() < self.rows as u32 {
            return Err(Error::Shape("fixed space of a singular matrix".into()));
        }
        shifted.kernel_dim()
    }
}

/// The kinds of forms whose isometry groups this crate works with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Symplectic,
    Hermitian,
    SymmetricPlus,
    SymmetricMinus,
    SymmetricOdd,
}

/// A nondegenerate bilinear or sesquilinear form, stored as its Gram
/// matrix in the standard basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSpec {
    kind: FormKind,
    gram: FqMatrix,
}

impl FormSpec {
    /// The alternating form with Gram blocks `[[0,1],[-1,0]]` on a
    /// `2n`-dimensional space.
    pub fn symplectic(field: Arc<Field>, n: u32) -> Result<FormSpec> {
        let d = 2 * n as usize;
        let mut gram = FqMatrix::zero(field.clone(), d, d);
        for b in 0..n as usize {
            gram.set(2 * b, 2 * b + 1, 1);
            gram.set(2 * b + 1, 2 * b, field.neg(1));
        }
        Ok(FormSpec { kind: FormKind::Symplectic, gram })
    }

    /// The standard Hermitian form (identity Gram matrix, conjugation
    /// `x -> x^q`) on an `n`-dimensional space over `F_{q^2}`.
    pub fn hermitian(field: Arc<Field>, n: u32) -> Result<FormSpec> {
        if field.degree() % 2 != 0 {
            return Err(Error::UnsupportedField(
                "a Hermitian form needs a quadratic extension field".into(),
            ));
        }
        let gram = FqMatrix::identity(field, n as usize);
        Ok(FormSpec { kind: FormKind::Hermitian, gram })
    }

    fn require_odd_characteristic(field: &Field) -> Result<()> {
        if field.characteristic() == 2 {
            return Err(Error::UnsupportedField(
                "symmetric forms are built in odd characteristic only; \
                 even-characteristic orthogonal groups need quadratic forms, which are out of scope"
                    .into(),
            ));
        }
        Ok(())
    }

    fn hyperbolic_block(gram: &mut FqMatrix, offset: usize) {
        gram.set(offset, offset + 1, 1);
        gram.set(offset + 1, offset, 1);
    }

    /// Plus-type symmetric form: an orthogonal sum of `n` hyperbolic planes.
    pub fn symmetric_plus(field: Arc<Field>, n: u32) -> Result<FormSpec> {
        Self::require_odd_characteristic(&field)?;
        let d = 2 * n as usize;
        let mut gram = FqMatrix::zero(field, d, d);
        for b in 0..n as usize {
            Self::hyperbolic_block(&mut gram, 2 * b);
        }
        Ok(FormSpec { kind: FormKind::SymmetricPlus, gram })
    }

    /// Minus-type symmetric form: `n-1` hyperbolic planes plus the
    /// anisotropic block `diag(1, -d)` with `d` the smallest non-square.
    pub fn symmetric_minus(field: Arc<Field>, n: u32) -> Result<FormSpec> {
        Self::require_odd_characteristic(&field)?;
        if n == 0 {
            return Err(Error::InvalidSpec("a minus-type form needs dimension >= 2".into()));
        }
        let d = 2 * n as usize;
        let mut gram = FqMatrix::zero(field.clone(), d, d);
        for b in 0..(n - 1) as usize {
            Self::hyperbolic_block(&mut gram, 2 * b);
        }
        let delta = field.smallest_nonsquare().expect("odd characteristic has non-squares");
        gram.set(d - 2, d - 2, 1);
        gram.set(d - 1, d - 1, field.neg(delta));
        Ok(FormSpec { kind: FormKind::SymmetricMinus, gram })
    }

    /// Odd-dimensional symmetric form: `n` hyperbolic planes plus a
    /// one-dimensional block.
    pub fn symmetric_odd(field: Arc<Field>, n: u32) -> Result<FormSpec> {
        Self::require_odd_characteristic(&field)?;
        let d = 2 * n as usize + 1;
        let mut gram = FqMatrix::zero(field, d, d);
        for b in 0..n as usize {
            Self::hyperbolic_block(&mut gram, 2 * b);
        }
        gram.set(d - 1, d - 1, 1);
        Ok(FormSpec { kind: FormKind::SymmetricOdd, gram })
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn gram(&self) -> &FqMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn field(&self) -> &Arc<Field> {
        self.gram.field()
    }

    pub fn is_hermitian(&self) -> bool {
        self.kind == FormKind::Hermitian
    }

    /// `B(u, v)`, conjugating the left argument for Hermitian forms.
    pub fn eval(&self, u: &[u64], v: &[u64]) -> Result<u64> {
        let d = self.dim();
        if u.len() != d || v.len() != d {
            return Err(Error::Shape("form arguments have the wrong length".into()));
        }
        let f = self.field();
        let mut acc = 0u64;
        for i in 0..d {
            let ui = if self.is_hermitian() { f.conj(u[i])? } else { u[i] };
            if ui == 0 {
                continue;
            }
            for j in 0..d {
                let g = self.gram.get(i, j);
                if g == 0 {
                    continue;
                }
                acc = f.add(acc, f.mul(f.mul(ui, g), v[j]));
            }
        }
        Ok(acc)
    }

    /// Whether `g` is an isometry: `g* . gram . g = gram`, with the left
    /// factor conjugated entrywise in the Hermitian case.
    pub fn preserves(&self, g: &FqMatrix) -> Result<bool> {
        if !g.is_square() || g.rows() != self.dim() {
            return Err(Error::Shape(format!(
                "isometry test of a {}x{} matrix against a dimension-{} form",
                g.rows(),
                g.cols(),
                self.dim()
            )));
        }
        let left = if self.is_hermitian() { g.conj_transpose()? } else { g.transpose() };
        Ok(left.mul(&self.gram).mul(g) == self.gram)
    }
}

/// The form whose isometry group realizes `spec`, over the appropriate
/// entry field; `None` for GL, which preserves no form.
pub fn form_for_spec(spec: &GroupSpec) -> Result<Option<FormSpec>> {
    let field = Arc::new(Field::new(spec.entry_field_order())?);
    match spec.family() {
        Family::Gl => Ok(None),
        Family::Unitary => Ok(Some(FormSpec::hermitian(field, spec.rank())?)),
        Family::Symplectic => Ok(Some(FormSpec::symplectic(field, spec.rank())?)),
        Family::OrthogonalOdd => Ok(Some(FormSpec::symmetric_odd(field, spec.rank())?)),
        Family::OrthogonalPlus => Ok(Some(FormSpec::symmetric_plus(field, spec.rank())?)),
        Family::OrthogonalMinus => Ok(Some(FormSpec::symmetric_minus(field, spec.rank())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> Arc<Field> {
        Arc::new(Field::new(q).unwrap())
    }

    #[test]
    fn kernel_dimension_basics() {
        let f2 = field(2);
        let n = 3;
        let zero = FqMatrix::identity(f2.clone(), n).minus_identity().unwrap();
        assert_eq!(zero.kernel_dim().unwrap(), n as u32);

        let ones = FqMatrix::from_rows(f2.clone(), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(ones.kernel_dim().unwrap(), 1);
        assert_eq!(ones.rank(), 1);

        let rect = FqMatrix::zero(f2, 2, 3);
        assert!(rect.kernel_dim().is_err());
    }

    #[test]
    fn rank_plus_kernel_is_dimension() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for q in [2u64, 3, 4, 5] {
            let f = field(q);
            for _ in 0..40 {
                let n = rng.random_range(1..=5usize);
                let mut m = FqMatrix::zero(f.clone(), n, n);
                for i in 0..n {
                    for j in 0..n {
                        m.set(i, j, rng.random_range(0..q));
                    }
                }
                assert_eq!(m.rank() + m.kernel_dim().unwrap(), n as u32);
            }
        }
    }

    #[test]
    fn fixed_space_examples() {
        let f3 = field(3);
        assert_eq!(FqMatrix::identity(f3.clone(), 4).fixed_space_dim().unwrap(), 4);
        // The swap fixes the diagonal line spanned by (1,1).
        let swap = FqMatrix::from_rows(f3.clone(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(swap.fixed_space_dim().unwrap(), 1);
        // -identity fixes only the origin in odd characteristic.
        let neg = FqMatrix::from_rows(f3.clone(), vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(neg.fixed_space_dim().unwrap(), 0);
        // Singular matrices are rejected.
        let sing = FqMatrix::zero(f3, 2, 2);
        assert!(sing.fixed_space_dim().is_err());
    }

    fn invert(m: &FqMatrix) -> FqMatrix {
        let n = m.rows();
        let f = m.field().clone();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![0u64; n];
            e[j] = 1;
            cols.push(m.solve(&e).expect("invertible"));
        }
        FqMatrix::from_cols(f, &cols)
    }

    #[test]
    fn fixed_space_is_conjugation_invariant() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let f3 = field(3);
        let mut random_invertible = |rng: &mut rand_chacha::ChaCha8Rng| loop {
            let mut m = FqMatrix::zero(f3.clone(), 3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    m.set(i, j, rng.random_range(0..3));
                }
            }
            if m.rank() == 3 {
                return m;
            }
        };
        for _ in 0..30 {
            let g = random_invertible(&mut rng);
            let h = random_invertible(&mut rng);
            let h_inv = invert(&h);
            let conj = h.mul(&g).mul(&h_inv);
            assert_eq!(g.fixed_space_dim().unwrap(), conj.fixed_space_dim().unwrap());
        }
    }

    #[test]
    fn solve_and_kernel_agree() {
        let f5 = field(5);
        let m = FqMatrix::from_rows(f5.clone(), vec![vec![1, 2, 3], vec![2, 4, 1]]);
        let x = m.solve(&[4, 3]).unwrap();
        let apply = |v: &[u64]| -> Vec<u64> {
            (0..2)
                .map(|i| (0..3).fold(0, |acc, j| f5.add(acc, f5.mul(m.get(i, j), v[j]))))
                .collect()
        };
        assert_eq!(apply(&x), vec![4, 3]);
        for k in m.kernel_basis() {
            assert_eq!(apply(&k), vec![0, 0]);
        }
        // Inconsistent system.
        let sing = FqMatrix::from_rows(f5, vec![vec![1, 1], vec![2, 2]]);
        assert!(sing.solve(&[1, 0]).is_none());
    }

    #[test]
    fn symplectic_form_predicate() {
        let f3 = field(3);
        let form = FormSpec::symplectic(f3.clone(), 1).unwrap();
        let id = FqMatrix::identity(f3.clone(), 2);
        assert!(form.preserves(&id).unwrap());
        // The swap negates the alternating form over F_3 but preserves it
        // over F_2 where -1 = 1.
        let swap3 = FqMatrix::from_rows(f3, vec![vec![0, 1], vec![1, 0]]);
        assert!(!form.preserves(&swap3).unwrap());
        let f2 = field(2);
        let form2 = FormSpec::symplectic(f2.clone(), 1).unwrap();
        let swap2 = FqMatrix::from_rows(f2, vec![vec![0, 1], vec![1, 0]]);
        assert!(form2.preserves(&swap2).unwrap());
    }

    #[test]
    fn symplectic_isometry_count_is_the_group_order() {
        // All 2x2 matrices over F_3 preserving the alternating form: 24.
        let f3 = field(3);
        let form = FormSpec::symplectic(f3.clone(), 1).unwrap();
        let mut count = 0;
        for code in 0..81u64 {
            let entries: Vec<u64> = (0..4).map(|i| (code / 3u64.pow(i)) % 3).collect();
            let m =
                FqMatrix::from_rows(f3.clone(), vec![entries[0..2].to_vec(), entries[2..4].to_vec()]);
            if form.preserves(&m).unwrap() {
                count += 1;
            }
        }
        assert_eq!(count, 24);
    }

    #[test]
    fn forms_reject_even_characteristic() {
        let f2 = field(2);
        assert!(FormSpec::symmetric_plus(f2.clone(), 1).is_err());
        assert!(FormSpec::symmetric_minus(f2.clone(), 1).is_err());
        assert!(FormSpec::symmetric_odd(f2, 1).is_err());
        // Hermitian over a prime field is rejected too.
        assert!(FormSpec::hermitian(field(3), 2).is_err());
    }

    #[test]
    fn minus_type_block_is_anisotropic() {
        for q in [3u64, 5, 7, 9] {
            let f = field(q);
            let form = FormSpec::symmetric_minus(f.clone(), 1).unwrap();
            for x in 0..q {
                for y in 0..q {
                    if (x, y) != (0, 0) {
                        assert_ne!(form.eval(&[x, y], &[x, y]).unwrap(), 0, "q={q} ({x},{y})");
                    }
                }
            }
        }
    }

    #[test]
    fn gram_matches_eval() {
        let f3 = field(3);
        let form = FormSpec::symmetric_odd(f3, 1).unwrap();
        let e = |i: usize| -> Vec<u64> {
            let mut v = vec![0u64; 3];
            v[i] = 1;
            v
        };
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(form.eval(&e(i), &e(j)).unwrap(), form.gram().get(i, j));
            }
        }
    }
}
