//! Dense matrices over any [`FieldOps`] field, plus the rank-metric helpers
//! that connect GF(q^m) vectors with their GF(q) expansions.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{BaseField, ExtField, FieldElement, FieldOps};

/// Row-major dense matrix over `F`.
#[derive(Clone, Debug)]
pub struct Matrix<F: FieldOps> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: FieldOps> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field)
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl<F: FieldOps> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Self { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must share the given width.
    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn row_vector(field: &F, v: &[F::Elem]) -> Self {
        Self { field: field.clone(), rows: 1, cols: v.len(), data: v.to_vec() }
    }

    pub fn random<R: Rng + ?Sized>(field: &F, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Self { field: field.clone(), rows, cols, data }
    }

    /// Uniform matrix of rank `min(rows, cols)` by rejection.
    pub fn random_full_rank<R: Rng + ?Sized>(field: &F, rows: usize, cols: usize, rng: &mut R) -> Self {
        let target = rows.min(cols);
        loop {
            let m = Self::random(field, rows, cols, rng);
            if m.rank() == target {
                return m;
            }
        }
    }

    /// Random matrix of exact rank `r`, as a product of full-rank factors.
    pub fn random_of_rank<R: Rng + ?Sized>(
        field: &F,
        rows: usize,
        cols: usize,
        r: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let max = rows.min(cols);
        if r > max {
            return Err(Error::RankTooLarge { requested: r, max });
        }
        let a = Self::random_full_rank(field, rows, r, rng);
        let b = Self::random_full_rank(field, r, cols, rng);
        a.mul(&b)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| self.field.is_zero(x))
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::LengthMismatch { expected: self.cols, got: other.rows });
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `v * self`.
    pub fn left_mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.rows {
            return Err(Error::LengthMismatch { expected: self.rows, got: v.len() });
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.cols];
        for (k, &a) in v.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = f.add(*slot, f.mul(a, self.get(k, j)));
            }
        }
        Ok(out)
    }

    /// Matrix times column vector: `self * v^T`.
    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: v.len() });
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::LengthMismatch { expected: self.rows * self.cols, got: other.rows * other.cols });
        }
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Self { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::LengthMismatch { expected: self.rows, got: other.rows });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Self { field: self.field.clone(), rows: self.rows, cols, data })
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Self { field: self.field.clone(), rows: rows.len(), cols: self.cols, data }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form; returns pivot columns. The pivot is
    /// the first nonzero entry at or below the current row.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let Some(p) = (pr..self.rows).find(|&r| !f.is_zero(self.get(r, c))) else {
                continue;
            };
            self.swap_rows(pr, p);
            let inv = f.inv(self.get(pr, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = self.get(pr, j);
                self.set(pr, j, f.mul(v, inv));
            }
            for r in 0..self.rows {
                if r == pr {
                    continue;
                }
                let factor = self.get(r, c);
                if f.is_zero(factor) {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(r, j), f.mul(factor, self.get(pr, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        pivots
    }

    /// Reduced row echelon form (zero rows kept) and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x^T = 0}` as the rows of a matrix in reduced row
    /// echelon form.
    pub fn right_kernel(&self) -> Self {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(f, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, f.one());
            for (pi, &pc) in pivots.iter().enumerate() {
                basis.set(b, pc, f.neg(r.get(pi, fc)));
            }
        }
        basis.rref().0
    }

    /// Basis of `{y : y * self = 0}`.
    pub fn left_kernel(&self) -> Self {
        self.transpose().right_kernel()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::LengthMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(r.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// One solution `x` of `self * x^T = b^T`, free variables set to zero.
    pub fn solve_right(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if b.len() != self.rows {
            return None;
        }
        let f = &self.field;
        let col = Self { field: f.clone(), rows: self.rows, cols: 1, data: b.to_vec() };
        let aug = self.hstack(&col).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(pi, self.cols);
        }
        Some(x)
    }

    /// One solution `x` of `x * self = b`.
    pub fn solve_left(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        self.transpose().solve_right(b)
    }
}

impl Matrix<BaseField> {
    /// Embeds a GF(q) matrix into GF(q^m).
    pub fn lift(&self, ext: &ExtField) -> Result<Matrix<ExtField>> {
        if self.field.q() != ext.q() {
            return Err(Error::FieldMismatch);
        }
        let data = self.data.iter().map(|&c| ext.embed(c)).collect();
        Ok(Matrix { field: ext.clone(), rows: self.rows, cols: self.cols, data })
    }
}

impl Matrix<ExtField> {
    /// Entry-wise `a^(q^i)`.
    pub fn frobenius(&self, i: i64) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.frobenius(a, i)).collect();
        Self { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Moore matrix with rows `v^[0], v^[1], ..., v^[rows-1]`.
    pub fn moore(field: &ExtField, v: &[FieldElement], rows: usize) -> Self {
        Self::moore_from(field, v, 0, rows)
    }

    /// Rows `v^[start], ..., v^[start+rows-1]`; `start` may be negative.
    pub fn moore_from(field: &ExtField, v: &[FieldElement], start: i64, rows: usize) -> Self {
        let mut data = Vec::with_capacity(rows * v.len());
        for i in 0..rows {
            data.extend(v.iter().map(|&a| field.frobenius(a, start + i as i64)));
        }
        Self { field: field.clone(), rows, cols: v.len(), data }
    }

    /// True iff every entry lies in GF(q).
    pub fn is_over_base(&self) -> bool {
        self.data.iter().all(|&a| a.0 < self.field.q() as u128)
    }

    /// Restricts a matrix whose entries all lie in GF(q).
    pub fn to_base(&self) -> Result<Matrix<BaseField>> {
        if !self.is_over_base() {
            return Err(Error::FieldMismatch);
        }
        let base = self.field.base();
        let data = self.data.iter().map(|&a| a.0 as u32).collect();
        Ok(Matrix { field: base, rows: self.rows, cols: self.cols, data })
    }
}

/// The `m x n` matrix over GF(q) whose column `j` holds the coordinates of `v_j`.
pub fn expand_to_base(field: &ExtField, v: &[FieldElement]) -> Matrix<BaseField> {
    let m = field.m();
    let mut out = Matrix::zeros(&field.base(), m, v.len());
    for (j, &a) in v.iter().enumerate() {
        for (i, c) in field.coeffs(a).into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    out
}

/// Inverse of [`expand_to_base`].
pub fn collapse_from_base(field: &ExtField, b: &Matrix<BaseField>) -> Result<Vec<FieldElement>> {
    if b.rows() != field.m() || b.field().q() != field.q() {
        return Err(Error::FieldMismatch);
    }
    (0..b.cols()).map(|j| field.from_coeffs(&b.col(j))).collect()
}

fn xor_rank(values: impl IntoIterator<Item = u128>) -> usize {
    let mut basis = [0u128; 128];
    let mut rank = 0;
    for mut x in values {
        while x != 0 {
            let top = 127 - x.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = x;
                rank += 1;
                break;
            }
            x ^= basis[top];
        }
    }
    rank
}

/// Dimension of the GF(q)-span of the given elements.
pub(crate) fn base_rank_of_elements(field: &ExtField, v: &[FieldElement]) -> usize {
    if field.q() == 2 {
        return xor_rank(v.iter().map(|a| a.0));
    }
    expand_to_base(field, v).rank()
}

/// Rank weight of a vector over GF(q^m): the rank of its GF(q) expansion.
pub fn rank_weight(field: &ExtField, v: &[FieldElement]) -> usize {
    base_rank_of_elements(field, v)
}

/// Rank distance `rank_weight(a - b)`.
pub fn rank_distance(field: &ExtField, a: &[FieldElement], b: &[FieldElement]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
    }
    let diff: Vec<FieldElement> = a.iter().zip(b).map(|(&x, &y)| field.sub(x, y)).collect();
    Ok(rank_weight(field, &diff))
}

/// Random length-`n` vector of rank weight exactly `t`: `a * B` with `a`
/// holding `t` GF(q)-independent elements and `B` a full-rank `t x n` GF(q)
/// matrix.
pub fn random_rank_vector<R: Rng + ?Sized>(
    field: &ExtField,
    n: usize,
    t: usize,
    rng: &mut R,
) -> Result<Vec<FieldElement>> {
    let max = n.min(field.m());
    if t > max {
        return Err(Error::RankTooLarge { requested: t, max });
    }
    let a = random_independent(field, t, rng)?;
    let b = Matrix::random_full_rank(&field.base(), t, n, rng).lift(field)?;
    b.left_mul_vec(&a)
}

/// `count` elements of GF(q^m) that are linearly independent over GF(q).
pub fn random_independent<R: Rng + ?Sized>(
    field: &ExtField,
    count: usize,
    rng: &mut R,
) -> Result<Vec<FieldElement>> {
    random_independent_in_subfield(field, field.m(), count, rng)
}

/// `count` GF(q)-independent elements of the subfield GF(q^s).
pub fn random_independent_in_subfield<R: Rng + ?Sized>(
    field: &ExtField,
    s: usize,
    count: usize,
    rng: &mut R,
) -> Result<Vec<FieldElement>> {
    if s == 0 || !field.m().is_multiple_of(s) {
        return Err(Error::NonDivisorDegree { s, m: field.m() });
    }
    if count > s {
        return Err(Error::RankTooLarge { requested: count, max: s });
    }
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = if s == field.m() { field.random(rng) } else { field.random_in_subfield(s, rng)? };
        out.push(x);
        if base_rank_of_elements(field, &out) < out.len() {
            out.pop();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn rref_and_kernel_over_gf3() {
        let f = BaseField::new(3).unwrap();
        let a = Matrix::from_rows(&f, 3, vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]).unwrap();
        // row 2 = 2 * row 1
        assert_eq!(a.rank(), 2);
        let k = a.right_kernel();
        assert_eq!(k.rows(), 1);
        let prod = a.mul(&k.transpose()).unwrap();
        assert!(prod.is_zero());
        assert_eq!(k.row(0), &[1, 1, 0]);
    }

    #[test]
    fn inverse_round_trip() {
        let f = ExtField::new(2, 8).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let a = Matrix::random_full_rank(&f, 5, 5, &mut rng);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(&f, 5));
        let s = Matrix::zeros(&f, 3, 3);
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn solve_left_recovers_combination() {
        let f = ExtField::new(3, 3).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let g = Matrix::random_full_rank(&f, 3, 6, &mut rng);
        let x: Vec<_> = (0..3).map(|_| f.random(&mut rng)).collect();
        let c = g.left_mul_vec(&x).unwrap();
        assert_eq!(g.solve_left(&c).unwrap(), x);
    }

    #[test]
    fn rank_weight_fast_path_matches_generic() {
        let f = ExtField::new(2, 10).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for t in 0..=6 {
            let v = random_rank_vector(&f, 8, t, &mut rng).unwrap();
            assert_eq!(rank_weight(&f, &v), t);
            assert_eq!(expand_to_base(&f, &v).rank(), t);
        }
    }

    #[test]
    fn expand_collapse_round_trip() {
        let f = ExtField::new(3, 4).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let v: Vec<_> = (0..7).map(|_| f.random(&mut rng)).collect();
        let b = expand_to_base(&f, &v);
        assert_eq!(collapse_from_base(&f, &b).unwrap(), v);
    }

    #[test]
    fn random_of_rank_has_requested_rank() {
        let f = BaseField::new(2).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        for r in 0..=4 {
            assert_eq!(Matrix::random_of_rank(&f, 4, 7, r, &mut rng).unwrap().rank(), r);
        }
        assert!(matches!(
            Matrix::random_of_rank(&f, 4, 7, 5, &mut rng),
            Err(Error::RankTooLarge { requested: 5, max: 4 })
        ));
    }
}
