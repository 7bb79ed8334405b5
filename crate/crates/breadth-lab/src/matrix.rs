//! Dense exact linear algebra over a [`FieldSpec`]: row reduction, kernels,
//! determinants, Pfaffians, and canonical subspaces with a deterministic
//! enumeration order.
//!
//! Everything here is exact; there is no floating point anywhere. The
//! general path works elementwise on [`FieldElem`]. Hot enumeration loops
//! elsewhere in the crate use the raw u16 kernel [`gf_rank`] instead.

use crate::field::{FieldElem, FieldError, FieldSpec};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is not alternating")]
    NotAlternating,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Row-major dense matrix over a fixed field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: &FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElem,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &FieldSpec, rows: Vec<Vec<FieldElem>>, cols: usize) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row);
        }
        Matrix {
            field: field.clone(),
            rows: nrows,
            cols,
            data,
        }
    }

    /// Integer convenience constructor; entries are reduced into the field.
    pub fn from_int_rows(field: &FieldSpec, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(field, rows.len(), cols, |i, j| field.from_int(rows[i][j]))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j].clone()
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.at(j, i))
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.field.add(self.get(i, j), other.get(i, j))
        })
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.field.sub(self.get(i, j), other.get(i, j))
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.field.neg(self.get(i, j))
        })
    }

    pub fn scale(&self, c: &FieldElem) -> Matrix {
        Matrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.field.mul(c, self.get(i, j))
        })
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let f = &self.field;
        Matrix::from_fn(f, self.rows, other.cols, |i, j| {
            let mut acc = f.zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = f.add(&acc, &f.mul(a, other.get(k, j)));
            }
            acc
        })
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (j, vj) in v.iter().enumerate() {
                    if vj.is_zero() {
                        continue;
                    }
                    acc = f.add(&acc, &f.mul(self.get(i, j), vj));
                }
                acc
            })
            .collect()
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty());
        let cols = parts[0].cols;
        let field = parts[0].field.clone();
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            assert_eq!(m.field, field);
            data.extend(m.data.iter().cloned());
            rows += m.rows;
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let factor = self.at(i, c);
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), &f.mul(&factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if let (Some(t), Some(mut raw)) = (self.field.tables(), self.to_indices()) {
            return gf_rank(t, self.rows, self.cols, &mut raw);
        }
        self.clone().rref().len()
    }

    /// Canonical index buffer for the u16 kernels; None over the rationals.
    pub(crate) fn to_indices(&self) -> Option<Vec<u16>> {
        if self.field.is_rational() {
            return None;
        }
        Some(
            self.data
                .iter()
                .map(|v| match v {
                    FieldElem::Fin(i) => *i,
                    FieldElem::Rat(_) => unreachable!("rational entry in finite matrix"),
                })
                .collect(),
        )
    }

    /// Null space of the matrix acting on column vectors.
    pub fn kernel(&self) -> Subspace {
        let mut m = self.clone();
        let pivots = m.rref();
        let f = &self.field;
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(m.get(i, free));
            }
            basis.push(v);
        }
        Subspace::span(f, self.cols, basis)
    }

    /// Row space as a canonical subspace.
    pub fn row_space(&self) -> Subspace {
        Subspace::span(
            &self.field,
            self.cols,
            (0..self.rows).map(|i| self.row(i).to_vec()).collect(),
        )
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let f = &self.field;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j));
            }
            aug.set(i, n + i, f.one());
        }
        let pivots = aug.rref();
        if pivots != (0..n).collect::<Vec<_>>() {
            return None;
        }
        Some(Matrix::from_fn(f, n, n, |i, j| aug.at(i, n + j)))
    }

    pub fn det(&self) -> FieldElem {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        let f = self.field.clone();
        let mut m = self.clone();
        let mut acc = f.one();
        let mut negate = false;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return f.zero();
            };
            if pr != c {
                m.swap_rows(c, pr);
                negate = !negate;
            }
            let pivot = m.at(c, c);
            acc = f.mul(&acc, &pivot);
            let inv = f.inv(&pivot).expect("pivot is nonzero");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = f.mul(m.get(i, c), &inv);
                for j in c..n {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        if negate {
            acc = f.neg(&acc);
        }
        acc
    }

    /// Sylvester test on a symmetric rational matrix: true when the
    /// associated quadratic form is positive or negative definite, which
    /// over an ordered field rules out nontrivial zeros.
    pub fn is_definite(&self) -> bool {
        assert!(self.field.is_rational(), "definiteness needs an ordered field");
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return true;
        }
        let minor_sign = |k: usize| -> i8 {
            let sub = Matrix::from_fn(&self.field, k, k, |i, j| self.at(i, j));
            sub.det().rational_sign().unwrap()
        };
        let first = minor_sign(1);
        if first == 0 {
            return false;
        }
        for k in 1..=n {
            // Positive definite: all minors positive. Negative definite:
            // signs alternate starting negative, i.e. sign = first^k.
            let want = if first == 1 { 1 } else if k % 2 == 0 { 1 } else { -1 };
            if minor_sign(k) != want {
                return false;
            }
        }
        true
    }

    /// Alternating: square, zero diagonal, and a_ij = -a_ji. In
    /// characteristic two the diagonal condition is the one with content.
    pub fn is_alternating(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            if !self.get(i, i).is_zero() {
                return false;
            }
            for j in i + 1..self.cols {
                if *self.get(i, j) != self.field.neg(self.get(j, i)) {
                    return false;
                }
            }
        }
        true
    }

    /// Pfaffian of an alternating matrix, by congruence elimination to a
    /// block form with 2x2 antisymmetric blocks. Odd size gives zero.
    pub fn pfaffian(&self) -> Result<FieldElem, MatrixError> {
        if !self.is_alternating() {
            return Err(MatrixError::NotAlternating);
        }
        let n = self.rows;
        let f = self.field.clone();
        if n % 2 == 1 {
            return Ok(f.zero());
        }
        let mut m = self.clone();
        let mut acc = f.one();
        let mut negate = false;
        for k in (0..n).step_by(2) {
            // Pivot search in column k below the diagonal.
            let Some(pr) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                return Ok(f.zero());
            };
            if pr != k + 1 {
                // Simultaneous row and column swap keeps the matrix
                // alternating and flips the sign of the Pfaffian.
                m.swap_rows(k + 1, pr);
                for i in 0..n {
                    m.data.swap(i * n + k + 1, i * n + pr);
                }
                negate = !negate;
            }
            let pivot = m.at(k + 1, k);
            let pinv = f.inv(&pivot).expect("pivot is nonzero");
            for j in k + 2..n {
                if m.get(j, k).is_zero() {
                    continue;
                }
                let factor = f.mul(m.get(j, k), &pinv);
                // row_j -= factor * row_{k+1}, col_j -= factor * col_{k+1}
                for c in k..n {
                    let v = f.sub(m.get(j, c), &f.mul(&factor, m.get(k + 1, c)));
                    m.set(j, c, v);
                }
                for r in k..n {
                    let v = f.sub(m.get(r, j), &f.mul(&factor, m.get(r, k + 1)));
                    m.set(r, j, v);
                }
            }
            acc = f.mul(&acc, m.get(k, k + 1));
        }
        if negate {
            acc = f.neg(&acc);
        }
        Ok(acc)
    }
}

/// Raw row-rank over a finite field on a u16 index buffer. This is the
/// kernel under every exhaustive scan, so it avoids FieldElem entirely.
pub(crate) fn gf_rank(
    t: &crate::field::GfTables,
    rows: usize,
    cols: usize,
    data: &mut [u16],
) -> usize {
    debug_assert_eq!(data.len(), rows * cols);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| data[r * cols + c] != 0) else {
            continue;
        };
        if pr != rank {
            for j in c..cols {
                data.swap(rank * cols + j, pr * cols + j);
            }
        }
        let pinv = t.inv(data[rank * cols + c]);
        for r in rank + 1..rows {
            let lead = data[r * cols + c];
            if lead == 0 {
                continue;
            }
            let factor = t.mul(lead, pinv);
            data[r * cols + c] = 0;
            for j in c + 1..cols {
                let s = t.mul(factor, data[rank * cols + j]);
                if s != 0 {
                    data[r * cols + j] = t.sub(data[r * cols + j], s);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A linear subspace in canonical form: the basis matrix is in reduced row
/// echelon form with no zero rows, so equal subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(field: &FieldSpec, ambient: usize, vectors: Vec<Vec<FieldElem>>) -> Subspace {
        let mut m = Matrix::from_rows(field, vectors, ambient);
        let pivots = m.rref();
        let dim = pivots.len();
        let basis = Matrix::from_fn(field, dim, ambient, |i, j| m.at(i, j));
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(field: &FieldSpec, ambient: usize) -> Subspace {
        Subspace::span(field, ambient, Vec::new())
    }

    pub fn full(field: &FieldSpec, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[FieldElem]> {
        (0..self.dim()).map(|i| self.basis.row(i))
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Ambient coordinates not used as pivots; these index a complement,
    /// and enumeration of coset representatives runs over them.
    pub fn complement_coords(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }

    /// Canonical coset representative: v minus its projection through the
    /// pivot coordinates. Zero exactly when v lies in the subspace.
    pub fn reduce(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.ambient);
        let f = self.field().clone();
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for j in p..self.ambient {
                out[j] = f.sub(&out[j], &f.mul(&factor, self.basis.get(i, j)));
            }
        }
        out
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        self.reduce(v).iter().all(|c| c.is_zero())
    }

    /// Coefficients of v in the canonical basis, if v lies in the span.
    /// Rows have unit pivots and zeros at other pivots, so the coefficient
    /// of row i is just v[pivots[i]].
    pub fn coords_of(&self, v: &[FieldElem]) -> Option<Vec<FieldElem>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_contained_in(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        self.basis_rows().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let rows = self
            .basis_rows()
            .chain(other.basis_rows())
            .map(|r| r.to_vec())
            .collect();
        Subspace::span(self.field(), self.ambient, rows)
    }

    /// Zassenhaus intersection: reduce the block matrix [[U|U],[W|0]]; rows
    /// whose left half vanishes carry a basis of the intersection in the
    /// right half.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let n = self.ambient;
        let f = self.field().clone();
        let mut rows = Vec::new();
        for r in self.basis_rows() {
            let mut row = r.to_vec();
            row.extend(r.to_vec());
            rows.push(row);
        }
        for r in other.basis_rows() {
            let mut row = r.to_vec();
            row.extend(vec![f.zero(); n]);
            rows.push(row);
        }
        let mut m = Matrix::from_rows(&f, rows, 2 * n);
        m.rref();
        let mut inter = Vec::new();
        for i in 0..m.rows() {
            let left_zero = (0..n).all(|j| m.get(i, j).is_zero());
            if left_zero {
                let right: Vec<_> = (n..2 * n).map(|j| m.at(i, j)).collect();
                if right.iter().any(|c| !c.is_zero()) {
                    inter.push(right);
                }
            }
        }
        Subspace::span(&f, n, inter)
    }
}

/// All subspaces of the given dimension in F_q^ambient, in a fixed order:
/// pivot sets ascend lexicographically, then free entries run through an
/// odometer in canonical field order (last free cell fastest).
pub fn enumerate_subspaces(
    field: &FieldSpec,
    ambient: usize,
    dim: usize,
) -> Result<impl Iterator<Item = Subspace> + '_, FieldError> {
    let q = field
        .order()
        .ok_or(FieldError::Unsupported("cannot enumerate over the rationals"))?;
    let combos = combinations(ambient, dim);
    let field = field.clone();
    let mut combo_idx = 0usize;
    let mut digits: Vec<u64> = Vec::new();
    let mut free_cells: Vec<(usize, usize)> = Vec::new();
    let mut fresh = true;

    Ok(std::iter::from_fn(move || loop {
        if combo_idx >= combos.len() {
            return None;
        }
        let pivots = &combos[combo_idx];
        if fresh {
            free_cells = free_cells_for(ambient, pivots);
            digits = vec![0; free_cells.len()];
            fresh = false;
        }
        let basis = Matrix::from_fn(&field, dim, ambient, |i, j| {
            if pivots[i] == j {
                field.one()
            } else if let Some(k) = free_cells.iter().position(|&(r, c)| (r, c) == (i, j)) {
                field.fin(digits[k])
            } else {
                field.zero()
            }
        });
        let out = Subspace {
            ambient,
            basis,
            pivots: pivots.clone(),
        };
        // Advance the odometer; on wraparound move to the next pivot set.
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                combo_idx += 1;
                fresh = true;
                break;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < q {
                break;
            }
            digits[pos] = 0;
        }
        return Some(out);
    }))
}

/// Free coordinates of the echelon pattern with the given pivot columns:
/// row i may be nonzero at columns past pivots[i] that are not pivots.
fn free_cells_for(ambient: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for j in p + 1..ambient {
            if !pivots.contains(&j) {
                cells.push((i, j));
            }
        }
    }
    cells
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Next lexicographic combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Gram matrix of a quadratic form on r coordinates, by polarization:
/// B(u, v) = (Q(u+v) - Q(u) - Q(v)) / 2. Rational fields only, since the
/// polarization needs division by two and definiteness tests need an order.
pub fn polarized_gram(
    field: &FieldSpec,
    r: usize,
    eval: impl Fn(&[FieldElem]) -> FieldElem,
) -> Matrix {
    assert!(field.is_rational());
    let half = field.from_ratio(1, 2).expect("rational field");
    let unit = |i: usize| -> Vec<FieldElem> {
        let mut v = vec![field.zero(); r];
        v[i] = field.one();
        v
    };
    Matrix::from_fn(field, r, r, |i, j| {
        if i == j {
            eval(&unit(i))
        } else {
            let mut sum = unit(i);
            sum[j] = field.one();
            let polar = field.sub(
                &field.sub(&eval(&sum), &eval(&unit(i))),
                &eval(&unit(j)),
            );
            field.mul(&half, &polar)
        }
    })
}

/// Number of d-dimensional subspaces of F_q^n.
pub fn gaussian_binomial(q: u64, n: u64, d: u64) -> u128 {
    if d > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num = num
            .checked_mul((q as u128).pow((n - i) as u32) - 1)
            .expect("gaussian binomial overflow");
        den = den
            .checked_mul((q as u128).pow((i + 1) as u32) - 1)
            .expect("gaussian binomial overflow");
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn gf(p: u64, n: usize) -> FieldSpec {
        FieldSpec::gf_ext(p, n).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, f: &FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(f, rows, cols, |_, _| match f.order() {
            Some(q) => f.fin(rng.gen_range(0..q)),
            None => f
                .from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9))
                .unwrap(),
        })
    }

    fn random_alternating(rng: &mut ChaCha8Rng, f: &FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = match f.order() {
                    Some(q) => f.fin(rng.gen_range(0..q)),
                    None => f.from_int(rng.gen_range(-9..=9)),
                };
                m.set(i, j, v.clone());
                m.set(j, i, f.neg(&v));
            }
        }
        m
    }

    #[test]
    fn rref_and_kernel_by_hand() {
        let f = gf(5, 1);
        let mut m = Matrix::from_int_rows(&f, &[&[1, 2], &[2, 4]]);
        let pivots = m.rref();
        assert_eq!(pivots, vec![0]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        // Kernel vector (3, 1) normalizes to (1, 2) in echelon form.
        assert_eq!(k.basis().row(0), &[f.fin(1), f.fin(2)]);
        assert!(k.contains(&[f.fin(3), f.fin(1)]));
        assert!(!k.contains(&[f.fin(1), f.fin(1)]));
    }

    #[test]
    fn rank_nullity_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in [gf(2, 1), gf(3, 1), gf(2, 2), gf(3, 2), FieldSpec::rational()] {
            for _ in 0..30 {
                let rows = rng.gen_range(1..6);
                let cols = rng.gen_range(1..6);
                let m = random_matrix(&mut rng, &f, rows, cols);
                let r = m.rank();
                assert_eq!(r + m.kernel().dim(), cols);
                assert_eq!(m.transpose().rank(), r);
            }
        }
    }

    /// The u16 elimination kernel and the generic echelon path are
    /// independent implementations; they must agree.
    #[test]
    fn raw_rank_matches_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for f in [gf(2, 1), gf(3, 1), gf(2, 2), gf(3, 2), gf(2, 3)] {
            let t = f.tables().unwrap();
            for _ in 0..60 {
                let rows = rng.gen_range(1..7);
                let cols = rng.gen_range(1..7);
                let m = random_matrix(&mut rng, &f, rows, cols);
                let generic = m.clone().rref().len();
                let mut raw = m.to_indices().unwrap();
                assert_eq!(gf_rank(t, rows, cols, &mut raw), generic);
            }
        }
    }

    #[test]
    fn matmul_inverse_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for f in [gf(5, 1), gf(2, 2), FieldSpec::rational()] {
            for _ in 0..20 {
                let n = rng.gen_range(1..5);
                let m = random_matrix(&mut rng, &f, n, n);
                let d = m.det();
                match m.inverse() {
                    Some(inv) => {
                        assert!(!d.is_zero());
                        assert_eq!(m.matmul(&inv), Matrix::identity(&f, n));
                        assert_eq!(inv.matmul(&m), Matrix::identity(&f, n));
                    }
                    None => assert!(d.is_zero()),
                }
            }
        }
        let r = FieldSpec::rational();
        let m = Matrix::from_int_rows(&r, &[&[2, 1], &[7, 4]]);
        assert_eq!(m.det(), r.from_int(1));
        let m3 = Matrix::from_int_rows(&r, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(m3.det(), r.from_int(-3));
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for f in [gf(7, 1), FieldSpec::rational()] {
            for _ in 0..15 {
                let n = rng.gen_range(1..5);
                let a = random_matrix(&mut rng, &f, n, n);
                let b = random_matrix(&mut rng, &f, n, n);
                assert_eq!(a.matmul(&b).det(), f.mul(&a.det(), &b.det()));
            }
        }
    }

    /// Reference Pfaffian by recursive expansion along the first row.
    fn pfaffian_oracle(m: &Matrix) -> FieldElem {
        let n = m.rows();
        let f = m.field().clone();
        if n % 2 == 1 {
            return f.zero();
        }
        if n == 0 {
            return f.one();
        }
        let mut acc = f.zero();
        for j in 1..n {
            if m.get(0, j).is_zero() {
                continue;
            }
            let keep: Vec<usize> = (0..n).filter(|&i| i != 0 && i != j).collect();
            let minor = Matrix::from_fn(&f, n - 2, n - 2, |r, c| m.at(keep[r], keep[c]));
            let term = f.mul(m.get(0, j), &pfaffian_oracle(&minor));
            if j % 2 == 1 {
                acc = f.add(&acc, &term);
            } else {
                acc = f.sub(&acc, &term);
            }
        }
        acc
    }

    #[test]
    fn pfaffian_small_cases() {
        let f = gf(3, 1);
        // Alternating form e12 + e34 + e13 on four coordinates.
        let m = Matrix::from_int_rows(
            &f,
            &[&[0, 1, 1, 0], &[-1, 0, 0, 0], &[-1, 0, 0, 1], &[0, 0, -1, 0]],
        );
        assert_eq!(m.pfaffian().unwrap(), f.one());
        // a01*a23 - a02*a13 + a03*a12 on a generic rational matrix.
        let r = FieldSpec::rational();
        let g = Matrix::from_int_rows(
            &r,
            &[
                &[0, 2, 3, 5],
                &[-2, 0, 7, 11],
                &[-3, -7, 0, 13],
                &[-5, -11, -13, 0],
            ],
        );
        assert_eq!(g.pfaffian().unwrap(), r.from_int(2 * 13 - 3 * 11 + 5 * 7));
        let odd = Matrix::zeros(&r, 3, 3);
        assert_eq!(odd.pfaffian().unwrap(), r.zero());
        let not_alt = Matrix::identity(&r, 2);
        assert_eq!(not_alt.pfaffian(), Err(MatrixError::NotAlternating));
    }

    #[test]
    fn pfaffian_matches_expansion_and_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for f in [gf(2, 1), gf(3, 1), gf(7, 1), gf(2, 2), FieldSpec::rational()] {
            for n in [2usize, 4, 6] {
                for _ in 0..8 {
                    let m = random_alternating(&mut rng, &f, n);
                    let pf = m.pfaffian().unwrap();
                    assert_eq!(pf, pfaffian_oracle(&m), "n={n} f={f}");
                    assert_eq!(f.mul(&pf, &pf), m.det(), "pf^2 = det, n={n} f={f}");
                }
            }
        }
    }

    #[test]
    fn pfaffian_congruence_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let r = FieldSpec::rational();
        for _ in 0..10 {
            let a = random_alternating(&mut rng, &r, 4);
            let g = random_matrix(&mut rng, &r, 4, 4);
            let gag = g.matmul(&a).matmul(&g.transpose());
            assert_eq!(
                gag.pfaffian().unwrap(),
                r.mul(&g.det(), &a.pfaffian().unwrap())
            );
        }
    }

    #[test]
    fn subspace_reduce_and_coords() {
        let f = gf(3, 1);
        let s = Subspace::span(
            &f,
            4,
            vec![
                vec![f.fin(1), f.fin(2), f.fin(0), f.fin(1)],
                vec![f.fin(0), f.fin(0), f.fin(1), f.fin(2)],
                vec![f.fin(2), f.fin(1), f.fin(1), f.fin(1)],
            ],
        );
        assert_eq!(s.dim(), 2);
        assert_eq!(s.pivots(), &[0, 2]);
        assert_eq!(s.complement_coords(), vec![1, 3]);
        for r in s.basis_rows() {
            assert!(s.contains(r));
            let c = s.coords_of(r).unwrap();
            assert_eq!(c.len(), 2);
        }
        let v = vec![f.fin(1), f.fin(2), f.fin(1), f.fin(0)];
        assert!(s.contains(&v));
        assert_eq!(s.coords_of(&v).unwrap(), vec![f.fin(1), f.fin(1)]);
        assert!(!s.contains(&[f.fin(0), f.fin(1), f.fin(0), f.fin(0)]));
        // reduce is idempotent and kills pivot coordinates.
        let w = vec![f.fin(2), f.fin(2), f.fin(2), f.fin(2)];
        let red = s.reduce(&w);
        assert!(red[0].is_zero() && red[2].is_zero());
        assert_eq!(s.reduce(&red), red);
    }

    /// Brute-force intersection over GF(2): enumerate every vector of U and
    /// keep those in W.
    #[test]
    fn zassenhaus_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let f = gf(2, 1);
        for _ in 0..40 {
            let n = rng.gen_range(2..6);
            let du = rng.gen_range(1..4);
            let dw = rng.gen_range(1..4);
            let u = random_matrix(&mut rng, &f, du, n).row_space();
            let w = random_matrix(&mut rng, &f, dw, n).row_space();
            let inter = u.intersect(&w);

            let mut members = Vec::new();
            for mask in 0..(1u32 << u.dim()) {
                let mut v = vec![f.zero(); n];
                for (i, row) in u.basis_rows().enumerate() {
                    if mask >> i & 1 == 1 {
                        for (vj, rj) in v.iter_mut().zip(row) {
                            *vj = f.add(vj, rj);
                        }
                    }
                }
                if w.contains(&v) {
                    members.push(v);
                }
            }
            let expected = Subspace::span(&f, n, members);
            assert_eq!(inter, expected);
            // Dimension formula.
            assert_eq!(
                u.dim() + w.dim(),
                u.sum(&w).dim() + inter.dim(),
                "dim formula"
            );
            assert!(inter.is_contained_in(&u) && inter.is_contained_in(&w));
        }
    }

    #[test]
    fn sum_intersect_dimension_formula_gf3() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let f = gf(3, 1);
        for _ in 0..40 {
            let n = rng.gen_range(2..6);
            let du = rng.gen_range(1..4);
            let dw = rng.gen_range(1..4);
            let u = random_matrix(&mut rng, &f, du, n).row_space();
            let w = random_matrix(&mut rng, &f, dw, n).row_space();
            assert_eq!(u.dim() + w.dim(), u.sum(&w).dim() + u.intersect(&w).dim());
        }
    }

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(3, 6, 1), 364);
        assert_eq!(gaussian_binomial(3, 6, 2), 11011);
        assert_eq!(gaussian_binomial(3, 6, 3), 33880);
        assert_eq!(gaussian_binomial(4, 6, 2), 93093);
        assert_eq!(gaussian_binomial(2, 4, 2), 35);
        assert_eq!(gaussian_binomial(2, 3, 1), 7);
        assert_eq!(gaussian_binomial(5, 4, 4), 1);
        assert_eq!(gaussian_binomial(5, 4, 5), 0);
    }

    #[test]
    fn subspace_enumeration_is_complete_and_distinct() {
        for (p, n, ambient, dim) in [
            (2u64, 1usize, 4usize, 2usize),
            (2, 1, 3, 1),
            (3, 1, 4, 2),
            (2, 2, 3, 1),
            (3, 1, 6, 1),
        ] {
            let f = gf(p, n);
            let q = f.order().unwrap();
            let expected = gaussian_binomial(q, ambient as u64, dim as u64);
            let mut seen = HashSet::new();
            let mut count = 0u128;
            for s in enumerate_subspaces(&f, ambient, dim).unwrap() {
                count += 1;
                assert_eq!(s.dim(), dim);
                // Canonical: re-spanning the basis reproduces the subspace.
                let respan = Subspace::span(
                    &f,
                    ambient,
                    s.basis_rows().map(|r| r.to_vec()).collect(),
                );
                assert_eq!(respan, s);
                let key: Vec<String> =
                    s.basis_rows().map(|r| format!("{r:?}")).collect();
                assert!(seen.insert(key), "duplicate subspace");
            }
            assert_eq!(count, expected, "q={q} n={ambient} d={dim}");
        }
    }

    #[test]
    fn enumeration_order_is_stable() {
        let f = gf(2, 1);
        let first: Vec<_> = enumerate_subspaces(&f, 3, 1)
            .unwrap()
            .map(|s| s.basis().row(0).to_vec())
            .collect();
        // Pivot 0 first with free tail in odometer order, then pivots 1, 2.
        let e = |a: u64, b: u64, c: u64| vec![f.fin(a), f.fin(b), f.fin(c)];
        assert_eq!(
            first,
            vec![
                e(1, 0, 0),
                e(1, 0, 1),
                e(1, 1, 0),
                e(1, 1, 1),
                e(0, 1, 0),
                e(0, 1, 1),
                e(0, 0, 1),
            ]
        );
    }
}
