//! Bivectors: the degree-two exterior power of the generator space.
//!
//! A two-step algebra on m+1 generators has its derived subalgebra spanned
//! by wedge coordinates e_i ^ e_j, ordered lexicographically by (i, j) with
//! i < j. A bivector is decomposable (a pure wedge u ^ v) exactly when its
//! alternating matrix has rank at most two; an ideal of wedge coordinates is
//! bracket-free when it contains no nonzero decomposable element.

use crate::field::{FieldElem, FieldSpec};
use crate::matrix::{gf_rank, Matrix, Subspace};
use std::fmt;

/// Dimension of the wedge space on n generators: n choose 2.
pub fn wedge_dim(n: usize) -> usize {
    n * (n - 1) / 2
}

/// All index pairs (i, j), i < j, in the canonical lexicographic order.
pub fn wedge_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(wedge_dim(n));
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// Position of e_i ^ e_j in the canonical order; requires i < j.
pub fn wedge_index(n: usize, i: usize, j: usize) -> usize {
    assert!(i < j && j < n, "need i < j < n");
    // Pairs starting at 0..i occupy (n-1) + (n-2) + ... + (n-i) slots.
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Element of the second exterior power of F^{m+1}, stored in wedge
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bivector {
    field: FieldSpec,
    m_plus_1: usize,
    coords: Vec<FieldElem>,
}

impl fmt::Display for Bivector {
    /// Lists nonzero terms like "e0^e1 + 2 e2^e3"; zero prints "0".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, (i, j)) in wedge_pairs(self.m_plus_1).into_iter().enumerate() {
            let c = &self.coords[idx];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            if *c == self.field.one() {
                write!(f, "e{i}^e{j}")?;
            } else {
                write!(f, "{c} e{i}^e{j}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Bivector {
    pub fn zero(field: &FieldSpec, m_plus_1: usize) -> Bivector {
        Bivector {
            field: field.clone(),
            m_plus_1,
            coords: vec![field.zero(); wedge_dim(m_plus_1)],
        }
    }

    pub fn from_coords(field: &FieldSpec, m_plus_1: usize, coords: Vec<FieldElem>) -> Bivector {
        assert_eq!(coords.len(), wedge_dim(m_plus_1));
        Bivector {
            field: field.clone(),
            m_plus_1,
            coords,
        }
    }

    /// u ^ v with coordinates u_i v_j - u_j v_i.
    pub fn wedge(field: &FieldSpec, u: &[FieldElem], v: &[FieldElem]) -> Bivector {
        assert_eq!(u.len(), v.len());
        let n = u.len();
        let coords = wedge_pairs(n)
            .into_iter()
            .map(|(i, j)| field.sub(&field.mul(&u[i], &v[j]), &field.mul(&u[j], &v[i])))
            .collect();
        Bivector::from_coords(field, n, coords)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn generators(&self) -> usize {
        self.m_plus_1
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn coord(&self, i: usize, j: usize) -> &FieldElem {
        &self.coords[wedge_index(self.m_plus_1, i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Bivector) -> Bivector {
        assert_eq!(self.m_plus_1, other.m_plus_1);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Bivector::from_coords(&self.field, self.m_plus_1, coords)
    }

    pub fn scale(&self, c: &FieldElem) -> Bivector {
        let coords = self.coords.iter().map(|a| self.field.mul(c, a)).collect();
        Bivector::from_coords(&self.field, self.m_plus_1, coords)
    }

    /// The alternating matrix with entry (i, j) equal to the coefficient of
    /// e_i ^ e_j.
    pub fn to_skew(&self) -> Matrix {
        let n = self.m_plus_1;
        let f = &self.field;
        let mut m = Matrix::zeros(f, n, n);
        for (idx, (i, j)) in wedge_pairs(n).into_iter().enumerate() {
            m.set(i, j, self.coords[idx].clone());
            m.set(j, i, f.neg(&self.coords[idx]));
        }
        m
    }

    pub fn from_skew(m: &Matrix) -> Bivector {
        assert!(m.is_alternating(), "matrix is not alternating");
        let n = m.rows();
        let coords = wedge_pairs(n).into_iter().map(|(i, j)| m.at(i, j)).collect();
        Bivector::from_coords(m.field(), n, coords)
    }

    pub fn rank(&self) -> usize {
        self.to_skew().rank()
    }

    /// Pure wedges are the bivectors of rank at most two; the zero bivector
    /// counts as decomposable.
    pub fn is_decomposable(&self) -> bool {
        self.rank() <= 2
    }

    /// Writes a nonzero decomposable bivector as u ^ v. If M is alternating
    /// of rank two with M[p][s] != 0, then M = c^{-1} (col_p ^ col_s) for
    /// c = M[p][s], so the factors come straight from two columns.
    pub fn decompose(&self) -> Option<(Vec<FieldElem>, Vec<FieldElem>)> {
        if self.is_zero() || !self.is_decomposable() {
            return None;
        }
        let m = self.to_skew();
        let f = &self.field;
        let n = self.m_plus_1;
        let (p, s) = wedge_pairs(n)
            .into_iter()
            .find(|&(i, j)| !m.get(i, j).is_zero())
            .expect("nonzero bivector has a nonzero coordinate");
        let c = f.inv(m.get(p, s)).expect("pivot is nonzero");
        let u: Vec<FieldElem> = m.col(p).iter().map(|x| f.mul(&c, x)).collect();
        let v = m.col(s);
        debug_assert_eq!(Bivector::wedge(f, &u, &v), *self);
        Some((u, v))
    }

    /// Push forward along a linear map of the generator space:
    /// u ^ v goes to (Lu) ^ (Lv), i.e. the skew matrix maps to L M L^T.
    pub fn apply_linear(&self, l: &Matrix) -> Bivector {
        assert_eq!(l.rows(), self.m_plus_1);
        assert_eq!(l.cols(), self.m_plus_1);
        Bivector::from_skew(&l.matmul(&self.to_skew()).matmul(&l.transpose()))
    }
}

/// Matrix of the induced map on wedge coordinates: column (i, j) holds the
/// wedge coordinates of (L e_i) ^ (L e_j). Functorial: the matrix of a
/// composite is the product of the matrices.
pub fn lambda2_matrix(l: &Matrix) -> Matrix {
    assert_eq!(l.rows(), l.cols());
    let n = l.rows();
    let f = l.field();
    let d = wedge_dim(n);
    let pairs = wedge_pairs(n);
    let mut out = Matrix::zeros(f, d, d);
    for (col, &(i, j)) in pairs.iter().enumerate() {
        let w = Bivector::wedge(f, &l.col(i), &l.col(j));
        for row in 0..d {
            out.set(row, col, w.coords()[row].clone());
        }
    }
    out
}

/// Outcome of the bracket-free decision for an ideal of wedge coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreeIdealStatus {
    /// No nonzero member is decomposable.
    Free,
    /// Some nonzero member is a pure wedge; the witness is that member.
    HasDecomposable { witness: Bivector },
    /// Could not be decided with the implemented criteria (rational ideals
    /// whose Pfaffian form is not definite, or more than four generators
    /// over the rationals).
    Undetermined,
}

/// Decides whether an ideal (a subspace of wedge coordinates on m+1
/// generators) contains a nonzero decomposable bivector.
///
/// Finite fields: exhaustive scan of projective representatives, so the
/// answer is always definite. Rationals with four generators: a nonzero
/// bivector is decomposable exactly when its Pfaffian vanishes, and the
/// Pfaffian is a quadratic form on the ideal; a definite form has no
/// nontrivial rational zero, which proves freeness. Indefinite rational
/// forms are reported as undetermined rather than guessed.
pub fn bracket_free(m_plus_1: usize, ideal: &Subspace) -> FreeIdealStatus {
    let d = wedge_dim(m_plus_1);
    assert_eq!(ideal.ambient_dim(), d, "ideal lives in wedge coordinates");
    let f = ideal.field().clone();
    let r = ideal.dim();
    if r == 0 {
        return FreeIdealStatus::Free;
    }

    if let Some(q) = f.order() {
        let t = f.tables().unwrap();
        let rows: Vec<Vec<u16>> = ideal
            .basis()
            .to_indices()
            .unwrap()
            .chunks(d)
            .map(|c| c.to_vec())
            .collect();
        let pairs = wedge_pairs(m_plus_1);
        let mut digits = vec![0u16; r];
        // Projective representatives: leading coefficient 1, earlier
        // coefficients 0, later coefficients free.
        for lead in 0..r {
            let free = r - lead - 1;
            let count = q.pow(free as u32);
            for mut v in 0..count {
                digits.iter_mut().for_each(|x| *x = 0);
                digits[lead] = 1;
                for slot in lead + 1..r {
                    digits[slot] = (v % q) as u16;
                    v /= q;
                }
                let mut combo = vec![0u16; d];
                for (di, row) in digits.iter().zip(&rows) {
                    if *di == 0 {
                        continue;
                    }
                    for (slot, &x) in combo.iter_mut().zip(row) {
                        if x != 0 {
                            *slot = t.add(*slot, t.mul(*di, x));
                        }
                    }
                }
                let mut skew = vec![0u16; m_plus_1 * m_plus_1];
                for (idx, &(i, j)) in pairs.iter().enumerate() {
                    skew[i * m_plus_1 + j] = combo[idx];
                    skew[j * m_plus_1 + i] = t.neg(combo[idx]);
                }
                if gf_rank(t, m_plus_1, m_plus_1, &mut skew) <= 2 {
                    let coords = combo.into_iter().map(FieldElem::Fin).collect();
                    let witness = Bivector::from_coords(&f, m_plus_1, coords);
                    debug_assert!(witness.is_decomposable() && !witness.is_zero());
                    return FreeIdealStatus::HasDecomposable { witness };
                }
            }
        }
        return FreeIdealStatus::Free;
    }

    if m_plus_1 != 4 {
        return FreeIdealStatus::Undetermined;
    }
    // Gram matrix of the Pfaffian form on the ideal, by polarization.
    let pf_of = |v: &[FieldElem]| -> FieldElem {
        Bivector::from_coords(&f, 4, v.to_vec())
            .to_skew()
            .pfaffian()
            .expect("wedge coordinates give an alternating matrix")
    };
    let basis: Vec<Vec<FieldElem>> = ideal.basis_rows().map(|r| r.to_vec()).collect();
    let gram = crate::matrix::polarized_gram(&f, r, |c| {
        let mut combo = vec![f.zero(); d];
        for (ci, row) in c.iter().zip(&basis) {
            for (slot, x) in combo.iter_mut().zip(row) {
                *slot = f.add(slot, &f.mul(ci, x));
            }
        }
        pf_of(&combo)
    });
    if gram.is_definite() {
        FreeIdealStatus::Free
    } else {
        FreeIdealStatus::Undetermined
    }
}
