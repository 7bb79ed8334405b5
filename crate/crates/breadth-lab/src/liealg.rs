//! Lie algebras given by structure constants, and the breadth machinery.
//!
//! The breadth of x in L is rank(ad x). Since ad x kills the center and
//! ad_{x+z} = ad_x for central z, the breadth function factors through
//! L/Z(L); the exhaustive scan therefore walks coset representatives built
//! from a complement of the center, which keeps the search space at
//! q^(dim L - dim Z) instead of q^(dim L).

use crate::field::{FieldElem, FieldError, FieldSpec};
use crate::matrix::{gf_rank, Matrix, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("bracket [e{i}, e{i}] is nonzero")]
    NotAlternating { i: usize },
    #[error("antisymmetry fails on ([e{i}, e{j}], [e{j}, e{i}])")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("Jacobi identity fails on basis triple (e{i}, e{j}, e{k})")]
    JacobiFails { i: usize, j: usize, k: usize },
    #[error("subspace is not an ideal")]
    NotAnIdeal,
    #[error("scan needs {needed} coset representatives, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// How a breadth type was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BreadthScan {
    /// Every coset of the center was visited; the type is exact.
    Exhaustive { cosets: u128 },
    /// A fixed-seed random sample; the breadth list is a lower set.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreadthTypeReport {
    /// Distinct breadths in increasing order; 0 is always present.
    pub breadths: Vec<usize>,
    pub scan: BreadthScan,
    /// True for exhaustive scans only.
    pub complete: bool,
    /// Cheap a priori bound: min(dim of the derived subalgebra,
    /// codimension of the center).
    pub max_possible: usize,
}

impl BreadthTypeReport {
    pub fn display(&self) -> String {
        let inner: Vec<String> = self.breadths.iter().map(|b| b.to_string()).collect();
        format!("({})", inner.join(", "))
    }
}

pub const DEFAULT_SCAN_BUDGET: u64 = 1 << 20;

/// Finite dimensional Lie algebra over a fixed field, stored as dense
/// structure constants: [e_i, e_j] = sum_k c[i][j][k] e_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    field: FieldSpec,
    dim: usize,
    sc: Vec<FieldElem>,
}

impl LieAlgebra {
    /// The abelian algebra of the given dimension; add brackets afterwards.
    pub fn abelian(field: &FieldSpec, dim: usize) -> LieAlgebra {
        LieAlgebra {
            field: field.clone(),
            dim,
            sc: vec![field.zero(); dim * dim * dim],
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn sc(&self, i: usize, j: usize, k: usize) -> &FieldElem {
        &self.sc[self.idx(i, j, k)]
    }

    pub(crate) fn set_sc(&mut self, i: usize, j: usize, k: usize, v: FieldElem) {
        let at = self.idx(i, j, k);
        self.sc[at] = v;
    }

    /// Defines [e_i, e_j] = sum of coeff * e_k and the antisymmetric mirror.
    pub fn define_bracket(&mut self, i: usize, j: usize, coeffs: &[(usize, FieldElem)]) {
        assert!(i != j, "alternating bracket: [e_i, e_i] = 0");
        for k in 0..self.dim {
            self.set_sc(i, j, k, self.field.zero());
            self.set_sc(j, i, k, self.field.zero());
        }
        for (k, c) in coeffs {
            let neg = self.field.neg(c);
            self.set_sc(i, j, *k, c.clone());
            self.set_sc(j, i, *k, neg);
        }
    }

    /// Integer convenience for hand-written tables.
    pub fn define_bracket_int(&mut self, i: usize, j: usize, coeffs: &[(usize, i64)]) {
        let lifted: Vec<(usize, FieldElem)> = coeffs
            .iter()
            .map(|(k, c)| (*k, self.field.from_int(*c)))
            .collect();
        self.define_bracket(i, j, &lifted);
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<FieldElem> {
        (0..self.dim).map(|k| self.sc(i, j, k).clone()).collect()
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = f.mul(xi, yj);
                for (k, slot) in out.iter_mut().enumerate() {
                    let s = self.sc(i, j, k);
                    if !s.is_zero() {
                        *slot = f.add(slot, &f.mul(&c, s));
                    }
                }
            }
        }
        out
    }

    /// Checks that the table defines a Lie algebra: alternating,
    /// antisymmetric, and Jacobi on all basis triples.
    pub fn validate(&self) -> Result<(), LieError> {
        let f = &self.field;
        for i in 0..self.dim {
            for k in 0..self.dim {
                if !self.sc(i, i, k).is_zero() {
                    return Err(LieError::NotAlternating { i });
                }
            }
        }
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in 0..self.dim {
                    if *self.sc(i, j, k) != f.neg(self.sc(j, i, k)) {
                        return Err(LieError::NotAntisymmetric { i, j });
                    }
                }
            }
        }
        let basis = |i: usize| -> Vec<FieldElem> {
            let mut v = vec![f.zero(); self.dim];
            v[i] = f.one();
            v
        };
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let a = self.bracket(&self.bracket_basis(i, j), &basis(k));
                    let b = self.bracket(&self.bracket_basis(j, k), &basis(i));
                    let c = self.bracket(&self.bracket_basis(k, i), &basis(j));
                    let sum: Vec<FieldElem> = a
                        .iter()
                        .zip(&b)
                        .zip(&c)
                        .map(|((x, y), z)| f.add(&f.add(x, y), z))
                        .collect();
                    if sum.iter().any(|v| !v.is_zero()) {
                        return Err(LieError::JacobiFails { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of ad x: column j holds [x, e_j].
    pub fn ad_matrix(&self, x: &[FieldElem]) -> Matrix {
        assert_eq!(x.len(), self.dim);
        let f = &self.field;
        let mut m = Matrix::zeros(f, self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let s = self.sc(i, j, k);
                    if s.is_zero() {
                        continue;
                    }
                    let v = f.add(m.get(k, j), &f.mul(xi, s));
                    m.set(k, j, v);
                }
            }
        }
        m
    }

    /// rank(ad x).
    pub fn breadth(&self, x: &[FieldElem]) -> usize {
        self.ad_matrix(x).rank()
    }

    pub fn center(&self) -> Subspace {
        // x is central iff [x, e_j] = 0 for all j; stack the maps
        // x -> [x, e_j] and take the common kernel.
        let f = &self.field;
        if self.dim == 0 {
            return Subspace::full(f, 0);
        }
        let mut blocks = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            blocks.push(Matrix::from_fn(f, self.dim, self.dim, |k, i| {
                self.sc(i, j, k).clone()
            }));
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Matrix::vstack(&refs).kernel()
    }

    /// Span of [A, B] for two subspaces.
    pub fn product_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut spans = Vec::new();
        for ra in a.basis_rows() {
            for rb in b.basis_rows() {
                spans.push(self.bracket(ra, rb));
            }
        }
        Subspace::span(&self.field, self.dim, spans)
    }

    /// Derived subalgebra [L, L].
    pub fn derived(&self) -> Subspace {
        let full = Subspace::full(&self.field, self.dim);
        self.product_span(&full, &full)
    }

    /// Terms L^1 = L, L^{s+1} = [L, L^s], listed until they stabilize.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = Subspace::full(&self.field, self.dim);
        let mut series = vec![full.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.product_span(&full, last);
            if next.dim() == last.dim() {
                break;
            }
            series.push(next);
            if series.last().unwrap().dim() == 0 {
                break;
            }
        }
        series
    }

    /// Nilpotency class: least c with L^{c+1} = 0. None when the lower
    /// central series stabilizes above zero. The zero algebra has class 0,
    /// nonzero abelian algebras class 1.
    pub fn nilpotency_class(&self) -> Option<usize> {
        if self.dim == 0 {
            return Some(0);
        }
        let series = self.lower_central_series();
        if series.last().unwrap().dim() == 0 {
            Some(series.len() - 1)
        } else {
            None
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.sc.iter().all(|c| c.is_zero())
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        assert_eq!(s.ambient_dim(), self.dim);
        let full = Subspace::full(&self.field, self.dim);
        self.product_span(&full, s).is_contained_in(s)
    }

    /// Quotient by an ideal. Returns the quotient algebra on the basis of
    /// complement coordinates of the ideal, plus the projection matrix
    /// sending old coordinates to quotient coordinates.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(LieAlgebra, Matrix), LieError> {
        if !self.is_ideal(ideal) {
            return Err(LieError::NotAnIdeal);
        }
        let f = &self.field;
        let comp = ideal.complement_coords();
        let qdim = comp.len();
        let mut proj = Matrix::zeros(f, qdim, self.dim);
        for j in 0..self.dim {
            let mut e = vec![f.zero(); self.dim];
            e[j] = f.one();
            let red = ideal.reduce(&e);
            for (i2, &c) in comp.iter().enumerate() {
                proj.set(i2, j, red[c].clone());
            }
        }
        let mut q = LieAlgebra::abelian(f, qdim);
        for a in 0..qdim {
            for b in a + 1..qdim {
                let w = self.bracket_basis(comp[a], comp[b]);
                let red = ideal.reduce(&w);
                let coeffs: Vec<(usize, FieldElem)> = comp
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| !red[c].is_zero())
                    .map(|(k2, &c)| (k2, red[c].clone()))
                    .collect();
                q.define_bracket(a, b, &coeffs);
            }
        }
        debug_assert_eq!(q.validate(), Ok(()));
        Ok((q, proj))
    }

    /// Block-diagonal sum of two bracket tables.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        assert_eq!(self.field, other.field);
        let n1 = self.dim;
        let n = n1 + other.dim;
        let mut out = LieAlgebra::abelian(&self.field, n);
        for i in 0..n1 {
            for j in 0..n1 {
                for k in 0..n1 {
                    out.set_sc(i, j, k, self.sc(i, j, k).clone());
                }
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                for k in 0..other.dim {
                    out.set_sc(n1 + i, n1 + j, n1 + k, other.sc(i, j, k).clone());
                }
            }
        }
        out
    }

    pub fn breadth_type(&self) -> Result<BreadthTypeReport, LieError> {
        self.breadth_type_with_budget(DEFAULT_SCAN_BUDGET)
    }

    /// Exact breadth type by exhaustive scan over coset representatives of
    /// the center. Finite fields only; errs rather than exceed the budget.
    pub fn breadth_type_with_budget(&self, budget: u64) -> Result<BreadthTypeReport, LieError> {
        let q = self.field.order().ok_or(FieldError::Unsupported(
            "exhaustive breadth scan needs a finite field",
        ))?;
        let center = self.center();
        let comp = center.complement_coords();
        let d = comp.len();
        let needed = (q as u128)
            .checked_pow(d as u32)
            .unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(LieError::BudgetExceeded { needed, budget });
        }
        let max_possible = self.derived().dim().min(d);
        let dim = self.dim;
        let t = self.field.tables().expect("finite field has tables");

        // blocks[c][k * d + j2] = coefficient of e_k in [e_comp[c], e_comp[j2]]:
        // ad of a coset representative, restricted to complement columns.
        // Center-pivot columns of ad x are combinations of the complement
        // columns, so dropping them never changes the rank.
        let blocks: Vec<Vec<u16>> = comp
            .iter()
            .map(|&c| {
                let mut b = vec![0u16; dim * d];
                for (j2, &cj) in comp.iter().enumerate() {
                    for k in 0..dim {
                        if let FieldElem::Fin(v) = self.sc(c, cj, k) {
                            b[k * d + j2] = *v;
                        }
                    }
                }
                b
            })
            .collect();

        let total = needed as u64;
        let chunk: u64 = 4096;
        let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
        let seen = starts
            .par_iter()
            .map(|&start| {
                let mut local = vec![0u64; dim / 64 + 1];
                let mut buf = vec![0u16; dim * d];
                let mut digits = vec![0u16; d];
                for idx in start..(start + chunk).min(total) {
                    let mut v = idx;
                    for dslot in digits.iter_mut() {
                        *dslot = (v % q) as u16;
                        v /= q;
                    }
                    buf.iter_mut().for_each(|x| *x = 0);
                    for (c, &digit) in digits.iter().enumerate() {
                        if digit == 0 {
                            continue;
                        }
                        for (slot, &b) in buf.iter_mut().zip(&blocks[c]) {
                            if b != 0 {
                                *slot = t.add(*slot, t.mul(digit, b));
                            }
                        }
                    }
                    let r = gf_rank(t, dim, d, &mut buf);
                    local[r / 64] |= 1u64 << (r % 64);
                }
                local
            })
            .reduce(
                || vec![0u64; dim / 64 + 1],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x |= y;
                    }
                    a
                },
            );

        let breadths: Vec<usize> = (0..=dim)
            .filter(|&r| seen[r / 64] >> (r % 64) & 1 == 1)
            .collect();
        Ok(BreadthTypeReport {
            breadths,
            scan: BreadthScan::Exhaustive { cosets: needed },
            complete: true,
            max_possible,
        })
    }

    /// Fixed-seed random sample of breadths. Works over any field; the
    /// result is a subset of the true breadth type, never a superset.
    pub fn breadth_type_sampled(&self, samples: u64, seed: u64) -> BreadthTypeReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = &self.field;
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(0usize);
        for _ in 0..samples {
            let x: Vec<FieldElem> = (0..self.dim)
                .map(|_| match f.order() {
                    Some(q) => f.fin(rng.gen_range(0..q)),
                    None => f.from_int(rng.gen_range(-20..=20)),
                })
                .collect();
            seen.insert(self.breadth(&x));
        }
        let center_codim = self.dim - self.center().dim();
        BreadthTypeReport {
            breadths: seen.into_iter().collect(),
            scan: BreadthScan::Sampled { samples, seed },
            complete: false,
            max_possible: self.derived().dim().min(center_codim),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, n: usize) -> FieldSpec {
        FieldSpec::gf_ext(p, n).unwrap()
    }

    /// Heisenberg algebra of dimension 2m+1 on (x1, y1, ..., xm, ym, z).
    fn heisenberg(f: &FieldSpec, m: usize) -> LieAlgebra {
        let mut a = LieAlgebra::abelian(f, 2 * m + 1);
        for i in 0..m {
            a.define_bracket_int(2 * i, 2 * i + 1, &[(2 * m, 1)]);
        }
        a.validate().unwrap();
        a
    }

    fn sl2(f: &FieldSpec) -> LieAlgebra {
        // basis (e, h, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h
        let mut a = LieAlgebra::abelian(f, 3);
        a.define_bracket_int(1, 0, &[(0, 2)]);
        a.define_bracket_int(1, 2, &[(2, -2)]);
        a.define_bracket_int(0, 2, &[(1, 1)]);
        a.validate().unwrap();
        a
    }

    /// Free two-step algebra on three generators: dim 6, wedge coordinates
    /// e3 = x0^x1, e4 = x0^x2, e5 = x1^x2.
    fn free_two_step_3(f: &FieldSpec) -> LieAlgebra {
        let mut a = LieAlgebra::abelian(f, 6);
        a.define_bracket_int(0, 1, &[(3, 1)]);
        a.define_bracket_int(0, 2, &[(4, 1)]);
        a.define_bracket_int(1, 2, &[(5, 1)]);
        a.validate().unwrap();
        a
    }

    /// Class three algebra on (x0, x1, y, z1, z2): [x0,x1] = y,
    /// [x0,y] = z1, [x1,y] = z2.
    fn five_dim_three_step(f: &FieldSpec) -> LieAlgebra {
        let mut a = LieAlgebra::abelian(f, 5);
        a.define_bracket_int(0, 1, &[(2, 1)]);
        a.define_bracket_int(0, 2, &[(3, 1)]);
        a.define_bracket_int(1, 2, &[(4, 1)]);
        a.validate().unwrap();
        a
    }

    #[test]
    fn validate_rejects_bad_tables() {
        let f = gf(5, 1);
        // [e0,e1] = e0 with [e0,e2] = e1 breaks Jacobi on (0,1,2).
        let mut bad = LieAlgebra::abelian(&f, 3);
        bad.define_bracket_int(0, 1, &[(0, 1)]);
        bad.define_bracket_int(0, 2, &[(1, 1)]);
        assert_eq!(bad.validate(), Err(LieError::JacobiFails { i: 0, j: 1, k: 2 }));

        let mut asym = LieAlgebra::abelian(&f, 2);
        asym.set_sc(0, 1, 0, f.one());
        assert_eq!(asym.validate(), Err(LieError::NotAntisymmetric { i: 0, j: 1 }));

        let mut alt = LieAlgebra::abelian(&f, 2);
        alt.set_sc(1, 1, 0, f.one());
        assert_eq!(alt.validate(), Err(LieError::NotAlternating { i: 1 }));

        // A solvable non-nilpotent table is still a valid Lie algebra.
        let mut ax = LieAlgebra::abelian(&f, 2);
        ax.define_bracket_int(0, 1, &[(0, 1)]);
        assert_eq!(ax.validate(), Ok(()));
        assert_eq!(ax.nilpotency_class(), None);
    }

    #[test]
    fn heisenberg_invariants() {
        for q in [(2u64, 1usize), (3, 1), (2, 2), (5, 1)] {
            let f = gf(q.0, q.1);
            for m in 1..=3 {
                let h = heisenberg(&f, m);
                assert_eq!(h.center().dim(), 1, "center of H_{m}");
                assert_eq!(h.derived().dim(), 1);
                assert_eq!(h.nilpotency_class(), Some(2));
                let bt = h.breadth_type().unwrap();
                assert_eq!(bt.breadths, vec![0, 1], "q={q:?} m={m}");
                assert!(bt.complete);
            }
        }
    }

    #[test]
    fn sl2_breadth_type_depends_on_characteristic() {
        for p in [3u64, 5, 7] {
            let f = gf(p, 1);
            let a = sl2(&f);
            assert_eq!(a.breadth_type().unwrap().breadths, vec![0, 2], "p={p}");
            assert_eq!(a.nilpotency_class(), None);
            assert_eq!(a.center().dim(), 0);
        }
        // In characteristic two [h, -] vanishes, the algebra is nilpotent
        // of class two and every nonzero ad has rank one.
        let f2 = gf(2, 1);
        let a2 = sl2(&f2);
        assert_eq!(a2.nilpotency_class(), Some(2));
        assert_eq!(a2.center().dim(), 1);
        assert_eq!(a2.breadth_type().unwrap().breadths, vec![0, 1]);
    }

    #[test]
    fn five_dim_three_step_invariants() {
        for (p, n) in [(2u64, 1usize), (3, 1), (2, 2), (5, 1)] {
            let f = gf(p, n);
            let a = five_dim_three_step(&f);
            assert_eq!(a.nilpotency_class(), Some(3));
            assert_eq!(a.center().dim(), 2);
            assert_eq!(a.derived().dim(), 3);
            let series = a.lower_central_series();
            let dims: Vec<usize> = series.iter().map(|s| s.dim()).collect();
            assert_eq!(dims, vec![5, 3, 2, 0]);
            assert_eq!(a.breadth_type().unwrap().breadths, vec![0, 2]);
        }
        let r = FieldSpec::rational();
        let a = five_dim_three_step(&r);
        assert_eq!(a.nilpotency_class(), Some(3));
        let bt = a.breadth_type_sampled(200, 7);
        assert_eq!(bt.breadths, vec![0, 2]);
        assert!(!bt.complete);
    }

    /// Independent oracle: walk every vector of the algebra and take the
    /// rank of the full ad matrix through the generic path.
    fn breadth_type_brute(a: &LieAlgebra) -> Vec<usize> {
        let f = a.field();
        let q = f.order().unwrap();
        let dim = a.dim();
        let total = q.pow(dim as u32);
        let mut seen = std::collections::BTreeSet::new();
        for idx in 0..total {
            let mut v = idx;
            let x: Vec<FieldElem> = (0..dim)
                .map(|_| {
                    let c = f.fin(v % q);
                    v /= q;
                    c
                })
                .collect();
            seen.insert(a.ad_matrix(&x).clone().rref().len());
        }
        seen.into_iter().collect()
    }

    #[test]
    fn exhaustive_scan_matches_brute_force() {
        let cases: Vec<LieAlgebra> = vec![
            heisenberg(&gf(2, 1), 1),
            heisenberg(&gf(3, 1), 1),
            sl2(&gf(3, 1)),
            sl2(&gf(2, 1)),
            five_dim_three_step(&gf(2, 1)),
            free_two_step_3(&gf(2, 1)),
            free_two_step_3(&gf(3, 1)),
            LieAlgebra::abelian(&gf(3, 1), 3),
            LieAlgebra::abelian(&gf(2, 1), 0),
        ];
        for a in cases {
            let fast = a.breadth_type().unwrap();
            assert_eq!(
                fast.breadths,
                breadth_type_brute(&a),
                "dim={} field={}",
                a.dim(),
                a.field()
            );
            assert!(fast.breadths.iter().all(|&b| b <= fast.max_possible || b == 0));
        }
    }

    #[test]
    fn quotient_of_free_two_step() {
        let f = gf(3, 1);
        let a = free_two_step_3(&f);
        // Kill the single wedge coordinate x0^x1.
        let mut gen = vec![f.zero(); 6];
        gen[3] = f.one();
        let ideal = Subspace::span(&f, 6, vec![gen]);
        let (q, proj) = a.quotient(&ideal).unwrap();
        assert_eq!(q.dim(), 5);
        assert_eq!(q.breadth_type().unwrap().breadths, vec![0, 1, 2]);

        // The projection is a homomorphism of Lie algebras.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let x: Vec<FieldElem> = (0..6).map(|_| f.fin(rng.gen_range(0..3))).collect();
            let y: Vec<FieldElem> = (0..6).map(|_| f.fin(rng.gen_range(0..3))).collect();
            let lhs = proj.apply(&a.bracket(&x, &y));
            let rhs = q.bracket(&proj.apply(&x), &proj.apply(&y));
            assert_eq!(lhs, rhs);
        }

        // A random line in the generator span is not an ideal.
        let mut bad = vec![f.zero(); 6];
        bad[0] = f.one();
        let not_ideal = Subspace::span(&f, 6, vec![bad]);
        assert_eq!(
            a.quotient(&not_ideal).err(),
            Some(LieError::NotAnIdeal)
        );
    }

    #[test]
    fn budget_is_enforced() {
        let f = gf(5, 1);
        let a = free_two_step_3(&f);
        // codim of center is 3, so the scan needs 125 representatives.
        let err = a.breadth_type_with_budget(100).unwrap_err();
        assert_eq!(
            err,
            LieError::BudgetExceeded {
                needed: 125,
                budget: 100
            }
        );
        assert!(a.breadth_type_with_budget(125).is_ok());
    }

    #[test]
    fn sampled_mode_is_a_lower_set() {
        let f = gf(3, 1);
        let h = heisenberg(&f, 2);
        let s = h.breadth_type_sampled(100, 42);
        assert!(!s.complete);
        assert_eq!(s.breadths, vec![0, 1]);
        assert_eq!(s.scan, BreadthScan::Sampled { samples: 100, seed: 42 });
        // Determinism: the same seed gives the same report.
        assert_eq!(h.breadth_type_sampled(100, 42), s);
    }

    #[test]
    fn direct_sum_with_abelian_keeps_breadth_type() {
        let f = gf(3, 1);
        let h = heisenberg(&f, 1);
        let sum = h.direct_sum(&LieAlgebra::abelian(&f, 2));
        sum.validate().unwrap();
        assert_eq!(sum.dim(), 5);
        assert_eq!(sum.center().dim(), 3);
        assert_eq!(sum.breadth_type().unwrap().breadths, vec![0, 1]);
        assert_eq!(sum.nilpotency_class(), Some(2));
    }

    #[test]
    fn ad_matrix_and_breadth_agree_with_bracket() {
        let f = gf(7, 1);
        let a = five_dim_three_step(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let x: Vec<FieldElem> = (0..5).map(|_| f.fin(rng.gen_range(0..7))).collect();
            let m = a.ad_matrix(&x);
            for j in 0..5 {
                let mut e = vec![f.zero(); 5];
                e[j] = f.one();
                assert_eq!(m.col(j), a.bracket(&x, &e));
            }
            assert!(a.breadth(&x) <= 2);
        }
    }
}
