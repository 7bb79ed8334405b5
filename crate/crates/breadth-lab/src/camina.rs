//! Camina conditions and nonsingular spans of alternating matrices.
//!
//! A Lie algebra L with 0 < dim L' < dim L is Camina when [x, L] = L' for
//! every x outside L'. For class-two stem algebras this is equivalent to a
//! linear algebra condition: writing the bracket through structure matrices
//! X_1..X_r over a generator complement, L is Camina exactly when every
//! nonzero linear combination of the X_t is nonsingular. That reduction is
//! what connects Camina algebras to subspaces of alternating matrices whose
//! nonzero members are all nonsingular, searched for here as well.

use crate::bivector::{wedge_dim, wedge_pairs};
use crate::field::{FieldElem, FieldError, FieldSpec};
use crate::liealg::LieAlgebra;
use crate::matrix::{gf_rank, polarized_gram, Matrix, Subspace};
use thiserror::Error;

pub const DEFAULT_CAMINA_BUDGET: u64 = 1 << 20;
pub const DEFAULT_SKS_BUDGET: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaminaError {
    #[error("hypotheses not met: {0}")]
    Hypothesis(&'static str),
    #[error("check needs {needed} representatives, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Result of the direct Camina decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaminaCheck {
    pub camina: bool,
    /// True when the derived subalgebra is zero or everything, in which
    /// case the defining condition is vacuous and we report not-Camina.
    pub degenerate: bool,
    /// An x outside L' with [x, L] a proper subspace of L'.
    pub witness: Option<Vec<FieldElem>>,
    pub cosets_checked: u128,
}

/// Decides the Camina condition by enumeration over a finite field.
///
/// Both the condition [x, L] = L' and membership of x in L' only depend on
/// x modulo Z(L) intersected with L', so the scan walks coset
/// representatives of that subspace.
pub fn is_camina(a: &LieAlgebra, budget: u64) -> Result<CaminaCheck, CaminaError> {
    let q = a.field().order().ok_or(FieldError::Unsupported(
        "direct Camina enumeration needs a finite field; see the structure matrix route",
    ))? as u128;
    let derived = a.derived();
    let r = derived.dim();
    let dim = a.dim();
    if r == 0 || r == dim {
        return Ok(CaminaCheck {
            camina: false,
            degenerate: true,
            witness: None,
            cosets_checked: 0,
        });
    }
    let zl = a.center().intersect(&derived);
    let comp = zl.complement_coords();
    let needed = q
        .checked_pow(comp.len() as u32)
        .unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(CaminaError::BudgetExceeded { needed, budget });
    }

    let f = a.field().clone();
    let t = f.tables().expect("finite field has tables");
    for idx in 0..needed {
        let mut v = idx;
        let mut x = vec![f.zero(); dim];
        for &c in &comp {
            x[c] = f.fin((v % q) as u64);
            v /= q;
        }
        if derived.contains(&x) {
            continue;
        }
        let mut ad = vec![0u16; dim * dim];
        for (i, xi) in x.iter().enumerate() {
            let FieldElem::Fin(xi) = xi else { unreachable!() };
            if *xi == 0 {
                continue;
            }
            for j in 0..dim {
                for k in 0..dim {
                    if let FieldElem::Fin(s) = a.sc(i, j, k) {
                        if *s != 0 {
                            ad[k * dim + j] = t.add(ad[k * dim + j], t.mul(*xi, *s));
                        }
                    }
                }
            }
        }
        if gf_rank(t, dim, dim, &mut ad) < r {
            return Ok(CaminaCheck {
                camina: false,
                degenerate: false,
                witness: Some(x),
                cosets_checked: idx + 1,
            });
        }
    }
    Ok(CaminaCheck {
        camina: true,
        degenerate: false,
        witness: None,
        cosets_checked: needed,
    })
}

/// Structure matrices of a class-two stem algebra: with generators taken
/// from a complement of L' = Z(L) and y_1..y_r a basis of L', the matrix
/// X_t records the y_t coefficient of [x_i, x_j]. Each X_t is alternating.
#[derive(Debug, Clone)]
pub struct StructureMatrices {
    pub generators: usize,
    pub mats: Vec<Matrix>,
}

pub fn structure_matrices(a: &LieAlgebra) -> Result<StructureMatrices, CaminaError> {
    if a.nilpotency_class() != Some(2) {
        return Err(CaminaError::Hypothesis("the algebra must have class two"));
    }
    let derived = a.derived();
    if a.center() != derived {
        return Err(CaminaError::Hypothesis(
            "the center must equal the derived subalgebra",
        ));
    }
    let comp = derived.complement_coords();
    let s = comp.len();
    let r = derived.dim();
    let f = a.field();
    let mut mats = vec![Matrix::zeros(f, s, s); r];
    for (i, &ci) in comp.iter().enumerate() {
        for (j, &cj) in comp.iter().enumerate() {
            if i == j {
                continue;
            }
            let w = a.bracket_basis(ci, cj);
            let coords = derived
                .coords_of(&w)
                .expect("class two puts brackets in the derived subalgebra");
            for (t, c) in coords.into_iter().enumerate() {
                mats[t].set(i, j, c);
            }
        }
    }
    debug_assert!(mats.iter().all(|m| m.is_alternating()));
    Ok(StructureMatrices {
        generators: s,
        mats,
    })
}

/// Whether every nonzero linear combination of a family of equally sized
/// square matrices is nonsingular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanCheck {
    AllNonsingular,
    /// Coefficients of a nonzero combination that drops rank.
    SingularCombination { coeffs: Vec<FieldElem> },
    /// Not decidable with the implemented rational criteria.
    Undetermined,
}

/// Decides the nonsingular span property.
///
/// Finite fields: exhaustive scan of projective representatives. Rationals:
/// the determinant of a 2x2 family and the Pfaffian of an alternating 4x4
/// family are quadratic forms in the coefficients, so a definite form
/// certifies the property; everything else is Undetermined, except that a
/// family of alternating matrices of odd size is always singular.
pub fn check_span_nonsingular(mats: &[Matrix], budget: u64) -> Result<SpanCheck, CaminaError> {
    if mats.is_empty() {
        return Ok(SpanCheck::AllNonsingular);
    }
    let f = mats[0].field().clone();
    let s = mats[0].rows();
    let r = mats.len();
    assert!(
        mats.iter().all(|m| m.rows() == s && m.cols() == s && *m.field() == f),
        "family must share a field and size"
    );

    if let Some(q) = f.order() {
        let needed = ((q as u128).checked_pow(r as u32).unwrap_or(u128::MAX) - 1) / (q as u128 - 1);
        if needed > budget as u128 {
            return Err(CaminaError::BudgetExceeded { needed, budget });
        }
        let t = f.tables().unwrap();
        let raw: Vec<Vec<u16>> = mats.iter().map(|m| m.to_indices().unwrap()).collect();
        let mut digits = vec![0u16; r];
        for lead in 0..r {
            let count = q.pow((r - lead - 1) as u32);
            for mut v in 0..count {
                digits.iter_mut().for_each(|x| *x = 0);
                digits[lead] = 1;
                for slot in lead + 1..r {
                    digits[slot] = (v % q) as u16;
                    v /= q;
                }
                let mut combo = vec![0u16; s * s];
                for (d, m) in digits.iter().zip(&raw) {
                    if *d == 0 {
                        continue;
                    }
                    for (slot, &x) in combo.iter_mut().zip(m) {
                        if x != 0 {
                            *slot = t.add(*slot, t.mul(*d, x));
                        }
                    }
                }
                if gf_rank(t, s, s, &mut combo) < s {
                    let coeffs = digits.iter().map(|&d| FieldElem::Fin(d)).collect();
                    return Ok(SpanCheck::SingularCombination { coeffs });
                }
            }
        }
        return Ok(SpanCheck::AllNonsingular);
    }

    let all_alternating = mats.iter().all(|m| m.is_alternating());
    if all_alternating && s % 2 == 1 && s > 0 {
        // Odd alternating matrices are singular; the first basis matrix
        // already witnesses it.
        let mut coeffs = vec![f.zero(); r];
        coeffs[0] = f.one();
        return Ok(SpanCheck::SingularCombination { coeffs });
    }
    let combo = |c: &[FieldElem]| -> Matrix {
        let mut acc = Matrix::zeros(&f, s, s);
        for (ci, m) in c.iter().zip(mats) {
            acc = acc.add(&m.scale(ci));
        }
        acc
    };
    if all_alternating && s == 4 {
        let gram = polarized_gram(&f, r, |c| combo(c).pfaffian().expect("alternating"));
        if gram.is_definite() {
            return Ok(SpanCheck::AllNonsingular);
        }
        return Ok(SpanCheck::Undetermined);
    }
    if all_alternating && s == 2 {
        // The Pfaffian is linear here; nonsingularity of the whole span
        // forces a one dimensional family with nonzero Pfaffian.
        let pf: Vec<FieldElem> = mats
            .iter()
            .map(|m| m.pfaffian().expect("alternating"))
            .collect();
        let row = Matrix::from_rows(&f, vec![pf], r);
        let kernel = row.kernel();
        if kernel.dim() == 0 {
            return Ok(SpanCheck::AllNonsingular);
        }
        return Ok(SpanCheck::SingularCombination {
            coeffs: kernel.basis().row(0).to_vec(),
        });
    }
    if s == 2 {
        // det is a quadratic form on the coefficients of any 2x2 family.
        let gram = polarized_gram(&f, r, |c| combo(c).det());
        if gram.is_definite() {
            return Ok(SpanCheck::AllNonsingular);
        }
        return Ok(SpanCheck::Undetermined);
    }
    Ok(SpanCheck::Undetermined)
}

/// Camina decision for class-two stem algebras through the structure
/// matrices: Camina holds exactly when every nonzero combination of them is
/// nonsingular.
pub fn camina_via_structure_matrices(
    a: &LieAlgebra,
    budget: u64,
) -> Result<SpanCheck, CaminaError> {
    let sm = structure_matrices(a)?;
    check_span_nonsingular(&sm.mats, budget)
}

/// Search report for the largest subspace of alternating n x n matrices
/// whose nonzero members are all nonsingular.
#[derive(Debug, Clone)]
pub struct SksSearchReport {
    pub n: usize,
    /// Largest dimension found; exact when `complete`, otherwise a
    /// certified lower bound.
    pub max_dim: usize,
    /// Basis of a witness subspace, in wedge coordinates on n indices.
    pub witness: Subspace,
    pub complete: bool,
    pub rank_checks: u64,
}

struct SksDfs<'a> {
    f: &'a FieldSpec,
    q: u64,
    n: usize,
    wd: usize,
    budget: u64,
    checks: u64,
    complete: bool,
    best_rows: Vec<Vec<u16>>,
}

impl SksDfs<'_> {
    /// Every nonzero member of the span of rows+w that actually involves w
    /// reduces (projectively) to w + combination of rows; old members are
    /// already certified.
    fn extension_ok(&mut self, rows: &[Vec<u16>], w: &[u16]) -> bool {
        let t = self.f.tables().unwrap();
        let pairs = wedge_pairs(self.n);
        let d = rows.len();
        let total = (self.q as u128).pow(d as u32);
        let mut digits = vec![0u16; d];
        for mut idx in 0..total {
            if self.checks >= self.budget {
                self.complete = false;
                return false;
            }
            self.checks += 1;
            for slot in digits.iter_mut() {
                *slot = (idx % self.q as u128) as u16;
                idx /= self.q as u128;
            }
            let mut combo = w.to_vec();
            for (dg, row) in digits.iter().zip(rows) {
                if *dg == 0 {
                    continue;
                }
                for (slot, &x) in combo.iter_mut().zip(row) {
                    if x != 0 {
                        *slot = t.add(*slot, t.mul(*dg, x));
                    }
                }
            }
            let mut skew = vec![0u16; self.n * self.n];
            for (ci, &(a, b)) in combo.iter().zip(&pairs) {
                skew[a * self.n + b] = *ci;
                skew[b * self.n + a] = t.neg(*ci);
            }
            if gf_rank(t, self.n, self.n, &mut skew) < self.n {
                return false;
            }
        }
        true
    }

    fn explore(&mut self, rows: &mut Vec<Vec<u16>>, pivots: &mut Vec<usize>) {
        if rows.len() > self.best_rows.len() {
            self.best_rows = rows.clone();
        }
        let start = pivots.last().map_or(0, |&p| p + 1);
        for p in start..self.wd {
            // Canonical echelon children: earlier rows must vanish at the
            // new pivot column, free entries sit right of p off the pivots.
            if rows.iter().any(|r| r[p] != 0) {
                continue;
            }
            let free: Vec<usize> = (p + 1..self.wd).filter(|j| !pivots.contains(j)).collect();
            let count = (self.q as u128).pow(free.len() as u32);
            for mut v in 0..count {
                let mut w = vec![0u16; self.wd];
                w[p] = 1;
                for &j in &free {
                    w[j] = (v % self.q as u128) as u16;
                    v /= self.q as u128;
                }
                if self.extension_ok(rows, &w) {
                    rows.push(w);
                    pivots.push(p);
                    self.explore(rows, pivots);
                    rows.pop();
                    pivots.pop();
                }
                if !self.complete {
                    return;
                }
            }
        }
    }
}

/// Finds the largest all-nonsingular subspace of alternating n x n matrices
/// over a finite field, by depth first search over echelon-canonical
/// subspace bases. Odd n returns 0 immediately. When the rank-check budget
/// runs out the report is marked incomplete and max_dim is a lower bound.
pub fn max_nonsingular_skew_subspace(
    field: &FieldSpec,
    n: usize,
    budget: u64,
) -> Result<SksSearchReport, CaminaError> {
    let q = field.order().ok_or(FieldError::Unsupported(
        "the subspace search enumerates a finite field",
    ))?;
    let wd = wedge_dim(n);
    if n % 2 == 1 {
        return Ok(SksSearchReport {
            n,
            max_dim: 0,
            witness: Subspace::zero(field, wd),
            complete: true,
            rank_checks: 0,
        });
    }
    let mut dfs = SksDfs {
        f: field,
        q,
        n,
        wd,
        budget,
        checks: 0,
        complete: true,
        best_rows: Vec::new(),
    };
    dfs.explore(&mut Vec::new(), &mut Vec::new());
    let rows: Vec<Vec<FieldElem>> = dfs
        .best_rows
        .iter()
        .map(|r| r.iter().map(|&x| FieldElem::Fin(x)).collect())
        .collect();
    Ok(SksSearchReport {
        n,
        max_dim: dfs.best_rows.len(),
        witness: Subspace::span(field, wd, rows),
        complete: dfs.complete,
        rank_checks: dfs.checks,
    })
}

/// Multiplication-by-x^t matrices of the degree-m extension k[x]/(least
/// irreducible): a basis of an m-dimensional space of m x m matrices in
/// which every nonzero combination is invertible (it multiplies by a
/// nonzero field element).
pub fn field_multiplication_matrices(field: &FieldSpec, m: usize) -> Vec<Matrix> {
    let modulus = crate::constructions::least_irreducible_poly(field, m);
    (0..m)
        .map(|t| {
            let mut a = Matrix::zeros(field, m, m);
            for j in 0..m {
                let mut prod = vec![field.zero(); t + j + 1];
                prod[t + j] = field.one();
                let red = crate::constructions::poly_rem(field, &prod, &modulus);
                for (i, c) in red.into_iter().enumerate() {
                    a.set(i, j, c);
                }
            }
            a
        })
        .collect()
}

/// An m-dimensional all-nonsingular subspace of alternating 2m x 2m
/// matrices, built from the regular representation of a degree-m field
/// extension: the block matrix [[0, A], [-A^T, 0]] with A the
/// multiplication-by-lambda matrix is singular only at lambda = 0.
/// Witnesses max_dim >= m for n = 2m over any base field.
pub fn sks_certificate(field: &FieldSpec, m: usize) -> Vec<Matrix> {
    let n = 2 * m;
    field_multiplication_matrices(field, m)
        .into_iter()
        .map(|a| {
            let mut y = Matrix::zeros(field, n, n);
            for i in 0..m {
                for j in 0..m {
                    y.set(i, m + j, a.at(i, j));
                    y.set(m + j, i, field.neg(a.get(i, j)));
                }
            }
            debug_assert!(y.is_alternating());
            y
        })
        .collect()
}

/// Doubles a family of s x s matrices into alternating 2s x 2s matrices
/// [[0, -X^T], [X, 0]], preserving the nonsingular span property in both
/// directions. Both the input and the output are re-verified as far as the
/// field allows.
#[derive(Debug, Clone)]
pub struct DoubledFamily {
    pub doubled: Vec<Matrix>,
    pub input: SpanCheck,
    pub output: SpanCheck,
}

pub fn double_to_skew(mats: &[Matrix], budget: u64) -> Result<DoubledFamily, CaminaError> {
    assert!(!mats.is_empty());
    let f = mats[0].field().clone();
    let s = mats[0].rows();
    let doubled: Vec<Matrix> = mats
        .iter()
        .map(|x| {
            assert_eq!((x.rows(), x.cols()), (s, s));
            let mut y = Matrix::zeros(&f, 2 * s, 2 * s);
            for i in 0..s {
                for j in 0..s {
                    y.set(s + i, j, x.at(i, j));
                    y.set(j, s + i, f.neg(x.get(i, j)));
                }
            }
            debug_assert!(y.is_alternating());
            y
        })
        .collect();
    Ok(DoubledFamily {
        input: check_span_nonsingular(mats, budget)?,
        output: check_span_nonsingular(&doubled, budget)?,
        doubled,
    })
}

/// Three rational alternating 4 x 4 matrices multiplying like the
/// quaternions i, j, k: each squares to -I, they pairwise anticommute, and
/// det(aX1 + bX2 + cX3) = (a^2 + b^2 + c^2)^2. Every nonzero rational
/// combination is therefore nonsingular, which realizes a Camina family
/// over the rationals that no finite field admits at this size.
pub fn rational_quaternion_family() -> Vec<Matrix> {
    let f = FieldSpec::rational();
    vec![
        Matrix::from_int_rows(
            &f,
            &[
                &[0, 0, 1, 0],
                &[0, 0, 0, 1],
                &[-1, 0, 0, 0],
                &[0, -1, 0, 0],
            ],
        ),
        Matrix::from_int_rows(
            &f,
            &[
                &[0, 0, 0, -1],
                &[0, 0, 1, 0],
                &[0, -1, 0, 0],
                &[1, 0, 0, 0],
            ],
        ),
        Matrix::from_int_rows(
            &f,
            &[
                &[0, -1, 0, 0],
                &[1, 0, 0, 0],
                &[0, 0, 0, 1],
                &[0, 0, -1, 0],
            ],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{
        degree_heisenberg, free_two_step, heisenberg, ideal_dim1, quotient_free_two_step,
        wedge_ideal_from_int,
    };
    use crate::matrix::enumerate_subspaces;

    fn gf(p: u64, n: usize) -> FieldSpec {
        FieldSpec::gf_ext(p, n).unwrap()
    }

    fn budget() -> u64 {
        DEFAULT_CAMINA_BUDGET
    }

    #[test]
    fn heisenberg_families_are_camina() {
        for (p, n) in [(2u64, 1usize), (3, 1), (2, 2)] {
            let f = gf(p, n);
            for m in 1..=3 {
                let check = is_camina(&heisenberg(&f, m), budget()).unwrap();
                assert!(check.camina, "H_{m} over {f}");
                let check = is_camina(&degree_heisenberg(&f, m), budget()).unwrap();
                assert!(check.camina, "degree {m} over {f}");
            }
        }
    }

    #[test]
    fn free_two_step_is_not_camina() {
        let f = gf(3, 1);
        let a = free_two_step(&f, 3);
        let check = is_camina(&a, budget()).unwrap();
        assert!(!check.camina && !check.degenerate);
        // Every x outside L' has rank 2 < dim L' = 3, so the first coset
        // representative off L' is already a witness.
        let w = check.witness.unwrap();
        assert!(a.breadth(&w) < a.derived().dim());

        // Quotients of the four generator algebra by one wedge line keep
        // dim L' = 5 > 3 = top breadth, so they are never Camina either.
        let qa = quotient_free_two_step(&f, 4, &ideal_dim1(&f));
        assert!(!is_camina(&qa, budget()).unwrap().camina);
    }

    #[test]
    fn degenerate_cases_are_flagged() {
        let f = gf(3, 1);
        let check = is_camina(&LieAlgebra::abelian(&f, 3), budget()).unwrap();
        assert!(!check.camina && check.degenerate);
    }

    /// The two dimensional non-nilpotent algebra [x, y] = x: every element
    /// off L' = span(x) brackets onto all of L'.
    #[test]
    fn affine_line_algebra_is_camina() {
        for p in [2u64, 3, 5] {
            let f = gf(p, 1);
            let mut a = LieAlgebra::abelian(&f, 2);
            a.define_bracket_int(0, 1, &[(0, 1)]);
            a.validate().unwrap();
            let check = is_camina(&a, budget()).unwrap();
            assert!(check.camina, "p={p}");
            assert!(!check.degenerate);
        }
    }

    #[test]
    fn structure_matrix_hypotheses() {
        let f = gf(3, 1);
        assert_eq!(
            camina_via_structure_matrices(&crate::constructions::five_dim_three_step(&f), budget())
                .unwrap_err(),
            CaminaError::Hypothesis("the algebra must have class two")
        );
        let loose = heisenberg(&f, 1).direct_sum(&LieAlgebra::abelian(&f, 1));
        assert_eq!(
            camina_via_structure_matrices(&loose, budget()).unwrap_err(),
            CaminaError::Hypothesis("the center must equal the derived subalgebra")
        );
    }

    #[test]
    fn structure_matrix_route_matches_enumeration() {
        for (p, n) in [(2u64, 1usize), (3, 1), (2, 2)] {
            let f = gf(p, n);
            let cases = vec![
                heisenberg(&f, 2),
                degree_heisenberg(&f, 2),
                degree_heisenberg(&f, 3),
                free_two_step(&f, 3),
                // Two commuting Heisenberg blocks: stem with dim L' = 2 but
                // visibly not Camina.
                quotient_free_two_step(
                    &f,
                    4,
                    &wedge_ideal_from_int(
                        &f,
                        &[
                            &[0, 1, 0, 0, 0, 0],
                            &[0, 0, 1, 0, 0, 0],
                            &[0, 0, 0, 1, 0, 0],
                            &[0, 0, 0, 0, 1, 0],
                        ],
                    ),
                ),
            ];
            for (i, a) in cases.iter().enumerate() {
                let direct = is_camina(a, budget()).unwrap();
                let via = camina_via_structure_matrices(a, budget()).unwrap();
                match via {
                    SpanCheck::AllNonsingular => assert!(direct.camina, "case {i} over {f}"),
                    SpanCheck::SingularCombination { .. } => {
                        assert!(!direct.camina, "case {i} over {f}")
                    }
                    SpanCheck::Undetermined => panic!("finite fields always decide"),
                }
            }
        }
    }

    /// For class-two stems with dim L' = 2 on four generators the Camina
    /// property is equivalent to breadth type (0, 2); with a singular
    /// combination the type picks up breadth one.
    #[test]
    fn camina_vs_breadth_type_on_codim2_quotients() {
        let f = gf(3, 1);
        let camina = degree_heisenberg(&f, 2);
        assert_eq!(camina.breadth_type().unwrap().breadths, vec![0, 2]);
        assert!(is_camina(&camina, budget()).unwrap().camina);

        let split = quotient_free_two_step(
            &f,
            4,
            &wedge_ideal_from_int(
                &f,
                &[
                    &[0, 1, 0, 0, 0, 0],
                    &[0, 0, 1, 0, 0, 0],
                    &[0, 0, 0, 1, 0, 0],
                    &[0, 0, 0, 0, 1, 0],
                ],
            ),
        );
        assert_eq!(split.breadth_type().unwrap().breadths, vec![0, 1, 2]);
        assert!(!is_camina(&split, budget()).unwrap().camina);
    }

    /// Quotients of the three generator free algebra by a line: three
    /// structure matrices never span nonsingularly in odd size, and indeed
    /// every such quotient has the full type (0, 1, 2).
    #[test]
    fn three_generator_line_quotients_are_never_camina() {
        let f = gf(3, 1);
        for line in enumerate_subspaces(&f, 3, 1).unwrap() {
            let a = {
                let full = free_two_step(&f, 3);
                let emb: Vec<Vec<FieldElem>> = line
                    .basis_rows()
                    .map(|r| {
                        let mut v = vec![f.zero(); 6];
                        v[3..].clone_from_slice(r);
                        v
                    })
                    .collect();
                full.quotient(&Subspace::span(&f, 6, emb)).unwrap().0
            };
            let direct = is_camina(&a, budget()).unwrap();
            assert!(!direct.camina);
            let via = camina_via_structure_matrices(&a, budget()).unwrap();
            assert!(matches!(via, SpanCheck::SingularCombination { .. }));
            assert_eq!(a.breadth_type().unwrap().breadths, vec![0, 1, 2]);
        }
    }

    #[test]
    fn sks_known_values() {
        for (p, n) in [(2u64, 1usize), (3, 1)] {
            let f = gf(p, n);
            let r2 = max_nonsingular_skew_subspace(&f, 2, DEFAULT_SKS_BUDGET).unwrap();
            assert!(r2.complete);
            assert_eq!(r2.max_dim, 1, "n=2 over {f}");
            let r3 = max_nonsingular_skew_subspace(&f, 3, DEFAULT_SKS_BUDGET).unwrap();
            assert!(r3.complete);
            assert_eq!(r3.max_dim, 0);
            let r4 = max_nonsingular_skew_subspace(&f, 4, DEFAULT_SKS_BUDGET).unwrap();
            assert!(r4.complete, "n=4 search finishes, {} checks", r4.rank_checks);
            assert_eq!(r4.max_dim, 2, "n=4 over {f}");

            // The witness really is all-nonsingular: rebuild the matrices
            // and recheck through the independent span routine.
            let pairs = wedge_pairs(4);
            let mats: Vec<Matrix> = r4
                .witness
                .basis_rows()
                .map(|row| {
                    let mut m = Matrix::zeros(&f, 4, 4);
                    for (c, &(i, j)) in row.iter().zip(&pairs) {
                        m.set(i, j, c.clone());
                        m.set(j, i, f.neg(c));
                    }
                    m
                })
                .collect();
            assert_eq!(
                check_span_nonsingular(&mats, budget()).unwrap(),
                SpanCheck::AllNonsingular
            );
        }
    }

    #[test]
    fn sks_budget_gives_lower_bound() {
        let f = gf(3, 1);
        let full = max_nonsingular_skew_subspace(&f, 4, DEFAULT_SKS_BUDGET).unwrap();
        let cut = max_nonsingular_skew_subspace(&f, 4, 50).unwrap();
        assert!(!cut.complete);
        assert!(cut.max_dim <= full.max_dim);
    }

    #[test]
    fn certificate_subspaces_are_nonsingular() {
        for (p, n) in [(2u64, 1usize), (3, 1)] {
            let f = gf(p, n);
            for m in 1..=3 {
                let mats = sks_certificate(&f, m);
                assert_eq!(mats.len(), m);
                assert_eq!(mats[0].rows(), 2 * m);
                assert_eq!(
                    check_span_nonsingular(&mats, budget()).unwrap(),
                    SpanCheck::AllNonsingular,
                    "m={m} over {f}"
                );
            }
        }
        // Over the rationals the m = 1 certificate is decidable by the
        // alternating 2x2 Pfaffian rule.
        let r = FieldSpec::rational();
        let mats = sks_certificate(&r, 1);
        assert_eq!(
            check_span_nonsingular(&mats, budget()).unwrap(),
            SpanCheck::AllNonsingular
        );
    }

    #[test]
    fn doubling_preserves_the_span_property() {
        let f = gf(2, 1);
        // Multiplication matrices of GF(8) over GF(2): all nonzero
        // combinations are nonsingular, and so are their doublings.
        let mats = field_multiplication_matrices(&f, 3);
        let fam = double_to_skew(&mats, budget()).unwrap();
        assert_eq!(fam.input, SpanCheck::AllNonsingular);
        assert_eq!(fam.output, SpanCheck::AllNonsingular);
        assert_eq!(fam.doubled[0].rows(), 6);

        // A family with a singular member stays singular after doubling.
        let sing = vec![Matrix::identity(&f, 2), Matrix::zeros(&f, 2, 2)];
        let fam = double_to_skew(&sing, budget()).unwrap();
        assert!(matches!(fam.input, SpanCheck::SingularCombination { .. }));
        assert!(matches!(fam.output, SpanCheck::SingularCombination { .. }));
    }

    #[test]
    fn quaternion_family_multiplies_like_quaternions() {
        let f = FieldSpec::rational();
        let xs = rational_quaternion_family();
        let id = Matrix::identity(&f, 4);
        let neg_id = id.neg();
        for x in &xs {
            assert!(x.is_alternating());
            assert_eq!(x.matmul(x), neg_id);
        }
        for i in 0..3 {
            for j in i + 1..3 {
                assert_eq!(
                    xs[i].matmul(&xs[j]),
                    xs[j].matmul(&xs[i]).neg(),
                    "anticommutation ({i}, {j})"
                );
            }
        }
        // X1 X2 = X3 fixes the quaternion orientation.
        assert_eq!(xs[0].matmul(&xs[1]), xs[2]);

        // Pfaffian of a combination is -(a^2 + b^2 + c^2).
        let combo = |a: i64, b: i64, c: i64| {
            xs[0]
                .scale(&f.from_int(a))
                .add(&xs[1].scale(&f.from_int(b)))
                .add(&xs[2].scale(&f.from_int(c)))
        };
        for (a, b, c) in [(1i64, 0, 0), (1, 1, 1), (2, -1, 3), (0, 5, -2)] {
            let m = combo(a, b, c);
            let norm = f.from_int(a * a + b * b + c * c);
            assert_eq!(m.pfaffian().unwrap(), f.neg(&norm));
            assert_eq!(m.det(), f.mul(&norm, &norm));
        }
        assert_eq!(combo(2, 2, 1).det(), f.from_int(81));
        assert_eq!(
            check_span_nonsingular(&xs, budget()).unwrap(),
            SpanCheck::AllNonsingular
        );
    }

    /// det(aX1 + bX2 + cX3) - (a^2+b^2+c^2)^2 is a polynomial of degree at
    /// most four in each variable, so vanishing on a 5x5x5 grid proves the
    /// identity, and with it nonsingularity of every nonzero real or
    /// rational combination.
    #[test]
    fn quaternion_determinant_identity_on_grid() {
        let f = FieldSpec::rational();
        let xs = rational_quaternion_family();
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -2i64..=2 {
                    let m = xs[0]
                        .scale(&f.from_int(a))
                        .add(&xs[1].scale(&f.from_int(b)))
                        .add(&xs[2].scale(&f.from_int(c)));
                    let norm = a * a + b * b + c * c;
                    assert_eq!(m.det(), f.from_int(norm * norm), "({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn budget_errors_carry_sizes() {
        let f = gf(3, 1);
        let a = degree_heisenberg(&f, 2);
        let err = is_camina(&a, 10).unwrap_err();
        assert!(matches!(err, CaminaError::BudgetExceeded { .. }));
        let mats = sks_certificate(&f, 2);
        let err = check_span_nonsingular(&mats, 2).unwrap_err();
        assert_eq!(
            err,
            CaminaError::BudgetExceeded {
                needed: 4,
                budget: 2
            }
        );
    }
}
