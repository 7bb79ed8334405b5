//! Exponent-p class-two groups and their Lie algebra shadows.
//!
//! The relatively free group on m+1 generators of exponent p and class two
//! carries the same coordinates as the free two-step algebra: a generator
//! part and a central commutator part. Conjugacy classes of central
//! quotients have p-power sizes, and the exponent sequence matches the
//! breadth type of the corresponding algebra quotient; this module
//! implements the group arithmetic, the coordinate map between the two
//! sides, conjugate type computation and the matching check.
//!
//! Collection convention: elements are words g_0^{a_0} ... g_m^{a_m}
//! followed by central commutators [g_j, g_r]^{b_jr} with j < r in wedge
//! order. Moving g_j^t leftwards past g_r^s costs [g_j, g_r]^{-st}, so the
//! product rule subtracts alpha_r(left) * alpha_j(right); with this sign
//! the definitional commutator a b a^{-1} b^{-1} of two generator words
//! lands on the wedge of their generator parts, matching the Lie bracket.

use crate::bivector::{wedge_dim, Bivector};
use crate::field::{FieldElem, FieldError, FieldSpec};
use crate::liealg::LieError;
use crate::matrix::{Matrix, Subspace};
use thiserror::Error;

pub const DEFAULT_GROUP_BUDGET: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("the group correspondence needs an odd prime, got {0}")]
    EvenPrime(u64),
    #[error("enumeration needs {needed} steps, budget allows {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Element in collected normal form: generator exponents `alpha`, central
/// commutator exponents `beta` in wedge order, all reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub alpha: Vec<FieldElem>,
    pub beta: Vec<FieldElem>,
}

/// The relatively free exponent-p class-two group on m+1 generators.
#[derive(Debug, Clone)]
pub struct ExponentPGroup {
    field: FieldSpec,
    gens: usize,
}

impl ExponentPGroup {
    /// `m + 1` generators over GF(p); p must be an odd prime because the
    /// quotient correspondence breaks at two (squares interfere with the
    /// collection of commutators).
    pub fn new(p: u64, m: usize) -> Result<ExponentPGroup, GroupError> {
        if p % 2 == 0 {
            return Err(GroupError::EvenPrime(p));
        }
        let field = FieldSpec::gf(p)?;
        assert!(m >= 1, "at least two generators");
        Ok(ExponentPGroup {
            field,
            gens: m + 1,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn generators(&self) -> usize {
        self.gens
    }

    pub fn commutator_rank(&self) -> usize {
        wedge_dim(self.gens)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            alpha: vec![self.field.zero(); self.gens],
            beta: vec![self.field.zero(); self.commutator_rank()],
        }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        assert!(i < self.gens);
        let mut g = self.identity();
        g.alpha[i] = self.field.one();
        g
    }

    pub fn element(&self, alpha: Vec<FieldElem>, beta: Vec<FieldElem>) -> GroupElement {
        assert_eq!(alpha.len(), self.gens);
        assert_eq!(beta.len(), self.commutator_rank());
        GroupElement { alpha, beta }
    }

    pub fn element_from_int(&self, alpha: &[i64], beta: &[i64]) -> GroupElement {
        self.element(
            alpha.iter().map(|&c| self.field.from_int(c)).collect(),
            beta.iter().map(|&c| self.field.from_int(c)).collect(),
        )
    }

    /// Collected product. Central parts add; the generator merge
    /// contributes -alpha_r(a) alpha_j(b) on the (j, r) commutator.
    pub fn gmul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let f = &self.field;
        let alpha: Vec<FieldElem> = a
            .alpha
            .iter()
            .zip(&b.alpha)
            .map(|(x, y)| f.add(x, y))
            .collect();
        let mut beta: Vec<FieldElem> = a
            .beta
            .iter()
            .zip(&b.beta)
            .map(|(x, y)| f.add(x, y))
            .collect();
        let mut c = 0;
        for j in 0..self.gens {
            for r in j + 1..self.gens {
                beta[c] = f.sub(&beta[c], &f.mul(&a.alpha[r], &b.alpha[j]));
                c += 1;
            }
        }
        GroupElement { alpha, beta }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        let f = &self.field;
        let alpha: Vec<FieldElem> = a.alpha.iter().map(|x| f.neg(x)).collect();
        let mut beta: Vec<FieldElem> = a.beta.iter().map(|x| f.neg(x)).collect();
        let mut c = 0;
        for j in 0..self.gens {
            for r in j + 1..self.gens {
                beta[c] = f.sub(&beta[c], &f.mul(&a.alpha[j], &a.alpha[r]));
                c += 1;
            }
        }
        let out = GroupElement { alpha, beta };
        debug_assert_eq!(self.gmul(a, &out), self.identity());
        out
    }

    pub fn pow(&self, a: &GroupElement, k: u64) -> GroupElement {
        let mut out = self.identity();
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = self.gmul(&out, &base);
            }
            base = self.gmul(&base, &base);
            k >>= 1;
        }
        out
    }

    /// Definitional commutator a b a^{-1} b^{-1}; central, and its beta
    /// part is the wedge of the generator parts.
    pub fn commutator(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let ab = self.gmul(a, b);
        let ai = self.inverse(a);
        let bi = self.inverse(b);
        self.gmul(&self.gmul(&ab, &ai), &bi)
    }

    pub fn conjugate(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.gmul(&self.gmul(h, g), &self.inverse(h))
    }

    /// Coordinate map into the free two-step algebra on the same
    /// generators: generator exponents then commutator exponents.
    pub fn psi(&self, g: &GroupElement) -> Vec<FieldElem> {
        let mut out = g.alpha.clone();
        out.extend(g.beta.iter().cloned());
        out
    }

    /// Central subgroups correspond to wedge-coordinate ideals by the
    /// identity on coordinates.
    pub fn psi_r(&self, n: &Subspace) -> Subspace {
        assert_eq!(n.ambient_dim(), self.commutator_rank());
        assert_eq!(n.field(), &self.field);
        n.clone()
    }

    /// Conjugacy class data of the quotient by a central subgroup N.
    /// Classes have size p^e where e is the rank, modulo N, of the
    /// commutation map y -> [g, y]; that rank only depends on the
    /// generator part of g, so the scan runs over p^{m+1} representatives.
    pub fn conjugate_type(
        &self,
        n: &Subspace,
        budget: u64,
    ) -> Result<ConjugateTypeReport, GroupError> {
        assert_eq!(n.ambient_dim(), self.commutator_rank());
        assert_eq!(n.field(), &self.field);
        let f = &self.field;
        let p = f.order().unwrap();
        let reps = pow_sat(p, self.gens);
        if reps > budget as u128 {
            return Err(GroupError::BudgetExceeded {
                needed: reps,
                budget,
            });
        }

        let central_cosets = self.commutator_rank() - n.dim();
        let mut histogram: Vec<u128> = vec![0; self.gens + 1];
        let mut alpha = vec![f.zero(); self.gens];
        loop {
            let rows: Vec<Vec<FieldElem>> = (0..self.gens)
                .map(|l| {
                    let mut e = vec![f.zero(); self.gens];
                    e[l] = f.one();
                    Bivector::wedge(f, &alpha, &e).coords().to_vec()
                })
                .collect();
            let stacked = Matrix::vstack(&[
                &Matrix::from_rows(f, rows, self.commutator_rank()),
                n.basis(),
            ]);
            let e = stacked.rank() - n.dim();
            // p^{C - dim N - e} classes share this generator part.
            histogram[e] += pow_sat(p, central_cosets - e);

            // Odometer over generator parts.
            let mut i = 0;
            loop {
                if i == self.gens {
                    let exponents: Vec<usize> =
                        (0..=self.gens).filter(|&e| histogram[e] > 0).collect();
                    let class_counts: Vec<u128> =
                        exponents.iter().map(|&e| histogram[e]).collect();
                    let order = pow_sat(p, self.gens + central_cosets);
                    let report = ConjugateTypeReport {
                        exponents,
                        class_counts,
                        order,
                        reps_scanned: reps,
                    };
                    debug_assert_eq!(report.class_size_sum(p), order);
                    return Ok(report);
                }
                let next = f.add(&alpha[i], &f.one());
                let wrapped = next.is_zero();
                alpha[i] = next;
                if !wrapped {
                    break;
                }
                i += 1;
            }
        }
    }

    /// Conjugate type of the quotient by N against the breadth type of the
    /// algebra quotient by the matching wedge ideal.
    pub fn verify_correspondence(
        &self,
        n: &Subspace,
        budget: u64,
    ) -> Result<CorrespondenceReport, GroupError> {
        let ct = self.conjugate_type(n, budget)?;
        if ct.order > budget as u128 {
            return Err(GroupError::BudgetExceeded {
                needed: ct.order,
                budget,
            });
        }
        let ideal = self.psi_r(n);
        let alg = crate::constructions::quotient_free_two_step(&self.field, self.gens, &ideal);
        let bt = alg.breadth_type_with_budget(budget)?;
        let ok = ct.exponents == bt.breadths && bt.complete;
        Ok(CorrespondenceReport {
            conjugate_exponents: ct.exponents,
            breadth_exponents: bt.breadths,
            group_order: ct.order,
            algebra_dim: alg.dim(),
            ok,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugateTypeReport {
    /// Distinct class-size exponents, ascending; class sizes are p^e.
    pub exponents: Vec<usize>,
    /// Classes per exponent, aligned with `exponents`.
    pub class_counts: Vec<u128>,
    /// Order of the quotient group.
    pub order: u128,
    /// Generator-part representatives scanned.
    pub reps_scanned: u128,
}

impl ConjugateTypeReport {
    /// Sum of class sizes with multiplicity; equals the group order.
    pub fn class_size_sum(&self, p: u64) -> u128 {
        self.exponents
            .iter()
            .zip(&self.class_counts)
            .map(|(&e, &c)| c.saturating_mul(pow_sat(p, e)))
            .sum()
    }

    pub fn class_count(&self) -> u128 {
        self.class_counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub conjugate_exponents: Vec<usize>,
    pub breadth_exponents: Vec<usize>,
    pub group_order: u128,
    pub algebra_dim: usize,
    pub ok: bool,
}

fn pow_sat(p: u64, e: usize) -> u128 {
    let mut out: u128 = 1;
    for _ in 0..e {
        out = out.saturating_mul(p as u128);
    }
    out
}
