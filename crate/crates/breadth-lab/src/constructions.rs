//! Standard algebra families and the canonical wedge ideals.
//!
//! Basis layouts are fixed and documented so that reports and classification
//! targets are reproducible:
//! - free two-step on n generators: x_0..x_{n-1} then wedge coordinates in
//!   the order of [`crate::bivector::wedge_pairs`];
//! - Heisenberg of rank m: x_1, y_1, ..., x_m, y_m, z;
//! - degree-m Heisenberg: a_0..a_{m-1}, b_0..b_{m-1}, z_0..z_{m-1}, with
//!   [a, b] the product of the degree-m extension ring on the z block.

use crate::bivector::{wedge_dim, wedge_index};
use crate::field::{FieldElem, FieldSpec};
use crate::liealg::LieAlgebra;
use crate::matrix::Subspace;

/// Free two-step nilpotent Lie algebra on `gens` generators:
/// dimension gens + C(gens, 2), with [x_i, x_j] the wedge coordinate.
pub fn free_two_step(field: &FieldSpec, gens: usize) -> LieAlgebra {
    let wd = wedge_dim(gens);
    let mut a = LieAlgebra::abelian(field, gens + wd);
    for i in 0..gens {
        for j in i + 1..gens {
            a.define_bracket_int(i, j, &[(gens + wedge_index(gens, i, j), 1)]);
        }
    }
    debug_assert_eq!(a.validate(), Ok(()));
    a
}

/// Heisenberg algebra of dimension 2m+1: [x_i, y_i] = z.
pub fn heisenberg(field: &FieldSpec, m: usize) -> LieAlgebra {
    assert!(m >= 1);
    let mut a = LieAlgebra::abelian(field, 2 * m + 1);
    for i in 0..m {
        a.define_bracket_int(2 * i, 2 * i + 1, &[(2 * m, 1)]);
    }
    debug_assert_eq!(a.validate(), Ok(()));
    a
}

/// sl_2 with basis (e, h, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h.
/// Simple in characteristic other than two; nilpotent of class two in
/// characteristic two.
pub fn sl2(field: &FieldSpec) -> LieAlgebra {
    let mut a = LieAlgebra::abelian(field, 3);
    a.define_bracket_int(1, 0, &[(0, 2)]);
    a.define_bracket_int(1, 2, &[(2, -2)]);
    a.define_bracket_int(0, 2, &[(1, 1)]);
    debug_assert_eq!(a.validate(), Ok(()));
    a
}

/// Class-three algebra on (x_0, x_1, y, z_1, z_2): [x_0, x_1] = y,
/// [x_0, y] = z_1, [x_1, y] = z_2. Breadth type (0, 2) over every field.
pub fn five_dim_three_step(field: &FieldSpec) -> LieAlgebra {
    let mut a = LieAlgebra::abelian(field, 5);
    a.define_bracket_int(0, 1, &[(2, 1)]);
    a.define_bracket_int(0, 2, &[(3, 1)]);
    a.define_bracket_int(1, 2, &[(4, 1)]);
    debug_assert_eq!(a.validate(), Ok(()));
    a
}

/// Remainder modulo a monic polynomial, low-to-high coefficients.
pub(crate) fn poly_rem(f: &FieldSpec, num: &[FieldElem], den: &[FieldElem]) -> Vec<FieldElem> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    while rem.len() > dd {
        let lead = rem.last().unwrap().clone();
        let deg = rem.len() - 1;
        if !lead.is_zero() {
            for k in 0..dd {
                rem[deg - dd + k] = f.sub(&rem[deg - dd + k], &f.mul(&lead, &den[k]));
            }
        }
        rem.pop();
    }
    rem.resize(dd, f.zero());
    rem
}

fn poly_is_irreducible(f: &FieldSpec, poly: &[FieldElem]) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    let q = f.order().expect("trial division needs a finite field");
    for d in 1..=deg / 2 {
        for c in 0..q.pow(d as u32) {
            let mut v = c;
            let mut div: Vec<FieldElem> = (0..d)
                .map(|_| {
                    let e = f.fin(v % q);
                    v /= q;
                    e
                })
                .collect();
            div.push(f.one());
            if poly_rem(f, poly, &div).iter().all(|c| c.is_zero()) {
                return false;
            }
        }
    }
    true
}

/// Deterministic monic irreducible of the given degree: over a finite field
/// the least one in canonical coefficient packing, over the rationals
/// x^m - 2 (irreducible by the Eisenstein criterion at 2).
pub fn least_irreducible_poly(field: &FieldSpec, degree: usize) -> Vec<FieldElem> {
    assert!(degree >= 1);
    match field.order() {
        Some(q) => {
            for c in 0..q.pow(degree as u32) {
                let mut v = c;
                let mut cand: Vec<FieldElem> = (0..degree)
                    .map(|_| {
                        let e = field.fin(v % q);
                        v /= q;
                        e
                    })
                    .collect();
                cand.push(field.one());
                if poly_is_irreducible(field, &cand) {
                    return cand;
                }
            }
            unreachable!("irreducibles of every degree exist over finite fields")
        }
        None => {
            let mut cand = vec![field.zero(); degree + 1];
            cand[0] = field.from_int(-2);
            cand[degree] = field.one();
            cand
        }
    }
}

/// Degree-m Heisenberg algebra of dimension 3m: two generator blocks
/// multiply into the center through the ring k[x]/(f) with f monic
/// irreducible of degree m, i.e. [a_i, b_j] = coordinates of x^{i+j} mod f.
pub fn degree_heisenberg(field: &FieldSpec, m: usize) -> LieAlgebra {
    assert!(m >= 1);
    let modulus = least_irreducible_poly(field, m);
    let mut alg = LieAlgebra::abelian(field, 3 * m);
    for i in 0..m {
        for j in 0..m {
            let mut prod = vec![field.zero(); i + j + 1];
            prod[i + j] = field.one();
            let red = poly_rem(field, &prod, &modulus);
            let coeffs: Vec<(usize, FieldElem)> = red
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(r, c)| (2 * m + r, c.clone()))
                .collect();
            alg.define_bracket(i, m + j, &coeffs);
        }
    }
    debug_assert_eq!(alg.validate(), Ok(()));
    alg
}

/// Builds a subspace of the wedge space on four generators from integer
/// coordinate rows in the order e01, e02, e03, e12, e13, e23.
pub fn wedge_ideal_from_int(field: &FieldSpec, rows: &[&[i64]]) -> Subspace {
    let vecs = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), 6);
            r.iter().map(|&c| field.from_int(c)).collect()
        })
        .collect();
    Subspace::span(field, 6, vecs)
}

/// The canonical line: span(e0^e1 + e2^e3).
pub fn ideal_dim1(field: &FieldSpec) -> Subspace {
    wedge_ideal_from_int(field, &[&[1, 0, 0, 0, 0, 1]])
}

/// span(e0^e1 + e2^e3, e0^e2 + t e1^e3); bracket-free exactly when t is a
/// non-square, which is the odd-characteristic dimension-two normal form.
pub fn ideal_dim2_odd(field: &FieldSpec, t: &FieldElem) -> Subspace {
    let mut row2 = vec![field.zero(); 6];
    row2[1] = field.one();
    row2[4] = t.clone();
    let row1: Vec<FieldElem> = [1, 0, 0, 0, 0, 1]
        .iter()
        .map(|&c| field.from_int(c))
        .collect();
    Subspace::span(field, 6, vec![row1, row2])
}

/// span(e0^e1 + e2^e3, z e0^e2 + e1^e3 + e2^e3): the characteristic-two
/// dimension-two normal form, with z of absolute trace one.
pub fn ideal_dim2_even(field: &FieldSpec, z: &FieldElem) -> Subspace {
    let mut row2 = vec![field.zero(); 6];
    row2[1] = z.clone();
    row2[4] = field.one();
    row2[5] = field.one();
    let row1: Vec<FieldElem> = [1, 0, 0, 0, 0, 1]
        .iter()
        .map(|&c| field.from_int(c))
        .collect();
    Subspace::span(field, 6, vec![row1, row2])
}

/// span(e0^e1 + e2^e3, e0^e2 - e1^e3, e0^e3 + e1^e2): over the rationals
/// its Pfaffian form is a sum of three squares, so it is bracket-free.
pub fn ideal_dim3_quaternion(field: &FieldSpec) -> Subspace {
    wedge_ideal_from_int(
        field,
        &[
            &[1, 0, 0, 0, 0, 1],
            &[0, 1, 0, 0, -1, 0],
            &[0, 0, 1, 1, 0, 0],
        ],
    )
}

/// Quotient of the free two-step algebra on `gens` generators by an ideal
/// given in wedge coordinates.
pub fn quotient_free_two_step(field: &FieldSpec, gens: usize, ideal: &Subspace) -> LieAlgebra {
    let wd = wedge_dim(gens);
    assert_eq!(ideal.ambient_dim(), wd, "ideal lives in wedge coordinates");
    let full = free_two_step(field, gens);
    let embedded: Vec<Vec<FieldElem>> = ideal
        .basis_rows()
        .map(|r| {
            let mut v = vec![field.zero(); gens + wd];
            v[gens..].clone_from_slice(r);
            v
        })
        .collect();
    let sub = Subspace::span(field, gens + wd, embedded);
    let (q, _) = full.quotient(&sub).expect("central subspaces are ideals");
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivector::{bracket_free, FreeIdealStatus};
    use crate::matrix::enumerate_subspaces;

    fn gf(p: u64, n: usize) -> FieldSpec {
        FieldSpec::gf_ext(p, n).unwrap()
    }

    #[test]
    fn free_two_step_shape() {
        for (p, n) in [(2u64, 1usize), (3, 1), (2, 2)] {
            let f = gf(p, n);
            for gens in 2..=4 {
                let a = free_two_step(&f, gens);
                assert_eq!(a.dim(), gens + wedge_dim(gens));
                assert_eq!(a.nilpotency_class(), Some(2));
                assert_eq!(a.center().dim(), wedge_dim(gens));
                assert_eq!(a.derived().dim(), wedge_dim(gens));
                let bt = a.breadth_type().unwrap();
                assert_eq!(bt.breadths, vec![0, gens - 1], "gens={gens} q={p}^{n}");
            }
        }
    }

    #[test]
    fn heisenberg_family_has_breadth_one() {
        for (p, n) in [(2u64, 1usize), (3, 1), (2, 2), (5, 1)] {
            let f = gf(p, n);
            for m in 1..=4 {
                let h = heisenberg(&f, m);
                assert_eq!(h.dim(), 2 * m + 1);
                assert_eq!(h.breadth_type().unwrap().breadths, vec![0, 1]);
                // Center equals the derived subalgebra: the stem condition.
                assert_eq!(h.center(), h.derived());
            }
        }
    }

    #[test]
    fn degree_heisenberg_breadth_equals_degree() {
        for (p, n) in [(2u64, 1usize), (3, 1), (2, 2), (5, 1)] {
            let f = gf(p, n);
            for m in 1..=3 {
                let a = degree_heisenberg(&f, m);
                assert_eq!(a.dim(), 3 * m);
                assert_eq!(a.nilpotency_class(), Some(2));
                assert_eq!(a.center().dim(), m);
                assert_eq!(a.center(), a.derived());
                let bt = a.breadth_type().unwrap();
                assert_eq!(bt.breadths, vec![0, m], "m={m} q={p}^{n}");
            }
        }
        // Same statement over the rationals, sampled: the image of ad x for
        // x with generator part (alpha, beta) != 0 is the full ring ideal.
        let r = FieldSpec::rational();
        let a = degree_heisenberg(&r, 2);
        assert_eq!(a.breadth_type_sampled(100, 5).breadths, vec![0, 2]);
    }

    #[test]
    fn least_irreducible_polys_are_monic_irreducible() {
        let f4 = gf(2, 2);
        let m = least_irreducible_poly(&f4, 2);
        assert_eq!(m.len(), 3);
        assert_eq!(*m.last().unwrap(), f4.one());
        assert!(poly_is_irreducible(&f4, &m));
        // Over GF(2) the least degree-2 irreducible is x^2 + x + 1.
        let f2 = gf(2, 1);
        assert_eq!(
            least_irreducible_poly(&f2, 2),
            vec![f2.one(), f2.one(), f2.one()]
        );
        // And degree 3: x^3 + x + 1 (packed before x^3 + x^2 + 1).
        assert_eq!(
            least_irreducible_poly(&f2, 3),
            vec![f2.one(), f2.one(), f2.zero(), f2.one()]
        );
        let r = FieldSpec::rational();
        assert_eq!(
            least_irreducible_poly(&r, 4)[0],
            r.from_int(-2)
        );
    }

    #[test]
    fn canonical_ideals_match_their_freeness_claims() {
        let f3 = gf(3, 1);
        assert_eq!(bracket_free(4, &ideal_dim1(&f3)), FreeIdealStatus::Free);
        let t = f3.find_nonsquare().unwrap();
        assert_eq!(
            bracket_free(4, &ideal_dim2_odd(&f3, &t)),
            FreeIdealStatus::Free
        );
        assert!(matches!(
            bracket_free(4, &ideal_dim2_odd(&f3, &f3.one())),
            FreeIdealStatus::HasDecomposable { .. }
        ));

        for f in [gf(2, 1), gf(2, 2)] {
            let z = f.least_trace_one().unwrap();
            assert_eq!(
                bracket_free(4, &ideal_dim2_even(&f, &z)),
                FreeIdealStatus::Free,
                "field {f}"
            );
        }
        // Trace-zero z makes the quadratic reducible and the ideal not free.
        let f4 = gf(2, 2);
        assert!(matches!(
            bracket_free(4, &ideal_dim2_even(&f4, &f4.one())),
            FreeIdealStatus::HasDecomposable { .. }
        ));

        let r = FieldSpec::rational();
        assert_eq!(
            bracket_free(4, &ideal_dim3_quaternion(&r)),
            FreeIdealStatus::Free
        );
        // The same three-dimensional ideal over GF(3) is not free: the sum
        // of three squares form is isotropic there.
        assert!(matches!(
            bracket_free(4, &ideal_dim3_quaternion(&f3)),
            FreeIdealStatus::HasDecomposable { .. }
        ));
    }

    #[test]
    fn quotients_by_canonical_ideals_have_top_breadth() {
        let f3 = gf(3, 1);
        let t = f3.find_nonsquare().unwrap();
        let cases = vec![
            quotient_free_two_step(&f3, 4, &Subspace::zero(&f3, 6)),
            quotient_free_two_step(&f3, 4, &ideal_dim1(&f3)),
            quotient_free_two_step(&f3, 4, &ideal_dim2_odd(&f3, &t)),
        ];
        for (i, a) in cases.iter().enumerate() {
            assert_eq!(
                a.breadth_type().unwrap().breadths,
                vec![0, 3],
                "case {i}"
            );
            assert_eq!(a.nilpotency_class(), Some(2));
        }
        // Quotient by a non-free ideal drops an intermediate breadth in.
        let a = quotient_free_two_step(&f3, 4, &ideal_dim2_odd(&f3, &f3.one()));
        let bt = a.breadth_type().unwrap().breadths;
        assert!(bt != vec![0, 3], "non-free ideal cannot give (0, 3)");
        assert!(bt.contains(&2));

        for f in [gf(2, 1), gf(2, 2)] {
            let z = f.least_trace_one().unwrap();
            let a = quotient_free_two_step(&f, 4, &ideal_dim2_even(&f, &z));
            assert_eq!(a.breadth_type().unwrap().breadths, vec![0, 3], "field {f}");
        }
    }

    /// Dichotomy on every line over GF(2): the quotient has breadth type
    /// (0, 3) exactly when the line is bracket-free.
    #[test]
    fn line_quotient_dichotomy_gf2() {
        let f = gf(2, 1);
        let mut free = 0;
        for line in enumerate_subspaces(&f, 6, 1).unwrap() {
            let is_free = bracket_free(4, &line) == FreeIdealStatus::Free;
            let bt = quotient_free_two_step(&f, 4, &line)
                .breadth_type()
                .unwrap()
                .breadths;
            assert_eq!(is_free, bt == vec![0, 3], "line {:?}", line.basis().row(0));
            free += is_free as u32;
        }
        assert_eq!(free, 28);
    }
}
