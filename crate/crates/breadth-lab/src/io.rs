//! JSON wire formats: fields, elements, algebras, wedge ideals, matrices.
//!
//! One text format for every fixture and report. Finite field elements
//! travel as their canonical index (the base-p digit packing used by the
//! tables), rationals as "a" or "a/b" strings so nothing is lost to
//! floating point. Algebras carry only the upper-triangular structure
//! constants; loading symmetrizes and re-validates the bracket axioms.

use crate::field::{FieldElem, FieldError, FieldSpec};
use crate::liealg::{LieAlgebra, LieError};
use crate::matrix::{Matrix, Subspace};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("bad element encoding: {0}")]
    BadElement(String),
    #[error("inconsistent shape: {0}")]
    BadShape(String),
    #[error("file error: {0}")]
    File(#[from] std::io::Error),
}

/// Field description: {"kind":"finite","p":3,"n":2,"modulus":[2,1,1]} or
/// {"kind":"rational"}. The modulus is optional on input (the deterministic
/// default is used) and echoed on output.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldJson {
    Finite {
        p: u64,
        #[serde(default = "one_usize")]
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u64>>,
    },
    Rational,
}

fn one_usize() -> usize {
    1
}

pub fn field_to_json(f: &FieldSpec) -> FieldJson {
    match f.order() {
        Some(_) => {
            let n = f.extension_degree().unwrap();
            FieldJson::Finite {
                p: f.characteristic(),
                n,
                modulus: if n > 1 {
                    Some(f.modulus().unwrap().to_vec())
                } else {
                    None
                },
            }
        }
        None => FieldJson::Rational,
    }
}

pub fn field_from_json(j: &FieldJson) -> Result<FieldSpec, IoError> {
    match j {
        FieldJson::Rational => Ok(FieldSpec::rational()),
        FieldJson::Finite { p, n, modulus } => Ok(match modulus {
            Some(m) => FieldSpec::gf_ext_with_modulus(*p, *n, m)?,
            None => FieldSpec::gf_ext(*p, *n)?,
        }),
    }
}

/// Shorthand accepted on the command line: "rational", "gf3", "gf2^4".
pub fn field_from_shorthand(s: &str) -> Result<FieldSpec, IoError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("rational") || s == "Q" {
        return Ok(FieldSpec::rational());
    }
    let body = s
        .strip_prefix("gf")
        .or_else(|| s.strip_prefix("GF"))
        .ok_or_else(|| IoError::BadShape(format!("unrecognized field {s:?}")))?;
    let (ps, ns) = match body.split_once('^') {
        Some((p, n)) => (p, n),
        None => (body, "1"),
    };
    let p: u64 = ps
        .parse()
        .map_err(|_| IoError::BadShape(format!("bad characteristic in {s:?}")))?;
    let n: usize = ns
        .parse()
        .map_err(|_| IoError::BadShape(format!("bad extension degree in {s:?}")))?;
    Ok(FieldSpec::gf_ext(p, n)?)
}

pub fn elem_to_json(e: &FieldElem) -> Value {
    match e {
        FieldElem::Fin(v) => Value::from(*v),
        FieldElem::Rat(r) => {
            if r.denom() == &num_bigint::BigInt::from(1) {
                Value::from(r.numer().to_string())
            } else {
                Value::from(format!("{}/{}", r.numer(), r.denom()))
            }
        }
    }
}

pub fn elem_from_json(f: &FieldSpec, v: &Value) -> Result<FieldElem, IoError> {
    match v {
        Value::Number(n) => match f.order() {
            Some(q) => {
                let u = n.as_u64().ok_or_else(|| {
                    IoError::BadElement(format!("finite elements are indices below {q}, got {n}"))
                })?;
                if u >= q {
                    return Err(IoError::BadElement(format!(
                        "index {u} out of range for a field of order {q}"
                    )));
                }
                Ok(f.fin(u))
            }
            None => {
                let i = n
                    .as_i64()
                    .ok_or_else(|| IoError::BadElement(format!("non-integer number {n}")))?;
                Ok(f.from_int(i))
            }
        },
        Value::String(s) => Ok(f.parse_elem(s)?),
        other => Err(IoError::BadElement(format!("expected number or string, got {other}"))),
    }
}

/// Algebra by structure constants: brackets is a list of [i, j, [[k, c],..]]
/// entries with i < j; missing pairs commute.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub field: FieldJson,
    pub dim: usize,
    pub brackets: Vec<(usize, usize, Vec<(usize, Value)>)>,
}

pub fn algebra_to_json(a: &LieAlgebra) -> AlgebraJson {
    let mut brackets = Vec::new();
    for i in 0..a.dim() {
        for j in i + 1..a.dim() {
            let coeffs: Vec<(usize, Value)> = (0..a.dim())
                .filter(|&k| !a.sc(i, j, k).is_zero())
                .map(|k| (k, elem_to_json(a.sc(i, j, k))))
                .collect();
            if !coeffs.is_empty() {
                brackets.push((i, j, coeffs));
            }
        }
    }
    AlgebraJson {
        field: field_to_json(a.field()),
        dim: a.dim(),
        brackets,
    }
}

pub fn algebra_from_json(j: &AlgebraJson) -> Result<LieAlgebra, IoError> {
    let f = field_from_json(&j.field)?;
    let mut a = LieAlgebra::abelian(&f, j.dim);
    for (i, jx, coeffs) in &j.brackets {
        if *i >= *jx || *jx >= j.dim {
            return Err(IoError::BadShape(format!(
                "bracket indices ({i}, {jx}) must satisfy i < j < dim"
            )));
        }
        let lifted: Vec<(usize, FieldElem)> = coeffs
            .iter()
            .map(|(k, c)| {
                if *k >= j.dim {
                    return Err(IoError::BadShape(format!("coefficient index {k} out of range")));
                }
                Ok((*k, elem_from_json(&f, c)?))
            })
            .collect::<Result<_, IoError>>()?;
        a.define_bracket(*i, *jx, &lifted);
    }
    a.validate()?;
    Ok(a)
}

/// Central wedge ideal: basis rows in wedge coordinates over `generators`
/// generators. Canonicalized to row echelon form on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealJson {
    pub field: FieldJson,
    pub generators: usize,
    pub basis: Vec<Vec<Value>>,
}

pub fn ideal_to_json(generators: usize, s: &Subspace) -> IdealJson {
    IdealJson {
        field: field_to_json(s.field()),
        generators,
        basis: s
            .basis_rows()
            .map(|r| r.iter().map(elem_to_json).collect())
            .collect(),
    }
}

pub fn ideal_from_json(j: &IdealJson) -> Result<(usize, Subspace), IoError> {
    let f = field_from_json(&j.field)?;
    let ambient = crate::bivector::wedge_dim(j.generators);
    let rows: Vec<Vec<FieldElem>> = j
        .basis
        .iter()
        .map(|row| {
            if row.len() != ambient {
                return Err(IoError::BadShape(format!(
                    "ideal row has {} coordinates, expected {ambient}",
                    row.len()
                )));
            }
            row.iter().map(|v| elem_from_json(&f, v)).collect()
        })
        .collect::<Result<_, IoError>>()?;
    Ok((j.generators, Subspace::span(&f, ambient, rows)))
}

pub fn matrix_to_json(m: &Matrix) -> Vec<Vec<Value>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(elem_to_json).collect())
        .collect()
}

pub fn read_algebra(path: &Path) -> Result<LieAlgebra, IoError> {
    let text = std::fs::read_to_string(path)?;
    algebra_from_json(&serde_json::from_str(&text)?)
}

pub fn write_algebra(path: &Path, a: &LieAlgebra) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(&algebra_to_json(a))?;
    text.push('\n');
    Ok(std::fs::write(path, text)?)
}

pub fn read_ideal(path: &Path) -> Result<(usize, Subspace), IoError> {
    let text = std::fs::read_to_string(path)?;
    ideal_from_json(&serde_json::from_str(&text)?)
}

pub fn write_ideal(path: &Path, generators: usize, s: &Subspace) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(&ideal_to_json(generators, s))?;
    text.push('\n');
    Ok(std::fs::write(path, text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{free_two_step, heisenberg, ideal_dim2_odd, sl2};

    #[test]
    fn field_round_trips() {
        for f in [
            FieldSpec::rational(),
            FieldSpec::gf(7).unwrap(),
            FieldSpec::gf_ext(3, 2).unwrap(),
            FieldSpec::gf_ext(2, 4).unwrap(),
        ] {
            let j = field_to_json(&f);
            let back = field_from_json(&j).unwrap();
            assert_eq!(f, back);
            let text = serde_json::to_string(&j).unwrap();
            let j2: FieldJson = serde_json::from_str(&text).unwrap();
            assert_eq!(field_from_json(&j2).unwrap(), f);
        }
        // Defaulted fields on input.
        let j: FieldJson = serde_json::from_str(r#"{"kind":"finite","p":5}"#).unwrap();
        assert_eq!(field_from_json(&j).unwrap(), FieldSpec::gf(5).unwrap());
    }

    #[test]
    fn shorthand_parsing() {
        assert_eq!(field_from_shorthand("rational").unwrap(), FieldSpec::rational());
        assert_eq!(field_from_shorthand("gf3").unwrap(), FieldSpec::gf(3).unwrap());
        assert_eq!(
            field_from_shorthand("gf2^4").unwrap(),
            FieldSpec::gf_ext(2, 4).unwrap()
        );
        assert!(field_from_shorthand("gf6").is_err());
        assert!(field_from_shorthand("real").is_err());
    }

    #[test]
    fn element_round_trips() {
        let f9 = FieldSpec::gf_ext(3, 2).unwrap();
        for idx in 0..9 {
            let e = f9.fin(idx);
            assert_eq!(elem_from_json(&f9, &elem_to_json(&e)).unwrap(), e);
        }
        assert!(elem_from_json(&f9, &Value::from(9)).is_err());

        let q = FieldSpec::rational();
        for (n, d) in [(0, 1), (5, 1), (-7, 3), (22, 7)] {
            let e = q.from_ratio(n, d).unwrap();
            let j = elem_to_json(&e);
            assert_eq!(elem_from_json(&q, &j).unwrap(), e);
        }
        // Plain JSON integers are accepted over the rationals.
        assert_eq!(elem_from_json(&q, &Value::from(-3)).unwrap(), q.from_int(-3));
        assert_eq!(elem_to_json(&q.from_int(4)), Value::from("4"));
        assert_eq!(elem_to_json(&q.from_ratio(1, 2).unwrap()), Value::from("1/2"));
    }

    #[test]
    fn algebra_round_trips() {
        let f = FieldSpec::gf(3).unwrap();
        for a in [heisenberg(&f, 2), free_two_step(&f, 4), sl2(&FieldSpec::rational())] {
            let j = algebra_to_json(&a);
            let text = serde_json::to_string_pretty(&j).unwrap();
            let parsed: AlgebraJson = serde_json::from_str(&text).unwrap();
            let back = algebra_from_json(&parsed).unwrap();
            assert_eq!(back.dim(), a.dim());
            assert_eq!(back.field(), a.field());
            for i in 0..a.dim() {
                for jx in 0..a.dim() {
                    if i != jx {
                        assert_eq!(back.bracket_basis(i, jx), a.bracket_basis(i, jx));
                    }
                }
            }
        }
    }

    #[test]
    fn bad_algebras_are_rejected() {
        // Upper-triangular index violation.
        let text = r#"{"field":{"kind":"finite","p":3},"dim":3,"brackets":[[1,0,[[2,1]]]]}"#;
        let parsed: AlgebraJson = serde_json::from_str(text).unwrap();
        assert!(matches!(algebra_from_json(&parsed), Err(IoError::BadShape(_))));

        // Jacobi violation: [x0,x1]=x0 with [x0,x2]=x1 fails validation.
        let text = r#"{"field":{"kind":"finite","p":3},"dim":3,
                       "brackets":[[0,1,[[0,1]]],[0,2,[[1,1]]]]}"#;
        let parsed: AlgebraJson = serde_json::from_str(text).unwrap();
        assert!(matches!(algebra_from_json(&parsed), Err(IoError::Lie(_))));
    }

    #[test]
    fn ideal_round_trips() {
        let f = FieldSpec::gf(5).unwrap();
        let ideal = ideal_dim2_odd(&f, &f.from_int(2));
        let j = ideal_to_json(4, &ideal);
        let text = serde_json::to_string(&j).unwrap();
        let parsed: IdealJson = serde_json::from_str(&text).unwrap();
        let (gens, back) = ideal_from_json(&parsed).unwrap();
        assert_eq!(gens, 4);
        assert_eq!(back, ideal);

        // Non-echelon input rows canonicalize on load.
        let text = r#"{"field":{"kind":"finite","p":5},"generators":4,
                       "basis":[[2,0,0,0,0,2],[2,0,0,0,0,2]]}"#;
        let parsed: IdealJson = serde_json::from_str(text).unwrap();
        let (_, s) = ideal_from_json(&parsed).unwrap();
        assert_eq!(s, crate::constructions::ideal_dim1(&f));

        let text = r#"{"field":{"kind":"finite","p":5},"generators":4,"basis":[[1,0,0]]}"#;
        let parsed: IdealJson = serde_json::from_str(text).unwrap();
        assert!(matches!(ideal_from_json(&parsed), Err(IoError::BadShape(_))));
    }

    #[test]
    fn files_round_trip() {
        let dir = std::env::temp_dir().join("breadth-lab-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let f = FieldSpec::gf_ext(2, 2).unwrap();
        let a = heisenberg(&f, 1);
        let ap = dir.join("alg.json");
        write_algebra(&ap, &a).unwrap();
        let back = read_algebra(&ap).unwrap();
        assert_eq!(back.bracket_basis(0, 1), a.bracket_basis(0, 1));

        let ideal = crate::constructions::ideal_dim2_even(&f, &f.least_trace_one().unwrap());
        let ip = dir.join("ideal.json");
        write_ideal(&ip, 4, &ideal).unwrap();
        let (gens, back) = read_ideal(&ip).unwrap();
        assert_eq!((gens, back), (4, ideal));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
