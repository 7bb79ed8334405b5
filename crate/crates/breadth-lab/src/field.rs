//! Exact scalar arithmetic over GF(p^n) and over the rationals.
//!
//! Finite field elements are canonical integer indices: the element with
//! polynomial coordinates (c_0, ..., c_{n-1}) over GF(p) has index
//! sum(c_i * p^i). Indices 0..p-1 are the prime subfield, so enumeration
//! order always lists the prime subfield first. Multiplication goes through
//! log/antilog tables built once per field; supported orders are
//! 2 <= p^n <= 2^16.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Largest supported finite field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field")]
    FieldMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {0} outside supported range 2..=65536")]
    OrderOutOfRange(u64),
    #[error("modulus is not a monic irreducible polynomial of the requested degree")]
    BadModulus,
    #[error("leading coefficient is zero")]
    DegenerateLeadingCoefficient,
    #[error("every element of a characteristic-two field is a square")]
    NoNonsquare,
    #[error("operation not supported over this field: {0}")]
    Unsupported(&'static str),
}

/// A scalar. `Fin` holds a canonical index into a finite field; `Rat` is an
/// exact rational in lowest terms. Which finite field an index refers to is
/// determined by the `FieldSpec` used to operate on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Fin(u16),
    Rat(BigRational),
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Fin(i) => write!(f, "{i}"),
            FieldElem::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl FieldElem {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Fin(i) => *i == 0,
            FieldElem::Rat(r) => r.is_zero(),
        }
    }

    /// Sign of a rational element (-1, 0, 1); None for finite fields,
    /// which are not ordered.
    pub fn rational_sign(&self) -> Option<i8> {
        match self {
            FieldElem::Fin(_) => None,
            FieldElem::Rat(r) => Some(if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }),
        }
    }
}

/// Log/antilog tables for one finite field. All raw operations work on
/// canonical u16 indices; the enumeration kernels use these directly.
#[derive(Debug)]
pub(crate) struct GfTables {
    pub p: u32,
    pub n: u32,
    pub q: u32,
    /// exp[k] = g^k for a fixed generator g, doubled to 2(q-1) entries so
    /// that index sums never need reduction.
    exp: Vec<u16>,
    /// log[a] for a != 0; log[0] is a sentinel.
    log: Vec<u16>,
    neg_t: Vec<u16>,
    /// Full addition table when q is small enough to afford one.
    add_t: Vec<u16>,
}

const LOG_ZERO: u16 = u16::MAX;
const ADD_TABLE_MAX_Q: u32 = 512;

impl GfTables {
    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        if self.p == 2 {
            return a ^ b;
        }
        if !self.add_t.is_empty() {
            return self.add_t[a as usize * self.q as usize + b as usize];
        }
        digit_add(self.p, a, b)
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        if self.p == 2 {
            a
        } else {
            self.neg_t[a as usize]
        }
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    /// a must be nonzero.
    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        debug_assert!(a != 0);
        self.exp[(self.q - 1) as usize - self.log[a as usize] as usize]
    }

    pub fn pow(&self, a: u16, e: u64) -> u16 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let m = (self.q - 1) as u64;
        let k = (self.log[a as usize] as u64 * (e % m)) % m;
        self.exp[k as usize]
    }

    pub fn trace(&self, a: u16) -> u16 {
        let mut acc = 0u16;
        let mut power = 1u64;
        for _ in 0..self.n {
            acc = self.add(acc, self.pow(a, power));
            power *= self.p as u64;
        }
        acc
    }

    /// Euler criterion via table logs; only meaningful for odd q.
    #[inline]
    pub fn is_square(&self, a: u16) -> bool {
        a == 0 || self.log[a as usize] % 2 == 0
    }

    pub fn sqrt(&self, a: u16) -> Option<u16> {
        if a == 0 {
            return Some(0);
        }
        if self.p == 2 {
            return Some(self.pow(a, (self.q / 2) as u64));
        }
        let l = self.log[a as usize];
        if l % 2 == 0 {
            Some(self.exp[(l / 2) as usize])
        } else {
            None
        }
    }
}

#[inline]
fn digit_add(p: u32, a: u16, b: u16) -> u16 {
    let (mut a, mut b) = (a as u32, b as u32);
    let mut out = 0u32;
    let mut place = 1u32;
    while a != 0 || b != 0 {
        out += ((a + b) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out as u16
}

fn digit_neg(p: u32, a: u16) -> u16 {
    let mut a = a as u32;
    let mut out = 0u32;
    let mut place = 1u32;
    while a != 0 {
        out += ((p - a % p) % p) * place;
        a /= p;
        place *= p;
    }
    out as u16
}

// Dense polynomial helpers over GF(p), used only while building tables.
// Coefficient vectors are low-to-high and not normalized.

fn poly_mul_mod(p: u64, modulus: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // Reduce by the monic modulus.
    for d in (n..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for k in 0..n {
            let sub = c * modulus[k] % p;
            prod[d - n + k] = (prod[d - n + k] + p * p - sub) % p;
        }
    }
    prod.truncate(n.max(1));
    prod
}

fn poly_index(p: u64, coeffs: &[u64]) -> u64 {
    let mut idx = 0u64;
    for &c in coeffs.iter().rev() {
        idx = idx * p + c;
    }
    idx
}

fn index_poly(p: u64, n: usize, mut idx: u64) -> Vec<u64> {
    let mut out = vec![0u64; n.max(1)];
    for slot in out.iter_mut() {
        *slot = idx % p;
        idx /= p;
    }
    out
}

/// Divides `num` by monic `den` over GF(p); returns the remainder.
fn poly_rem(p: u64, num: &[u64], den: &[u64]) -> Vec<u64> {
    let dd = den.len() - 1;
    let mut rem: Vec<u64> = num.to_vec();
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let deg = rem.len() - 1;
        if lead != 0 {
            for k in 0..=dd {
                let sub = lead * den[k] % p;
                rem[deg - dd + k] = (rem[deg - dd + k] + p * p - sub) % p;
            }
        }
        rem.pop();
        while rem.len() > dd && *rem.last().unwrap() == 0 {
            if rem.len() == 1 {
                break;
            }
            rem.pop();
        }
    }
    rem
}

fn poly_is_zero(poly: &[u64]) -> bool {
    poly.iter().all(|&c| c == 0)
}

/// Trial division by every monic polynomial of degree 1..=deg/2. Exhaustive
/// and cheap at the supported sizes.
fn poly_irreducible(p: u64, poly: &[u64]) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for c in 0..count {
            let mut div = index_poly(p, d, c);
            div.push(1);
            if poly_is_zero(&poly_rem(p, poly, &div)) {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn is_prime(p: u64) -> bool {
    p >= 2 && prime_factors(p) == [p]
}

/// Checks whether the element with the given index has full multiplicative
/// order, using generic polynomial arithmetic (tables may not exist yet).
fn has_full_order(p: u64, modulus: &[u64], q: u64, idx: u64) -> bool {
    if idx == 0 {
        return false;
    }
    let n = modulus.len() - 1;
    let elt = index_poly(p, n, idx);
    let pow = |mut e: u64| -> Vec<u64> {
        let mut base = elt.clone();
        let mut acc = index_poly(p, n, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mul_mod(p, modulus, &acc, &base);
            }
            base = poly_mul_mod(p, modulus, &base, &base);
            e >>= 1;
        }
        acc
    };
    let one = index_poly(p, n, 1);
    if pow(q - 1) != one {
        return false;
    }
    prime_factors(q - 1).iter().all(|&f| pow((q - 1) / f) != one)
}

fn build_tables(p: u64, n: usize, modulus: &[u64]) -> Result<GfTables, FieldError> {
    let q = p.pow(n as u32);
    let generator = (1..q)
        .find(|&idx| has_full_order(p, modulus, q, idx))
        .ok_or(FieldError::BadModulus)?;

    let mut exp = vec![0u16; 2 * (q - 1) as usize];
    let mut log = vec![LOG_ZERO; q as usize];
    let gen_poly = index_poly(p, n, generator);
    let mut acc = index_poly(p, n, 1);
    for k in 0..(q - 1) as usize {
        let idx = poly_index(p, &acc) as u16;
        exp[k] = idx;
        exp[k + (q - 1) as usize] = idx;
        log[idx as usize] = k as u16;
        acc = poly_mul_mod(p, modulus, &acc, &gen_poly);
    }
    if poly_index(p, &acc) != 1 {
        return Err(FieldError::BadModulus);
    }

    let neg_t = (0..q as u32).map(|a| digit_neg(p as u32, a as u16)).collect();
    let add_t = if (q as u32) <= ADD_TABLE_MAX_Q {
        let mut t = vec![0u16; (q * q) as usize];
        for a in 0..q as u32 {
            for b in 0..q as u32 {
                t[(a * q as u32 + b) as usize] = digit_add(p as u32, a as u16, b as u16);
            }
        }
        t
    } else {
        Vec::new()
    };

    Ok(GfTables {
        p: p as u32,
        n: n as u32,
        q: q as u32,
        exp,
        log,
        neg_t,
        add_t,
    })
}

/// Deterministic default modulus: the least monic polynomial of degree n
/// (in canonical coefficient packing) that is irreducible and has x as a
/// generator of the multiplicative group. Computing it fresh gives the same
/// polynomial on every run, so enumeration order is reproducible.
fn default_modulus(p: u64, n: usize) -> Result<Vec<u64>, FieldError> {
    if n == 1 {
        return Ok(vec![0, 1]);
    }
    let q = p.pow(n as u32);
    for c in 0..q {
        let mut candidate = index_poly(p, n, c);
        candidate.push(1);
        if !poly_irreducible(p, &candidate) {
            continue;
        }
        if has_full_order(p, &candidate, q, p) {
            return Ok(candidate);
        }
    }
    Err(FieldError::BadModulus)
}

#[derive(Debug)]
enum Repr {
    Finite {
        p: u64,
        n: usize,
        modulus: Vec<u64>,
        tables: GfTables,
    },
    Rational,
}

/// Handle to a field. Cheap to clone; equality is structural on
/// (p, n, modulus) for finite fields.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    repr: Arc<Repr>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.repr, &other.repr) {
            return true;
        }
        match (&*self.repr, &*other.repr) {
            (Repr::Rational, Repr::Rational) => true,
            (
                Repr::Finite { p, n, modulus, .. },
                Repr::Finite {
                    p: p2,
                    n: n2,
                    modulus: m2,
                    ..
                },
            ) => p == p2 && n == n2 && modulus == m2,
            _ => false,
        }
    }
}
impl Eq for FieldSpec {}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.repr {
            Repr::Rational => write!(f, "Q"),
            Repr::Finite { p, n: 1, .. } => write!(f, "GF({p})"),
            Repr::Finite { p, n, .. } => write!(f, "GF({p}^{n})"),
        }
    }
}

fn rat(n: BigInt, d: BigInt) -> FieldElem {
    FieldElem::Rat(BigRational::new(n, d))
}

impl FieldSpec {
    pub fn rational() -> FieldSpec {
        FieldSpec {
            repr: Arc::new(Repr::Rational),
        }
    }

    /// Prime field GF(p).
    pub fn gf(p: u64) -> Result<FieldSpec, FieldError> {
        FieldSpec::gf_ext(p, 1)
    }

    /// GF(p^n) with the deterministic default modulus.
    pub fn gf_ext(p: u64, n: usize) -> Result<FieldSpec, FieldError> {
        let modulus = default_modulus(p, check_order(p, n)?)?;
        FieldSpec::build_finite(p, n, modulus)
    }

    /// GF(p^n) with a caller-supplied modulus, low-to-high coefficients
    /// including the leading one. Irreducibility is verified exhaustively.
    pub fn gf_ext_with_modulus(p: u64, n: usize, modulus: &[u64]) -> Result<FieldSpec, FieldError> {
        check_order(p, n)?;
        if modulus.len() != n + 1 || modulus[n] != 1 {
            return Err(FieldError::BadModulus);
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus);
        }
        if !poly_irreducible(p, modulus) {
            return Err(FieldError::BadModulus);
        }
        FieldSpec::build_finite(p, n, modulus.to_vec())
    }

    fn build_finite(p: u64, n: usize, modulus: Vec<u64>) -> Result<FieldSpec, FieldError> {
        let tables = build_tables(p, n, &modulus)?;
        Ok(FieldSpec {
            repr: Arc::new(Repr::Finite {
                p,
                n,
                modulus,
                tables,
            }),
        })
    }

    pub fn is_rational(&self) -> bool {
        matches!(&*self.repr, Repr::Rational)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_rational()
    }

    /// Field order for finite fields.
    pub fn order(&self) -> Option<u64> {
        match &*self.repr {
            Repr::Finite { tables, .. } => Some(tables.q as u64),
            Repr::Rational => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.repr {
            Repr::Finite { p, .. } => *p,
            Repr::Rational => 0,
        }
    }

    pub fn extension_degree(&self) -> Option<usize> {
        match &*self.repr {
            Repr::Finite { n, .. } => Some(*n),
            Repr::Rational => None,
        }
    }

    /// Modulus coefficients, low-to-high, for finite fields.
    pub fn modulus(&self) -> Option<&[u64]> {
        match &*self.repr {
            Repr::Finite { modulus, .. } => Some(modulus),
            Repr::Rational => None,
        }
    }

    pub(crate) fn tables(&self) -> Option<&GfTables> {
        match &*self.repr {
            Repr::Finite { tables, .. } => Some(tables),
            Repr::Rational => None,
        }
    }

    pub fn zero(&self) -> FieldElem {
        match &*self.repr {
            Repr::Finite { .. } => FieldElem::Fin(0),
            Repr::Rational => FieldElem::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> FieldElem {
        match &*self.repr {
            Repr::Finite { .. } => FieldElem::Fin(1),
            Repr::Rational => FieldElem::Rat(BigRational::one()),
        }
    }

    /// Canonical image of an integer.
    pub fn from_int(&self, v: i64) -> FieldElem {
        match &*self.repr {
            Repr::Finite { p, .. } => {
                let r = v.rem_euclid(*p as i64) as u16;
                FieldElem::Fin(r)
            }
            Repr::Rational => FieldElem::Rat(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// Exact rational n/d; only valid over the rationals.
    pub fn from_ratio(&self, n: i64, d: i64) -> Result<FieldElem, FieldError> {
        match &*self.repr {
            Repr::Rational => {
                if d == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(rat(BigInt::from(n), BigInt::from(d)))
            }
            _ => Err(FieldError::Unsupported("ratios need the rational field")),
        }
    }

    /// Finite field element by canonical index. Panics out of range; this is
    /// a test/construction convenience, boundary code validates separately.
    pub fn fin(&self, idx: u64) -> FieldElem {
        let q = self.order().expect("fin() needs a finite field");
        assert!(idx < q, "index {idx} out of range for field of order {q}");
        FieldElem::Fin(idx as u16)
    }

    /// All q elements in canonical index order.
    pub fn enumerate(&self) -> Result<impl Iterator<Item = FieldElem>, FieldError> {
        match self.order() {
            Some(q) => Ok((0..q).map(|i| FieldElem::Fin(i as u16))),
            None => Err(FieldError::Unsupported("cannot enumerate the rationals")),
        }
    }

    pub fn check_elem(&self, a: &FieldElem) -> Result<(), FieldError> {
        match (&*self.repr, a) {
            (Repr::Finite { tables, .. }, FieldElem::Fin(i)) => {
                if (*i as u32) < tables.q {
                    Ok(())
                } else {
                    Err(FieldError::FieldMismatch)
                }
            }
            (Repr::Rational, FieldElem::Rat(_)) => Ok(()),
            _ => Err(FieldError::FieldMismatch),
        }
    }

    #[inline]
    fn fin_idx(&self, a: &FieldElem) -> u16 {
        match a {
            FieldElem::Fin(i) => *i,
            FieldElem::Rat(_) => panic!("rational element used with {self}"),
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match &*self.repr {
            Repr::Finite { tables, .. } => {
                FieldElem::Fin(tables.add(self.fin_idx(a), self.fin_idx(b)))
            }
            Repr::Rational => match (a, b) {
                (FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x + y),
                _ => panic!("finite element used with the rational field"),
            },
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match &*self.repr {
            Repr::Finite { tables, .. } => {
                FieldElem::Fin(tables.sub(self.fin_idx(a), self.fin_idx(b)))
            }
            Repr::Rational => match (a, b) {
                (FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x - y),
                _ => panic!("finite element used with the rational field"),
            },
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        match &*self.repr {
            Repr::Finite { tables, .. } => FieldElem::Fin(tables.neg(self.fin_idx(a))),
            Repr::Rational => match a {
                FieldElem::Rat(x) => FieldElem::Rat(-x),
                _ => panic!("finite element used with the rational field"),
            },
        }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match &*self.repr {
            Repr::Finite { tables, .. } => {
                FieldElem::Fin(tables.mul(self.fin_idx(a), self.fin_idx(b)))
            }
            Repr::Rational => match (a, b) {
                (FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x * y),
                _ => panic!("finite element used with the rational field"),
            },
        }
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &*self.repr {
            Repr::Finite { tables, .. } => FieldElem::Fin(tables.inv(self.fin_idx(a))),
            Repr::Rational => match a {
                FieldElem::Rat(x) => FieldElem::Rat(x.recip()),
                _ => panic!("finite element used with the rational field"),
            },
        })
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, FieldError> {
        let ib = self.inv(b)?;
        Ok(self.mul(a, &ib))
    }

    pub fn pow(&self, a: &FieldElem, e: u64) -> FieldElem {
        match &*self.repr {
            Repr::Finite { tables, .. } => FieldElem::Fin(tables.pow(self.fin_idx(a), e)),
            Repr::Rational => {
                let mut acc = self.one();
                let mut base = a.clone();
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul(&acc, &base);
                    }
                    base = self.mul(&base, &base);
                    e >>= 1;
                }
                acc
            }
        }
    }

    /// Absolute trace to the prime subfield.
    pub fn trace(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        match &*self.repr {
            Repr::Finite { tables, .. } => {
                let t = tables.trace(self.fin_idx(a));
                debug_assert!((t as u32) < tables.p);
                Ok(FieldElem::Fin(t))
            }
            Repr::Rational => Err(FieldError::Unsupported("trace needs a finite field")),
        }
    }

    /// Whether a is a square in this field. Zero counts as a square.
    /// Rejected for GF(2^n), where squaring is a bijection.
    pub fn is_square(&self, a: &FieldElem) -> Result<bool, FieldError> {
        match &*self.repr {
            Repr::Finite { p: 2, .. } => Err(FieldError::Unsupported(
                "is_square is trivial in characteristic two",
            )),
            Repr::Finite { tables, .. } => Ok(tables.is_square(self.fin_idx(a))),
            Repr::Rational => match a {
                FieldElem::Rat(x) => {
                    if x.is_zero() {
                        return Ok(true);
                    }
                    if x.is_negative() {
                        return Ok(false);
                    }
                    Ok(is_perfect_square(x.numer()) && is_perfect_square(x.denom()))
                }
                _ => panic!("finite element used with the rational field"),
            },
        }
    }

    /// Least non-square in canonical order; -1 over the rationals.
    pub fn find_nonsquare(&self) -> Result<FieldElem, FieldError> {
        match &*self.repr {
            Repr::Finite { p: 2, .. } => Err(FieldError::NoNonsquare),
            Repr::Finite { tables, .. } => {
                for idx in 1..tables.q as u16 {
                    if !tables.is_square(idx) {
                        return Ok(FieldElem::Fin(idx));
                    }
                }
                unreachable!("odd field has non-squares")
            }
            Repr::Rational => Ok(self.from_int(-1)),
        }
    }

    /// Some square root of a when one exists. Deterministic choice.
    pub fn sqrt(&self, a: &FieldElem) -> Option<FieldElem> {
        match &*self.repr {
            Repr::Finite { tables, .. } => tables.sqrt(self.fin_idx(a)).map(FieldElem::Fin),
            Repr::Rational => match a {
                FieldElem::Rat(x) => {
                    if x.is_zero() {
                        return Some(self.zero());
                    }
                    if x.is_negative() {
                        return None;
                    }
                    let rn = x.numer().sqrt();
                    let rd = x.denom().sqrt();
                    if &(&rn * &rn) == x.numer() && &(&rd * &rd) == x.denom() {
                        Some(rat(rn, rd))
                    } else {
                        None
                    }
                }
                _ => panic!("finite element used with the rational field"),
            },
        }
    }

    /// Whether a*t^2 + b*t + c is irreducible. In odd or zero characteristic
    /// this is the discriminant square test; in characteristic two it is the
    /// absolute trace criterion trace(a*c/b^2) = 1, with b = 0 always
    /// reducible.
    pub fn quadratic_irreducible(
        &self,
        a: &FieldElem,
        b: &FieldElem,
        c: &FieldElem,
    ) -> Result<bool, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DegenerateLeadingCoefficient);
        }
        if self.characteristic() == 2 {
            if b.is_zero() {
                return Ok(false);
            }
            let b2 = self.mul(b, b);
            let v = self.div(&self.mul(a, c), &b2)?;
            return Ok(self.trace(&v)? == self.one());
        }
        let four = self.from_int(4);
        let disc = self.sub(&self.mul(b, b), &self.mul(&four, &self.mul(a, c)));
        Ok(!self.is_square(&disc)?)
    }

    /// Least element of absolute trace one; only for finite fields.
    pub fn least_trace_one(&self) -> Result<FieldElem, FieldError> {
        let tables = self
            .tables()
            .ok_or(FieldError::Unsupported("trace needs a finite field"))?;
        for idx in 0..tables.q as u16 {
            if tables.trace(idx) == 1 {
                return Ok(FieldElem::Fin(idx));
            }
        }
        unreachable!("trace is surjective onto the prime subfield")
    }

    /// Parse "a" or "a/b" over the rationals, or a bare index over a finite
    /// field.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem, FieldError> {
        match &*self.repr {
            Repr::Finite { tables, .. } => {
                let idx: u64 = s.trim().parse().map_err(|_| FieldError::FieldMismatch)?;
                if idx < tables.q as u64 {
                    Ok(FieldElem::Fin(idx as u16))
                } else {
                    Err(FieldError::FieldMismatch)
                }
            }
            Repr::Rational => {
                let s = s.trim();
                let (ns, ds) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n: BigInt = ns.trim().parse().map_err(|_| FieldError::FieldMismatch)?;
                let d: BigInt = ds.trim().parse().map_err(|_| FieldError::FieldMismatch)?;
                if d.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(rat(n, d))
            }
        }
    }
}

fn is_perfect_square(v: &BigInt) -> bool {
    if v.is_negative() {
        return false;
    }
    let r = v.sqrt();
    &(&r * &r) == v
}

pub(crate) fn check_order(p: u64, n: usize) -> Result<usize, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if n == 0 {
        return Err(FieldError::OrderOutOfRange(1));
    }
    let q = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if q < 2 || q > MAX_FIELD_ORDER as u128 {
        return Err(FieldError::OrderOutOfRange(q.min(u64::MAX as u128) as u64));
    }
    Ok(n)
}
