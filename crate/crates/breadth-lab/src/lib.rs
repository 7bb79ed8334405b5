//! Exact linear and Lie-algebraic computation over small finite fields and
//! the rationals, organized around breadth types of nilpotent Lie algebras.
//!
//! The breadth of an element x of a finite dimensional Lie algebra L is the
//! rank of ad x; the breadth type of L is the ordered list of distinct
//! breadths its elements attain. This crate computes breadth types exactly
//! by enumeration over finite fields, decides Camina-type conditions,
//! classifies central quotients of the free two-step algebra on four
//! generators into normal forms, and checks the corresponding statements on
//! the group side for p-groups of exponent p and class two.
//!
//! Modules build bottom-up: [`field`] (scalars), [`matrix`] (dense linear
//! algebra, subspaces, Pfaffians), [`liealg`] (structure constants, breadth),
//! [`bivector`] (alternating forms on the degree-two part), [`constructions`]
//! (standard families), [`camina`] (Camina conditions and skew rank
//! searches), [`normal_form`] (generator changes and classification),
//! [`groupcorr`] (the group correspondence), [`io`] (JSON formats), and
//! [`campaign`] (reproducible verification runs used by the CLI).

pub mod bivector;
pub mod camina;
pub mod campaign;
pub mod constructions;
pub mod field;
pub mod groupcorr;
pub mod io;
pub mod liealg;
pub mod matrix;
pub mod normal_form;

pub use field::{FieldElem, FieldError, FieldSpec};
