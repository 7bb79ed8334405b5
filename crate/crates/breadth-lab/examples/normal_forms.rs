//! Canonical forms for central ideals of the free two-step algebra on four
//! generators, and the family classifier built on top of them.
//!
//! ```bash
//! cargo run --example normal_forms
//! ```

use breadth_lab::constructions::{
    ideal_dim1, ideal_dim2_even, ideal_dim2_odd, ideal_dim3_quaternion,
    quotient_free_two_step,
};
use breadth_lab::field::FieldSpec;
use breadth_lab::matrix::Subspace;
use breadth_lab::normal_form::{classify_4gen_2step, reduce_dim1, reduce_dim2_odd, FamilyTag};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f3 = FieldSpec::gf_ext(3, 1)?;
    let f4 = FieldSpec::gf_ext(2, 2)?;
    let budget = 1 << 20;

    // Every bracket-free line reduces to the canonical two-block line, and
    // the canonical line is a fixed point of its own reduction.
    let canon = ideal_dim1(&f3);
    let r = reduce_dim1(4, &canon)?;
    println!(
        "dim 1: tag {:?}, canonical ideal stable: {}",
        r.tag,
        r.canonical_ideal == canon
    );

    // Dimension two splits by characteristic. Odd: the invariant is the
    // least nonsquare. Even: the least trace-one element.
    let t = f3.find_nonsquare()?;
    let r = reduce_dim2_odd(&ideal_dim2_odd(&f3, &t))?;
    match &r.tag {
        FamilyTag::DimTwoOdd(param) => println!("dim 2 odd over GF(3): parameter {param}"),
        other => println!("unexpected tag {other:?}"),
    }
    let z = f4.least_trace_one()?;
    println!(
        "dim 2 even over GF(4): pivot {z}, ideal dim {}",
        ideal_dim2_even(&f4, &z).dim()
    );

    // The classifier names the family of a full quotient algebra.
    let cases: Vec<(&str, FieldSpec, Subspace)> = vec![
        ("zero ideal", f3.clone(), Subspace::zero(&f3, 6)),
        ("canonical line", f3.clone(), ideal_dim1(&f3)),
        ("canonical plane", f3.clone(), ideal_dim2_odd(&f3, &t)),
        (
            "quaternion ideal",
            FieldSpec::rational(),
            ideal_dim3_quaternion(&FieldSpec::rational()),
        ),
    ];
    for (name, f, ideal) in cases {
        let a = quotient_free_two_step(&f, 4, &ideal);
        let c = classify_4gen_2step(&a, budget)?;
        println!(
            "{name:<16} over {f}: family {:?}, label {:?}, stem dim {}",
            c.family,
            c.family.roman_label(&f),
            c.stem_dim
        );
    }
    Ok(())
}
