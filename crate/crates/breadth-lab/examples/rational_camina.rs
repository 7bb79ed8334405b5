//! A rational three dimensional ideal whose quotient is a Camina algebra:
//! quaternion-style structure matrices, exact over Q, and what happens to
//! the same ideal over GF(3).
//!
//! ```bash
//! cargo run --example rational_camina
//! ```

use breadth_lab::bivector::{bracket_free, FreeIdealStatus};
use breadth_lab::camina::{check_span_nonsingular, rational_quaternion_family, SpanCheck};
use breadth_lab::constructions::{ideal_dim3_quaternion, quotient_free_two_step};
use breadth_lab::field::FieldSpec;
use breadth_lab::matrix::Matrix;
use breadth_lab::normal_form::{classify_4gen_2step, Family};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = FieldSpec::rational();

    // Three alternating 4x4 matrices that square to -I and anticommute, so
    // the determinant of a X1 + b X2 + c X3 is (a^2 + b^2 + c^2)^2: a sum
    // of squares, hence nonzero for every nonzero rational combination.
    let xs = rational_quaternion_family();
    let neg_id = Matrix::identity(&q, 4).neg();
    for (i, x) in xs.iter().enumerate() {
        println!("X{}^2 == -I: {}", i + 1, x.matmul(x) == neg_id);
    }
    let det = xs[0]
        .scale(&q.from_int(1))
        .add(&xs[1].scale(&q.from_int(2)))
        .add(&xs[2].scale(&q.from_int(3)))
        .det();
    println!("det(X1 + 2 X2 + 3 X3) = {det} = (1 + 4 + 9)^2");
    let span = check_span_nonsingular(&xs, 1 << 20)?;
    println!("rational span check: {:?}", matches!(span, SpanCheck::AllNonsingular));

    // The matching wedge-coordinate ideal is bracket-free over Q...
    let ideal_q = ideal_dim3_quaternion(&q);
    println!("over Q: {:?}", bracket_free(4, &ideal_q));

    // ...and its quotient is the Camina entry of the classification.
    let a = quotient_free_two_step(&q, 4, &ideal_q);
    let c = classify_4gen_2step(&a, 1 << 20)?;
    println!(
        "quotient over Q: family {:?}, label {:?}",
        c.family,
        c.family.roman_label(&q)
    );
    assert_eq!(c.family, Family::CaminaDerivedDim3);

    // Over GF(3) the sum of three squares can vanish, so the same ideal
    // picks up a decomposable member and falls out of the family.
    let f3 = FieldSpec::gf_ext(3, 1)?;
    let ideal_3 = ideal_dim3_quaternion(&f3);
    match bracket_free(4, &ideal_3) {
        FreeIdealStatus::HasDecomposable { witness } => {
            println!("over GF(3): decomposable member with coords {:?}", witness.coords());
        }
        other => println!("over GF(3): {other:?}"),
    }
    Ok(())
}
