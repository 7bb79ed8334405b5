//! Exact arithmetic in small finite fields and the rationals.
//!
//! ```bash
//! cargo run --example field_arithmetic
//! ```

use breadth_lab::field::{FieldElem, FieldSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // GF(9) as GF(3)[x] modulo a monic degree-2 polynomial with x primitive.
    let f9 = FieldSpec::gf_ext(3, 2)?;
    println!("GF(9) modulus (ascending coefficients): {:?}", f9.modulus());

    let x = f9.fin(3); // the class of x
    let mut pow = f9.one();
    print!("powers of x:");
    for _ in 0..8 {
        pow = f9.mul(&pow, &x);
        print!(" {pow}");
    }
    println!();

    // Every finite field of odd order has a least nonsquare; in
    // characteristic two the analogous pivot is a least trace-one element.
    let f7 = FieldSpec::gf_ext(7, 1)?;
    println!("least nonsquare in GF(7): {}", f7.find_nonsquare()?);
    let f4 = FieldSpec::gf_ext(2, 2)?;
    println!("least trace-one element of GF(4): {}", f4.least_trace_one()?);

    // t^2 + t + 1 has no root over GF(2) but splits over GF(4).
    for f in [&FieldSpec::gf_ext(2, 1)?, &f4] {
        let irred = f.quadratic_irreducible(&f.one(), &f.one(), &f.one())?;
        println!(
            "t^2 + t + 1 irreducible over order {:?}: {}",
            f.order(),
            irred
        );
    }

    // The rationals are exact too: (2/3 + 1/6) * 6/5 = 1.
    let q = FieldSpec::rational();
    let sum = q.add(
        &q.div(&q.from_int(2), &q.from_int(3))?,
        &q.div(&q.from_int(1), &q.from_int(6))?,
    );
    let prod = q.mul(&sum, &q.div(&q.from_int(6), &q.from_int(5))?);
    println!("(2/3 + 1/6) * 6/5 = {prod}");
    assert_eq!(prod, q.one());

    // FieldElem values carry no field pointer; the spec owns the tables.
    let back_and_forth: FieldElem = f9.neg(&f9.neg(&x));
    assert_eq!(back_and_forth, x);
    Ok(())
}
