//! Breadth types of the named families, exhaustively over small finite
//! fields and by sampling over the rationals.
//!
//! ```bash
//! cargo run --example breadth_types
//! ```

use breadth_lab::constructions::{
    degree_heisenberg, five_dim_three_step, free_two_step, heisenberg, sl2,
};
use breadth_lab::field::FieldSpec;
use breadth_lab::liealg::LieAlgebra;

fn show(name: &str, a: &LieAlgebra) -> Result<(), Box<dyn std::error::Error>> {
    let bt = a.breadth_type_with_budget(1 << 20)?;
    let class = match a.nilpotency_class() {
        Some(c) => format!("class {c}"),
        None => "not nilpotent".to_string(),
    };
    println!(
        "{name:<28} dim {:>2}  breadths {:?}  {}{}",
        a.dim(),
        bt.breadths,
        class,
        if bt.complete { "" } else { "  (sampled)" }
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f3 = FieldSpec::gf_ext(3, 1)?;
    let f5 = FieldSpec::gf_ext(5, 1)?;

    for m in 1..=4 {
        show(&format!("free two-step, {} gens", m + 1), &free_two_step(&f3, m + 1))?;
    }
    for m in 1..=4 {
        show(&format!("heisenberg m={m}"), &heisenberg(&f3, m))?;
    }
    for m in 1..=3 {
        show(&format!("degree heisenberg m={m}"), &degree_heisenberg(&f3, m))?;
    }
    show("sl2 over GF(5)", &sl2(&f5))?;
    show("five dim, three step", &five_dim_three_step(&f3))?;

    // An abelian direct summand never changes the breadth type.
    let a = heisenberg(&f3, 2);
    let b = a.direct_sum(&LieAlgebra::abelian(&f3, 3));
    show("heisenberg m=2 + abelian^3", &b)?;

    // Over the rationals there is nothing to enumerate, so the scan samples.
    let q = FieldSpec::rational();
    let bt = free_two_step(&q, 3).breadth_type_sampled(2_000, 1);
    println!(
        "free two-step over Q (sampled) breadths {:?} complete {}",
        bt.breadths, bt.complete
    );
    Ok(())
}
