//! Scan central ideals of the free two-step algebra on four generators and
//! count which quotients still have a free derived subalgebra.
//!
//! ```bash
//! cargo run --example central_quotients
//! ```

use breadth_lab::bivector::{bracket_free, FreeIdealStatus};
use breadth_lab::constructions::quotient_free_two_step;
use breadth_lab::field::FieldSpec;
use breadth_lab::matrix::enumerate_subspaces;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = FieldSpec::gf_ext(3, 1)?;
    let gens = 4;
    let wedge = gens * (gens - 1) / 2;
    let is_free = |s: &breadth_lab::matrix::Subspace| {
        matches!(bracket_free(gens, s), FreeIdealStatus::Free)
    };

    for dim in 1..=3 {
        let mut scanned = 0u64;
        let mut free = 0u64;
        for ideal in enumerate_subspaces(&f, wedge, dim)? {
            scanned += 1;
            if is_free(&ideal) {
                free += 1;
            }
        }
        println!("ideals of dim {dim}: {scanned} scanned, {free} bracket-free");
    }

    // One bracket-free line, quotiented and measured.
    let line = enumerate_subspaces(&f, wedge, 1)?
        .find(&is_free)
        .expect("a bracket-free line exists");
    let pretty: Vec<String> = line
        .basis_rows()
        .map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    println!("first bracket-free line: {}", pretty.join("; "));
    let a = quotient_free_two_step(&f, gens, &line);
    let bt = a.breadth_type_with_budget(1 << 20)?;
    println!(
        "quotient by it: dim {}, breadths {:?}, complete {}",
        a.dim(),
        bt.breadths,
        bt.complete
    );

    // A line through a decomposable bivector never gives breadths [0, 3].
    let dec = enumerate_subspaces(&f, wedge, 1)?
        .find(|s| !is_free(s))
        .expect("a decomposable line exists");
    let b = quotient_free_two_step(&f, gens, &dec);
    let bt = b.breadth_type_with_budget(1 << 20)?;
    println!("quotient by a decomposable line: breadths {:?}", bt.breadths);
    assert_ne!(bt.breadths, vec![0, 3]);
    Ok(())
}
