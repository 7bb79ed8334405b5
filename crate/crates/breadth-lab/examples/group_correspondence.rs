//! Finite p-groups built from the free two-step algebra: conjugacy class
//! sizes of central quotients match breadths on the algebra side.
//!
//! ```bash
//! cargo run --example group_correspondence
//! ```

use breadth_lab::constructions::ideal_dim1;
use breadth_lab::field::FieldSpec;
use breadth_lab::groupcorr::ExponentPGroup;
use breadth_lab::matrix::Subspace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 3u64;
    let f = FieldSpec::gf_ext(p, 1)?;
    let budget = 1 << 20;

    // Two generators: the full group has order p^3 and conjugate type
    // (1, p); the algebra it shadows is the Heisenberg algebra with
    // breadths (0, 1).
    let g = ExponentPGroup::new(p, 1)?;
    let zero = Subspace::zero(&f, 1);
    let report = g.verify_correspondence(&zero, budget)?;
    println!(
        "m = 1: group order {}, conjugate exponents {:?}, breadth exponents {:?}, ok {}",
        report.group_order, report.conjugate_exponents, report.breadth_exponents, report.ok
    );

    // Four generators, quotient by the canonical bracket-free line: class
    // sizes (1, p^3) against breadths (0, 3).
    let g = ExponentPGroup::new(p, 3)?;
    let line = ideal_dim1(&f);
    let report = g.verify_correspondence(&line, budget)?;
    println!(
        "m = 3: group order {}, conjugate exponents {:?}, breadth exponents {:?}, ok {}",
        report.group_order, report.conjugate_exponents, report.breadth_exponents, report.ok
    );

    // Every central subgroup of the three generator group, exhaustively.
    let g = ExponentPGroup::new(p, 2)?;
    let mut checked = 0u64;
    for dim in 0..=3 {
        for n in breadth_lab::matrix::enumerate_subspaces(&f, 3, dim)? {
            let r = g.verify_correspondence(&n, budget)?;
            assert!(r.ok, "mismatch at a central subgroup of dim {dim}");
            checked += 1;
        }
    }
    println!("m = 2: {checked} central subgroups, all consistent");
    Ok(())
}
