//! Acceptance gate: nine criteria, one test and one pass line each.
//! Frozen enumeration counts were produced by the independent oracles in
//! the unit suites before being pinned here; time bounds are asserted
//! directly so a regression in the exact kernels is caught loudly.

use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use breadth_lab::camina::{camina_via_structure_matrices, is_camina, CaminaError, SpanCheck};
use breadth_lab::campaign::{cmd_verify, CampaignOptions, CampaignReport};
use breadth_lab::constructions::{
    degree_heisenberg, five_dim_three_step, free_two_step, heisenberg, quotient_free_two_step,
    sl2,
};
use breadth_lab::field::{FieldElem, FieldSpec};
use breadth_lab::liealg::LieAlgebra;
use breadth_lab::matrix::{enumerate_subspaces, Matrix};

fn gf(p: u64, n: usize) -> FieldSpec {
    FieldSpec::gf_ext(p, n).unwrap()
}

fn finish(criterion: u32, name: &str, start: Instant, bound: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < bound,
        "criterion {criterion} ({name}): took {elapsed:?}, bound {bound:?}"
    );
    println!("criterion {criterion} ({name}): PASS in {elapsed:?}");
}

fn run_default(theorem: &str, field: Option<&FieldSpec>) -> CampaignReport {
    cmd_verify(theorem, field, &CampaignOptions::default()).unwrap()
}

fn assert_clean(r: &CampaignReport, label: &str) {
    assert!(r.ok, "{label}: {:?}", r.details);
    assert_eq!(r.counts.failed, 0, "{label}");
    assert!(!r.budget_exhausted, "{label} exhausted its budget");
    assert_eq!(r.exit_code(), 0, "{label}");
}

fn prime_powers_up_to(limit: u64) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    for q in 2..=limit {
        let mut p = 2;
        while p * p <= q {
            if q % p == 0 {
                break;
            }
            p += 1;
        }
        let p = if q % p == 0 { p } else { q };
        let mut n = 0usize;
        let mut t = q;
        while t % p == 0 {
            t /= p;
            n += 1;
        }
        if t == 1 {
            out.push((p, n));
        }
    }
    out
}

fn check_field_axioms(f: &FieldSpec) {
    let q = f.order().unwrap();
    let elems: Vec<FieldElem> = (0..q).map(|i| f.fin(i)).collect();
    let zero = f.zero();
    let one = f.one();
    assert_ne!(zero, one);
    for a in &elems {
        assert_eq!(f.add(a, &zero), *a);
        assert_eq!(f.mul(a, &one), *a);
        assert_eq!(f.add(a, &f.neg(a)), zero);
        if !a.is_zero() {
            assert_eq!(f.mul(a, &f.inv(a).unwrap()), one);
        }
        for b in &elems {
            assert_eq!(f.add(a, b), f.add(b, a));
            assert_eq!(f.mul(a, b), f.mul(b, a));
            for c in &elems {
                assert_eq!(f.add(&f.add(a, b), c), f.add(a, &f.add(b, c)));
                assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                assert_eq!(
                    f.mul(a, &f.add(b, c)),
                    f.add(&f.mul(a, b), &f.mul(a, c))
                );
            }
        }
    }
}

fn random_alternating(f: &FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = random_elem(f, rng);
            m.set(i, j, v.clone());
            m.set(j, i, f.neg(&v));
        }
    }
    m
}

fn random_elem(f: &FieldSpec, rng: &mut ChaCha8Rng) -> FieldElem {
    match f.order() {
        Some(q) => f.fin(rng.gen_range(0..q)),
        None => {
            let num = f.from_int(rng.gen_range(-20..=20));
            let den = f.from_int(rng.gen_range(1..=20));
            f.div(&num, &den).unwrap()
        }
    }
}

#[test]
fn criterion_1_axioms_and_foundations() {
    let start = Instant::now();

    for (p, n) in prime_powers_up_to(64) {
        check_field_axioms(&gf(p, n));
    }

    let fields = [gf(2, 1), gf(3, 1), gf(5, 1), gf(2, 2), FieldSpec::rational()];
    for f in &fields {
        for m in 1..=4 {
            free_two_step(f, m + 1).validate().unwrap();
            heisenberg(f, m).validate().unwrap();
        }
        for m in 1..=3 {
            degree_heisenberg(f, m).validate().unwrap();
        }
        sl2(f).validate().unwrap();
        five_dim_three_step(f).validate().unwrap();
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..1000 {
        let f = &fields[trial % fields.len()];
        let n = 2 * (1 + trial % 4);
        let m = random_alternating(f, n, &mut rng);
        let pf = m.pfaffian().unwrap();
        assert_eq!(f.mul(&pf, &pf), m.det(), "pfaffian square at trial {trial}");
    }

    finish(1, "axioms and foundations", start, Duration::from_secs(10));
}

#[test]
fn criterion_2_named_family_breadth_types() {
    let start = Instant::now();
    let budget = 1 << 20;
    let f3 = gf(3, 1);
    let f5 = gf(5, 1);
    let f2 = gf(2, 1);

    for m in 1..=4usize {
        let a = free_two_step(&f3, m + 1);
        assert_eq!(a.dim(), (m + 1) * (m + 2) / 2, "free dim at m={m}");
        let bt = a.breadth_type_with_budget(budget).unwrap();
        assert!(bt.complete && bt.breadths == vec![0, m], "free type at m={m}");
    }
    for f in [&f3, &f5] {
        for m in 1..=4usize {
            let bt = heisenberg(f, m).breadth_type_with_budget(budget).unwrap();
            assert!(bt.complete && bt.breadths == vec![0, 1], "heisenberg m={m}");
        }
    }
    for m in 1..=3usize {
        let a = degree_heisenberg(&f3, m);
        let bt = a.breadth_type_with_budget(budget).unwrap();
        assert!(bt.complete && bt.breadths == vec![0, m], "degree heisenberg m={m}");
        assert!(is_camina(&a, budget).unwrap().camina, "degree heisenberg m={m}");
    }
    let a = sl2(&f5);
    let bt = a.breadth_type_with_budget(budget).unwrap();
    assert!(bt.complete && bt.breadths == vec![0, 2], "sl2");
    assert_eq!(a.nilpotency_class(), None, "sl2 is not nilpotent");
    for f in [&f3, &f2] {
        let a = five_dim_three_step(f);
        assert_eq!(a.nilpotency_class(), Some(3));
        let bt = a.breadth_type_with_budget(budget).unwrap();
        assert!(bt.complete && bt.breadths == vec![0, 2], "five dim three step");
    }

    for f in [&f3, &f5, &f2] {
        assert_clean(&run_default("t02", Some(f)), "t02");
    }
    assert_clean(&run_default("t01", Some(&f3)), "t01");

    finish(2, "named family breadth types", start, Duration::from_secs(30));
}

#[test]
fn criterion_3_exhaustive_three_layers_at_q3() {
    let start = Instant::now();
    let r = run_default("t03-odd", Some(&gf(3, 1)));
    assert_clean(&r, "t03-odd gf3");
    assert_eq!(r.stats["dim1_scanned"], 364);
    assert_eq!(r.stats["dim1_free"], 234);
    assert_eq!(r.stats["dim1_bt_checked"], 364);
    assert_eq!(r.stats["dim2_scanned"], 11011);
    assert_eq!(r.stats["dim2_free"], 2106);
    assert_eq!(r.stats["dim2_bt_checked"], 11011);
    assert_eq!(r.stats["dim2_param"], 2);
    assert_eq!(r.stats["dim3_scanned"], 33880);
    assert_eq!(r.stats["dim3_free"], 0);
    for layer in 1..=3 {
        assert_eq!(r.stats[&format!("dim{layer}_stride")], 1);
    }
    finish(3, "exhaustive three layers at q=3", start, Duration::from_secs(300));
}

#[test]
fn criterion_4_characteristic_two_layers() {
    let start = Instant::now();

    let r2 = run_default("t03-even", Some(&gf(2, 1)));
    assert_clean(&r2, "t03-even gf2");
    assert_eq!(r2.stats["dim1_scanned"], 63);
    assert_eq!(r2.stats["dim1_free"], 28);
    assert_eq!(r2.stats["dim2_scanned"], 651);
    assert_eq!(r2.stats["dim2_param"], 1);
    assert_eq!(r2.stats["dim3_scanned"], 1395);
    assert_eq!(r2.stats["dim3_free"], 0);

    let opts = CampaignOptions {
        budget: 1 << 25,
        ..CampaignOptions::default()
    };
    let r4 = cmd_verify("t03-even", Some(&gf(2, 2)), &opts).unwrap();
    assert!(r4.ok, "{:?}", r4.details);
    assert!(!r4.budget_exhausted);
    assert_eq!(r4.stats["dim1_scanned"], 1365);
    assert_eq!(r4.stats["dim1_free"], 1008);
    assert_eq!(r4.stats["dim2_scanned"], 93093);
    assert_eq!(r4.stats["dim2_free"], 24192);
    assert_eq!(r4.stats["dim2_param"], 2);
    assert_eq!(r4.stats["dim3_scanned"], 376805);
    assert_eq!(r4.stats["dim3_free"], 0);

    for r in [&r2, &r4] {
        assert_eq!(r.stats["quadratics_gf2^1"], 4);
        assert_eq!(r.stats["quadratics_gf2^2"], 16);
        assert_eq!(r.stats["quadratics_gf2^3"], 64);
    }

    finish(4, "characteristic two layers", start, Duration::from_secs(120));
}

#[test]
fn criterion_5_rank_subspace_search() {
    let start = Instant::now();
    for p in [2u64, 3] {
        let r = run_default("camina-bound", Some(&gf(p, 1)));
        assert_clean(&r, &format!("camina-bound gf{p}"));
        assert_eq!(r.stats["probe_n2_max"], 1, "gf{p}");
        assert_eq!(r.stats["probe_n3_max"], 0, "gf{p}");
        assert_eq!(r.stats["probe_n4_max"], 2, "gf{p}");
        assert_eq!(r.stats["probe_n4_complete"], 1, "gf{p}");
        for m in 1..=3 {
            assert_eq!(r.stats[&format!("cert_m{m}_ok")], 1, "gf{p}");
            assert_eq!(r.stats[&format!("doubled_m{m}_ok")], 1, "gf{p}");
        }
    }
    finish(5, "rank subspace search", start, Duration::from_secs(120));
}

#[test]
fn criterion_6_rational_constructions() {
    let start = Instant::now();
    let r = run_default("rational-camina", None);
    assert_clean(&r, "rational-camina");
    assert_eq!(r.stats["grid_triples"], 125);
    assert_eq!(r.stats["random_triples"], 100);
    finish(6, "rational constructions", start, Duration::from_secs(5));
}

#[test]
fn criterion_7_group_correspondence_at_p3() {
    let start = Instant::now();
    let r = run_default("correspondence", Some(&gf(3, 1)));
    assert_clean(&r, "correspondence gf3");
    assert_eq!(r.stats["assoc_m1"], 19683);
    assert_eq!(r.stats["assoc_m2"], 100_000);
    assert_eq!(r.stats["assoc_m3"], 100_000);
    assert_eq!(r.stats["square_m1"], 729);
    assert_eq!(r.stats["square_m2"], 531_441);
    assert_eq!(r.stats["square_m3"], 10_000);
    assert_eq!(r.stats["m2_subspaces"], 28);
    assert_eq!(r.stats["m3_subspaces"], 51);
    assert_eq!(r.stats["auto_m2"], 20);
    finish(7, "group correspondence at p=3", start, Duration::from_secs(120));
}

#[test]
fn criterion_8_structural_properties() {
    let start = Instant::now();
    let budget = 1 << 20;
    let f3 = gf(3, 1);

    // Both Camina routes agree on every class-two stem family in scope.
    let mut stems: Vec<(String, LieAlgebra)> = Vec::new();
    for f in [&gf(2, 1), &f3, &gf(5, 1)] {
        let q = f.order().unwrap();
        for m in 1..=4usize {
            stems.push((format!("free {} gf{q}", m + 1), free_two_step(f, m + 1)));
            stems.push((format!("heisenberg {m} gf{q}"), heisenberg(f, m)));
        }
        for m in 1..=3usize {
            stems.push((format!("degree heisenberg {m} gf{q}"), degree_heisenberg(f, m)));
        }
    }
    let mut compared = 0;
    for (name, a) in &stems {
        let direct = is_camina(a, budget).unwrap();
        match camina_via_structure_matrices(a, budget) {
            Ok(via) => {
                assert_eq!(
                    direct.camina,
                    matches!(via, SpanCheck::AllNonsingular),
                    "routes disagree on {name}"
                );
                compared += 1;
            }
            Err(CaminaError::BudgetExceeded { .. }) => {}
            Err(e) => panic!("span route failed on {name}: {e}"),
        }
    }
    assert!(compared >= 30, "only {compared} of {} stems compared", stems.len());

    // Breadth type ignores abelian direct summands; brackets are central in
    // class two; every nilpotent instance of two-breadth type has class <= 3.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let line_count = enumerate_subspaces(&f3, 6, 1).unwrap().count();
    let mut sampled: Vec<LieAlgebra> = (0..17)
        .map(|_| {
            let pick = rng.gen_range(0..line_count);
            let ideal = enumerate_subspaces(&f3, 6, 1).unwrap().nth(pick).unwrap();
            quotient_free_two_step(&f3, 4, &ideal)
        })
        .collect();
    sampled.push(heisenberg(&f3, 2));
    sampled.push(degree_heisenberg(&f3, 2));
    sampled.push(five_dim_three_step(&f3));
    assert_eq!(sampled.len(), 20);

    let mut central_triples = 0u64;
    for a in &sampled {
        let bt = a.breadth_type_with_budget(budget).unwrap().breadths;
        for d in 1..=3usize {
            let b = a.direct_sum(&LieAlgebra::abelian(&f3, d));
            let bt2 = b.breadth_type_with_budget(budget).unwrap().breadths;
            assert_eq!(bt, bt2, "abelian summand of dim {d} moved the type");
        }
        if bt.len() == 2 {
            let class = a.nilpotency_class().expect("sampled instances are nilpotent");
            assert!(class <= 3, "class {class} on a two-breadth instance");
        }
        if a.nilpotency_class() == Some(2) {
            let q = f3.order().unwrap();
            for _ in 0..600 {
                let rand_vec = |rng: &mut ChaCha8Rng| -> Vec<FieldElem> {
                    (0..a.dim()).map(|_| f3.fin(rng.gen_range(0..q))).collect()
                };
                let x = rand_vec(&mut rng);
                let y = rand_vec(&mut rng);
                let z = rand_vec(&mut rng);
                let inner = a.bracket(&x, &y);
                assert!(
                    a.bracket(&inner, &z).iter().all(|c| c.is_zero()),
                    "central bracket law failed"
                );
                central_triples += 1;
            }
        }
    }
    assert!(central_triples >= 10_000, "only {central_triples} triples");

    // The non-nilpotent witness: two-breadth type alone does not force
    // nilpotency.
    assert_eq!(sl2(&gf(5, 1)).nilpotency_class(), None);

    finish(8, "structural properties", start, Duration::from_secs(60));
}

#[test]
fn criterion_9_deterministic_reports() {
    let start = Instant::now();
    let strip = |s: &str| -> String {
        s.lines()
            .filter(|l| !l.contains("wall_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    for (theorem, field) in [
        ("t01", None),
        ("t03-even", None),
        ("camina-bound", None),
        ("correspondence", None),
        ("rational-camina", None),
    ] {
        let opts = CampaignOptions {
            seed: 42,
            ..CampaignOptions::default()
        };
        let a = cmd_verify(theorem, field, &opts).unwrap().to_json_string();
        let b = cmd_verify(theorem, field, &opts).unwrap().to_json_string();
        assert_eq!(strip(&a), strip(&b), "{theorem} report drifted");
        assert!(a.contains("\"seed\": 42"), "{theorem} must echo its seed");
    }
    finish(9, "deterministic reports", start, Duration::from_secs(120));
}
